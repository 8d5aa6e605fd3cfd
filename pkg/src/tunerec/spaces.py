"""Hyperparameter search-space descriptors and concrete settings."""

from dataclasses import dataclass, field

__all__ = ["HPParam", "HPSpace", "HPSetting", "svm_space"]


@dataclass(frozen=True)
class HPParam:
    """One tunable hyperparameter.

    Parameters
    ----------
    name : str
        Hyperparameter name as the learner expects it.
    type : str
        One of ``real``, ``integer``, ``categorical``.
    lo, hi : float or None
        Inclusive range bounds for real/integer parameters.
    options : tuple or None
        Choices for categorical parameters.
    scale : str
        ``linear`` or ``log2``; log2 reals are sampled as 2**u with u
        uniform on [log2(lo), log2(hi)].
    default : object
        Default value, or None when the default depends on the dataset
        (the SVM gamma default is 1/N and is resolved at fit time).
    """

    name: str
    type: str
    lo: float | None = None
    hi: float | None = None
    options: tuple | None = None
    scale: str = "linear"
    default: object = None

    def __post_init__(self):
        if self.type in ("real", "integer"):
            if self.lo is None or self.hi is None or not self.lo <= self.hi:
                raise ValueError(f"parameter {self.name!r}: empty range")
            if self.default is not None and not self.lo <= self.default <= self.hi:
                raise ValueError(f"parameter {self.name!r}: default outside range")
        elif self.type == "categorical":
            if not self.options:
                raise ValueError(f"parameter {self.name!r}: no options")
            if self.default is not None and self.default not in self.options:
                raise ValueError(f"parameter {self.name!r}: default not an option")
        else:
            raise ValueError(f"parameter {self.name!r}: unknown type {self.type!r}")

    def contains(self, value) -> bool:
        if self.type == "categorical":
            return value in self.options
        if value is None:
            return self.default is None
        if self.type == "integer" and int(value) != value:
            return False
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class HPSpace:
    """An ordered collection of :class:`HPParam`."""

    params: tuple = field(default_factory=tuple)

    def __post_init__(self):
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ValueError("duplicate parameter names")

    def __len__(self):
        return len(self.params)

    def __iter__(self):
        return iter(self.params)

    def names(self) -> list:
        return [p.name for p in self.params]

    def param(self, name: str) -> HPParam:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)

    def default_setting(self) -> "HPSetting":
        return HPSetting({p.name: p.default for p in self.params})

    def validate(self, setting: "HPSetting") -> None:
        """Raise ValueError unless every setting key is a declared
        parameter with an in-range value."""
        for name, value in setting.values.items():
            p = self.param(name)
            if not p.contains(value):
                raise ValueError(f"value {value!r} outside range of {name!r}")


@dataclass(frozen=True)
class HPSetting:
    """A concrete assignment of hyperparameter values, name -> value."""

    values: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))

    def get(self, name, default=None):
        return self.values.get(name, default)

    def __getitem__(self, name):
        return self.values[name]

    def __contains__(self, name):
        return name in self.values

    def items(self):
        return self.values.items()


def svm_space() -> HPSpace:
    """The base-level RBF SVM space: C and gamma in [2^-15, 2^15] on a
    log2 scale, defaults C=1 and gamma=1/N (N resolved per dataset)."""
    return HPSpace((
        HPParam("C", "real", 2.0 ** -15, 2.0 ** 15, scale="log2", default=1.0),
        HPParam("gamma", "real", 2.0 ** -15, 2.0 ** 15, scale="log2", default=None),
    ))
