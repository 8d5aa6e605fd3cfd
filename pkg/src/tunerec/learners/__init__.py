"""From-scratch classifiers used anywhere in the pipeline: the
base-level RBF SVM (SMO solver) plus CART, random forest, kNN, naive
Bayes, a linear model, a decision stump, and two baseline anchors."""

from .base import (
    LEARNER_KINDS,
    LearnerSpec,
    BaseClassifier,
    declared_space,
    make_learner,
    save_model,
    load_model,
)
from .svm import SMOSVC, BinarySMO, SMOConvergenceWarning
from .tree import DecisionTreeClassifier, DecisionStump
from .forest import RandomForestClassifier
from .neighbors import KNeighborsClassifier
from .naive_bayes import GaussianNB
from .linear import LogisticRegressionGD
from .baselines import ConstantClassifier, RandomClassifier

__all__ = [
    "LEARNER_KINDS",
    "LearnerSpec",
    "BaseClassifier",
    "declared_space",
    "make_learner",
    "save_model",
    "load_model",
    "SMOSVC",
    "BinarySMO",
    "SMOConvergenceWarning",
    "DecisionTreeClassifier",
    "DecisionStump",
    "RandomForestClassifier",
    "KNeighborsClassifier",
    "GaussianNB",
    "LogisticRegressionGD",
    "ConstantClassifier",
    "RandomClassifier",
]
