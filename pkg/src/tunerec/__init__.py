"""Predict whether SVM hyperparameter tuning will pay off for a dataset.

The package runs a two-level pipeline: at the base level it tunes an RBF
SVM on each dataset with random search under nested cross-validation and
compares the tuned scores against default settings; at the meta level each
dataset becomes one training example, described by meta-features and
labeled ``Tuning`` or ``Defaults`` by a Wilcoxon signed-rank rule. A
meta-model trained on those examples then recommends, for a new dataset,
whether tuning is worth its cost.
"""

__version__ = "0.1.0"
