"""Evolve diverse easy/hard Euclidean TSP instances for 2-OPT and study their features."""

import json as _json

from . import _core
from ._core import (
    BudgetError,
    CapacityError,
    OracleError,
    ParseError,
    SvmModel,
    TspInstance,
    ValidationError,
    compute_features,
    distance,
    exact_optimum,
    feature_bound,
    feature_names,
    prune_indices,
    random_instance,
    read_instance,
    single_feature_contributions,
    solve,
    tour_length,
    train_svm,
    training_accuracy,
    two_opt,
    weighted_contributions,
    write_instance,
)


def evolve(config):
    """Run one EA from a config dict (same keys as a run entry plus ``seed``)."""
    return _core._evolve_json(_json.dumps(config))


__all__ = [
    "BudgetError",
    "CapacityError",
    "OracleError",
    "ParseError",
    "SvmModel",
    "TspInstance",
    "ValidationError",
    "compute_features",
    "distance",
    "evolve",
    "exact_optimum",
    "feature_bound",
    "feature_names",
    "prune_indices",
    "random_instance",
    "read_instance",
    "single_feature_contributions",
    "solve",
    "tour_length",
    "train_svm",
    "training_accuracy",
    "two_opt",
    "weighted_contributions",
    "write_instance",
]
