"""Homophily and contagion simulation laboratory."""

import json

from ._core import (
    CausalDag,
    InsufficientDataError,
    SingularDesignError,
    SocialNetwork,
    __version__,
    asymmetry_fit,
    contagion_panel,
    halves_test,
    latent_trend_panel,
    logistic_irls,
    matched_control_network,
    nomination_network,
    ols,
    planted_partition_network,
    sample_latent_uniform,
    spurious_coefficient,
    uniform_nomination_network,
    voter_run,
)
from ._core import run_experiment as _run_experiment


def run_experiment(kind, **overrides):
    """Run an experiment with config overrides (e.g. n=100, replications=20, seed=3)."""
    values = {k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in overrides.items()}
    return json.loads(_run_experiment(kind, values))
