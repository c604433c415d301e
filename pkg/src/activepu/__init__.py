"""Active learning from positive and unlabeled feedback.

Simulation library: SCAR feedback oracle, exact version spaces for
thresholds, minimum-width intervals and explicit finite classes, the
known-prior and unknown-prior active learners, the rate estimator, and
baselines.  ``python -m activepu`` runs configured experiments.
"""

from .active_known_pi import run_known_pi
from .active_unknown_pi import run_unknown_pi
from .baselines import run_cal, run_passive_pu_baseline
from .estrate import estimate_rate
from .oracle import Feedback, PUOracle, QueryLedger
from .passive_pu import learn_pu
from .rng import RngStream
from .runtime import Caps, Constants, RunResult
from .scenario import Gaussian1D, Mixture, Scenario, Uniform, UniformBox, true_error

__version__ = "0.1.0"

__all__ = [
    "Caps", "Constants", "Feedback", "Gaussian1D", "Mixture", "PUOracle", "QueryLedger",
    "RngStream", "RunResult", "Scenario", "Uniform", "UniformBox", "estimate_rate", "learn_pu",
    "run_cal", "run_known_pi", "run_passive_pu_baseline", "run_unknown_pi", "true_error",
]
