"""Output-coupler quantum statistics under Milburn's intrinsic decoherence.

Closed-form photon/atom observables (:mod:`atomlaser.analytic`) with two
independent numerical checks: a Poisson branch sum in the Heisenberg
picture (:mod:`atomlaser.heisenberg`) and a truncated Fock-space Kraus
evolution (:mod:`atomlaser.fock`).
"""

from .analytic import (
    mandel_q,
    mean_numbers,
    number_variances,
    observables,
    squeezing_exact,
    squeezing_large_gamma,
    stationary_values,
)
from .observables import ObservablePoint
from .params import (
    UNITARY_LIMIT,
    GaussianMoments,
    ModelParams,
    TimeGrid,
    envelope,
    squeezed_vacuum_moments,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "UNITARY_LIMIT",
    "ModelParams",
    "TimeGrid",
    "GaussianMoments",
    "ObservablePoint",
    "validate_params",
    "squeezed_vacuum_moments",
    "envelope",
    "mean_numbers",
    "number_variances",
    "mandel_q",
    "squeezing_exact",
    "squeezing_large_gamma",
    "stationary_values",
    "observables",
]
