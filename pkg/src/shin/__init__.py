"""RM values of the Shintani-Faddeev modular cocycle, the samech invariant,
and differenced partial-zeta derivatives for real quadratic data."""

from .cocycle import (
    RMValue, shin_rm, shin_rm_power, shin_rm_via_limit, shin_rational_tau,
    shin_tau, varpi_r_lifted, verify_rm_identities,
)
from .modgroup import CharVec, Mat2, cycle_data, hj_expand, reduce_pair
from .qfield import QuadVal, parse_quad
from .special import dsine, varpi_r
from .zeta import ZetaReport, z_prime

__all__ = [
    "CharVec", "Mat2", "QuadVal", "RMValue", "ZetaReport", "cycle_data",
    "dsine", "hj_expand", "parse_quad", "reduce_pair", "shin_rational_tau",
    "shin_rm", "shin_rm_power", "shin_rm_via_limit", "shin_tau",
    "varpi_r", "varpi_r_lifted", "verify_rm_identities", "z_prime",
]

__version__ = "0.1.0"
