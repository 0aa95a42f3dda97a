"""Prime gap and rough number statistics toolkit.

Subpackages:
  sieve      segmented prime / rough-number sieves and least-prime-factor arrays
  gaps       classification of prime gaps by their interior rough numbers
  omega      residue class sets Omega_h and the c_h constant table
  constants  twin prime constant, Mertens products, Buchstab function
  singular   singular series, Montgomery sums, pair correlations
  moments    window-count histograms, central moments, zero windows
  acceptance desk-scale verification suite
  cli        command-line front end
"""

__version__ = "1.0.0"

from .constants import (
    ConstantValue,
    buchstab_omega,
    exp_neg_gamma,
    mertens_V,
    twin_prime_constant,
    window_params,
)
from .gaps import GapRecord, GapScanReport, classify_gap, proportion_series, scan

# `omega.omega` and `singular.singular` stay namespaced; re-exporting them
# here would shadow their submodules
from .omega import OmegaSet, c_constant, ch_table, verify_class
from .sieve import RangeSpec, primes_in_range, sieve_rough
from .singular import TupleSet, montgomery_sums, pair_correlation

__all__ = [
    "ConstantValue",
    "GapRecord",
    "GapScanReport",
    "OmegaSet",
    "RangeSpec",
    "TupleSet",
    "__version__",
    "buchstab_omega",
    "c_constant",
    "ch_table",
    "classify_gap",
    "exp_neg_gamma",
    "mertens_V",
    "montgomery_sums",
    "pair_correlation",
    "primes_in_range",
    "proportion_series",
    "scan",
    "sieve_rough",
    "twin_prime_constant",
    "verify_class",
    "window_params",
]
