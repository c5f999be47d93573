"""Odd unimodal sequences: exact tables, asymptotics and limit laws.

Odd unimodal sequences are sequences of odd positive integers that weakly
increase to a marked peak and then weakly decrease. This package provides

* exact counts, peak-resolved counts, rank distributions and rank moments,
* the modular machinery behind their asymptotics (eta multiplier,
  Kloosterman sums, theta and false theta functions),
* numerical evaluation of the asymptotic series and a saddle-point model,
* a conditioned Boltzmann sampler and a goodness-of-fit suite for the
  limit laws of rank, peak and small parts.
"""

__version__ = "0.1.0"

from .errors import BoundaryError, DomainError, ResourceError, UsageError

__all__ = [
    "__version__",
    "BoundaryError",
    "DomainError",
    "ResourceError",
    "UsageError",
]
