"""Certified effective-bound calculator and exact projective geometry engine.

Submodules:

* ``magnitude``: exact integers and iterated-log10 tower intervals with
  outward-rounded, certified arithmetic.
* ``constants``: the effective-constant pipeline and the family-count bound.
* ``parshin``: the derived rational-point bound.
* ``geometry``: exact-rational projective geometry (embeddings, projections,
  plane-curve recovery) at desk scale.
* ``verify``: seeded property suites over the geometry engine.
* ``cli``: the ``bounds`` command.
"""

from .magnitude import (
    CapacityExceeded,
    DepthExceedsValue,
    IndeterminateOrder,
    Interval,
    Magnitude,
    MagnitudeError,
    OrderViolation,
    Ordering,
)
from .constants import DerivedConstants, FamilyParams, InvalidParams

__all__ = [
    "CapacityExceeded",
    "DepthExceedsValue",
    "DerivedConstants",
    "FamilyParams",
    "IndeterminateOrder",
    "Interval",
    "InvalidParams",
    "Magnitude",
    "MagnitudeError",
    "OrderViolation",
    "Ordering",
]
