"""Verified connecting orbits of A'' + A'/r - A/(4r^2) = A - A^3.

Thin wrapper over the C++ library. ``prove_orbit`` and ``prove_all`` are
rigorous; ``simulate``, ``scan_brackets`` and ``bisect_candidates`` are
floating-point only.
"""

from ._conefield import *  # noqa: F401,F403
from ._conefield import (
    Interval,
    OrbitCandidate,
    ProofConfig,
    ProofSettings,
    Verdict,
    default_candidates,
    prove_all,
    prove_orbit,
)

__all__ = [
    "Interval",
    "OrbitCandidate",
    "ProofConfig",
    "ProofSettings",
    "Verdict",
    "default_candidates",
    "prove_all",
    "prove_orbit",
]
