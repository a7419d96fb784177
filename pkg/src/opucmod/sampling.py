"""Seeded random problem instances for differential checks.

Every generator takes a numpy Generator, so a fixed seed reproduces the
same instances byte for byte.  The paired generator rejects draws whose
modified functional passes too close to the non-quasi-definite set --
judged at the moment level, independently of the recurrence algorithms --
because differential agreement bounds are only meaningful away from that
set.  Exactly-degenerate cases are constructed by hand in the tests, not
sampled.
"""

from __future__ import annotations

import numpy as np

from .algebra import ComplexPoly, HermitianLaurent
from .opuc_core import apply_laurent, moments_to_schur, schur_to_moments

# Reject an instance once a successive eps ratio of the modified functional
# dips below this; past it the forced parameters blow up and floating-point
# agreement between algorithm variants degrades for conditioning reasons,
# not correctness ones.  (At 0.05 the worst pairwise deviation over a
# hundred horizon-10 instances creeps above 1e-8; at 0.2 it stays near
# 1e-9.)
EPS_RATIO_FLOOR = 0.2


def disk_point(rng: np.random.Generator, radius: float = 0.85) -> complex:
    """Uniform draw from the closed disk of the given radius."""
    while True:
        z = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
        if abs(z) <= 1.0:
            return radius * z


def schur_params(rng: np.random.Generator, n: int,
                 radius: float = 0.85) -> list:
    return [disk_point(rng, radius) for _ in range(n)]


def laurent_modification(rng: np.random.Generator, r: int,
                         lead_min: float = 0.3) -> HermitianLaurent:
    """Random degree-r modification: real constant term, leading coefficient
    bounded away from zero."""
    coeffs = [complex(rng.uniform(-1.0, 1.0))]
    coeffs += [disk_point(rng, 1.0) for _ in range(r - 1)]
    phase = rng.uniform(0.0, 2.0 * np.pi)
    coeffs.append(rng.uniform(lead_min, 1.0)
                  * complex(np.cos(phase), np.sin(phase)))
    return HermitianLaurent(ComplexPoly(coeffs))


def modified_pair(rng: np.random.Generator, r: int, n: int,
                  radius: float = 0.85, floor: float = EPS_RATIO_FLOOR,
                  max_tries: int = 500):
    """(v params, modification) with u = vL comfortably quasi-definite.

    Returns (b, laurent, mu): n + r parameters of v, the modification, and
    u's moments through mu_n.  v is quasi-definite by construction (the
    parameters live in a strict sub-disk); u is vetted by extracting its
    eps ladder from the moments and requiring |mu_0| and every ratio
    |eps_j / eps_{j-1}|, j <= n, to clear `floor`.
    """
    for _ in range(max_tries):
        b = schur_params(rng, n + r, radius)
        laurent = laurent_modification(rng, r)
        mu = apply_laurent(schur_to_moments(b), laurent)
        if abs(mu.values[0]) < floor:
            continue
        extraction = moments_to_schur(mu)
        if extraction.stop_index is not None:
            continue
        worst = min(abs(extraction.eps[j] / extraction.eps[j - 1])
                    for j in range(1, n + 1))
        if worst < floor:
            continue
        return b, laurent, mu
    raise RuntimeError("no acceptable instance in %d tries (r=%d, n=%d)"
                       % (max_tries, r, n))
