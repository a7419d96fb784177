"""Moment-level quasi-definiteness criteria for a modified functional u = vL.

These work directly from v's orthogonal polynomials and the roots of the
carrier polynomial A = z^r L, with no reference to the recurrence algorithms
— which makes them independent referees for differential testing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import ComplexPoly, HermitianLaurent
from .opuc_core import SchurSequence, cd_kernel, szego_forward

# Clustering radius when grouping repeated roots of A.
ROOT_CLUSTER_RADIUS = 1e-6

# Scaled determinant threshold below which a criterion matrix counts as
# singular.
DET_TOL = 1e-8


@dataclass(frozen=True)
class RootData:
    """Roots of A with multiplicity bookkeeping.

    l[i] counts how many earlier entries equal roots[i]; derivative orders
    in the criterion matrices are exactly these counts.
    """

    roots: tuple
    l: tuple

    def __len__(self) -> int:
        return len(self.roots)


def roots_of_A(laurent: HermitianLaurent,
               cluster_radius: float = ROOT_CLUSTER_RADIUS) -> RootData:
    """Companion-matrix roots of A = z^r L, grouped into clusters.

    The root set of a self-reciprocal polynomial is stable under
    z -> 1/conj(z); numerically split double roots on the unit circle are
    re-merged by the clustering.
    """
    a = laurent.a_poly()
    raw = np.roots(np.array(list(reversed(a.coeffs)), dtype=complex))
    clusters = []  # list of lists
    for z in sorted(raw, key=lambda w: (round(w.real, 12), round(w.imag, 12))):
        for c in clusters:
            if abs(z - c[0]) <= cluster_radius * max(1.0, abs(c[0])):
                c.append(z)
                break
        else:
            clusters.append([complex(z)])
    roots = []
    ls = []
    for c in clusters:
        center = sum(c) / len(c)
        for i in range(len(c)):
            roots.append(center)
            ls.append(i)
    return RootData(tuple(roots), tuple(ls))


def _derivative_value(p: ComplexPoly, order: int, z: complex) -> complex:
    q = p
    for _ in range(order):
        q = q.deriv()
    return q(z)


def determinant_criterion(b, laurent: HermitianLaurent, n: int,
                          tol: float = DET_TOL) -> int:
    """First m in 0..n+1 whose criterion matrix M^(m) is singular, else n+2.

    M^(m) has order 2r; row i evaluates, at the i-th root of A with
    derivative order l_i, the polynomials z^k psi_{m+r} (k < r) and
    z^k psi*_{m+r} (k < r).  u = vL is quasi-definite in P_n exactly when
    the return value exceeds n+1.
    """
    seq = b if isinstance(b, SchurSequence) else SchurSequence(tuple(b))
    r = laurent.r
    fam = szego_forward(seq, n + 1 + r)
    data = roots_of_A(laurent)
    for m in range(n + 2):
        psi = fam.psi(m + r)
        star = fam.psi_star(m + r)
        cols = [psi.shift(k) for k in range(r)]
        cols += [star.shift(k) for k in range(r)]
        mat = np.array(
            [[_derivative_value(col, data.l[i], data.roots[i])
              for col in cols]
             for i in range(2 * r)], dtype=complex)
        det = np.linalg.det(mat)
        scale = 1.0
        for i in range(2 * r):
            scale *= max(np.linalg.norm(mat[i]), 1.0)
        if abs(det) <= tol * scale:
            return m
    return n + 2


def kernel_criterion_r1(b, zeta1: complex, zeta2: complex, n: int,
                        tol: float = DET_TOL) -> int:
    """Degree-1 specialization: first m in 1..n+1 with
    K_m(zeta1, 1/conj(zeta2)) ~ 0, else n+2.

    zeta1, zeta2 are the two roots of the degree-2 carrier A; u is
    quasi-definite in P_n exactly when the return value exceeds n+1.
    """
    seq = b if isinstance(b, SchurSequence) else SchurSequence(tuple(b))
    w = 1.0 / complex(zeta2).conjugate()
    fam = szego_forward(seq, n + 1)
    for j in range(n + 2):
        if fam.eps[j] == 0:
            raise ValueError("v loses quasi-definiteness at index %d, "
                             "kernel undefined" % j)
    acc = 0j
    scale = 0.0
    for m in range(n + 2):
        term = (fam.psi(m)(zeta1) * complex(fam.psi(m)(w)).conjugate()
                / fam.eps[m])
        acc += term
        scale += abs(term)
        if m >= 1 and abs(acc) <= tol * max(scale, 1.0):
            return m
    return n + 2


def mop_count_from_criterion(first_singular: int, n: int) -> int:
    """Shared normalization: a criterion scanning m <= n+1 certifies that u
    has exactly (first_singular - 1) orthogonal polynomials when a singular
    index exists, and at least n+2 of them otherwise."""
    return first_singular - 1
