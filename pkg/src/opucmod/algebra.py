"""Dense complex polynomial arithmetic and the 2x2 matrix shapes the
recurrence algorithms live on.

Polynomials are stored with ascending powers and exact trailing zeros
trimmed; every operation that depends on an ambient space P_n (reversal,
self-reciprocality, basis decomposition) takes n explicitly instead of
guessing it from the stored length.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

DEFAULT_TOL = 1e-10

# Ceiling for the structural identities re-verified inside every recurrence
# step.  It exists to catch implementation bugs, not to police conditioning:
# near the non-quasi-definite set the forced parameters blow up and honest
# runs accumulate residuals many orders above DEFAULT_TOL.  Callers judge
# accuracy from the per-step residuals carried in the reports.
STRUCT_GUARD = 1e-3

# Pivot-ratio threshold above which the elimination warns about conditioning.
PIVOT_RATIO_LIMIT = 1e12


def _trim(coeffs) -> tuple:
    """Drop exactly-zero trailing coefficients (never tolerance-based)."""
    out = [complex(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class ComplexPoly:
    """Immutable dense polynomial over the complex numbers.

    The zero polynomial has degree -1 and an empty coefficient tuple, which
    keeps reversal and determinant code free of special cases.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[complex] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexPoly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls) -> "ComplexPoly":
        return cls(())

    @classmethod
    def one(cls) -> "ComplexPoly":
        return cls((1,))

    @classmethod
    def monomial(cls, k: int, scale: complex = 1.0) -> "ComplexPoly":
        return cls((0,) * k + (scale,))

    @classmethod
    def const(cls, c: complex) -> "ComplexPoly":
        return cls((c,))

    def coeff(self, k: int) -> complex:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0j

    @property
    def lead(self) -> complex:
        return self.coeffs[-1] if self.coeffs else 0j

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return ComplexPoly(
            tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return ComplexPoly(
            tuple(self.coeff(k) - other.coeff(k) for k in range(n)))

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            if not self.coeffs or not other.coeffs:
                return ComplexPoly.zero()
            out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return ComplexPoly(out)
        return ComplexPoly(tuple(other * c for c in self.coeffs))

    __rmul__ = __mul__

    def shift(self, k: int) -> "ComplexPoly":
        """Multiply by z^k."""
        if not self.coeffs:
            return self
        return ComplexPoly((0,) * k + self.coeffs)

    def deriv(self) -> "ComplexPoly":
        return ComplexPoly(
            tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def conj_coeffs(self) -> "ComplexPoly":
        return ComplexPoly(tuple(c.conjugate() for c in self.coeffs))

    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def divide_z(self, tol: float = DEFAULT_TOL) -> "ComplexPoly":
        """Exact division by z; errors if the constant term is not ~0."""
        if abs(self.coeff(0)) > tol * max(1.0, self.max_abs()):
            raise ValueError("polynomial not divisible by z: p(0) = %r"
                             % self.coeff(0))
        return ComplexPoly(self.coeffs[1:])

    def __repr__(self) -> str:
        return "ComplexPoly(%r)" % (list(self.coeffs),)


def poly_dist(p: ComplexPoly, q: ComplexPoly) -> float:
    """Max coefficient-wise distance, aligning lengths."""
    n = max(len(p.coeffs), len(q.coeffs))
    return max((abs(p.coeff(k) - q.coeff(k)) for k in range(n)), default=0.0)


def reverse(p: ComplexPoly, n: int) -> ComplexPoly:
    """Reversal in P_n: z^n * conj(p)(1/z); coefficient k becomes
    conj(coefficient n-k).  An involution on P_n."""
    if n < p.degree:
        raise ValueError(
            "reversal level n=%d below polynomial degree %d" % (n, p.degree))
    return ComplexPoly(tuple(p.coeff(n - k).conjugate() for k in range(n + 1)))


def is_self_reciprocal(p: ComplexPoly, n: int, tol: float = DEFAULT_TOL) -> bool:
    """True when p equals its own reversal in P_n (relative to max coeff)."""
    if not p.coeffs:
        return True
    return poly_dist(p, reverse(p, n)) <= tol * p.max_abs()


def proportional(p: ComplexPoly, q: ComplexPoly,
                 tol: float = DEFAULT_TOL) -> Optional[float]:
    """Real factor lam with p = lam*q, or None.

    lam is read off at q's largest-magnitude coefficient; a complex or
    inconsistent factor yields None.
    """
    if not q.coeffs:
        return 1.0 if not p.coeffs else None
    idx = max(range(len(q.coeffs)), key=lambda k: abs(q.coeffs[k]))
    lam = p.coeff(idx) / q.coeffs[idx]
    scale = max(p.max_abs(), abs(lam) * q.max_abs(), 1.0)
    if poly_dist(p, lam * q) > tol * scale:
        return None
    if abs(lam.imag) > tol * max(abs(lam), 1.0):
        return None
    return lam.real


def solve_linear(matrix: Sequence[Sequence[complex]],
                 rhs: Sequence[complex],
                 tol: float = DEFAULT_TOL):
    """Gaussian elimination with partial pivoting on complex scalars.

    Returns the solution vector.  Raises ValueError on a (numerically)
    singular system; warns when the pivot ratio exceeds PIVOT_RATIO_LIMIT.
    """
    n = len(rhs)
    a = [[complex(matrix[i][j]) for j in range(n)] + [complex(rhs[i])]
         for i in range(n)]
    scale = max((abs(a[i][j]) for i in range(n) for j in range(n)),
                default=0.0)
    pivots = []
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(a[i][col]))
        if abs(a[piv][col]) <= tol * max(scale, 1.0):
            raise ValueError("singular linear system (pivot %d ~ 0)" % col)
        a[col], a[piv] = a[piv], a[col]
        pivots.append(abs(a[col][col]))
        for i in range(col + 1, n):
            f = a[i][col] / a[col][col]
            if f == 0:
                continue
            for j in range(col, n + 1):
                a[i][j] -= f * a[col][j]
    ratio = max(pivots) / min(pivots)
    if ratio > PIVOT_RATIO_LIMIT:
        warnings.warn(
            "ill-conditioned system: pivot ratio %.3e" % ratio,
            RuntimeWarning, stacklevel=2)
    x = [0j] * n
    for i in range(n - 1, -1, -1):
        acc = a[i][n]
        for j in range(i + 1, n):
            acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return x


@dataclass(frozen=True)
class HermitianLaurent:
    """The modification L = P + P_* carried by the coefficients of P.

    P has degree r >= 1 and real constant term, so L is hermitian
    (real-valued on the unit circle) with Laurent coefficients
    alpha_j = p_j (j >= 1), alpha_0 = 2 p_0, alpha_{-j} = conj(p_j).
    """

    p: ComplexPoly

    def __post_init__(self):
        if self.p.degree < 1:
            raise ValueError("modification degree r must be >= 1")
        if abs(self.p.coeff(0).imag) > DEFAULT_TOL * max(1.0, self.p.max_abs()):
            raise ValueError("P(0) must be real, got %r" % self.p.coeff(0))

    @property
    def r(self) -> int:
        return self.p.degree

    @property
    def alpha(self) -> complex:
        """Leading coefficient of P (and of A = z^r L)."""
        return self.p.lead

    def laurent_coeff(self, j: int) -> complex:
        if j == 0:
            return 2 * self.p.coeff(0).real
        if j > 0:
            return self.p.coeff(j)
        return self.p.coeff(-j).conjugate()

    def a_poly(self) -> ComplexPoly:
        """A = z^r L, the self-reciprocal carrier polynomial of degree 2r."""
        r = self.r
        return ComplexPoly(
            tuple(self.laurent_coeff(k - r) for k in range(2 * r + 1)))

    @classmethod
    def from_a_poly(cls, a: ComplexPoly,
                    tol: float = DEFAULT_TOL) -> "HermitianLaurent":
        """Rebuild L from a self-reciprocal A of even degree 2r."""
        if a.degree < 2 or a.degree % 2 != 0:
            raise ValueError("carrier polynomial must have even degree >= 2")
        if not is_self_reciprocal(a, a.degree, tol):
            raise ValueError("carrier polynomial is not self-reciprocal")
        r = a.degree // 2
        mid = a.coeff(r)
        p = [mid.real / 2.0] + [a.coeff(r + j) for j in range(1, r + 1)]
        return cls(ComplexPoly(p))

    def __repr__(self) -> str:
        return "HermitianLaurent(P=%r)" % (list(self.p.coeffs),)


# ---------------------------------------------------------------------------
# 2x2 polynomial matrices

Mat2 = list  # [[ComplexPoly, ComplexPoly], [ComplexPoly, ComplexPoly]]


def mat2(p11, p12, p21, p22) -> Mat2:
    return [[p11, p12], [p21, p22]]


def mat2_const(m11: complex, m12: complex, m21: complex, m22: complex) -> Mat2:
    c = ComplexPoly.const
    return mat2(c(m11), c(m12), c(m21), c(m22))


def mat2_mul(a: Mat2, b: Mat2) -> Mat2:
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)]
            for i in range(2)]


def mat2_scale(a: Mat2, s: complex) -> Mat2:
    return [[s * a[i][j] for j in range(2)] for i in range(2)]


def mat2_dist(a: Mat2, b: Mat2) -> float:
    return max(poly_dist(a[i][j], b[i][j]) for i in range(2) for j in range(2))


def mat2_max_abs(a: Mat2) -> float:
    return max(a[i][j].max_abs() for i in range(2) for j in range(2))


@dataclass(frozen=True)
class JMatrix:
    """Structured matrix [[C, D], [z D*, C*]] with deg C = r, deg D <= r-1.

    Reversals are taken at levels r (for C) and r-1 (for D); the determinant
    C C* - z D D* is then self-reciprocal of degree 2r.  Regularity means
    C(0) != 0.
    """

    c: ComplexPoly
    d: ComplexPoly
    r: int

    def __post_init__(self):
        if self.c.degree != self.r:
            raise ValueError(
                "C must have degree exactly r=%d, got %d" % (self.r,
                                                             self.c.degree))
        if self.d.degree > self.r - 1:
            raise ValueError(
                "D must lie in P_%d, got degree %d" % (self.r - 1,
                                                       self.d.degree))

    @property
    def c_star(self) -> ComplexPoly:
        return reverse(self.c, self.r)

    @property
    def d_star(self) -> ComplexPoly:
        return reverse(self.d, self.r - 1)

    @property
    def c0(self) -> complex:
        return self.c.coeff(0)

    def is_regular(self, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.c0) > tol * max(self.c.max_abs(), 1.0)

    def entries(self) -> Mat2:
        return mat2(self.c, self.d, self.d_star.shift(1), self.c_star)

    def tilde(self) -> Mat2:
        """Companion shape [[C, z D], [D*, C*]] used by the one-step updates."""
        return mat2(self.c, self.d.shift(1), self.d_star, self.c_star)

    def det(self) -> ComplexPoly:
        return jmatrix_det(self.c, self.d, self.r)

    def apply(self, pair) -> tuple:
        """Matrix action on a column (f, g): returns (Cf + Dg, zD*f + C*g)."""
        f, g = pair
        return (self.c * f + self.d * g,
                self.d_star.shift(1) * f + self.c_star * g)


def jmatrix_det(c: ComplexPoly, d: ComplexPoly, r: int) -> ComplexPoly:
    """det [[C, D],[z D*, C*]] = C C* - z D D* (self-reciprocal, degree 2r)."""
    return c * reverse(c, r) - (d * reverse(d, r - 1)).shift(1)


def decompose_in_mop_basis(omega: ComplexPoly, psi_r: ComplexPoly, r: int,
                           tol: float = DEFAULT_TOL):
    """Unique (C, D) with Omega = C psi_r + D psi_r*, C in P_r, D in P_{r-1}.

    Well-posed whenever psi_r is a monic orthogonal polynomial of a
    quasi-definite functional (psi_r and psi_r* are then coprime); a shared
    root makes the (2r+1)^2 coefficient system singular.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if psi_r.degree != r:
        raise ValueError("psi_r must have degree exactly r")
    if omega.degree > 2 * r:
        raise ValueError("Omega must lie in P_{2r}")
    star = reverse(psi_r, r)
    n = 2 * r + 1
    # Column k (k <= r): coefficients of z^k psi_r; column r+1+k: z^k psi_r*.
    cols = [psi_r.shift(k) for k in range(r + 1)]
    cols += [star.shift(k) for k in range(r)]
    matrix = [[cols[j].coeff(i) for j in range(n)] for i in range(n)]
    rhs = [omega.coeff(i) for i in range(n)]
    try:
        x = solve_linear(matrix, rhs, tol)
    except ValueError as exc:
        raise ValueError(
            "decomposition is singular: psi_r and psi_r* share a root "
            "(input is not an MOP of a quasi-definite functional)") from exc
    c = ComplexPoly(x[:r + 1])
    d = ComplexPoly(x[r + 1:])
    return c, d
