"""All MOP pairs tied by constant polynomial coefficients,

    psi_{n+r} = X phi_n + Y phi_n*,   X monic in P_r, Y in P_{r-1}, n >= 0,

i.e. the fixed points of the (X_n, Y_n) dynamics run by the inverse problem.
Away from one exceptional family the solutions are exactly the pairs with
constant Schur parameters a_n = a on the u side and (b_1..b_r, b, b, ...) on
the v side, with b and Y forced by a and the head.  The exception is r = 1
with X = z - 1, where a whole perpendicular-bisector family appears and the
u-side parameters may vary freely along a line.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional

from .algebra import (
    DEFAULT_TOL,
    STRUCT_GUARD,
    ComplexPoly,
    HermitianLaurent,
    poly_dist,
    reverse,
)
from .opuc_core import SchurSequence, szego_forward


def _divide_linear(p: ComplexPoly, zeta: complex) -> tuple:
    """Synthetic division p = (z - zeta) q + rem; returns (q, rem)."""
    coeffs = list(p.coeffs)
    if not coeffs:
        return ComplexPoly.zero(), 0j
    q = [0j] * max(len(coeffs) - 1, 0)
    acc = coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        q[k] = acc
        acc = coeffs[k] + zeta * acc
    return ComplexPoly(q), acc


@dataclass(frozen=True)
class ConstantSolution:
    """A constant-coefficient pair: u has Schur parameters (a, a, ...), v has
    (b_1..b_r, b, b, ...), and psi_{n+r} = X phi_n + Y phi_n* for all n."""

    r: int
    a: complex
    b_head: tuple
    b_tail: complex
    x: ComplexPoly
    y: ComplexPoly
    zeta: complex

    def __post_init__(self):
        object.__setattr__(self, "b_head",
                           tuple(complex(b) for b in self.b_head))
        if len(self.b_head) != self.r:
            raise ValueError("head must hold b_1..b_r (r=%d)" % self.r)
        if self.x.degree != self.r:
            raise ValueError("X must have degree exactly r=%d" % self.r)
        if abs(self.x.lead - 1.0) > STRUCT_GUARD * max(self.x.max_abs(), 1.0):
            raise ValueError("X must be monic, leading coeff %r" % self.x.lead)
        if self.y.degree > self.r - 1:
            raise ValueError("Y must lie in P_%d" % (self.r - 1))
        if abs(abs(self.zeta) - 1.0) > STRUCT_GUARD:
            raise ValueError("zeta must sit on the unit circle")
        if abs(abs(self.b_tail) - abs(self.a)) > STRUCT_GUARD * max(
                abs(self.a), 1.0):
            raise ValueError("|b| = |a| fails: %r vs %r" % (self.b_tail,
                                                            self.a))
        scale = max(self.y.max_abs(), 1.0)
        # conj(a) Y = b Y*: Y is a unit-factor multiple of a self-reciprocal
        # polynomial (the first of the two equations the pair must satisfy).
        sym = poly_dist(complex(self.a).conjugate() * self.y,
                        complex(self.b_tail) * self.y_star)
        if sym > STRUCT_GUARD * scale:
            raise ValueError("conj(a) Y = b Y* fails (residual %.3e)" % sym)
        psi_r = szego_forward(self.b_head, self.r).psi(self.r)
        gap = poly_dist(psi_r, self.x + self.y)
        if gap > STRUCT_GUARD * max(psi_r.max_abs(), 1.0):
            raise ValueError("psi_r = X + Y fails (residual %.3e)" % gap)

    @property
    def x_star(self) -> ComplexPoly:
        return reverse(self.x, self.r)

    @property
    def y_star(self) -> ComplexPoly:
        return reverse(self.y, self.r - 1)

    @property
    def psi_r(self) -> ComplexPoly:
        return self.x + self.y

    def u_schur(self, n: int) -> SchurSequence:
        """u's parameters (a, a, ...) out to length n."""
        return SchurSequence((self.a,) * n)

    def v_schur(self, n: int) -> SchurSequence:
        """v's parameters (b_1..b_r, b, b, ...) out to length n."""
        if n <= self.r:
            return SchurSequence(self.b_head[:n])
        return SchurSequence(self.b_head + (self.b_tail,) * (n - self.r))

    def a_carrier(self) -> ComplexPoly:
        """X X* - z Y Y*: the self-reciprocal carrier of the modification
        tying the two functionals, up to a real factor."""
        return (self.x * self.x_star
                - (self.y * self.y_star).shift(1))


def constant_solution(a: complex, b_head,
                      tol: float = DEFAULT_TOL) -> ConstantSolution:
    """The unique (X, Y, b) with psi_{n+r} = X phi_n + Y phi_n* for the
    constant u-side parameter a and the free head b_1..b_r.

    The two polynomial equations collapse, once X is eliminated, to

        a psi_r - b psi_r* = [z (1 - conj(a)) - (1 - a)] Y,

    which pins zeta = (1 - a)/(1 - conj(a)) on the unit circle, then
    b = a psi_r(zeta)/psi_r*(zeta), and Y as the divided difference of
    psi_r, psi_r* at zeta.  a = 0 gives the Y = 0 branch (u Lebesgue,
    psi_{n+r} = z^n psi_r).  For real a the formula collapses to zeta = 1.
    """
    a = complex(a)
    head = tuple(complex(b) for b in b_head)
    r = len(head)
    if r < 1:
        raise ValueError("need at least one head parameter")
    if abs(abs(a) - 1.0) <= tol:
        raise ValueError("|a| = 1 is excluded (quasi-definiteness)")
    for j, b in enumerate(head):
        if abs(abs(b) - 1.0) <= tol:
            raise ValueError("|b_%d| = 1 is excluded" % (j + 1))
    family = szego_forward(head, r)
    psi_r = family.psi(r)
    psi_r_star = family.psi_star(r)
    if a == 0:
        return ConstantSolution(r, 0j, head, 0j, psi_r,
                                ComplexPoly.zero(), 1.0 + 0j)
    zeta = (1.0 - a) / (1.0 - a.conjugate())
    star_val = psi_r_star(zeta)
    if abs(star_val) <= tol * max(psi_r_star.max_abs(), 1.0):
        raise ValueError("psi_r* vanishes at zeta=%r; a genuine MOP family "
                         "cannot do this on the unit circle" % zeta)
    b = a * psi_r(zeta) / star_val
    num = star_val * psi_r - psi_r(zeta) * psi_r_star
    quot, rem = _divide_linear(num, zeta)
    if abs(rem) > 1e-10 * max(num.max_abs(), 1.0):
        raise ValueError("divided difference left a remainder %.3e; "
                         "inconsistent inputs" % abs(rem))
    y = (a / ((1.0 - a.conjugate()) * star_val)) * quot
    x = psi_r - y
    # The eliminated equation, re-checked on the finished polynomials.
    resid = poly_dist(a * psi_r - b * psi_r_star,
                      (1.0 - a.conjugate()) * y.shift(1) - (1.0 - a) * y)
    if resid > STRUCT_GUARD * max(psi_r.max_abs(), 1.0):
        raise ValueError("eliminated-equation residual %.3e" % resid)
    return ConstantSolution(r, a, head, b, x, y, zeta)


def verify_constant_relation(sol: ConstantSolution, n_max: int,
                             tol: float = DEFAULT_TOL) -> float:
    """Max relative residual of psi_{n+r} - X phi_n - Y phi_n* over
    n = 0..n_max, with both families rebuilt from their Schur parameters."""
    u_fam = szego_forward(sol.u_schur(n_max), n_max)
    v_fam = szego_forward(sol.v_schur(n_max + sol.r), n_max + sol.r)
    worst = 0.0
    for n in range(n_max + 1):
        psi = v_fam.psi(n + sol.r)
        built = sol.x * u_fam.psi(n) + sol.y * u_fam.psi_star(n)
        worst = max(worst,
                    poly_dist(psi, built) / max(psi.max_abs(), 1.0))
    return worst


def bisector_family_step(b1: complex, a_n: complex,
                         tol: float = DEFAULT_TOL) -> complex:
    """One step of the exceptional r = 1 family with X = z - 1, Y = y = 1 + b_1:
    a_n may be any point of the perpendicular bisector of [0, y] off the unit
    circle, and b_{n+1} is its mirror image across the line through 0 and y.

    Every pair produced this way satisfies conj(a_n) y = b_{n+1} conj(y) and
    a_n + b_{n+1} = y, which is exactly the constant-coefficient system for
    X = z - 1.
    """
    b1 = complex(b1)
    a_n = complex(a_n)
    y = 1.0 + b1
    if abs(abs(b1) - 1.0) <= tol:
        raise ValueError("|b_1| = 1 is excluded")
    if abs(y) <= tol:
        raise ValueError("b_1 = -1 gives y = 0: no bisector family")
    if abs(abs(a_n) - abs(a_n - y)) > tol * max(abs(y), 1.0):
        raise ValueError("a_n=%r is off the perpendicular bisector of "
                         "[0, %r]" % (a_n, y))
    if abs(abs(a_n) - 1.0) <= tol:
        raise ValueError("|a_n| = 1 is excluded")
    b_next = a_n.conjugate() * y / y.conjugate()
    if abs(a_n + b_next - y) > STRUCT_GUARD * max(abs(y), 1.0):
        raise ValueError("reflection failed the a + b = y identity")
    return b_next


@dataclass(frozen=True)
class R1Verdict:
    """Admissibility verdict for r = 1 coefficients X = z + x, Y = y."""

    admissible: bool
    family: Optional[str]  # "bisector" | "generic" | None
    reason: str
    b1: Optional[complex] = None
    a: Optional[complex] = None


def r1_admissibility(x: complex, y: complex,
                     tol: float = DEFAULT_TOL) -> R1Verdict:
    """Decide whether X = z + x, Y = y are the coefficients of some genuine
    pair, and recover (b_1, a) when they are.

    x = -1 routes to the bisector family (b_1 = y - 1, a free along the
    bisector).  Otherwise x must avoid the unit circle, b_1 = x + y must
    avoid it too, and |y| must differ from |1 - |x|^2| / |1 + x|, which
    would put |a| = 1.
    """
    x = complex(x)
    y = complex(y)
    if abs(x + 1.0) <= tol:
        b1 = y - 1.0
        if abs(abs(b1) - 1.0) <= tol:
            return R1Verdict(False, None,
                             "bisector route puts b_1 = y - 1 on the unit "
                             "circle")
        return R1Verdict(True, "bisector",
                         "X = z - 1: a sweeps the perpendicular bisector "
                         "of [0, y]", b1=b1)
    if abs(abs(x) - 1.0) <= tol:
        return R1Verdict(False, None, "x on the unit circle (and x != -1)")
    b1 = x + y
    if abs(abs(b1) - 1.0) <= tol:
        return R1Verdict(False, None, "b_1 = x + y lands on the unit circle")
    denom = 1.0 - abs(x) ** 2
    if abs(abs(y) - abs(denom / (1.0 + x))) <= tol:
        return R1Verdict(False, None, "|a| = 1: y sits on the excluded "
                                      "radius |1 - |x|^2| / |1 + x|")
    a = y * (1.0 + x.conjugate()) / denom
    return R1Verdict(True, "generic", "constant pair (a, a, ...) against "
                                      "(b_1, b, b, ...)", b1=b1, a=a)


@dataclass(frozen=True)
class DegreeDropReport:
    """Whether the modification tying u and v drops below degree r, and the
    effective degree s (the largest head index with b_s != b; 0 when the
    whole head already equals the tail)."""

    drop: bool
    effective_degree: int
    ratios: tuple  # a psi_j(zeta)/psi_j*(zeta) for j = 0..r
    ratios_stable: bool  # all ratios with j >= effective degree equal b


def degree_drop_test(sol: ConstantSolution,
                     tol: float = DEFAULT_TOL) -> DegreeDropReport:
    """Detect deg P < r through the equivalent fingerprints X(0) = 0,
    Y(0) = b_r and b = b_r, and report where the Schur-parameter ratio
    a psi_j(zeta)/psi_j*(zeta) locks onto b (it does for all j >= deg P)."""
    scale = max(sol.x.max_abs(), 1.0)
    drop = abs(sol.x.coeff(0)) <= tol * scale
    b_r = sol.b_head[-1]
    agree_tail = abs(sol.b_tail - b_r) <= tol * max(abs(b_r), 1.0)
    agree_y = abs(sol.y.coeff(0) - b_r) <= tol * max(abs(b_r), 1.0)
    if drop != agree_tail or drop != agree_y:
        raise ValueError("drop fingerprints disagree: X(0)~0 is %r, "
                         "b = b_r is %r, Y(0) = b_r is %r"
                         % (drop, agree_tail, agree_y))
    s = sol.r
    while s >= 1 and abs(sol.b_head[s - 1] - sol.b_tail) <= tol * max(
            abs(sol.b_tail), 1.0):
        s -= 1
    family = szego_forward(sol.b_head, sol.r)
    ratios = []
    for j in range(sol.r + 1):
        star_val = family.psi_star(j)(sol.zeta)
        if abs(star_val) <= tol:
            ratios.append(complex("nan"))
            continue
        ratios.append(sol.a * family.psi(j)(sol.zeta) / star_val)
    stable = all(abs(q - sol.b_tail) <= 1e-8 * max(abs(sol.b_tail), 1.0)
                 for q in ratios[s:])
    return DegreeDropReport(drop, s, tuple(ratios), stable)


def modification_of(sol: ConstantSolution,
                    tol: float = DEFAULT_TOL) -> HermitianLaurent:
    """The hermitian Laurent modification L with u = vL (up to the real
    scale fixed by the moment normalization), rebuilt from the carrier
    X X* - z Y Y* with any degree drop stripped off honestly."""
    raw = sol.a_carrier()
    scale = max(raw.max_abs(), 1.0)
    # A degree drop leaves matching numerically-zero coefficients at both
    # ends (the carrier stays self-reciprocal); strip them in pairs.
    coeffs = list(raw.coeffs)
    while coeffs and abs(coeffs[-1]) <= tol * scale:
        coeffs.pop()
    low = 0
    while low < len(coeffs) and abs(coeffs[low]) <= tol * scale:
        low += 1
    carrier = ComplexPoly(coeffs[low:])
    if carrier.degree == 0:
        raise ValueError("modification collapses to a constant: u and v "
                         "coincide up to scale (b_n = a for every n)")
    return HermitianLaurent.from_a_poly(carrier, tol)
