"""MOP families whose associated polynomials (the MOP obtained by dropping
the first Schur parameter) belong to a degree-1 modification of the original
functional.

Writing v for the original functional with parameters (b_n) and u for the
functional of the associated family, a_n = b_{n+1}, the requirement u = vL
with L = P + P_*, P(z) = alpha z + beta, forces

    a_{n+1} = lam^n a_1,   lam = w / conj(w),   w = (b_1 - 1) + a_1 (conj(b_1) - 1),

so v's parameters are (b_1, a_1, a_1 lam, a_1 lam^2, ...) and the whole family
is parametrized by b_1 and a_1 off the unit circle with a_1 != b_1.  The
connection matrices are first-degree J-matrices with a constant real diagonal
term c_0 (a pure scale) and off-diagonal d_n = lam^n d_0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    DEFAULT_TOL,
    STRUCT_GUARD,
    ComplexPoly,
    HermitianLaurent,
    JMatrix,
    mat2_const,
    mat2_dist,
    mat2_max_abs,
    mat2_mul,
    poly_dist,
    proportional,
)
from .opuc_core import (
    SchurSequence,
    apply_laurent,
    schur_to_moments,
    szego_forward,
)


@dataclass(frozen=True)
class AssociatedSolution:
    """One member of the family: v has parameters (b_1, a_1, a_1 lam, ...),
    its associated functional u has (a_1, a_1 lam, ...), and u = vL for
    L = P + P_* with P = alpha z + beta (beta real), up to the real scale
    c_0."""

    a1: complex
    b1: complex
    lam: complex
    c0: float
    alpha: complex
    beta: float
    d0: complex

    def __post_init__(self):
        if abs(abs(self.lam) - 1.0) > 1e-12:
            raise ValueError("lam must have unit modulus, |lam| = %r"
                             % abs(self.lam))
        if self.c0 == 0:
            raise ValueError("c_0 must be a nonzero real scale")
        if abs(self.alpha) <= DEFAULT_TOL * max(abs(self.c0), 1.0):
            raise ValueError("alpha = 0: the modification degenerates "
                             "(a_1 = b_1 gives u = v)")

    def u_schur(self, n: int) -> SchurSequence:
        """u's parameters a_1, a_1 lam, ..., a_1 lam^{n-1}."""
        return SchurSequence(
            tuple(self.a1 * self.lam ** k for k in range(n)))

    def v_schur(self, n: int) -> SchurSequence:
        """v's parameters b_1, a_1, a_1 lam, ...: u's shifted right once."""
        if n < 1:
            return SchurSequence(())
        return SchurSequence((self.b1,) + self.u_schur(n - 1).params)

    def d(self, n: int) -> complex:
        """Off-diagonal term of the n-th connection matrix, lam^n d_0."""
        return self.lam ** n * self.d0

    def c_matrix(self, n: int) -> JMatrix:
        """The n-th connection matrix [[alpha z + c_0, d_n], ...]."""
        return JMatrix(ComplexPoly([self.c0, self.alpha]),
                       ComplexPoly([self.d(n)]), 1)

    def laurent(self) -> HermitianLaurent:
        """The modification L = P + P_* with P = alpha z + beta."""
        return HermitianLaurent(ComplexPoly([self.beta, self.alpha]))

    @property
    def rotation_base(self) -> complex:
        """Constant parameter a_1 conj(lam) of the family whose rotation
        phi_n(z) = lam^n phi-hat_n(conj(lam) z) reproduces u's MOP.

        (Rotating a family multiplies its n-th parameter by lam^n, so the
        base constant must be a_1 conj(lam) to land on a_n = a_1 lam^{n-1}.)
        """
        return self.a1 * complex(self.lam).conjugate()


def associated_solution(a1: complex, b1: complex, c0: float = 1.0,
                        tol: float = DEFAULT_TOL) -> AssociatedSolution:
    """Solve for the degree-1 modification tying v = (b_1, a_1, a_1 lam, ...)
    to its associated functional u.

    c_0 is the free real scale of the modification; the defaults of every
    other quantity follow from a_1, b_1 alone.
    """
    a1 = complex(a1)
    b1 = complex(b1)
    c0 = float(c0)
    if abs(abs(a1) - 1.0) <= tol:
        raise ValueError("|a_1| = 1 is excluded (quasi-definiteness)")
    if abs(abs(b1) - 1.0) <= tol:
        raise ValueError("|b_1| = 1 is excluded (quasi-definiteness)")
    if abs(a1 - b1) <= tol:
        raise ValueError("a_1 = b_1 gives the trivial case u = v "
                         "(no genuine modification)")
    if c0 == 0:
        raise ValueError("c_0 must be a nonzero real scale")
    denom = 1.0 - abs(a1) ** 2
    w = (b1 - 1.0) + a1 * (b1.conjugate() - 1.0)
    # w = 0 needs |a_1| = 1 or b_1 = 1, both excluded above.
    lam = w / w.conjugate()
    alpha = c0 * (a1.conjugate() * (b1 - a1)
                  + (b1.conjugate() - a1.conjugate())) / denom
    beta_c = c0 / 2.0 * (1.0 - abs(b1) ** 2) + (alpha * b1).real
    d0 = c0 * a1 * w.conjugate() / denom
    # alpha - c_0 = c_0 conj(w)/(1 - |a_1|^2), so d_0 = (alpha - c_0) a_1.
    gap = abs(d0 - (alpha - c0) * a1)
    if gap > STRUCT_GUARD * max(abs(d0), 1.0):
        raise ValueError("d_0 = (alpha - c_0) a_1 fails (gap %.3e)" % gap)
    return AssociatedSolution(a1, b1, lam, c0, alpha, beta_c, d0)


def associated_from_perturbation(alpha: complex, beta: float, b1: complex,
                                 tol: float = DEFAULT_TOL
                                 ) -> AssociatedSolution:
    """Recover (a_1, lam) — and the rest of the solution — from the
    modification P = alpha z + beta and the free head parameter b_1.

    Rejects the degenerate perturbations: beta = Re(alpha b_1) puts c_0 = 0,
    beta = (alpha/2)(1-|b_1|^2) + Re(alpha b_1) puts c_0 = alpha, and the
    recovered a_1 must stay off the unit circle.
    """
    alpha = complex(alpha)
    beta = float(beta)
    b1 = complex(b1)
    if abs(alpha) <= tol:
        raise ValueError("alpha = 0: the modification must have degree 1")
    if abs(abs(b1) - 1.0) <= tol:
        raise ValueError("|b_1| = 1 is excluded (quasi-definiteness)")
    scale = max(abs(alpha), abs(beta), 1.0)
    denom = 1.0 - abs(b1) ** 2
    c0 = 2.0 * (beta - (alpha * b1).real) / denom
    if abs(c0) <= tol * scale:
        raise ValueError("beta = Re(alpha b_1): c_0 = 0 leaves no "
                         "connection matrices")
    if abs(alpha - c0) <= tol * scale:
        raise ValueError("c_0 = alpha: the recurrence forces d_n = 0 and "
                         "no self-reciprocal carrier exists")
    a_carrier = ComplexPoly([alpha.conjugate(), 2.0 * beta, alpha])
    d0 = a_carrier(-b1) / denom
    a1 = d0 / (alpha - c0)
    if abs(abs(a1) - 1.0) <= tol:
        raise ValueError("recovered |a_1| = 1: not quasi-definite")
    lam = (alpha.conjugate() - c0) / (alpha - c0)
    sol = AssociatedSolution(a1, b1, lam, c0, alpha, beta, d0)
    # Independent reconstruction from (a_1, b_1, c_0) must agree.
    back = associated_solution(a1, b1, c0, tol)
    gap = max(abs(back.alpha - alpha), abs(back.beta - beta),
              abs(back.d0 - d0), abs(back.lam - lam))
    if gap > STRUCT_GUARD * scale:
        raise ValueError("round trip through (a_1, b_1, c_0) drifted by "
                         "%.3e" % gap)
    return sol


def verify_associated(sol: AssociatedSolution, n_max: int,
                      tol: float = DEFAULT_TOL) -> float:
    """Max relative residual over every structural identity of the solution:
    the initial condition C_0 Psi_1 = A Phi_0, the matrix recurrence
    C_n B_{n+1} = A_n tilde(C_{n-1}) with constant c_n = c_0, and the
    moment-level proportionality of u and vL through index n_max."""
    laurent = sol.laurent()
    a_poly = laurent.a_poly()
    worst = 0.0
    # Initial condition: both components of C_0 (psi_1, psi_1*)^T equal A.
    psi_1 = ComplexPoly([sol.b1, 1.0])
    top, bottom = sol.c_matrix(0).apply((psi_1, ComplexPoly(
        [1.0, complex(sol.b1).conjugate()])))
    scale = max(a_poly.max_abs(), 1.0)
    worst = max(worst, poly_dist(top, a_poly) / scale,
                poly_dist(bottom, a_poly) / scale)
    # Matrix recurrence with the constant-diagonal matrices.
    u_params = sol.u_schur(n_max).params
    for n in range(1, n_max):
        a_n = u_params[n - 1]
        swap = mat2_const(1.0, a_n, complex(a_n).conjugate(), 1.0)
        lhs = mat2_mul(sol.c_matrix(n).entries(), swap)
        rhs = mat2_mul(swap, sol.c_matrix(n - 1).tilde())
        worst = max(worst,
                    mat2_dist(lhs, rhs) / max(mat2_max_abs(lhs), 1.0))
    # Moment level: moments(u) is a real multiple of (L moments(v)).
    mv = schur_to_moments(sol.v_schur(n_max + 1), n_max + 1)
    mu = schur_to_moments(sol.u_schur(n_max), n_max)
    moved = apply_laurent(mv, laurent)
    stacked = ComplexPoly(moved.values[:n_max + 1])
    target = ComplexPoly(mu.values[:n_max + 1])
    factor = proportional(stacked, target, max(tol * 100, 1e-9))
    if factor is None:
        worst = max(worst, 1.0)
    return worst


def rotation_residual(sol: AssociatedSolution, n_max: int) -> float:
    """Max coefficientwise residual of phi_n(z) - lam^n phi-hat_n(conj(lam) z)
    over n <= n_max, phi-hat being the constant family at the rotation base
    a_1 conj(lam)."""
    lam = complex(sol.lam)
    fam = szego_forward(sol.u_schur(n_max), n_max)
    hat = szego_forward([sol.rotation_base] * n_max, n_max)
    worst = 0.0
    for n in range(n_max + 1):
        ph = hat.psi(n)
        rotated = ComplexPoly([
            lam ** n * lam.conjugate() ** k * ph.coeff(k)
            for k in range(n + 1)])
        worst = max(worst, poly_dist(fam.psi(n), rotated))
    return worst
