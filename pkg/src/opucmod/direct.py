"""Direct problem: given v's Schur parameters and a hermitian Laurent
modification L, produce the Schur parameters of u = vL by a matrix
difference equation on structured 2x2 polynomial matrices.

The j-th matrix carries A phi_j = C_j psi_{j+r} + D_j psi*_{j+r}; the step
closed form follows from the one-step intertwining C_j T_{j+r} = S_j C_{j-1},
whose solvability condition pins a_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import (
    DEFAULT_TOL,
    STRUCT_GUARD,
    ComplexPoly,
    HermitianLaurent,
    JMatrix,
    decompose_in_mop_basis,
    mat2_const,
    mat2_dist,
    mat2_max_abs,
    mat2_mul,
    poly_dist,
    proportional,
)
from .opuc_core import MopPair, SchurSequence, TransferMatrix, szego_forward


@dataclass(frozen=True)
class ConsistencyReport:
    """Outcome of a finite-horizon run of one of the recurrence algorithms.

    produced    -- the Schur parameters the run generated (a_j for the direct
                   problem; the full b-sequence, head included, for the
                   inverse one).
    stop_index  -- index of the first singular matrix when `failed`, else the
                   requested horizon; equals the number of successful steps.
    failed      -- True when a pivot C_j(0) (resp. X_j(0)) collapsed before
                   the horizon.
    matrices    -- every state computed, the singular one included.
    residuals   -- per-step max residual of the defining polynomial identity.
    det_factors -- per-step real proportionality factor of det(state) against
                   the carrier polynomial A.
    mop_count   -- exact count of orthogonal polynomials of the functional
                   the stop certifies (None when the horizon was reached
                   without a stop, i.e. the count is only bounded below).
    degenerate_start -- inverse runs only: the initial state itself was
                   non-regular, meaning the recovered modification loses a
                   degree (reduce_degree applies); not a quasi-definiteness
                   statement about v.
    """

    produced: tuple
    stop_index: int
    failed: bool
    matrices: tuple
    residuals: tuple
    det_factors: tuple
    horizon: int
    mop_count: Optional[int] = None
    recovered_A: Optional[ComplexPoly] = None
    degenerate_start: bool = False

    def mop_count_capped(self, cap: int) -> int:
        return self.mop_count if self.failed else cap


def direct_init(laurent: HermitianLaurent, b,
                tol: float = DEFAULT_TOL) -> JMatrix:
    """Initial matrix: the unique C_0, D_0 with A = C_0 psi_r + D_0 psi*_r."""
    seq = b if isinstance(b, SchurSequence) else SchurSequence(tuple(b))
    r = laurent.r
    fam = szego_forward(seq, r)
    a = laurent.a_poly()
    c, d = decompose_in_mop_basis(a, fam.psi(r), r, tol)
    mat = JMatrix(c, d, r)
    # Structural facts worth verifying eagerly: C_0(0) real, C_0*(0) = A(0).
    scale = max(mat.c.max_abs(), 1.0)
    if abs(mat.c0.imag) > 100 * tol * scale:
        raise ValueError("initial matrix violated C_0(0) real: %r" % mat.c0)
    if abs(mat.c_star.coeff(0) - a.coeff(0)) > 100 * tol * max(scale,
                                                               a.max_abs()):
        raise ValueError("initial matrix violated C_0*(0) = A(0)")
    return mat


def _project_step_product(raw, r: int, tol: float):
    """Read a J-structured matrix off a closed-form 2x2 product.

    The product's top-right entry has nominal degree r but its z^r
    coefficient must vanish (that is the membership condition the new Schur
    parameter was chosen to enforce); the bottom row must mirror the top one.
    """
    scale = max(mat2_max_abs(raw), 1.0)
    c_new = raw[0][0]
    d_full = raw[0][1]
    if abs(d_full.coeff(r)) > STRUCT_GUARD * scale:
        raise ValueError("step product left the structured class: "
                         "top-right degree-%d coefficient = %r"
                         % (r, d_full.coeff(r)))
    d_new = ComplexPoly(d_full.coeffs[:r])
    mat = JMatrix(c_new, d_new, r)
    mirror = mat.entries()
    resid = max(poly_dist(mirror[1][0], raw[1][0]),
                poly_dist(mirror[1][1], raw[1][1]),
                abs(d_full.coeff(r)))
    if resid > STRUCT_GUARD * scale:
        raise ValueError("step product lost J-symmetry (residual %.3e)"
                         % resid)
    return mat, resid / scale


def _transfer_entries(param: complex):
    return TransferMatrix(param).entries()


def direct_step(c_prev: JMatrix, b_next: complex, alpha: complex,
                tol: float = DEFAULT_TOL):
    """One step: the a_j forced by the solvability condition, and C_j.

        a_j = (alpha b_{j+r} - conj(D*_{j-1}(0))) / C_{j-1}(0)
        C_j = [[1, a],[conj a, 1]] tilde(C_{j-1}) [[1, -b],[-conj b, 1]]
              / (1 - |b|^2)

    The defining relation C_j T_{j+r} = S_j C_{j-1} is asserted before
    returning.
    """
    b = complex(b_next)
    if abs(abs(b) - 1.0) <= tol:
        raise ValueError("|b_{j+r}| = 1: v is not quasi-definite here")
    if not c_prev.is_regular(tol):
        raise ValueError("C_{j-1}(0) ~ 0: consistency stop")
    r = c_prev.r
    # conj(D*_{j-1}(0)) is just the top coefficient slot of D_{j-1} in P_{r-1}.
    a = (alpha * b - c_prev.d.coeff(r - 1)) / c_prev.c0
    left = mat2_const(1, a, a.conjugate(), 1)
    right = mat2_const(1, -b, -b.conjugate(), 1)
    raw = mat2_mul(left, mat2_mul(c_prev.tilde(), right))
    raw = [[(1.0 / (1.0 - abs(b) ** 2)) * raw[i][j] for j in range(2)]
           for i in range(2)]
    c_new, resid = _project_step_product(raw, r, tol)
    # Defining relation residual.
    lhs = mat2_mul(c_new.entries(), _transfer_entries(b))
    rhs = mat2_mul(_transfer_entries(a), c_prev.entries())
    resid = max(resid, mat2_dist(lhs, rhs) / max(mat2_max_abs(rhs), 1.0))
    if resid > STRUCT_GUARD:
        raise ValueError("direct step failed its defining relation "
                         "(residual %.3e)" % resid)
    return a, c_new, resid


def run_direct(laurent: HermitianLaurent, b, horizon: int,
               tol: float = DEFAULT_TOL) -> ConsistencyReport:
    """Produce a_1..a_horizon for u = vL, or stop where u loses
    quasi-definiteness.

    Preconditions: b supplies horizon + r parameters, all off the unit
    circle.  Each step re-verifies A phi_j = C_j Psi_{j+r} and
    det C_j = C_j(0) A.
    """
    seq = b if isinstance(b, SchurSequence) else SchurSequence(tuple(b))
    r = laurent.r
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if len(seq) < horizon + r:
        raise ValueError("need %d Schur parameters for horizon %d, have %d"
                         % (horizon + r, horizon, len(seq)))
    if not seq.quasi_definite_in(horizon + r, tol):
        raise ValueError("v is not quasi-definite through P_%d (unit-modulus "
                         "parameter at %r)"
                         % (horizon + r, seq.unit_modulus_indices(tol)))
    a_carrier = laurent.a_poly()
    alpha = laurent.alpha
    fam = szego_forward(seq, horizon + r)

    matrices = [direct_init(laurent, seq, tol)]
    produced = []
    residuals = []
    det_factors = []
    phi = MopPair(ComplexPoly.one(), ComplexPoly.one(), 0)
    failed = False

    # Initial-state checks: GPRMF at j = 0 and the determinant identity.
    residuals.append(_state_checks(matrices[0], phi, fam.pairs[r],
                                   a_carrier, det_factors))

    for j in range(1, horizon + 1):
        cur = matrices[-1]
        if not cur.is_regular(tol):
            failed = True
            break
        a_j, c_next, resid = direct_step(cur, seq.b(j + r), alpha, tol)
        produced.append(a_j)
        matrices.append(c_next)
        phi = TransferMatrix(a_j).apply(phi)
        resid = max(resid, _state_checks(c_next, phi, fam.pairs[j + r],
                                         a_carrier, det_factors))
        residuals.append(resid)

    stop = len(produced)
    return ConsistencyReport(
        produced=tuple(produced),
        stop_index=stop,
        failed=failed,
        matrices=tuple(matrices),
        residuals=tuple(residuals),
        det_factors=tuple(det_factors),
        horizon=horizon,
        mop_count=stop if failed else None,
    )


def _state_checks(mat: JMatrix, phi: MopPair, psi: MopPair,
                  a_carrier: ComplexPoly, det_factors: list) -> float:
    """Residual of A phi_j = C_j psi + D_j psi* plus the det identity."""
    lhs = a_carrier * phi.poly
    rhs = mat.c * psi.poly + mat.d * psi.star
    scale = max(lhs.max_abs(), rhs.max_abs(), 1.0)
    resid = poly_dist(lhs, rhs) / scale
    det = mat.det()
    expect = mat.c0 * a_carrier
    dscale = max(det.max_abs(), expect.max_abs(), 1.0)
    resid = max(resid, poly_dist(det, expect) / dscale)
    factor = proportional(det, a_carrier, 1e-4)
    det_factors.append(factor if factor is not None else float("nan"))
    return resid


def direct_r1(laurent: HermitianLaurent, b, horizon: int,
              tol: float = DEFAULT_TOL) -> ConsistencyReport:
    """Degree-1 scalar form of the direct algorithm.

    With C_j = alpha z + c_j and D_j = d_j the initial condition reads

        [[1, conj(b_1)], [b_1, 1]] (c_0, d_0)^T = (2 beta - alpha b_1,
                                                   conj(alpha))^T

    and each step solves a_j = (alpha b_{j+1} - d_{j-1}) / c_{j-1} followed by

        [[1, conj(b_{j+1})], [b_{j+1}, 1]] (c_j, d_j)^T
            = (c_{j-1} + conj(d_{j-1}) a_j, conj(alpha) a_j)^T.
    """
    seq = b if isinstance(b, SchurSequence) else SchurSequence(tuple(b))
    if laurent.r != 1:
        raise ValueError("direct_r1 requires a degree-1 modification")
    if len(seq) < horizon + 1:
        raise ValueError("need %d Schur parameters, have %d"
                         % (horizon + 1, len(seq)))
    alpha = laurent.alpha
    beta = laurent.p.coeff(0).real

    def solve2(bb: complex, rhs1: complex, rhs2: complex):
        det = 1.0 - abs(bb) ** 2
        return ((rhs1 - bb.conjugate() * rhs2) / det,
                (rhs2 - bb * rhs1) / det)

    b1 = seq.b(1)
    c, d = solve2(b1, 2 * beta - alpha * b1, alpha.conjugate())
    matrices = [JMatrix(ComplexPoly([c, alpha]), ComplexPoly([d]), 1)]
    produced = []
    failed = False
    for j in range(1, horizon + 1):
        if abs(c) <= tol * max(abs(c), abs(alpha), 1.0):
            failed = True
            break
        a_j = (alpha * seq.b(j + 1) - d) / c
        produced.append(a_j)
        bb = complex(seq.b(j + 1))
        c, d = solve2(bb, c + d.conjugate() * a_j, alpha.conjugate() * a_j)
        matrices.append(JMatrix(ComplexPoly([c, alpha]), ComplexPoly([d]), 1))
    stop = len(produced)
    return ConsistencyReport(
        produced=tuple(produced),
        stop_index=stop,
        failed=failed,
        matrices=tuple(matrices),
        residuals=(),
        det_factors=(),
        horizon=horizon,
        mop_count=stop if failed else None,
    )
