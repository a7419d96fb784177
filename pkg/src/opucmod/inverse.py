"""Inverse problem: given the Schur parameters of u, recover functionals v
with u = vL by running the matrix difference equation backwards.

States are matrices [[X, Y], [z Y*, X*]] with X monic of degree r carrying
Psi_{j+r} = X_j Phi_j; the solution set for fixed u has 2r real parameters,
swept by the free head b_1..b_r together with the choice of X_0 (equivalently
the head b_1..b_2r for the I1-style start).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import (
    DEFAULT_TOL,
    STRUCT_GUARD,
    ComplexPoly,
    HermitianLaurent,
    decompose_in_mop_basis,
    jmatrix_det,
    mat2,
    mat2_const,
    mat2_dist,
    mat2_max_abs,
    mat2_mul,
    poly_dist,
    proportional,
    reverse,
)
from .direct import ConsistencyReport, direct_init
from .opuc_core import MopPair, SchurSequence, TransferMatrix, szego_forward


@dataclass(frozen=True)
class InverseState:
    """State matrix [[X, Y], [z Y*, X*]]: X monic degree r, Y in P_{r-1}."""

    x: ComplexPoly
    y: ComplexPoly
    r: int
    j: int = 0

    def __post_init__(self):
        if self.x.degree != self.r:
            raise ValueError("X must have degree exactly r=%d" % self.r)
        if abs(self.x.lead - 1.0) > STRUCT_GUARD * max(self.x.max_abs(), 1.0):
            raise ValueError("X must be monic, leading coeff %r" % self.x.lead)
        if self.y.degree > self.r - 1:
            raise ValueError("Y must lie in P_%d" % (self.r - 1))

    @property
    def x_star(self) -> ComplexPoly:
        return reverse(self.x, self.r)

    @property
    def y_star(self) -> ComplexPoly:
        return reverse(self.y, self.r - 1)

    @property
    def x0(self) -> complex:
        return self.x.coeff(0)

    def is_regular(self, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.x0) > tol * max(self.x.max_abs(), 1.0)

    def entries(self):
        return mat2(self.x, self.y, self.y_star.shift(1), self.x_star)

    def tilde(self):
        return mat2(self.x, self.y.shift(1), self.y_star, self.x_star)

    def det(self) -> ComplexPoly:
        return jmatrix_det(self.x, self.y, self.r)


def _pin_monic(p: ComplexPoly, r: int) -> ComplexPoly:
    """Replace a leading coefficient that is 1 up to rounding by exactly 1,
    so differences against exactly-monic MOPs stay inside P_{r-1}."""
    return ComplexPoly(p.coeffs[:r] + (1.0,))


def inverse_init_i2(b_head, x0_poly: ComplexPoly, r: int,
                    tol: float = DEFAULT_TOL) -> InverseState:
    """I2-style start: head b_1..b_r free, X_0 chosen monic of degree r;
    Y_0 = psi_r - X_0 makes the column identity Psi_r = state (1,1)^T hold."""
    seq = b_head if isinstance(b_head, SchurSequence) else SchurSequence(
        tuple(b_head))
    if len(seq) < r:
        raise ValueError("need r=%d head parameters" % r)
    if x0_poly.degree != r or abs(x0_poly.coeff(r) - 1.0) > STRUCT_GUARD:
        raise ValueError("X_0 must be monic of degree r=%d" % r)
    x0 = _pin_monic(x0_poly, r)
    psi_r = szego_forward(seq, r).psi(r)
    y0 = psi_r - x0
    return InverseState(x0, y0, r, j=0)


def inverse_init_i1(b_head, u_schur, r: int,
                    tol: float = DEFAULT_TOL) -> InverseState:
    """I1-style start: head b_1..b_2r free; X_r, Y_r are read off the unique
    decomposition psi_{2r} = X_r phi_r + Y_r phi*_r in u's MOP basis."""
    seq = b_head if isinstance(b_head, SchurSequence) else SchurSequence(
        tuple(b_head))
    useq = u_schur if isinstance(u_schur, SchurSequence) else SchurSequence(
        tuple(u_schur))
    if len(seq) < 2 * r:
        raise ValueError("need 2r=%d head parameters" % (2 * r))
    psi_2r = szego_forward(seq, 2 * r).psi(2 * r)
    phi_r = szego_forward(useq, r).psi(r)
    x, y = decompose_in_mop_basis(psi_2r, phi_r, r, tol)
    return InverseState(_pin_monic(x, r), y, r, j=r)


def inverse_init_i3(b_head, laurent: HermitianLaurent,
                    tol: float = DEFAULT_TOL) -> InverseState:
    """I3-style start for known L: X_0 = Adj(C_0)/C_0(0) from the direct
    problem's initial matrix; cross-checked against rel_ic_solve."""
    r = laurent.r
    c0 = direct_init(laurent, b_head, tol)
    if not c0.is_regular(tol):
        raise ValueError("C_0(0) ~ 0: u = vL has no zeroth moment, no "
                         "regular inverse start exists for this head")
    pivot = c0.c0
    state = InverseState(_pin_monic((1.0 / pivot) * c0.c_star, r),
                         (-1.0 / pivot) * c0.d, r, j=0)
    other, lam = rel_ic_solve(laurent.a_poly(), b_head, tol)
    agree = max(poly_dist(state.x, other.x), poly_dist(state.y, other.y))
    if agree > STRUCT_GUARD * max(state.x.max_abs(), state.y.max_abs(), 1.0):
        raise ValueError("adjugate start disagrees with the det-matching "
                         "start (residual %.3e)" % agree)
    return state


def rel_ic_solve(a_carrier: ComplexPoly, b_head, tol: float = DEFAULT_TOL):
    """The unique regular state with column identity AND det X_0 = lam A.

    Writing lam A + psi_r psi*_r = C psi_r + D psi*_r (coefficients affine in
    real lam), the state is X_0 = (C* + D)/2 with lam fixed by monicity;
    returns (state, lam), with lam = X_0(0)/A(0) as a built-in cross-check.
    """
    if a_carrier.degree < 2 or a_carrier.degree % 2 != 0:
        raise ValueError("carrier polynomial must have even degree >= 2")
    r = a_carrier.degree // 2
    seq = b_head if isinstance(b_head, SchurSequence) else SchurSequence(
        tuple(b_head))
    psi_r = szego_forward(seq, r).psi(r)
    c_a, d_a = decompose_in_mop_basis(a_carrier, psi_r, r, tol)
    c_b, d_b = decompose_in_mop_basis(psi_r * reverse(psi_r, r), psi_r, r, tol)
    # X_0(lam) = (reverse(lam C_a + C_b, r) + lam D_a + D_b) / 2; the z^r
    # coefficient is conj(lam C_a(0) + C_b(0)) / 2 and must equal 1.
    lam_c = (2.0 - c_b.coeff(0).conjugate()) / c_a.coeff(0).conjugate()
    if abs(lam_c.imag) > STRUCT_GUARD * max(abs(lam_c), 1.0):
        raise ValueError("monicity forces a non-real det factor %r" % lam_c)
    lam = lam_c.real
    x0 = 0.5 * (lam * (reverse(c_a, r) + d_a) + (reverse(c_b, r) + d_b))
    if abs(x0.coeff(r) - 1.0) > STRUCT_GUARD:
        raise ValueError("det-matching start is not monic: top coefficient "
                         "%r" % x0.coeff(r))
    # the lam above makes the top coefficient 1 only up to rounding
    x0 = _pin_monic(x0, r)
    state = InverseState(x0, psi_r - x0, r, j=0)
    det = state.det()
    if poly_dist(det, lam * a_carrier) > STRUCT_GUARD * max(det.max_abs(), 1.0):
        raise ValueError("det-matching start failed det X_0 = lam A")
    if abs(state.x0 - lam * a_carrier.coeff(0)) > STRUCT_GUARD * max(abs(lam),
                                                                     1.0):
        raise ValueError("det factor disagrees with X_0(0)/A(0)")
    return state, lam


def inverse_step(state: InverseState, a_j: complex,
                 tol: float = DEFAULT_TOL):
    """One step: the b_{j+r} forced by membership, and the next state.

        b_{j+r} = (a_j - conj(Y*_{j-1}(0))) / conj(X_{j-1}(0))
        X_j = [[1, b],[conj b, 1]] tilde(X_{j-1}) [[1, -a],[-conj a, 1]]
              / (1 - |a|^2)

    The defining relation T_{j+r} X_{j-1} = X_j S_j is asserted.
    """
    a = complex(a_j)
    if abs(abs(a) - 1.0) <= tol:
        raise ValueError("|a_j| = 1: u is not quasi-definite here")
    if not state.is_regular(tol):
        raise ValueError("X(0) ~ 0: consistency stop (reduce_degree may "
                         "apply)")
    r = state.r
    b = (a - state.y.coeff(r - 1)) / state.x0.conjugate()
    left = mat2_const(1, b, b.conjugate(), 1)
    right = mat2_const(1, -a, -a.conjugate(), 1)
    raw = mat2_mul(left, mat2_mul(state.tilde(), right))
    raw = [[(1.0 / (1.0 - abs(a) ** 2)) * raw[i][j] for j in range(2)]
           for i in range(2)]
    scale = max(mat2_max_abs(raw), 1.0)
    x_new = raw[0][0]
    y_full = raw[0][1]
    if abs(y_full.coeff(r)) > STRUCT_GUARD * scale:
        raise ValueError("step product left the structured class")
    y_new = ComplexPoly(y_full.coeffs[:r])
    new_state = InverseState(x_new, y_new, r, j=state.j + 1)
    lhs = mat2_mul(TransferMatrix(b).entries(), state.entries())
    rhs = mat2_mul(new_state.entries(), TransferMatrix(a).entries())
    resid = mat2_dist(lhs, rhs) / max(mat2_max_abs(rhs), 1.0)
    if resid > STRUCT_GUARD:
        raise ValueError("inverse step failed its defining relation "
                         "(residual %.3e)" % resid)
    return b, new_state, resid


def run_inverse(init: InverseState, u_schur, b_head, horizon: int,
                tol: float = DEFAULT_TOL) -> ConsistencyReport:
    """Generate b_{j+r} for j = init.j+1 .. horizon.

    b_head must supply the init.j + r parameters the start already fixed
    (r for an I2/I3 start, 2r for I1).  The report's `produced` holds the
    full b-sequence, and `recovered_A` the determinant of the initial state
    (the modification, up to a real factor).
    """
    useq = u_schur if isinstance(u_schur, SchurSequence) else SchurSequence(
        tuple(u_schur))
    seq_head = b_head if isinstance(b_head, SchurSequence) else SchurSequence(
        tuple(b_head))
    r = init.r
    if len(seq_head) != init.j + r:
        raise ValueError("head must fix exactly %d parameters, got %d"
                         % (init.j + r, len(seq_head)))
    if horizon < init.j:
        raise ValueError("horizon below the start index")
    if len(useq) < horizon:
        raise ValueError("need %d parameters of u, have %d" % (horizon,
                                                               len(useq)))
    if not useq.quasi_definite_in(horizon, tol):
        raise ValueError("u is not quasi-definite through P_%d" % horizon)

    a_ref = init.det()
    b_full = list(seq_head.params)
    matrices = [init]
    residuals = []
    det_factors = [1.0]
    failed = False

    # phi_j and psi_{j+r} built incrementally for the per-step column check.
    ufam = szego_forward(useq, min(horizon, len(useq)))
    phi = ufam.pairs[init.j]
    psi = szego_forward(SchurSequence(tuple(b_full)),
                        init.j + r).pairs[init.j + r]
    residuals.append(_column_residual(init, phi, psi))

    for j in range(init.j + 1, horizon + 1):
        cur = matrices[-1]
        if not cur.is_regular(tol):
            failed = True
            break
        b_next, nxt, resid = inverse_step(cur, useq.b(j), tol)
        b_full.append(b_next)
        matrices.append(nxt)
        phi = ufam.pairs[j]
        psi = TransferMatrix(b_next).apply(psi)
        resid = max(resid, _column_residual(nxt, phi, psi))
        residuals.append(resid)
        factor = proportional(nxt.det(), a_ref, 1e-4)
        det_factors.append(factor if factor is not None else float("nan"))

    n_steps = len(matrices) - 1
    stop = init.j + n_steps
    # A stop at a state the recurrence itself produced certifies
    # |b_{stop+r}| = 1, i.e. v has exactly stop + r orthogonal polynomials.
    # A non-regular *initial* state instead means det X_init vanishes at 0:
    # the recovered modification is degenerate (its degree drops).
    degenerate = failed and n_steps == 0
    return ConsistencyReport(
        produced=tuple(b_full),
        stop_index=stop,
        failed=failed,
        matrices=tuple(matrices),
        residuals=tuple(residuals),
        det_factors=tuple(det_factors),
        horizon=horizon,
        mop_count=(stop + r) if (failed and not degenerate) else None,
        recovered_A=a_ref,
        degenerate_start=degenerate,
    )


def _column_residual(state: InverseState, phi: MopPair, psi: MopPair) -> float:
    lhs = psi.poly
    rhs = state.x * phi.poly + state.y * phi.star
    return poly_dist(lhs, rhs) / max(lhs.max_abs(), rhs.max_abs(), 1.0)


def reduce_degree(state: InverseState, b_consumed: Optional[complex] = None,
                  tol: float = DEFAULT_TOL):
    """Collapse a non-regular state to order r-1.

    When X_j(0) = 0 the structure forces b_{j+r} = Y_j(0) and X_j = z Xhat;
    the reduced state (same j, order r-1) carries the same column identity
    one degree lower, i.e. the modification itself lost a degree.  Returns
    (reduced_state, consumed_b).
    """
    if state.is_regular(tol):
        raise ValueError("state is regular; nothing to reduce")
    if state.r < 2:
        raise ValueError("cannot reduce below order 1 (the functionals "
                         "already coincide up to a factor)")
    r = state.r
    b = state.y.coeff(0)
    if b_consumed is not None and abs(b - b_consumed) > 1e-8 * max(
            1.0, abs(b)):
        raise ValueError("claimed b_{j+r}=%r but structure forces %r"
                         % (b_consumed, b))
    if abs(abs(b) - 1.0) <= tol:
        raise ValueError("|Y(0)| = 1: no quasi-definite reduction")
    xhat = state.x.divide_z(tol)
    denom = 1.0 - abs(b) ** 2
    x_new = (1.0 / denom) * (xhat - b * state.y_star)
    y_new = (1.0 / denom) * (state.y - b * reverse(xhat, r - 1)).divide_z(tol)
    return InverseState(x_new, y_new, r - 1, j=state.j), b
