"""Inverse problem: from u's Schur parameters and the degree of L, recover
every compatible original functional v.

The recurrence is exercised in both directions: run_direct manufactures a
ground-truth (v, L, u) triple, then the three initialization styles must
walk back to v's parameters.  The solution set is a 2r-real-parameter
family; the family tests pick a different member and confirm it solves the
same modification problem.
"""

import cmath

import numpy as np
import pytest

from opucmod.algebra import ComplexPoly, HermitianLaurent, poly_dist, proportional
from opucmod.direct import run_direct
from opucmod.inverse import (
    InverseState,
    inverse_init_i1,
    inverse_init_i2,
    inverse_init_i3,
    reduce_degree,
    rel_ic_solve,
    run_inverse,
)
from opucmod.lebesgue_inverse import LebesgueProblem, LebesgueSolution
from opucmod.opuc_core import schur_to_moments, szego_forward
from opucmod.sampling import modified_pair


def _triple(seed, r, n=10):
    rng = np.random.default_rng(seed)
    b, lau, mu = modified_pair(rng, r, n)
    rep = run_direct(lau, b, n)
    assert not rep.failed
    return b, lau, list(rep.produced)


# ---------------------------------------------------------------------------
# Round trips

@pytest.mark.parametrize("seed,r", [(33, 2), (34, 1), (35, 3)])
def test_three_starts_recover_v(seed, r):
    b, lau, a = _triple(seed, r)
    horizon = 8

    init3 = inverse_init_i3(b[:r], lau)
    rep3 = run_inverse(init3, a, b[:r], horizon)
    assert not rep3.failed
    assert max(abs(x - y) for x, y in zip(rep3.produced, b)) < 1e-9

    init1 = inverse_init_i1(b[:2 * r], a, r)
    rep1 = run_inverse(init1, a, b[:2 * r], horizon)
    assert max(abs(x - y) for x, y in zip(rep1.produced, b)) < 1e-9

    init2 = inverse_init_i2(b[:r], init3.x, r)
    rep2 = run_inverse(init2, a, b[:r], horizon)
    assert max(abs(x - y) for x, y in zip(rep2.produced, b)) < 1e-9


def test_recovered_modification_is_proportional():
    b, lau, a = _triple(33, 2)
    rep = run_inverse(inverse_init_i3(b[:2], lau), a, b[:2], 8)
    factor = proportional(rep.recovered_A, lau.a_poly(), 1e-8)
    assert factor is not None
    assert abs(factor) > 1e-6


def test_det_factor_step_law():
    # det X_j = lam_j A with lam_j/lam_{j-1} = (1-|b_{j+r}|^2)/(1-|a_j|^2);
    # the factor is *not* constant, it tracks the two eps ladders
    b, lau, a = _triple(33, 2)
    r = 2
    rep = run_inverse(inverse_init_i3(b[:r], lau), a, b[:r], 8)
    lam = [rep.det_factors[0]]
    for j in range(1, len(rep.det_factors)):
        lam.append(lam[-1] * (1.0 - abs(rep.produced[j - 1 + r]) ** 2)
                   / (1.0 - abs(a[j - 1]) ** 2))
    dev = max(abs(x - y) for x, y in zip(rep.det_factors, lam))
    assert dev < 1e-9
    assert max(rep.residuals) < 1e-9


def test_solution_family_other_member():
    # a different X_0 (same head) is another point of the solution family:
    # its output solves u = v' L' for the modification L' it carries
    b, lau, a = _triple(34, 1)
    r, horizon = 1, 8
    init = inverse_init_i2(b[:r], ComplexPoly([0.35 - 0.1j, 1.0]), r)
    rep = run_inverse(init, a, b[:r], horizon)
    assert not rep.failed
    v2 = list(rep.produced)
    # v2 differs from the original v but reproduces u under its own L'
    assert max(abs(x - y) for x, y in zip(v2, b)) > 1e-3
    lau2 = HermitianLaurent.from_a_poly(rep.recovered_A, 1e-8)
    rep_fwd = run_direct(lau2, v2, horizon - r)
    dev = max(abs(x - y) for x, y in zip(rep_fwd.produced, a))
    assert dev < 1e-8


def test_solution_family_other_head():
    b, lau, a = _triple(33, 2)
    r, horizon = 2, 8
    head = [0.2 + 0.1j, -0.3j]
    init = rel_ic_solve(lau.a_poly(), head)[0]
    rep = run_inverse(init, a, head, horizon)
    assert not rep.failed
    lau2 = HermitianLaurent.from_a_poly(rep.recovered_A, 1e-8)
    rep_fwd = run_direct(lau2, list(rep.produced), horizon - r)
    dev = max(abs(x - y) for x, y in zip(rep_fwd.produced, a))
    assert dev < 1e-8


def test_rel_ic_solve_det_matching():
    b, lau, _ = _triple(35, 3)
    state, lam = rel_ic_solve(lau.a_poly(), b[:3])
    assert abs(lam.imag if isinstance(lam, complex) else 0.0) == 0.0
    det = state.det()
    assert poly_dist(det, lam * lau.a_poly()) < 1e-9 * max(det.max_abs(), 1.0)
    # column identity at the start: psi_r = X_0 + Y_0 ... evaluated via MOPs
    psi_r = szego_forward(b[:3], 3).psi(3)
    assert poly_dist(state.x + state.y, psi_r) < 1e-12


# ---------------------------------------------------------------------------
# Consistency stops and degenerate starts

def test_stop_on_three_mop_solution():
    # an inverse solution that supports exactly 3 orthogonal polynomials:
    # the run must stop at index 2 with |b_3| = 1, not continue blindly
    prob = LebesgueProblem.from_omega(1.25)
    sol = LebesgueSolution.from_circle(prob, 10.0 / 21.0, 0.9)
    init = inverse_init_i2([sol.b1], ComplexPoly([sol.x0, 1.0]), 1)
    rep = run_inverse(init, [0.0] * 10, [sol.b1], 10)
    assert rep.failed
    assert rep.stop_index == 2
    assert rep.mop_count == 3
    assert len(rep.produced) == 3
    assert abs(abs(rep.produced[2]) - 1.0) < 1e-9
    assert not rep.degenerate_start


def test_degenerate_start_flagged_and_reducible():
    # X_0(0) = 0: the recovered modification loses a degree right away
    b, lau, a = _triple(33, 2)
    psi_2 = szego_forward(b[:2], 2).psi(2)
    x0 = ComplexPoly([0.0, 0.4, 1.0])
    init = InverseState(x0, psi_2 - x0, 2, j=0)
    rep = run_inverse(init, a, b[:2], 6)
    assert rep.failed
    assert rep.degenerate_start
    assert rep.stop_index == 0
    assert rep.mop_count is None
    reduced, consumed = reduce_degree(init)
    assert reduced.r == 1
    assert abs(consumed - init.y.coeff(0)) == 0.0
    # the reduced state still satisfies the column identity one level down:
    # psi_{1+1} of (b_1, consumed) = X^ phi_1 + Y^ phi_1*  with u's phi
    assert reduced.x.degree == 1


def test_reduce_degree_guards():
    b, lau, a = _triple(34, 1)
    init = inverse_init_i3(b[:1], lau)
    with pytest.raises(ValueError, match="regular"):
        reduce_degree(init)
    psi_1 = szego_forward(b[:1], 1).psi(1)
    bad = InverseState(ComplexPoly([0.0, 1.0]), ComplexPoly([psi_1.coeff(0)]),
                       1, j=0)
    with pytest.raises(ValueError, match="below order 1"):
        reduce_degree(bad)


# ---------------------------------------------------------------------------
# Input validation

def test_head_length_enforced():
    b, lau, a = _triple(34, 1)
    init = inverse_init_i3(b[:1], lau)
    with pytest.raises(ValueError, match="head"):
        run_inverse(init, a, b[:2], 8)
    with pytest.raises(ValueError, match="2r"):
        inverse_init_i1(b[:1], a, 1)


def test_u_quasi_definiteness_required():
    b, lau, a = _triple(34, 1)
    init = inverse_init_i3(b[:1], lau)
    a_bad = list(a)
    a_bad[3] = cmath.exp(0.4j)
    with pytest.raises(ValueError, match="quasi-definite"):
        run_inverse(init, a_bad, b[:1], 8)


def test_i3_rejects_vanishing_zeroth_moment():
    # P = z gives u[1] = 0: no regular start exists
    lau = HermitianLaurent(ComplexPoly([0.0, 1.0]))
    with pytest.raises(ValueError, match="zeroth moment"):
        inverse_init_i3([0.0], lau)
