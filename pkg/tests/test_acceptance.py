"""Acceptance gate: ten end-to-end criteria, one test per criterion.

Each test prints a single "criterion N: PASS" line on success (visible with
-rP / -s); the pytest verdict line itself is the pass/fail record.  Tolerances
are pinned next to each assertion and are not derived from module defaults.
"""

import math
from fractions import Fraction

import numpy as np

from opucmod.algebra import (
    ComplexPoly,
    HermitianLaurent,
    mat2,
    mat2_mul,
    poly_dist,
)
from opucmod.associated import (
    associated_solution,
    rotation_residual,
    verify_associated,
)
from opucmod.classification import (
    bisector_family_step,
    constant_solution,
    verify_constant_relation,
)
from opucmod.direct import run_direct
from opucmod.inverse import inverse_init_i1, inverse_init_i2, run_inverse
from opucmod.lebesgue_inverse import (
    LebesgueProblem,
    LebesgueSolution,
    cheb_u,
    classify,
    s_sequence,
    sigma_sequence,
    sigma_value,
    solution_trajectory,
)
from opucmod.opuc_core import (
    TransferMatrix,
    apply_laurent,
    moments_to_schur,
    schur_to_moments,
    szego_forward,
)
from opucmod.oracle import (
    determinant_criterion,
    kernel_criterion_r1,
    mop_count_from_criterion,
    roots_of_A,
)
from opucmod.sampling import modified_pair

# Modification P = z + t whose u loses quasi-definiteness at a known index
# (same construction as in the direct-problem tests).
T_STOP_R1 = 0.43500272874949319
B_STOP_R1 = [0.3, -0.2 + 0.1j, 0.15, 0.05 - 0.25j, 0.1, -0.05, 0.2, 0.1j,
             -0.1, 0.12]
LAU_STOP_R1 = HermitianLaurent(ComplexPoly([T_STOP_R1, 1.0]))
T_STOP_R2 = 0.33345785458751459
B_STOP_R2 = [0.25, 0.1 - 0.2j, -0.15, 0.3j, 0.05, -0.2, 0.1, 0.15 + 0.1j,
             -0.05, 0.2, 0.1, -0.1]
LAU_STOP_R2 = HermitianLaurent(ComplexPoly([T_STOP_R2, 0.4 - 0.3j, 1.0]))


def _disk(rng, radius):
    while True:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if abs(z) <= radius:
            return z


def test_criterion_01_exact_rational_chain_figures():
    """Chain tables reproduce exactly in rational arithmetic (tolerance 0)."""
    p54 = LebesgueProblem.from_omega(Fraction(5, 4))
    sig = [sigma_value(p) for p in sigma_sequence(p54, 3)]
    assert sig[2] == Fraction(10, 21)
    cls = classify(p54, Fraction(10, 21), 10)
    assert cls.stop_index == 2 and cls.mop_count == 3

    p1 = LebesgueProblem.from_omega(Fraction(1))
    sig1 = [sigma_value(p) for p in sigma_sequence(p1, 21)]
    assert all(sig1[n] == Fraction(n, n + 1) for n in range(21))
    cls34 = classify(p1, Fraction(3, 4), 10)
    assert cls34.mop_count == 4

    p45 = LebesgueProblem.from_omega(Fraction(4, 5))
    sig45 = [sigma_value(p) for p in sigma_sequence(p45, 5)]
    assert sig45[4] == Fraction(-560, 79)
    cls45 = classify(p45, Fraction(-560, 79), 10)
    assert cls45.mop_count == 5
    print("criterion 1: PASS - exact rational chain figures reproduce")


def test_criterion_02_periodic_chain_at_unit_root():
    """omega = 1/sqrt(2): degree-4 zero of U_3, period-4 sigma and s chains."""
    w = 1.0 / math.sqrt(2.0)
    assert abs(cheb_u(3, w)) < 1e-12
    prob = LebesgueProblem.from_omega(w)

    sig = [sigma_value(p) for p in sigma_sequence(prob, 13)]
    cycle = (0.0, 1.0 / math.sqrt(2.0), math.sqrt(2.0), None)
    for k, v in enumerate(sig):
        want = cycle[k % 4]
        if want is None:
            assert math.isinf(float(v))
        else:
            assert abs(float(v) - want) < 1e-10

    vals = s_sequence(prob, 1.0, 44).values
    assert max(abs(vals[n + 4] - vals[n]) for n in range(41)) < 1e-10

    # An initial value equal to sigma_k kills the chain at step k and leaves
    # k + 1 orthogonal polynomials, so the three-polynomial member of this
    # family is s_0 = sqrt(2) = sigma_2; s_0 = 1/sqrt(2) = sigma_1 carries
    # two.
    cls_a = classify(prob, math.sqrt(2.0), 30)
    assert cls_a.stop_index == 2 and cls_a.mop_count == 3
    cls_b = classify(prob, 1.0 / math.sqrt(2.0), 30)
    assert cls_b.stop_index == 1 and cls_b.mop_count == 2
    print("criterion 2: PASS - period-4 chain at the unit root of U_3")


def test_criterion_03_hyperbolic_chain_asymptotics():
    """omega = 5/4, s_0 = 1/3: s_n -> 2 and |b_{n+1}/b_n| -> 1/2."""
    prob = LebesgueProblem.from_omega(Fraction(5, 4))
    vals = [float(v) for v in s_sequence(prob, Fraction(1, 3), 42).values]
    assert all(abs(v - 2.0) < 1e-8 for v in vals[30:])

    sol = LebesgueSolution.from_circle(LebesgueProblem.from_omega(1.25),
                                       1.0 / 3.0, 0.0)
    b = solution_trajectory(sol, 42).b
    ratios = [abs(b[k + 1] / b[k]) for k in range(39, len(b) - 1)]
    assert all(abs(rat - 0.5) < 1e-6 for rat in ratios)
    print("criterion 3: PASS - hyperbolic chain converges to the "
          "attracting root")


def test_criterion_04_direct_run_matches_moment_oracle():
    """100 random pairs: generated parameters match the Gram-Schmidt oracle
    to 1e-8 and stop behaviour agrees exactly (plus two constructed stops)."""
    worst = 0.0
    for i in range(100):
        rng = np.random.default_rng([2601, i])
        r = 1 + (i % 3)
        b, lau, mu = modified_pair(rng, r, 10, radius=0.9)
        rep = run_direct(lau, b, 10)
        ext = moments_to_schur(mu)
        assert not rep.failed and ext.stop_index is None
        dev = max(abs(x - y) for x, y in zip(rep.produced, ext.schur.params))
        worst = max(worst, dev)
    assert worst < 1e-8

    for b, lau, mop in ((B_STOP_R1, LAU_STOP_R1, 3),
                        (B_STOP_R2, LAU_STOP_R2, 5)):
        rep = run_direct(lau, b, 8)
        assert rep.failed and rep.mop_count == mop
        ext = moments_to_schur(apply_laurent(schur_to_moments(b, len(b)), lau))
        assert ext.stop_index == mop
    print("criterion 4: PASS - oracle agreement on 100 pairs "
          "(worst %.3e) and exact stop indices" % worst)


def test_criterion_05_three_stop_criteria_agree():
    """Recurrence run, determinant criterion and (r = 1) kernel criterion
    name the same quasi-definiteness verdict on 50 random pairs."""
    for i in range(50):
        rng = np.random.default_rng([2605, i])
        r = 1 + (i % 2)
        b, lau, _ = modified_pair(rng, r, 7)
        rep = run_direct(lau, b, 6)
        assert not rep.failed
        assert determinant_criterion(b, lau, 6) == 8
        if r == 1:
            z1, z2 = roots_of_A(lau).roots
            assert kernel_criterion_r1(b, z1, z2, 6) == 8

    m1 = determinant_criterion(B_STOP_R1, LAU_STOP_R1, 8)
    assert m1 == 4
    rep1 = run_direct(LAU_STOP_R1, B_STOP_R1, 8)
    assert rep1.mop_count == mop_count_from_criterion(m1, 8) == 3
    z1, z2 = roots_of_A(LAU_STOP_R1).roots
    assert kernel_criterion_r1(B_STOP_R1, z1, z2, 8) == 4

    m2 = determinant_criterion(B_STOP_R2, LAU_STOP_R2, 9)
    assert m2 == 6
    rep2 = run_direct(LAU_STOP_R2, B_STOP_R2, 9)
    assert rep2.mop_count == mop_count_from_criterion(m2, 9) == 5
    print("criterion 5: PASS - three stop criteria agree on 50 pairs "
          "and both constructed stops")


def test_criterion_06_inverse_direct_round_trip():
    """50 seeds, r <= 2, both initialisations: the recovered modification
    reproduces u to 1e-9; every det X_j is a real constant multiple of the
    recovered carrier, and the multipliers follow the one-step ratio law."""
    worst_rt = worst_prop = worst_step = 0.0
    for i in range(50):
        rng = np.random.default_rng([2606, i])
        r = 1 + (i % 2)
        b, lau, _ = modified_pair(rng, r, 10)
        a = list(run_direct(lau, b, 10).produced)
        if i % 2 == 1:
            # Free initial condition: perturb X_0 away from psi_r inside the
            # solution family, shrinking the perturbation until the run
            # stays regular and well conditioned.
            head = list(b[:r])
            psi_r = szego_forward(head, r).psi(r)
            scale = 0.15
            rep = None
            for _ in range(8):
                pert = ComplexPoly([_disk(rng, scale) for _ in range(r)])
                try:
                    st = inverse_init_i2(head, psi_r + pert, r)
                    cand = run_inverse(st, a, head, 8)
                except ValueError:
                    scale *= 0.5
                    continue
                if (not cand.failed and
                        min(abs(complex(f)) for f in cand.det_factors) >= 0.1):
                    rep = cand
                    break
                scale *= 0.5
            assert rep is not None
            j0 = 0
        else:
            head = list(b[:2 * r])
            rep = run_inverse(inverse_init_i1(head, a, r), a, head, 8)
            assert not rep.failed
            j0 = r

        lau2 = HermitianLaurent.from_a_poly(rep.recovered_A)
        rep2 = run_direct(lau2, list(rep.produced), len(rep.produced) - r)
        n_cmp = min(len(rep2.produced), len(a))
        worst_rt = max(worst_rt,
                       max(abs(rep2.produced[k] - a[k]) for k in range(n_cmp)))

        a_ref = rep.recovered_A
        scale_ref = max(a_ref.max_abs(), 1.0)
        fac = [complex(f) for f in rep.det_factors]
        for k, mat in enumerate(rep.matrices):
            worst_prop = max(worst_prop,
                             poly_dist(mat.det(), fac[k] * a_ref) / scale_ref,
                             abs(fac[k].imag))
        # lambda_j / lambda_{j-1} = (1 - |b_{j+r}|^2) / (1 - |a_j|^2) at
        # state index j = j0 + k.
        prod = rep.produced
        for k in range(1, len(fac)):
            pred = fac[k - 1].real * ((1 - abs(prod[j0 + k + r - 1]) ** 2)
                                      / (1 - abs(a[j0 + k - 1]) ** 2))
            worst_step = max(worst_step, abs(fac[k].real - pred))
    assert worst_rt < 1e-9
    assert worst_prop < 1e-9
    assert worst_step < 1e-9
    print("criterion 6: PASS - round trip %.3e, carrier proportionality "
          "%.3e, ratio law %.3e" % (worst_rt, worst_prop, worst_step))


def test_criterion_07_closed_form_matches_generic_inverse():
    """20 random degree-1 constant-modification chains: the closed-form
    trajectory matches the generic inverse recurrence to 1e-9 through n=20."""
    worst = 0.0
    for i in range(20):
        rng = np.random.default_rng([2607, i])
        for _ in range(300):
            omega = rng.uniform(-1.9, 1.9)
            s0 = rng.uniform(-2.5, 2.5)
            phase = rng.uniform(0.0, 2.0 * math.pi)
            prob = LebesgueProblem.from_omega(omega)
            # Keep the comparison away from stops and from the circle
            # |b_n| = 1, where both sides lose digits for the same reason.
            if prob.char_value(s0) < 1e-3:
                continue
            if classify(prob, s0, 21).stop_index is not None:
                continue
            if min(abs(float(s))
                   for s in s_sequence(prob, s0, 21).values) < 0.05:
                continue
            sol = LebesgueSolution.from_circle(prob, s0, phase)
            traj = solution_trajectory(sol, 20)
            if min(abs(abs(bv) - 1.0) for bv in traj.b) < 0.05:
                continue
            break
        else:
            raise AssertionError("no admissible draw for seed %d" % i)
        st = inverse_init_i2([sol.b1], ComplexPoly([sol.x0, 1.0]), 1)
        rep = run_inverse(st, [0.0] * 24, [sol.b1], 20)
        assert not rep.failed
        dev = max(abs(x - y) for x, y in zip(rep.produced, traj.b))
        worst = max(worst, dev)
    assert worst < 1e-9
    print("criterion 7: PASS - closed form vs generic inverse, "
          "worst %.3e over 20 chains" % worst)


def test_criterion_08_constant_parameter_families():
    """30 random constant-parameter pairs (r = 2) plus the r = 1 bisector
    family: defining relations hold well under the pinned tolerances."""
    worst_rel = worst_y = 0.0
    for i in range(30):
        rng = np.random.default_rng([2608, i])
        a = _disk(rng, 0.9)
        b1 = _disk(rng, 0.9)
        b2 = _disk(rng, 0.9)
        sol = constant_solution(a, [b1, b2])
        worst_rel = max(worst_rel, verify_constant_relation(sol, 15))
        # conj(a) Y = b Y*: Y is a unit multiple of a self-reciprocal
        # polynomial.
        res = poly_dist(a.conjugate() * sol.y,
                        complex(sol.b_tail) * sol.y_star)
        worst_y = max(worst_y, res / max(sol.y.max_abs(), 1e-30))
    assert worst_rel < 1e-10
    assert worst_y < 1e-12

    worst_bi = 0.0
    for i in range(10):
        rng = np.random.default_rng([2618, i])
        while True:
            b1 = _disk(rng, 0.9)
            if abs(1.0 + b1) >= 0.1:
                break
        y = 1.0 + b1
        yhat = y / abs(y)
        b_seq = [b1]
        a_seq = []
        while len(a_seq) < 10:
            a_n = y / 2.0 + 1j * rng.uniform(-1.5, 1.5) * yhat
            if abs(1.0 - abs(a_n)) < 0.05:
                continue
            a_seq.append(a_n)
            b_seq.append(bisector_family_step(b_seq[0], a_n))
        ufam = szego_forward(a_seq, 10)
        vfam = szego_forward(b_seq, 11)
        x = ComplexPoly([-1.0, 1.0])
        for n in range(10):
            lhs = vfam.psi(n + 1)
            rhs = x * ufam.psi(n) + y * ufam.psi_star(n)
            worst_bi = max(worst_bi,
                           poly_dist(lhs, rhs) / max(lhs.max_abs(), 1.0))
    assert worst_bi < 1e-10
    print("criterion 8: PASS - constant families %.3e, Y symmetry %.3e, "
          "bisector %.3e" % (worst_rel, worst_y, worst_bi))


def test_criterion_09_degree_one_perturbation_families():
    """30 random admissible (a_1, b_1): unimodular multiplier, moment-level
    proportionality, and the rotation form of the parameter sequence."""
    worst_lam = worst_ver = worst_rot = 0.0
    for i in range(30):
        rng = np.random.default_rng([2609, i])
        while True:
            a1 = _disk(rng, 0.85)
            b1 = _disk(rng, 0.85)
            if abs(a1 - b1) >= 0.05:
                break
        sol = associated_solution(a1, b1)
        worst_lam = max(worst_lam, abs(abs(sol.lam) - 1.0))
        worst_ver = max(worst_ver, verify_associated(sol, 15))
        worst_rot = max(worst_rot, rotation_residual(sol, 12))
    assert worst_lam < 1e-12
    assert worst_ver < 1e-9
    assert worst_rot < 1e-10
    print("criterion 9: PASS - |lambda| %.3e, verification %.3e, "
          "rotation %.3e" % (worst_lam, worst_ver, worst_rot))


def test_criterion_10_recurrence_infrastructure():
    """Moments <-> parameters round trip, the transfer-matrix product
    identity, and two independent computations of the epsilon ladder."""
    worst_rt = 0.0
    worst_form = 0.0
    for i in range(10):
        rng = np.random.default_rng([2610, i])
        b = [_disk(rng, 0.85) for _ in range(12)]
        m = schur_to_moments(b, 12)
        ext = moments_to_schur(m)
        assert ext.stop_index is None
        worst_rt = max(worst_rt,
                       max(abs(x - y) for x, y in zip(ext.schur.params, b)))
        fam = szego_forward(b, 12)
        for j in range(1, 13):
            eps_form = m.form(fam.psi(j), fam.psi(j))
            worst_form = max(worst_form, abs(eps_form - fam.eps[j]))
    assert worst_rt < 1e-9
    assert worst_form < 1e-9

    # (psi_n, psi_n*) equals the ordered product of one-step transfer
    # matrices applied to the constant column (1, 1).
    worst_tr = 0.0
    for i in range(3):
        rng = np.random.default_rng([2620, i])
        b = [_disk(rng, 0.85) for _ in range(8)]
        fam = szego_forward(b, 8)
        acc = mat2(ComplexPoly.one(), ComplexPoly([]),
                   ComplexPoly([]), ComplexPoly.one())
        for j in range(1, 9):
            acc = mat2_mul(TransferMatrix(b[j - 1]).entries(), acc)
            psi = acc[0][0] + acc[0][1]
            star = acc[1][0] + acc[1][1]
            scale = max(fam.psi(j).max_abs(), 1.0)
            worst_tr = max(worst_tr,
                           poly_dist(psi, fam.psi(j)) / scale,
                           poly_dist(star, fam.psi_star(j)) / scale)
    assert worst_tr < 1e-12

    # Cross-check the two normalisation ladders through the pivots:
    # mu_0 prod_{j<=n}(1-|a_j|^2) = C_n(0) eps_{n+r}(v).
    worst_eps = 0.0
    for i in range(6):
        rng = np.random.default_rng([2611, i])
        r = 1 + (i % 3)
        b, lau, mu = modified_pair(rng, r, 9)
        rep = run_direct(lau, b, 8)
        assert not rep.failed
        eps_u = szego_forward(rep.produced, 8).eps
        eps_v = szego_forward(b, 8 + r).eps
        mu0 = complex(mu.moment(0)).real
        for n in range(9):
            dev = abs(mu0 * eps_u[n]
                      - complex(rep.matrices[n].c0).real * eps_v[n + r])
            worst_eps = max(worst_eps, dev)
    assert worst_eps < 1e-9
    print("criterion 10: PASS - round trip %.3e, transfer identity %.3e, "
          "eps ladders %.3e" % (worst_rt, worst_tr, worst_eps))
