"""Szegő recurrence, moments, and the Christoffel-Darboux kernel.

The frozen moment values below were derived by hand from the recurrence:
with b = (1/2, -1/4, i/2),

    psi_1 = z + 1/2
    psi_2 = z^2 + (3/8) z - 1/4
    psi_3 = z^3 + (3/8 - i/8) z^2 + (-1/4 + 3i/16) z + i/2

and functional[psi_j] = 0 pins each next moment:

    m_0 = 1,  m_1 = -1/2,  m_2 = 7/16,  m_3 = -37/128 - 45i/128

with eps ladder (1, 3/4, 45/64, 135/256).  All values are dyadic, hence
exact in floating point.
"""

import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opucmod.algebra import ComplexPoly, HermitianLaurent, poly_dist, reverse
from opucmod.opuc_core import (
    MomentSequence,
    SchurSequence,
    TransferMatrix,
    apply_laurent,
    cd_kernel,
    cd_kernel_quotient,
    moments_to_schur,
    schur_to_moments,
    szego_forward,
)

B3 = (0.5, -0.25, 0.5j)
M3 = (1.0, -0.5, 7 / 16, complex(-37, -45) / 128)
EPS3 = (1.0, 0.75, 45 / 64, 135 / 256)

disk = st.complex_numbers(max_magnitude=0.85, allow_nan=False,
                          allow_infinity=False)


# ---------------------------------------------------------------------------
# Forward recurrence

def test_free_family_is_monomials():
    fam = szego_forward([0.0] * 5)
    for j in range(6):
        assert fam.psi(j).coeffs == ComplexPoly.monomial(j).coeffs
        assert fam.psi_star(j).coeffs == (1,)


def test_forward_frozen_family():
    fam = szego_forward(B3)
    assert fam.psi(1).coeffs == (0.5, 1)
    assert fam.psi(2).coeffs == (-0.25, 3 / 8, 1)
    assert fam.psi(3).coeffs == (0.5j, -0.25 + 3j / 16, 3 / 8 - 1j / 8, 1)
    assert fam.eps == EPS3


def test_star_is_reversal_of_psi():
    fam = szego_forward(B3)
    for j in range(4):
        assert poly_dist(fam.psi_star(j), reverse(fam.psi(j), j)) == 0.0


def test_schur_parameter_is_constant_term():
    fam = szego_forward(B3)
    for j, b in enumerate(B3, start=1):
        assert fam.psi(j).coeff(0) == b


def test_transfer_matrix_identity():
    # [[z, b], [z conj(b), 1]] applied to (psi, psi*) advances both rows
    pair = szego_forward(B3, 2).pairs[2]
    nxt = TransferMatrix(0.5j).apply(pair)
    fam = szego_forward(B3)
    assert poly_dist(nxt.poly, fam.psi(3)) == 0.0
    assert poly_dist(nxt.star, fam.psi_star(3)) == 0.0
    assert nxt.n == 3


def test_unit_modulus_params_flagged_but_run():
    fam = szego_forward([0.5, 1.0, 0.25])
    assert fam.unit_modulus == (2,)
    assert fam.eps[2] == 0.0
    assert fam.psi(3).degree == 3     # recurrence itself keeps going


# ---------------------------------------------------------------------------
# Moments

def test_schur_to_moments_frozen():
    m = schur_to_moments(B3)
    assert m.values == M3


def test_moments_to_schur_frozen():
    ext = moments_to_schur(MomentSequence(M3))
    assert ext.stop_index is None
    assert max(abs(x - y) for x, y in zip(ext.schur.params, B3)) < 1e-14
    assert max(abs(x - y) for x, y in zip(ext.eps, EPS3)) < 1e-14


def test_moment_functional_annihilates_mops():
    m = schur_to_moments(B3)
    fam = szego_forward(B3)
    for j in range(1, 4):
        assert abs(m.act(fam.psi(j))) < 1e-15
    # ... and the form recovers the eps ladder on the diagonal
    for j in range(4):
        assert abs(m.form(fam.psi(j), fam.psi(j)) - EPS3[j]) < 1e-14


def test_orthogonality_of_distinct_degrees():
    m = schur_to_moments(B3)
    fam = szego_forward(B3)
    for i in range(4):
        for j in range(i):
            assert abs(m.form(fam.psi(i), fam.psi(j))) < 1e-14


def test_negative_moments_are_conjugates():
    m = MomentSequence(M3)
    assert m.moment(-3) == M3[3].conjugate()


def test_m0_must_be_real():
    with pytest.raises(ValueError):
        MomentSequence((1j,))


def test_moments_to_schur_stop_on_collapsed_m0():
    ext = moments_to_schur(MomentSequence((0.0, 1.0)))
    assert ext.stop_index == 0
    assert len(ext.schur.params) == 0


def test_moments_to_schur_detects_unit_modulus():
    # b_2 on the circle: eps_2 = 0, exactly 2 orthogonal polynomials survive
    m = schur_to_moments([0.5, 1.0, 0.25])
    ext = moments_to_schur(m)
    assert ext.stop_index == 2
    assert abs(abs(ext.schur.params[1]) - 1.0) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(disk, min_size=1, max_size=6))
def test_moment_schur_roundtrip(b):
    ext = moments_to_schur(schur_to_moments(b))
    assert ext.stop_index is None
    assert max(abs(x - y) for x, y in zip(ext.schur.params, b)) < 1e-9


def test_eps0_scaling_propagates():
    m = schur_to_moments(SchurSequence(B3, eps0=2.0))
    assert m.values[0] == 2.0
    ext = moments_to_schur(m)
    assert abs(ext.eps[0] - 2.0) < 1e-14
    assert max(abs(x - y) for x, y in zip(ext.schur.params, B3)) < 1e-12


# ---------------------------------------------------------------------------
# Laurent modification at the moment level

def test_apply_laurent_banded_sum():
    lau = HermitianLaurent(ComplexPoly([0.5, 1 + 0.25j]))
    m = MomentSequence(M3)
    mu = apply_laurent(m, lau)
    for n in range(3):
        expect = ((1 - 0.25j) * m.moment(n - 1) + 1.0 * m.moment(n)
                  + (1 + 0.25j) * m.moment(n + 1))
        assert abs(mu.values[n] - expect) < 1e-15
    with pytest.raises(ValueError):
        apply_laurent(MomentSequence((1.0,)), lau)


# ---------------------------------------------------------------------------
# Christoffel-Darboux kernel

def test_cd_kernel_two_forms_agree():
    z, w = 0.4 + 0.3j, -0.2 + 0.6j
    k1 = cd_kernel(B3, 2, z, w)
    k2 = cd_kernel_quotient(B3, 2, z, w)
    assert abs(k1 - k2) < 1e-12


def test_cd_kernel_hermitian_and_positive_on_diagonal():
    z, w = 0.4 + 0.3j, -0.2 + 0.6j
    k_zw = cd_kernel(B3, 3, z, w)
    k_wz = cd_kernel(B3, 3, w, z)
    assert abs(k_zw - k_wz.conjugate()) < 1e-12
    diag = cd_kernel(B3, 3, z, z)
    assert abs(diag.imag) < 1e-12 and diag.real > 0


def test_mop_expansion_reconstructs_polynomial():
    # p = sum_j (psi_j, p)/eps_j psi_j for p of matching degree; combined
    # with the kernel sum this is the reproducing property of K_n
    m = schur_to_moments(B3)
    fam = szego_forward(B3)
    z = 0.3 - 0.5j
    p = ComplexPoly([1, 2j, -0.5])
    acc = sum(m.form(fam.psi(j), p) / EPS3[j] * fam.psi(j)(z)
              for j in range(3))
    assert abs(acc - p(z)) < 1e-12


def test_cd_kernel_rejects_dead_ladder():
    with pytest.raises(ValueError):
        cd_kernel([0.5, 1.0, 0.25], 3, 0.1, 0.2)


def test_quasi_definite_flag():
    seq = SchurSequence((0.5, 1.0, 0.25))
    assert seq.quasi_definite_in(1)
    assert not seq.quasi_definite_in(2)
    assert seq.unit_modulus_indices() == [2]
    with pytest.raises(ValueError):
        seq.quasi_definite_in(4)
