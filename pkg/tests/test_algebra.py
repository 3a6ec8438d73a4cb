import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinlab.algebra import (
    E,
    SIGMA_X,
    BasisExpansion,
    Term,
    basis_terms,
    conjugate,
    delta_block,
    equal_up_to_global_phase,
    expand,
    fidelity,
    is_hermitian,
    is_unitary,
    matrix_exponential,
    product_operator,
    spin_operator,
    total_spin_operator,
)

from conftest import random_hermitian, random_unitary

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_spin_operator_iz():
    np.testing.assert_array_equal(np.diag(spin_operator(1, "z")), [0.5] * 4 + [-0.5] * 4)


def test_spin_operator_rx_couples_k():
    rx = spin_operator(3, "x")
    expected = np.kron(np.eye(4), [[0, 0.5], [0.5, 0]])
    np.testing.assert_array_equal(rx, expected)


def test_spin_operator_trace_square():
    sy = spin_operator(2, "y")
    assert np.trace(sy @ sy).real == pytest.approx(2.0)
    assert is_hermitian(sy) and abs(np.trace(sy)) == 0


@pytest.mark.parametrize("spin,axis", [(0, "x"), (4, "z"), (1, "w")])
def test_spin_operator_rejects(spin, axis):
    with pytest.raises(ValueError):
        spin_operator(spin, axis)


def test_product_operator_izszrz():
    np.testing.assert_allclose(np.diag(product_operator("4IzSzRz")), [0.5, -0.5, -0.5, 0.5, -0.5, 0.5, 0.5, -0.5])


def test_product_operator_ixsx_and_identity():
    m = product_operator("2IxSx")
    assert is_hermitian(m)
    assert np.trace(m @ m).real == pytest.approx(2.0)
    np.testing.assert_array_equal(product_operator("E"), np.eye(8))


def test_term_parse_validates_prefix():
    assert Term.parse("2IyRx") == Term.of({1: "y", 3: "x"})
    with pytest.raises(ValueError):
        Term.parse("IyRx")
    with pytest.raises(ValueError):
        Term.parse("4IyRx")


def test_basis_orthogonality():
    terms = basis_terms()
    assert len(terms) == 64
    mats = np.array([product_operator(t) for t in terms])
    gram = np.einsum("aij,bji->ab", mats, mats).real
    expected = 2 * np.eye(64)
    expected[0, 0] = 8  # identity term
    np.testing.assert_allclose(gram, expected, atol=1e-12)


def test_expand_pseudo_pure_000():
    psi = np.zeros(8)
    psi[0] = 1
    rho = 4 * (np.outer(psi, psi) - np.eye(8) / 8)
    e = expand(rho)
    listed = BasisExpansion.parse("Iz + Sz + Rz + 2IzSz + 2IzRz + 2SzRz + 4IzSzRz")
    assert e.isclose(listed)
    assert len(e.nonzero()) == 7


def test_expand_identity_and_sum():
    assert expand(np.eye(8)).render() == "E"
    e = expand(spin_operator(1, "x") + product_operator("2IxSx"))
    assert e.render() == "Ix + 2IxSx"


def test_expand_rejects_bad_dimension():
    with pytest.raises(ValueError):
        expand(np.eye(6))


def test_render_canonical_form():
    e = BasisExpansion.parse("-4IySzRx + Rx - 0.5*Sx")
    assert e.render() == "-0.5*Sx + Rx - 4IySzRx"
    assert BasisExpansion().render() == "0"


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_expand_round_trip(seed):
    h = random_hermitian(np.random.default_rng(seed))
    e = expand(h)
    assert e.max_imag() <= 1e-10
    np.testing.assert_allclose(e.to_operator(), h, atol=1e-10, rtol=0)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_conjugation_preserves_trace_and_hermiticity(seed):
    rng = np.random.default_rng(seed)
    a, u = random_hermitian(rng), random_unitary(rng)
    b = conjugate(u, a)
    assert np.trace(b) == pytest.approx(np.trace(a), abs=1e-10)
    assert is_hermitian(b, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(seeds, st.floats(-3, 3), st.floats(-3, 3))
def test_exponential_group_property(seed, t, s):
    h = random_hermitian(np.random.default_rng(seed))
    lhs = matrix_exponential(h, t) @ matrix_exponential(h, s)
    np.testing.assert_allclose(lhs, matrix_exponential(h, t + s), atol=1e-9, rtol=0)


def test_delta_block_u4():
    u4 = delta_block(2 * SIGMA_X, 2 * SIGMA_X, E, E)
    expected = np.zeros((8, 8))
    for src, dst in [(0, 1), (1, 0), (2, 3), (3, 2), (4, 4), (5, 5), (6, 6), (7, 7)]:
        expected[dst, src] = 1
    np.testing.assert_array_equal(u4, expected)
    np.testing.assert_array_equal(delta_block(E, E, E, E), np.eye(8))


def test_delta_block_unitary_and_square():
    d = delta_block(2j * SIGMA_X, E, E, E)
    assert is_unitary(d)
    np.testing.assert_allclose(d @ d, delta_block(-E, E, E, E), atol=1e-15)


def test_delta_block_rejects_bad_block():
    with pytest.raises(ValueError):
        delta_block(np.eye(3), E, E, E)


def test_matrix_exponential_basics():
    np.testing.assert_array_equal(matrix_exponential(np.zeros((8, 8)), 5.0), np.eye(8))
    nu = 10.0
    u = matrix_exponential(2 * math.pi * nu * spin_operator(1, "z"), 1 / (4 * nu))
    expected = np.diag([np.exp(-1j * math.pi / 4)] * 4 + [np.exp(1j * math.pi / 4)] * 4)
    np.testing.assert_allclose(u, expected, atol=1e-12)
    with pytest.raises(ValueError):
        matrix_exponential(np.triu(np.ones((8, 8))))


def test_selective_hamiltonian_gives_pulsed_block():
    # Rx + 2IzRx + 2SzRx + 4IzSzRx is 4 Rx restricted to the (0,0) block
    op = BasisExpansion.parse("Rx + 2IzRx + 2SzRx + 4IzSzRx").to_operator()
    target = delta_block(2j * SIGMA_X, E, E, E)
    # a pi rotation about -x on that block is +i Pauli-X
    np.testing.assert_allclose(matrix_exponential(-math.pi / 4 * op), target, atol=1e-12)
    # about +x the block picks up the opposite sign
    np.testing.assert_allclose(matrix_exponential(math.pi / 4 * op), target.conj(), atol=1e-12)


def test_fidelity_values():
    rng = np.random.default_rng(0)
    u = random_unitary(rng)
    assert fidelity(u, u) == pytest.approx(1.0)
    assert fidelity(u, 1j * u) == pytest.approx(1.0)
    a = delta_block(2 * SIGMA_X, 2 * SIGMA_X, E, E)
    b = delta_block(2j * SIGMA_X, 2j * SIGMA_X, E, E)
    assert fidelity(a, b) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    with pytest.raises(ValueError):
        fidelity(np.eye(4), np.eye(8))


def test_global_phase_equality():
    u = random_unitary(np.random.default_rng(1))
    assert equal_up_to_global_phase(u, np.exp(0.3j) * u)
    assert not equal_up_to_global_phase(u, np.eye(8))


def test_total_spin_operator():
    np.testing.assert_allclose(
        total_spin_operator("x"), sum(spin_operator(s, "x") for s in (1, 2, 3))
    )
