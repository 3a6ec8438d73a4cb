import itertools

import numpy as np
import pytest

from spinlab.algebra import E, SIGMA_X, delta_block, equal_up_to_global_phase, spin_operator, matrix_exponential
from spinlab.oracle import (
    PAPER_FUNCTIONS,
    BooleanFunction,
    FunctionClass,
    all_functions,
    classify,
    correction_is_trivial,
    delta_form,
    experimental_unitary,
    oracle_unitary,
    phase_correction,
)

LABELS = list(PAPER_FUNCTIONS)
X2 = 2 * SIGMA_X


def test_classify_examples():
    assert classify(PAPER_FUNCTIONS["f1"]) is FunctionClass.CONSTANT
    assert classify(PAPER_FUNCTIONS["f4"]) is FunctionClass.BALANCED
    assert classify(BooleanFunction((0, 0, 0, 1))) is FunctionClass.NEITHER


def test_class_counts():
    classes = [classify(f) for f in all_functions()]
    assert classes.count(FunctionClass.CONSTANT) == 2
    assert classes.count(FunctionClass.BALANCED) == 6


def test_parse():
    assert BooleanFunction.parse("f8") is PAPER_FUNCTIONS["f8"]
    assert BooleanFunction.parse("1100").label == "f4"
    assert BooleanFunction.parse("0001").name == "0001"
    for bad in ("f9", "012", "11000"):
        with pytest.raises(ValueError):
            BooleanFunction.parse(bad)
    with pytest.raises(ValueError):
        BooleanFunction((1, 1, 1, 1), "f1")


def test_u4_literal():
    u = oracle_unitary(PAPER_FUNCTIONS["f4"])
    expected = np.eye(8)
    expected[:4, :4] = np.kron(np.eye(2), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(u, expected)
    np.testing.assert_array_equal(oracle_unitary(PAPER_FUNCTIONS["f1"]), np.eye(8))


@pytest.mark.parametrize("f", all_functions(), ids=lambda f: f.name)
def test_oracle_is_self_inverse_permutation(f):
    u = oracle_unitary(f)
    assert set(np.unique(u.real)) <= {0.0, 1.0} and not u.imag.any()
    np.testing.assert_array_equal(u.sum(axis=0), 1)
    np.testing.assert_array_equal(u @ u, np.eye(8))
    for s in (1, 2):
        d = spin_operator(s, "z")
        np.testing.assert_array_equal(u @ d, d @ u)
    for i, j, k in itertools.product((0, 1), repeat=3):
        dst = 4 * i + 2 * j + (k ^ f(i, j))
        assert u[dst, 4 * i + 2 * j + k] == 1


def test_delta_form_examples():
    f8 = delta_form(PAPER_FUNCTIONS["f8"])
    for got, want in zip(f8, (E, X2, X2, E)):
        np.testing.assert_array_equal(got, want)
    assert all(np.array_equal(b, X2) for b in delta_form(PAPER_FUNCTIONS["f2"]))
    assert all(np.array_equal(b, E) for b in delta_form(PAPER_FUNCTIONS["f1"]))


@pytest.mark.parametrize("label", LABELS)
def test_delta_form_matches_oracle(label):
    f = PAPER_FUNCTIONS[label]
    np.testing.assert_array_equal(delta_block(*delta_form(f)), oracle_unitary(f))


def test_experimental_unitary_examples():
    np.testing.assert_array_equal(
        experimental_unitary(PAPER_FUNCTIONS["f4"]), delta_block(2j * SIGMA_X, 2j * SIGMA_X, E, E)
    )
    np.testing.assert_array_equal(experimental_unitary(PAPER_FUNCTIONS["f2"]), delta_block(*[2j * SIGMA_X] * 4))
    np.testing.assert_array_equal(experimental_unitary(PAPER_FUNCTIONS["f1"]), np.eye(8))


@pytest.mark.parametrize("label", LABELS[1:])
def test_experimental_square_is_sign_flip(label):
    u = experimental_unitary(PAPER_FUNCTIONS[label])
    sq = u @ u
    assert np.allclose(sq, np.diag(np.diag(sq)))
    assert set(np.round(np.diag(sq).real).astype(int)) <= {-1, 1}
    assert (np.diag(sq).real < 0).any()


@pytest.mark.parametrize("label", LABELS)
def test_phase_correction_factorization(label):
    f = PAPER_FUNCTIONS[label]
    np.testing.assert_allclose(oracle_unitary(f), experimental_unitary(f) @ phase_correction(f), atol=0)


def test_phase_correction_f4_is_z_rotation_on_i():
    d = phase_correction(PAPER_FUNCTIONS["f4"])
    np.testing.assert_array_equal(d, delta_block(-1j * E, -1j * E, E, E))
    rz = matrix_exponential(spin_operator(1, "z"), np.pi / 2)
    assert equal_up_to_global_phase(d, rz)


def test_phase_correction_f7():
    np.testing.assert_array_equal(
        phase_correction(PAPER_FUNCTIONS["f7"]), delta_block(-1j * E, E, E, -1j * E)
    )


def test_correction_trivial_only_for_constants():
    trivial = [k for k, f in PAPER_FUNCTIONS.items() if correction_is_trivial(f)]
    assert trivial == ["f1", "f2"]
    # f2 is -i times the identity: trivial only up to global phase
    np.testing.assert_array_equal(phase_correction(PAPER_FUNCTIONS["f2"]), -1j * np.eye(8))
