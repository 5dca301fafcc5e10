import json
import math

import numpy as np
import pytest
from hypothesis import given

from splitoct.algebra import (
    Q,
    SIGNATURE,
    STRUCTURE_TABLE,
    STRUCTURE_TENSOR,
    UNIT_NAMES,
    BasisUnit,
    Octonion,
    associator,
    basis_mul,
    generate_table,
    left_matrix,
    mul_coeffs,
    norm_coeffs,
    right_matrix,
    signature_counts,
)

from conftest import magnitude, octonions

u = Octonion.unit


def test_frozen_table_matches_generating_relations():
    assert generate_table() == STRUCTURE_TABLE


def test_unit_squares():
    squares = [STRUCTURE_TABLE[a][a] for a in range(8)]
    assert squares == [(1, 0), (1, 0), (1, 0), (1, 0), (-1, 0), (-1, 0), (-1, 0), (1, 0)]


@pytest.mark.parametrize("a, b, sign, c", [
    ("J1", "J2", 1, "j3"),
    ("J2", "J1", -1, "j3"),
    ("j1", "j2", 1, "j3"),
    ("J1", "j2", -1, "J3"),
    ("j2", "J1", 1, "J3"),
    ("J1", "j1", 1, "I"),
    ("j1", "J1", -1, "I"),
    ("J1", "I", 1, "j1"),
    ("I", "J1", -1, "j1"),
    ("j1", "I", 1, "J1"),
    ("I", "j1", -1, "J1"),
])
def test_basis_products(a, b, sign, c):
    assert basis_mul(a, b) == (sign, BasisUnit.parse(c))
    assert (u(a) * u(b)) == sign * u(c)


def test_each_row_is_signed_permutation():
    for a in range(8):
        assert sorted(k for _, k in STRUCTURE_TABLE[a]) == list(range(8))
    assert np.all(np.abs(STRUCTURE_TENSOR).sum(axis=2) == 1)


def test_signature():
    assert SIGNATURE == (1, -1, -1, -1, 1, 1, 1, -1)
    assert signature_counts() == (4, 4)
    assert np.array_equal(np.diag(Q), SIGNATURE)


def test_norm_example():
    s = Octonion([1, 2, 3, 4, 5, 6, 7, 8])
    assert s.norm() == 1 - 4 - 9 - 16 + 25 + 36 + 49 - 64


def test_zero_divisor():
    a = u("1") + u("J1")
    b = u("1") - u("J1")
    assert a.norm() == 0
    assert a * b == Octonion.zero()


def test_non_associative_example():
    # (J1 J2) j1 differs from J1 (J2 j1)
    assert associator(u("J1"), u("J2"), u("j1")) != Octonion.zero()


def test_left_right_matrices():
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=8), rng.normal(size=8)
    assert np.allclose(left_matrix(a) @ b, mul_coeffs(a, b))
    assert np.allclose(right_matrix(b) @ a, mul_coeffs(a, b))


def test_batched_kernels_match_scalar():
    rng = np.random.default_rng(4)
    a, b = rng.normal(size=(5, 8)), rng.normal(size=(5, 8))
    batch = mul_coeffs(a, b)
    for i in range(5):
        assert np.allclose(batch[i], (Octonion(a[i]) * Octonion(b[i])).coeff)
    assert np.allclose(norm_coeffs(a), [Octonion(r).norm() for r in a])


def test_octonion_is_immutable():
    s = Octonion(range(8))
    with pytest.raises(ValueError):
        s.coeff[0] = 9.0


@pytest.mark.parametrize("bad", [[1.0] * 7, [1.0] * 9, [math.nan] + [0.0] * 7, [math.inf] * 8])
def test_rejects_bad_coefficients(bad):
    with pytest.raises(ValueError):
        Octonion(bad)


def test_json_round_trip():
    s = Octonion([0.5, -1, 2, 3, 4, 5, 6, 7])
    assert Octonion.from_json(json.loads(json.dumps(s.to_json()))) == s


def test_unknown_unit():
    with pytest.raises(ValueError, match="unknown basis unit"):
        BasisUnit.parse("k1")


def test_names():
    assert UNIT_NAMES == ("1", "J1", "J2", "J3", "j1", "j2", "j3", "I")
    assert BasisUnit.parse("j2").square_sign == -1
    assert BasisUnit.parse("I").square_sign == 1


@given(octonions, octonions)
def test_norm_is_multiplicative(a, b):
    lhs, rhs = (a * b).norm(), a.norm() * b.norm()
    assert abs(lhs - rhs) <= 1e-12 * (1 + magnitude(a, a, b, b))


@given(octonions, octonions)
def test_conjugate_reverses_products(a, b):
    diff = (a * b).conj() - b.conj() * a.conj()
    assert np.max(np.abs(diff.coeff)) <= 1e-12 * (1 + magnitude(a, b))


@given(octonions)
def test_norm_from_conjugate(a):
    prod = a * a.conj()
    assert abs(prod.coeff[0] - a.norm()) <= 1e-12 * (1 + magnitude(a, a))
    assert np.max(np.abs(prod.coeff[1:])) <= 1e-12 * (1 + magnitude(a, a))


@given(octonions, octonions)
def test_alternative(a, b):
    scale = 1e-12 * (1 + magnitude(a, a, b) + magnitude(a, b, b))
    assert np.max(np.abs(associator(a, a, b).coeff)) <= scale
    assert np.max(np.abs(associator(a, b, b).coeff)) <= scale
    assert np.max(np.abs(associator(a, b, a).coeff)) <= scale
