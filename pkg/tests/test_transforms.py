import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from splitoct import transforms as tr
from splitoct.algebra import Q, UNIT_NAMES, Octonion

from conftest import magnitude, octonions, small

AXES = UNIT_NAMES[1:]
u = Octonion.unit


@pytest.mark.parametrize("axis", AXES)
def test_rotor_has_unit_norm(axis):
    for p in (-2.0, -0.3, 0.0, 0.7, 1.9):
        assert math.isclose(tr.rotor_exp(axis, p).norm(), 1.0, rel_tol=0, abs_tol=1e-12 * math.cosh(p) ** 2)


def test_hyperbolic_rotor_example():
    r = tr.rotor_exp("I", math.log(2))
    assert r.isclose(Octonion.from_terms(one=1.25, I=0.75), atol=1e-15)


def test_circular_rotor_example():
    r = tr.rotor_exp("j2", math.pi / 2)
    assert r.isclose(u("j2"), atol=1e-15)


@pytest.mark.parametrize("axis", AXES)
def test_rotor_matches_matrix_exponential(axis):
    g = tr.left_mult_generator(axis)
    for p in (0.4, -1.1):
        assert np.allclose(expm(p * g), tr.left_mult_matrix(tr.rotor_exp(axis, p)), atol=1e-12)


@pytest.mark.parametrize("axis", AXES)
@given(p=small, q=small)
def test_one_parameter_subgroup(axis, p, q):
    lhs = tr.rotor_exp(axis, p) * tr.rotor_exp(axis, q)
    assert lhs.isclose(tr.rotor_exp(axis, p + q), atol=1e-12 * math.cosh(abs(p) + abs(q)) ** 2)


def test_invalid_axis():
    with pytest.raises(tr.InvalidAxisError):
        tr.rotor_exp("1", 0.1)
    with pytest.raises(tr.InvalidAxisError):
        tr.rotor_exp("k", 0.1)


def test_j1_planes():
    planes = tr.rotation_planes("j1")
    assert [p.names for p in planes] == [("1", "j1"), ("J3", "J2"), ("j2", "j3"), ("I", "J1")]
    assert [p.label for p in planes] == ["t", "x", "lambda", "omega"]


@pytest.mark.parametrize("axis", AXES)
def test_planes_partition_basis_and_follow_table(axis):
    planes = tr.rotation_planes(axis)
    assert sorted(i for p in planes for i in (p.base, p.partner)) == list(range(8))
    a = u(axis)
    for p in planes:
        assert a * u(p.base) == p.sign * u(p.partner)


def test_circular_decomposition_example():
    d = tr.decompose_circular(Octonion.from_terms(one=3, j1=4), "j1")
    t = d.planes[0]
    assert t.norm == 5.0
    assert math.isclose(t.angle, 0.927295218, abs_tol=1e-9)
    assert all(r.norm == 0 and r.angle == 0 for r in d.planes[1:])


def test_zero_decomposes_to_zeros():
    d = tr.decompose(Octonion.zero(), "j3")
    assert all(r.norm == 0 and r.angle == 0 for r in d.planes)
    assert tr.reconstruct(d) == Octonion.zero()


def test_hyperbolic_decomposition_example():
    s = Octonion.from_terms(one=5, I=3, J1=2, J2=2, J3=2)
    d = tr.decompose_hyperbolic(s, "I")
    assert math.isclose(d.planes[0].norm, 4.0)
    assert math.isclose(d.planes[0].angle, math.atanh(0.6))


def test_hyperbolic_null_plane_rejected():
    with pytest.raises(tr.DecompositionError) as info:
        tr.decompose(u("1") + u("I"), "I")
    assert (0, 7) in info.value.planes
    assert "(1,I)" in str(info.value)


def test_wrong_decomposition_kind():
    with pytest.raises(tr.InvalidAxisError):
        tr.decompose_circular(u("1"), "J1")
    with pytest.raises(tr.InvalidAxisError):
        tr.decompose_hyperbolic(u("1"), "j1")


@pytest.mark.parametrize("axis", ["j1", "j2", "j3"])
@given(s=octonions)
def test_circular_round_trip(axis, s):
    d = tr.decompose(s, axis)
    err = np.max(np.abs(tr.reconstruct(d).coeff - s.coeff))
    assert err <= 1e-12 * (1 + magnitude(s))
    assert abs(d.signed_norm_sum() - s.norm()) <= 1e-12 * (1 + magnitude(s, s))


@pytest.mark.parametrize("axis", ["J1", "J2", "J3", "I"])
def test_hyperbolic_round_trip(axis, rng):
    for _ in range(200):
        d_true = rng.uniform(-1, 1, size=4)
        amps = rng.uniform(0.5, 5, size=4) * rng.choice([-1, 1], size=4)
        planes = tr.rotation_planes(axis)
        c = np.zeros(8)
        for pl, n, th in zip(planes, amps, d_true):
            c[pl.base] = n * math.cosh(th)
            c[pl.partner] = pl.sign * n * math.sinh(th)
        s = Octonion(c)
        d = tr.decompose(s, axis)
        assert np.allclose([r.angle for r in d.planes], d_true, atol=1e-12)
        assert np.allclose([r.norm for r in d.planes], amps, atol=1e-12)
        assert tr.reconstruct(d).isclose(s, atol=1e-12)


@pytest.mark.parametrize("axis", ["j1", "j2", "j3"])
@given(s=octonions, phases=st.lists(small, min_size=4, max_size=4))
def test_passive_rotation_shifts_angles(axis, s, phases):
    d = tr.decompose(s, axis)
    shifted = tr.PlaneDecomposition(d.axis, d.kind, tuple(
        tr.PlaneRecord(r.plane, r.norm, r.norm2, r.angle + ph) for r, ph in zip(d.planes, phases)))
    out = tr.passive_rotate(s, axis, phases)
    assert out.isclose(tr.reconstruct(shifted), atol=1e-12 * (1 + magnitude(s)))


@pytest.mark.parametrize("axis", AXES)
def test_equal_phases_are_left_multiplication(axis, rng):
    s = Octonion(rng.normal(size=8))
    out = tr.passive_rotate(s, axis, [0.37] * 4)
    assert out.isclose(tr.rotor_exp(axis, 0.37) * s, atol=1e-13)


@pytest.mark.parametrize("axis", AXES)
def test_passive_matrix_preserves_form_and_matches_expm(axis, rng):
    phases = rng.uniform(-1, 1, size=4)
    m = tr.passive_rotation_matrix(axis, phases)
    assert np.allclose(m.T @ Q @ m, Q, atol=1e-12)
    a = tr._axis(axis)
    gens = [g for ax, _, g in tr.passive_phase_generators() if ax == a]
    assert np.allclose(expm(sum(p * g for p, g in zip(phases, gens))), m, atol=1e-12)


def test_passive_rotation_phase_count():
    with pytest.raises(ValueError):
        tr.passive_rotate(u("1"), "j1", [0.1, 0.2, 0.3])


def test_passive_phase_generators_span_28():
    gens = [g for _, _, g in tr.passive_phase_generators()]
    assert len(gens) == 28
    assert tr.matrix_rank(gens) == 28
    assert all(tr.is_q_antisymmetric(g) for g in gens)
    assert tr.lie_closure_dim(gens) == 28


def test_boost_pure_time():
    out = tr.boost(u("1"), 1, 0.6)
    assert out.isclose(Octonion.from_terms(one=1.25, J1=0.75), atol=1e-12)


def test_boost_matches_classical_along_axis(rng):
    for n in (1, 2, 3):
        t, xn, v = rng.uniform(-2, 2), rng.uniform(-2, 2), 0.8
        c = 3.0
        s = Octonion.scalar(c * t) + xn * u(n)
        out = tr.boost(s, n, v, c)
        x = np.zeros(3)
        x[n - 1] = xn
        t1, x1 = tr.lorentz_boost_tx(t, x, n, v, c)
        assert math.isclose(out.coeff[0] / c, t1, abs_tol=1e-12)
        assert math.isclose(out.coeff[n], x1[n - 1], abs_tol=1e-12)


def test_boost_velocity_addition():
    v1, v2 = 0.5, 0.3
    composed = tr.boost(tr.boost(u("1"), 2, v1), 2, v2)
    direct = tr.boost(u("1"), 2, (v1 + v2) / (1 + v1 * v2))
    assert composed.isclose(direct, atol=1e-12)


@pytest.mark.parametrize("v", [1.0, -1.0, 2.0, math.nan])
def test_boost_rejects_superluminal(v):
    with pytest.raises(tr.InvalidVelocityError):
        tr.boost(u("1"), 1, v)


def test_left_generators():
    gens = tr.left_mult_generators()
    assert len(gens) == 7
    assert all(tr.is_q_antisymmetric(g) for g in gens)
    assert tr.matrix_rank(gens) == 7


def test_left_multiplication_closure_is_28():
    # Left translations of a non-associative algebra do not close on 7 + 14.
    assert tr.lie_closure_dim(tr.left_mult_generators()) == 28


def test_lie_closure_small_cases():
    x = np.array([[0.0, 1.0], [0.0, 0.0]])
    y = x.T
    assert tr.lie_closure_dim([x]) == 1
    assert tr.lie_closure_dim([x, y]) == 3
    with pytest.raises(ValueError):
        tr.lie_closure_dim([])
