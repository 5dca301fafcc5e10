"""Rotors, one-sided transformations and four-plane decompositions.

A rotor ``exp(A p)`` about a hypercomplex unit ``A`` is circular when
``A^2 = -1`` (the ``j_n``) and hyperbolic when ``A^2 = +1`` (``J_n`` and ``I``).
Left multiplication by a rotor acts in four mutually orthogonal coordinate
planes at once: the plane ``(1, A)`` and, for each of the three lines through
``A``, the plane spanned by the other two units on that line.

Each plane is stored as an ordered pair ``(base, partner)`` with
``A * base = sign * partner``.  For circular axes ``sign`` is always ``+1``.
For hyperbolic axes the base is the lower-indexed unit and ``sign`` may be
``-1``.

Matrices acting on coefficient vectors (``LinearMap8``) are plain
``(8, 8)`` float arrays; column ``a`` is the image of basis unit ``a``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .algebra import (
    J_UNITS,
    PSEUDOSCALAR,
    Q,
    STRUCTURE_TABLE,
    UNIT_NAMES,
    Octonion,
    j_UNITS,
    left_matrix,
    mul_coeffs,
    unit_index,
)
from .star import lines_through


class InvalidAxisError(ValueError):
    pass


class DecompositionError(ValueError):
    """Raised when a hyperbolic plane has a non-positive 2-norm."""

    def __init__(self, axis: int, planes: list[tuple[int, int]], norms2: list[float]):
        self.axis = axis
        self.planes = planes
        self.norms2 = norms2
        desc = ", ".join(
            f"({UNIT_NAMES[u]},{UNIT_NAMES[b]}) norm^2={n:.6g}" for (u, b), n in zip(planes, norms2)
        )
        super().__init__(f"hyperbolic decomposition about {UNIT_NAMES[axis]} undefined; "
                         f"non-positive planes: {desc}")


class InvalidVelocityError(ValueError):
    pass


_UNIT_VECTORS = np.eye(8)
_UNIT_VECTORS.setflags(write=False)

CIRCULAR_AXES = j_UNITS
HYPERBOLIC_AXES = (*J_UNITS, PSEUDOSCALAR)
PLANE_LABELS = ("t", "x", "lambda", "omega")


def _axis(axis) -> int:
    try:
        a = unit_index(axis)
    except ValueError as exc:
        raise InvalidAxisError(str(exc)) from None
    if a == 0:
        raise InvalidAxisError("the scalar unit cannot be a rotation axis")
    return a


def is_circular(axis) -> bool:
    return STRUCTURE_TABLE[_axis(axis)][_axis(axis)][0] < 0


def rotor_exp(axis, param: float) -> Octonion:
    """``exp(A p)`` = ``cos p + A sin p`` or ``cosh p + A sinh p``."""
    a = _axis(axis)
    c = np.zeros(8)
    if is_circular(a):
        c[0], c[a] = math.cos(param), math.sin(param)
    else:
        c[0], c[a] = math.cosh(param), math.sinh(param)
    return Octonion(c)


def left_transform(r: Octonion, s: Octonion) -> Octonion:
    return r * s


@dataclass(frozen=True)
class Plane:
    base: int
    partner: int
    sign: int  # axis * base = sign * partner
    label: str | None = None

    @property
    def names(self) -> tuple[str, str]:
        return UNIT_NAMES[self.base], UNIT_NAMES[self.partner]


def rotation_planes(axis) -> tuple[Plane, Plane, Plane, Plane]:
    return _rotation_planes(_axis(axis))


@functools.lru_cache(maxsize=None)
def _rotation_planes(a: int) -> tuple[Plane, Plane, Plane, Plane]:
    """The four planes moved by left multiplication with ``exp(A p)``.

    Circular axes are ordered (t, x, lambda, omega): the scalar plane, the
    pair of ``J`` units, the pair of ``j`` units, then the plane holding ``I``.
    Hyperbolic axes list the scalar plane first and the rest by base index.
    """
    planes = [Plane(0, a, 1)]
    for line in lines_through(a):
        u, v = (w for w in line if w != a)
        if is_circular(a):
            sign, k = STRUCTURE_TABLE[a][u]
            base, partner = (u, v) if sign > 0 else (v, u)
            planes.append(Plane(base, partner, 1))
        else:
            sign, k = STRUCTURE_TABLE[a][u]
            planes.append(Plane(u, v, sign))
    if is_circular(a):
        def kind(p: Plane) -> int:
            pair = {p.base, p.partner}
            if PSEUDOSCALAR in pair:
                return 3
            return 1 if pair <= set(J_UNITS) else 2

        rest = sorted(planes[1:], key=kind)
        planes = [planes[0], *rest]
        planes = [Plane(p.base, p.partner, p.sign, PLANE_LABELS[i]) for i, p in enumerate(planes)]
    else:
        planes = [planes[0], *sorted(planes[1:], key=lambda p: p.base)]
    return tuple(planes)  # type: ignore[return-value]


@dataclass(frozen=True)
class PlaneRecord:
    plane: Plane
    norm: float  # amplitude N; signed for hyperbolic planes
    norm2: float  # p^2 + q^2 (circular) or p^2 - q^2 (hyperbolic)
    angle: float

    def to_json(self) -> dict:
        return {
            "plane": list(self.plane.names),
            "label": self.plane.label,
            "norm": self.norm,
            "norm2": self.norm2,
            "angle": self.angle,
        }


@dataclass(frozen=True)
class PlaneDecomposition:
    axis: int
    kind: Literal["circular", "hyperbolic"]
    planes: tuple[PlaneRecord, PlaneRecord, PlaneRecord, PlaneRecord]

    def reconstruct(self) -> Octonion:
        return reconstruct(self)

    def signed_norm_sum(self) -> float:
        """Sum of plane norms weighted by the sign of each base unit.

        For a circular axis this is ``N_t^2 - N_x^2 + N_lambda^2 - N_omega^2``.
        """
        return sum(Q[r.plane.base, r.plane.base] * r.norm2 for r in self.planes)

    def to_json(self) -> dict:
        return {
            "axis": UNIT_NAMES[self.axis],
            "kind": self.kind,
            "planes": [r.to_json() for r in self.planes],
        }


def decompose_circular(s: Octonion, axis) -> PlaneDecomposition:
    """Write ``s`` as ``sum N_i exp(A theta_i) u_i`` over the planes of ``A = j_n``.

    Angles come from ``atan2`` so they live in ``(-pi, pi]``; an empty plane
    gets angle 0.
    """
    a = _axis(axis)
    if not is_circular(a):
        raise InvalidAxisError(f"{UNIT_NAMES[a]} is not a circular axis; use decompose_hyperbolic")
    records = []
    for plane in rotation_planes(a):
        p, q = s.coeff[plane.base], s.coeff[plane.partner]
        n = math.hypot(p, q)
        theta = math.atan2(q, p) if n > 0 else 0.0
        records.append(PlaneRecord(plane, n, p * p + q * q, theta))
    return PlaneDecomposition(a, "circular", tuple(records))  # type: ignore[arg-type]


def decompose_hyperbolic(s: Octonion, axis) -> PlaneDecomposition:
    """Hyperbolic analogue of :func:`decompose_circular` for ``J_n`` and ``I``.

    Every plane must have ``p^2 - q^2 > 0`` where ``p`` is the base
    coefficient; otherwise :class:`DecompositionError` lists the bad planes.
    """
    a = _axis(axis)
    if is_circular(a):
        raise InvalidAxisError(f"{UNIT_NAMES[a]} is not a hyperbolic axis; use decompose_circular")
    records, bad, bad_n2 = [], [], []
    for plane in rotation_planes(a):
        p, q = s.coeff[plane.base], s.coeff[plane.partner]
        n2 = p * p - q * q
        if not n2 > 0:
            bad.append((plane.base, plane.partner))
            bad_n2.append(n2)
            continue
        amp = math.copysign(math.sqrt(n2), p)
        records.append(PlaneRecord(plane, amp, n2, math.atanh(plane.sign * q / p)))
    if bad:
        raise DecompositionError(a, bad, bad_n2)
    return PlaneDecomposition(a, "hyperbolic", tuple(records))  # type: ignore[arg-type]


def decompose(s: Octonion, axis) -> PlaneDecomposition:
    a = _axis(axis)
    return decompose_circular(s, a) if is_circular(a) else decompose_hyperbolic(s, a)


def reconstruct(d: PlaneDecomposition) -> Octonion:
    """``sum N_i exp(A theta_i) u_i``, each term evaluated through the product table."""
    total = np.zeros(8)
    for r in d.planes:
        total += r.norm * mul_coeffs(rotor_exp(d.axis, r.angle).coeff, _UNIT_VECTORS[r.plane.base])
    return Octonion(total)


def passive_rotate(s: Octonion, axis, phases: Sequence[float]) -> Octonion:
    """Rotate each of the four planes of ``axis`` by its own phase.

    Equivalent to decomposing ``s``, adding ``phases`` to the plane angles and
    reconstructing, but defined for every ``s``, including hyperbolic axes
    whose decomposition does not exist.  Equal phases reduce to left
    multiplication by ``rotor_exp(axis, phase)``.
    """
    a = _axis(axis)
    phases = [float(p) for p in phases]
    if len(phases) != 4:
        raise ValueError("passive rotation needs exactly 4 phases")
    circular = is_circular(a)
    src = s.coeff
    out = np.empty(8)
    for plane, phi in zip(rotation_planes(a), phases):
        p, q = src[plane.base], src[plane.partner]
        if circular:
            c, sn = math.cos(phi), math.sin(phi)
            # exp(A phi) (p u + q b) with A u = b, A b = -u
            out[plane.base] = c * p - sn * q
            out[plane.partner] = c * q + sn * p
        else:
            c, sn = math.cosh(phi), math.sinh(phi)
            out[plane.base] = c * p + plane.sign * sn * q
            out[plane.partner] = c * q + plane.sign * sn * p
    return Octonion(out)


def passive_rotation_matrix(axis, phases: Sequence[float]) -> np.ndarray:
    return np.column_stack([passive_rotate(Octonion.unit(i), axis, phases).coeff for i in range(8)])


def passive_phase_generators() -> list[tuple[int, int, np.ndarray]]:
    """``(axis, plane_number, d/dphi at 0)`` for every axis and plane: 28 in all."""
    gens = []
    for a in range(1, 8):
        for k, plane in enumerate(rotation_planes(a)):
            g = np.zeros((8, 8))
            # axis * base = sign * partner; axis * partner = (axis^2 * sign) * base
            sq = STRUCTURE_TABLE[a][a][0]
            g[plane.partner, plane.base] = plane.sign
            g[plane.base, plane.partner] = sq * plane.sign
            gens.append((a, k, g))
    return gens


def rapidity(v: float, c: float = 1.0) -> float:
    if not c > 0:
        raise InvalidVelocityError(f"speed of light must be positive, got {c}")
    if not abs(v) < c:
        raise InvalidVelocityError(f"|v| must be below c: v={v}, c={c}")
    return math.atanh(v / c)


def boost(s: Octonion, direction: int, v: float, c: float = 1.0) -> Octonion:
    """Left multiplication by ``exp(J_n m)`` with rapidity ``m = artanh(v/c)``.

    On ``ct + x_n J_n`` this gives ``t' = gamma (t + v x_n / c^2)`` and
    ``x_n' = gamma (x_n + v t)``.  Transverse ``J`` components are mixed with
    ``j`` components by the one-sided product.
    """
    if direction not in (1, 2, 3):
        raise InvalidAxisError(f"boost direction must be 1, 2 or 3, got {direction}")
    return left_transform(rotor_exp(direction, rapidity(v, c)), s)


def lorentz_boost_tx(t: float, x: Sequence[float], direction: int, v: float, c: float = 1.0):
    """Classical boost of ``(t, x)`` matching the sign convention of :func:`boost`."""
    m = rapidity(v, c)
    x = np.array(x, dtype=float)
    ct, xn = c * t, x[direction - 1]
    x[direction - 1] = math.sinh(m) * ct + math.cosh(m) * xn
    return (math.cosh(m) * ct + math.sinh(m) * xn) / c, x


def left_mult_matrix(r: Octonion) -> np.ndarray:
    return left_matrix(r.coeff)


def left_mult_generator(unit) -> np.ndarray:
    """Derivative at 0 of left multiplication by ``exp(unit * eps)``."""
    a = unit_index(unit)
    if a == 0:
        raise InvalidAxisError("the scalar unit only generates scalings")
    return left_matrix(Octonion.unit(a).coeff)


def left_mult_generators() -> list[np.ndarray]:
    return [left_mult_generator(a) for a in range(1, 8)]


def is_q_antisymmetric(g: np.ndarray, tol: float = 0.0) -> bool:
    """``G^T Q + Q G == 0``: ``G`` preserves the norm form to first order."""
    return float(np.max(np.abs(g.T @ Q + Q @ g))) <= tol


def _span_basis(vectors: np.ndarray, tol: float) -> np.ndarray:
    _, sv, vt = np.linalg.svd(vectors, full_matrices=False)
    if sv.size == 0 or sv[0] == 0:
        return vectors[:0]
    rank = int(np.sum(sv > tol * sv[0]))
    return vt[:rank]


def matrix_rank(mats: Sequence[np.ndarray], tol: float = 1e-8) -> int:
    flat = np.array([np.asarray(m, dtype=float).ravel() for m in mats])
    return _span_basis(flat, tol).shape[0]


def lie_closure_dim(generators: Sequence[np.ndarray], tol: float = 1e-8,
                    max_iter: int = 64) -> int:
    """Dimension of the matrix Lie algebra generated by ``generators``.

    Commutators of the current span are added until the dimension stops
    growing.  Singular values below ``tol`` times the largest count as zero.
    """
    if len(generators) == 0:
        raise ValueError("need at least one generator")
    mats = [np.asarray(g, dtype=float) for g in generators]
    shape = mats[0].shape
    if any(m.shape != shape or m.ndim != 2 or shape[0] != shape[1] for m in mats):
        raise ValueError("generators must be square matrices of one shape")
    if not all(np.all(np.isfinite(m)) for m in mats):
        raise ValueError("generators must be finite")
    basis = _span_basis(np.array([m.ravel() for m in mats]), tol)
    for _ in range(max_iter):
        dim = basis.shape[0]
        ms = basis.reshape(dim, *shape)
        comms = [ms[i] @ ms[j] - ms[j] @ ms[i] for i in range(dim) for j in range(i + 1, dim)]
        if not comms:
            return dim
        stacked = np.vstack([basis, np.array([c.ravel() for c in comms])])
        basis = _span_basis(stacked, tol)
        if basis.shape[0] == dim:
            return dim
    raise RuntimeError("Lie closure did not stabilise")
