"""The seven two-parameter automorphism families and the 14 G2 generators.

Each family fixes one hypercomplex axis.  It is defined by the images of a
generating triple of units that do not lie on a common line; the remaining
four images are products of images already known, so every map built here is
an automorphism by construction (and :func:`verify_automorphism` checks it).

Families ``fix-j2``/``fix-j3`` and ``fix-J2``/``fix-J3`` are the cyclic
relabellings ``1 -> 2 -> 3 -> 1`` of ``fix-j1`` and ``fix-J1``; the relabelling
is itself an automorphism of the table.

Parameter slots:

=========  ================  ==========================================
family     params            generating images
=========  ================  ==========================================
fix-j1     (alpha1, beta1)   j2 -> j2 cos a + j3 sin a, a = (alpha+beta)/2;
                             J1 -> J1 cos beta + I sin beta
fix-J1     (k1, u1)          J2 -> J2 cosh a + j3 sinh a, a = (k+u)/2;
                             I -> I cosh u - j1 sinh u
fix-I      (sigma1, sigma2)  j_n -> j_n cosh sigma_n + J_n sinh sigma_n
=========  ================  ==========================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import (
    Q,
    STRUCTURE_TABLE,
    STRUCTURE_TENSOR,
    UNIT_NAMES,
    Octonion,
    levi_civita,
)
from .kinematics import Constants, CoordinateState, Signal, coordinate_scales

FAMILIES = ("fix-j1", "fix-j2", "fix-j3", "fix-J1", "fix-J2", "fix-J3", "fix-I")

# 1 -> 2 -> 3 -> 1 on both the J and the j triplets.
_CYCLE = (0, 2, 3, 1, 5, 6, 4, 7)


def _shift(index: int, times: int) -> int:
    for _ in range(times):
        index = _CYCLE[index]
    return index


def _lin(*terms: tuple[float, int]) -> Octonion:
    c = np.zeros(8)
    for value, unit in terms:
        c[unit] += value
    return Octonion(c)


# Each base family: (fixed axis, generating-image builder, induced rules).
# Induced rule (target, left, right) means e_target = sign * e_left * e_right.
def _fix_j1(p: Sequence[float]):
    alpha, beta = p
    a = (alpha + beta) / 2
    J1, j2, j3, I = 1, 5, 6, 7
    return {
        4: _lin((1.0, 4)),
        j2: _lin((math.cos(a), j2), (math.sin(a), j3)),
        J1: _lin((math.cos(beta), J1), (math.sin(beta), I)),
    }


def _fix_J1(p: Sequence[float]):
    k, u = p
    a = (k + u) / 2
    J2, j1, j3, I = 2, 4, 6, 7
    return {
        1: _lin((1.0, 1)),
        J2: _lin((math.cosh(a), J2), (math.sinh(a), j3)),
        I: _lin((math.cosh(u), I), (-math.sinh(u), j1)),
    }


def _fix_I(p: Sequence[float]):
    s1, s2 = p
    return {
        7: _lin((1.0, 7)),
        4: _lin((math.cosh(s1), 4), (math.sinh(s1), 1)),
        5: _lin((math.cosh(s2), 5), (math.sinh(s2), 2)),
    }


_BASE_FAMILIES: dict[str, tuple[int, Callable, tuple[tuple[int, int, int], ...]]] = {
    # j3 = j1 j2, I = J1 j1, J2 = j2 I, J3 = j3 I
    "fix-j1": (4, _fix_j1, ((6, 4, 5), (7, 1, 4), (2, 5, 7), (3, 6, 7))),
    # j3 = J1 J2, j1 = J1 I, j2 = J2 I, J3 = j3 I
    "fix-J1": (1, _fix_J1, ((6, 1, 2), (4, 1, 7), (5, 2, 7), (3, 6, 7))),
    # J1 = j1 I, J2 = j2 I, j3 = j1 j2, J3 = j3 I
    "fix-I": (7, _fix_I, ((1, 4, 7), (2, 5, 7), (6, 4, 5), (3, 6, 7))),
}

_FAMILY_SOURCE = {
    "fix-j1": ("fix-j1", 0), "fix-j2": ("fix-j1", 1), "fix-j3": ("fix-j1", 2),
    "fix-J1": ("fix-J1", 0), "fix-J2": ("fix-J1", 1), "fix-J3": ("fix-J1", 2),
    "fix-I": ("fix-I", 0),
}


@dataclass(frozen=True)
class AutomorphismSpec:
    family: str
    params: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown automorphism family {self.family!r}; "
                             f"expected one of {', '.join(FAMILIES)}")
        params = tuple(float(v) for v in self.params)
        if len(params) != 2 or not all(math.isfinite(v) for v in params):
            raise ValueError("an automorphism family takes exactly two finite parameters")
        object.__setattr__(self, "params", params)

    @property
    def fixed_axis(self) -> int:
        base, shift = _FAMILY_SOURCE[self.family]
        return _shift(_BASE_FAMILIES[base][0], shift)

    def to_json(self) -> dict:
        return {"family": self.family, "params": list(self.params)}

    @classmethod
    def from_json(cls, obj: dict) -> AutomorphismSpec:
        if not isinstance(obj, dict) or "family" not in obj:
            raise ValueError('automorphism JSON must look like {"family": "fix-j1", "params": [a, b]}')
        return cls(obj["family"], tuple(obj.get("params", (0.0, 0.0))))


def _relabel(o: Octonion, shift: int) -> Octonion:
    c = np.zeros(8)
    for i, v in enumerate(o.coeff):
        c[_shift(i, shift)] += v
    return Octonion(c)


def finite_automorphism(spec: AutomorphismSpec) -> np.ndarray:
    """The 8x8 matrix whose column ``a`` is the image of unit ``a``."""
    base, shift = _FAMILY_SOURCE[spec.family]
    _, builder, rules = _BASE_FAMILIES[base]
    images: dict[int, Octonion] = {0: Octonion.unit(0)}
    for unit, image in builder(spec.params).items():
        images[_shift(unit, shift)] = _relabel(image, shift)
    for target, left, right in rules:
        target, left, right = (_shift(u, shift) for u in (target, left, right))
        sign, k = STRUCTURE_TABLE[left][right]
        if k != target:
            raise AssertionError(f"rule {UNIT_NAMES[target]} = {UNIT_NAMES[left]}*{UNIT_NAMES[right]} "
                                 "does not match the table")
        images[target] = sign * (images[left] * images[right])
    return np.column_stack([images[a].coeff for a in range(8)])


def apply_map(m: np.ndarray, s: Octonion) -> Octonion:
    return Octonion(m @ s.coeff)


@dataclass
class AutomorphismReport:
    passed: bool
    max_deviation: float
    tolerance: float
    scalar_fixed: bool
    norm_form_deviation: float
    offending_pairs: list[tuple[str, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "scalar_fixed": self.scalar_fixed,
            "norm_form_deviation": self.norm_form_deviation,
            "offending_pairs": [list(p) for p in self.offending_pairs],
        }


def product_deviations(m: np.ndarray) -> np.ndarray:
    """``|A(e_a e_b) - A(e_a) A(e_b)|`` maximised over components, shape (8, 8)."""
    m = np.asarray(m, dtype=float)
    lhs = np.einsum("abi,ki->abk", STRUCTURE_TENSOR, m)
    rhs = np.einsum("ia,jb,ijk->abk", m, m, STRUCTURE_TENSOR)
    return np.max(np.abs(lhs - rhs), axis=2)


def norm_form_deviation(m: np.ndarray) -> float:
    """``max |m^T Q m - Q|``; zero when ``m`` preserves the quadratic form."""
    m = np.asarray(m, dtype=float)
    return float(np.max(np.abs(m.T @ Q @ m - Q)))


def verify_automorphism(m: np.ndarray, tol: float = 1e-12) -> AutomorphismReport:
    """Check ``A(xy) = A(x)A(y)`` on all 64 basis pairs and ``A(1) = 1``."""
    m = np.asarray(m, dtype=float)
    if m.shape != (8, 8):
        raise ValueError(f"expected an 8x8 matrix, got {m.shape}")
    dev = product_deviations(m)
    e0 = np.zeros(8)
    e0[0] = 1.0
    scalar_dev = float(np.max(np.abs(m[:, 0] - e0)))
    worst = max(float(dev.max()), scalar_dev)
    bad = [(UNIT_NAMES[a], UNIT_NAMES[b]) for a in range(8) for b in range(8) if dev[a, b] > tol]
    return AutomorphismReport(
        passed=worst <= tol,
        max_deviation=worst,
        tolerance=tol,
        scalar_fixed=scalar_dev <= tol,
        norm_form_deviation=norm_form_deviation(m),
        offending_pairs=bad,
    )


def active_to_passive(m: np.ndarray) -> np.ndarray:
    """Coordinate map induced by the basis change ``m``.

    With ``e_a' = m e_a`` the value ``sum c_a e_a`` equals ``sum c'_a e_a'``
    for ``c' = m^{-1} c``.  (In the convention where rows hold the images this
    is the inverse transpose.)
    """
    m = np.asarray(m, dtype=float)
    try:
        inv = np.linalg.inv(m)
    except np.linalg.LinAlgError:
        raise ValueError("basis change is singular") from None
    if not np.all(np.isfinite(inv)) or np.linalg.cond(m) > 1e14:
        raise ValueError("basis change is singular")
    return inv


# ---------------------------------------------------------------------------
# Infinitesimal transformation of coordinates.

PARAM_SLOTS: tuple[tuple[str, int], ...] = (
    *(("alpha", i) for i in range(3)),
    *(("beta", i) for i in range(3)),
    *(("u", i) for i in range(3)),
    *(("k", i) for i in range(3)),
    ("sigma", 0), ("sigma", 1),
)


def _arr(v, n: int) -> np.ndarray:
    a = np.array(v, dtype=float)
    if a.shape != (n,) or not np.all(np.isfinite(a)):
        raise ValueError(f"expected {n} finite numbers, got {v!r}")
    return a


@dataclass(frozen=True)
class G2Params:
    alpha: tuple[float, ...] = (0.0, 0.0, 0.0)
    beta: tuple[float, ...] = (0.0, 0.0, 0.0)
    u: tuple[float, ...] = (0.0, 0.0, 0.0)
    k: tuple[float, ...] = (0.0, 0.0, 0.0)
    sigma: tuple[float, ...] = (0.0, 0.0)

    def __post_init__(self):
        for name, n in (("alpha", 3), ("beta", 3), ("u", 3), ("k", 3), ("sigma", 2)):
            object.__setattr__(self, name, tuple(_arr(getattr(self, name), n).tolist()))

    @property
    def U(self) -> np.ndarray:
        """Symmetric traceless matrix built from ``sigma`` and ``k``."""
        s1, s2 = self.sigma
        k1, k2, k3 = self.k
        return np.array([[2 * s1, k3, k2],
                         [k3, 2 * s2, k1],
                         [k2, k1, -2 * (s1 + s2)]])

    def scaled(self, eps: float) -> G2Params:
        return G2Params(*(tuple(eps * v for v in getattr(self, f))
                          for f in ("alpha", "beta", "u", "k", "sigma")))

    def as_vector(self) -> np.ndarray:
        return np.array([*self.alpha, *self.beta, *self.u, *self.k, *self.sigma])

    @classmethod
    def from_vector(cls, v) -> G2Params:
        v = _arr(v, 14)
        return cls(v[0:3], v[3:6], v[6:9], v[9:12], v[12:14])

    @classmethod
    def single(cls, name: str, index: int, value: float = 1.0) -> G2Params:
        v = np.zeros(14)
        v[PARAM_SLOTS.index((name, index))] = value
        return cls.from_vector(v)

    def to_json(self) -> dict:
        return {f: list(getattr(self, f)) for f in ("alpha", "beta", "u", "k", "sigma")}

    @classmethod
    def from_json(cls, obj: dict) -> G2Params:
        if not isinstance(obj, dict):
            raise ValueError("G2 parameters must be a JSON object")
        unknown = set(obj) - {"alpha", "beta", "u", "k", "sigma"}
        if unknown:
            raise ValueError(f"unknown G2 parameter fields: {sorted(unknown)}")
        return cls(**{f: obj[f] for f in obj})


_EPS3 = np.array([[[levi_civita(i, j, k) for k in (1, 2, 3)] for j in (1, 2, 3)] for i in (1, 2, 3)],
                 dtype=float)


def infinitesimal_passive(state: CoordinateState, p: G2Params, eps: float,
                          k: Constants = Constants()) -> CoordinateState:
    """First-order G2 change of coordinates with parameters ``eps * p``.

    ``t`` is untouched.  ``x``, ``lambda`` and ``omega`` mix through the
    rotation angles ``alpha -+ beta``, the ``beta`` and ``u`` couplings to
    ``omega`` and the symmetric matrix ``U``.  Needs ``hbar > 0``.
    """
    c, h = k.c, k.hbar
    if h <= 0:
        raise ValueError("the infinitesimal transformation divides by hbar; use hbar > 0")
    q = p.scaled(eps)
    alpha, beta, u = np.array(q.alpha), np.array(q.beta), np.array(q.u)
    U = q.U
    x, lam, w = np.array(state.x), np.array(state.lam), state.omega
    eu = np.einsum("ijk,j->ik", _EPS3, u)
    x_new = (x - 0.5 * np.einsum("ijk,j,k->i", _EPS3, alpha - beta, x)
             + c * h * beta * w + 0.5 * h * (U - eu) @ lam)
    w_new = w - (beta @ x) / (c * h) - (u @ lam) / c
    lam_new = (lam - 0.5 * np.einsum("ijk,j,k->i", _EPS3, alpha + beta, lam)
               - c * u * w + (U + eu) @ x / (2 * h))
    return Signal(state.t, tuple(x_new), tuple(lam_new), float(w_new))


def g2_generator_matrices(c: float = 1.0, hbar: float = 1.0,
                          basis: str = "coefficient") -> list[np.ndarray]:
    """The 14 generators, ordered alpha1..3, beta1..3, u1..3, k1..3, sigma1..2.

    Column ``a`` of generator ``G`` is the first-order change of coordinate
    ``a``.  In the ``"coefficient"`` basis the ``c`` and ``hbar`` factors are
    absorbed (``G = S G_coord S^-1`` with ``S`` the coordinate scales), so
    ``G^T Q + Q G = 0`` holds for every choice of constants.
    """
    k = Constants(c, hbar)
    gens = []
    for name, i in PARAM_SLOTS:
        p = G2Params.single(name, i)
        g = np.zeros((8, 8))
        for a in range(8):
            e = np.zeros(8)
            e[a] = 1.0
            out = infinitesimal_passive(Signal.from_array(e), p, 1.0, k).as_array()
            g[:, a] = out - e
        if basis == "coefficient":
            s = coordinate_scales(k)
            g = (s[:, None] * g) / s[None, :]
        elif basis != "coordinate":
            raise ValueError(f"unknown basis {basis!r}; use 'coefficient' or 'coordinate'")
        gens.append(g)
    return gens


# (family, slot) -> (G2 parameter name, index, sign).  Found by
# match_generators(); tests check the search still reproduces it.
GENERATOR_MATCH: dict[tuple[str, int], tuple[str, int, int]] = {
    ("fix-j1", 0): ("alpha", 0, 1), ("fix-j1", 1): ("beta", 0, 1),
    ("fix-j2", 0): ("alpha", 1, 1), ("fix-j2", 1): ("beta", 1, 1),
    ("fix-j3", 0): ("alpha", 2, 1), ("fix-j3", 1): ("beta", 2, 1),
    ("fix-J1", 0): ("k", 0, -1), ("fix-J1", 1): ("u", 0, -1),
    ("fix-J2", 0): ("k", 1, -1), ("fix-J2", 1): ("u", 1, -1),
    ("fix-J3", 0): ("k", 2, -1), ("fix-J3", 1): ("u", 2, -1),
    ("fix-I", 0): ("sigma", 0, -1), ("fix-I", 1): ("sigma", 1, -1),
}


class GeneratorMismatch(RuntimeError):
    def __init__(self, unmatched: list[tuple[str, int, float]]):
        self.unmatched = unmatched
        desc = ", ".join(f"{f}[{s}] (best residual {r:.3g})" for f, s, r in unmatched)
        super().__init__(f"no generator matches at first order: {desc}")


def _slot_spec(family: str, slot: int, eps: float) -> AutomorphismSpec:
    params = [0.0, 0.0]
    params[slot] = eps
    return AutomorphismSpec(family, tuple(params))


def passive_family_derivative(family: str, slot: int, h: float = 1e-6) -> np.ndarray:
    """Central difference of ``active_to_passive(finite_automorphism(.))`` at 0."""
    plus = active_to_passive(finite_automorphism(_slot_spec(family, slot, h)))
    minus = active_to_passive(finite_automorphism(_slot_spec(family, slot, -h)))
    return (plus - minus) / (2 * h)


def match_generators(tol: float = 1e-6) -> dict[tuple[str, int], tuple[str, int, int]]:
    """Search every generator and sign for each family parameter slot."""
    gens = g2_generator_matrices()
    found, unmatched = {}, []
    for family in FAMILIES:
        for slot in (0, 1):
            d = passive_family_derivative(family, slot)
            best = min(
                ((float(np.max(np.abs(d - sign * g))), i, sign)
                 for i, g in enumerate(gens) for sign in (1, -1)),
                key=lambda r: r[0],
            )
            if best[0] > tol:
                unmatched.append((family, slot, best[0]))
            else:
                name, idx = PARAM_SLOTS[best[1]]
                found[(family, slot)] = (name, idx, best[2])
    if unmatched:
        raise GeneratorMismatch(unmatched)
    return found


def matched_generator(family: str, slot: int, c: float = 1.0, hbar: float = 1.0) -> np.ndarray:
    name, idx, sign = GENERATOR_MATCH[(family, slot)]
    return sign * g2_generator_matrices(c, hbar)[PARAM_SLOTS.index((name, idx))]


def slot_deviation(family: str, slot: int, eps: float) -> float:
    """``max |P(eps) - (1 + eps G)|`` for one parameter slot; expected O(eps^2)."""
    p = active_to_passive(finite_automorphism(_slot_spec(family, slot, eps)))
    return float(np.max(np.abs(p - (np.eye(8) + eps * matched_generator(family, slot)))))


def finite_vs_infinitesimal_check(family: str, eps: float) -> float:
    """Largest first-order mismatch over both parameter slots of ``family``."""
    if family not in FAMILIES:
        raise ValueError(f"unknown automorphism family {family!r}")
    return max(slot_deviation(family, slot, eps) for slot in (0, 1))


def family_generator(family: str, slot: int) -> np.ndarray:
    """Active derivation ``d/dp finite_automorphism`` at 0 for one slot."""
    return -passive_family_derivative(family, slot)

