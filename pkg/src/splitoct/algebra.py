"""Split-octonion arithmetic over the basis (1, J1, J2, J3, j1, j2, j3, I).

Coefficient index ``a`` always refers to the unit ``UNIT_NAMES[a]``.  The
vector-like units ``J_n`` and the pseudoscalar ``I`` square to ``+1``; the
pseudovector-like units ``j_n`` square to ``-1``.  The Levi-Civita symbol uses
``eps(1, 2, 3) = +1``.

Every product in the package goes through :data:`STRUCTURE_TENSOR`, which is
built from the frozen :data:`STRUCTURE_TABLE`.  :func:`generate_table` rebuilds
the table from the generating relations so that the frozen copy can be checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

UNIT_NAMES: tuple[str, ...] = ("1", "J1", "J2", "J3", "j1", "j2", "j3", "I")
UNIT_INDEX: dict[str, int] = {name: i for i, name in enumerate(UNIT_NAMES)}

SCALAR = 0
J_UNITS = (1, 2, 3)
j_UNITS = (4, 5, 6)
PSEUDOSCALAR = 7

#: Diagonal of the (4,4) quadratic form: +c0^2 - x^2 + l^2 - w^2.
SIGNATURE: tuple[int, ...] = (1, -1, -1, -1, 1, 1, 1, -1)
Q = np.diag(np.array(SIGNATURE, dtype=float))
Q.setflags(write=False)

# e_a * e_b = sign * e_index, row a, column b.
STRUCTURE_TABLE: tuple[tuple[tuple[int, int], ...], ...] = (
    ((1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7)),
    ((1, 1), (1, 0), (1, 6), (-1, 5), (1, 7), (-1, 3), (1, 2), (1, 4)),
    ((1, 2), (-1, 6), (1, 0), (1, 4), (1, 3), (1, 7), (-1, 1), (1, 5)),
    ((1, 3), (1, 5), (-1, 4), (1, 0), (-1, 2), (1, 1), (1, 7), (1, 6)),
    ((1, 4), (-1, 7), (-1, 3), (1, 2), (-1, 0), (1, 6), (-1, 5), (1, 1)),
    ((1, 5), (1, 3), (-1, 7), (-1, 1), (-1, 6), (-1, 0), (1, 4), (1, 2)),
    ((1, 6), (-1, 2), (1, 1), (-1, 7), (1, 5), (-1, 4), (-1, 0), (1, 3)),
    ((1, 7), (-1, 4), (-1, 5), (-1, 6), (-1, 1), (-1, 2), (-1, 3), (1, 0)),
)


def levi_civita(n: int, m: int, k: int) -> int:
    """Fully antisymmetric symbol on {1, 2, 3} with eps(1,2,3) = +1."""
    if len({n, m, k}) < 3:
        return 0
    perm = (n, m, k)
    return 1 if perm in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


def generate_table() -> tuple[tuple[tuple[int, int], ...], ...]:
    """Build the product table from the generating relations.

    Uses the unit squares, the skew products among ``J_n``, ``j_n`` and ``I``,
    and ``I = J_n j_n`` together with its conjugate ``j_n J_n = -I``.
    """
    def J(n):
        return n

    def j(n):
        return 3 + n

    I = PSEUDOSCALAR
    t: list[list[tuple[int, int] | None]] = [[None] * 8 for _ in range(8)]
    for a in range(8):
        t[0][a] = (1, a)
        t[a][0] = (1, a)
    for n in (1, 2, 3):
        t[J(n)][J(n)] = (1, 0)
        t[j(n)][j(n)] = (-1, 0)
    t[I][I] = (1, 0)
    for n, m, k in itertools.permutations((1, 2, 3)):
        e = levi_civita(n, m, k)
        t[J(n)][J(m)] = (e, j(k))
        t[j(n)][j(m)] = (e, j(k))
        t[J(n)][j(m)] = (-e, J(k))
        t[j(m)][J(n)] = (e, J(k))
    for n in (1, 2, 3):
        t[J(n)][I] = (1, j(n))
        t[I][J(n)] = (-1, j(n))
        t[j(n)][I] = (1, J(n))
        t[I][j(n)] = (-1, J(n))
        t[J(n)][j(n)] = (1, I)
        t[j(n)][J(n)] = (-1, I)
    if any(cell is None for row in t for cell in row):
        raise AssertionError("generating relations do not cover the table")
    return tuple(tuple(row) for row in t)  # type: ignore[arg-type]


def _tensor_from_table(table) -> np.ndarray:
    c = np.zeros((8, 8, 8))
    for a in range(8):
        for b in range(8):
            sign, k = table[a][b]
            c[a, b, k] = sign
    c.setflags(write=False)
    return c


#: C[a, b, k]: coefficient of e_k in e_a * e_b.
STRUCTURE_TENSOR = _tensor_from_table(STRUCTURE_TABLE)


@dataclass(frozen=True)
class BasisUnit:
    index: int

    def __post_init__(self):
        if not 0 <= self.index <= 7:
            raise ValueError(f"basis index out of range: {self.index}")

    @property
    def name(self) -> str:
        return UNIT_NAMES[self.index]

    @property
    def square_sign(self) -> int:
        return STRUCTURE_TABLE[self.index][self.index][0]

    @property
    def conj_sign(self) -> int:
        return 1 if self.index == 0 else -1

    @classmethod
    def parse(cls, name: str | int | BasisUnit) -> BasisUnit:
        if isinstance(name, BasisUnit):
            return name
        if isinstance(name, (int, np.integer)):
            return cls(int(name))
        try:
            return cls(UNIT_INDEX[name])
        except KeyError:
            raise ValueError(
                f"unknown basis unit {name!r}; expected one of {', '.join(UNIT_NAMES)}"
            ) from None

    def __str__(self) -> str:
        return self.name


def unit_index(unit: str | int | BasisUnit) -> int:
    if type(unit) is int and 0 <= unit <= 7:
        return unit
    return BasisUnit.parse(unit).index


def basis_mul(a, b) -> tuple[int, BasisUnit]:
    """Product of two basis units as ``(sign, unit)``."""
    sign, k = STRUCTURE_TABLE[unit_index(a)][unit_index(b)]
    return sign, BasisUnit(k)


# ---------------------------------------------------------------------------
# Coefficient-array kernels.  They broadcast over leading axes, so a batch of
# shape (n, 8) is multiplied in one call.


def mul_coeffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...j,ijk->...k", a, b, STRUCTURE_TENSOR)


def conj_coeffs(a: np.ndarray) -> np.ndarray:
    out = -np.asarray(a, dtype=float)
    out[..., 0] *= -1
    return out


def norm_coeffs(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.einsum("...i,i,...i->...", a, np.array(SIGNATURE, dtype=float), a)


def left_matrix(a: np.ndarray) -> np.ndarray:
    """Matrix ``L`` with ``L @ b == mul_coeffs(a, b)``."""
    return np.einsum("i,ijk->kj", np.asarray(a, dtype=float), STRUCTURE_TENSOR)


def right_matrix(b: np.ndarray) -> np.ndarray:
    """Matrix ``R`` with ``R @ a == mul_coeffs(a, b)``."""
    return np.einsum("j,ijk->ki", np.asarray(b, dtype=float), STRUCTURE_TENSOR)


Scalar = Union[int, float, np.floating]


class Octonion:
    """Immutable split octonion; ``coeff`` is a read-only float64 array."""

    __slots__ = ("_coeff",)

    def __init__(self, coeff: Iterable[float]):
        if not isinstance(coeff, (np.ndarray, list, tuple)):
            coeff = list(coeff)
        arr = np.array(coeff, dtype=float)
        if arr.shape != (8,):
            raise ValueError(f"an octonion needs exactly 8 coefficients, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("octonion coefficients must be finite")
        arr.setflags(write=False)
        self._coeff = arr

    @classmethod
    def unit(cls, unit, scale: float = 1.0) -> Octonion:
        c = np.zeros(8)
        c[unit_index(unit)] = scale
        return cls(c)

    @classmethod
    def zero(cls) -> Octonion:
        return cls(np.zeros(8))

    @classmethod
    def scalar(cls, value: float) -> Octonion:
        return cls.unit(0, value)

    @classmethod
    def from_terms(cls, **terms: float) -> Octonion:
        """``Octonion.from_terms(one=3, j1=4)``; ``one`` names the scalar unit."""
        c = np.zeros(8)
        for name, value in terms.items():
            c[UNIT_INDEX["1" if name == "one" else name]] += value
        return cls(c)

    @property
    def coeff(self) -> np.ndarray:
        return self._coeff

    @property
    def real(self) -> float:
        return float(self._coeff[0])

    def __getitem__(self, key) -> float:
        if isinstance(key, str):
            key = UNIT_INDEX[key]
        return float(self._coeff[key])

    def __iter__(self):
        return iter(self._coeff.tolist())

    def __len__(self) -> int:
        return 8

    def __add__(self, other):
        if isinstance(other, Octonion):
            return Octonion(self._coeff + other._coeff)
        if isinstance(other, (int, float, np.floating)):
            return self + Octonion.scalar(other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Octonion):
            return Octonion(self._coeff - other._coeff)
        if isinstance(other, (int, float, np.floating)):
            return self - Octonion.scalar(other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Octonion(-self._coeff)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return Octonion(mul_coeffs(self._coeff, other._coeff))
        if isinstance(other, (int, float, np.floating)):
            return Octonion(self._coeff * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating)):
            return Octonion(self._coeff * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating)):
            return Octonion(self._coeff / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Octonion):
            return NotImplemented
        return bool(np.array_equal(self._coeff, other._coeff))

    def __hash__(self):
        return hash(self._coeff.tobytes())

    def conj(self) -> Octonion:
        return Octonion(conj_coeffs(self._coeff))

    def norm(self) -> float:
        return float(norm_coeffs(self._coeff))

    def isclose(self, other: Octonion, atol: float = 1e-12, rtol: float = 0.0) -> bool:
        return bool(np.allclose(self._coeff, other._coeff, atol=atol, rtol=rtol))

    def to_json(self) -> dict:
        return {"coeff": self._coeff.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> Octonion:
        if not isinstance(obj, dict) or "coeff" not in obj:
            raise ValueError('octonion JSON must look like {"coeff": [a0, ..., a7]}')
        coeff = obj["coeff"]
        if not isinstance(coeff, list) or len(coeff) != 8 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in coeff
        ):
            raise ValueError('"coeff" must be a list of exactly 8 numbers')
        return cls(coeff)

    def __repr__(self) -> str:
        return f"Octonion({self._coeff.tolist()})"

    def __str__(self) -> str:
        terms = []
        for name, v in zip(UNIT_NAMES, self._coeff):
            if v == 0:
                continue
            terms.append(f"{v:+g}" if name == "1" else f"{v:+g}*{name}")
        return " ".join(terms) if terms else "0"


def _as_octonion(x) -> Octonion:
    if isinstance(x, Octonion):
        return x
    if isinstance(x, (int, float, np.floating)):
        return Octonion.scalar(float(x))
    return Octonion(x)


def mul(a, b) -> Octonion:
    return _as_octonion(a) * _as_octonion(b)


def add(a, b) -> Octonion:
    return _as_octonion(a) + _as_octonion(b)


def sub(a, b) -> Octonion:
    return _as_octonion(a) - _as_octonion(b)


def scale(a, factor: float) -> Octonion:
    return _as_octonion(a) * float(factor)


def conj(a) -> Octonion:
    return _as_octonion(a).conj()


def norm(a) -> float:
    """Quadratic form ``a0^2 - a1^2 - a2^2 - a3^2 + a4^2 + a5^2 + a6^2 - a7^2``."""
    return _as_octonion(a).norm()


def associator(a, b, c) -> Octonion:
    """``(ab)c - a(bc)``."""
    a, b, c = _as_octonion(a), _as_octonion(b), _as_octonion(c)
    return (a * b) * c - a * (b * c)


def associator_coeffs(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return mul_coeffs(mul_coeffs(a, b), c) - mul_coeffs(a, mul_coeffs(b, c))


def signature_counts(signature: Sequence[int] = SIGNATURE) -> tuple[int, int]:
    """Number of positive and negative signs of the quadratic form."""
    return sum(1 for s in signature if s > 0), sum(1 for s in signature if s < 0)
