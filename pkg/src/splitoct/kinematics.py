"""Physical signals ``s = ct + x^n J_n + hbar lambda^n j_n + c hbar omega I``.

Here ``t`` is time, ``x`` position, ``lambda`` an inverse momentum and
``omega`` an inverse energy.  Setting ``hbar = 0`` gives the classical
(Minkowski) sector exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from .algebra import Octonion


class NonTimelikeRateError(ValueError):
    pass


@dataclass(frozen=True)
class Constants:
    c: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be positive and finite, got {self.c}")
        if not (math.isfinite(self.hbar) and self.hbar >= 0):
            raise ValueError(f"hbar must be non-negative and finite, got {self.hbar}")


def _vec3(v) -> tuple[float, float, float]:
    out = tuple(float(a) for a in v)
    if len(out) != 3:
        raise ValueError(f"expected 3 components, got {len(out)}")
    return out  # type: ignore[return-value]


@dataclass(frozen=True)
class Signal:
    t: float = 0.0
    x: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))
    lam: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))
    omega: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", _vec3(self.x))
        object.__setattr__(self, "lam", _vec3(self.lam))
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "omega", float(self.omega))
        vals = (self.t, *self.x, *self.lam, self.omega)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("signal coordinates must be finite")

    def as_array(self) -> np.ndarray:
        """Coordinates in basis order: ``(t, x1, x2, x3, l1, l2, l3, omega)``."""
        return np.array([self.t, *self.x, *self.lam, self.omega])

    @classmethod
    def from_array(cls, arr) -> Signal:
        a = [float(v) for v in arr]
        return cls(a[0], tuple(a[1:4]), tuple(a[4:7]), a[7])

    def to_json(self) -> dict:
        return {"t": self.t, "x": list(self.x), "lambda": list(self.lam), "omega": self.omega}

    @classmethod
    def from_json(cls, obj: dict) -> Signal:
        if not isinstance(obj, dict):
            raise ValueError("signal JSON must be an object")
        unknown = set(obj) - {"t", "x", "lambda", "omega"}
        if unknown:
            raise ValueError(f"unknown signal fields: {sorted(unknown)}")
        return cls(obj.get("t", 0.0), obj.get("x", (0.0, 0.0, 0.0)),
                   obj.get("lambda", (0.0, 0.0, 0.0)), obj.get("omega", 0.0))


#: Coordinate view used by the infinitesimal G2 transformation.
CoordinateState = Signal


def coordinate_scales(k: Constants) -> np.ndarray:
    """Factors taking coordinates ``(t, x, lambda, omega)`` to octonion coefficients."""
    c, h = k.c, k.hbar
    return np.array([c, 1.0, 1.0, 1.0, h, h, h, c * h])


def to_octonion(sig: Signal, k: Constants = Constants()) -> Octonion:
    return Octonion(coordinate_scales(k) * sig.as_array())


def from_octonion(s: Octonion, k: Constants = Constants()) -> Signal:
    """Inverse of :func:`to_octonion`.

    With ``hbar = 0`` the ``j`` and ``I`` coefficients carry no coordinate
    information, so they must vanish.
    """
    scales = coordinate_scales(k)
    coeff = s.coeff
    if k.hbar == 0:
        if np.any(coeff[4:] != 0):
            raise ValueError("hbar = 0 cannot represent nonzero j or I components")
        scales = np.where(scales == 0, 1.0, scales)
    return Signal.from_array(coeff / scales)


def interval(sig: Signal, k: Constants = Constants()) -> float:
    """``c^2 t^2 - x.x + hbar^2 lambda.lambda - c^2 hbar^2 omega^2``."""
    c, h = k.c, k.hbar
    x, lam = np.array(sig.x), np.array(sig.lam)
    return float(c * c * sig.t ** 2 - x @ x + h * h * (lam @ lam) - c * c * h * h * sig.omega ** 2)


def paracomplex_form(s: Octonion) -> tuple[tuple[float, float], ...]:
    """``((ct, c hbar omega), (x1, hbar l1), (x2, hbar l2), (x3, hbar l3))``.

    These are the pairs in ``s = (ct + c hbar omega I) + J_n (x_n + hbar l_n I)``.
    """
    a = s.coeff.tolist()
    return ((a[0], a[7]), (a[1], a[4]), (a[2], a[5]), (a[3], a[6]))


def from_paracomplex(pairs) -> Octonion:
    """Reassemble through the product table, using ``J_n I = j_n``."""
    I = Octonion.unit("I")
    (t0, t1), *space = pairs
    total = Octonion.scalar(t0) + t1 * I
    for n, (xn, ln) in enumerate(space, start=1):
        total = total + Octonion.unit(n) * (Octonion.scalar(xn) + ln * I)
    return total


@dataclass(frozen=True)
class RateState:
    v: tuple[float, float, float] = (0.0, 0.0, 0.0)
    domega_dt: float = 0.0
    dlambda_dx: tuple[tuple[float, ...], ...] = ((0.0,) * 3,) * 3

    def __post_init__(self):
        object.__setattr__(self, "v", _vec3(self.v))
        m = np.array(self.dlambda_dx, dtype=float)
        if m.shape != (3, 3):
            raise ValueError("dlambda_dx must be 3x3")
        object.__setattr__(self, "dlambda_dx", tuple(tuple(r) for r in m.tolist()))
        if not (np.all(np.isfinite(m)) and math.isfinite(self.domega_dt)
                and all(math.isfinite(a) for a in self.v)):
            raise ValueError("rate state must be finite")


def lorentz_factor_radicand(r: RateState, k: Constants = Constants()) -> float:
    h = k.hbar
    v2 = float(np.dot(r.v, r.v))
    m = np.array(r.dlambda_dx)
    contraction = float(np.sum(m * m))
    return (1.0 - h * h * r.domega_dt ** 2) - (v2 / k.c ** 2) * (1.0 - h * h * contraction)


def lorentz_factor(r: RateState, k: Constants = Constants()) -> float:
    """Generalised ``ds/dt``; ``sqrt(1 - v^2/c^2)`` when ``hbar = 0``."""
    rad = lorentz_factor_radicand(r, k)
    if rad < 0:
        raise NonTimelikeRateError(f"negative radicand {rad:.6g}: rate is not timelike")
    return math.sqrt(rad)


@dataclass(frozen=True)
class RelationResult:
    name: str
    passed: bool
    margin: float


@dataclass(frozen=True)
class UncertaintyReport:
    relations: tuple[RelationResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.relations)

    def failures(self) -> list[RelationResult]:
        return [r for r in self.relations if not r.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed,
                "relations": [{"name": r.name, "passed": r.passed, "margin": r.margin}
                              for r in self.relations]}


def uncertainty_check(dx_dlambda: Sequence[float], dt_domega: float, v2: float,
                      k: Constants = Constants()) -> UncertaintyReport:
    """Evaluate ``v^2 <= c^2``, ``dx^n/dlambda^n >= hbar`` (each n) and ``dt/domega >= hbar``."""
    rels = [RelationResult("v2<=c2", v2 <= k.c ** 2, k.c ** 2 - v2)]
    for n, ratio in enumerate(_vec3(dx_dlambda), start=1):
        rels.append(RelationResult(f"dx{n}/dlambda{n}>=hbar", ratio >= k.hbar, ratio - k.hbar))
    rels.append(RelationResult("dt/domega>=hbar", dt_domega >= k.hbar, dt_domega - k.hbar))
    return UncertaintyReport(tuple(rels))


class ClassicalComparable(Protocol):
    def tx(self, sig: Signal, k: Constants) -> tuple[float, np.ndarray]: ...

    def classical(self, t: float, x: np.ndarray, k: Constants) -> tuple[float, np.ndarray]: ...


@dataclass(frozen=True)
class LimitPoint:
    hbar: float
    deviation: float


def classical_limit_sweep(sig: Signal, transform: ClassicalComparable,
                          hbar_values: Sequence[float], c: float = 1.0) -> list[LimitPoint]:
    """Deviation of the transformed ``(t, x)`` block from its classical counterpart.

    ``transform`` supplies ``tx`` (the full octonionic action read back as
    ``(t', x')``) and ``classical`` (the Lorentz or rotation action on the
    untransformed ``(t, x)``).  The deviation is the Euclidean distance of
    ``(c t', x')`` from the classical result.
    """
    out = []
    for h in hbar_values:
        k = Constants(c, float(h))
        t1, x1 = transform.tx(sig, k)
        t0, x0 = transform.classical(sig.t, np.array(sig.x), k)
        dev = math.sqrt((c * (t1 - t0)) ** 2 + float(np.sum((np.asarray(x1) - x0) ** 2)))
        out.append(LimitPoint(float(h), dev))
    return out
