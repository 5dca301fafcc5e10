"""JSON transform specs and their classical counterparts.

Accepted forms::

    {"identity": {}}
    {"rotor": {"axis": "j1", "param": 0.3}}
    {"boost": {"n": 1, "v": 0.6, "c": 1.0}}
    {"passive": {"axis": "j1", "phases": [a, b, c, d]}}
    {"family": "fix-j1", "params": [0.3, 0.1], "mode": "active"}
    {"infinitesimal": {"alpha": [...], "beta": [...], "u": [...], "k": [...],
                       "sigma": [...], "eps": 1e-3}}

``classical`` gives the action each transform should reduce to on ``(t, x)``
when the quantum coordinates are switched off.  Transforms without such a
counterpart raise :class:`NoClassicalCounterpart`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import automorphisms as auto
from . import transforms as tr
from .algebra import J_UNITS, Octonion
from .kinematics import Constants, Signal, to_octonion


class NoClassicalCounterpart(ValueError):
    pass


def rotation_about(axis: int, angle: float) -> np.ndarray:
    """3x3 rotation taking ``e_{n+1}`` to ``cos e_{n+1} + sin e_{n+2}`` (indices mod 3)."""
    r = np.eye(3)
    a, b = axis % 3, (axis + 1) % 3
    c, s = math.cos(angle), math.sin(angle)
    r[a, a], r[b, a] = c, s
    r[a, b], r[b, b] = -s, c
    return r


class Transform:
    def apply(self, s: Octonion) -> Octonion:
        raise NotImplementedError

    def tx(self, sig: Signal, k: Constants) -> tuple[float, np.ndarray]:
        out = self.apply(to_octonion(sig, k)).coeff
        return float(out[0] / k.c), out[1:4].copy()

    def classical(self, t: float, x: np.ndarray, k: Constants) -> tuple[float, np.ndarray]:
        raise NoClassicalCounterpart(f"{type(self).__name__} has no classical counterpart")


@dataclass(frozen=True)
class Identity(Transform):
    def apply(self, s):
        return s

    def classical(self, t, x, k):
        return t, np.array(x, dtype=float)


@dataclass(frozen=True)
class Rotor(Transform):
    axis: int
    param: float

    def apply(self, s):
        return tr.left_transform(tr.rotor_exp(self.axis, self.param), s)

    def classical(self, t, x, k):
        if self.axis not in J_UNITS:
            return super().classical(t, x, k)
        return tr.lorentz_boost_tx(t, x, self.axis, k.c * math.tanh(self.param), k.c)


@dataclass(frozen=True)
class Boost(Transform):
    n: int
    v: float
    c: float | None = None

    def _c(self, k: Constants | None = None) -> float:
        if self.c is not None:
            return self.c
        return k.c if k is not None else 1.0

    def apply(self, s, k: Constants | None = None):
        return tr.boost(s, self.n, self.v, self._c(k))

    def tx(self, sig, k):
        out = self.apply(to_octonion(sig, k), k).coeff
        return float(out[0] / k.c), out[1:4].copy()

    def classical(self, t, x, k):
        m = tr.rapidity(self.v, self._c(k))
        return tr.lorentz_boost_tx(t, x, self.n, k.c * math.tanh(m), k.c)


@dataclass(frozen=True)
class Passive(Transform):
    axis: int
    phases: tuple[float, float, float, float]

    def apply(self, s):
        return tr.passive_rotate(s, self.axis, self.phases)


@dataclass(frozen=True)
class Automorphism(Transform):
    spec: auto.AutomorphismSpec
    mode: str = "active"

    def matrix(self) -> np.ndarray:
        m = auto.finite_automorphism(self.spec)
        return m if self.mode == "active" else auto.active_to_passive(m)

    def apply(self, s):
        return Octonion(self.matrix() @ s.coeff)

    def classical(self, t, x, k):
        """Rotation of ``x`` by ``(alpha - beta)/2`` for ``fix-j`` families, else identity."""
        x = np.array(x, dtype=float)
        fam = self.spec.family
        if fam.startswith("fix-j"):
            n = int(fam[-1])
            alpha, beta = self.spec.params
            r = rotation_about(n, (alpha - beta) / 2)
            r = r if self.mode == "active" else r.T
            return t, r @ x
        return t, x


@dataclass(frozen=True)
class Infinitesimal(Transform):
    params: auto.G2Params
    eps: float

    def apply(self, s):
        raise NoClassicalCounterpart("infinitesimal transforms act on signals, not octonions")

    def apply_signal(self, sig: Signal, k: Constants) -> Signal:
        return auto.infinitesimal_passive(sig, self.params, self.eps, k)

    def tx(self, sig, k):
        out = self.apply_signal(sig, k)
        return out.t, np.array(out.x)

    def classical(self, t, x, k):
        """First-order rotation ``x_i - 1/2 eps_ijk (alpha - beta)_j x_k``."""
        q = self.params.scaled(self.eps)
        phi = np.array(q.alpha) - np.array(q.beta)
        x = np.array(x, dtype=float)
        return t, x - 0.5 * np.einsum("ijk,j,k->i", auto._EPS3, phi, x)


def _number(obj, key, default=None):
    if key not in obj:
        if default is None:
            raise ValueError(f"missing field {key!r}")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValueError(f"field {key!r} must be a finite number")
    return float(v)


def parse_transform(obj) -> Transform:
    if not isinstance(obj, dict):
        raise ValueError("transform spec must be a JSON object")
    if "identity" in obj:
        return Identity()
    if "rotor" in obj:
        r = obj["rotor"]
        return Rotor(tr._axis(r.get("axis")), _number(r, "param"))
    if "boost" in obj:
        b = obj["boost"]
        n = b.get("n")
        if n not in (1, 2, 3):
            raise ValueError('boost "n" must be 1, 2 or 3')
        c = _number(b, "c") if "c" in b else None
        return Boost(n, _number(b, "v"), c)
    if "passive" in obj:
        p = obj["passive"]
        phases = p.get("phases")
        if not isinstance(phases, list) or len(phases) != 4:
            raise ValueError('passive "phases" must be a list of 4 numbers')
        return Passive(tr._axis(p.get("axis")), tuple(float(v) for v in phases))
    if "family" in obj:
        mode = obj.get("mode", "active")
        if mode not in ("active", "passive"):
            raise ValueError('automorphism "mode" must be "active" or "passive"')
        spec = auto.AutomorphismSpec.from_json({k: v for k, v in obj.items() if k != "mode"})
        return Automorphism(spec, mode)
    if "infinitesimal" in obj:
        body = dict(obj["infinitesimal"])
        eps = _number(body, "eps", 1.0)
        body.pop("eps", None)
        return Infinitesimal(auto.G2Params.from_json(body), eps)
    raise ValueError(f"unrecognised transform spec keys: {sorted(obj)}")


