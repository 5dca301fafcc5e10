"""Seeded invariant suites over the algebra, transforms, automorphisms and kinematics.

Each property maps ``(rng, trials)`` to a maximum deviation which passes when
it is at most the property's tolerance.  Trials are split into fixed-size
shards seeded from ``SeedSequence(seed)`` and the property name, so a report
depends only on the seed and trial count, never on the number of workers.
"""

from __future__ import annotations

import itertools
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import automorphisms as auto
from . import star
from . import transforms as tr
from .algebra import (
    SIGNATURE,
    STRUCTURE_TABLE,
    UNIT_NAMES,
    Octonion,
    conj_coeffs,
    generate_table,
    mul_coeffs,
    norm_coeffs,
    signature_counts,
)
from .kinematics import (
    Constants,
    RateState,
    Signal,
    from_paracomplex,
    interval,
    lorentz_factor,
    paracomplex_form,
    to_octonion,
    uncertainty_check,
)

SHARD_SIZE = 1000
COEFF_RANGE = 1e3
HYPERBOLIC_RANGE = 1.5


@dataclass(frozen=True)
class Property:
    name: str
    check: Callable[[np.random.Generator, int], float]
    tolerance: float
    # Structural properties ignore the trial count.  Neither they nor
    # fixed-bound properties take the global tolerance override.
    structural: bool = False
    fixed_bound: bool = False


@dataclass
class PropertyResult:
    name: str
    trials: int
    max_deviation: float
    tolerance: float
    passed: bool


@dataclass
class VerifyReport:
    suite: str
    seed: int
    trials: int
    properties: list[PropertyResult] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "properties": [asdict(p) for p in self.properties],
        }
        if timing:
            out["wall_time_s"] = self.wall_time
        return out

    def to_text(self) -> str:
        lines = [f"suite={self.suite} seed={self.seed} trials={self.trials}"]
        for p in self.properties:
            mark = "PASS" if p.passed else "FAIL"
            lines.append(f"  {mark} {p.name:<40} max_dev={p.max_deviation:.3e} tol={p.tolerance:.1e}")
        lines.append("PASSED" if self.passed else "FAILED")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# helpers


def _coeffs(rng, n, scale=COEFF_RANGE):
    return rng.uniform(-scale, scale, size=(n, 8))


def _sq(a):
    return np.sum(np.asarray(a) ** 2, axis=-1)


def _rel(diff, scale):
    return float(np.max(np.abs(diff) / (1.0 + scale))) if np.size(diff) else 0.0


def _random_spec(rng, family: str) -> auto.AutomorphismSpec:
    if family.startswith("fix-j"):
        params = rng.uniform(-2 * math.pi, 2 * math.pi, size=2)
    else:
        params = rng.uniform(-HYPERBOLIC_RANGE, HYPERBOLIC_RANGE, size=2)
    return auto.AutomorphismSpec(family, tuple(params))


# ---------------------------------------------------------------------------
# algebra


def norm_composition(rng, n):
    a, b = _coeffs(rng, n), _coeffs(rng, n)
    na, nb = norm_coeffs(a), norm_coeffs(b)
    return _rel(norm_coeffs(mul_coeffs(a, b)) - na * nb, np.abs(na * nb))


def conjugation_antihomomorphism(rng, n):
    a, b = _coeffs(rng, n), _coeffs(rng, n)
    diff = conj_coeffs(mul_coeffs(a, b)) - mul_coeffs(conj_coeffs(b), conj_coeffs(a))
    return _rel(np.max(np.abs(diff), axis=1), _sq(a) * _sq(b))


def norm_is_scalar_part(rng, n):
    a = _coeffs(rng, n)
    left, right = mul_coeffs(a, conj_coeffs(a)), mul_coeffs(conj_coeffs(a), a)
    nrm = norm_coeffs(a)
    err = np.maximum.reduce([
        np.abs(left[:, 0] - nrm), np.abs(right[:, 0] - nrm),
        np.max(np.abs(left[:, 1:]), axis=1), np.max(np.abs(right[:, 1:]), axis=1),
    ])
    return _rel(err, _sq(a))


def alternativity(rng, n):
    a, b = _coeffs(rng, n), _coeffs(rng, n)
    left = mul_coeffs(a, mul_coeffs(a, b)) - mul_coeffs(mul_coeffs(a, a), b)
    right = mul_coeffs(mul_coeffs(a, b), b) - mul_coeffs(a, mul_coeffs(b, b))
    scale = _sq(a) * np.sqrt(_sq(b)) * (np.sqrt(_sq(a)) + np.sqrt(_sq(b)))
    err = np.maximum(np.max(np.abs(left), axis=1), np.max(np.abs(right), axis=1))
    return _rel(err, scale)


def flexibility(rng, n):
    a, b = _coeffs(rng, n), _coeffs(rng, n)
    diff = mul_coeffs(a, mul_coeffs(b, a)) - mul_coeffs(mul_coeffs(a, b), a)
    return _rel(np.max(np.abs(diff), axis=1), _sq(a) * np.sqrt(_sq(b)))


def table_matches_generator(rng, n):
    return 0.0 if generate_table() == STRUCTURE_TABLE else 1.0


def signature_four_four(rng, n):
    return 0.0 if signature_counts() == (4, 4) and SIGNATURE == (1, -1, -1, -1, 1, 1, 1, -1) else 1.0


def triple_census(rng, n):
    kinds = [c.kind for c in star.classify_triples()]
    ok = kinds.count("associative") == 7 and kinds.count("anti-associative") == 28
    ok = ok and all(star.is_anti_associative(c.triple) for c in star.classify_triples()
                    if c.kind == "anti-associative")
    return 0.0 if ok else 1.0


def pairs_on_one_line(rng, n):
    ls = star.lines()
    counts = [sum(1 for line in ls if a in line and b in line)
              for a, b in itertools.combinations(range(1, 8), 2)]
    through = [sum(1 for line in ls if u in line) for u in range(1, 8)]
    return 0.0 if set(counts) == {1} and set(through) == {3} else 1.0


def dot_edges_match_table(rng, n):
    edges = star.parse_dot_edges(star.export_dot())
    index = {name: i for i, name in enumerate(UNIT_NAMES)}
    bad = 0
    for tail, head, label in edges:
        a, b, c = index[tail], index[head], index[label]
        if STRUCTURE_TABLE[a][b] != (1, c) or STRUCTURE_TABLE[b][a] != (-1, c):
            bad += 1
    return 0.0 if bad == 0 and len(edges) == 21 else 1.0


# ---------------------------------------------------------------------------
# transforms


def rotor_unit_norm(rng, n):
    worst = 0.0
    for _ in range(n):
        axis = int(rng.integers(1, 8))
        p = rng.uniform(-math.pi, math.pi) if tr.is_circular(axis) else rng.uniform(-3, 3)
        r = tr.rotor_exp(axis, p)
        worst = max(worst, abs(r.norm() - 1.0) / (1.0 + float(np.sum(r.coeff ** 2))))
    return worst


def rotor_one_parameter(rng, n):
    worst = 0.0
    for _ in range(n):
        axis = int(rng.integers(1, 8))
        a, b = rng.uniform(-1.5, 1.5, size=2)
        lhs = tr.rotor_exp(axis, a) * tr.rotor_exp(axis, b)
        rhs = tr.rotor_exp(axis, a + b)
        worst = max(worst, float(np.max(np.abs(lhs.coeff - rhs.coeff))) / (1 + float(np.max(np.abs(rhs.coeff)))))
    return worst


def left_transform_norm(rng, n):
    r, s = _coeffs(rng, n), _coeffs(rng, n)
    nr, ns = norm_coeffs(r), norm_coeffs(s)
    out = norm_coeffs(mul_coeffs(r, s))
    return _rel(np.abs(out) - np.abs(nr) * np.abs(ns), np.abs(nr * ns))


def decomposition_roundtrip(rng, n):
    worst = 0.0
    for row in _coeffs(rng, n):
        s = Octonion(row)
        for axis in tr.CIRCULAR_AXES:
            back = tr.decompose_circular(s, axis).reconstruct()
            worst = max(worst, float(np.linalg.norm(back.coeff - row) / np.linalg.norm(row)))
    return worst


def plane_norm_identity(rng, n):
    worst = 0.0
    for row in _coeffs(rng, n):
        s = Octonion(row)
        for axis in tr.CIRCULAR_AXES:
            d = tr.decompose_circular(s, axis)
            worst = max(worst, abs(d.signed_norm_sum() - s.norm()) / (1 + float(row @ row)))
    return worst


def _random_phases(rng, axis):
    if tr.is_circular(axis):
        return rng.uniform(-math.pi, math.pi, size=4)
    return rng.uniform(-1.0, 1.0, size=4)


def passive_norm(rng, n):
    worst = 0.0
    for row in _coeffs(rng, n):
        s = Octonion(row)
        axis = int(rng.integers(1, 8))
        out = tr.passive_rotate(s, axis, _random_phases(rng, axis))
        scale = 1 + max(float(row @ row), float(out.coeff @ out.coeff))
        worst = max(worst, abs(out.norm() - s.norm()) / scale)
    return worst


def passive_inverse(rng, n):
    worst = 0.0
    for row in _coeffs(rng, n):
        s = Octonion(row)
        axis = int(rng.integers(1, 8))
        ph = _random_phases(rng, axis)
        back = tr.passive_rotate(tr.passive_rotate(s, axis, ph), axis, -ph)
        worst = max(worst, float(np.linalg.norm(back.coeff - row) / (1 + np.linalg.norm(row))))
    return worst


def boost_velocity_addition(rng, n):
    worst = 0.0
    for _ in range(n):
        d = int(rng.integers(1, 4))
        v1, v2 = rng.uniform(-0.95, 0.95, size=2)
        t, x = rng.uniform(-10, 10, size=2)
        coeff = np.zeros(8)
        coeff[0], coeff[d] = t, x
        s = Octonion(coeff)
        two = tr.boost(tr.boost(s, d, v1), d, v2)
        one = tr.boost(s, d, (v1 + v2) / (1 + v1 * v2))
        worst = max(worst, float(np.max(np.abs(two.coeff - one.coeff))) / (1 + float(np.max(np.abs(one.coeff)))))
    return worst


def left_generators_q_antisymmetric(rng, n):
    return max(float(np.max(np.abs(g.T @ tr.Q + tr.Q @ g))) for g in tr.left_mult_generators())


def passive_generators_span(rng, n):
    gens = [g for _, _, g in tr.passive_phase_generators()]
    ok = len(gens) == 28 and tr.matrix_rank(gens) == 28 and all(tr.is_q_antisymmetric(g) for g in gens)
    return 0.0 if ok else 1.0


# ---------------------------------------------------------------------------
# automorphisms


def automorphism_products(rng, n):
    worst = 0.0
    for i in range(n):
        family = auto.FAMILIES[i % len(auto.FAMILIES)]
        m = auto.finite_automorphism(_random_spec(rng, family))
        worst = max(worst, auto.verify_automorphism(m).max_deviation)
    return worst


def automorphism_fixes_axis(rng, n):
    worst = 0.0
    for i in range(n):
        family = auto.FAMILIES[i % len(auto.FAMILIES)]
        spec = _random_spec(rng, family)
        m = auto.finite_automorphism(spec)
        e = np.zeros(8)
        e[spec.fixed_axis] = 1.0
        worst = max(worst, float(np.max(np.abs(m[:, spec.fixed_axis] - e))),
                    float(np.max(np.abs(m[:, 0] - np.eye(8)[0]))))
    return worst


def automorphism_norm_form(rng, n):
    worst = 0.0
    for i in range(n):
        family = auto.FAMILIES[i % len(auto.FAMILIES)]
        worst = max(worst, auto.norm_form_deviation(auto.finite_automorphism(_random_spec(rng, family))))
    return worst


def automorphism_composition(rng, n):
    worst = 0.0
    for _ in range(n):
        f1, f2 = rng.choice(auto.FAMILIES, size=2)
        m = auto.finite_automorphism(_random_spec(rng, str(f1))) @ auto.finite_automorphism(
            _random_spec(rng, str(f2)))
        worst = max(worst, auto.verify_automorphism(m).max_deviation)
    return worst


def infinitesimal_norm_second_order(rng, n):
    """``|dN| / (eps^2 |Gs|^2)`` must stay below 1; reports the excess."""
    k = Constants(1.0, 1.0)
    worst = 0.0
    for _ in range(n):
        sig = Signal.from_array(rng.uniform(-1, 1, size=8))
        p = auto.G2Params.from_vector(rng.uniform(-1, 1, size=14))
        base = to_octonion(sig, k)
        first = to_octonion(auto.infinitesimal_passive(sig, p, 1.0, k), k).coeff - base.coeff
        bound = float(first @ first)
        for eps in (1e-2, 1e-3, 1e-4):
            moved = to_octonion(auto.infinitesimal_passive(sig, p, eps, k), k)
            ratio = abs(moved.norm() - base.norm()) / (eps * eps * bound)
            worst = max(worst, ratio - 1.0)
    return max(worst, 0.0)


def time_invariant(rng, n):
    k = Constants(1.0, 1.0)
    for _ in range(n):
        sig = Signal.from_array(rng.uniform(-10, 10, size=8))
        p = auto.G2Params.from_vector(rng.uniform(-1, 1, size=14))
        if auto.infinitesimal_passive(sig, p, float(rng.uniform(-1, 1)), k).t != sig.t:
            return 1.0
    return 0.0


def generators_q_antisymmetric(rng, n):
    return max(float(np.max(np.abs(g.T @ tr.Q + tr.Q @ g))) for g in auto.g2_generator_matrices())


def generators_rank_and_closure(rng, n):
    gens = auto.g2_generator_matrices()
    ok = len(gens) == 14 and tr.matrix_rank(gens) == 14 and tr.lie_closure_dim(gens) == 14
    return 0.0 if ok else 1.0


def generator_match_frozen(rng, n):
    try:
        return 0.0 if auto.match_generators() == auto.GENERATOR_MATCH else 1.0
    except auto.GeneratorMismatch:
        return 1.0


# ---------------------------------------------------------------------------
# kinematics


def interval_matches_norm(rng, n):
    worst = 0.0
    for _ in range(n):
        sig = Signal.from_array(rng.uniform(-100, 100, size=8))
        k = Constants(float(rng.uniform(0.5, 3)), float(rng.uniform(0, 2)))
        o = to_octonion(sig, k)
        worst = max(worst, abs(interval(sig, k) - o.norm()) / (1 + float(o.coeff @ o.coeff)))
    return worst


def lorentz_classical_exact(rng, n):
    for _ in range(n):
        c = float(rng.uniform(0.5, 3))
        v = rng.uniform(-1, 1, size=3)
        v = v / np.linalg.norm(v) * rng.uniform(0, 0.99) * c
        r = RateState(tuple(v), float(rng.normal()), rng.normal(size=(3, 3)).tolist())
        k = Constants(c, 0.0)
        v2 = float(np.dot(r.v, r.v))
        if lorentz_factor(r, k) != math.sqrt((1.0 - 0.0) - (v2 / c ** 2) * (1.0 - 0.0)):
            return 1.0
    return 0.0


def uncertainty_monotone(rng, n):
    for _ in range(n):
        k = Constants(float(rng.uniform(0.5, 2)), float(rng.uniform(0, 2)))
        ratios = rng.uniform(0, 3, size=3)
        dt = float(rng.uniform(0, 3))
        v2 = float(rng.uniform(0, 5))
        before = uncertainty_check(ratios, dt, v2, k)
        grow = rng.uniform(0, 1, size=3)
        after = uncertainty_check(ratios + grow, dt + float(rng.uniform(0, 1)),
                                  max(0.0, v2 - float(rng.uniform(0, 1))), k)
        for b, a in zip(before.relations, after.relations):
            if b.passed and not a.passed:
                return 1.0
    return 0.0


def paracomplex_roundtrip(rng, n):
    for row in _coeffs(rng, n):
        s = Octonion(row)
        if not np.array_equal(from_paracomplex(paracomplex_form(s)).coeff, row):
            return 1.0
    return 0.0


SUITES: dict[str, tuple[Property, ...]] = {
    "algebra": (
        Property("table_matches_generating_relations", table_matches_generator, 0.0, True),
        Property("signature_4_4", signature_four_four, 0.0, True),
        Property("norm_composition", norm_composition, 1e-9),
        Property("conjugation_antihomomorphism", conjugation_antihomomorphism, 1e-9),
        Property("norm_is_scalar_part", norm_is_scalar_part, 1e-9),
        Property("alternativity", alternativity, 1e-9),
        Property("flexibility", flexibility, 1e-9),
        Property("triple_census_7_28", triple_census, 0.0, True),
        Property("pairs_on_exactly_one_line", pairs_on_one_line, 0.0, True),
        Property("dot_edges_match_table", dot_edges_match_table, 0.0, True),
    ),
    "transforms": (
        Property("rotor_unit_norm", rotor_unit_norm, 1e-9),
        Property("rotor_one_parameter_subgroup", rotor_one_parameter, 1e-9),
        Property("left_transform_norm_multiplicative", left_transform_norm, 1e-9),
        Property("decomposition_roundtrip", decomposition_roundtrip, 1e-12),
        Property("plane_norm_identity", plane_norm_identity, 1e-9),
        Property("passive_rotation_norm", passive_norm, 1e-9),
        Property("passive_rotation_inverse", passive_inverse, 1e-9),
        Property("boost_velocity_addition", boost_velocity_addition, 1e-9),
        Property("left_generators_q_antisymmetric", left_generators_q_antisymmetric, 0.0, True),
        Property("passive_phases_span_28", passive_generators_span, 0.0, True),
    ),
    "automorphisms": (
        Property("preserves_products", automorphism_products, 1e-12),
        Property("fixes_scalar_and_axis", automorphism_fixes_axis, 1e-12),
        Property("preserves_norm_form", automorphism_norm_form, 1e-12),
        Property("composition_is_automorphism", automorphism_composition, 1e-10),
        Property("infinitesimal_norm_second_order", infinitesimal_norm_second_order, 1e-6,
                 fixed_bound=True),
        Property("time_exactly_invariant", time_invariant, 0.0, True),
        Property("generators_q_antisymmetric", generators_q_antisymmetric, 1e-12),
        Property("generators_rank_and_closure_14", generators_rank_and_closure, 0.0, True),
        Property("generator_match_table", generator_match_frozen, 0.0, True),
    ),
    "kinematics": (
        Property("interval_equals_norm", interval_matches_norm, 1e-9),
        Property("lorentz_factor_classical_exact", lorentz_classical_exact, 0.0, True),
        Property("uncertainty_monotone", uncertainty_monotone, 0.0, True),
        Property("paracomplex_roundtrip_exact", paracomplex_roundtrip, 0.0, True),
    ),
}

SUITE_NAMES = ("all", *SUITES)


def _shard_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, SHARD_SIZE)
    return [SHARD_SIZE] * full + ([rest] if rest else [])


def run_property(prop: Property, trials: int, seed: int, tolerance: float | None = None,
                 workers: int = 1) -> PropertyResult:
    overridable = not (prop.structural or prop.fixed_bound)
    tol = tolerance if (tolerance is not None and overridable) else prop.tolerance
    root = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(prop.name.encode()),))
    if prop.structural:
        dev = prop.check(np.random.default_rng(root), 1)
        return PropertyResult(prop.name, 1, dev, tol, dev <= tol)
    sizes = _shard_sizes(trials)
    seeds = root.spawn(len(sizes))

    def shard(args):
        size, ss = args
        return prop.check(np.random.default_rng(ss), size)

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            devs = list(pool.map(shard, zip(sizes, seeds)))
    else:
        devs = [shard(a) for a in zip(sizes, seeds)]
    dev = max(devs) if devs else 0.0
    return PropertyResult(prop.name, trials, dev, tol, dev <= tol)


def run_suite(suite: str = "all", trials: int = 1000, seed: int = 0,
              tolerance: float | None = None, workers: int = 1) -> VerifyReport:
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITE_NAMES)}")
    if trials < 1:
        raise ValueError("trials must be positive")
    names = list(SUITES) if suite == "all" else [suite]
    start = time.perf_counter()
    report = VerifyReport(suite, seed, trials)
    for name in names:
        for prop in SUITES[name]:
            report.properties.append(run_property(prop, trials, seed, tolerance, workers))
    report.wall_time = time.perf_counter() - start
    return report
