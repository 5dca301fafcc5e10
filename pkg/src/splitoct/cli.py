"""``splitoct`` command-line interface.

Exit codes: 0 success, 1 a property or computation failed (including invalid
velocities, undefined decompositions and unwritable outputs), 2 usage errors
and malformed JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import star
from . import transforms as tr
from . import verify
from .algebra import UNIT_NAMES, Octonion
from .kinematics import Constants, Signal, classical_limit_sweep, from_octonion, to_octonion
from .specs import Boost, Infinitesimal, NoClassicalCounterpart, parse_transform

SEED_ENV = "SPLITOCT_SEED"


class UsageError(Exception):
    """Bad input; reported with exit code 2."""


class Failure(Exception):
    """Well-formed input whose computation fails; exit code 1."""


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed {what} JSON: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _constants(args) -> Constants:
    try:
        return Constants(args.c, args.hbar)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_signal(text: str, k: Constants) -> tuple[Octonion, Signal | None]:
    """Accept Signal JSON or ``{"coeff": [...]}``; returns the octonion and, if representable, the signal."""
    obj = _load_json(text, "signal")
    try:
        if isinstance(obj, dict) and "coeff" in obj:
            s = Octonion.from_json(obj)
            try:
                return s, from_octonion(s, k)
            except ValueError:
                return s, None
        sig = Signal.from_json(obj)
        return to_octonion(sig, k), sig
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid signal: {exc}") from None


def _read_spec(text: str):
    obj = _load_json(text, "spec")
    try:
        return parse_transform(obj)
    except (TypeError, ValueError, KeyError) as exc:
        raise UsageError(f"invalid transform spec: {exc}") from None


def cmd_table(args) -> int:
    sys.stdout.write(star.render_table(args.format))
    return 0


def cmd_graph(args) -> int:
    text = star.export_dot()
    if args.out is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise Failure(f"cannot write {args.out}: {exc}") from None
    return 0


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if args.workers < 1:
        raise UsageError("--workers must be positive")
    if args.tolerance is not None and not args.tolerance >= 0:
        raise UsageError("--tolerance must be non-negative")
    report = verify.run_suite(args.suite, args.trials, seed, args.tolerance, args.workers)
    if args.json:
        sys.stdout.write(_dump(report.to_json()))
    else:
        sys.stdout.write(report.to_text())
    if args.timing:
        print(f"wall time: {report.wall_time:.3f} s", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_transform(args) -> int:
    k = _constants(args)
    transform = _read_spec(args.spec)
    s, sig = _read_signal(args.signal, k)
    try:
        if isinstance(transform, Infinitesimal):
            if sig is None:
                raise UsageError("infinitesimal transforms need a signal representable at this hbar")
            out_sig = transform.apply_signal(sig, k)
            out = to_octonion(out_sig, k)
        else:
            out = transform.apply(s, k) if isinstance(transform, Boost) else transform.apply(s)
            try:
                out_sig = from_octonion(out, k)
            except ValueError:
                out_sig = None
    except tr.InvalidVelocityError as exc:
        raise Failure(str(exc)) from None
    result = {
        "octonion": out.to_json(),
        "signal": out_sig.to_json() if out_sig is not None else None,
        "norm_in": s.norm(),
        "norm_out": out.norm(),
    }
    sys.stdout.write(_dump(result))
    return 0


def _norm_class(n: float) -> str:
    if n > 0:
        return "positive"
    if n < 0:
        return "negative"
    return "null"


def cmd_decompose(args) -> int:
    k = _constants(args)
    try:
        axis = tr._axis(args.axis)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    s, _ = _read_signal(args.signal, k)
    try:
        d = tr.decompose(s, axis)
    except tr.DecompositionError as exc:
        bad = [{"plane": [UNIT_NAMES[u], UNIT_NAMES[b]], "norm2": n}
               for (u, b), n in zip(exc.planes, exc.norms2)]
        sys.stdout.write(_dump({"error": "decomposition undefined", "axis": args.axis,
                                "offending_planes": bad}))
        raise Failure(str(exc)) from None
    out = d.to_json()
    n = s.norm()
    out["norm"] = n
    out["norm_sign"] = _norm_class(n)
    out["signed_plane_sum"] = d.signed_norm_sum()
    sys.stdout.write(_dump(out))
    return 0


def _hbar_values(items: Sequence[str]) -> list[float]:
    values = []
    for item in items:
        for part in item.split(","):
            if not part.strip():
                continue
            try:
                h = float(part)
            except ValueError:
                raise UsageError(f"invalid hbar value {part!r}") from None
            if not (h >= 0 and h != float("inf")):
                raise UsageError(f"hbar values must be finite and non-negative, got {part!r}")
            values.append(h)
    if not values:
        raise UsageError("--hbar-list needs at least one value")
    return values


def cmd_limit(args) -> int:
    obj = _load_json(args.signal, "signal")
    try:
        sig = Signal.from_json(obj)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid signal (limit sweeps need coordinate form): {exc}") from None
    transform = _read_spec(args.spec)
    hbars = _hbar_values(args.hbar_list)
    if not args.c > 0:
        raise UsageError("--c must be positive")
    try:
        points = classical_limit_sweep(sig, transform, hbars, args.c)
    except NoClassicalCounterpart as exc:
        raise UsageError(str(exc)) from None
    except tr.InvalidVelocityError as exc:
        raise Failure(str(exc)) from None
    lines = ["hbar,deviation"] + [f"{p.hbar!r},{p.deviation!r}" for p in points]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splitoct", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="print the 8x8 multiplication table")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("graph", help="export the star incidence graph as DOT")
    p.add_argument("--out", default=None, help="output file (stdout if omitted)")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("verify", help="run the seeded invariant suites")
    p.add_argument("--suite", choices=verify.SUITE_NAMES, default="all")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tolerance", type=float, default=None,
                   help="override every non-structural tolerance")
    p.add_argument("--seed", type=int, default=None,
                   help=f"defaults to ${SEED_ENV} or 0")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="print wall time to stderr")
    p.set_defaults(func=cmd_verify)

    def constants(p):
        p.add_argument("--c", type=float, default=1.0)
        p.add_argument("--hbar", type=float, default=1.0)

    p = sub.add_parser("transform", help="apply a transform spec to a signal")
    p.add_argument("--spec", required=True)
    p.add_argument("--signal", required=True)
    constants(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("decompose", help="four-plane decomposition about an axis")
    p.add_argument("--axis", required=True, choices=("j1", "j2", "j3", "J1", "J2", "J3", "I"))
    p.add_argument("--signal", required=True)
    constants(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("limit", help="classical-limit deviation sweep as CSV")
    p.add_argument("--signal", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--hbar-list", nargs="+", required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.set_defaults(func=cmd_limit)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"splitoct: error: {exc}", file=sys.stderr)
        return 2
    except Failure as exc:
        print(f"splitoct: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
