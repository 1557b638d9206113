"""Command line front end.

Reads a JSON game description and answers questions about it: the
battlefield schedule, one player's target scores, exit-time statistics,
or full Monte Carlo playouts.  All output goes to stdout as JSON (CSV on
request); diagnostics go to stderr.

Exit codes: 0 success, 1 bad command line, 2 unreadable or malformed
spec file, 3 spec validates JSON but breaks a semantic rule, 4 numeric
or domain failure while computing.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any

from .curves import SuccessCurve, evaluate, make_curve
from .gamespec import GameSpec, PlayerSpec
from .renewal import (
    RenewalProcess,
    exit_stats_exponential,
    mc_exit_stats,
)
from .schedule import build_schedule
from .simulate import Policy, estimate
from .targeting import battlefield_scores, multi_bullet_battlefields

CURVE_TYPES = ("linear", "power", "expsat", "table")
RENEWAL_DISTS = ("exponential", "deterministic", "uniform", "gamma")


class SpecSyntaxError(Exception):
    """Spec file missing, unreadable, or not valid JSON."""


class SpecError(Exception):
    """Spec parses as JSON but violates a semantic rule."""


class _Parser(argparse.ArgumentParser):
    # unknown commands and flags exit 1, not argparse's default 2
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _fail(path: str, message: str):
    raise SpecError(f"{path}: {message}")


def _number(obj: dict, key: str, path: str, required: bool = True, default=None):
    if key not in obj:
        if required:
            _fail(path, f"missing required field {key!r}")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(f"{path}.{key}", "must be a number")
    if not math.isfinite(v):
        _fail(f"{path}.{key}", "must be finite")
    return float(v)


def _integer(obj: dict, key: str, path: str, required: bool = True, default=None):
    if key not in obj:
        if required:
            _fail(path, f"missing required field {key!r}")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(f"{path}.{key}", "must be an integer")
    return v


def _check_keys(obj: dict, allowed: set[str], path: str):
    for key in obj:
        if key not in allowed:
            _fail(path, f"unknown field {key!r}")


def _parse_curve(obj: Any, path: str) -> SuccessCurve:
    if not isinstance(obj, dict):
        _fail(path, "must be an object")
    kind = obj.get("type")
    if kind not in CURVE_TYPES:
        _fail(f"{path}.type", f"must be one of {list(CURVE_TYPES)}")
    try:
        if kind == "linear":
            _check_keys(obj, {"type", "t_max"}, path)
            return make_curve("linear", _number(obj, "t_max", path))
        if kind == "power":
            _check_keys(obj, {"type", "t_max", "k"}, path)
            return make_curve(
                "power", _number(obj, "t_max", path), k=_number(obj, "k", path)
            )
        if kind == "expsat":
            _check_keys(obj, {"type", "t_max", "rate"}, path)
            return make_curve(
                "expsat", _number(obj, "t_max", path), rate=_number(obj, "rate", path)
            )
        _check_keys(obj, {"type", "t_max", "knots"}, path)
        knots = obj.get("knots")
        if not isinstance(knots, list) or not knots:
            _fail(f"{path}.knots", "must be a nonempty list of [time, prob] pairs")
        for i, kn in enumerate(knots):
            if (
                not isinstance(kn, list)
                or len(kn) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in kn)
            ):
                _fail(f"{path}.knots[{i}]", "must be a [time, prob] number pair")
        t_max = _number(obj, "t_max", path, required=False)
        if t_max is None:
            t_max = float(knots[-1][0])
        return make_curve("table", t_max, knots=[(kn[0], kn[1]) for kn in knots])
    except ValueError as exc:
        _fail(path, str(exc))


def _parse_renewal(obj: Any, path: str) -> RenewalProcess:
    if obj is None:
        return RenewalProcess.exponential(1.0)
    if not isinstance(obj, dict):
        _fail(path, "must be an object")
    dist = obj.get("dist")
    if dist not in RENEWAL_DISTS:
        _fail(f"{path}.dist", f"must be one of {list(RENEWAL_DISTS)}")
    try:
        if dist == "exponential":
            _check_keys(obj, {"dist", "rate"}, path)
            return RenewalProcess.exponential(_number(obj, "rate", path))
        if dist == "deterministic":
            _check_keys(obj, {"dist", "period"}, path)
            return RenewalProcess.deterministic(_number(obj, "period", path))
        if dist == "uniform":
            _check_keys(obj, {"dist", "lo", "hi"}, path)
            return RenewalProcess.uniform(
                _number(obj, "lo", path), _number(obj, "hi", path)
            )
        _check_keys(obj, {"dist", "shape", "scale"}, path)
        return RenewalProcess.gamma(
            _number(obj, "shape", path), _number(obj, "scale", path)
        )
    except ValueError as exc:
        _fail(path, str(exc))


def parse_spec(text: str) -> GameSpec:
    """Parse and validate the JSON game description."""
    try:
        root = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(f"invalid JSON: {exc}") from None
    if not isinstance(root, dict):
        _fail("$", "top level must be an object")
    _check_keys(root, {"players", "tolerance"}, "$")
    raw_players = root.get("players")
    if not isinstance(raw_players, list):
        _fail("$.players", "must be a list")
    if len(raw_players) < 2:
        _fail("$.players", "need at least two players")
    players = []
    for i, entry in enumerate(raw_players):
        path = f"$.players[{i}]"
        if not isinstance(entry, dict):
            _fail(path, "must be an object")
        _check_keys(entry, {"id", "curve", "bullets", "renewal"}, path)
        pid = _integer(entry, "id", path)
        if pid < 1:
            _fail(f"{path}.id", "must be >= 1")
        if "curve" not in entry:
            _fail(path, "missing required field 'curve'")
        curve = _parse_curve(entry["curve"], f"{path}.curve")
        bullets = _integer(entry, "bullets", path, required=False, default=1)
        if bullets < 1:
            _fail(f"{path}.bullets", "must be >= 1")
        renewal = _parse_renewal(entry.get("renewal"), f"{path}.renewal")
        players.append(PlayerSpec(id=pid, curve=curve, bullets=bullets, renewal=renewal))
    tolerance = _number(root, "tolerance", "$", required=False, default=1e-9)
    if tolerance <= 0:
        _fail("$.tolerance", "must be > 0")
    try:
        return GameSpec(players=tuple(players), tolerance=tolerance)
    except ValueError as exc:
        _fail("$.players", str(exc))


def _load_spec(path: str) -> GameSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecSyntaxError(f"cannot read spec file: {exc}") from None
    return parse_spec(text)


def _fmt(x: float) -> str:
    return repr(float(x))


def _csv(header: list[str], rows: list[list[Any]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row)
        )
    return "\n".join(lines) + "\n"


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _cmd_validate(spec: GameSpec, args) -> str:
    return ""


def _cmd_schedule(spec: GameSpec, args) -> str:
    sched = build_schedule(spec.curves(), spec.tolerance)
    rows = [
        {"m": bf.index, "i": bf.pair[0], "j": bf.pair[1], "time": bf.time}
        for bf in sched.battlefields
    ]
    if args.format == "csv":
        return _csv(
            ["m", "i", "j", "time"],
            [[r["m"], r["i"], r["j"], r["time"]] for r in rows],
        )
    return _dump({"n": sched.n, "battlefields": rows})


def _cmd_targets(spec: GameSpec, args) -> str:
    objective = "max_q" if args.objective == "max" else "min_q"
    sched = build_schedule(spec.curves(), spec.tolerance)
    curves = spec.curves()
    spec.player(args.player)
    plans = multi_bullet_battlefields(
        sched, curves, args.player, args.bullets, objective
    )
    chosen = {p.m_star for p in plans}
    rows = [
        {
            "m": s.m,
            "opponent": s.opponent,
            "time": s.time,
            "p_shoot": s.p_shoot,
            "q": s.q,
            "chosen": s.m in chosen,
        }
        for s in battlefield_scores(sched, curves, args.player)
    ]
    if args.format == "csv":
        return _csv(
            ["m", "opponent", "time", "p_shoot", "q", "chosen"],
            [
                [r["m"], r["opponent"], r["time"], r["p_shoot"], r["q"],
                 "true" if r["chosen"] else "false"]
                for r in rows
            ],
        )
    return _dump(
        {
            "player": args.player,
            "objective": objective,
            "bullets": args.bullets,
            "battlefields": rows,
        }
    )


def _stats_dict(st) -> dict:
    return {
        "mean_exit": st.mean_exit,
        "mean_pre_exit": st.mean_pre_exit,
        "mean_nu": st.mean_nu,
        "stderr_exit": st.stderr_exit,
        "stderr_pre_exit": st.stderr_pre_exit,
        "stderr_nu": st.stderr_nu,
        "n_samples": st.n_samples,
        "nu_approx": st.nu_approx,
    }


def _cmd_exit_times(spec: GameSpec, args) -> str:
    player = spec.player(args.player)
    proc = player.renewal
    closed = (
        exit_stats_exponential(proc.p0, args.threshold)
        if proc.law == "exponential"
        else None
    )
    mc = mc_exit_stats(proc, args.threshold, args.mc_samples, args.seed)
    if args.format == "csv":
        header = ["source"] + list(_stats_dict(mc))
        rows = []
        if closed is not None:
            rows.append(["closed_form"] + list(_stats_dict(closed).values()))
        rows.append(["monte_carlo"] + list(_stats_dict(mc).values()))
        return _csv(header, rows)
    return _dump(
        {
            "player": args.player,
            "law": proc.law,
            "threshold": args.threshold,
            "mc_samples": args.mc_samples,
            "seed": args.seed,
            "closed_form": None if closed is None else _stats_dict(closed),
            "monte_carlo": _stats_dict(mc),
        }
    )


def _cmd_simulate(spec: GameSpec, args) -> str:
    objective = "max_q" if args.objective == "max" else "min_q"
    policy = Policy(name=args.policy, objective=objective)
    est = estimate(spec, policy, args.runs, args.seed, collect_logs=args.log)
    players = [
        {
            "id": pid,
            "survival_rate": est.survival_rate[pid],
            "survival_stderr": est.survival_stderr[pid],
            "hit_rate": est.hit_rate[pid],
            "hit_stderr": est.hit_stderr[pid],
        }
        for pid in sorted(est.survival_rate)
    ]
    if args.format == "csv":
        return _csv(
            ["id", "survival_rate", "survival_stderr", "hit_rate", "hit_stderr"],
            [
                [p["id"], p["survival_rate"], p["survival_stderr"],
                 p["hit_rate"], p["hit_stderr"]]
                for p in players
            ],
        )
    out = {
        "runs": est.runs,
        "seed": est.seed,
        "policy": args.policy,
        "objective": objective,
        "players": players,
    }
    if args.log:
        out["logs"] = [
            {
                "run": run,
                "shots": [
                    {
                        "shooter": ev.shooter,
                        "target": ev.target,
                        "time": ev.time,
                        "local_time": ev.local_time,
                        "p_hit": ev.p_hit,
                        "outcome": ev.outcome,
                    }
                    for ev in shots
                ],
            }
            for run, shots in enumerate(est.logs)
        ]
    return _dump(out)


def _cmd_curves(spec: GameSpec, args) -> str:
    curves = spec.curves()
    ids = sorted(curves)
    horizon = max(c.t_max for c in curves.values())
    step = args.step if args.step is not None else horizon / 500.0
    if step <= 0:
        raise ValueError("step must be > 0")
    count = int(math.ceil(horizon / step))
    rows = []
    for k in range(count + 1):
        t = min(k * step, horizon)
        rows.append([t] + [evaluate(curves[i], t) for i in ids])
    return _csv(["t"] + [f"P_{i}" for i in ids], rows)


_COMMANDS = {
    "validate": _cmd_validate,
    "schedule": _cmd_schedule,
    "targets": _cmd_targets,
    "exit-times": _cmd_exit_times,
    "simulate": _cmd_simulate,
    "curves": _cmd_curves,
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="duelsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("spec", help="path to the JSON game description")
        return p

    add("validate", help="check the game description and print nothing")

    p = add("schedule", help="sorted battlefield schedule")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("targets", help="battlefield scores for one player")
    p.add_argument("--player", type=int, required=True)
    p.add_argument("--bullets", type=int, default=1)
    p.add_argument("--objective", choices=("max", "min"), default="max")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("exit-times", help="exit statistics for one player's epochs")
    p.add_argument("--player", type=int, required=True)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--mc-samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("simulate", help="Monte Carlo playouts")
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--policy", choices=("threshold", "versatile", "naive_max"),
                   default="threshold")
    p.add_argument("--objective", choices=("max", "min"), default="max")
    p.add_argument("--log", action="store_true", help="include per-run shot logs")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("curves", help="success curves on a time grid, CSV")
    p.add_argument("--step", type=float, default=None)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "log", False) and args.format == "csv":
        sys.stderr.write("duelsim: error: --log needs --format json\n")
        return 1
    try:
        spec = _load_spec(args.spec)
        out = _COMMANDS[args.command](spec, args)
    except SpecSyntaxError as exc:
        sys.stderr.write(f"duelsim: spec error: {exc}\n")
        return 2
    except SpecError as exc:
        sys.stderr.write(f"duelsim: spec error: {exc}\n")
        return 3
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"duelsim: error: {exc}\n")
        return 4
    sys.stdout.write(out)
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
