"""Command-line front end.

    zsembed solve  --config game.json [--format table|json|csv] [--seed N]
    zsembed verify --config game.json [--candidate x1,x2,...]
    zsembed oracle --config game.json --resolution N

Exit codes: 0 success, 2 invalid config or input, 3 non-convergence,
4 verification failure. Errors are also written to stderr as one JSON
record.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from .core import Tolerances
from .embedding import extend, quadratic_subsidy, sion_check
from .errors import GameError, GridTooLarge, NonConvergence, NotANash
from .games import CournotSpec, QuadraticGameSpec, cournot_game, quadratic_game, symmetric_cournot_game
from .oracle import brute_nash, compare_with_continuous, discretize, nearest_index
from .solver import multi_start, solve_maximin_fixed_point, verify_theorem1, verify_theorem2

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3
EXIT_VERIFICATION = 4

FORMATS = ("table", "json", "csv")

_TOP_KEYS = {"game", "subsidy", "solver", "tolerances", "format", "seed"}
_GAME_KEYS = {"family", "params"}
_SUBSIDY_KEYS = {"family", "vertex", "f_bounds"}
_SOLVER_KEYS = {"damping", "max_iter", "init", "multi_start"}
_TOL_KEYS = {"opt_tol", "fp_tol", "eq_tol", "tie_tol", "scan_points"}
_FAMILY_KEYS = {
    "cournot": ({"demand_intercept", "b", "c"}, {"output_bound"}),
    "symmetric_cournot": ({"n", "demand_intercept", "b", "c"}, {"output_bound"}),
    "quadratic": ({"own", "bounds"}, {"cross", "linear", "constant"}),
}


class ConfigError(Exception):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass
class RunConfig:
    game_family: str
    game_params: dict
    subsidy_vertex: float
    f_bounds: tuple
    tolerances: Tolerances = field(default_factory=Tolerances)
    damping: float = 0.5
    max_iter: int = 10_000
    init: Optional[list] = None
    multi_start: int = 0
    seed: int = 0
    format: str = "table"
    raw: dict = field(default_factory=dict)

    def build(self):
        """Validated zero-sum extension for this config."""
        try:
            game = _build_game(self.game_family, self.game_params)
        except GameError as exc:
            fld = getattr(exc, "field", None)
            raise ConfigError(f"game.params.{fld}" if fld else "game.params", str(exc)) from exc
        try:
            subsidy = quadratic_subsidy(self.subsidy_vertex, self.f_bounds)
            ext = extend(game, subsidy, self.tolerances)
        except GameError as exc:
            raise ConfigError("subsidy", str(exc)) from exc
        if self.init is not None:
            try:
                ext.game.check_profile(self.init)
            except GameError as exc:
                raise ConfigError("solver.init", str(exc)) from exc
        return ext


def _build_game(family, params):
    if family == "cournot":
        spec = CournotSpec(params["demand_intercept"], params["b"], tuple(params["c"]),
                           params.get("output_bound"))
        return cournot_game(spec)
    if family == "symmetric_cournot":
        return symmetric_cournot_game(int(params["n"]), float(params["demand_intercept"]),
                                      float(params["b"]), float(params["c"]),
                                      params.get("output_bound"))
    spec = QuadraticGameSpec(
        own=tuple(params["own"]),
        bounds=tuple(tuple(b) for b in params["bounds"]),
        cross=params.get("cross"),
        linear=params.get("linear"),
        constant=params.get("constant"),
    )
    return quadratic_game(spec)


def _check_keys(section, obj, allowed, required=()):
    if not isinstance(obj, dict):
        raise ConfigError(section, "must be an object")
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{section}.{key}" if section else key, "unknown key")
    for key in required:
        if key not in obj:
            raise ConfigError(f"{section}.{key}" if section else key, "missing required key")


def _number(path, value, *, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if integer and not float(value).is_integer():
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(path, "must be finite")
    return int(value) if integer else float(value)


def _numbers(path, value, length=None):
    if not isinstance(value, list):
        raise ConfigError(path, "expected a list of numbers")
    if length is not None and len(value) != length:
        raise ConfigError(path, f"expected {length} entries, got {len(value)}")
    return [_number(f"{path}[{i}]", v) for i, v in enumerate(value)]


def parse_config(raw: Any) -> RunConfig:
    """Strict parse of the JSON config object; unknown keys are errors."""
    _check_keys("", raw, _TOP_KEYS, ("game", "subsidy"))
    game = raw["game"]
    _check_keys("game", game, _GAME_KEYS, ("family", "params"))
    family = game["family"]
    if family not in _FAMILY_KEYS:
        raise ConfigError("game.family", f"unknown family {family!r}; choose from {sorted(_FAMILY_KEYS)}")
    required, optional = _FAMILY_KEYS[family]
    _check_keys("game.params", game["params"], required | optional, sorted(required))
    params = _game_params(family, game["params"])

    sub = raw["subsidy"]
    _check_keys("subsidy", sub, _SUBSIDY_KEYS, ("vertex", "f_bounds"))
    if sub.get("family", "quadratic") != "quadratic":
        raise ConfigError("subsidy.family", "only 'quadratic' is supported")
    vertex = _number("subsidy.vertex", sub["vertex"])
    f_bounds = tuple(_numbers("subsidy.f_bounds", sub["f_bounds"], 2))

    tol_raw = raw.get("tolerances", {})
    _check_keys("tolerances", tol_raw, _TOL_KEYS)
    tol_kwargs = {
        k: _number(f"tolerances.{k}", v, integer=(k == "scan_points")) for k, v in tol_raw.items()
    }
    try:
        tolerances = Tolerances(**tol_kwargs)
    except ValueError as exc:
        raise ConfigError("tolerances", str(exc)) from exc

    solver = raw.get("solver", {})
    _check_keys("solver", solver, _SOLVER_KEYS)
    damping = _number("solver.damping", solver.get("damping", 0.5))
    if not 0 < damping <= 1:
        raise ConfigError("solver.damping", "must lie in (0, 1]")
    max_iter = _number("solver.max_iter", solver.get("max_iter", 10_000), integer=True)
    if max_iter < 1:
        raise ConfigError("solver.max_iter", "must be positive")
    init = solver.get("init")
    if init is not None:
        init = _numbers("solver.init", init)
    starts = _number("solver.multi_start", solver.get("multi_start", 0), integer=True)
    if starts < 0:
        raise ConfigError("solver.multi_start", "must be non-negative")

    seed = _number("seed", raw.get("seed", 0), integer=True)
    fmt = raw.get("format", "table")
    if fmt not in FORMATS:
        raise ConfigError("format", f"choose from {FORMATS}")
    return RunConfig(family, params, vertex, f_bounds, tolerances, damping, max_iter,
                     init, starts, seed, fmt, raw)


def _game_params(family, params):
    out = {}
    for key, value in params.items():
        path = f"game.params.{key}"
        if key in ("c",) and family == "cournot":
            out[key] = _numbers(path, value, 3)
        elif key in ("own", "linear", "constant"):
            out[key] = _numbers(path, value)
        elif key == "bounds":
            if not isinstance(value, list):
                raise ConfigError(path, "expected a list of [lo, hi] pairs")
            out[key] = [_numbers(f"{path}[{i}]", b, 2) for i, b in enumerate(value)]
        elif key == "cross":
            if not isinstance(value, list):
                raise ConfigError(path, "expected a matrix")
            out[key] = [_numbers(f"{path}[{i}]", r) for i, r in enumerate(value)]
        elif key == "n":
            out[key] = _number(path, value, integer=True)
        else:
            out[key] = _number(path, value)
    return out


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_config(raw)


# -- reports ---------------------------------------------------------------


def _f(v):
    return None if v is None else float(v)


def _sion_record(r):
    return {
        "player": r.player + 1,
        "maximin_value": _f(r.maximin_value),
        "minimax_value": _f(r.minimax_value),
        "sion_gap": _f(r.gap),
        "arg_x": _f(r.arg_x),
        "arg_f": _f(r.arg_f),
        "quasi_concave": r.quasi_concave,
        "passed": r.passed,
    }


def _inputs(cfg: RunConfig):
    return cfg.raw


def solve_report(cfg: RunConfig, ext) -> dict:
    t0 = time.perf_counter()
    sol = solve_maximin_fixed_point(ext, cfg.init, cfg.tolerances, cfg.damping, cfg.max_iter)
    x = list(sol.equilibrium_x)
    pairs = [
        sion_check(ext, i, x[:i] + x[i + 1:], cfg.tolerances, expected_x=x[i])
        for i in range(ext.n)
    ]
    report = {
        "command": "solve",
        "inputs": _inputs(cfg),
        "seed": cfg.seed,
        "equilibrium": {"x": [float(v) for v in x], "f": float(sol.equilibrium_f)},
        "values": [float(v) for v in sol.values],
        "pairs": [_sion_record(r) for r in pairs],
        "iterations": sol.iterations,
        "residual": float(sol.residual),
        "converged": sol.converged,
    }
    if cfg.multi_start:
        runs = multi_start(ext, cfg.multi_start, cfg.seed, cfg.tolerances, cfg.damping, cfg.max_iter)
        spread = max(
            max(abs(a - b) for a, b in zip(r.equilibrium_x, x)) for r in runs
        )
        report["multi_start"] = {
            "starts": cfg.multi_start,
            "max_distance": float(spread),
            "agree": spread <= cfg.tolerances.eq_tol,
            "solutions": [[float(v) for v in r.equilibrium_x] for r in runs],
        }
    report["wall_time"] = time.perf_counter() - t0
    return report


def verify_report(cfg: RunConfig, ext, candidate=None) -> dict:
    t0 = time.perf_counter()
    if candidate is None:
        rep = verify_theorem1(ext, cfg.tolerances, init=cfg.init, damping=cfg.damping,
                              max_iter=cfg.max_iter)
        mode = "solve+verify"
    else:
        rep = verify_theorem2(ext, candidate, cfg.tolerances)
        mode = "candidate"
    out = {
        "command": "verify",
        "mode": mode,
        "inputs": _inputs(cfg),
        "seed": cfg.seed,
        "equilibrium": {"x": [float(v) for v in rep.candidate], "f": float(rep.equilibrium_f)},
        "deviation_gaps": [float(g) for g in rep.deviation_gaps],
        "subsidy_argmax": _f(rep.subsidy_argmax),
        "subsidy_deviation_gap": _f(rep.subsidy_deviation_gap),
        "pairs": [_sion_record(r) for r in rep.sion_reports],
        "zero_sum_residual": float(rep.zero_sum_residual),
        "theorem1_passed": rep.theorem1_passed,
        "theorem2_passed": rep.theorem2_passed,
        "passed": rep.theorem1_passed and rep.theorem2_passed,
    }
    if rep.solve is not None:
        out["iterations"] = rep.solve.iterations
    out["wall_time"] = time.perf_counter() - t0
    return out


def oracle_report(cfg: RunConfig, ext, resolution: int) -> dict:
    t0 = time.perf_counter()
    gg = discretize(ext, resolution)
    sol = solve_maximin_fixed_point(ext, cfg.init, cfg.tolerances, cfg.damping, cfg.max_iter)
    idx = [nearest_index(gg.axes[i], v) for i, v in enumerate(sol.equilibrium_x)]
    rows = []
    for i in range(ext.n):
        cmp = compare_with_continuous(ext, gg, i, idx[:i] + idx[i + 1:], cfg.tolerances)
        rows.append({
            "player": i + 1,
            "others": [float(v) for v in cmp.others],
            "brute_maximin": cmp.brute_maximin,
            "continuous_maximin": float(cmp.continuous_maximin),
            "maximin_discrepancy": float(cmp.maximin_discrepancy),
            "brute_minimax": cmp.brute_minimax,
            "continuous_minimax": float(cmp.continuous_minimax),
            "minimax_discrepancy": float(cmp.minimax_discrepancy),
            "grid_step": cmp.grid_step,
            "lipschitz": cmp.lipschitz,
        })
    nash = brute_nash(gg)
    return {
        "command": "oracle",
        "inputs": _inputs(cfg),
        "seed": cfg.seed,
        "resolution": resolution,
        "equilibrium": {"x": [float(v) for v in sol.equilibrium_x], "f": float(sol.equilibrium_f)},
        "pairs": rows,
        "grid_nash_count": len(nash),
        "grid_nash_contains_nearest": tuple(idx) in set(nash),
        "wall_time": time.perf_counter() - t0,
    }


def emit(report: dict, fmt: str, out=None) -> str:
    """Render a report as ``table``, ``json`` or ``csv``; also writes to ``out`` if given."""
    if fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    elif fmt == "csv":
        text = _csv(report)
    else:
        text = _table(report)
    if out is not None:
        out.write(text)
    return text


def _g(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _csv(report):
    buf = io.StringIO()
    rows = _player_rows(report)
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _player_rows(report):
    rows = []
    pairs = report.get("pairs", [])
    eq = report.get("equilibrium", {})
    xs = eq.get("x", [])
    for i, x in enumerate(xs):
        row = {"player": i + 1, "x": x, "f": eq.get("f")}
        if "values" in report:
            row["phi"] = report["values"][i]
        if "deviation_gaps" in report:
            row["deviation_gap"] = report["deviation_gaps"][i]
        if i < len(pairs):
            p = pairs[i]
            for key, value in p.items():
                if key != "player":
                    row[key] = value
        rows.append(row)
    return rows


def _table(report):
    lines = [f"{report['command']}  (seed {report['seed']})"]
    eq = report.get("equilibrium")
    if eq:
        xs = ", ".join(_g(v) for v in eq["x"])
        lines.append(f"equilibrium x = ({xs})  f = {_g(eq['f'])}")
    for key in ("iterations", "residual", "zero_sum_residual", "subsidy_argmax",
                "subsidy_deviation_gap", "theorem1_passed", "theorem2_passed",
                "grid_nash_count", "resolution"):
        if key in report:
            lines.append(f"{key:<22} {_g(report[key])}")
    rows = _player_rows(report)
    if rows:
        cols = list(rows[0])
        widths = [max(len(c), *(len(_g(r[c])) for r in rows)) for c in cols]
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for r in rows:
            lines.append("  ".join(_g(r[c]).ljust(w) for c, w in zip(cols, widths)))
    return "\n".join(lines) + "\n"


# -- entry point -----------------------------------------------------------


def _error(kind, message, **extra):
    record = {"error": kind, "message": message, **extra}
    sys.stderr.write(json.dumps(record) + "\n")


def _parse_candidate(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError("--candidate", f"expected comma-separated numbers, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zsembed",
        description="Solve and verify games through their zero-sum subsidy extension.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--format", choices=FORMATS, help="report format (overrides config)")
    common.add_argument("--seed", type=int, help="random seed (overrides config)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="compute the maximin fixed point")
    verify = sub.add_parser("verify", parents=[common], help="verify both equivalence directions")
    verify.add_argument("--candidate", help="comma-separated profile to verify instead of solving")
    oracle = sub.add_parser("oracle", parents=[common], help="brute-force grid comparison")
    oracle.add_argument("--resolution", type=int, required=True, help="grid points per axis")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        fmt = args.format or cfg.format
        ext = cfg.build()
        if args.command == "solve":
            report = solve_report(cfg, ext)
        elif args.command == "verify":
            candidate = _parse_candidate(args.candidate) if args.candidate else None
            if candidate is not None:
                try:
                    ext.game.check_profile(candidate)
                except GameError as exc:
                    raise ConfigError("--candidate", str(exc)) from exc
            report = verify_report(cfg, ext, candidate)
        else:
            report = oracle_report(cfg, ext, args.resolution)
    except ConfigError as exc:
        _error("ConfigError", str(exc), field=exc.field)
        return EXIT_CONFIG
    except GridTooLarge as exc:
        _error("GridTooLarge", str(exc))
        return EXIT_CONFIG
    except NonConvergence as exc:
        _error("NonConvergence", str(exc), residual=exc.residual,
               last_iterate=[float(v) for v in exc.last_iterate], iterations=exc.iterations)
        return EXIT_NONCONVERGENCE
    except NotANash as exc:
        _error("NotANash", str(exc), deviation_gaps=[float(g) for g in exc.gaps])
        return EXIT_VERIFICATION
    except (GameError, ValueError) as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_CONFIG

    emit(report, fmt, sys.stdout)
    if report["command"] == "verify" and not report["passed"]:
        return EXIT_VERIFICATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
