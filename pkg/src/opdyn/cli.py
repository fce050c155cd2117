"""Configuration-driven experiment runner.

Command shape:

    opdyn <task> [--config cfg.json] [--preset name] [--set key=value ...] --out DIR

Tasks: value_iter, discounted, euler, ode, phi_ode, verify, suite,
generate-game.  Config is JSON; --set overrides dotted keys.  All artifacts
are written atomically with shortest-round-trip float formatting, so
re-running a config reproduces byte-identical files.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
import tempfile

import numpy as np

from . import bounds, continuous, core, discrete, shapley
from .errors import InputError, ResourceError, SchemaError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_SCHEMA = 3
EXIT_RESOURCE = 4
EXIT_IO = 5

TASKS = (
    "value_iter",
    "discounted",
    "euler",
    "ode",
    "phi_ode",
    "verify",
    "suite",
    "generate-game",
)

PRESETS = {
    "translation": {
        "task": "value_iter",
        "operator": {"builtin": "translation", "c": [1.0]},
        "N": 50,
    },
    "rotation30": {
        "task": "ode",
        "operator": {"builtin": "rotation", "theta_degrees": 30.0},
        "U0": [1.0, 0.0],
        "T": 20.0,
        "tol": 1e-8,
    },
    "matching-pennies": {
        "task": "discounted",
        "operator": {"game_builtin": "matching-pennies"},
        "lambdas": [0.5, 0.1, 0.01],
        "tol": 1e-10,
    },
    "random3": {
        "task": "value_iter",
        "operator": {
            "random_game": {
                "states": 3, "rows": 2, "cols": 2,
                "payoff_range": [-1.0, 1.0], "seed": 7,
            }
        },
        "N": 100,
    },
    "paper-suite": {
        "task": "suite",
    },
}


# ---------------------------------------------------------------------------
# config plumbing

def _set_dotted(cfg, key, raw):
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.split(".")
    node = cfg
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise InputError(f"--set {key}: {part!r} is not an object")
    node[parts[-1]] = value


def load_config(args):
    cfg = {}
    if args.preset:
        if args.preset not in PRESETS:
            raise InputError(
                f"unknown preset {args.preset!r} (known: {', '.join(sorted(PRESETS))})"
            )
        cfg = copy.deepcopy(PRESETS[args.preset])
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config: {exc}")
        except json.JSONDecodeError as exc:
            raise InputError(f"config is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise InputError("config: top-level value must be an object")
        cfg.update(loaded)
    for item in args.set or []:
        if "=" not in item:
            raise InputError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        _set_dotted(cfg, key, raw)
    return cfg


def build_operator(spec):
    if not isinstance(spec, dict):
        raise InputError("operator: must be an object")
    sources = [k for k in ("builtin", "game", "game_builtin", "random_game") if k in spec]
    if len(sources) != 1:
        raise InputError(
            "operator: exactly one of builtin / game / game_builtin / random_game"
        )
    kind = sources[0]
    if kind == "builtin":
        name = spec["builtin"]
        norm_kind = spec.get("norm", None)
        if name == "translation":
            return core.Translation(spec.get("c", [1.0]), norm_kind=norm_kind or core.SUP)
        if name == "rotation":
            if "theta_degrees" in spec:
                theta = np.deg2rad(float(spec["theta_degrees"]))
            else:
                theta = float(spec.get("theta", np.pi / 6.0))
            return core.rotation(theta)
        if name == "affine":
            return core.AffineNonexpansive(
                spec["matrix"], spec["offset"], norm_kind=norm_kind or core.SUP
            )
        if name == "identity":
            return core.identity_operator(int(spec.get("dim", 1)))
        raise InputError(f"operator: unknown builtin {name!r}")
    if kind == "game":
        return shapley.ShapleyOperator(shapley.load_game(spec["game"]))
    if kind == "game_builtin":
        name = spec["game_builtin"]
        if name != "matching-pennies":
            raise InputError(f"operator: unknown game_builtin {name!r}")
        return shapley.ShapleyOperator(shapley.matching_pennies())
    g = spec["random_game"]
    return shapley.ShapleyOperator(
        shapley.random_game(
            int(g.get("states", 3)),
            int(g.get("rows", 2)),
            int(g.get("cols", 2)),
            tuple(g.get("payoff_range", (-1.0, 1.0))),
            seed=int(g.get("seed", 0)),
        )
    )


def build_param(spec):
    if spec is None:
        return None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("param: must be an object with a 'kind'")
    kind = spec["kind"]
    if kind == "constant":
        return continuous.Constant(float(spec.get("lambda", 0.5)))
    if kind == "inverse_time_zeta":
        return continuous.InverseTimeZeta()
    if kind == "power_alpha":
        return continuous.PowerAlpha(float(spec.get("alpha", 0.5)))
    if kind == "table":
        return continuous.Table([(float(t), float(v)) for t, v in spec["knots"]])
    raise InputError(f"param: unknown kind {kind!r}")


def build_steps(spec):
    if spec is None:
        return None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("steps: must be an object with a 'kind'")
    kind = spec["kind"]
    if kind == "constant":
        return discrete.StepSequence.constant(
            float(spec.get("lambda", 0.5)), int(spec["N"])
        )
    if kind == "harmonic":
        return discrete.StepSequence.harmonic(int(spec["N"]))
    if kind == "inverse_sqrt":
        return discrete.StepSequence.inverse_sqrt(int(spec["N"]))
    if kind == "explicit":
        return discrete.StepSequence(np.asarray(spec["values"], dtype=float))
    raise InputError(f"steps: unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# deterministic artifact output

def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _atomic_write(path, text):
    directory = os.path.dirname(path) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}")


class _IOFailure(Exception):
    pass


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _json_default(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    _atomic_write(path, text + "\n")


# ---------------------------------------------------------------------------
# tasks

def _coord_header(prefix, dim):
    return [f"{prefix}_{i}" for i in range(dim)]


def task_value_iter(cfg, out):
    op = build_operator(cfg["operator"])
    N = int(cfg.get("N", 100))
    _, vn = discrete.iterate_Vn(op, N)
    header = ["n"] + _coord_header("v", op.dim) + ["norm_vn"]
    rows = [
        [n + 1] + list(vn[n]) + [op.norm(vn[n])]
        for n in range(N)
    ]
    write_csv(os.path.join(out, "value_iter.csv"), header, rows)
    return EXIT_OK


def task_discounted(cfg, out):
    op = build_operator(cfg["operator"])
    lams = [float(l) for l in cfg.get("lambdas", [0.5, 0.1, 0.01])]
    tol = float(cfg.get("tol", 1e-10))
    header = ["lambda"] + _coord_header("v", op.dim) + ["iterations", "certified_error"]
    rows = []
    for lam in lams:
        res = discrete.solve_vlambda(op, lam, tol=tol, full=True)
        rows.append([lam] + list(res.v) + [res.iterations, res.certified_error])
    write_csv(os.path.join(out, "discounted.csv"), header, rows)
    return EXIT_OK


def task_euler(cfg, out):
    op = build_operator(cfg["operator"])
    steps = build_steps(cfg.get("steps", {"kind": "harmonic", "N": 100}))
    x0 = cfg.get("x0", [0.0] * op.dim)
    orbit = discrete.euler_scheme(op, x0, steps)
    header = ["n", "sigma", "tau"] + _coord_header("x", op.dim)
    rows = [
        [n, steps.sigma[n], steps.tau[n]] + list(orbit.points[n])
        for n in range(len(steps) + 1)
    ]
    write_csv(os.path.join(out, "euler.csv"), header, rows)
    return EXIT_OK


def _sample_rows(traj, cfg, param=None):
    count = int(cfg.get("samples", 201))
    idx = np.unique(np.linspace(0, len(traj.times) - 1, count).astype(int))
    rows = []
    for i in idx:
        t = traj.times[i]
        row = [t] + list(traj.points[i]) + [traj.err_bound[i]]
        if param is not None:
            row.append(param.value(float(t)))
        rows.append(row)
    return rows


def task_ode(cfg, out):
    op = build_operator(cfg["operator"])
    U0 = cfg.get("U0", [0.0] * op.dim)
    T = float(cfg.get("T", 20.0))
    tol = float(cfg.get("tol", 1e-8))
    traj = continuous.integrate_U(op, U0, T, tol=tol)
    header = ["t"] + _coord_header("u", op.dim) + ["err_bound"]
    write_csv(os.path.join(out, "ode.csv"), header, _sample_rows(traj, cfg))
    return EXIT_OK


def task_phi_ode(cfg, out):
    op = build_operator(cfg["operator"])
    param = build_param(cfg.get("param", {"kind": "power_alpha", "alpha": 0.5}))
    u0 = cfg.get("u0", [0.0] * op.dim)
    T = float(cfg.get("T", 20.0))
    tol = float(cfg.get("tol", 1e-8))
    traj = continuous.integrate_u(op, param, u0, T, tol=tol)
    header = ["t"] + _coord_header("u", op.dim) + ["err_bound", "lambda"]
    write_csv(os.path.join(out, "phi_ode.csv"), header,
              _sample_rows(traj, cfg, param))
    return EXIT_OK


def _emit_reports(reports, out):
    write_json(os.path.join(out, "reports.json"),
               [r.to_dict() for r in reports])
    header = ["check", "lhs", "rhs", "slack", "tol_budget", "verdict", "context"]
    rows = [
        [r.check, r.lhs, r.rhs, r.slack, r.tol_budget,
         "pass" if r.verdict else "fail",
         json.dumps(r.context, sort_keys=True, default=_json_default)
             .replace(",", ";")]
        for r in reports
    ]
    write_csv(os.path.join(out, "reports.csv"), header, rows)
    return EXIT_OK if all(r.verdict for r in reports) else EXIT_CHECK_FAILED


def _settings_from(cfg):
    st = bounds.Settings()
    for name in ("ode_tol", "fp_tol", "quad_tol", "decay_factor", "samples", "seed"):
        if name in cfg.get("settings", {}):
            setattr(st, name, type(getattr(st, name))(cfg["settings"][name]))
    return st


def task_verify(cfg, out):
    op = build_operator(cfg["operator"])
    checks = cfg.get("checks")
    if not checks:
        raise InputError("verify: 'checks' must list at least one check id")
    scenario = bounds.Scenario(
        operator=op,
        horizon=float(cfg.get("horizon", 50.0)),
        param=build_param(cfg.get("param")),
        param2=build_param(cfg.get("param2")),
        steps=build_steps(cfg.get("steps")),
        steps2=build_steps(cfg.get("steps2")),
        starts=cfg.get("starts"),
        seed=int(cfg.get("seed", 0)),
        extra=cfg.get("extra", {}),
    )
    settings = _settings_from(cfg)
    reports = []
    for check in checks:
        reports.extend(bounds.verify(check, scenario, settings))
    return _emit_reports(reports, out)


def task_suite(cfg, out):
    reports = bounds.run_suite(_settings_from(cfg))
    return _emit_reports(reports, out)


def task_generate_game(cfg, out):
    g = cfg.get("random_game") or cfg.get("operator", {}).get("random_game")
    if not isinstance(g, dict):
        raise InputError("generate-game: needs a 'random_game' object")
    game = shapley.random_game(
        int(g.get("states", 3)),
        int(g.get("rows", 2)),
        int(g.get("cols", 2)),
        tuple(g.get("payoff_range", (-1.0, 1.0))),
        seed=int(g.get("seed", 0)),
    )
    path = os.path.join(out, cfg.get("game_file", "game.json"))
    write_json(path, game.to_dict())
    shapley.load_game(path)  # every emitted file must reload cleanly
    return EXIT_OK


TASK_RUNNERS = {
    "value_iter": task_value_iter,
    "discounted": task_discounted,
    "euler": task_euler,
    "ode": task_ode,
    "phi_ode": task_phi_ode,
    "verify": task_verify,
    "suite": task_suite,
    "generate-game": task_generate_game,
}


def make_parser():
    parser = argparse.ArgumentParser(
        prog="opdyn",
        description="Numerical laboratory for nonexpansive operator dynamics.",
    )
    parser.add_argument("task", choices=TASKS)
    parser.add_argument("--config", help="path to a JSON config file")
    parser.add_argument("--preset", help="named preset supplying config defaults")
    parser.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="override a dotted config key (value parsed as JSON when possible)",
    )
    parser.add_argument("--out", default=".", help="output directory")
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        os.makedirs(args.out, exist_ok=True)
        return TASK_RUNNERS[args.task](cfg, args.out)
    except SchemaError as exc:
        print(f"opdyn: schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ResourceError as exc:
        print(f"opdyn: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InputError as exc:
        print(f"opdyn: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (_IOFailure, OSError) as exc:
        print(f"opdyn: io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except KeyError as exc:
        print(f"opdyn: config error: missing field {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
