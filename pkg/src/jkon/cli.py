"""Command-line driver: ``jkon eval|table|verify``.

Configuration comes from one flat YAML/JSON file plus flag overrides
(flags win). Output is CSV (header row, 17 significant digits, LF line
endings) or JSON (``{"meta": ..., "rows": [...]}``). Exit codes: 0 success,
1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np
import yaml

from . import __version__
from .jkml import JkmlArgs, jkml_eval, jkml_tail_bound
from .kdf import TruncationPolicy
from .polynomials import (
    biorthogonality_matrix,
    biorthogonality_norm,
    generating_function_check,
    jk_poly,
    q_poly,
)
from .quadrature import gauss_jacobi_rule, gauss_laguerre_rule
from .special import ParamSet, jacobi_poly, konhauser_y, konhauser_z
from .verify import SUITES, run_all
from .xi import XiSpec, laplace_jkml_closed, xi_exp_image, xi_power_image

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    command: str = "eval"
    target: str = ""
    params: ParamSet = field(default_factory=lambda: ParamSet(0.0, 0.0))
    grid: list[tuple[float, float]] = field(default_factory=list)
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)
    quad_nodes: int = 32
    output_format: str = "csv"
    output_path: str | None = None
    seed: int = 0
    tolerance_overrides: dict[str, float] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)

    def echo(self) -> dict:
        d = asdict(self)
        d["grid"] = [list(p) for p in self.grid]
        return d


_PARAM_KEYS = ("alpha", "beta", "kappa", "gamma1", "gamma2")
_POLICY_KEYS = ("max_s", "max_r", "abs_tol", "tail_window")
_OPTION_KEYS = {
    "n": int, "form": str, "w1": float, "w2": float, "b": float, "d": float, "mu": float, "zeta": float,
    "delta": float, "sigma": float, "t": float, "N": int, "variant": str, "nmax": int, "S": int, "R": int,
}


def _parse_range(spec) -> list[float]:
    """``"start:stop:num"`` or ``[start, stop, num]`` -> inclusive linspace."""
    parts = spec.split(":") if isinstance(spec, str) else list(spec)
    if len(parts) != 3:
        raise UsageError(f"range spec needs start:stop:num, got {spec!r}")
    start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
    if num < 1:
        raise UsageError("range needs at least one point")
    return np.linspace(start, stop, num).tolist()


def build_config(raw: dict) -> JobConfig:
    """Build a JobConfig from a flat mapping (config file merged with flags)."""
    unknown = set(raw) - set(_PARAM_KEYS) - set(_POLICY_KEYS) - set(_OPTION_KEYS) - {
        "command", "target", "grid", "x_range", "y_range", "quad_nodes", "format", "out", "seed",
        "tolerance_overrides", "suite",
    }
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    try:
        params = ParamSet(
            float(raw.get("alpha", 0.0)), float(raw.get("beta", 0.0)), raw.get("kappa", 1),
            float(raw.get("gamma1", 0.0)), float(raw.get("gamma2", 0.0)),
        )
        policy = TruncationPolicy(**{k: (float(raw[k]) if k == "abs_tol" else int(raw[k])) for k in _POLICY_KEYS if k in raw})
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if "grid" in raw and raw["grid"] is not None:
        try:
            grid = [(float(p[0]), float(p[1])) for p in raw["grid"]]
        except (TypeError, ValueError, IndexError) as exc:
            raise UsageError(f"grid must be a list of [x, y] pairs: {exc}") from exc
    else:
        xs = _parse_range(raw["x_range"]) if "x_range" in raw else [0.0]
        ys = _parse_range(raw["y_range"]) if "y_range" in raw else [0.0]
        grid = [(x, y) for x in xs for y in ys]
    fmt = raw.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError("format must be csv or json")
    opts = {}
    for k, conv in _OPTION_KEYS.items():
        if k in raw and raw[k] is not None:
            opts[k] = conv(raw[k])
    if "suite" in raw and raw["suite"] is not None:
        opts["suite"] = raw["suite"]
    seed = int(raw.get("seed", 0))
    if seed < 0:
        raise UsageError("seed must be unsigned")
    return JobConfig(
        command=raw.get("command", "eval"),
        target=raw.get("target", ""),
        params=params,
        grid=grid,
        truncation=policy,
        quad_nodes=int(raw.get("quad_nodes", 32)),
        output_format=fmt,
        output_path=raw.get("out"),
        seed=seed,
        tolerance_overrides={str(k): float(v) for k, v in (raw.get("tolerance_overrides") or {}).items()},
        options=opts,
    )


# --- targets -----------------------------------------------------------------
# Point targets map (config, x, y) -> dict of output columns.


def _jkml(cfg, x, y):
    p = cfg.params
    res = jkml_eval(JkmlArgs(p.alpha, p.beta, p.kappa, p.gamma1, p.gamma2, x, y), cfg.truncation)
    return {"value": res.value, "abs_error_estimate": res.abs_error_estimate, "terms_used": res.terms_used,
            "converged": res.converged}


def _exact(value: float, terms: int) -> dict:
    return {"value": value, "abs_error_estimate": 0.0, "terms_used": terms}


def _n(cfg) -> int:
    return cfg.options.get("n", 0)


POINT_TARGETS: dict[str, Callable] = {
    "jkml": _jkml,
    "jkml_tail_bound": lambda cfg, x, y: _exact(
        jkml_tail_bound(JkmlArgs(cfg.params.alpha, cfg.params.beta, cfg.params.kappa, cfg.params.gamma1,
                                 cfg.params.gamma2, x, y), cfg.options.get("S", 20), cfg.options.get("R", 20)), 0),
    "jk_poly": lambda cfg, x, y: _exact(
        jk_poly(_n(cfg), cfg.params, x, y, cfg.options.get("form", "EXPLICIT_JAC")), (_n(cfg) + 1) * (_n(cfg) + 2) // 2),
    "q_poly": lambda cfg, x, y: _exact(q_poly(_n(cfg), cfg.params, x, y), _n(cfg) + 1),
    "jacobi_poly": lambda cfg, x, y: _exact(jacobi_poly(_n(cfg), cfg.params.alpha, cfg.params.beta, x), _n(cfg) + 1),
    "konhauser_z": lambda cfg, x, y: _exact(konhauser_z(_n(cfg), cfg.params.beta, cfg.params.kappa, y), _n(cfg) + 1),
    "konhauser_y": lambda cfg, x, y: _exact(konhauser_y(_n(cfg), cfg.params.beta, cfg.params.kappa, y), _n(cfg) + 1),
    "xi_power_image": lambda cfg, x, y: _exact(
        xi_power_image(_xi_spec(cfg), cfg.options.get("mu", 0.0), cfg.options.get("zeta", 0.0), x, y), 0),
    "xi_exp_image": lambda cfg, x, y: _exact(
        xi_exp_image(_xi_spec(cfg), cfg.options.get("delta", 1.0), cfg.options.get("sigma", 1.0), x, y), 0),
    "laplace_jkml_closed": lambda cfg, x, y: _exact(
        laplace_jkml_closed(cfg.params, cfg.options.get("w1", 0.0), cfg.options.get("w2", 0.0), x, y,
                            cfg.options.get("variant", "jkml"), cfg.options.get("n")), 0),
    "generating_function": lambda cfg, x, y: dict(
        zip(("lhs", "rhs"), generating_function_check(cfg.params, x, y, cfg.options.get("t", 0.05),
                                                      cfg.options.get("N", 40), cfg.options.get("variant", "statement")))),
}


def _xi_spec(cfg) -> XiSpec:
    o = cfg.options
    return XiSpec(cfg.params, o.get("w1", 0.0), o.get("w2", 0.0), o.get("b", 0.0), o.get("d", 0.0))


def _biorthogonality_rows(cfg) -> list[dict]:
    nmax = cfg.options.get("nmax", 3)
    p = cfg.params
    rx = gauss_jacobi_rule(nmax + 1, p.alpha, p.beta)
    ry = gauss_laguerre_rule((p.kappa * nmax + nmax) // 2 + 2, p.beta)
    M = biorthogonality_matrix(nmax, p, rx, ry)
    return [
        {"n": n, "m": m, "value": float(M[n, m]), "closed_diagonal": biorthogonality_norm(n, p) if n == m else 0.0,
         "status": "ok"}
        for n in range(nmax + 1)
        for m in range(nmax + 1)
    ]


MATRIX_TARGETS: dict[str, Callable[[JobConfig], list[dict]]] = {"biorthogonality_matrix": _biorthogonality_rows}

TARGETS = sorted(set(POINT_TARGETS) | set(MATRIX_TARGETS))


def evaluate(cfg: JobConfig) -> list[dict]:
    """Rows for an eval/table job; domain errors become row statuses."""
    if cfg.target in MATRIX_TARGETS:
        return MATRIX_TARGETS[cfg.target](cfg)
    if cfg.target not in POINT_TARGETS:
        raise UsageError(f"unknown target {cfg.target!r}; choose from {TARGETS}")
    if not cfg.grid:
        raise UsageError("grid must be nonempty")
    fn = POINT_TARGETS[cfg.target]
    rows = []
    for x, y in cfg.grid:
        row: dict[str, Any] = {"x": x, "y": y}
        try:
            row.update(fn(cfg, x, y))
            row["status"] = "ok"
        except (ValueError, ArithmeticError, OverflowError) as exc:
            row["status"] = f"domain_error: {exc}"
        rows.append(row)
    return rows


# --- output -------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return "" if v is None else str(v)


def render(rows: list[dict], fmt: str, meta: dict) -> str:
    if fmt == "json":
        clean = [{k: (float(v) if isinstance(v, np.floating) else v) for k, v in r.items()} for r in rows]
        return json.dumps({"meta": meta, "rows": clean}, indent=2, sort_keys=False) + "\n"
    cols: list[str] = []
    for r in rows:
        cols.extend(k for k in r if k not in cols)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# --- commands -----------------------------------------------------------------


def run_eval(cfg: JobConfig) -> int:
    rows = evaluate(cfg)
    emit(render(rows, cfg.output_format, {"version": __version__, "config": cfg.echo()}), cfg.output_path)
    return EXIT_OK


def run_verify(cfg: JobConfig) -> int:
    suite = cfg.options.get("suite")
    if suite is not None and suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    reports = run_all(cfg.seed, cfg.tolerance_overrides, [suite] if suite else None)
    rows = []
    for rep in reports:
        for c in rep.checks:
            rows.append({
                "suite": rep.name, "check": c.name, "max_deviation": float(c.max_deviation),
                "tolerance": float(c.tolerance), "passed": c.passed, "diagnostic": c.diagnostic,
            })
    emit(render(rows, cfg.output_format, {"version": __version__, "seed": cfg.seed,
                                          "tolerance_overrides": cfg.tolerance_overrides}), cfg.output_path)
    if cfg.output_path is not None:
        for rep in reports:
            print(f"{'PASS' if rep.passed else 'FAIL'} {rep.name} max_dev={rep.max_deviation:.3g} tol={rep.tolerance:g}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jkon", description="Jacobi-Konhauser numerics and verification")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat YAML/JSON config file")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"))

    for name in ("eval", "table"):
        p = sub.add_parser(name, help=f"{name} a target on a grid")
        common(p)
        p.add_argument("--target", help=f"one of {TARGETS}")
        for k in _PARAM_KEYS:
            p.add_argument(f"--{k}", type=float if k != "kappa" else int)
        for k, conv in _OPTION_KEYS.items():
            p.add_argument(f"--{k}", type=conv)
        p.add_argument("--x-range", dest="x_range", help="start:stop:num")
        p.add_argument("--y-range", dest="y_range", help="start:stop:num")
        p.add_argument("--point", action="append", help="x,y (repeatable; replaces the grid)")
        p.add_argument("--quad-nodes", dest="quad_nodes", type=int)
        for k in _POLICY_KEYS:
            p.add_argument(f"--{k.replace('_', '-')}", dest=k, type=float if k == "abs_tol" else int)
    p = sub.add_parser("verify", help="run the verification suites")
    common(p)
    p.add_argument("--suite", help=f"one of {sorted(SUITES)}")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", action="append", metavar="KEY=VALUE", help="tolerance override, e.g. quadrature=1e-30")
    return ap


def _load_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise UsageError("config file must hold a flat mapping")
    return data


def main(argv: list[str] | None = None) -> int:
    ap = _parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        raw = _load_file(ns.config) if ns.config else {}
    except OSError as exc:
        print(f"jkon: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except (yaml.YAMLError, UsageError) as exc:
        print(f"jkon: bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    flags = {k: v for k, v in vars(ns).items() if v is not None and k not in ("config", "point", "tol")}
    if "out" in flags:
        flags["out"] = flags["out"]
    raw.update(flags)
    raw["command"] = ns.command
    if getattr(ns, "point", None):
        try:
            raw["grid"] = [[float(v) for v in p.split(",")] for p in ns.point]
        except ValueError:
            print("jkon: --point needs x,y", file=sys.stderr)
            return EXIT_USAGE
    if getattr(ns, "tol", None):
        over = dict(raw.get("tolerance_overrides") or {})
        for item in ns.tol:
            key, _, val = item.partition("=")
            try:
                over[key] = float(val)
            except ValueError:
                print(f"jkon: bad --tol {item!r}", file=sys.stderr)
                return EXIT_USAGE
        raw["tolerance_overrides"] = over
    try:
        cfg = build_config(raw)
        if cfg.command == "verify":
            return run_verify(cfg)
        return run_eval(cfg)
    except UsageError as exc:
        print(f"jkon: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"jkon: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
