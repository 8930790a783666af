"""Command-line front end.

    baxtoda eval   --target NAME --params k=v,...
    baxtoda verify --target SUITE            (or --params suite=SUITE)
    baxtoda table  --target NAME --params k=start:step:count,...
    baxtoda limits --target affine_gamma|q_gamma --params ...

Value syntax: complex numbers as "re,im" (or a bare real), rationals as
"num/den", lists separated by ";".  Parameters may be given as one
comma-separated --params string or repeated flags; a token without "="
continues the previous value, so "z=0.5,0" is the complex number 0.5+0i.
Config files hold one key=value per line ("#" starts a comment) and are
overridden by the command line.  BAXTODA_TOL_SCALE multiplies all suite
tolerances.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 compute error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import baxter, fock_schur, gamma_zeta, qspecial, whittaker
from .errors import BaxtodaError, UsageError
from .suites import SUITES, ReportRecord, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# value parsing and encoding

def parse_complex(text: str) -> complex:
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot read complex value {text!r}; use re,im")


def parse_real(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot read real value {text!r}") from None


def parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"cannot read integer value {text!r}") from None


def parse_number(text: str):
    """Rational if written as an integer or num/den, otherwise float."""
    try:
        if "." in text or "e" in text.lower():
            return float(text)
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read number {text!r}") from None


def parse_list(conv: Callable) -> Callable:
    return lambda text: [conv(v) for v in text.split(";") if v.strip()]


def parse_str(text: str) -> str:
    return text


def encode(value):
    """JSON-safe encoding: complex as {"re", "im"}, rationals as "num/den"."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": encode(value.real), "im": encode(value.imag)}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [encode(v) for v in value]
    return str(value)


def fmt_scalar(value) -> list[str]:
    """CSV cells (re, im) with 17 significant digits, or the exact rational."""
    if isinstance(value, Fraction):
        return [f"{value.numerator}/{value.denominator}", "0"]
    if isinstance(value, (bool, np.bool_)):
        return [str(bool(value)).lower(), "0"]
    c = complex(value)
    return [format(c.real, ".17g"), format(c.imag, ".17g")]


# ---------------------------------------------------------------------------
# target registry

@dataclass
class Target:
    fn: Callable
    params: dict[str, Callable]
    defaults: dict = field(default_factory=dict)


def _mode_for(*vals) -> str:
    return "exact" if all(isinstance(v, (int, Fraction)) for v in vals) else "float"


def _lattice(n, q, t1, t2, mode=None, via="character"):
    mode = mode or _mode_for(q, t1, t2)
    return whittaker.lattice_whittaker_gl2(n, t1, t2, q, via=via, mode=mode)


def _q_character(n, ts, q, mode=None):
    mode = mode or _mode_for(q, *ts)
    return whittaker.q_character(n, ts, q, mode)


def _double_sine(z, omega1, omega2, path):
    return qspecial.double_sine(z, qspecial.ModulusPair(omega1, omega2), path)


def _apply_finite(**kw):
    gamma = whittaker.SpectralVector(tuple(kw["gamma"]))
    x = whittaker.PositionVector(tuple(kw["x"]))
    r = baxter.apply_baxter_finite(kw["lambda"], kw["t"], gamma, x)
    return {"applied": r.applied, "ratio_to_eigenvalue": r.ratio_to_eigenvalue, "error_estimate": r.error_estimate}


def _apply_critical(**kw):
    r = baxter.apply_baxter_critical(kw["lambda"], kw["gamma"], kw["x"])
    return {"applied": r.applied, "ratio_to_eigenvalue": r.ratio_to_eigenvalue, "error_estimate": r.error_estimate}


def _whittaker_finite(gamma, x):
    psi, phi = whittaker.whittaker_finite(whittaker.SpectralVector(tuple(gamma)), whittaker.PositionVector(tuple(x)))
    return {"psi": psi, "phi": phi}


def _shintani(p, y1, y2, n):
    r = fock_schur.shintani_gl2(p, y1, y2, n)
    return {"partial_sum": r.partial_sum, "target": r.target, "remainder_bound": r.remainder_bound}


def _limit_study(z, kappa):
    return baxter.limit_study(z, [kappa])[0]


def _oper():
    f = baxter.oper_calibration()
    return {"alpha": f.alpha, "c": f.c, "residual": f.residual}


C, R, I, N, S = parse_complex, parse_real, parse_int, parse_number, parse_str

TARGETS: dict[str, Target] = {
    "gamma": Target(lambda z: gamma_zeta.gamma(z), {"z": C}),
    "log_gamma": Target(lambda z: gamma_zeta.log_gamma(z), {"z": C}),
    "hurwitz_zeta": Target(lambda s, a: gamma_zeta.hurwitz_zeta(s, a), {"s": C, "a": C}),
    "det_reg_shifted": Target(lambda **kw: gamma_zeta.det_reg_shifted(kw["lambda"]).value, {"lambda": C}),
    "macdonald_k": Target(lambda nu, x: gamma_zeta.macdonald_k(nu, x), {"nu": C, "x": R}),
    "gamma_q": Target(lambda t, q: qspecial.gamma_q(t, q), {"t": C, "q": C}),
    "double_sine": Target(_double_sine, {"z": C, "omega1": R, "omega2": R, "path": S},
                          {"omega1": 1.0, "path": "integral"}),
    "eigenvalue_finite": Target(lambda **kw: baxter.eigenvalue_finite(kw["lambda"], kw["t"], kw["gamma"]),
                                {"lambda": C, "t": R, "gamma": parse_list(C)}, {"t": 1.0}),
    "eigenvalue_affine_generic": Target(
        lambda **kw: baxter.eigenvalue_affine_generic(kw["lambda"], kw["gamma"], kw["kappa"]),
        {"lambda": C, "gamma": C, "kappa": R}, {"gamma": 0j}),
    "affine_q": Target(lambda z, kappa: baxter.affine_q(z, kappa), {"z": C, "kappa": R}),
    "limit_study": Target(_limit_study, {"z": C, "kappa": R}),
    "q0_general": Target(lambda **kw: baxter.q0_general(kw["t"], kw["lambda"], kw["gamma"]),
                         {"t": R, "lambda": C, "gamma": C}, {"t": 1.0, "gamma": 0j}),
    "apply_baxter_finite": Target(_apply_finite, {"lambda": C, "t": R, "gamma": parse_list(R), "x": parse_list(R)},
                                  {"t": 1.0}),
    "apply_baxter_critical": Target(_apply_critical, {"lambda": C, "gamma": R, "x": R}, {"x": 0.0}),
    "whittaker_gl2_closed": Target(lambda gamma, x1, x2: whittaker.whittaker_gl2_closed(tuple(gamma), x1, x2),
                                   {"gamma": parse_list(R), "x1": R, "x2": R}),
    "whittaker_finite": Target(_whittaker_finite, {"gamma": parse_list(R), "x": parse_list(R)}),
    "lattice_whittaker_gl2": Target(_lattice, {"n": I, "q": N, "t1": N, "t2": N, "mode": S, "via": S},
                                    {"mode": None, "via": "character"}),
    "q_character": Target(_q_character, {"n": I, "ts": parse_list(N), "q": N, "mode": S}, {"mode": None}),
    "lattice_eigenvalue": Target(lambda t, ts, q: baxter.lattice_eigenvalue(t, ts, q),
                                 {"t": C, "ts": parse_list(C), "q": C}),
    "separated_phi_finite": Target(lambda y, gamma: baxter.separated_phi_finite(y, gamma),
                                   {"y": R, "gamma": parse_list(R)}),
    "oper_calibration": Target(_oper, {}),
    "mellin_bessel_check": Target(lambda s, nu: baxter.mellin_bessel_check(s, nu), {"s": C, "nu": C}),
    "grade_restricted_trace": Target(
        lambda n, ts, q, M: fock_schur.grade_restricted_trace(n, ts, q, M, _mode_for(q, *ts)),
        {"n": I, "ts": parse_list(N), "q": N, "M": I}, {"M": 12}),
    "schur": Target(lambda parts, zs: fock_schur.schur(parts, zs), {"parts": parse_list(I), "zs": parse_list(N)}),
    "shintani_gl2": Target(_shintani, {"p": I, "y1": I, "y2": I, "n": I}),
}

LIMITS = {
    "affine_gamma": Target(lambda z, kappa: baxter.limit_study(z, [kappa])[0], {"z": C, "kappa": R}),
    "q_gamma": Target(lambda x, eps: abs(qspecial.gamma_q_classical_limit(x, [eps])[0] / gamma_zeta.gamma(x) - 1),
                      {"x": R, "eps": R}),
}


# ---------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    command: str
    target: str
    params: dict[str, str]
    output_format: str = "json"
    output_path: str | None = None
    tol_scale: float = 1.0

    def header(self) -> dict:
        return {"command": self.command, "target": self.target, "params": dict(sorted(self.params.items())),
                "format": self.output_format, "tol_scale": self.tol_scale}


def split_params(items: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    last = None
    for item in items:
        for token in item.split(","):
            token = token.strip()
            if not token:
                continue
            if "=" in token:
                key, val = token.split("=", 1)
                key = key.strip()
                if not key:
                    raise UsageError(f"empty key in {token!r}")
                out[key] = val.strip()
                last = key
            elif last is not None:
                out[last] += "," + token
            else:
                raise UsageError(f"expected key=value, got {token!r}")
    return out


def read_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    out = {}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line without '=': {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _tol_scale() -> float:
    raw = os.environ.get("BAXTODA_TOL_SCALE")
    if raw is None:
        return 1.0
    try:
        v = float(raw)
    except ValueError:
        raise UsageError("BAXTODA_TOL_SCALE must be a positive real") from None
    if not v > 0:
        raise UsageError("BAXTODA_TOL_SCALE must be a positive real")
    return v


def build_config(args) -> RunConfig:
    file_cfg = read_config_file(args.config) if args.config else {}
    target = args.target or file_cfg.pop("target", None)
    fmt = args.format or file_cfg.pop("format", "json")
    out = args.out or file_cfg.pop("out", None)
    file_cfg.pop("target", None), file_cfg.pop("format", None), file_cfg.pop("out", None)
    params = dict(file_cfg)
    params.update(split_params(args.params or []))
    if args.command == "verify" and target is None:
        target = params.pop("suite", None)
    if target is None:
        raise UsageError("--target is required")
    if fmt not in ("json", "csv"):
        raise UsageError("--format must be json or csv")
    return RunConfig(args.command, target, params, fmt, out, _tol_scale())


def _resolve(target: Target, params: dict[str, str], sweep: bool = False):
    unknown = sorted(set(params) - set(target.params))
    if unknown:
        raise UsageError(f"unknown parameter(s): {', '.join(unknown)}")
    fixed, axes = {}, {}
    for key, conv in target.params.items():
        if key in params:
            raw = params[key]
            if sweep and raw.count(":") == 2:
                axes[key] = _sweep_values(raw, conv)
            else:
                fixed[key] = conv(raw)
        elif key in target.defaults:
            fixed[key] = target.defaults[key]
        else:
            raise UsageError(f"missing parameter {key!r}")
    return fixed, axes


def _sweep_values(raw: str, conv: Callable) -> list:
    start, step, count = raw.split(":")
    n = parse_int(count)
    if n < 1:
        raise UsageError("sweep count must be positive")
    if conv is parse_int:
        a, b = parse_int(start), parse_int(step)
        return [a + k * b for k in range(n)]
    if conv is parse_number:
        a, b = parse_number(start), parse_number(step)
        return [a + k * b for k in range(n)]
    a, b = parse_real(start), parse_real(step)
    vals = [a + k * b for k in range(n)]
    return [complex(v) for v in vals] if conv is parse_complex else vals


# ---------------------------------------------------------------------------
# commands

def _emit(text: str, cfg: RunConfig, stdout) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _flatten(value) -> list[tuple[str, object]]:
    if isinstance(value, dict):
        return [(k, v) for k, v in value.items()]
    return [("value", value)]


def _csv_text(cfg: RunConfig, columns: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(cfg.header(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def run_eval(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    target = TARGETS.get(cfg.target)
    if target is None:
        raise UsageError(f"unknown target {cfg.target!r}; choose from {', '.join(sorted(TARGETS))}")
    fixed, _ = _resolve(target, cfg.params)
    value = target.fn(**fixed)
    if cfg.output_format == "json":
        doc = {"config": encode(cfg.header()), "target": cfg.target, "result": encode(value)}
        _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", cfg, stdout)
    else:
        rows = [[name, *fmt_scalar(v)] for name, v in _flatten(value)]
        _emit(_csv_text(cfg, ["quantity", "re", "im"], rows), cfg, stdout)
    return EXIT_OK


def _run_grid(registry: dict[str, Target], cfg: RunConfig, stdout) -> int:
    target = registry.get(cfg.target)
    if target is None:
        raise UsageError(f"unknown target {cfg.target!r}; choose from {', '.join(sorted(registry))}")
    fixed, axes = _resolve(target, cfg.params, sweep=True)
    if not 1 <= len(axes) <= 2:
        raise UsageError("give one or two sweep axes as start:step:count")
    names = list(axes)
    grid = [[v] for v in axes[names[0]]]
    if len(names) == 2:
        grid = [[a, b] for a in axes[names[0]] for b in axes[names[1]]]
    records = []
    for point in grid:
        kwargs = dict(fixed)
        kwargs.update(zip(names, point))
        records.append((point, _flatten(target.fn(**kwargs))))
    qnames = [q for q, _ in records[0][1]]
    if cfg.output_format == "json":
        rows = [{"point": dict(zip(names, encode(p))), "result": {q: encode(v) for q, v in res}} for p, res in records]
        doc = {"config": encode(cfg.header()), "target": cfg.target, "axes": names, "rows": rows}
        _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", cfg, stdout)
    else:
        columns = []
        for n in names:
            columns += [f"{n}_re", f"{n}_im"]
        for q in qnames:
            columns += [f"{q}_re", f"{q}_im"]
        rows = []
        for p, res in records:
            row = []
            for v in p:
                row += fmt_scalar(v)
            for _, v in res:
                row += fmt_scalar(v)
            rows.append(row)
        _emit(_csv_text(cfg, columns, rows), cfg, stdout)
    return EXIT_OK


def run_table(cfg: RunConfig, stdout=None) -> int:
    return _run_grid(TARGETS, cfg, stdout or sys.stdout)


def run_limits(cfg: RunConfig, stdout=None) -> int:
    return _run_grid(LIMITS, cfg, stdout or sys.stdout)


def run_verify(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout, stderr = stdout or sys.stdout, stderr or sys.stderr
    if cfg.target not in SUITES:
        raise UsageError(f"unknown suite {cfg.target!r}; choose from {', '.join(SUITES)}")
    if cfg.params:
        raise UsageError(f"unknown parameter(s): {', '.join(sorted(cfg.params))}")
    records: list[ReportRecord] = run_suite(cfg.target, cfg.tol_scale)
    failed = [r for r in records if r.status == "fail"]
    if cfg.output_format == "json":
        doc = {"config": encode(cfg.header()), "suite": cfg.target, "best_effort": SUITES[cfg.target][1],
               "records": [encode(r.as_dict()) for r in records],
               "summary": {"total": len(records), "failed": len(failed),
                           "skipped": sum(r.status == "skipped" for r in records)}}
        _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", cfg, stdout)
    else:
        cols = ["suite", "case", "status", "rel_err", "abs_err", "tolerance", "oracle"]
        rows = [[r.suite, r.case, r.status, format(r.rel_err, ".17g"), format(r.abs_err, ".17g"),
                 format(r.tolerance, ".17g"), r.oracle] for r in records]
        _emit(_csv_text(cfg, cols, rows), cfg, stdout)
    stderr.write(f"{cfg.target}: {len(records) - len(failed)}/{len(records)} cases without failure\n")
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"eval": run_eval, "verify": run_verify, "table": run_table, "limits": run_limits}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="baxtoda", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("params_pos", nargs="*", metavar="KEY=VALUE", help="parameters (same syntax as --params)")
    p.add_argument("--target", help="function, suite or limit-study name")
    p.add_argument("--params", action="append", help="comma-separated key=value list")
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--out", help="write output to this file")
    p.add_argument("--config", help="key=value config file")
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    parser.__class__ = _Parser
    try:
        args = parser.parse_intermixed_args(argv)
        positional = list(args.params_pos)
        # "baxtoda eval gamma z=0.5,0": a leading bare word is the target
        if positional and "=" not in positional[0] and args.target is None:
            args.target = positional.pop(0)
        args.params = (args.params or []) + positional
        cfg = build_config(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (BaxtodaError, ArithmeticError, ValueError) as exc:
        sys.stderr.write(f"compute error: {type(exc).__name__}: {exc}\n")
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
