"""Command-line front end.

Subcommands: solve (integrate one problem and write the profile), check-ko
(divergence dichotomy for a nonlinearity), map (reduce a radial PDE problem
to the ODE coefficients), classify (regularity trichotomy at the origin),
verify (run a registry subsolution check), and sweep (existence verdict vs.
numerical outcome over a parameter grid).

Every command prints exactly one JSON document to stdout and writes its
artifacts into the output directory (--out flag, then the config file, then
the KOSCOPE_OUT environment variable, then the working directory).  A JSON
config file provides per-flag defaults; explicit flags win.  Exit codes:
0 success (blow-up and honest verification failures included), 1 aborted or
numerical failure, 2 invalid configuration.

Nonlinearity grammar: const:<g0>, pow:<d>, exp:<c>, table:<path> where the
table file holds comma-separated "t,g" lines.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .cauchy_solver import SolveControl, classify_regularity, solve
from .core import (
    Aborted,
    BlowUp,
    CauchyParams,
    ConfigError,
    Constant,
    Exponential,
    Global,
    NumericalError,
    PdeSpec,
    Power,
    Tabulated,
    to_jsonable,
)
from .ko_checker import ko_standard
from .pde_mapper import existence_verdict, map_to_cauchy
from .subsolution_verifier import builtin_examples, verify_profile
from . import plots


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def _emit(doc, out_dir: Path, filename: str) -> None:
    text = _dump(doc)
    (out_dir / filename).write_text(text + "\n")
    print(text)


def parse_nonlinearity(text):
    """Parse the const:/pow:/exp:/table: grammar into a nonlinearity."""
    if not isinstance(text, str) or not text:
        raise ConfigError("nonlinearity must be a string like pow:2 or const:1")
    kind, sep, arg = text.partition(":")
    if not sep:
        raise ConfigError(
            f"nonlinearity {text!r} must look like kind:value "
            f"(const:, pow:, exp:, table:)"
        )
    if kind in ("const", "pow", "exp"):
        try:
            value = float(arg)
        except ValueError:
            raise ConfigError(f"bad numeric value in nonlinearity {text!r}") from None
        if kind == "const":
            return Constant(value)
        if kind == "pow":
            return Power(value)
        return Exponential(value)
    if kind == "table":
        path = Path(arg)
        if not path.exists():
            raise ConfigError(f"table file {arg!r} not found")
        knots = []
        for line in path.read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ConfigError(f"table line {line!r} must be 't,g'")
            try:
                knots.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise ConfigError(f"table line {line!r} has nonnumeric entries") from None
        return Tabulated(tuple(knots))
    raise ConfigError(
        f"unknown nonlinearity kind {kind!r} in {text!r} "
        f"(expected const:, pow:, exp:, table:)"
    )


def _fraction(value, name: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{name} must be a number or fraction (got {value!r})") from None


def _float(value, name: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number (got {value!r})") from None


def _resolve(ns, cfg, key, default=None):
    value = getattr(ns, key, None)
    if value is None:
        value = cfg.get(key, default)
    return value


def _required(ns, cfg, key):
    value = _resolve(ns, cfg, key)
    if value is None:
        raise ConfigError(f"--{key.replace('_', '-')} is required")
    return value


def _load_config(ns) -> dict:
    path = getattr(ns, "config", None)
    if path is None:
        return {}
    try:
        raw = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path!r}: {err}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file {path!r} is not valid JSON: {err}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    return doc


def _resolve_out(ns, cfg) -> Path:
    out = getattr(ns, "out", None) or cfg.get("out") or os.environ.get("KOSCOPE_OUT") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_profile_csv(path: Path, prof) -> None:
    lines = ["r,v,vprime,accum"]
    for r, v, vp, acc in zip(prof.grid, prof.v, prof.vprime, prof.accum):
        lines.append(f"{float(r)!r},{float(v)!r},{float(vp)!r},{float(acc)!r}")
    path.write_text("\n".join(lines) + "\n")


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------


def _cmd_solve(ns, cfg, out_dir: Path) -> int:
    g = parse_nonlinearity(_resolve(ns, cfg, "g", "const:1"))
    params = CauchyParams(
        C=_float(_resolve(ns, cfg, "C", 1.0), "C"),
        q=_fraction(_resolve(ns, cfg, "q", 0), "q"),
        tau=_fraction(_resolve(ns, cfg, "tau", 1), "tau"),
        theta=_fraction(_resolve(ns, cfg, "theta", 1), "theta"),
    )
    a_raw = _resolve(ns, cfg, "a")
    a = _float(a_raw, "a") if a_raw is not None else (1.0 if isinstance(g, Power) else 0.0)
    ctrl_kwargs = {"r_horizon": _float(_resolve(ns, cfg, "horizon", 10.0), "horizon")}
    max_steps = _resolve(ns, cfg, "max_steps")
    if max_steps is not None:
        ctrl_kwargs["max_steps"] = int(max_steps)
    ctrl = SolveControl(**ctrl_kwargs)
    prof = solve(params, g, a, ctrl)

    fmt = _resolve(ns, cfg, "format", "csv")
    if fmt == "json":
        (out_dir / "profile.json").write_text(_dump(to_jsonable(prof)) + "\n")
    else:
        _write_profile_csv(out_dir / "profile.csv", prof)
    doc = {
        "status": to_jsonable(prof.status),
        "params": to_jsonable(params),
        "nonlinearity": to_jsonable(g),
        "a": a,
        "r_end": float(prof.grid[-1]),
        "v_end": float(prof.v[-1]),
    }
    _emit(doc, out_dir, "status.json")
    if getattr(ns, "plot", False):
        plots.plot_profile(prof, out_dir / "profile.png")
    return 1 if isinstance(prof.status, Aborted) else 0


def _cmd_check_ko(ns, cfg, out_dir: Path) -> int:
    g = parse_nonlinearity(_required(ns, cfg, "g"))
    theta = _float(_required(ns, cfg, "theta"), "theta")
    verdict = ko_standard(g, theta=theta)
    _emit(to_jsonable(verdict), out_dir, "ko.json")
    return 0


def _build_spec(ns, cfg) -> PdeSpec:
    return PdeSpec(
        family=str(_required(ns, cfg, "family")),
        n=int(_float(_required(ns, cfg, "n"), "n")),
        k=int(_float(_required(ns, cfg, "k"), "k")),
        p=_fraction(_required(ns, cfg, "p"), "p"),
        alpha=_fraction(_resolve(ns, cfg, "alpha", 0), "alpha"),
        beta=_fraction(_resolve(ns, cfg, "beta", 0), "beta"),
        f=parse_nonlinearity(_resolve(ns, cfg, "f", "const:1")),
    )


def _cmd_map(ns, cfg, out_dir: Path) -> int:
    mapped = map_to_cauchy(_build_spec(ns, cfg))
    _emit(to_jsonable(mapped), out_dir, "mapped.json")
    return 0


def _cmd_classify(ns, cfg, out_dir: Path) -> int:
    g = parse_nonlinearity(_resolve(ns, cfg, "g", "const:1"))
    params = CauchyParams(
        C=_float(_resolve(ns, cfg, "C", 1.0), "C"),
        q=_fraction(_required(ns, cfg, "q"), "q"),
        tau=_fraction(_required(ns, cfg, "tau"), "tau"),
        theta=_fraction(_required(ns, cfg, "theta"), "theta"),
    )
    a_raw = _resolve(ns, cfg, "a")
    a = _float(a_raw, "a") if a_raw is not None else (1.0 if isinstance(g, Power) else 0.0)
    report = classify_regularity(params, g, a)
    _emit(to_jsonable(report), out_dir, "regularity.json")
    return 0


def _cmd_verify(ns, cfg, out_dir: Path) -> int:
    index = _resolve(ns, cfg, "example")
    if index is None:
        raise ConfigError("--example is required (1-based registry index)")
    index = int(index)
    entries = builtin_examples()
    if not 1 <= index <= len(entries):
        raise ConfigError(
            f"example index must lie in 1..{len(entries)} (got {index})"
        )
    entry = entries[index - 1]
    report = verify_profile(entry.spec, entry.profile)
    doc = {
        "id": entry.id,
        "expected": entry.expected,
        "passed": report.passed,
        "report": to_jsonable(report),
    }
    _emit(doc, out_dir, "verify.json")
    return 0


def _split_list(text, name: str):
    items = [piece.strip() for piece in str(text).split(",")]
    items = [piece for piece in items if piece]
    if not items:
        raise ConfigError(f"{name} grid is empty")
    return items


def _cmd_sweep(ns, cfg, out_dir: Path) -> int:
    family = str(_required(ns, cfg, "family"))
    n = int(_float(_required(ns, cfg, "n"), "n"))
    k = int(_float(_required(ns, cfg, "k"), "k"))
    p = _fraction(_required(ns, cfg, "p"), "p")
    alphas_raw = _resolve(ns, cfg, "alphas")
    if alphas_raw is None:
        alphas_raw = _resolve(ns, cfg, "alpha", "0")
    betas_raw = _resolve(ns, cfg, "betas")
    if betas_raw is None:
        betas_raw = _resolve(ns, cfg, "beta", "0")
    alphas = [_fraction(x, "alpha") for x in _split_list(alphas_raw, "alpha")]
    betas = [_fraction(x, "beta") for x in _split_list(betas_raw, "beta")]
    values = [_float(x, "value") for x in _split_list(_required(ns, cfg, "values"), "values")]
    f_kind = str(_resolve(ns, cfg, "f_kind", "pow"))
    if f_kind not in ("pow", "exp"):
        raise ConfigError(f"f-kind must be 'pow' or 'exp' (got {f_kind!r})")
    horizon = _float(_resolve(ns, cfg, "horizon", 100.0), "horizon")

    rows = []
    ok_rows = 0
    for alpha in alphas:
        for beta in betas:
            for value in values:
                cells = {"alpha": str(alpha), "beta": str(beta), "d": repr(value)}
                try:
                    f = Power(value) if f_kind == "pow" else Exponential(value)
                    spec = PdeSpec(family=family, n=n, k=k, p=p,
                                   alpha=alpha, beta=beta, f=f)
                    verdict = existence_verdict(spec)
                    mapped = map_to_cauchy(spec)
                    float_params = CauchyParams(
                        C=float(mapped.params.C),
                        q=float(mapped.params.q),
                        tau=float(mapped.params.tau),
                        theta=float(mapped.params.theta),
                    )
                    prof = solve(float_params, mapped.g, 1.0,
                                 SolveControl(r_horizon=horizon))
                    status = prof.status
                    if isinstance(status, Global):
                        status_cell = "Global"
                        radius_cell = repr(float(status.r_horizon))
                    elif isinstance(status, BlowUp):
                        status_cell = "BlowUp"
                        radius_cell = repr(float(status.R_estimate))
                    else:
                        status_cell = f"error: {status.reason}"
                        radius_cell = ""
                    exists = verdict.exists
                    if exists == "yes" and isinstance(status, Global):
                        agrees = "yes"
                    elif exists == "no" and isinstance(status, BlowUp):
                        agrees = "yes"
                    elif exists == "yes" and isinstance(status, BlowUp):
                        agrees = "no"
                    elif exists == "no" and isinstance(status, Global):
                        agrees = "no"
                    else:
                        agrees = "na"
                    cells.update(verdict=exists, solve_status=status_cell,
                                 R_or_horizon=radius_cell, agrees=agrees)
                    ok_rows += 1
                except (ConfigError, NumericalError) as err:
                    cells.update(verdict="error", solve_status=f"error: {err}",
                                 R_or_horizon="", agrees="na")
                rows.append(cells)

    header = "alpha,beta,d,verdict,solve_status,R_or_horizon,agrees"
    lines = [header]
    for row in rows:
        lines.append(",".join([
            row["alpha"], row["beta"], row["d"], row["verdict"],
            row["solve_status"].replace(",", ";"), row["R_or_horizon"],
            row["agrees"],
        ]))
    (out_dir / "sweep.csv").write_text("\n".join(lines) + "\n")
    disagreements = [row for row in rows if row["agrees"] == "no"]
    summary = {
        "rows": len(rows),
        "ok_rows": ok_rows,
        "disagreements": disagreements,
    }
    print(_dump(summary))
    if getattr(ns, "plot", False):
        plots.plot_sweep(rows, out_dir / "sweep.png")
    return 0 if ok_rows >= 1 else 1


_HANDLERS = {
    "solve": _cmd_solve,
    "check-ko": _cmd_check_ko,
    "map": _cmd_map,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------


def _add_common(sp) -> None:
    sp.add_argument("--out", default=None, help="output directory")
    sp.add_argument("--config", default=None, help="JSON file with flag defaults")
    sp.add_argument("--plot", action="store_true", help="also render a PNG figure")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koscope",
        description="numerical laboratory for singular Cauchy problems and "
                    "their radial fully nonlinear counterparts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="integrate one problem")
    for flag in ("--C", "--q", "--tau", "--theta", "--g", "--a", "--horizon",
                 "--max-steps"):
        sp.add_argument(flag, default=None)
    sp.add_argument("--format", choices=["csv", "json"], default=None)
    _add_common(sp)

    sp = sub.add_parser("check-ko", help="divergence dichotomy for a nonlinearity")
    sp.add_argument("--g", default=None)
    sp.add_argument("--theta", default=None)
    _add_common(sp)

    sp = sub.add_parser("map", help="reduce a radial PDE problem to ODE coefficients")
    for flag in ("--family", "--n", "--k", "--p", "--alpha", "--beta", "--f"):
        sp.add_argument(flag, default=None)
    _add_common(sp)

    sp = sub.add_parser("classify", help="regularity trichotomy at the origin")
    for flag in ("--C", "--q", "--tau", "--theta", "--g", "--a"):
        sp.add_argument(flag, default=None)
    _add_common(sp)

    sp = sub.add_parser("verify", help="run a registry subsolution check")
    sp.add_argument("--example", default=None)
    _add_common(sp)

    sp = sub.add_parser("sweep", help="existence verdict vs numerics on a grid")
    for flag in ("--family", "--n", "--k", "--p", "--alpha", "--alphas",
                 "--beta", "--betas", "--f-kind", "--values", "--horizon"):
        sp.add_argument(flag, default=None)
    _add_common(sp)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    if argv and argv[0] not in _HANDLERS and argv[0] not in ("-h", "--help"):
        # bare flag form defaults to the solve subcommand
        argv = ["solve"] + argv
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        cfg = _load_config(ns)
        out_dir = _resolve_out(ns, cfg)
        return _HANDLERS[ns.command](ns, cfg, out_dir)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except NumericalError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def main_entry() -> None:
    sys.exit(main())
