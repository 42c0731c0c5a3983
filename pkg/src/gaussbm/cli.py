"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 quadrature convergence failure,
3 Monte Carlo / quadrature disagreement.

Examples::

    gaussbm reproduce --alpha 1.3 --eps 0.1 --lambda 0.5 --format json
    gaussbm critical-angle --tol 1e-12
    gaussbm scan --alpha-grid 0.3,1.3 --eps-grid 0.05 --lambda-grid 0.5 --out scan.csv
    gaussbm bconj --shape wedge --alpha 1.0 --eps 0.01 --t0 0 --h 0.05
    gaussbm oracle --alpha 0.7853981634 --shift 0 --n 1000000 --seed 42
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

from .errors import ConvergenceError, DomainError, EvaluationError
from .expansion import bracket, critical_angle
from .gauss_core import QuadratureConfig
from .geometry import HalfLine, Strip, Wedge
from .measures import MC_MIN_SAMPLES, wedge_measure, wedge_measure_montecarlo
from .refutation import b_second_derivative, gbm_gap, gbm_scan

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_ORACLE = 0, 1, 2, 3

GAP_FIELDS = ("alpha", "eps", "lambda", "gap", "gap_error_bound", "predicted", "agreement", "violated")
CRITICAL_FIELDS = ("root", "tol", "bracket_below", "bracket_above")
BCONJ_FIELDS = ("shape", "alpha", "eps", "c", "t0", "step", "second_derivative", "fd_error_bound", "log_concave_locally")
ORACLE_FIELDS = ("alpha", "shift", "quadrature", "quadrature_error_bound", "mc_mean", "mc_std_error", "samples", "seed", "z")

# internal tolerance cap for the wedge log-concavity path
BCONJ_WEDGE_TOL = 1e-12
Z_LIMIT = 5.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def round_sig(x: float, precision: int) -> float:
    """Round to ``precision`` significant digits; repr then gives the shortest round-trip form."""
    if not math.isfinite(x) or x == 0.0:
        return x
    return float(f"{x:.{precision}g}")


def _json_value(v, precision):
    if isinstance(v, bool) or v is None or isinstance(v, (str, int)):
        return v
    if isinstance(v, float):
        return round_sig(v, precision) if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _json_value(x, precision) for k, x in v.items()}
    raise TypeError(f"cannot serialise {type(v).__name__}")


def _csv_value(v, precision) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(round_sig(v, precision))
    return str(v)


def render(records: list[dict], fields, kind: str, precision: int) -> str:
    if kind == "json":
        return "".join(
            json.dumps(_json_value(r, precision), separators=(", ", ": ")) + "\n" for r in records
        )
    lines = [",".join(fields)]
    for r in records:
        lines.append(",".join(_csv_value(r.get(f), precision) for f in fields))
    return "\n".join(lines) + "\n"


def gap_record(rep) -> dict:
    rec = {
        "alpha": rep.alpha,
        "eps": rep.eps,
        "lambda": rep.lam,
        "gap": rep.gap,
        "gap_error_bound": rep.gap_error_bound,
        "predicted": rep.predicted,
        "agreement": rep.agreement,
        "violated": rep.violated,
    }
    if rep.error is not None:
        rec["error"] = rep.error
    return rec


def _float(s: str) -> float:
    try:
        x = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {s!r}")
    return x


def _grid(s: str) -> list[float]:
    items = [p for p in (q.strip() for q in s.split(",")) if p]
    return [_float(p) for p in items]


def _precision(s: str) -> int:
    p = int(s)
    if not 6 <= p <= 17:
        raise argparse.ArgumentTypeError("precision must lie in [6, 17]")
    return p


def _angle(x: float, degrees: bool) -> float:
    return math.radians(x) if degrees else x


def _config(tol: float) -> QuadratureConfig:
    if not tol > 0:
        raise UsageError(f"--tol must be > 0, got {tol!r}")
    return QuadratureConfig(abs_tol=tol)


def _add_output(p, default="json"):
    p.add_argument("--format", choices=("json", "csv"), default=default)
    p.add_argument("--precision", type=_precision, default=17, help="significant digits, 6..17")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gaussbm", description="Gaussian Brunn-Minkowski counter-example checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="gap for one (alpha, eps, lambda)")
    p.add_argument("--alpha", type=_float, default=1.3)
    p.add_argument("--eps", type=_float, default=0.1)
    p.add_argument("--lambda", dest="lam", type=_float, default=0.5)
    p.add_argument("--tol", type=_float, default=1e-10)
    p.add_argument("--degrees", action="store_true", help="alpha is given in degrees")
    _add_output(p)

    p = sub.add_parser("critical-angle", help="sign change of the discriminant")
    p.add_argument("--tol", type=_float, default=1e-12)
    _add_output(p)

    p = sub.add_parser("scan", help="gap over a parameter grid, written as a table")
    p.add_argument("--alpha-grid", type=_grid, required=True, help="comma separated")
    p.add_argument("--eps-grid", type=_grid, required=True)
    p.add_argument("--lambda-grid", type=_grid, required=True)
    p.add_argument("--tol", type=_float, default=1e-10)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--degrees", action="store_true")
    _add_output(p, default="csv")

    p = sub.add_parser("bconj", help="second derivative of log gamma(e^t K)")
    p.add_argument("--shape", choices=("wedge", "strip", "halfspace1d"), required=True)
    p.add_argument("--alpha", type=_float)
    p.add_argument("--eps", type=_float)
    p.add_argument("--c", type=_float)
    p.add_argument("--t0", type=_float, default=0.0)
    p.add_argument("--h", type=_float, default=0.05)
    p.add_argument("--tol", type=_float, default=1e-10)
    p.add_argument("--degrees", action="store_true")
    _add_output(p)

    p = sub.add_parser("oracle", help="Monte Carlo vs quadrature for one wedge")
    p.add_argument("--alpha", type=_float, required=True)
    p.add_argument("--shift", type=_float, default=0.0)
    p.add_argument("--n", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_float, default=1e-10)
    p.add_argument("--degrees", action="store_true")
    _add_output(p)
    return ap


def cmd_reproduce(args, out) -> int:
    cfg = _config(args.tol)
    rep = gbm_gap(_angle(args.alpha, args.degrees), args.eps, args.lam, cfg)
    out.write(render([gap_record(rep)], GAP_FIELDS, args.format, args.precision))
    return EXIT_OK


def cmd_critical_angle(args, out) -> int:
    if not args.tol > 0:
        raise UsageError(f"--tol must be > 0, got {args.tol!r}")
    root = critical_angle(args.tol)
    rec = {
        "root": root,
        "tol": args.tol,
        "bracket_below": bracket(root - args.tol),
        "bracket_above": bracket(root + args.tol),
    }
    out.write(render([rec], CRITICAL_FIELDS, args.format, args.precision))
    return EXIT_OK


def _atomic_write(path: Path, text: str) -> None:
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_scan(args, out) -> int:
    cfg = _config(args.tol)
    alphas = [_angle(a, args.degrees) for a in args.alpha_grid]
    reports = gbm_scan(alphas, args.eps_grid, args.lambda_grid, cfg)
    text = render([gap_record(r) for r in reports], GAP_FIELDS, args.format, args.precision)
    try:
        _atomic_write(args.out, text)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from exc
    violated = sum(r.violated for r in reports)
    out.write(f"wrote {len(reports)} rows to {args.out} ({violated} violated)\n")
    return EXIT_OK


def cmd_bconj(args, out) -> int:
    cfg = _config(args.tol)
    if args.shape == "wedge":
        if args.alpha is None or args.eps is None:
            raise UsageError("--shape wedge needs --alpha and --eps")
        shape = Wedge(_angle(args.alpha, args.degrees), args.eps)
        cfg = QuadratureConfig(abs_tol=min(args.tol, BCONJ_WEDGE_TOL))
    elif args.shape == "strip":
        if args.c is None:
            raise UsageError("--shape strip needs --c")
        shape = Strip(args.c)
    else:
        if args.eps is None:
            raise UsageError("--shape halfspace1d needs --eps")
        shape = HalfLine(args.eps)
    rep = b_second_derivative(shape, args.t0, args.h, cfg)
    rec = {"shape": rep.shape, "params": dict(rep.params), "t0": rep.t0, "step": rep.step,
           "second_derivative": rep.second_derivative, "fd_error_bound": rep.fd_error_bound,
           "log_concave_locally": rep.log_concave_locally}
    if args.format == "csv":
        rec = {**{k: v for k, v in rec.items() if k != "params"}, **rep.params}
    out.write(render([rec], BCONJ_FIELDS, args.format, args.precision))
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    cfg = _config(args.tol)
    if args.n < MC_MIN_SAMPLES:
        raise UsageError(f"--n must be >= {MC_MIN_SAMPLES}, got {args.n}")
    w = Wedge(_angle(args.alpha, args.degrees), args.shift)
    quad = wedge_measure(w, cfg)
    mc = wedge_measure_montecarlo(w, args.n, args.seed)
    z = mc.z_score(quad.value)
    rec = {"alpha": w.alpha, "shift": w.shift, "quadrature": quad.value,
           "quadrature_error_bound": quad.error_bound, "mc_mean": mc.mean,
           "mc_std_error": mc.std_error, "samples": mc.samples, "seed": mc.seed, "z": z}
    out.write(render([rec], ORACLE_FIELDS, args.format, args.precision))
    return EXIT_OK if abs(z) <= Z_LIMIT else EXIT_ORACLE


COMMANDS = {
    "reproduce": cmd_reproduce,
    "critical-angle": cmd_critical_angle,
    "scan": cmd_scan,
    "bconj": cmd_bconj,
    "oracle": cmd_oracle,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        status = COMMANDS[args.command](args, buf)
    except (UsageError, DomainError, OverflowError) as exc:
        stderr.write(f"gaussbm {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (ConvergenceError, EvaluationError) as exc:
        stderr.write(f"gaussbm {args.command}: convergence failure: {exc}\n")
        return EXIT_CONVERGENCE
    stdout.write(buf.getvalue())
    return status


if __name__ == "__main__":
    raise SystemExit(main())
