"""Command-line front end: verify, eval, table, ladder.

Exit codes: 0 success, 1 failed check or pole hit, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__, modes
from .errors import EllipticWError, NonconvergentSeries, PoleHit
from .report import VerificationReport
from .rmatrix import AlgebraParams, tau_N
from .series import contour_coefficients
from .structure import (
    SurfaceSigma,
    bigF_M,
    bigF_single,
    bigT,
    bigY,
    f_classical,
    f_classical_logderiv,
    f_h,
    f_h_limit,
    f_quantum_spec,
    sum_rule,
)
from .suites import SUITES, SuiteConfig, run_suites
from .theta import theta_std, xi_of

EVAL_FUNCS = ("theta", "tau_N", "T", "f", "f_h", "F", "Y", "f_quantum")
DEFAULT_Q = 0.5 + 0j  # used by eval/table/ladder when -q is omitted


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse 'a+bi', 'a-bi', 'bi' or a plain real."""
    s = text.strip().replace("I", "i")
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _num(z) -> list:
    z = complex(z)
    return [_clean(z.real), _clean(z.imag)]


def _clean(v: float):
    return v if math.isfinite(v) else None


def _sanitize(obj):
    # strict JSON: NaN and inf become null
    if isinstance(obj, float):
        return _clean(obj)
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def dump_json(payload: dict) -> str:
    payload = dict(payload)
    payload["schema"] = 1
    return json.dumps(_sanitize(payload), sort_keys=True, indent=2) + "\n"


def dump_csv(header: list, rows: list, meta: dict | None = None) -> str:
    buf = io.StringIO()
    if meta:
        for k in sorted(meta):
            buf.write(f"# {k}={json.dumps(_sanitize(meta[k]), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.16g}{z.imag:+.16g}i"


# parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellipticw", description="Elliptic R-matrix and q-deformed W_N structure functions.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_x=False):
        p.add_argument("-N", type=int, default=None, help="rank N >= 2")
        p.add_argument("-q", type=parse_complex, default=None, help="deformation parameter, e.g. 0.4+0.1i")
        p.add_argument("-p", type=parse_complex, default=None, help="elliptic nome")
        p.add_argument("-M", type=int, default=None, help="surface label M (nonzero)")
        p.add_argument("--format", choices=("human", "json", "csv"), default="human")
        p.add_argument("--out", default=None, help="write output to this path")
        if needs_x:
            p.add_argument("-x", type=parse_complex, default=None, help="ratio w/z")

    v = sub.add_parser("verify", help="run verification suites")
    common(v)
    v.add_argument("--suite", action="append", choices=SUITES + ("all",), default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--points", type=int, default=10)
    v.add_argument("--rmax", type=int, default=12)
    v.add_argument("--tol", type=float, default=None, help="override every tolerance")

    e = sub.add_parser("eval", help="evaluate one function")
    common(e, needs_x=True)
    e.add_argument("function", choices=EVAL_FUNCS)
    e.add_argument("-c", "--central-charge", dest="c", type=parse_complex, default=None)
    e.add_argument("--h", type=int, default=None, help="classical-limit label h")
    e.add_argument("--at-sum-rule", action="store_true", help="print sum_u f(q^u x) instead of f(x)")

    t = sub.add_parser("table", help="mode-coefficient table for one sector")
    common(t)
    t.add_argument("--regime", choices=modes.REGIMES, type=str.upper, required=True)
    t.add_argument("-i", type=int, default=1)
    t.add_argument("-j", type=int, default=1)
    t.add_argument("--sector", type=int, default=0)
    t.add_argument("--rmax", type=int, default=8)
    t.add_argument("--h", type=int, default=None)
    t.add_argument("--plain", action="store_true", help="non-symmetrized contours")
    t.add_argument("--check", action="store_true", help="add a contour-quadrature oracle column")

    lad = sub.add_parser("ladder", help="pole ladder and sector annuli")
    common(lad)
    lad.add_argument("--regime", choices=modes.REGIMES, type=str.upper, default="CRITICAL")
    lad.add_argument("-i", type=int, default=1)
    lad.add_argument("-j", type=int, default=1)
    lad.add_argument("--count", type=int, default=8, help="number of boundaries shown")
    return ap


# commands

def cmd_verify(args) -> int:
    cfg = SuiteConfig(N=args.N, seed=args.seed, points=args.points, rmax=args.rmax, tol=args.tol, M=args.M,
                      **{k: v for k, v in (("q", args.q), ("p", args.p)) if v is not None})
    if cfg.N is not None and cfg.N < 2:
        raise UsageError("N must be at least 2")
    report = VerificationReport().extend(run_suites(args.suite or ["all"], cfg))
    if args.format == "json":
        text = dump_json(report.to_dict())
    elif args.format == "csv":
        rows = [[c.name, c.samples, c.skipped, c.max_residual, c.mean_residual, c.tolerance, c.passed]
                for c in report.checks]
        text = dump_csv(["name", "samples", "skipped", "max_residual", "mean_residual", "tolerance", "passed"], rows)
    else:
        lines = [c.line() for c in report.checks]
        lines.append(f"{'ALL PASS' if report.passed else 'FAILURES'}: {sum(c.passed for c in report.checks)}/{len(report.checks)}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if report.passed else 1


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing flag(s): {', '.join('-' + m for m in missing)}")


def _evaluate(args) -> dict:
    fn = args.function
    out = {"function": fn}
    if fn == "theta":
        _need(args, "x", "p")
        a, b = theta_std(args.x, args.p), theta_std(args.x, args.p, method="sum")
        out.update(value=a, routes={"product": a, "sum": b})
        return out
    _need(args, "N", "q")
    q, N = args.q, args.N
    if fn == "f" and args.at_sum_rule:
        x = args.x if args.x is not None else 1.07 + 0.05j
        out.update(function="f_sum_rule", x=x, value=sum_rule(x, N, q))
        return out
    _need(args, "x")
    x = args.x
    out["x"] = x
    if fn == "tau_N":
        P = AlgebraParams(N, q, 0.5)
        a = tau_N(params=P, xi=xi_of(x))
        out.update(value=a, routes={"product": a, "sum": tau_N(params=P, xi=xi_of(x), method="sum")})
    elif fn == "T":
        _need(args, "p")
        c = args.c if args.c is not None else -N
        P = AlgebraParams(N, q, args.p, c)
        a = bigT(x, P)
        out.update(value=a, c=c, routes={"product": a, "sum": bigT(x, P, method="sum")})
    elif fn == "f":
        a = f_classical(x, N, q)
        out.update(value=a, routes={"pole_series": a, "log_derivative": f_classical_logderiv(x, N, q)})
    elif fn == "f_h":
        _need(args, "h")
        M = args.M if args.M is not None else 1
        a = f_h(x, args.h, M, N, q)
        out.update(value=a, h=args.h, M=M, routes={"closed": a, "beta_extrapolated": f_h_limit(x, args.h, M, N, q)})
    elif fn == "F":
        if args.M is None:
            a = bigF_single(x, N, q)
            out.update(value=a, routes={"theta": a, "tau": bigF_single(x, N, q, method="tau")})
        else:
            _need(args, "p")
            P = AlgebraParams(N, q, args.p)
            a = bigF_M(args.M, x, P)
            out.update(value=a, M=args.M, routes={"closed": a, "iterated": bigF_M(args.M, x, P, method="iterated")})
    elif fn in ("Y", "f_quantum"):
        _need(args, "p", "M")
        surf = SurfaceSigma.build(N, args.M, q, args.p)
        out.update(M=args.M, c=surf.params.c)
        if fn == "Y":
            a = bigY(x, surf)
            out.update(value=a, routes={"product": a, "ratio": bigY(x, surf, method="ratio")})
        else:
            spec = f_quantum_spec(surf, Xmax=max(abs(x) ** 2, abs(x) ** -2, 1.0))
            a = spec(x)
            out.update(value=a, routes={"Y": bigY(x, surf), "f(x)/f(1/x)": a / spec(1 / x)})
    if "routes" in out:
        vals = list(out["routes"].values())
        out["route_residual"] = abs(vals[0] - vals[1]) / max(1.0, abs(vals[1]))
    return out


def cmd_eval(args) -> int:
    res = _evaluate(args)
    if args.format == "json":
        payload = {k: (_num(v) if isinstance(v, complex) else v) for k, v in res.items() if k != "routes"}
        if "routes" in res:
            payload["routes"] = {k: _num(v) for k, v in res["routes"].items()}
        text = dump_json(payload)
    elif args.format == "csv":
        rows = [["value", complex(res["value"]).real, complex(res["value"]).imag]]
        rows += [[k, complex(v).real, complex(v).imag] for k, v in res.get("routes", {}).items()]
        text = dump_csv(["quantity", "re", "im"], rows, {"function": res["function"]})
    else:
        lines = [f"{res['function']} = {_fmt(res['value'])}"]
        for k, v in res.get("routes", {}).items():
            lines.append(f"  route {k}: {_fmt(v)}")
        if "route_residual" in res:
            lines.append(f"  route residual: {res['route_residual']:.3e}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _table_oracle(args, table) -> dict:
    R = args.rmax
    if table.regime == "QUANTUM":
        surf = SurfaceSigma.build(args.N, args.M or 1, args.q, args.p)
        spec = f_quantum_spec(surf, Xmax=abs(args.p) ** (-2 * (args.sector + 2)))
        lad = modes.quantum_ladder(spec)
        return modes.quantum_sector_oracle(spec, lad, args.sector, R, not args.plain)
    src = modes.fij_series(args.N, args.q, args.i, args.j, "H_ODD" if table.regime == "H_ODD" else "CRITICAL",
                           args.M or 1, Xmax=1e8)
    lo, hi = table.annulus
    rho = math.sqrt(lo * hi)
    A = contour_coefficients(src, rho, -R, R)
    if args.plain:
        return {r: A[-r] for r in range(-R, R + 1)}
    B = contour_coefficients(src, 1 / rho, -R, R)
    return {r: 0.5 * (A[-r] + B[-r]) for r in range(-R, R + 1)}


def cmd_table(args) -> int:
    _need(args, "N", "q")
    if args.regime == "QUANTUM":
        _need(args, "p")
    table = modes.exchange_relation_coeffs(args.regime, args.N, args.q, args.i, args.j, args.sector, args.rmax,
                                           M=args.M or 1, h=args.h, p=args.p, symmetrized=not args.plain)
    oracle = _table_oracle(args, table) if args.check else None
    worst = 0.0
    if oracle is not None:
        worst = max(abs(table.coeffs[r] - oracle[r]) / max(1.0, abs(oracle[r])) for r in table.coeffs)
    if args.format == "json":
        payload = table.to_dict()
        if oracle is not None:
            payload["oracle"] = [{"r": r, "re": oracle[r].real, "im": oracle[r].imag} for r in sorted(oracle)]
            payload["oracle_max_residual"] = worst
        text = dump_json(payload)
    else:
        header = ["r", "re", "im"] + (["oracle_re", "oracle_im"] if oracle is not None else [])
        rows = []
        for r, c in table.rows():
            row = [r, c.real, c.imag]
            if oracle is not None:
                row += [oracle[r].real, oracle[r].imag]
            rows.append(row)
        meta = {k: v for k, v in table.to_dict().items() if k != "coeffs"}
        if args.format == "csv":
            text = dump_csv(header, rows, meta)
        else:
            lines = [f"{table.regime} N={table.N} i={table.i} j={table.j} sector={table.sector} "
                     f"annulus={table.annulus} symmetrized={table.symmetrized}  [{table.side}]"]
            for row in rows:
                s = f"{row[0]:>4d}  {_fmt(complex(row[1], row[2]))}"
                if oracle is not None:
                    s += f"   oracle {_fmt(complex(row[3], row[4]))}"
                lines.append(s)
            if oracle is not None:
                lines.append(f"oracle max residual: {worst:.3e}")
            text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def cmd_ladder(args) -> int:
    _need(args, "N", "q")
    if args.regime == "QUANTUM":
        _need(args, "p")
        surf = SurfaceSigma.build(args.N, args.M or 1, args.q, args.p)
        lad = modes.quantum_ladder(f_quantum_spec(surf, Xmax=abs(args.p) ** (-2 * (args.count + 2))))
    else:
        lad = modes.pole_ladder_classical(args.N, args.q, args.i, args.j, "odd" if args.regime == "H_ODD" else None,
                                          args.M or 1, max_modulus=abs(args.q) ** (-(args.count + 2)))
    n = min(args.count, len(lad.boundaries))
    rows = []
    for k in range(n):
        lo, hi = lad.annulus(k)
        orders = sorted({e.order for e in lad.at_boundary(k + 1)})
        exp = -math.log(hi) / math.log(abs(args.q))
        rows.append([k, lo, hi, exp, "/".join(map(str, orders))])
    if args.format == "json":
        text = dump_json({"regime": args.regime, "N": args.N, "i": args.i, "j": args.j,
                          "unit_circle_pole": lad.has_unit_pole,
                          "sectors": [{"k": r[0], "lower": r[1], "upper": r[2], "upper_q_exponent": r[3],
                                       "orders": r[4]} for r in rows]})
    elif args.format == "csv":
        text = dump_csv(["k", "lower", "upper", "upper_q_exponent", "orders"], rows)
    else:
        lines = [f"{args.regime} N={args.N} i={args.i} j={args.j} (|x| bounds; upper = |q|^-P)"]
        lines += [f"k={r[0]:<3d} ({r[1]:.6g}, {r[2]:.6g})  P={r[3]:.4g}  orders {r[4]}" for r in rows]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


COMMANDS = {"verify": cmd_verify, "eval": cmd_eval, "table": cmd_table, "ladder": cmd_ladder}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command != "verify" and args.q is None:
        args.q = DEFAULT_Q
    try:
        return COMMANDS[args.command](args)
    except PoleHit as exc:
        where = f" (near {_fmt(exc.location)})" if exc.location is not None else ""
        print(f"error: {exc}{where}", file=sys.stderr)
        return 1
    except NonconvergentSeries as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, EllipticWError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
