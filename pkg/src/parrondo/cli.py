"""Command-line front end.

Exit status is 0 on success, 2 for invalid input and 1 for internal errors.
Set ``PARRONDO_THREADS`` to change how many simulation threads run at once.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .games import GameParams, build_PA, build_PB, build_W, matrix_to_json, mix
from .markov import ReducibleChainError
from .montecarlo import build_doubled_chain, default_workers, simulate_mixture, simulate_pattern, slln_check
from .numerics import format_scalar, parse_scalar, resolve_backend
from .patterns import Parity, Pattern, rate_pattern
from .rates import rate_mixture, rate_mixture_chain
from .sweep import TABLE_RS, argmax_gamma, argmax_s, make_table1, make_table2, table_to_csv, table_to_json


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rate_text(report, label: str) -> str:
    return f"{format_scalar(report.mu)}\t{label} method={report.method} backend={report.backend} parity={report.parity_note}"


def _emit_rate(report, args, label):
    if args.format == "json":
        return json.dumps({"quantity": label, **report.to_dict(), "mu_float": float(report.mu)}, indent=2)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "mu", "method", "backend", "parity_note"])
        w.writerow([label, format_scalar(report.mu), report.method, report.backend, report.parity_note])
        return buf.getvalue()
    return _rate_text(report, label)


def cmd_rate_mixture(args):
    backend = resolve_backend(args.backend, args.r, args.rho, args.gamma)
    if args.method == "chain":
        report = rate_mixture_chain(args.r, args.rho, args.gamma, backend)
    else:
        report = rate_mixture(args.r, args.rho, args.gamma, backend)
    return _emit_rate(report, args, f"mu(r={args.r},rho={args.rho},gamma={args.gamma})")


def cmd_rate_pattern(args):
    pattern = Pattern.parse(args.pattern)
    report = rate_pattern(args.r, args.rho, pattern, args.parity, args.backend)
    return _emit_rate(report, args, f"mu(r={args.r},rho={args.rho},{pattern})")


def cmd_simulate(args):
    if (args.gamma is None) == (args.pattern is None):
        raise UsageError("simulate needs exactly one of --gamma or --pattern")
    if args.gamma is not None:
        trace = simulate_mixture(args.r, float(args.rho), float(args.gamma), args.n_steps, args.seed, args.initial_capital)
    else:
        trace = simulate_pattern(args.r, float(args.rho), args.pattern, args.n_steps, args.seed, args.initial_capital)
    if args.format == "json":
        return trace.to_json()
    if args.format == "csv":
        return trace.to_csv()
    return f"{trace.final_rate!r}\tS_n/n n={trace.n_steps} seed={trace.seed} method=monte-carlo backend=float"


def cmd_slln_check(args):
    if (args.gamma is None) == (args.pattern is None):
        raise UsageError("slln-check needs exactly one of --gamma or --pattern")
    report = slln_check(
        args.r, float(args.rho),
        gamma=None if args.gamma is None else float(args.gamma),
        pattern=args.pattern,
        n_steps=args.n_steps, n_reps=args.reps, seed=args.seed,
        initial_capital=args.initial_capital, workers=args.threads,
    )
    d = {"seed": args.seed, **report.to_dict()}
    if args.format == "json":
        return json.dumps(d, indent=2)
    if args.format == "csv":
        lines = ["rep,S_n/n,error"] + [f"{i},{x!r},{e!r}" for i, (x, e) in enumerate(zip(report.final_rates, report.errors))]
        return "\n".join(lines) + "\n"
    status = "PASS" if report.passed else "FAIL"
    return (
        f"{status}\t{report.n_within}/{len(report.final_rates)} within {report.tolerance:.3g} of "
        f"mu={report.mu_exact!r} seed={args.seed} method=monte-carlo backend=float"
    )


def cmd_sweep_gamma(args):
    res = argmax_gamma(args.r, args.tol)
    d = {
        "r": res.r, "argmax_gamma": res.argmax, "max_mu": res.max_mu, "gap": res.gap,
        "gamma_r": res.reference_point, "gap_at_gamma_r": res.reference_gap,
        "method": res.method, "backend": "float",
    }
    if args.format == "json":
        return json.dumps(d, indent=2)
    if args.format == "csv":
        return ",".join(d) + "\n" + ",".join("" if v is None else str(v) for v in d.values()) + "\n"
    return f"{res.argmax!r}\targmax_gamma r={res.r} max_mu={res.max_mu!r} method={res.method} backend=float"


def cmd_sweep_s(args):
    res = argmax_s(args.r, args.s_max)
    arg = sorted(res.argmax)
    d = {
        "r": res.r, "argmax_s": arg, "max_mu": format_scalar(res.max_mu), "gap": format_scalar(res.gap),
        "s_r": res.reference_point, "method": res.method, "backend": "exact",
    }
    if args.format == "json":
        return json.dumps(d, indent=2)
    if args.format == "csv":
        return "r,argmax_s,max_mu,gap,s_r\n" + f'{res.r},"{",".join(map(str, arg))}",{d["max_mu"]},{d["gap"]},{res.reference_point}\n'
    return f"{','.join(map(str, arg))}\targmax_s r={res.r} max_mu={d['max_mu']} method=exact-scan backend=exact"


def _rs(args):
    return tuple(args.rs) if args.rs else TABLE_RS


def _emit_table(rows, args):
    if args.format == "json":
        return table_to_json(rows)
    return table_to_csv(rows, None if args.full_precision else 6)


def cmd_table1(args):
    return _emit_table(make_table1(_rs(args)), args)


def cmd_table2(args):
    return _emit_table(make_table2(_rs(args)), args)


def cmd_doubled_chain(args):
    backend = resolve_backend(args.backend, args.r, args.rho, args.gamma)
    params = GameParams.create(args.r, args.rho, args.gamma, backend)
    P = mix(build_PA(args.r, backend), build_PB(args.r, params.p0, params.p1), params.gamma)
    chain = build_doubled_chain(P)
    W = build_W(args.r, backend)
    fmt = format_scalar

    d = {
        "sigma1": list(chain.sigma1),
        "sigma2": list(chain.sigma2),
        "pi": [fmt(x) for x in chain.pi],
        "pi1": [fmt(x) for x in chain.pi1],
        "pi2": [fmt(x) for x in chain.pi2],
        "pairs1": [list(p) for p in chain.pairs1],
        "pistar1": [fmt(x) for x in chain.pistar1],
        "pstar1": matrix_to_json(chain.pstar1),
        "two_step_mean": fmt(chain.two_step_mean(W)),
        "backend": backend,
        "method": "linear-solve",
    }
    if args.format == "json":
        return json.dumps(d, indent=2)
    if args.format == "csv":
        lines = ["i,j,pistar1"] + [f"{i},{j},{fmt(x)}" for (i, j), x in zip(chain.pairs1, chain.pistar1)]
        return "\n".join(lines) + "\n"
    return (
        f"sigma1={d['sigma1']} sigma2={d['sigma2']}\npi={' '.join(d['pi'])}\n"
        f"two_step_mean={d['two_step_mean']} backend={backend} method=linear-solve"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parrondo", description="Rates of profit for capital-dependent Parrondo games.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *, rho=True, gamma=False, pattern=False, backend=True):
        p.add_argument("--r", type=int, required=True, help="modulus of game B (>= 3)")
        if rho:
            p.add_argument("--rho", type=_fraction, default=Fraction(1, 3), help="fairness parameter in [0,1), e.g. 1/3")
        if gamma:
            p.add_argument("--gamma", type=_fraction, required=gamma == "required", help="probability of playing A")
        if pattern:
            p.add_argument("--pattern", required=pattern == "required", help='e.g. ABABB or "(AB)^2 B^1"')
        if backend:
            p.add_argument("--backend", choices=("auto", "exact", "float"), default="auto")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--out", help="write output here instead of stdout")

    def sim(p):
        p.add_argument("--n-steps", type=int, default=10**6)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--initial-capital", type=int, default=0)

    p = sub.add_parser("rate-mixture", help="exact rate of gamma A + (1-gamma) B")
    common(p, gamma="required")
    p.add_argument("--method", choices=("closed", "chain"), default="closed")
    p.set_defaults(func=cmd_rate_mixture)

    p = sub.add_parser("rate-pattern", help="exact rate of a periodic pattern")
    common(p, pattern="required")
    p.add_argument("--parity", choices=[x.value for x in Parity], default="even", help="initial capital parity (even r)")
    p.set_defaults(func=cmd_rate_pattern)

    p = sub.add_parser("simulate", help="simulate play and emit the S_n/n trace")
    common(p, gamma=True, pattern=True, backend=False)
    sim(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("slln-check", help="compare simulated S_n/n with the exact rate over many seeds")
    common(p, gamma=True, pattern=True, backend=False)
    sim(p)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--threads", type=int, default=None, help=f"default $PARRONDO_THREADS or {default_workers()}")
    p.set_defaults(func=cmd_slln_check)

    p = sub.add_parser("sweep-gamma", help="maximise mu(r, 0, gamma) over gamma")
    common(p, rho=False, backend=False)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_sweep_gamma)

    p = sub.add_parser("sweep-s", help="maximise mu(r, 0, (AB)^s B^(r-2)) over s")
    common(p, rho=False, backend=False)
    p.add_argument("--s-max", type=int, default=None)
    p.set_defaults(func=cmd_sweep_s)

    for name, func in (("table1", cmd_table1), ("table2", cmd_table2)):
        p = sub.add_parser(name, help=f"reproduce {name[:-1]} {name[-1]}")
        p.add_argument("--rs", type=int, nargs="+", help="override the list of r values")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--full-precision", action="store_true")
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("doubled-chain", help="pair chain of a period-2 mixture (even r)")
    common(p, gamma="required")
    p.set_defaults(func=cmd_doubled_chain)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text = args.func(args)
    except (UsageError, ValueError, ReducibleChainError, ZeroDivisionError) as exc:
        print(f"parrondo: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"parrondo: internal error: {exc!r}", file=sys.stderr)
        return 1
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
