"""
Command-line entry point.

Exit codes: 0 success, 1 verification mismatch, 2 usage error,
3 precision ceiling reached.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .forms import QuadForm
from .hauptmodul import Level, PrecisionBudget, PrecisionError, eval_hauptmodul_star, faber, hauptmodul_series
from .traces import SCHEMA_VERSION, trace, trace_table

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class CliConfig:
    fmt: str = "text"
    output: str | None = None
    prec_ceiling: int = 1 << 14
    threads: int = 1
    full_sturm: bool = False

    def __post_init__(self):
        if self.prec_ceiling < 128:
            raise UsageError("--prec-ceiling must be at least 128 bits")
        if self.threads < 1:
            raise UsageError("--threads must be positive")

    def budget(self, working_bits: int = 128) -> PrecisionBudget:
        return PrecisionBudget(min(working_bits, self.prec_ceiling), self.prec_ceiling)


def _dump(obj) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **obj}, indent=1) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _positive(name: str, v: int) -> int:
    if v < 1:
        raise UsageError(f"{name} must be positive")
    return v


# ---------------------------------------------------------------------------
# commands; each returns (text, exit code)
# ---------------------------------------------------------------------------


def cmd_coeffs(args, cfg: CliConfig):
    n_max = args.n_max
    if n_max < 0:
        raise UsageError("--n-max must be non-negative")
    level = Level(args.p, args.star)
    f = hauptmodul_series(level, n_max + 1)
    rows = [(n, f[n]) for n in range(-1, n_max + 1)]
    if cfg.fmt == "json":
        return _dump({"level": str(level), "series": f.to_json()}), EXIT_OK
    if cfg.fmt == "csv":
        return _csv(["n", "coefficient"], rows), EXIT_OK
    return "".join(f"q^{n}: {c}\n" for n, c in rows), EXIT_OK


def cmd_trace(args, cfg: CliConfig):
    _positive("--m", args.m)
    tv = trace(args.p, args.star, args.m, args.d, cfg.budget(), beta=args.beta)
    fields = {"p": tv.p, "starred": tv.starred, "m": tv.m, "d": tv.d, "value": tv.value,
              "provenance": tv.provenance, "residual": tv.residual, "radius": tv.radius, "bits": tv.bits}
    if cfg.fmt == "json":
        return _dump(fields), EXIT_OK
    if cfg.fmt == "csv":
        return _csv(list(fields), [list(fields.values())]), EXIT_OK
    star = "*" if tv.starred else ""
    return f"t_{tv.m}^({tv.p}{star})({tv.d}) = {tv.value}\n", EXIT_OK


def cmd_table(args, cfg: CliConfig):
    _positive("--m-max", args.m_max)
    if args.d_max < 0:
        raise UsageError("--d-max must be non-negative")
    table = trace_table(args.p, args.m_max, args.d_max, budget=cfg.budget(), workers=cfg.threads)
    if cfg.fmt == "json":
        return table.to_json() + "\n", EXIT_OK
    if cfg.fmt == "csv":
        return table.to_csv(), EXIT_OK
    return table.render(), EXIT_OK


def cmd_faber(args, cfg: CliConfig):
    _positive("--m", args.m)
    phi = faber(Level(args.p, args.star), args.m)
    if cfg.fmt == "json":
        return _dump({"level": str(phi.level), "m": phi.m, "coeffs": [str(c) for c in phi.coeffs]}), EXIT_OK
    if cfg.fmt == "csv":
        return _csv(["power", "coefficient"], list(enumerate(phi.coeffs))), EXIT_OK
    return f"phi_{phi.m}(J) = {phi}\n", EXIT_OK


def _report_output(rep, cfg: CliConfig, lines=()):
    code = EXIT_OK if rep.ok else EXIT_MISMATCH
    if cfg.fmt == "json":
        return rep.to_json() + "\n", code
    if cfg.fmt == "csv":
        rows = [[rep.kind, rep.p, rep.window[0], rep.window[1], rep.checked, "ok" if rep.ok else "mismatch",
                 rep.first_mismatch[0] if rep.mismatches else ""]]
        return _csv(["kind", "p", "from", "to", "checked", "status", "first_mismatch"], rows), code
    return "".join(lines) + rep.summary() + "\n", code


def cmd_verify(args, cfg: CliConfig):
    from .identities import (
        full_sturm_window,
        theorem1_numerator,
        verify_star_relation,
        verify_theorem1,
        verify_weight2_sectors,
    )

    if args.suite == "thm1":
        _positive("--n-max", args.n_max)
        rep = verify_theorem1(args.p, args.n_max)
        lines = []
        if cfg.fmt == "text":
            j = hauptmodul_series(Level(args.p, args.p == 1), args.n_max + 1)
            for n in range(1, args.n_max + 1):
                num = theorem1_numerator(args.p, n)
                lhs = num // (2 * n) if num % (2 * n) == 0 else f"{num}/{2 * n}"
                lines.append(f"n={n}: {lhs} = {j[n]}\n" if lhs == j[n] else f"n={n}: {lhs} != {j[n]}\n")
        return _report_output(rep, cfg, lines)
    if args.p == 1:
        raise UsageError("the star and sector suites need p in {2, 3, 5}")
    window = full_sturm_window(args.p) if cfg.full_sturm else _positive("--window", args.window)
    if args.suite == "sectors":
        rep = verify_weight2_sectors(args.p, window)
    else:
        rep = verify_star_relation(args.p, window)
    return _report_output(rep, cfg)


def cmd_asym(args, cfg: CliConfig):
    from .asymptotics import convergence_report

    if args.p == 1:
        raise UsageError("asymptotic predictions are tabulated for p in {2, 3, 5}")
    try:
        grid = [int(x) for x in args.grid.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --grid {args.grid!r}") from None
    if not grid or min(grid) < 1:
        raise UsageError("--grid must list positive integers")
    rep = convergence_report(args.p, grid)
    if cfg.fmt == "json":
        return rep.to_json() + "\n", EXIT_OK
    if cfg.fmt == "csv":
        return rep.to_csv(), EXIT_OK
    return rep.render(), EXIT_OK


def cmd_eval_cm(args, cfg: CliConfig):
    try:
        a, b, c = (int(x) for x in args.form.split(","))
    except ValueError:
        raise UsageError(f"--form expects a,b,c; got {args.form!r}") from None
    Q = QuadForm(a, b, c)
    if a <= 0 or Q.disc >= 0:
        raise UsageError(f"{Q} is not positive definite")
    if args.prec < 64:
        raise UsageError("--prec must be at least 64 bits")
    budget = PrecisionBudget(min(args.prec, cfg.prec_ceiling), cfg.prec_ceiling)
    try:
        val, bits = eval_hauptmodul_star(Level(args.p, True), Q, budget)
    except ValueError as e:
        raise UsageError(str(e)) from None
    digits = max(15, int(bits * 0.30103) - 2)
    fields = {
        "p": args.p, "form": [a, b, c],
        "real_mid": val.real.mid().str(digits, radius=False), "real_rad": float(val.real.rad()),
        "imag_mid": val.imag.mid().str(digits, radius=False), "imag_rad": float(val.imag.rad()),
        "bits": bits,
    }
    if cfg.fmt == "json":
        return _dump(fields), EXIT_OK
    if cfg.fmt == "csv":
        keys = ["real_mid", "real_rad", "imag_mid", "imag_rad", "bits"]
        return _csv(["p", "a", "b", "c"] + keys, [[args.p, a, b, c] + [fields[k] for k in keys]]), EXIT_OK
    return f"j_{args.p}*({Q}) = {val}  [{bits} bits]\n", EXIT_OK


def seed_tables(directory: str, threads: int = 1) -> list[Path]:
    """Write the d <= 50 tables for p = 2, 3, 5 as CSV files."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for p in (2, 3, 5):
        path = out / f"table_p{p}.csv"
        path.write_text(trace_table(p, 2, 50, workers=threads).to_csv())
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=["text", "json", "csv"], default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS, help="write to this file instead of stdout")
    common.add_argument("--prec-ceiling", type=int, default=argparse.SUPPRESS, help="bits (>= 128)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes for tables")

    parser = argparse.ArgumentParser(prog="hauptraces", description="Hauptmoduln, traces of singular moduli and their identities.",
                                     parents=[common])
    parser.add_argument("--seed-tables", metavar="DIR", help="write the p = 2, 3, 5 tables (d <= 50) as CSV into DIR")
    sub = parser.add_subparsers(dest="command")

    def level_arg(sp, choices=(1, 2, 3, 5)):
        sp.add_argument("--p", type=int, required=True, choices=choices)

    sp = sub.add_parser("coeffs", parents=[common], help="Fourier coefficients of a Hauptmodul")
    level_arg(sp)
    sp.add_argument("--star", action="store_true")
    sp.add_argument("--n-max", type=int, required=True)

    sp = sub.add_parser("trace", parents=[common], help="a single trace value")
    level_arg(sp)
    sp.add_argument("--star", action="store_true")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--beta", type=int, help="residue class of b mod 2p for unstarred traces")

    sp = sub.add_parser("table", parents=[common], help="trace table for d <= D")
    level_arg(sp, (2, 3, 5))
    sp.add_argument("--d-max", type=int, required=True)
    sp.add_argument("--m-max", type=int, default=2)

    sp = sub.add_parser("faber", parents=[common], help="Faber polynomial phi_m")
    level_arg(sp)
    sp.add_argument("--star", action="store_true")
    sp.add_argument("--m", type=int, required=True)

    sp = sub.add_parser("verify", parents=[common], help="verification suites")
    vsub = sp.add_subparsers(dest="suite", required=True)
    v = vsub.add_parser("thm1", parents=[common], help="coefficients from traces")
    level_arg(v)
    v.add_argument("--n-max", type=int, required=True)
    for name, helptext in (("sectors", "weight 2 sector identities"), ("star", "j_p* = j_p - p (j_p | U_p)")):
        v = vsub.add_parser(name, parents=[common], help=helptext)
        level_arg(v, (2, 3, 5))
        v.add_argument("--window", type=int, default=100)
        v.add_argument("--full-sturm", action="store_true", help="use the 3960 coefficient window (long run)")

    sp = sub.add_parser("asym", parents=[common], help="convergence report for the growth of c_n")
    level_arg(sp, (2, 3, 5))
    sp.add_argument("--grid", required=True, help="comma separated n values")

    sp = sub.add_parser("eval-cm", parents=[common], help="j_p* at the CM point of a form")
    level_arg(sp)
    sp.add_argument("--form", required=True, help="a,b,c")
    sp.add_argument("--prec", type=int, default=128)
    return parser


COMMANDS = {
    "coeffs": cmd_coeffs,
    "trace": cmd_trace,
    "table": cmd_table,
    "faber": cmd_faber,
    "verify": cmd_verify,
    "asym": cmd_asym,
    "eval-cm": cmd_eval_cm,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits with 2 on bad usage
    try:
        cfg = CliConfig(
            fmt=getattr(args, "fmt", "text"),
            output=getattr(args, "output", None),
            prec_ceiling=getattr(args, "prec_ceiling", CliConfig.prec_ceiling),
            threads=getattr(args, "threads", 1),
            full_sturm=getattr(args, "full_sturm", False),
        )
        if args.seed_tables:
            for path in seed_tables(args.seed_tables, cfg.threads):
                print(path)
            if args.command is None:
                return EXIT_OK
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        text, code = COMMANDS[args.command](args, cfg)
    except ValueError as e:  # includes UsageError
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as e:
        print(f"precision ceiling reached: {e}", file=sys.stderr)
        return EXIT_PRECISION
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
