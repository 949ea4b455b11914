"""Command line: eval, check, scan-giuga, observe, list-claims, resume.

Exit codes: 0 completed with every forced identity intact, 1 an under-test
claim was violated (or a composite Giuga solution turned up), 2 a forced
identity failed (implementation bug), 3 usage or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from . import claims as cl
from . import exact_core as ex
from . import mod_core as mc
from . import report_io as rio
from . import scanner as sc

EXIT_OK, EXIT_FINDING, EXIT_BUG, EXIT_USAGE = 0, 1, 2, 3

log = logging.getLogger("giuga_harness")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which we reserve for bugs
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _claims_epilog() -> str:
    lines = ["claims:"]
    for d in cl.list_claims():
        lines.append(f"  {d.id:<16} [{d.kind}] {d.anchor}")
    return "\n".join(lines)


# -- output helpers -------------------------------------------------------------------


def _describe_violation(v: cl.Violation) -> str:
    where = ", ".join(f"{name}={val}" for name, val in (("n", v.n), ("k", v.k), ("j", v.j)) if val is not None)
    rel = {"eq": "expected", "ne": "expected not", "lt": "expected below"}[v.relation]
    mod = f" (mod {v.modulus})" if v.modulus else ""
    return f"({where}): observed {v.observed}, {rel} {v.expected}{mod}"


def format_report(report: cl.ClaimReport) -> str:
    head = (
        f"{report.claim_id} [{report.kind}] n in [{report.n_lo}, {report.n_hi}]"
        + (f" k-policy {report.k_policy}" if report.k_policy != "-" else "")
        + f": {report.verdict}; {report.pairs_checked} checked, {report.skipped} skipped,"
        f" {report.violation_count} violations"
    )
    lines = [head]
    if report.verdict == cl.SKIPPED:
        lines.append("  note: no in-domain pairs in this range")
    if report.violations:
        lines.append("  first " + _describe_violation(report.violations[0]))
        if report.violation_count > len(report.violations):
            lines.append(f"  ({len(report.violations)} of {report.violation_count} violations stored)")
    if report.status == "implementation-bug":
        lines.append("  IMPLEMENTATION BUG: a forced identity failed; run aborted")
    return "\n".join(lines)


def format_census(c: sc.GiugaCensus) -> str:
    sat = ", ".join(map(str, c.composite_satisfiers)) or "none"
    return (
        f"Giuga census below {c.bound}: G = {c.G}; "
        f"{c.prime_satisfiers} of {c.primes_checked} primes satisfy the congruence; "
        f"composite satisfiers: {sat}"
    )


def _emit(doc: rio.ReportDocument, text: str, fmt: str, out: Path | None) -> None:
    if fmt == "text":
        if out is not None:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text + "\n", encoding="utf-8")
        print(text)
        return
    if out is None:
        sys.stdout.write(rio.to_json(doc) if fmt == "json" else rio.violations_csv(doc))
    else:
        rio.write_report(doc, out, fmt)
        print(text)


_EXT = {"text": ".txt", "json": ".json", "csv": ".csv"}


def _plot_report(report: cl.ClaimReport, plot_dir: Path | None) -> None:
    if plot_dir is None:
        return
    from . import plotting

    plotting.plot_claim_report(report, plot_dir / f"{report.claim_id}.png")
    if report.claim_id in ("thm-ukz", "cor-hk-h1") and report.n_hi <= 200:
        plotting.plot_residue_map(report.claim_id, report.n_hi, plot_dir / f"{report.claim_id}-map.png")


def _exit_for(report: cl.ClaimReport) -> int:
    if report.status == "implementation-bug":
        return EXIT_BUG
    if report.violation_count:
        return EXIT_FINDING
    return EXIT_OK


# -- subcommands ----------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    fn, n, k = args.function, args.n, args.k
    modular = args.mod

    def need(name: str, value: int | None) -> int:
        if value is None:
            raise UsageError(f"{fn} needs --{name}")
        return value

    if fn == "V":
        if modular:
            raise UsageError("V is an integer identity; only the exact path exists")
        print(ex.V(need("k", k)))
        return EXIT_OK
    n = need("n", n)
    if modular:
        if fn == "S":
            kk = need("k", k)
            if n < 2:
                raise UsageError("modular evaluation needs n >= 2")
            value = mc.Residue(sum(pow(j, kk, n) for j in range(1, n)) % n, n)
        elif fn == "fW":
            value = mc.wilson_residue(n)
        elif fn == "fG":
            value = mc.Residue((mc.giuga_residue(n).r + 1) % n, n)
        elif fn == "H":
            value = mc.H_mod(need("k", k), n)
        else:
            value = mc.U_mod(need("k", k), n)
        print(value)
        return EXIT_OK
    if fn == "S":
        print(ex.power_sum(need("k", k), n))
    elif fn == "fW":
        print(ex.f_wilson(n))
    elif fn == "fG":
        print(ex.f_giuga(n))
    elif fn == "H":
        kk = need("k", k)
        if not 1 <= kk <= n - 1:
            raise UsageError(f"H needs 1 <= k <= n-1 (got k={kk}, n={n})")
        print(ex.H(kk, n))
    else:
        kk = need("k", k)
        if not 1 <= kk <= n - 2:
            raise UsageError(f"U needs 1 <= k <= n-2 (got k={kk}, n={n})")
        print(ex.U(kk, n))
    return EXIT_OK


def _run_one_check(cid: str, args: argparse.Namespace, policy: cl.KPolicy) -> cl.ClaimReport:
    d = cl.get_claim(cid)
    n_lo = args.n_min if args.n_min is not None else (1 if d.variable == "k" else 2)
    if n_lo > args.n_max:
        raise UsageError(f"--n-min {n_lo} exceeds --n-max {args.n_max}")
    try:
        if args.workers > 1 or args.checkpoint is not None:
            ckpt = args.checkpoint
            if ckpt is not None and len(args.ids) > 1:
                ckpt = ckpt.with_name(f"{ckpt.stem}-{cid}{ckpt.suffix}")
            cfg = sc.ScanConfig(
                cid, n_lo, args.n_max, str(policy), args.workers, args.chunk_size, ckpt, force=args.force
            )
            return sc.sweep(cfg)
        return cl.check_claim(cid, (n_lo, args.n_max), policy, force=args.force)
    except cl.ForcedIdentityViolation as exc:
        return exc.report


def cmd_check(args: argparse.Namespace) -> int:
    try:
        args.ids = cl.iter_claim_ids(args.claims)
    except cl.UnknownClaimError as exc:
        raise UsageError(f"unknown claim {exc.args[0]!r}; see list-claims") from None
    policy = cl.KPolicy.parse(args.k_policy)
    many = len(args.ids) > 1
    worst = EXIT_OK
    for cid in args.ids:
        report = _run_one_check(cid, args, policy)
        out = None
        if args.out is not None:
            out = args.out / f"{cid}{_EXT[args.format]}" if many else args.out
        _emit(rio.ReportDocument(report), format_report(report), args.format, out)
        _plot_report(report, args.plot)
        # codes are ordered by severity
        worst = max(worst, _exit_for(report))
    return worst


def _emit_census(census: sc.GiugaCensus, args: argparse.Namespace) -> int:
    _emit(rio.ReportDocument(census), format_census(census), args.format, args.out)
    if args.plot is not None:
        from . import plotting

        plotting.plot_census(census, args.plot / f"giuga-census-{census.bound}.png")
    return EXIT_FINDING if census.G else EXIT_OK


def cmd_scan_giuga(args: argparse.Namespace) -> int:
    if args.max < 3:
        raise UsageError(f"--max must be >= 3, got {args.max}")
    cfg = sc.census_config(
        args.max, workers=args.workers, chunk_size=args.chunk_size, checkpoint=args.checkpoint, force=args.force
    )
    if args.checkpoint is not None and args.checkpoint.exists() and args.checkpoint.stat().st_size:
        census = sc.resume(args.checkpoint, cfg)
    else:
        census = sc.giuga_census(
            args.max, workers=args.workers, chunk_size=args.chunk_size, checkpoint=args.checkpoint, force=args.force
        )
    return _emit_census(census, args)


def observation_breakdown(n_max: int) -> list[tuple[str, cl.ClaimReport]]:
    """Per-member reports behind the aggregated observation run."""
    parts = []
    for k in cl.OBSERVATION_POLICY.ks:
        parts.append((f"k = {k}", cl.check_claim("conj-hk", (2, n_max), cl.KPolicy.fixed(k))))
    for d in cl.OBSERVATION_POLICY.offsets:
        parts.append((f"k = n-{d}", cl.check_claim("conj-hk", (2, n_max), cl.KPolicy.band(d))))
    return parts


def cmd_observe(args: argparse.Namespace) -> int:
    report = cl.reproduce_author_observation(args.n_max)
    lines = [
        f"H_k characterization, n <= {args.n_max}, k in {{2,3,4,5}} and k in {{n-5,...,n-2}}",
        "",
        f"{'member':<10} {'n checked':>10} {'mismatches':>11}",
    ]
    for label, part in observation_breakdown(args.n_max):
        lines.append(f"{label:<10} {part.pairs_checked:>10} {part.violation_count:>11}")
    lines += ["", format_report(report)]
    _emit(rio.ReportDocument(report), "\n".join(lines), args.format, args.out)
    _plot_report(report, args.plot)
    return _exit_for(report)


def cmd_list_claims(args: argparse.Namespace) -> int:
    for d in cl.list_claims():
        print(f"{d.id:<16} {d.kind:<16} {d.domain}")
        print(f"{'':<16} {d.statement}")
        print(f"{'':<16} anchor: {d.anchor}")
    return EXIT_OK


def cmd_resume(args: argparse.Namespace) -> int:
    ckpt = sc.load_checkpoint(args.checkpoint)
    overrides: dict = {"workers": args.workers, "checkpoint": args.checkpoint, "force": args.force}
    if args.n_max is not None:
        overrides["n_hi"] = args.n_max - 1 if ckpt.config["claim_id"] == sc.CENSUS_ID else args.n_max
    cfg = sc.config_from_checkpoint(ckpt, **overrides)
    try:
        result = sc.resume(ckpt, cfg)
    except cl.ForcedIdentityViolation as exc:
        result = exc.report
    if isinstance(result, sc.GiugaCensus):
        return _emit_census(result, args)
    _emit(rio.ReportDocument(result), format_report(result), args.format, args.out)
    _plot_report(result, args.plot)
    return _exit_for(result)


# -- parser ---------------------------------------------------------------------------


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", type=Path, help="report file (directory when several claims are checked)")
    p.add_argument("--plot", type=Path, metavar="DIR", help="write figures into DIR")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="giuga-harness",
        description="Check the Wilson-Giuga interpolation family numerically.",
        epilog=_claims_epilog() + f"\n\nSet {cl.CEILING_ENV}=1 to lift the cost ceilings.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate S, fW, fG, H, U or V")
    p.add_argument("function", choices=("S", "fW", "fG", "H", "U", "V"))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    path = p.add_mutually_exclusive_group()
    path.add_argument("--exact", action="store_true", help="exact integer value (default)")
    path.add_argument("--mod", action="store_true", help="residue modulo n")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "check",
        help="check claims over a range",
        epilog=_claims_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--claims", required=True, help="comma-separated claim ids, or 'all'")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-min", type=int)
    p.add_argument("--k-policy", default="auto", help="all | auto | fixed:2,3 | band:2,3 | fixed:..+band:..")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--chunk-size", type=_positive, default=sc.DEFAULT_CHUNK)
    p.add_argument("--checkpoint", type=Path)
    p.add_argument("--force", action="store_true", help="run past the cost ceiling")
    _output_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan-giuga", help="census of Giuga congruence solutions below --max")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--chunk-size", type=_positive, default=sc.DEFAULT_CHUNK)
    p.add_argument("--checkpoint", type=Path, help="checkpoint file; resumed when it already exists")
    p.add_argument("--force", action="store_true")
    _output_flags(p)
    p.set_defaults(func=cmd_scan_giuga)

    p = sub.add_parser("observe", help="rerun the published small-k / near-n observation")
    p.add_argument("--n-max", type=int, default=1000)
    _output_flags(p)
    p.set_defaults(func=cmd_observe)

    p = sub.add_parser("list-claims", help="list every claim with its anchor")
    p.set_defaults(func=cmd_list_claims)

    p = sub.add_parser("resume", help="finish an interrupted sweep or census from its checkpoint")
    p.add_argument("--checkpoint", type=Path, required=True)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--n-max", type=int, help="must agree with the checkpointed config")
    p.add_argument("--force", action="store_true")
    _output_flags(p)
    p.set_defaults(func=cmd_resume)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ex.DomainError, cl.BudgetExceeded, sc.CheckpointError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, rio.ReportParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cl.ImplementationBug as exc:
        print(f"implementation bug: {exc}", file=sys.stderr)
        return EXIT_BUG


if __name__ == "__main__":
    sys.exit(main())
