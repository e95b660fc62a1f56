"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .approximate import UnachievableError, approximate_function, load_samples
from .certify import nonaffine_certificate
from .errors import DomainError, InconsistencyError
from .generator import CLASSIC, load_generator, make_generator
from .numeric import rat_parse, rat_str
from .render import RenderJob, render
from .series import BAdicPoint, BlancmangeSpec, evaluate, functional_eq_residual, load_spec
from .zoom import divergence_scan

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3

DEFAULT_SUMS = (2, 4, 6, 8, 10, 12)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


def _rat(text: str) -> Fraction:
    try:
        return rat_parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _number(text: str) -> Fraction:
    """A rational, also accepting exact decimal notation such as ``1e-9``."""
    try:
        return rat_parse(text)
    except DomainError:
        pass
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational or decimal number: {text!r}") from None


def _interval(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split()
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two rationals 'a b', got {text!r}")
    return _rat(parts[0]), _rat(parts[1])


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", metavar="PATH", help="spec JSON {generator, c}")
    p.add_argument("--gen", metavar="PATH", help="generator JSON {p, vertices}")
    p.add_argument("--c", type=int, help="dilation multiplier (overrides the spec file)")


def _spec_from(args: argparse.Namespace, fallback: Optional[BlancmangeSpec] = None) -> BlancmangeSpec:
    if args.spec and args.gen:
        raise UsageError("give either --spec or --gen, not both")
    if args.spec:
        spec = load_spec(args.spec)
        return BlancmangeSpec(spec.gen, args.c) if args.c is not None else spec
    if args.gen:
        return BlancmangeSpec(load_generator(args.gen), args.c if args.c is not None else 1)
    if fallback is not None:
        return BlancmangeSpec(fallback.gen, args.c) if args.c is not None else fallback
    return BlancmangeSpec(CLASSIC, args.c if args.c is not None else 1)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise DomainError(f"cannot write {out}: {exc}") from None
    else:
        sys.stdout.write(text)


def cmd_eval(args: argparse.Namespace) -> int:
    spec = _spec_from(args)
    value = evaluate(spec, args.at, args.tol)
    if args.json:
        obj = value.to_json(spec)
        obj["exact"] = value.exact is not None
        print(json.dumps(obj))
    elif value.exact is not None:
        print(rat_str(value.exact))
    else:
        enc = value.enclosure
        print(f"[{rat_str(enc.lo)}, {rat_str(enc.hi)}] n_used={value.n_used} ~ {float(enc.midpoint):.12g}")
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    spec = _spec_from(args)
    lo, hi = args.interval
    witness = nonaffine_certificate(spec, lo, hi)
    _emit(json.dumps(witness.to_json()) + "\n", args.out)
    return EXIT_OK


def _render_job(args: argparse.Namespace) -> RenderJob:
    cfg: dict = {}
    base_dir = None
    if args.job:
        try:
            cfg = json.loads(Path(args.job).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read job file {args.job}: {exc}") from None
        base_dir = Path(args.job).parent
    fallback = BlancmangeSpec.from_json(cfg["spec"], base_dir) if "spec" in cfg else None
    spec = _spec_from(args, fallback)

    def pick(flag, key, convert, default):
        if flag is not None:
            return flag
        if key in cfg:
            return convert(cfg[key])
        return default

    return RenderJob(
        spec=spec,
        sums=pick(args.sums, "sums", tuple, DEFAULT_SUMS),
        center=pick(args.center, "center", lambda v: rat_parse(str(v)), Fraction(1, 3)),
        factor=pick(args.factor, "factor", lambda v: rat_parse(str(v)), Fraction(4)),
        frames=pick(args.frames, "frames", int, 6),
        resolution=pick(args.res, "res", int, 256),
        out=pick(args.out, "out", str, "frames"),
    )


def cmd_render(args: argparse.Namespace) -> int:
    job = _render_job(args)
    written = render(job, workers=args.workers)
    if args.json:
        print(json.dumps([str(p) for p in written]))
    else:
        print(f"wrote {len(written)} files to {job.out} (float budget {float(job.budget):.3g})")
    return EXIT_OK


def cmd_approx(args: argparse.Namespace) -> int:
    f = load_samples(args.samples)
    try:
        result = approximate_function(f, args.eps)
    except UnachievableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(json.dumps(result.to_json(), indent=2) + "\n", args.out)
    return EXIT_OK if result.ok else EXIT_DOMAIN


def cmd_scan(args: argparse.Namespace) -> int:
    spec = _spec_from(args)
    t0 = BAdicPoint.from_rational(spec, args.t0)
    rows = divergence_scan(spec, t0, args.depth, left=args.left)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "h", "slope"])
    for row in rows:
        writer.writerow([row.n, rat_str(row.h), rat_str(row.slope)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    """Run the exact identities on a fixed pair of specs; exit 3 on any failure."""
    specs = [
        BlancmangeSpec(CLASSIC, 1),
        BlancmangeSpec(make_generator(3, ["0", "1", "1/2", "0"]), 2),
    ]
    checks = []
    for spec in specs:
        tag = f"p={spec.p},c={spec.c}"
        residuals = [
            functional_eq_residual(spec, n, BAdicPoint.from_rational(spec, Fraction(j, spec.p * spec.b**2)))
            for n in range(6)
            for j in range(0, spec.p * spec.b**2, max(1, spec.b // 2))
        ]
        checks.append((f"functional equation {tag}", all(r == 0 for r in residuals)))
        witness = nonaffine_certificate(spec, 0, Fraction(1, 2))
        checks.append((f"non-affine witness {tag}", witness.det != 0))
    classic = specs[0]
    rows = divergence_scan(classic, BAdicPoint(0, 0), 12, start=0)
    checks.append(("dyadic slopes at 0", all(r.slope == r.n + 1 for r in rows)))
    ok = True
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'} {name}")
        ok &= passed
    return EXIT_OK if ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blancmange", description="Generalized blancmange functions with exact certificates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate B at a rational point")
    _add_spec_flags(p)
    p.add_argument("--at", type=_rat, required=True, metavar="RAT")
    p.add_argument("--tol", type=_number, default=Fraction(1, 10**9), metavar="RAT")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("certify", help="three-point witness that B is not affine on an interval")
    _add_spec_flags(p)
    p.add_argument("--interval", type=_interval, required=True, metavar='"RAT RAT"')
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("render", help="multiscale snapshot frames (CSV + SVG)")
    _add_spec_flags(p)
    p.add_argument("--job", metavar="PATH", help="job JSON; flags take precedence")
    p.add_argument("--sums", type=_int_list, metavar="CSV-INTS")
    p.add_argument("--center", type=_rat, metavar="RAT")
    p.add_argument("--factor", type=_rat, metavar="RAT")
    p.add_argument("--frames", type=int)
    p.add_argument("--res", type=int)
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("approx", help="approximate sampled f by some B(s, c)")
    p.add_argument("samples", metavar="SAMPLES_CSV")
    p.add_argument("--eps", type=_number, required=True, metavar="RAT")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("scan", help="exact difference quotients at a lattice point")
    _add_spec_flags(p)
    p.add_argument("--t0", type=_rat, required=True, metavar="RAT")
    p.add_argument("--depth", type=int, required=True, metavar="INT")
    p.add_argument("--left", action="store_true", help="step to the left of t0")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("selftest", help="check the exact identities on built-in specs")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
