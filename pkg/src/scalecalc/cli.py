"""Command-line interface: ``scalecalc {spectrum,fit,star,invariant,isom,verify}``.

Exit codes: 0 success / isomorphic, 1 verification failure / not isomorphic,
2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import growth as ga, scales, verify
from .errors import DomainError, OutsideLambdaError, ScaleCalcError
from .modelspec import parse_manifold, split_spec
from .spectra import enumerate_spectrum, weyl_fit

FORMATS = ("table", "csv", "json")


def _g(x):
    return f"{x:.12g}"


def _emit(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header, rows):
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _render(fmt, header, rows, payload):
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv(header, rows)
    return _table(header, rows)


def parse_growth(spec: str, count: int) -> ga.GrowthFunction:
    """``pow:p=2[,a=3]`` (p may be a fraction like 2/3) or a spectral model specifier."""
    name, body = split_spec(spec)
    if name == "pow":
        params = dict(part.split("=", 1) for part in body.split(",") if part)
        if "p" not in params:
            raise DomainError(f"power-law specifier needs p=: {spec!r}")
        return ga.PowerLaw(float(params.get("a", 1)), ga._parse_exponent(params["p"]))
    return scales.model_from_spec(spec, count).growth


def cmd_spectrum(args):
    s = enumerate_spectrum(parse_manifold(args.model), args.count)
    if args.format == "csv":
        return _emit(s.to_csv(), args.output) or 0
    rows = [[mu, _g(lam), int(m)] for mu, (lam, m) in
            enumerate(zip(s.expanded(), s.level_multiplicity_per_rank()), 1)]
    payload = {"model": s.source, "count": s.count,
               "eigenvalues": [float(_g(v)) for v in s.expanded()],
               "multiplicities": [int(m) for m in s.level_multiplicity_per_rank()]}
    _emit(_render(args.format, ["rank", "eigenvalue", "multiplicity"], rows, payload), args.output)
    return 0


def cmd_fit(args):
    fit = weyl_fit(enumerate_spectrum(parse_manifold(args.model), args.count), args.tail)
    if args.format == "json":
        _emit(fit.to_json() + "\n", args.output)
    else:
        rows = [[_g(fit.q), _g(fit.C), _g(fit.residual), fit.tail_fraction, fit.count]]
        _emit(_render(args.format, ["q", "C", "residual", "tail_fraction", "count"], rows, None), args.output)
    return 0


def cmd_star(args):
    p = ga.star(parse_growth(args.left, args.count), parse_growth(args.right, args.count), args.count)
    if args.format == "csv":
        return _emit(ga.star_csv(p), args.output) or 0
    rows = [[i, _g(v), "right" if s else "left"] for i, (v, s) in enumerate(zip(p.prefix, p.sources), 1)]
    payload = {"count": args.count, "tail_exponent": ga.format_exponent(p.tail_exponent),
               "values": [float(_g(v)) for v in p.prefix],
               "sources": ["right" if s else "left" for s in p.sources]}
    _emit(_render(args.format, ["index", "value", "source"], rows, payload), args.output)
    return 0


def cmd_invariant(args):
    if not 1 <= args.jmax <= 16:
        raise DomainError("--jmax must lie in 1..16")
    table = scales.invariant_table(scales.model_from_spec(args.model, args.count), args.jmax)
    if args.entry:
        i, j = args.entry
        entries = [{"i": i, "j": j, "exponent": float(_g(float(table[i, j].exponent))),
                    "representative": table[i, j].label}]
        payload = {"j_max": table.j_max, "entries": entries}
    else:
        payload = table.to_json()
    rows = [[e["i"], e["j"], _g(e["exponent"]), e["representative"]] for e in payload["entries"]]
    _emit(_render(args.format, ["i", "j", "exponent", "representative"], rows, payload), args.output)
    return 0


def cmd_isom(args):
    m1 = scales.model_from_spec(args.first, args.count)
    m2 = scales.model_from_spec(args.second, args.count)
    verdict = scales.locally_isomorphic(m1, m2)
    word = {True: "isomorphic", False: "not isomorphic", None: "undecided"}[verdict.isomorphic]
    if args.format == "json":
        payload = verdict.to_json() | {"models": [m1.label, m2.label]}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.output)
    else:
        cert = verdict.certificate
        if verdict.isomorphic:
            detail = f"class {cert['class']}"
        elif verdict.isomorphic is False:
            detail = f"entry (0,1) exponents {_g(cert['exponents'][0])} vs {_g(cert['exponents'][1])}"
        else:
            detail = cert.get("reason", "")
        _emit(f"{m1.label} vs {m2.label}: {word} ({verdict.mode}); {detail}\n", args.output)
    return {True: 0, False: 1, None: 1}[verdict.isomorphic]


def _run_suite(args):
    s = args.suite
    if s == "gram":
        return verify.gram_suite(args.modes, args.k, off_tol=args.tolerance or 1e-10)
    if s == "weyl":
        return verify.weyl_suite(parse_manifold(args.model), args.count, args.tail, args.tolerance or 0.05)
    if s == "star":
        return verify.star_suite(args.trials, args.prefix, args.seed)
    if s == "idempotent":
        return verify.idempotent_suite(horizon=args.horizon)
    if s == "productB":
        return verify.product_suite(args.n1, args.n2, args.count, args.tolerance or 0.05)
    return verify.bounds_suite(args.k0max, args.modes)


def cmd_verify(args):
    checks = _run_suite(args)
    rows = [[c.name, _g(c.measured), _g(c.tolerance), "pass" if c.passed else "FAIL", c.detail] for c in checks]
    payload = {"suite": args.suite, "passed": verify.all_passed(checks), "checks": [c.as_dict() for c in checks]}
    _emit(_render(args.format, ["check", "measured", "tolerance", "status", "detail"], rows, payload), args.output)
    failed = [c for c in checks if not c.passed]
    if failed:
        print(f"FAIL {failed[0].name}: {failed[0].detail or _g(failed[0].measured)}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scalecalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, count=10_000):
        p.add_argument("--format", choices=FORMATS, default="table")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")
        p.add_argument("--count", type=int, default=count, help="number of eigenvalues / values")

    p = sub.add_parser("spectrum", help="enumerate a model spectrum")
    p.add_argument("model")
    common(p, count=20)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("fit", help="fit the Weyl exponent of a model spectrum")
    p.add_argument("model")
    p.add_argument("--tail", type=float, default=0.5)
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("star", help="star-merge two growth functions")
    p.add_argument("left")
    p.add_argument("right")
    common(p, count=20)
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("invariant", help="local invariant table (i, j) -> [f^(j-i)]")
    p.add_argument("model")
    p.add_argument("--jmax", type=int, default=3)
    p.add_argument("--entry", type=int, nargs=2, metavar=("I", "J"))
    common(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("isom", help="decide local scale isomorphism of two models")
    p.add_argument("first")
    p.add_argument("second")
    common(p)
    p.set_defaults(func=cmd_isom)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["gram", "weyl", "star", "idempotent", "productB", "bounds"])
    p.add_argument("--model", default="circle")
    p.add_argument("--tail", type=float, default=0.5)
    p.add_argument("--modes", type=int, default=32)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--n1", type=int, default=1)
    p.add_argument("--n2", type=int, default=2)
    p.add_argument("--horizon", type=int, default=100_000)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--prefix", type=int, default=1000)
    p.add_argument("--k0max", type=int, default=3)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--seed", type=int, default=None, help="defaults to $SCALECALC_SEED or a fixed constant")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "count", 1) < 1:
        parser.error("--count must be >= 1")
    if getattr(args, "tolerance", None) is not None and args.tolerance <= 0:
        parser.error("--tolerance must be positive")
    try:
        return args.func(args)
    except OutsideLambdaError as exc:
        parser.error(str(exc).strip("'\""))
    except DomainError as exc:
        parser.error(str(exc))
    except ScaleCalcError as exc:
        print(f"scalecalc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
