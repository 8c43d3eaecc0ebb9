"""Command line interface: scan, classify, verify-model, oracle, report."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .cohomology import CSV_COLUMNS, ToleranceConfig, classification_row, classify_point
from .errors import Inconclusive, QSpectraError
from .exact import exact_complex_ranks
from .koszul import CharacterPoint, build_K, complex_from_json
from .operators import Truncation
from .model import ModelParams, model_pair, verify_model
from .pair import pair_from_json
from .scalars import GaussRat
from .scan import (emit, model_grids, portrait_from_json, portrait_to_svg, scan,
                   verify_q_projection, GridSpec)


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _pair(args):
    if getattr(args, "model", None) is not None:
        return model_pair(ModelParams(complex(args.model)))
    if not args.pair:
        raise SystemExit("either --pair or --model is required")
    return pair_from_json(_load(args.pair))


def _cfg(args):
    return ToleranceConfig.from_json(_load(args.cfg)) if args.cfg else ToleranceConfig()


def parse_point(text: str, exact: bool = False) -> CharacterPoint:
    """``axis,re,im`` with ``re`` and ``im`` decimals or fractions."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3) or parts[0].upper() not in ("X", "Y"):
        raise argparse.ArgumentTypeError(f"expected axis,re,im, got {text!r}")
    re_, im_ = parts[1], parts[2] if len(parts) == 3 else "0"
    if exact:
        return CharacterPoint(parts[0].upper(), GaussRat(Fraction(re_), Fraction(im_)))
    return CharacterPoint(parts[0].upper(), complex(float(Fraction(re_)), float(Fraction(im_))))


def cmd_scan(args):
    pair = _pair(args)
    if args.grid:
        doc = _load(args.grid)
        grids = tuple(GridSpec.from_json(g) for g in doc) if isinstance(doc, list) else (GridSpec.from_json(doc),)
    elif args.model is not None:
        grids = model_grids(complex(args.model))
    else:
        grids = (GridSpec("both", 0j, 1.0, 11),)
    portrait = scan(pair, grids, _cfg(args), workers=args.workers)
    fmt = args.format or (args.out.rsplit(".", 1)[-1] if args.out and "." in args.out else "csv")
    text = emit(portrait, fmt, args.out)
    if args.json:
        emit(portrait, "json", args.json)
    if not args.out:
        sys.stdout.write(text)
    return 0


def cmd_classify(args):
    pair = _pair(args)
    point = args.point
    try:
        c = classify_point(pair, point, _cfg(args))
    except Inconclusive as exc:
        c = exc.classification
    row = dict(zip(CSV_COLUMNS, classification_row(c)))
    row["history"] = [list(h) for h in c.history]
    print(json.dumps(row, indent=1))
    return 0


def cmd_verify_model(args):
    report = verify_model(args.q, args.N, args.p, numerics=not args.no_numerics)
    text = json.dumps(report, indent=1, default=str) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["pass"] else 1


def cmd_oracle(args):
    if args.complex:
        h0, h1, h2, r0, r1 = exact_complex_ranks(complex_from_json(_load(args.complex)))
    else:
        if args.point is None:
            raise SystemExit("oracle needs --point or --complex")
        pair = _pair(args)
        if pair.dim is None:
            raise SystemExit("the oracle needs a finite pair")
        cx = build_K(pair, parse_point(args.point, exact=True), Truncation.square(pair.dim), exact=True)
        h0, h1, h2, r0, r1 = exact_complex_ranks(cx)
    print(json.dumps({"h0": h0, "h1": h1, "h2": h2, "rank0": r0, "rank1": r1}))
    return 0


def cmd_report(args):
    with open(args.portrait, encoding="utf-8") as fh:
        portrait = portrait_from_json(fh.read())
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(portrait_to_svg(portrait))
    if args.csv:
        emit(portrait, "csv", args.csv)
    out = {"summary": portrait.summary}
    pair = pair_from_json(portrait.pair)
    sT, sS = pair.T.spectrum(), pair.S.spectrum()
    if sT is not None and sS is not None:
        out["projection"] = verify_q_projection(portrait, sT, sS, pair.q).to_json()
    print(json.dumps(out, indent=1))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="qspectra", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def pair_args(p):
        p.add_argument("--pair", help="pair JSON file")
        p.add_argument("--model", type=str, default=None, metavar="Q",
                       help="use the shift/diagonal pair with parameter Q instead of --pair")
        p.add_argument("--cfg", help="tolerance config JSON file")

    p = sub.add_parser("scan", help="classify a grid and write a portrait")
    pair_args(p)
    p.add_argument("--grid", help="grid JSON file (object or list of objects)")
    p.add_argument("--out", help="output file; format from the extension")
    p.add_argument("--format", choices=("csv", "json", "svg"))
    p.add_argument("--json", help="also write the full JSON portrait here")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("classify", help="classify one point of the cross")
    pair_args(p)
    p.add_argument("--point", required=True, type=parse_point, help="axis,re,im")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-model", help="check the shift/diagonal model statements")
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--N", type=int, default=200)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--no-numerics", action="store_true", help="skip the truncated classifications")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_model)

    p = sub.add_parser("oracle", help="exact cohomology of a pair or an exported complex")
    p.add_argument("--pair")
    p.add_argument("--point", help="axis,re,im with rational coordinates")
    p.add_argument("--complex", help="complex JSON export")
    p.set_defaults(func=cmd_oracle, model=None)

    p = sub.add_parser("report", help="render a JSON portrait")
    p.add_argument("--portrait", required=True)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
