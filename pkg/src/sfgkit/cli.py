"""Command-line front end.

Subcommands:
    compute   graph file -> normalized transfer function (JSON or table)
    analyze   frequency response as CSV, optional stability/roots/reduction
              blocks and figure files
    oracle    direct node-equation solve at one complex frequency
    serve     run the HTTP service

`compute --format structured` prints exactly the payload the HTTP service
returns, so the two can be diffed byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from sfgkit.analysis import (
    default_grid,
    frequency_response,
    poles_zeros,
    reduce_order_cf,
    routh_stability,
)
from sfgkit.errors import NoForwardPath, SfgError
from sfgkit.graph import INVG, parse_graph
from sfgkit.poly import Poly, RationalFn, format_rational_text, parse_rational_text
from sfgkit.shannon import (
    format_transfer_table,
    run_pipeline,
    numeric_oracle,
    scale_to_monic,
    substitute_symbol,
    transfer_to_json,
)


def _load_graph(path: str):
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def parse_rational_literal(text: str) -> RationalFn:
    """Compact rational syntax: '[1,2]/[3,1]', '2.5', '[4]', '1/[1,1]'."""

    def side(tok: str) -> list[float]:
        tok = tok.strip()
        if tok.startswith("["):
            data = json.loads(tok)
            if not isinstance(data, list) or not all(
                isinstance(c, (int, float)) for c in data
            ):
                raise ValueError(f"not a coefficient list: {tok}")
            return [float(c) for c in data]
        return [float(tok)]

    head, sep, tail = text.partition("/")
    num = side(head)
    den = side(tail) if sep else [1.0]
    return RationalFn(Poly(num), Poly(den))


def _parse_assignments(pairs: list[str], value_parser):
    out = []
    for raw in pairs:
        name, sep, literal = raw.partition("=")
        name = name.strip()
        if not sep or not name:
            raise ValueError(f"expected SYMBOL=VALUE, got {raw!r}")
        if name == INVG:
            raise ValueError("the 1/G marker cannot be assigned")
        out.append((name, value_parser(literal.strip())))
    return out


def cmd_compute(args) -> int:
    res = run_pipeline(_load_graph(args.graph), variable=args.variable)
    if args.dump_loops:
        for lp in res.loops:
            print(f"loop {lp.index}: nodes={list(lp.node_seq)}", file=sys.stderr)
    if args.dump_combos:
        for table in res.tables:
            for row in table.rows:
                print(f"order {table.order}: loops={list(row.loops)}", file=sys.stderr)
    tf = res.transfer
    for name, value in _parse_assignments(args.set, parse_rational_literal):
        tf = substitute_symbol(tf, name, value)
    if args.monic:
        tf = scale_to_monic(tf)
    if args.format == "table":
        print(format_transfer_table(tf))
    else:
        print(transfer_to_json(tf))
    return 0


def _numeric_parts(args):
    if args.tf is not None and args.graph is not None:
        raise ValueError("give either a graph file or --tf, not both")
    if args.tf is not None:
        r = parse_rational_text(args.tf)
        return r.num, r.den
    if args.graph is None:
        raise ValueError("give a graph file or --tf")
    tf = run_pipeline(_load_graph(args.graph)).transfer
    for name, value in _parse_assignments(args.set, parse_rational_literal):
        tf = substitute_symbol(tf, name, value)
    return tf.plain_parts()


def cmd_analyze(args) -> int:
    b, a = _numeric_parts(args)
    grid = default_grid(args.wmin, args.wmax, args.points)
    points = frequency_response(b, a, grid)

    comments: list[str] = [f"# transfer {format_rational_text(RationalFn(b, a))}"]
    reduced = None
    if args.routh:
        rep = routh_stability(a)
        comments.append(
            f"# routh verdict={rep.verdict} sign_changes={rep.sign_changes}"
        )
        comments.append(
            "# routh first_column=" + ",".join(f"{v:.6g}" for v in rep.first_column)
        )
        for note in rep.notes:
            comments.append(f"# routh note: {note}")
    if args.roots:
        rs = poles_zeros(b, a)
        for z, res in zip(rs.zeros, rs.zero_residuals):
            comments.append(f"# zero {z.real:.12g}{z.imag:+.12g}j residual={res:.3g}")
        for p, res in zip(rs.poles, rs.pole_residuals):
            comments.append(f"# pole {p.real:.12g}{p.imag:+.12g}j residual={res:.3g}")
    if args.reduce is not None:
        rb, ra = reduce_order_cf(b, a, args.reduce)
        reduced = frequency_response(rb, ra, grid)
        comments.append(f"# reduced {format_rational_text(RationalFn(rb, ra))}")

    if args.plot_dir:
        from sfgkit import plots

        os.makedirs(args.plot_dir, exist_ok=True)
        want_bode, want_nyquist = args.bode, args.nyquist
        if not (want_bode or want_nyquist):
            want_bode = want_nyquist = True
        if want_bode:
            out = plots.save_bode(points, os.path.join(args.plot_dir, "bode.png"))
            comments.append(f"# figure {out}")
        if want_nyquist:
            out = plots.save_nyquist(points, os.path.join(args.plot_dir, "nyquist.png"))
            comments.append(f"# figure {out}")
        if reduced is not None:
            out = plots.save_reduction_overlay(
                points, reduced, os.path.join(args.plot_dir, "reduction.png")
            )
            comments.append(f"# figure {out}")

    for line in comments:
        print(line)
    print("omega,re,im,mag_db,phase_deg")
    for p in points:
        print(
            f"{p.omega:.12g},{p.value.real:.12g},{p.value.imag:.12g},"
            f"{p.mag_db:.12g},{p.phase_deg:.12g}"
        )
    return 0


def cmd_oracle(args) -> int:
    g = _load_graph(args.graph)
    try:
        s0 = complex(args.s.replace(" ", ""))
    except ValueError:
        parts = args.s.split(",")
        if len(parts) != 2:
            raise ValueError(f"cannot parse complex frequency {args.s!r}")
        s0 = complex(float(parts[0]), float(parts[1]))
    values = dict(_parse_assignments(args.set, complex))
    v = numeric_oracle(g, s0, values)
    print(json.dumps({"s0": [s0.real, s0.imag], "value": [v.real, v.imag]},
                     sort_keys=True, separators=(",", ":")))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from sfgkit.service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfg",
        description="Signal-flow-graph transfer functions and analyses",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="normalized transfer function from a graph file")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--format", choices=("structured", "table"), default="structured")
    p.add_argument("--variable", choices=("s", "z"), default="s")
    p.add_argument("--monic", action="store_true",
                   help="scale so the denominator's plain leading coefficient is 1")
    p.add_argument("--set", action="append", default=[], metavar="SYM=RATIONAL",
                   help="substitute a symbol, e.g. V=[1]/[3,1]")
    p.add_argument("--dump-loops", action="store_true",
                   help="list the loops on stderr")
    p.add_argument("--dump-combos", action="store_true",
                   help="list the non-touching combinations on stderr")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("analyze", help="frequency response CSV plus optional reports")
    p.add_argument("graph", nargs="?", help="graph JSON file")
    p.add_argument("--tf", help="inline function, e.g. 'num=[8,2] den=[2,3,1]'")
    p.add_argument("--set", action="append", default=[], metavar="SYM=RATIONAL")
    p.add_argument("--wmin", type=float, default=1e-2)
    p.add_argument("--wmax", type=float, default=1e2)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--routh", action="store_true", help="stability verdict block")
    p.add_argument("--roots", action="store_true", help="pole/zero block")
    p.add_argument("--reduce", type=int, metavar="R",
                   help="continued-fraction reduction to order R")
    p.add_argument("--plot-dir", help="write figure files into this directory")
    p.add_argument("--bode", action="store_true", help="render the Bode figure")
    p.add_argument("--nyquist", action="store_true", help="render the Nyquist figure")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("oracle", help="direct node-equation solve at one frequency")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--s", required=True, metavar="RE,IM",
                   help="complex frequency, e.g. '0,1' or '1+2j'")
    p.add_argument("--set", action="append", default=[], metavar="SYM=COMPLEX",
                   help="numeric value for a symbol at this frequency")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NoForwardPath as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SfgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
