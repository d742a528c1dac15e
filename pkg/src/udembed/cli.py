"""Unit-distance embedding tools: exact feasibility, numerical search and
parameterised constructions.

Exit codes: 0 success / feasible, 1 usage or input error, 2 proven
infeasible (reduced basis is {1}), 3 search failure (nothing found, which
proves nothing), 4 a work limit was hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import formats
from .construct import (
    BRANCH_VERTICES,
    StepFailure,
    execute,
    get_plan,
    heawood_variants,
    search_plan,
    sweep,
    sweep_grid,
    bisect_bracket,
)
from .embed import Embedding, SolveOptions, refine, rigidity_report, solve, verify
from .graphs import (
    CATALOG_NAMES,
    GraphError,
    catalog,
    degree_sequence,
    format_edge_list,
    girth,
    graph_from_difference_set,
    graph_from_lcf,
    is_bipartite,
    is_connected,
    isomorphic,
    parse_edge_list,
)
from .groebner import INFEASIBLE, LIMIT_EXCEEDED, Limits, buchberger, check_distinct, extract_solutions
from .poly import MonomialOrder, auto_pin, distance_constraints, format_poly, same_part_pairs, saturate_distinctness
from .render import Style, render_svg

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NOT_FOUND, EXIT_LIMIT = 0, 1, 2, 3, 4

FEASIBLE_CAVEAT = (
    "note: a basis other than {1} only shows the equations have complex solutions; "
    "it does not certify a real embedding with distinct points."
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# --------------------------------------------------------------------------
# Argument helpers


def _add_graph_args(p):
    src = p.add_argument_group("graph input (choose one)")
    src.add_argument("--graph", metavar="NAME", help=f"catalog name: {', '.join(CATALOG_NAMES)}")
    src.add_argument("--lcf", metavar="SPEC", help="LCF notation, e.g. '(5,-5)^7'")
    src.add_argument("--diffset", metavar="R1,R2,..", help="difference-set residues (with --modulus)")
    src.add_argument("--modulus", type=int, help="modulus for --diffset")
    src.add_argument("--edges", metavar="FILE", help="edge-list file ('u v' per line, '#' comments)")


def _load_graph(args, inputs: dict):
    chosen = [k for k in ("graph", "lcf", "diffset", "edges") if getattr(args, k, None)]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --graph, --lcf, --diffset, --edges")
    if args.graph:
        g = catalog(args.graph)
        inputs["graph"] = f"catalog:{args.graph}:{g.digest()}"
    elif args.lcf:
        g = graph_from_lcf(args.lcf)
        inputs["graph"] = f"lcf:{args.lcf}:{g.digest()}"
    elif args.diffset:
        if args.modulus is None:
            raise UsageError("--diffset needs --modulus")
        res = [int(x) for x in args.diffset.split(",") if x.strip()]
        g = graph_from_difference_set(res, args.modulus)
        inputs["graph"] = f"diffset:{args.diffset}:mod{args.modulus}:{g.digest()}"
    else:
        text = Path(args.edges).read_text()
        g = parse_edge_list(text, name=Path(args.edges).stem)
        inputs["graph"] = f"file:{args.edges}:sha256:{formats.sha256_text(text)}"
    return g


def _parse_pins(text: str, g):
    if text == "auto":
        return auto_pin(g) if g.edges else {}
    if text == "none":
        return {}
    pins = {}
    for item in text.split(";"):
        if not item.strip():
            continue
        try:
            lab, xy = item.split("=")
            x, y = xy.split(",")
            pins[lab.strip()] = (Fraction(x.strip()), Fraction(y.strip()))
        except ValueError:
            raise UsageError(f"bad pin {item!r}; expected LABEL=X,Y") from None
    return pins


def _parse_pairs(text: str | None, g):
    if not text:
        return []
    if text == "same-part":
        return same_part_pairs(g)
    if text == "all":
        return [(g.labels[i], g.labels[j]) for i in range(g.n) for j in range(i + 1, g.n)]
    pairs = []
    for item in text.split(","):
        try:
            u, v = item.split("-")
        except ValueError:
            raise UsageError(f"bad pair {item!r}; expected U-V") from None
        pairs.append((u.strip(), v.strip()))
    return pairs


def _parse_assignments(text: str | None) -> dict[str, float]:
    out = {}
    for item in (text or "").split(","):
        if item.strip():
            try:
                k, v = item.split("=")
                out[k.strip()] = float(v)
            except ValueError:
                raise UsageError(f"bad assignment {item!r}; expected NAME=VALUE") from None
    return out


def _parse_branches(text: str | None) -> dict[str, int]:
    out = {}
    for item in (text or "").split(","):
        if item.strip():
            try:
                k, v = item.split("=")
            except ValueError:
                raise UsageError(f"bad branch {item!r}; expected VERTEX=+ or VERTEX=-") from None
            v = v.strip()
            if v not in ("+", "-", "+1", "-1", "1"):
                raise UsageError(f"branch for {k} must be + or -")
            out[k.strip()] = -1 if v.startswith("-") else 1
    return out


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected LO,HI") from None
    return lo, hi


def _load_plan(args):
    plan = get_plan(args.plan)
    br = _parse_branches(getattr(args, "branches", None))
    if br:
        plan = plan.with_branches(br)
    return plan


def _write_out(args, doc, inputs, options, outcome, text: str | None = None):
    if not getattr(args, "out", None):
        return
    body = text if text is not None else formats.dumps(formats.jsonable(doc))
    Path(args.out).write_text(body)
    manifest = formats.manifest_doc(
        args._argv, inputs, formats.jsonable(options), formats.jsonable({**outcome, "output_sha256": formats.sha256_text(body)})
    )
    formats.write(str(args.out) + ".manifest.json", manifest)


def _load_embedding(path, inputs):
    text = Path(path).read_text()
    inputs["embedding"] = f"file:{path}:sha256:{formats.sha256_text(text)}"
    return formats.embedding_from_doc(json.loads(text))


def _print_coords(emb: Embedding):
    for lab, (x, y) in emb.coord_map().items():
        print(f"  {lab:>4}  {x: .17g}  {y: .17g}")


# --------------------------------------------------------------------------
# Commands


def cmd_graph(args):
    inputs = {}
    g = _load_graph(args, inputs)
    print(f"graph {g.name or '(unnamed)'}: {g.n} vertices, {len(g.edges)} edges")
    print(f"degrees: {degree_sequence(g)}")
    gi = girth(g)
    print(f"girth: {'infinite' if gi == math.inf else gi}")
    print(f"bipartite: {is_bipartite(g)}  connected: {is_connected(g)}")
    outcome = {"n": g.n, "edges": len(g.edges)}
    if args.compare:
        other = catalog(args.compare)
        iso = isomorphic(g, other)
        print(f"isomorphic to {args.compare}: {iso}")
        outcome["isomorphic"] = iso
    text = format_edge_list(g)
    if args.print_edges:
        sys.stdout.write(text)
    _write_out(args, None, inputs, {}, outcome, text=text)
    return EXIT_OK


def _system(args, inputs):
    g = _load_graph(args, inputs)
    pins = _parse_pins(args.pin, g)
    sys_ = distance_constraints(g, pins)
    pairs = _parse_pairs(args.saturate, g)
    if pairs:
        sys_ = saturate_distinctness(sys_, pairs)
    return g, sys_


def cmd_constraints(args):
    inputs = {}
    g, sys_ = _system(args, inputs)
    print(f"# variables: {' '.join(sys_.names)}")
    for lab, (x, y) in sys_.pins.items():
        print(f"# pinned {lab} = ({x}, {y})")
    lines = [format_poly(p, sys_.names, clear=False) for p in sys_.nonzero_polys()]
    for t in lines:
        print(f"{t} = 0")
    doc = {"variables": sys_.names, "pins": {k: [str(a), str(b)] for k, (a, b) in sys_.pins.items()},
           "polynomials": lines, "graph": formats.graph_doc(g)}
    _write_out(args, doc, inputs, {"pin": args.pin, "saturate": args.saturate}, {"count": len(lines)})
    return EXIT_OK


def cmd_groebner(args):
    inputs = {}
    g, sys_ = _system(args, inputs)
    order = MonomialOrder(args.order)
    limits = Limits(args.max_pairs, args.max_degree, args.max_work)
    res = buchberger(sys_, order, limits)
    sys.stdout.write(formats.basis_listing(sys_, res))
    print(f"# stats: {json.dumps(res.stats)}")
    options = {"order": args.order, "pin": args.pin, "saturate": args.saturate,
               "limits": {"max_pairs": limits.max_pairs, "max_degree": limits.max_degree, "max_work": limits.max_work}}
    outcome = {"status": res.status}
    if res.status == INFEASIBLE:
        print("basis = {1}: the system has no solution, so the graph has no unit-distance embedding "
              "(under these pins/saturations)")
        code = EXIT_INFEASIBLE
    elif res.status == LIMIT_EXCEEDED:
        print(f"work limit exceeded ({res.stats.get('limit')}); no verdict", file=sys.stderr)
        code = EXIT_LIMIT
    else:
        print(FEASIBLE_CAVEAT)
        code = EXIT_OK
        if args.extract:
            ex = extract_solutions(res)
            if not ex.triangular:
                print("solutions: basis is not triangular; no back-substitution attempted")
                outcome["extraction"] = "NonTriangular"
            else:
                coords = [sys_.coords_from_solution(s) for s in ex.solutions]
                report = check_distinct(coords, g)
                print(f"solutions: {len(coords)} real")
                for k, (c, dup) in enumerate(report):
                    pts = "  ".join(f"{lab}=({x + 0.0:.12g}, {y + 0.0:.12g})" for lab, (x, y) in c.items())
                    flag = "ok" if not dup else "duplicate " + ", ".join(f"{u}~{v}" for u, v in dup)
                    print(f"  [{k}] {pts}  [{flag}]")
                outcome["solutions"] = [{"coords": c, "duplicates": dup} for c, dup in report]
    _write_out(args, formats.basis_doc(sys_, res), inputs, options, outcome)
    return code


def _solve_options(args) -> SolveOptions:
    return SolveOptions(
        restarts=args.restarts,
        residual_tol=args.residual_tol,
        separation_floor=args.separation_floor,
        max_iterations=args.max_iterations,
        seed=args.seed,
        init_box=args.init_box,
    )


def cmd_solve(args):
    inputs = {}
    g = _load_graph(args, inputs)
    opts = _solve_options(args)
    res = solve(g, opts)
    print(f"options: {json.dumps(opts.to_dict())}")
    if res.success:
        print(f"embedding found after {res.restarts_used} restart(s): residual {res.residual:.3g}, "
              f"min separation {res.separation:.6g}")
    else:
        print(f"no embedding found in {res.restarts_used} restarts (this is not a proof that none exists); "
              f"best residual {res.residual:.3g}, best separation {res.separation:.3g}")
    _print_coords(res.embedding)
    doc = formats.embedding_doc(res.embedding, "embedding" if res.success else "best-failed", opts)
    _write_out(args, doc, inputs, opts.to_dict(),
               {"success": res.success, "residual": res.residual, "separation": res.separation,
                "restarts_used": res.restarts_used})
    return EXIT_OK if res.success else EXIT_NOT_FOUND


def cmd_verify(args):
    inputs = {}
    emb = _load_embedding(args.embedding, inputs)
    v = verify(emb.graph, emb.coords, args.edge_tol, args.separation_tol)
    print(f"max edge deviation {v.max_edge_deviation:.3g} (tol {v.edge_tol:g}); "
          f"min separation {v.min_separation:.6g} (tol {v.separation_tol:g}): {'PASS' if v.passed else 'FAIL'}")
    _write_out(args, {"max_edge_deviation": v.max_edge_deviation, "min_separation": v.min_separation,
                      "passed": v.passed}, inputs, {"edge_tol": args.edge_tol, "separation_tol": args.separation_tol},
               {"passed": v.passed})
    return EXIT_OK if v.passed else EXIT_NOT_FOUND


def cmd_refine(args):
    inputs = {}
    emb = _load_embedding(args.embedding, inputs)
    out = refine(emb.graph, emb.coords, allow_similarity=not args.no_similarity,
                 max_iterations=args.max_iterations)
    v = verify(out.graph, out.coords)
    print(f"refined: max edge deviation {v.max_edge_deviation:.3g}, min separation {v.min_separation:.6g}, "
          f"{'PASS' if v.passed else 'FAIL'}")
    _print_coords(out)
    _write_out(args, formats.embedding_doc(out, "refined"), inputs,
               {"similarity": not args.no_similarity, "max_iterations": args.max_iterations}, {"passed": v.passed})
    return EXIT_OK if v.passed else EXIT_NOT_FOUND


def cmd_rigidity(args):
    inputs = {}
    emb = _load_embedding(args.embedding, inputs)
    rep = rigidity_report(emb.graph, emb, rank_tol=args.rank_tol)
    print(f"rigidity matrix rank {rep.jacobian_rank} (tol {rep.rank_tol:g}); "
          f"flexes {rep.flex_count}; {'rigid' if rep.rigid else 'flexible'}")
    _write_out(args, {"rank": rep.jacobian_rank, "flex_count": rep.flex_count, "rigid": rep.rigid,
                      "rank_tol": rep.rank_tol}, inputs, {"rank_tol": args.rank_tol}, {"rigid": rep.rigid})
    return EXIT_OK


def cmd_plan(args):
    plan = _load_plan(args)
    params = _parse_assignments(args.params)
    inputs = {"plan": args.plan}
    for k, st in enumerate(plan.steps):
        print(f"  {k:2d}  {type(st).__name__:12s} {st}")
    print("parameters: " + ", ".join(f"{p.name}={p.default:.17g} in [{p.lo:.6g}, {p.hi:.6g}]" for p in plan.parameters))
    print(f"target pair: {plan.target[0]}-{plan.target[1]}")
    try:
        pl = execute(plan, params)
    except StepFailure as exc:
        print(f"execution failed: {exc}", file=sys.stderr)
        _write_out(args, plan.to_dict(), inputs, {"params": params}, {"executed": False})
        return EXIT_NOT_FOUND
    print(f"executed: {len(pl.coords)} vertices placed, {len(plan.realized_edges())} unit edges "
          f"(max error {max(pl.edge_errors(), default=0.0):.3g}); "
          f"d({plan.target[0]},{plan.target[1]}) = {pl.target_distance:.17g}; "
          f"min separation {pl.min_separation():.6g}")
    _write_out(args, plan.to_dict(), inputs, {"params": params, "branches": plan.branches()},
               {"executed": True, "target_distance": pl.target_distance})
    return EXIT_OK


def cmd_sweep(args):
    plan = _load_plan(args)
    fixed = _parse_assignments(args.fixed)
    inputs = {"plan": args.plan}
    if args.grid:
        axes = [a.strip() for a in args.grid.split(",")]
        if len(axes) != 2:
            raise UsageError("--grid takes two parameter names")
        ranges = {a: (plan.parameter(a).lo, plan.parameter(a).hi) for a in axes}
        res = sweep_grid(plan, ranges, args.samples, fixed)
    else:
        lo, hi = _parse_range(args.range) if args.range else (None, None)
        res = sweep(plan, args.axis, lo, hi, args.samples, fixed)
    table = formats.sweep_table(res)
    if args.table:
        Path(args.table).write_text(table)
    else:
        sys.stdout.write(table)
    ok = sum(s.ok for s in res.samples)
    print(f"# {len(res.samples)} samples, {ok} executable, {len(res.brackets)} bracket(s)", file=sys.stderr)
    for b in res.brackets:
        print(f"# bracket {b.axis} in [{b.lo:.17g}, {b.hi:.17g}] d: {b.d_lo:.6g} -> {b.d_hi:.6g} fixed {b.fixed}",
              file=sys.stderr)
    _write_out(args, formats.sweep_doc(plan, res), inputs,
               {"axis": args.axis, "grid": args.grid, "range": args.range, "samples": args.samples, "fixed": fixed},
               {"samples": len(res.samples), "brackets": len(res.brackets)})
    return EXIT_OK


def cmd_bisect(args):
    inputs = {"plan": args.plan}
    if args.axis:
        # one-dimensional: sweep the axis, bisect each bracket
        plan = _load_plan(args)
        lo, hi = _parse_range(args.range) if args.range else (None, None)
        res = sweep(plan, args.axis, lo, hi, args.samples, _parse_assignments(args.fixed))
        if not res.brackets:
            print("NO_BRACKET")
            sys.stdout.write(formats.sweep_table(res))
            _write_out(args, formats.sweep_doc(plan, res), inputs, {"axis": args.axis}, {"status": "NO_BRACKET"})
            return EXIT_NOT_FOUND
        b = bisect_bracket(plan, res.brackets[0], tol=args.tol)
        print(f"{b.status}: {args.axis} = {b.param:.17g} after {b.iterations} iterations; "
              f"d = {b.target_distance!r}")
        emb = Embedding(plan.graph, b.placement.coords) if b.placement else None
        if emb is not None:
            _write_out(args, formats.embedding_doc(emb, "candidate", extra={"params": b.params}), inputs,
                       {"axis": args.axis, "tol": args.tol}, {"status": b.status, "param": b.param})
        return EXIT_OK if b.status != "invalidated" else EXIT_NOT_FOUND

    plans = heawood_variants() if args.all_variants else [_load_plan(args)]
    report = search_plan(plans, samples=args.samples, stop_at_first=not args.all_candidates)
    print(f"{report.status}: {report.n_samples} samples over {len(report.sweeps)} variant(s), "
          f"{report.n_brackets} bracket(s), {len(report.candidates)} bisected")
    for k, c in enumerate(report.candidates):
        at = ", ".join(f"{n}={v:.6g}" for n, v in c.bracket.fixed.items())
        print(f"  [{k}] {c.bracket.axis} in [{c.bracket.lo:.6g}, {c.bracket.hi:.6g}] at {at}: {c.bisection.status}; "
              f"edge dev {c.max_edge_deviation:.3g}, separation {c.min_separation:.3g}, "
              f"{'PASS' if c.passed else 'fail'}")
    if args.table:
        with open(args.table, "w") as fh:
            for br, sw in report.sweeps:
                fh.write(f"# branches {json.dumps(br)}\n")
                fh.write(formats.sweep_table(sw))
    best = report.best()
    if best is not None:
        print("candidate embedding (numerical, not a proof):")
        _print_coords(best.embedding)
        doc = formats.embedding_doc(best.embedding, "candidate",
                                    extra={"search": formats.search_doc(report), "params": best.bisection.params})
    else:
        if not args.table:
            for br, sw in report.sweeps:
                print(f"# branches {json.dumps(br)}")
                sys.stdout.write(formats.sweep_table(sw))
        doc = formats.search_doc(report)
    _write_out(args, doc, inputs, {"samples": args.samples, "all_variants": args.all_variants},
               {"status": report.status})
    return EXIT_OK if best is not None else EXIT_NOT_FOUND


def cmd_render(args):
    inputs = {}
    if args.embedding:
        emb = _load_embedding(args.embedding, inputs)
    elif args.plan:
        plan = _load_plan(args)
        inputs["plan"] = args.plan
        pl = execute(plan, _parse_assignments(args.params))
        emb = Embedding(plan.graph, pl.coords)
    else:
        raise UsageError("render needs --embedding or --plan")
    svg = render_svg(emb, Style(size=args.size, edge_tol=args.edge_tol))
    if args.out:
        _write_out(args, None, inputs, {"size": args.size, "edge_tol": args.edge_tol}, {"bytes": len(svg)}, text=svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="udembed", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out(p):
        p.add_argument("--out", metavar="FILE", help="write the structured result here (plus FILE.manifest.json)")

    p = sub.add_parser("graph", help="build a graph and print its invariants")
    _add_graph_args(p)
    p.add_argument("--compare", metavar="NAME", help="also test isomorphism with a catalog graph")
    p.add_argument("--print-edges", action="store_true")
    out(p)
    p.set_defaults(func=cmd_graph)

    def system_args(p):
        _add_graph_args(p)
        p.add_argument("--pin", default="auto", help="'auto' (first edge to (0,0)-(1,0)), 'none', or 'L=X,Y;...'")
        p.add_argument("--saturate", metavar="PAIRS", help="distinctness pairs: 'same-part', 'all', or 'u-v,...'")

    p = sub.add_parser("constraints", help="print the unit-distance polynomial system")
    system_args(p)
    out(p)
    p.set_defaults(func=cmd_constraints)

    p = sub.add_parser("groebner", help="reduced Groebner basis and feasibility verdict")
    system_args(p)
    p.add_argument("--order", choices=["lex", "grevlex"], default="lex")
    p.add_argument("--max-pairs", type=int, default=Limits.max_pairs)
    p.add_argument("--max-degree", type=int, default=Limits.max_degree)
    p.add_argument("--max-work", type=int, default=Limits.max_work)
    p.add_argument("--extract", action="store_true", help="back-substitute real solutions (lex only)")
    out(p)
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("solve", help="numerical embedding search")
    _add_graph_args(p)
    d = SolveOptions()
    p.add_argument("--restarts", type=int, default=d.restarts)
    p.add_argument("--residual-tol", type=float, default=d.residual_tol)
    p.add_argument("--separation-floor", type=float, default=d.separation_floor)
    p.add_argument("--max-iterations", type=int, default=d.max_iterations)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--init-box", type=float, default=None, help="half-width of random starts (default n/2)")
    out(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check an embedding document")
    p.add_argument("--embedding", required=True)
    p.add_argument("--edge-tol", type=float, default=1e-9)
    p.add_argument("--separation-tol", type=float, default=1e-6)
    out(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("refine", help="polish approximate coordinates")
    p.add_argument("--embedding", required=True)
    p.add_argument("--no-similarity", action="store_true", help="skip the initial rescale")
    p.add_argument("--max-iterations", type=int, default=500)
    out(p)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("rigidity", help="rank of the rigidity matrix and flex count")
    p.add_argument("--embedding", required=True)
    p.add_argument("--rank-tol", type=float, default=1e-8)
    out(p)
    p.set_defaults(func=cmd_rigidity)

    def plan_args(p):
        p.add_argument("--plan", default="heawood", help="heawood or four_bar")
        p.add_argument("--branches", help=f"override circle-circle sides, e.g. '2=+,a=-' (vertices {', '.join(BRANCH_VERTICES)}, f, c)")

    p = sub.add_parser("plan", help="show and execute a construction plan")
    plan_args(p)
    p.add_argument("--params", help="parameter values, e.g. 'alpha=3.0,beta=2.0'")
    out(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sweep", help="scan the target distance over plan parameters")
    plan_args(p)
    p.add_argument("--axis", default="alpha")
    p.add_argument("--range", metavar="LO,HI")
    p.add_argument("--grid", metavar="P1,P2", help="two-parameter grid instead of a single axis")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--fixed", help="values for the other parameters, e.g. 'beta=2.0'")
    p.add_argument("--table", metavar="FILE", help="write the tab-separated scan here instead of stdout")
    out(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bisect", help="bracket and bisect d(target) = 1, then refine and verify")
    plan_args(p)
    p.add_argument("--axis", help="sweep only this axis (with --range) instead of the 2-D grid")
    p.add_argument("--range", metavar="LO,HI")
    p.add_argument("--fixed")
    p.add_argument("--samples", type=int, default=100, help="samples per axis")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--all-variants", action="store_true", help="scan all 16 branch variants")
    p.add_argument("--all-candidates", action="store_true", help="bisect every bracket instead of stopping at the first pass")
    p.add_argument("--table", metavar="FILE", help="write the full scan table here")
    out(p)
    p.set_defaults(func=cmd_bisect)

    p = sub.add_parser("render", help="SVG drawing of an embedding or an executed plan")
    p.add_argument("--embedding")
    plan_args(p)
    p.set_defaults(plan=None)
    p.add_argument("--params")
    p.add_argument("--size", type=int, default=480)
    p.add_argument("--edge-tol", type=float, default=1e-9)
    out(p)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._argv = argv
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, GraphError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"udembed {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())


def main_entry() -> None:
    raise SystemExit(main())
