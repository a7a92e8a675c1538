"""Command-line surface: generators, verifiers, rounding, LP solving, corpus runs.

Exit codes: 0 success / verified feasible; 1 infeasible, violated, or a
domain failure (witness or reason printed); 2 usage errors.  All output is
deterministic: rational values print exactly, never as floats, and every
random draw is seed-controlled.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

from . import density as density_mod
from . import generators, lp, rounding, steiner, structuring
from .errors import BcrError, FormatError, InstanceError
from .forest import check_forest, forest_cost, format_forest, parse_forest
from .model import Instance, format_instance, metric_closure, parse_instance
from .rationals import format_ratio, parse_rational
from .solution import (
    cost,
    format_dual,
    format_solution,
    format_tree_solution,
    is_half_integral,
    parse_dual,
    parse_solution,
    parse_tree_solution,
    tree_cost,
    verify_dual,
    verify_primal,
    verify_tree_bcr,
)

RATIO_BOUND = rounding.RATIO_BOUND
DENSITY_BOUND = Fraction(9, 16)


class _UsageError(Exception):
    """Bad invocation or unreadable/withheld input; maps to exit 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_instance(path: str) -> Instance:
    try:
        return parse_instance(_read(path))
    except (FormatError, InstanceError) as exc:
        raise _UsageError(f"{path}: {exc}") from exc


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise _UsageError(f"cannot write {path}: {exc.strerror or exc}") from exc
    print(f"wrote {path}")


def _cmd_gen(args: argparse.Namespace) -> int:
    dual_text = None
    solution_text = None
    if args.family == "lower-bound":
        inst, sol = generators.gen_lower_bound(args.q)
        if args.with_lp:
            solution_text = format_solution(inst, sol)
    elif args.family == "gadget":
        inst, sol, dual = generators.gen_gadget(args.rep)
        if args.with_lp:
            solution_text = format_solution(inst, sol)
        if args.with_dual:
            dual_text = format_dual(inst, dual)
    elif args.family == "figure1":
        inst, sol = generators.gen_figure1()
        solution_text = format_solution(inst, sol)
    else:
        inst, sol = generators.gen_random_halfintegral(
            args.seed,
            args.n,
            args.edge_density,
            args.pairs,
            single_component=args.single_component,
        )
        solution_text = format_solution(inst, sol)
    if args.out is None:
        if getattr(args, "with_lp", False) or getattr(args, "with_dual", False):
            raise _UsageError("--with-lp/--with-dual need --out to place the extra files")
        sys.stdout.write(format_instance(inst))
        return 0
    prefix = args.out
    _write(Path(prefix + ".instance"), format_instance(inst))
    if solution_text is not None:
        _write(Path(prefix + ".solution"), solution_text)
    if dual_text is not None:
        _write(Path(prefix + ".dual"), dual_text)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    if args.kind == "dual":
        if args.certificate is None:
            raise _UsageError("verify dual needs --certificate")
        cert = parse_dual(inst, _read(args.certificate))
        verdict = verify_dual(inst, cert)
        if verdict.feasible:
            print(f"value {format_ratio(verdict.value)}")
            return 0
        print(verdict.describe())
        return 1
    if args.solution is None:
        raise _UsageError(f"verify {args.kind} needs --solution")
    text = _read(args.solution)
    if args.kind == "primal":
        verdict = verify_primal(inst, parse_solution(inst, text))
    elif args.kind == "tree":
        verdict = verify_tree_bcr(inst, parse_tree_solution(inst, text))
    else:
        verdict = check_forest(parse_forest(inst, text), inst)
    if verdict.feasible:
        print("feasible")
        return 0
    print(verdict.describe())
    return 1


def _cmd_round(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    sol = parse_solution(inst, _read(args.solution))
    edges, trace = rounding.round_solution(sol, inst)
    if args.trace:
        print(trace.describe())
    sys.stdout.write(format_forest(sorted(edges)))
    print(f"cost {format_ratio(forest_cost(edges, inst))}")
    return 0


def _cmd_density(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    sol = parse_solution(inst, _read(args.solution))
    if args.brute_force:
        result = density_mod.densest_subgraph_bruteforce(sol, inst)
    else:
        result = density_mod.densest_subgraph(sol, inst)
    print(f"density {format_ratio(result.density)}")
    print("W " + " ".join(sorted(result.W)))
    return 0


def _cmd_transform(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    sol = parse_solution(inst, _read(args.solution))
    tree = steiner.to_tree_bcr(sol, inst, args.root)
    text = format_tree_solution(tree)
    if args.out is not None:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    print(f"cost {format_ratio(tree_cost(inst, tree))}")
    return 0


def _cmd_lp(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    if args.relaxation == "forest":
        value, sol = lp.solve_forest_bcr(inst, iteration_cap=args.cap)
        text = format_solution(inst, sol)
    else:
        value, tree = lp.solve_tree_bcr(inst, iteration_cap=args.cap)
        text = format_tree_solution(tree)
    print(f"value {format_ratio(value)}")
    if args.out is not None:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def _parse_seed_range(text: str) -> range:
    head, sep, tail = text.partition("..")
    if not sep:
        raise _UsageError(f"bad seed range {text!r}: expected A..B")
    try:
        lo, hi = int(head), int(tail)
    except ValueError as exc:
        raise _UsageError(f"bad seed range {text!r}: expected A..B") from exc
    if hi < lo:
        raise _UsageError(f"bad seed range {text!r}: empty")
    return range(lo, hi + 1)


def corpus_row(seed: int, n: int, pairs: int, edge_density: int = 3) -> dict[str, object]:
    """Run the rounding property suite on one seeded instance.

    Returns the CSV fields plus a ``failures`` list describing any property
    that did not hold (empty = all good).  The structuring and density bounds
    are checked on the metric closure — the regime in which the rounding
    pipeline applies them, and the only one where splitting-off is
    cost-neutral and the degree structure law holds.
    """
    inst, sol = generators.gen_random_halfintegral(seed, n, edge_density, pairs)
    failures: list[str] = []
    lp_cost = cost(inst, sol)
    edges, trace = rounding.round_solution(sol, inst)
    rounded = forest_cost(edges, inst)
    if not check_forest(edges, inst).feasible:
        failures.append("rounded forest infeasible")
    ratio = rounded / lp_cost if lp_cost else Fraction(0)
    if lp_cost and ratio > RATIO_BOUND:
        failures.append(f"ratio {ratio} above {RATIO_BOUND}")
    min_density: Fraction | None = None
    for level in trace.levels:
        if min_density is None or level.density < min_density:
            min_density = level.density
        if level.mst_cost * level.density > level.internal_cost:
            failures.append(f"level {level.level}: spanning bound fails")
    closure, _witness = metric_closure(inst)
    base_cost = cost(closure, sol)
    structured, _report = structuring.well_structure(closure, sol)
    reduced = structuring.fully_reduce(closure, structured)
    if reduced.z:
        result = density_mod.densest_subgraph(reduced, closure)
        if result.density < DENSITY_BOUND:
            failures.append(f"reduced density {result.density} below {DENSITY_BOUND}")
        pm = density_mod.projection_multigraph(reduced, closure)
        for vertex, reason in density_mod.structure_violations(pm):
            failures.append(f"structure law fails at {vertex}: {reason}")
    for stage, candidate in (
        ("structured", structured),
        ("reduced", reduced),
    ):
        if not verify_primal(closure, candidate).feasible:
            failures.append(f"{stage} solution infeasible")
        if cost(closure, candidate) > base_cost:
            failures.append(f"{stage} solution costs more than the input")
        if not is_half_integral(candidate):
            failures.append(f"{stage} solution not half-integral")
    return {
        "seed": seed,
        "lp_cost": lp_cost,
        "rounded_cost": rounded,
        "ratio": ratio,
        "min_density": min_density,
        "failures": failures,
    }


def _cmd_corpus(args: argparse.Namespace) -> int:
    seeds = _parse_seed_range(args.seeds)
    rows = []
    bad = 0
    for seed in seeds:
        row = corpus_row(seed, args.n, args.pairs, args.edge_density)
        rows.append(row)
        for failure in row["failures"]:
            bad += 1
            print(f"seed {seed}: {failure}")
    try:
        with open(args.report, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["seed", "lp_cost", "rounded_cost", "ratio", "min_density"])
            for row in rows:
                writer.writerow(
                    [
                        row["seed"],
                        format_ratio(row["lp_cost"]),
                        format_ratio(row["rounded_cost"]),
                        format_ratio(row["ratio"]),
                        "" if row["min_density"] is None else format_ratio(row["min_density"]),
                    ]
                )
    except OSError as exc:
        raise _UsageError(f"cannot write {args.report}: {exc.strerror or exc}") from exc
    print(f"{len(rows)} seeds, {bad} failures, report {args.report}")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcrforest",
        description="Cut-relaxation toolkit: generate, verify, round, and solve exactly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write certified instance families")
    gen_sub = gen.add_subparsers(dest="family", required=True)
    p = gen_sub.add_parser("lower-bound", help="3/2-gap family, scale q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--with-lp", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)
    p = gen_sub.add_parser("gadget", help="representation-dependent-value gadget")
    p.add_argument("--rep", choices=("p1", "p2"), required=True)
    p.add_argument("--with-lp", action="store_true")
    p.add_argument("--with-dual", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)
    p = gen_sub.add_parser("figure1", help="three-pair worked example")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)
    p = gen_sub.add_parser("random", help="seeded random half-integral instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--edge-density", type=int, default=3)
    p.add_argument("--single-component", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    ver = sub.add_parser("verify", help="check feasibility and certificates")
    ver.add_argument("kind", choices=("primal", "dual", "tree", "forest"))
    ver.add_argument("--instance", required=True)
    ver.add_argument("--solution")
    ver.add_argument("--certificate")
    ver.set_defaults(func=_cmd_verify)

    rnd = sub.add_parser("round", help="round a half-integral solution to a forest")
    rnd.add_argument("--instance", required=True)
    rnd.add_argument("--solution", required=True)
    rnd.add_argument("--trace", action="store_true")
    rnd.set_defaults(func=_cmd_round)

    den = sub.add_parser("density", help="densest-subgraph value of a solution")
    den.add_argument("--instance", required=True)
    den.add_argument("--solution", required=True)
    den.add_argument("--brute-force", action="store_true")
    den.set_defaults(func=_cmd_density)

    tra = sub.add_parser("transform", help="reorientation transforms")
    tra_sub = tra.add_subparsers(dest="transform", required=True)
    p = tra_sub.add_parser("steiner", help="merge roots into one for tree-shaped demands")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--root")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_transform)

    lps = sub.add_parser("lp", help="exact cutting-plane optimizer")
    lp_sub = lps.add_subparsers(dest="lp_command", required=True)
    p = lp_sub.add_parser("solve")
    p.add_argument("--instance", required=True)
    p.add_argument("--relaxation", choices=("forest", "tree"), required=True)
    p.add_argument("--cap", type=int, default=500)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_lp)

    cor = sub.add_parser("corpus", help="seeded property-suite sweep with CSV report")
    cor.add_argument("--seeds", required=True, help="inclusive range A..B")
    cor.add_argument("--n", type=int, required=True)
    cor.add_argument("--pairs", type=int, default=3)
    cor.add_argument("--edge-density", type=int, default=3)
    cor.add_argument("--report", required=True)
    cor.set_defaults(func=_cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, InstanceError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except BcrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
