#!/usr/bin/env python3
"""Integrality-gap report for the three-layer lower-bound family.

For each scale q the family admits a feasible fractional solution of cost
2q, while every feasible edge set must span all 3q vertices and therefore
costs at least 3q-1.  Rounding the fractional solution recovers exactly
3q-1, so the observed gap (3q-1)/(2q) climbs toward 3/2.  Small scales are
additionally cross-checked against brute force and the exact LP solver.
"""

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from bcrforest.forest import brute_force_opt, check_forest
from bcrforest.generators import gen_lower_bound
from bcrforest.lp import solve_forest_bcr
from bcrforest.rounding import round_solution
from bcrforest.solution import cost, verify_primal


@dataclass(frozen=True)
class Config:
    max_q: int
    brute_limit: int
    solve_limit: int


def parse_args(argv: list[str] | None) -> Config:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-q", type=int, default=8)
    parser.add_argument(
        "--brute-limit", type=int, default=3,
        help="largest q cross-checked by exhaustive search",
    )
    parser.add_argument(
        "--solve-limit", type=int, default=2,
        help="largest q cross-checked by the exact LP solver",
    )
    args = parser.parse_args(argv)
    if args.max_q < 1:
        parser.error("--max-q must be positive")
    return Config(args.max_q, args.brute_limit, args.solve_limit)


def main(argv: list[str] | None = None) -> int:
    config = parse_args(argv)
    ok = True
    header = f"{'q':>2} {'fractional':>10} {'rounded':>8} {'ratio':>7}  checks"
    print(header)
    print("-" * len(header))
    for q in range(1, config.max_q + 1):
        inst, sol = gen_lower_bound(q)
        fractional = cost(inst, sol)
        feasible = verify_primal(inst, sol).feasible
        forest, trace = round_solution(sol, inst)
        rounded = trace.total_cost
        connected = check_forest(forest, inst).feasible
        ratio = rounded / fractional
        notes = []
        if not feasible:
            notes.append("FRACTIONAL INFEASIBLE")
            ok = False
        if not connected:
            notes.append("ROUNDED INFEASIBLE")
            ok = False
        if rounded != 3 * q - 1:
            notes.append(f"rounded != {3 * q - 1}")
            ok = False
        if q <= config.brute_limit:
            best, _edges = brute_force_opt(inst)
            if best == rounded:
                notes.append("= brute force")
            else:
                notes.append(f"brute force {best} DIFFERS")
                ok = False
        if q <= config.solve_limit:
            value, _opt = solve_forest_bcr(inst)
            if value == fractional:
                notes.append("= LP optimum")
            else:
                notes.append(f"LP optimum {value} below")
        print(
            f"{q:>2} {str(fractional):>10} {str(rounded):>8} {str(ratio):>7}  "
            + ", ".join(notes)
        )
    limit = Fraction(3, 2)
    print(f"\nratio approaches {limit} from below as q grows")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
