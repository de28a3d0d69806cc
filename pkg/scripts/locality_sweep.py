#!/usr/bin/env python3
"""Exploratory sweep: how deep must a bounded unraveling be before it
agrees with the original pointed model on a formula?

For random pointed models and random formulas, report the least depth at
which agreement starts and stays within the sweep, next to the formula's
modal depth (which is always sufficient).  Nothing here asserts a minimal
bound; the output is labeled EXPERIMENT throughout.

Usage: python3 scripts/locality_sweep.py [--samples N] [--max-depth L] [--seed S]
"""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from wamlkit import semantics, syntax, unravel  # noqa: E402
from wamlkit.model import random_model  # noqa: E402


def random_formula(rng, alphabet, nesting, fuel=8):
    leaves = [syntax.Letter(a) for a in alphabet] + [syntax.Top(), syntax.Bottom()]
    if fuel <= 1:
        return rng.choice(leaves)
    kind = rng.randrange(6)
    if kind == 0:
        return rng.choice(leaves)
    if kind == 1:
        return syntax.Not(random_formula(rng, alphabet, nesting, fuel - 1))
    if kind in (2, 3) and nesting > 0:
        wrap = syntax.Box if kind == 2 else syntax.Diamond
        return wrap(random_formula(rng, alphabet, nesting - 1, fuel - 1))
    op = rng.choice([syntax.And, syntax.Or])
    half = (fuel - 1) // 2
    return op(
        random_formula(rng, alphabet, nesting, half),
        random_formula(rng, alphabet, nesting, fuel - 1 - half),
    )


def least_stable_depth(m, w, f, max_depth):
    reference = semantics.check(m, w, f)
    least = None
    for depth in range(max_depth + 1):
        result = unravel.unravel(m, w, depth)
        agree = semantics.check(result.model, result.root, f) == reference
        if agree and least is None:
            least = depth
        if not agree:
            least = None
    return least


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=30)
    parser.add_argument("--max-depth", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    print("EXPERIMENT least stable agreement depth vs modal depth")
    slack = []
    for i in range(args.samples):
        m = random_model(2, rng.randint(2, 4), rng.uniform(0.05, 0.25), {"p", "q"}, seed=i)
        w = m.worlds[rng.randrange(len(m.worlds))]
        f = random_formula(rng, ["p", "q"], rng.randint(1, args.max_depth))
        depth = syntax.modal_depth(f)
        least = least_stable_depth(m, w, f, args.max_depth)
        if least is None:
            verdict = f"no stable depth within {args.max_depth}"
        else:
            slack.append(depth - least)
            verdict = f"stable from {least}"
        print(
            f"EXPERIMENT sample {i:3d}: modal depth {depth}, {verdict} "
            f"({syntax.print_formula(f)})"
        )
    if slack:
        print(
            "EXPERIMENT mean slack (modal depth - least stable depth): "
            f"{sum(slack) / len(slack):.2f} over {len(slack)} settled samples"
        )
    print("EXPERIMENT note: agreement at the modal depth is guaranteed;")
    print("EXPERIMENT note: anything earlier is opportunistic, not asserted.")


if __name__ == "__main__":
    main()
