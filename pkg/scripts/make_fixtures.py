#!/usr/bin/env python3
"""Regenerate the bundled fixtures under fixtures/ from code.

The fixtures cover: the two 2-models with a non-aligned bisimulation
(nonaligned_*), the cyclic model used to demonstrate unraveling (cycle),
the interpolation counterexample bundles at arities 2 and 3 (m2/n2/z2/
proof2 and m3/n3/z3/proof3).
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from wamlkit import interp, model, proof  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def write_relation(path: Path, pairs) -> None:
    payload = {"pairs": [list(p) for p in sorted(pairs)]}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)

    nonaligned_left = model.make_model(
        2,
        ["w", "w1", "w2", "w3"],
        [("w", "w1", "w2"), ("w", "w2", "w3")],
        {"w": ["p"], "w1": ["p"], "w2": ["p"]},
    )
    nonaligned_right = model.make_model(
        2,
        ["v", "v1", "v2"],
        [("v", "v1", "v2")],
        {"v": ["p"], "v1": ["p"], "v2": ["p"]},
    )
    (FIXTURES / "nonaligned_left.json").write_bytes(model.save(nonaligned_left))
    (FIXTURES / "nonaligned_right.json").write_bytes(model.save(nonaligned_right))
    write_relation(
        FIXTURES / "z_nonaligned.json",
        {("w", "v"), ("w1", "v1"), ("w2", "v2"), ("w2", "v1")},
    )

    cycle = model.make_model(
        2,
        ["w", "v", "u", "t"],
        [("w", "u", "t"), ("u", "t", "u"), ("t", "w", "v")],
        {},
    )
    (FIXTURES / "cycle.json").write_bytes(model.save(cycle))

    for n in (2, 3):
        bundle = interp.build_counterexample(n)
        (FIXTURES / f"m{n}.json").write_bytes(model.save(bundle.left.model))
        (FIXTURES / f"n{n}.json").write_bytes(model.save(bundle.right.model))
        write_relation(FIXTURES / f"z{n}.json", bundle.z.pairs)
        (FIXTURES / f"proof{n}.json").write_bytes(
            proof.save_script(bundle.refutation)
        )

    print(f"wrote fixtures to {FIXTURES}")


if __name__ == "__main__":
    main()
