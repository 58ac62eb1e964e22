"""Regenerate the seeded DSL fixtures under tests/fixtures.

    python3 scripts/make_fixtures.py [--seed 20]
"""
from __future__ import annotations

import argparse
from fractions import Fraction
from pathlib import Path

import numpy as np

from tlcat.diagram import B, Decoration, Diagram, Strand, T
from tlcat.dsl import serialize

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
NAMES = ("sigma1", "sigma2", "sigma3", "G", "H")
MARKERS = ("plain", "transposed", "adjoint", "conjugate")


def matrix_file(ops: dict[str, np.ndarray], d: int) -> str:
    lines = [f"dim {d}"]
    for name, m in ops.items():
        lines.append(f"op {name}")
        lines.extend(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) for row in m)
    return "\n".join(lines) + "\n"


def random_fixture(rng: np.random.Generator) -> Diagram:
    # 3 top, 3 bottom, 2 decorations per strand, one loop
    pts = [T(i) for i in range(3)] + [B(i) for i in range(3)]
    order = rng.permutation(len(pts))
    strands = []
    for a, b in zip(order[::2], order[1::2]):
        p, q = sorted((pts[a], pts[b]), key=lambda e: e.key)
        decos = tuple(
            Decoration(Fraction(k, 3), str(rng.choice(NAMES)), str(rng.choice(MARKERS))) for k in (1, 2)
        )
        strands.append(Strand(p, q, decos))
    diag = Diagram(2, 3, 3, tuple(strands))
    natural = diag.count("cup") + diag.count("cap")
    return Diagram(2, 3, 3, tuple(strands), (), complex(0.5, -0.25), natural)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    ops = {n: np.round(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)), 6) for n in ("G", "H")}
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "ops.txt").write_text(matrix_file(ops, 2))
    (OUT / "random-fixture.dsl").write_text("# seeded fixture, see scripts/make_fixtures.py\n" + serialize(random_fixture(rng)) + "\n")
    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
