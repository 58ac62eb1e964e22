"""Shared fixtures: random decorated diagrams and index-level oracles."""
from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from tlcat.diagram import B, Decoration, Diagram, Endpoint, Letter, Strand, T

FIXTURES = Path(__file__).parent / "fixtures"
LABELS = ("A", "C", "M")
MARKERS = ("plain", "transposed", "adjoint", "conjugate")

# criterion number -> one-line verdict, filled by test_acceptance
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria (tol 1e-10)")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])


def random_ops(d: int, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """General (non-unitary, non-symmetric) matrices so marker slips show up."""
    return {lab: rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)) for lab in LABELS}


def random_matching(endpoints: list[Endpoint], rng) -> list[tuple[Endpoint, Endpoint]]:
    pts = list(endpoints)
    rng.shuffle(pts)
    pairs = []
    for a, b in zip(pts[::2], pts[1::2]):
        pairs.append((a, b) if a.key < b.key else (b, a))
    return pairs


def random_decorations(rng, max_decos: int = 2) -> tuple[Decoration, ...]:
    k = int(rng.integers(0, max_decos + 1))
    denominators = (3, 4, 5, 7, 8)
    positions = set()
    while len(positions) < k:
        q = int(rng.choice(denominators))
        positions.add(Fraction(int(rng.integers(1, q)), q))
    return tuple(
        Decoration(p, str(rng.choice(LABELS)), str(rng.choice(MARKERS))) for p in sorted(positions)
    )


def random_diagram(rng, d: int | None = None, max_wires: int = 4, loops: bool = True) -> Diagram:
    d = int(rng.choice([2, 3])) if d is None else d
    while True:
        m, n = int(rng.integers(0, max_wires + 1)), int(rng.integers(0, max_wires + 1))
        if (m + n) % 2 == 0 and m + n > 0:
            break
    eps = [T(i) for i in range(m)] + [B(i) for i in range(n)]
    strands = tuple(Strand(a, b, random_decorations(rng)) for a, b in random_matching(eps, rng))
    loop_words = ()
    if loops and rng.random() < 0.3:
        loop_words = (tuple(Letter(str(rng.choice(LABELS)), str(rng.choice(MARKERS))) for _ in range(int(rng.integers(0, 3)))),)
    diag = Diagram(d, m, n, strands, loop_words)
    natural = diag.count("cup") + diag.count("cap")
    pref = complex(rng.normal(), rng.normal()) if rng.random() < 0.5 else 1.0
    return Diagram(d, m, n, strands, loop_words, pref, natural)


def _mark(m: np.ndarray, marker: str) -> np.ndarray:
    return {"plain": m, "transposed": m.T, "adjoint": m.conj().T, "conjugate": m.conj()}[marker]


def _chain(decos, ops, order):
    """Product of decoration matrices; ``order`` lists them from leftmost factor."""
    d = next(iter(ops.values())).shape[0]
    out = np.eye(d, dtype=complex)
    for x in order(decos):
        out = out @ _mark(ops[x.label], x.marker)
    return out


def strand_tensor(s: Strand, ops, d) -> np.ndarray:
    """Strand value from the physical picture, independent of the traversal words.

    Operators act with time running upward: on a through strand the lowest
    decoration acts first; on a cup the state is born at the bottom of the
    bend and legs are acted on upward from there; a cap absorbs its legs
    after they rise from the bottom boundary.
    """
    inc = lambda xs: sorted(xs, key=lambda x: x.position)  # noqa: E731
    dec = lambda xs: sorted(xs, key=lambda x: -x.position)  # noqa: E731
    left = [x for x in s.decorations if x.position <= Fraction(1, 2)]
    right = [x for x in s.decorations if x.position > Fraction(1, 2)]
    eye = np.eye(d)
    omega = eye.reshape(d * d)  # sum_i |ii>, unnormalized
    if s.kind == "through":
        return _chain(s.decorations, ops, inc)
    if s.kind == "cup":
        lmat = _chain(left, ops, inc)  # nearest the bend acts first
        rmat = _chain(right, ops, dec)
        return (np.kron(lmat, rmat) @ omega).reshape(d, d)
    lmat = _chain(left, ops, dec)  # rising from B_i, the smallest p acts first
    rmat = _chain(right, ops, inc)
    return (omega @ np.kron(lmat, rmat)).reshape(d, d)


def oracle_evaluate(diag: Diagram, ops) -> np.ndarray:
    """Brute-force sum over every boundary index assignment."""
    d, m, n = diag.d, diag.top, diag.bottom
    tensors = [(s, strand_tensor(s, ops, d)) for s in diag.strands]
    scalar = diag.prefactor * d ** (-diag.k / 2)
    for loop in diag.loops:
        w = np.eye(d, dtype=complex)
        for x in loop:
            w = w @ _mark(ops[x.label], x.marker)
        scalar *= np.trace(w)
    out = np.zeros((d**m, d**n), dtype=complex)
    for idx in itertools.product(range(d), repeat=m + n):
        val = scalar
        pos = {T(i): idx[i] for i in range(m)}
        pos.update({B(j): idx[m + j] for j in range(n)})
        for s, t in tensors:
            val *= t[pos[s.tail], pos[s.head]]
            if val == 0:
                break
        row = sum(idx[i] * d ** (m - 1 - i) for i in range(m))
        col = sum(idx[m + j] * d ** (n - 1 - j) for j in range(n))
        out[row, col] = val
    return out


def crossing_count(diag: Diagram) -> int:
    """Pairs of chords that cross on the boundary circle T0..T(m-1), B(n-1)..B0."""
    order = {T(i): i for i in range(diag.top)}
    for j in range(diag.bottom):
        order[B(j)] = diag.top + diag.bottom - 1 - j
    chords = [tuple(sorted((order[s.tail], order[s.head]))) for s in diag.strands]
    count = 0
    for (a, b), (c, e) in itertools.combinations(chords, 2):
        if (a < c < b) != (a < e < b):
            count += 1
    return count


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
