"""Rewriting decorated diagrams to a normal form.

Three moves, each preserving the evaluated matrix:

(a) loop elimination    a closed component with word W becomes tr(W)
                        (an empty loop becomes d);
(b) straightening       every cup/cap pair that vanished while composing
                        (zigzags, e_i e_j e_i) leaves two surplus units in
                        the exponent k, which are traded for a factor 1/d;
(c) canonical layout    cup and cap decorations slide onto the tail leg and
                        all decorations are evenly spaced.

Each step strictly lowers (loops, surplus k, misplaced decorations) in
lexicographic order, so the loop below terminates.
"""
from __future__ import annotations

from dataclasses import replace
from typing import Mapping

import numpy as np

from .diagram import Diagram, canonical
from .evaluate import loop_trace


def eliminate_loops(diag: Diagram, ops: Mapping[str, np.ndarray] | None = None) -> Diagram:
    """Absorb closed loops into the prefactor.

    Loops whose word uses labels missing from ``ops`` are kept.
    """
    ops = ops or {}
    factor = 1.0 + 0j
    kept = []
    for loop in diag.loops:
        if all(w.label in ops for w in loop):
            factor *= loop_trace(loop, ops, diag.d)
        else:
            kept.append(loop)
    return replace(diag, loops=tuple(kept), prefactor=diag.prefactor * factor)


def surplus(diag: Diagram) -> int:
    return diag.k - diag.count("cup") - diag.count("cap")


def straighten(diag: Diagram) -> Diagram:
    """Trade each surplus pair of normalization units for 1/d."""
    excess = surplus(diag)
    pairs = excess // 2 if excess >= 2 else 0
    if not pairs:
        return diag
    return replace(diag, k=diag.k - 2 * pairs, prefactor=diag.prefactor / diag.d**pairs)


def termination_measure(diag: Diagram) -> tuple[int, int, int]:
    """(loops, reducible surplus pairs, layout not canonical) -- decreases per step."""
    excess = surplus(diag)
    return (len(diag.loops), excess // 2 if excess >= 2 else 0, int(canonical(diag) != diag))


def reduce_to_normal_form(
    diag: Diagram, ops: Mapping[str, np.ndarray] | None = None, order: str = "lsc"
) -> Diagram:
    """Apply loop elimination (l), straightening (s) and layout (c) to a fixed point.

    ``order`` only permutes the rule priorities; every order reaches a
    diagram with the same evaluation.
    """
    steps = {"l": lambda x: eliminate_loops(x, ops), "s": straighten, "c": canonical}
    if sorted(order) != ["c", "l", "s"]:
        raise ValueError("order must be a permutation of 'lsc'")
    cur = diag
    while True:
        nxt = cur
        for ch in order:
            nxt = steps[ch](nxt)
        if nxt == cur:
            return cur
        cur = nxt
