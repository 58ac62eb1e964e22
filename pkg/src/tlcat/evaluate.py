"""Contract a diagram to a dense matrix against an explicit operator table."""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .diagram import Diagram, DiagramError, Letter
from .linalg import DimensionMismatchError


class UnknownOperatorError(LookupError):
    pass


def marker_matrix(m: np.ndarray, marker: str) -> np.ndarray:
    if marker == "plain":
        return m
    if marker == "transposed":
        return m.T
    if marker == "adjoint":
        return m.conj().T
    if marker == "conjugate":
        return m.conj()
    raise DiagramError(f"unknown marker {marker!r}")


def lookup(ops: Mapping[str, np.ndarray], label: str, d: int) -> np.ndarray:
    if label not in ops:
        raise UnknownOperatorError(f"operator {label!r} not in the operator table")
    m = np.asarray(ops[label], dtype=complex)
    if m.shape != (d, d):
        raise DimensionMismatchError(f"operator {label!r} has shape {m.shape}, expected {d}x{d}")
    return m


def word_matrix(word: Sequence[Letter], ops: Mapping[str, np.ndarray], d: int) -> np.ndarray:
    """Product of the letters in reading order."""
    out = np.eye(d, dtype=complex)
    for w in word:
        out = out @ marker_matrix(lookup(ops, w.label, d), w.marker)
    return out


def loop_trace(word: Sequence[Letter], ops: Mapping[str, np.ndarray], d: int) -> complex:
    return complex(np.trace(word_matrix(word, ops, d)))


def scalar_factor(diag: Diagram, ops: Mapping[str, np.ndarray] | None = None) -> complex:
    """prefactor * d^(-k/2) * product of loop traces."""
    ops = ops or {}
    val = diag.prefactor * diag.d ** (-diag.k / 2)
    for loop in diag.loops:
        val *= loop_trace(loop, ops, diag.d)
    return complex(val)


def evaluate(diag: Diagram, ops: Mapping[str, np.ndarray] | None = None) -> np.ndarray:
    """d^top x d^bottom matrix; top legs are rows, bottom legs columns."""
    ops = ops or {}
    d, m, n = diag.d, diag.top, diag.bottom
    slot = {}
    for i in range(m):
        slot[("T", i)] = i
    for i in range(n):
        slot[("B", i)] = m + i
    operands = []
    for s in diag.strands:
        operands.append(word_matrix(s.word(), ops, d))
        operands.append([slot[s.tail], slot[s.head]])
    if operands:
        t = np.einsum(*operands, list(range(m + n)))
    else:
        t = np.ones((), dtype=complex)
    return scalar_factor(diag, ops) * np.asarray(t, dtype=complex).reshape(d**m, d**n)


def evaluate_sum(terms: Sequence[Diagram], ops: Mapping[str, np.ndarray] | None = None) -> np.ndarray:
    if not terms:
        raise DiagramError("empty diagram sum")
    out = evaluate(terms[0], ops)
    for t in terms[1:]:
        out = out + evaluate(t, ops)
    return out
