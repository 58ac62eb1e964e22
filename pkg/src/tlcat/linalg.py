"""Dense complex linear algebra used as the ground-truth oracle.

Matrices are plain ``numpy`` complex arrays.  Kets are 1-d arrays.  Basis
ordering follows the right-factor-fast convention, so ``|01>`` is index 1
for qubits and ``tensor(a, b)[i*b.rows + k, j*b.cols + l] = a[i, j] b[k, l]``.
Every function returns a fresh array and never mutates its inputs.
"""
from __future__ import annotations

import os
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-10


class DimensionMismatchError(ValueError):
    """Raised when operand shapes are incompatible."""


def default_tol() -> float:
    """Comparison tolerance, overridable through ``TLCAT_TOL``."""
    raw = os.environ.get("TLCAT_TOL")
    if raw is None:
        return DEFAULT_TOL
    tol = float(raw)
    if not tol > 0:
        raise ValueError(f"TLCAT_TOL must be positive, got {raw!r}")
    return tol


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_state(v) -> np.ndarray:
    s = np.array(v, dtype=complex)
    if s.ndim != 1:
        raise DimensionMismatchError(f"expected a state vector, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise ValueError("amplitudes must be finite")
    return s


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the right factor as the fast index.

    Works for matrices and for kets (1-d arrays) alike.
    """
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_all(factors: Iterable) -> np.ndarray:
    factors = list(factors)
    if not factors:
        return np.ones((1, 1), dtype=complex)
    return reduce(tensor, factors)


def conjugation(a, kind: str) -> np.ndarray:
    """Return the transpose, adjoint or complex conjugate of ``a``."""
    m = np.asarray(a, dtype=complex)
    if kind == "transpose":
        return m.T.copy()
    if kind == "adjoint":
        return m.conj().T.copy()
    if kind == "conjugate":
        return m.conj()
    raise ValueError(f"unknown conjugation kind {kind!r}")


def partial_trace(a, dims: Sequence[int], traced: Iterable[int]) -> np.ndarray:
    """Trace out the subsystems at the (0-based) positions in ``traced``.

    Tracing every subsystem gives a 1x1 matrix holding the full trace.
    """
    m = as_matrix(a)
    dims = [int(x) for x in dims]
    if any(x < 1 for x in dims):
        raise ValueError("subsystem dimensions must be positive")
    total = int(np.prod(dims)) if dims else 1
    if m.shape != (total, total):
        raise DimensionMismatchError(
            f"matrix of shape {m.shape} does not match subsystem dims {dims}"
        )
    traced = sorted(set(traced))
    if any(not 0 <= t < len(dims) for t in traced):
        raise ValueError(f"traced positions {traced} out of range for {len(dims)} subsystems")
    n = len(dims)
    t = m.reshape(dims + dims)
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    rows, cols = letters[:n], letters[n:]
    for i in traced:
        cols[i] = rows[i]
    keep = [i for i in range(n) if i not in traced]
    out = [rows[i] for i in keep] + [cols[i] for i in keep]
    res = np.einsum("".join(rows + cols) + "->" + "".join(out), t)
    kd = int(np.prod([dims[i] for i in keep])) if keep else 1
    return np.asarray(res).reshape(kd, kd)


def inner(phi, psi) -> complex:
    """<phi|psi>, antilinear in the first slot."""
    phi, psi = as_state(phi), as_state(psi)
    if phi.shape != psi.shape:
        raise DimensionMismatchError(f"inner product of dims {phi.size} and {psi.size}")
    return complex(np.vdot(phi, psi))


def outer(phi, psi) -> np.ndarray:
    """|phi><psi|."""
    phi, psi = as_state(phi), as_state(psi)
    return np.outer(phi, psi.conj())


def apply(m, psi) -> np.ndarray:
    m, psi = as_matrix(m), as_state(psi)
    if m.shape[1] != psi.size:
        raise DimensionMismatchError(f"cannot apply {m.shape} matrix to dim-{psi.size} state")
    return m @ psi


def basis_state(d: int, *digits: int) -> np.ndarray:
    """Computational basis ket ``|digits>`` on ``len(digits)`` qudits."""
    idx = 0
    for x in digits:
        if not 0 <= x < d:
            raise ValueError(f"digit {x} out of range for d={d}")
        idx = idx * d + x
    v = np.zeros(d ** len(digits), dtype=complex)
    v[idx] = 1
    return v


def max_deviation(a, b) -> float:
    """Entrywise max-modulus difference; shapes must agree."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"cannot compare shapes {a.shape} and {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def is_unitary(u, tol: float = DEFAULT_TOL) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return max_deviation(u.conj().T @ u, identity(u.shape[0])) <= tol


def phase_fidelity(phi, psi) -> float:
    """|<phi|psi>| for normalized states; 1 means equal up to global phase."""
    return abs(inner(phi, psi))
