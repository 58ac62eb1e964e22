"""Named operators and states, plus checkers for braid/TL/Brauer presentations.

Site indices in the generator constructors are 1-based (``e_1`` acts on
sites 1 and 2), as is customary for algebra generators.  Everything else in
the package counts from 0.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple

import numpy as np

from .linalg import (
    DimensionMismatchError,
    as_matrix,
    default_tol,
    identity,
    max_deviation,
    tensor,
    tensor_all,
)
from .report import RelationReport

SQRT2 = math.sqrt(2.0)


class InvalidIndexError(ValueError):
    """Generator index outside 1..n-1."""


class SingularMatrixError(ValueError):
    pass


class PauliBell(NamedTuple):
    sigma1: np.ndarray
    sigma2: np.ndarray
    sigma3: np.ndarray
    B: np.ndarray
    B_inv: np.ndarray
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    psi_plus: np.ndarray
    psi_minus: np.ndarray


def pauli_and_bell() -> PauliBell:
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    b = np.array(
        [[1, 0, 0, 1], [0, 1, -1, 0], [0, 1, 1, 0], [-1, 0, 0, 1]], dtype=complex
    ) / SQRT2
    r = 1 / SQRT2
    return PauliBell(
        s1,
        s2,
        s3,
        b,
        b.T.copy(),
        np.array([r, 0, 0, r], dtype=complex),
        np.array([r, 0, 0, -r], dtype=complex),
        np.array([0, r, r, 0], dtype=complex),
        np.array([0, r, -r, 0], dtype=complex),
    )


def swap(d: int) -> np.ndarray:
    """P = sum_ij |i j><j i|."""
    p = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            p[i * d + j, j * d + i] = 1
    return p


def omega_state(d: int) -> np.ndarray:
    """|Omega> = d^(-1/2) sum_i |i i>."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1 / math.sqrt(d)
    return v


def omega(d: int) -> np.ndarray:
    v = omega_state(d)
    return np.outer(v, v.conj())


def _site_count(op: np.ndarray, d: int) -> int:
    k = round(math.log(op.shape[0], d)) if op.shape[0] > 1 else 0
    if op.shape != (d**k, d**k):
        raise DimensionMismatchError(f"operator of shape {op.shape} is not a {d}-qudit operator")
    return k


def pad(op, d: int, n: int, i: int) -> np.ndarray:
    """Embed a k-site operator on sites i..i+k-1 (1-based) of n sites."""
    op = as_matrix(op)
    k = _site_count(op, d)
    if not 1 <= i <= n - k + 1:
        raise InvalidIndexError(f"cannot place a {k}-site operator at site {i} of {n}")
    return tensor_all([identity(d ** (i - 1)), op, identity(d ** (n - i - k + 1))])


def tl_generator(d: int, n: int, i: int) -> np.ndarray:
    """e_i = 1^(i-1) (x) omega (x) 1^(n-i-1)."""
    if not 1 <= i <= n - 1:
        raise InvalidIndexError(f"TL generator index {i} outside 1..{n - 1}")
    return pad(omega(d), d, n, i)


class PermutationOmega(NamedTuple):
    P: np.ndarray
    Omega: np.ndarray
    omega: np.ndarray
    tl_generator: Callable[[int, int], np.ndarray]


def permutation_and_omega(d: int) -> PermutationOmega:
    if d < 2:
        raise ValueError("d must be at least 2")
    return PermutationOmega(
        swap(d), omega_state(d), omega(d), lambda n, i: tl_generator(d, n, i)
    )


def weyl_xz(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift X|k> = |k+1> and clock Z|k> = e^(2 pi i k/d)|k>."""
    x = np.roll(identity(d), 1, axis=0)
    z = np.diag([cmath.exp(2j * math.pi * k / d) for k in range(d)])
    return x, z


@dataclass(frozen=True)
class UnitaryBasis:
    """d^2 unitaries with tr(U_n^dag U_m) = d delta_nm and U_0 = 1."""

    d: int
    elements: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    identity_index: int = 0

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, n: int) -> np.ndarray:
        return self.elements[n]

    def omega_n(self, n: int) -> np.ndarray:
        """|Omega_n> = (U_n (x) 1)|Omega>."""
        return tensor(self.elements[n], identity(self.d)) @ omega_state(self.d)

    def projector(self, n: int) -> np.ndarray:
        v = self.omega_n(n)
        return np.outer(v, v.conj())

    def gram(self) -> np.ndarray:
        """Hilbert-Schmidt table tr(U_n^dag U_m)."""
        k = len(self.elements)
        g = np.empty((k, k), dtype=complex)
        for a, u in enumerate(self.elements):
            for b, v in enumerate(self.elements):
                g[a, b] = np.trace(u.conj().T @ v)
        return g


def weyl_basis(d: int) -> UnitaryBasis:
    if d < 2:
        raise ValueError("d must be at least 2")
    if d == 2:
        pb = pauli_and_bell()
        return UnitaryBasis(
            2, (identity(2), pb.sigma1, pb.sigma2, pb.sigma3), ("id", "sigma1", "sigma2", "sigma3")
        )
    x, z = weyl_xz(d)
    els, labels = [], []
    for a in range(d):
        for b in range(d):
            els.append(np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b))
            labels.append(f"X{a}Z{b}")
    return UnitaryBasis(d, tuple(els), tuple(labels))


# ---------------------------------------------------------------------------
# presentation checks

_KINDS = ("braid", "virtual_braid", "tl", "brauer")


def _generator_family(g, d: int, n: int) -> list[np.ndarray]:
    """Per-index generators g_1..g_{n-1} as full n-site matrices."""
    if isinstance(g, (list, tuple)):
        fam = [as_matrix(x) for x in g]
        if len(fam) != n - 1:
            raise DimensionMismatchError(f"expected {n - 1} generators, got {len(fam)}")
        for x in fam:
            if x.shape != (d**n, d**n):
                raise DimensionMismatchError(f"generator shape {x.shape} does not act on {n} sites")
        return fam
    g = as_matrix(g)
    if g.shape != (d * d, d * d):
        raise DimensionMismatchError(f"two-site generator must be {d * d}x{d * d}, got {g.shape}")
    return [pad(g, d, n, i) for i in range(1, n)]


def _infer_d(generators: Mapping[str, object]) -> int:
    for g in generators.values():
        if isinstance(g, (list, tuple)):
            continue
        m = as_matrix(g)
        d = round(math.sqrt(m.shape[0]))
        if d * d != m.shape[0] or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"generator of shape {m.shape} does not act on two equal sites")
        return d
    raise ValueError("pass d explicitly when generators are given as explicit families")


def _required(kind: str) -> tuple[str, ...]:
    return {"braid": ("b",), "virtual_braid": ("b", "v"), "tl": ("e",), "brauer": ("e", "v")}[kind]


def _relations(kind, fam, n, lam, hermitian):
    """Yield (name, lhs, rhs) for every neighbour relation on n strands."""
    dev = []
    idx = range(1, n)

    def g(name, i):
        return fam[name][i - 1]

    def symmetric_group(name):
        eye = np.eye(g(name, 1).shape[0])
        for i in idx:
            dev.append((f"{name}{i}^2=1", g(name, i) @ g(name, i), eye))
        for i in range(1, n - 1):
            dev.append((
                f"{name}{i}{name}{i + 1}{name}{i}={name}{i + 1}{name}{i}{name}{i + 1}",
                g(name, i) @ g(name, i + 1) @ g(name, i),
                g(name, i + 1) @ g(name, i) @ g(name, i + 1),
            ))

    if kind in ("braid", "virtual_braid"):
        for i in range(1, n - 1):
            dev.append((
                f"b{i}b{i + 1}b{i}=b{i + 1}b{i}b{i + 1}",
                g("b", i) @ g("b", i + 1) @ g("b", i),
                g("b", i + 1) @ g("b", i) @ g("b", i + 1),
            ))
    if kind == "virtual_braid":
        symmetric_group("v")
        for i in range(1, n - 1):
            dev.append((
                f"b{i + 1}v{i}v{i + 1}=v{i}v{i + 1}b{i}",
                g("b", i + 1) @ g("v", i) @ g("v", i + 1),
                g("v", i) @ g("v", i + 1) @ g("b", i),
            ))
    if kind in ("tl", "brauer"):
        for i in idx:
            e = g("e", i)
            dev.append((f"e{i}^2=e{i}", e @ e, e))
            if hermitian:
                dev.append((f"e{i}^dag=e{i}", e.conj().T, e))
        for i in idx:
            for j in (i - 1, i + 1):
                if 1 <= j < n:
                    dev.append((
                        f"e{i}e{j}e{i}=lam^-2 e{i}",
                        g("e", i) @ g("e", j) @ g("e", i),
                        g("e", i) / lam**2,
                    ))
    if kind == "brauer":
        symmetric_group("v")
        for i in idx:
            e, v = g("e", i), g("v", i)
            dev.append((f"e{i}v{i}=e{i}", e @ v, e))
            dev.append((f"v{i}e{i}=e{i}", v @ e, e))
            for j in (i - 1, i + 1):
                if 1 <= j < n:
                    ee = lam * g("e", i) @ g("e", j)
                    dev.append((f"v{j}v{i}e{j}=lam e{i}e{j}", g("v", j) @ v @ g("e", j), ee))
                    dev.append((f"e{i}v{j}v{i}=lam e{i}e{j}", e @ g("v", j) @ v, ee))
    return dev


def _far_pairs(kind):
    return {
        "braid": [("b", "b")],
        "virtual_braid": [("b", "b"), ("v", "v"), ("b", "v"), ("v", "b")],
        "tl": [("e", "e")],
        "brauer": [("e", "e"), ("v", "v"), ("e", "v"), ("v", "e")],
    }[kind]


def check_relations(
    kind: str,
    generators: Mapping[str, object],
    n: int = 3,
    lam: float | complex | None = None,
    tol: float | None = None,
    *,
    d: int | None = None,
    hermitian: bool = True,
) -> RelationReport:
    """Check the defining relations of ``kind`` on ``n`` strands.

    ``generators`` maps ``b``/``v``/``e`` to either a two-site matrix (padded
    to every position) or an explicit list of ``n - 1`` full-size matrices.
    For padded generators far commutativity is also spot-checked on four
    strands.  ``hermitian=False`` drops the e_i^dag = e_i axiom, needed for
    non-Hermitian rank-one projectors.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown relation kind {kind!r}; expected one of {_KINDS}")
    tol = default_tol() if tol is None else tol
    missing = [k for k in _required(kind) if k not in generators]
    if missing:
        raise ValueError(f"{kind} relations need generators {missing}")
    if kind in ("tl", "brauer") and lam is None:
        raise ValueError("loop parameter lam is required for tl/brauer")
    if n < 2:
        raise ValueError("need at least two strands")
    d = _infer_d(generators) if d is None else d
    fam = {k: _generator_family(generators[k], d, n) for k in _required(kind)}
    rel = _relations(kind, fam, n, lam, hermitian)
    details = [(name, max_deviation(l, r)) for name, l, r in rel]

    padded = all(not isinstance(generators[k], (list, tuple)) for k in _required(kind))
    if padded:
        n_far = max(n, 4)
        far = {k: _generator_family(generators[k], d, n_far) for k in _required(kind)}
        for a, b in _far_pairs(kind):
            for i in range(1, n_far):
                for j in range(i + 2, n_far):
                    x, y = far[a][i - 1], far[b][j - 1]
                    details.append((f"{a}{i}{b}{j}={b}{j}{a}{i}", max_deviation(x @ y, y @ x)))
    elif n >= 4:
        for a, b in _far_pairs(kind):
            for i in range(1, n):
                for j in range(i + 2, n):
                    x, y = fam[a][i - 1], fam[b][j - 1]
                    details.append((f"{a}{i}{b}{j}={b}{j}{a}{i}", max_deviation(x @ y, y @ x)))
    return RelationReport.from_details(kind, details, tol)


# ---------------------------------------------------------------------------
# state model and braid teleportation


def tl_loop_parameter(e, d: int, tol: float | None = None) -> float | None:
    """Loop parameter lam of a TL idempotent, or None for e = 0.

    Raises ValueError when e is not a TL generator.
    """
    tol = default_tol() if tol is None else tol
    e = as_matrix(e)
    if e.shape != (d * d, d * d):
        raise DimensionMismatchError(f"e must be {d * d}x{d * d}")
    if max_deviation(e, np.zeros_like(e)) <= tol:
        return None
    if max_deviation(e @ e, e) > tol:
        raise ValueError("e is not idempotent")
    e1, e2 = pad(e, d, 3, 1), pad(e, d, 3, 2)
    lhs = e1 @ e2 @ e1
    k = np.unravel_index(np.argmax(np.abs(e1)), e1.shape)
    mu = lhs[k] / e1[k]
    if max_deviation(lhs, mu * e1) > tol or abs(mu.imag) > tol or mu.real <= tol:
        raise ValueError("e fails e1 e2 e1 = lam^-2 e1 for every lam")
    return float(1 / math.sqrt(mu.real))


def braid_from_tl(e, A: complex, n: int = 3, *, d: int | None = None, tol: float | None = None):
    """Kauffman-bracket braid b = A 1 + A^-1 U with U = lam e.

    The unnormalized generator U (U^2 = lam U, U1 U2 U1 = U1) is the one the
    bracket works with; the braid relation then holds iff A^2 + A^-2 = -lam.
    Returns ``(b, report)`` where the report covers the braid relation on
    ``n`` strands.
    """
    tol = default_tol() if tol is None else tol
    if A == 0:
        raise ValueError("A must be nonzero")
    e = as_matrix(e)
    d = round(math.sqrt(e.shape[0])) if d is None else d
    lam = tl_loop_parameter(e, d, tol)
    u = e if lam is None else lam * e
    b = A * identity(d * d) + u / A
    return b, check_relations("braid", {"b": b}, n=n, tol=tol, d=d)


def loop_constraint(A: complex, lam: float) -> float:
    """|A^2 + A^-2 + lam|, zero for the bracket's loop value."""
    return abs(A * A + 1 / (A * A) + lam)


def braid_teleportation_op(b, d: int) -> np.ndarray:
    """(b^-1 (x) 1)(1 (x) b) on three sites."""
    b = as_matrix(b)
    if b.shape != (d * d, d * d):
        raise DimensionMismatchError(f"b must be {d * d}x{d * d}")
    if np.linalg.cond(b) > 1e12:
        raise SingularMatrixError("b is singular")
    return tensor(np.linalg.inv(b), identity(d)) @ tensor(identity(d), b)
