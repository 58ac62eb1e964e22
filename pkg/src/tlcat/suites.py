"""Named verification suites: lists of VerificationReports keyed by check_id."""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from . import diagram as dg
from . import protocols as pr
from .evaluate import evaluate
from .linalg import (
    basis_state,
    default_tol,
    identity,
    is_unitary,
    max_deviation,
    tensor,
)
from .operators import (
    braid_from_tl,
    braid_teleportation_op,
    check_relations,
    loop_constraint,
    omega,
    pad,
    pauli_and_bell,
    swap,
    weyl_xz,
)
from .report import RelationReport, VerificationReport
from .rewrite import reduce_to_normal_form

SUITES = ("braid", "virtual", "tl", "brauer", "teleport", "dense", "swap", "gates", "multipartite", "flow")
QUBIT_ONLY = ("gates", "multipartite")


class SuiteConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    d: int = 2
    tol: float = 1e-10
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.suite not in SUITES + ("all",):
            raise SuiteConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES + ('all',))}")
        if self.d < 2:
            raise SuiteConfigError("--dim must be at least 2")
        if not self.tol > 0:
            raise SuiteConfigError("--tol must be positive")
        if self.jobs < 1:
            raise SuiteConfigError("--jobs must be at least 1")
        if self.suite in QUBIT_ONLY and self.d != 2:
            raise SuiteConfigError(f"suite {self.suite!r} is defined for --dim 2 only")


def _from_relation(
    rel: RelationReport,
    check_id: str,
    lhs: str,
    rhs: str,
    d: int,
    diagram_deviation: float | None = None,
    details: Mapping | None = None,
) -> VerificationReport:
    info = {"relations": {name: dev for name, dev in rel.details}}
    info.update(details or {})
    return VerificationReport.build(
        check_id,
        lhs,
        rhs,
        [rel.max_deviation],
        rel.tolerance,
        diagram_deviation=diagram_deviation,
        d=d,
        details=info,
    )


def _single(check_id, lhs, rhs, pairs, tol, d, **kw) -> VerificationReport:
    """Report from named (lhs, rhs) matrix pairs."""
    details = {name: max_deviation(a, b) for name, a, b in pairs}
    return VerificationReport.build(check_id, lhs, rhs, list(details.values()), tol, d=d, details=details, **kw)


# ---------------------------------------------------------------------------
# diagram-level presentation checks


def _padded(d: int, n: int, i: int, piece: dg.Diagram) -> dg.Diagram:
    """Place a two-strand diagram on strands i, i+1 (1-based) of n."""
    parts = []
    if i > 1:
        parts.append(dg.identity_diagram(d, i - 1))
    parts.append(piece)
    if n - i - 1 > 0:
        parts.append(dg.identity_diagram(d, n - i - 1))
    return dg.tensor_all(parts, d)


def diagram_relations(
    kind: str,
    pieces: Mapping[str, dg.Diagram],
    d: int,
    lam: float,
    ops: Mapping[str, np.ndarray] | None = None,
    n: int = 3,
    structural: bool = True,
    tol: float | None = None,
):
    """Diagram counterpart of check_relations for tl and brauer.

    Both sides of every relation are composed as diagrams and reduced.
    Returns (max deviation, per-relation details).  With ``structural`` the
    two normal forms must also coincide as data, not only numerically.
    """
    tol = default_tol() if tol is None else tol
    ops = dict(ops or {})

    def g(name, i, m=n):
        return _padded(d, m, i, pieces[name])

    rels = []
    for i in range(1, n):
        e = g("e", i)
        rels.append((f"e{i}^2=e{i}", dg.compose(e, e), e))
        rels.append((f"e{i}^dag=e{i}", dg.dagger(e), e))
        for j in (i - 1, i + 1):
            if 1 <= j < n:
                rels.append((f"e{i}e{j}e{i}=lam^-2 e{i}", dg.compose_all([e, g("e", j), e]), e.scaled(lam**-2)))
    if kind == "brauer":
        for i in range(1, n):
            e, v = g("e", i), g("v", i)
            rels.append((f"v{i}^2=1", dg.compose(v, v), dg.identity_diagram(d, n)))
            rels.append((f"e{i}v{i}=e{i}", dg.compose(e, v), e))
            rels.append((f"v{i}e{i}=e{i}", dg.compose(v, e), e))
            for j in (i - 1, i + 1):
                if 1 <= j < n:
                    ee = dg.compose(e, g("e", j)).scaled(lam)
                    rels.append((f"v{j}v{i}e{j}=lam e{i}e{j}", dg.compose_all([g("v", j), v, g("e", j)]), ee))
                    rels.append((f"e{i}v{j}v{i}=lam e{i}e{j}", dg.compose_all([e, g("v", j), v]), ee))
    far = [("e", "e")] + ([("e", "v"), ("v", "e"), ("v", "v")] if kind == "brauer" else [])
    for a, b in far:
        x, y = g(a, 1, 4), g(b, 3, 4)
        rels.append((f"{a}1{b}3={b}3{a}1", dg.compose(x, y), dg.compose(y, x)))

    details = {}
    for name, lhs, rhs in rels:
        rl, rr = reduce_to_normal_form(lhs, ops), reduce_to_normal_form(rhs, ops)
        dev = max_deviation(evaluate(rl, ops), evaluate(rr, ops))
        if structural and not dg.structurally_close(rl, rr, tol):
            dev = math.inf
        details[name] = max(details.get(name, 0.0), dev)
    return max(details.values()), details


# ---------------------------------------------------------------------------
# suites


def braid_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    d, tol = cfg.d, cfg.tol
    out = []
    if d == 2:
        pb = pauli_and_bell()
        b, I2, I4 = pb.B, identity(2), identity(4)
        b2 = b @ b
        s12 = tensor(pb.sigma1, pb.sigma2)
        out.append(_single("braid.bell.algebra", "B", "closed forms", [
            ("B^dag B=1", b.conj().T @ b, I4),
            ("B^-1=B^T", np.linalg.inv(b), b.T),
            ("B B^-1=1", b @ pb.B_inv, I4),
            ("B^2=i s1s2", b2, 1j * s12),
            ("B^4=-1", np.linalg.matrix_power(b, 4), -I4),
            ("B^8=1", np.linalg.matrix_power(b, 8), I4),
            ("B=exp(i pi/4 s1s2)", b, math.cos(math.pi / 4) * I4 + 1j * math.sin(math.pi / 4) * s12),
            ("B=(1+B^2)/sqrt2", b, (I4 + b2) / math.sqrt(2)),
        ], tol, 2))
        laws = [
            ("I:phi+=B|11>", pb.phi_plus, b @ basis_state(2, 1, 1)),
            ("I:phi-=B|00>", pb.phi_minus, b @ basis_state(2, 0, 0)),
            ("I:psi+=B|01>", pb.psi_plus, b @ basis_state(2, 0, 1)),
            ("I:psi-=-B|10>", pb.psi_minus, -b @ basis_state(2, 1, 0)),
            ("II:phi+=B^T|00>", pb.phi_plus, b.T @ basis_state(2, 0, 0)),
            ("II:phi-=-B^T|11>", pb.phi_minus, -b.T @ basis_state(2, 1, 1)),
            ("II:psi+=B^T|10>", pb.psi_plus, b.T @ basis_state(2, 1, 0)),
            ("II:psi-=B^T|01>", pb.psi_minus, b.T @ basis_state(2, 0, 1)),
        ]
        out.append(_single("braid.bell.transformation_laws", "Bell states", "B and B^T on |ij>", laws, tol, 2))
        rel = check_relations("braid", {"b": b}, n=3, tol=tol)
        b1, b2_ = pad(b, 2, 3, 1), pad(b, 2, 3, 2)
        closed = (tensor(I2, b2) + tensor(b2, I2)) / math.sqrt(2)
        sides = {
            "b1b2b1=closed": max_deviation(b1 @ b2_ @ b1, closed),
            "b2b1b2=closed": max_deviation(b2_ @ b1 @ b2_, closed),
        }
        worst = max(rel.max_deviation, *sides.values())
        out.append(VerificationReport.build(
            "braid.bell.relation", "(B (x) 1)(1 (x) B)(B (x) 1)", "(1/sqrt2)(1 (x) B^2 + B^2 (x) 1)",
            [worst], tol, d=2, details={"relations": dict(rel.details), **sides},
        ))
        tele = braid_teleportation_op(b, 2)
        out.append(_single("braid.bell.teleportation", "(B^-1 (x) 1)(1 (x) B)",
                           "(1 (x) B)(B^-1 (x) 1) + (1 (x) B^2)(B^2 (x) 1)", [
            ("expansion", tele, tensor(I2, b) @ tensor(pb.B_inv, I2) + tensor(I2, b2) @ tensor(b2, I2)),
            ("unitary", tele.conj().T @ tele, identity(8)),
        ], tol, 2))
    # permutation as a braid, in every dimension
    rel = check_relations("braid", {"b": swap(d)}, n=3, tol=tol)
    c1, c2 = _padded(d, 3, 1, dg.crossing(d)), _padded(d, 3, 2, dg.crossing(d))
    lhs, rhs = dg.compose_all([c1, c2, c1]), dg.compose_all([c2, c1, c2])
    cdev = max_deviation(evaluate(lhs), evaluate(rhs)) if dg.structurally_close(lhs, rhs, tol) else math.inf
    out.append(_from_relation(rel, "braid.permutation", "P_i P_{i+1} P_i", "P_{i+1} P_i P_{i+1}", d, cdev))
    # state-model braid from the TL generator
    lam = float(d)
    A = _bracket_root(lam)
    b, rel = braid_from_tl(omega(d), A, d=d, tol=tol)
    out.append(_from_relation(rel, "braid.state_model", "b = A 1 + A^-1 lam omega", "braid relation", d, details={
        "A": [A.real, A.imag], "loop_constraint": loop_constraint(A, lam), "unitary": bool(is_unitary(b, 1e-9)),
    }))
    return out


def _bracket_root(lam: float) -> complex:
    """A on the unit circle or real axis with A^2 + A^-2 = -lam."""
    # A^2 = t solves t + 1/t = -lam
    t = (-lam + cmath.sqrt(lam * lam - 4)) / 2
    return complex(cmath.sqrt(t))


def virtual_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    d, tol = cfg.d, cfg.tol
    p = swap(d)
    out = []
    sym = [("P^2=1", p @ p, identity(d * d)), ("P=P^T", p, p.T), ("P^dag P=1", p.conj().T @ p, identity(d * d))]
    for i in range(d):
        for j in range(d):
            sym.append((f"P|{i}{j}>=|{j}{i}>", p @ basis_state(d, i, j), basis_state(d, j, i)))
    if d == 2:
        pb = pauli_and_bell()
        sym.append(("P=pauli sum", p, 0.5 * (identity(4) + sum(tensor(s, s) for s in (pb.sigma1, pb.sigma2, pb.sigma3)))))
    cr = dg.crossing(d)
    cdev = max(max_deviation(evaluate(cr), p), max_deviation(evaluate(dg.compose(cr, cr)), identity(d * d)))
    out.append(_single("virtual.permutation", "P", "involutive swap", sym, tol, d, diagram_deviation=cdev))

    if d == 2:
        b = pauli_and_bell().B
    else:
        b, _ = braid_from_tl(omega(d), _bracket_root(float(d)), d=d, tol=tol)
    rel = check_relations("virtual_braid", {"b": b, "v": p}, n=3, tol=tol)
    mixed = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                v = basis_state(d, i, j, k)
                lhs = pad(b, d, 3, 2) @ pad(p, d, 3, 1) @ pad(p, d, 3, 2) @ v
                rhs = tensor(identity(d), b) @ basis_state(d, k, i, j)
                mixed.append(max_deviation(lhs, rhs))
    out.append(_from_relation(
        rel, "virtual.mixed_relation", "b_{i+1} v_i v_{i+1}", "v_i v_{i+1} b_i", d,
        details={"basis_action": max(mixed), "generator": "bell" if d == 2 else "state_model"},
    ))

    # teleportation swapping on every basis vector, matrix and crossing diagrams
    I = identity(d)
    fwd = braid_teleportation_op(p, d)
    bwd = tensor(I, p) @ tensor(p, I)
    cr = dg.crossing(d)
    iden = dg.identity_diagram(d)
    fwd_d = evaluate(dg.compose(dg.tensor_diagrams(cr, iden), dg.tensor_diagrams(iden, cr)))
    bwd_d = evaluate(dg.compose(dg.tensor_diagrams(iden, cr), dg.tensor_diagrams(cr, iden)))
    devs, ddevs = [], []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                ijk, kij = basis_state(d, i, j, k), basis_state(d, k, i, j)
                devs += [max_deviation(fwd @ ijk, kij), max_deviation(bwd @ kij, ijk)]
                ddevs += [max_deviation(fwd_d @ ijk, kij), max_deviation(bwd_d @ kij, ijk)]
    out.append(VerificationReport.build(
        "virtual.teleportation_swapping", "(P (x) 1)(1 (x) P)|ij>|k>", "|k>|ij>", devs, tol,
        diagram_deviation=max(ddevs), d=d, details={"basis_vectors": d**3},
    ))
    if d == 2:
        out.append(pr.virtual_braid_teleportation(pr.ProtocolInstance.random(2, cfg.seed), tol))
    return out


def _split_symmetric(u: np.ndarray, tol: float) -> tuple[bool, bool]:
    """(U^T = U, U^T = +-U)."""
    sym = max_deviation(u.T, u) <= tol
    return sym, sym or max_deviation(u.T, -u) <= tol


def tl_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    d, tol = cfg.d, cfg.tol
    lam = float(d)
    inst = pr.ProtocolInstance.random(d, cfg.seed)
    basis = inst.basis
    ops = inst.ops()
    out = []

    rel = check_relations("tl", {"e": omega(d)}, n=3, lam=lam, tol=tol)
    dd, ddet = diagram_relations("tl", {"e": pr.projector(d)}, d, lam, tol=tol)
    out.append(_from_relation(rel, "tl.omega", "e_i = omega insertions", "TL_3(d) axioms", d, dd,
                              details={"diagram_relations": ddet}))

    for n, u in enumerate(basis.elements):
        lab = basis.labels[n]
        rel = check_relations("tl", {"e": basis.projector(n)}, n=3, lam=lam, tol=tol)
        # decorated words such as U U^dag only cancel numerically
        dd, _ = diagram_relations("tl", {"e": pr.projector(d, f"U{n}")}, d, lam, ops, structural=False, tol=tol)
        out.append(_from_relation(rel, f"tl.omega_n.{lab}", "e_i = omega_n insertions", "TL_3(d) axioms", d, dd))

    rho = inst.rho
    generic = [tensor(rho, omega(d)), tensor(omega(d), rho)]
    rel = check_relations("tl", {"e": generic}, n=3, lam=lam, tol=tol, d=d, hermitian=False)
    out.append(_from_relation(
        rel, "tl.rho_omega", "e1 = rho (x) omega, e2 = omega (x) rho", "TL_3(d) axioms", d,
        _rho_diagram_dev(d, lam, ops, None, tol), details={"seed": cfg.seed},
    ))

    # rho (x) omega_n: TL holds iff U_n^T = +-U_n (a sign cancels in U^T U^*)
    for n, u in enumerate(basis.elements):
        lab = basis.labels[n]
        pn = basis.projector(n)
        fam = [tensor(rho, pn), tensor(pn, rho)]
        rel = check_relations("tl", {"e": fam}, n=3, lam=lam, tol=tol, d=d, hermitian=False)
        sym, signed = _split_symmetric(u, tol)
        holds = rel.passed
        dev = rel.max_deviation if signed else (0.0 if not holds else math.inf)
        ddev = _rho_diagram_dev(d, lam, ops, f"U{n}", tol)
        if not signed:
            ddev = 0.0 if ddev > tol else math.inf
        out.append(VerificationReport.build(
            f"tl.rho_omega_n.{lab}", "e1 = rho (x) omega_n, e2 = omega_n (x) rho",
            "TL_3(d) axioms exactly when U_n^T = +-U_n", [dev], tol, diagram_deviation=ddev, d=d,
            details={"tl_holds": holds, "tl_deviation": rel.max_deviation, "symmetric": sym, "symmetric_up_to_sign": signed},
        ))
    return out


def _rho_diagram_dev(d, lam, ops, label, tol):
    """Max numeric deviation of the rho (x) omega_n TL axioms, by diagram reduction."""
    e1 = dg.tensor_diagrams(pr.wire(d, "rho"), pr.projector(d, label))
    e2 = dg.tensor_diagrams(pr.projector(d, label), pr.wire(d, "rho"))
    fam = {1: e1, 2: e2}
    devs = []
    for i, j in ((1, 2), (2, 1)):
        lhs = reduce_to_normal_form(dg.compose_all([fam[i], fam[j], fam[i]]), ops)
        devs.append(max_deviation(evaluate(lhs, ops), evaluate(fam[i], ops) / lam**2))
    for i in (1, 2):
        sq = reduce_to_normal_form(dg.compose(fam[i], fam[i]), ops)
        devs.append(max_deviation(evaluate(sq, ops), evaluate(fam[i], ops)))
    return max(devs)


def brauer_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    d, tol = cfg.d, cfg.tol
    lam = float(d)
    rel = check_relations("brauer", {"e": omega(d), "v": swap(d)}, n=3, lam=lam, tol=tol)
    dd, ddet = diagram_relations("brauer", {"e": pr.projector(d), "v": dg.crossing(d)}, d, lam, tol=tol)
    p, w, I = swap(d), omega(d), identity(d)
    extra = {
        "P omega = omega": max_deviation(p @ w, w),
        "omega P = omega": max_deviation(w @ p, w),
        "(P(x)1)(1(x)P)(omega(x)1) = d(1(x)omega)(omega(x)1)": max_deviation(
            tensor(p, I) @ tensor(I, p) @ tensor(w, I), lam * tensor(I, w) @ tensor(w, I)
        ),
    }
    r = _from_relation(rel, "brauer.omega_p", "e_i = omega, v_i = P", "Brauer D_3(d) relations, lam = d", d, dd,
                       details={"diagram_relations": ddet, **extra})
    if max(extra.values()) > tol:
        r = VerificationReport.build(r.check_id, r.lhs_descr, r.rhs_descr, [r.max_deviation, *extra.values()], tol,
                                     diagram_deviation=dd, d=d, details=r.details)
    return [r]


def teleport_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    inst = pr.ProtocolInstance.random(cfg.d, cfg.seed)
    return [pr.teleport_resolution(inst, cfg.tol), pr.tight_teleportation(inst, cfg.tol)]


def dense_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    return [pr.dense_coding(pr.ProtocolInstance.random(cfg.d, cfg.seed), cfg.tol)]


def swap_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    inst = pr.ProtocolInstance.random(cfg.d, cfg.seed)
    k = len(inst.basis)
    rng = np.random.default_rng(cfg.seed)
    triples = {(0, 0, 0)}
    while len(triples) < 4:
        triples.add(tuple(int(x) for x in rng.integers(0, k, size=3)))
    return [pr.entanglement_swapping(inst, *t, tol=cfg.tol)[1] for t in sorted(triples)]


def gates_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    return [pr.gate_decompositions(g, cfg.tol) for g in pr.GATE_TERMS]


def multipartite_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    return [pr.multipartite_states(cfg.tol)]


def no_flow_octet(d: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Random octet with U2 = 1 and U5 = X, so tr(U2^dag U5) = 0."""
    us = [pr.random_unitary(d, rng) for _ in range(8)]
    us[1] = identity(d)
    us[4] = weyl_xz(d)[0]
    return us


def flow_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    d, tol = cfg.d, cfg.tol
    rng = np.random.default_rng(cfg.seed)
    phi = pr.random_state(d, rng)
    out = []
    us = [pr.random_unitary(d, rng) for _ in range(8)]
    out.append(pr.quantum_info_flow(us, phi, d, tol, "flow.network.random")[1])
    ident_out, rep = pr.quantum_info_flow([identity(d)] * 8, phi, d, tol, "flow.network.identity")
    quarter = max_deviation(ident_out, phi / d**4)
    out.append(VerificationReport.build(
        rep.check_id, rep.lhs_descr, "(1/d^4)|phi>", [rep.max_deviation, quarter], tol,
        diagram_deviation=rep.details["diagram_deviation"], d=d, details=rep.details,
    ))
    zero, rep = pr.quantum_info_flow(no_flow_octet(d, rng), phi, d, tol, "flow.no_flow")
    zdev = float(np.max(np.abs(zero)))
    out.append(VerificationReport.build(
        rep.check_id, "network with tr(U2^dag U5) = 0", "zero vector (no flow)", [rep.max_deviation, zdev], tol,
        diagram_deviation=rep.details["diagram_deviation"], d=d, details=rep.details,
    ))
    u, v = pr.random_unitary(d, rng), pr.random_unitary(d, rng)
    out.append(pr.transfer_flow(u, v, d, phi, tol))
    return out


BUILDERS: dict[str, Callable[[SuiteConfig], list[VerificationReport]]] = {
    "braid": braid_suite,
    "virtual": virtual_suite,
    "tl": tl_suite,
    "brauer": brauer_suite,
    "teleport": teleport_suite,
    "dense": dense_suite,
    "swap": swap_suite,
    "gates": gates_suite,
    "multipartite": multipartite_suite,
    "flow": flow_suite,
}


def run_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    """All records of the suite, sorted by check_id."""
    names = [cfg.suite] if cfg.suite != "all" else [s for s in SUITES if cfg.d == 2 or s not in QUBIT_ONLY]
    if cfg.jobs > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(lambda s: BUILDERS[s](cfg), names))
    else:
        chunks = [BUILDERS[s](cfg) for s in names]
    records = [r for chunk in chunks for r in chunk]
    return sorted(records, key=lambda r: r.check_id)
