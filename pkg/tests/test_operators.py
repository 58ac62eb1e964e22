import cmath
import math

import numpy as np
import pytest

from tlcat.linalg import DimensionMismatchError, basis_state, identity, is_unitary, max_deviation, tensor
from tlcat.operators import (
    InvalidIndexError,
    SingularMatrixError,
    braid_from_tl,
    braid_teleportation_op,
    check_relations,
    loop_constraint,
    omega,
    omega_state,
    pad,
    pauli_and_bell,
    permutation_and_omega,
    swap,
    tl_generator,
    weyl_basis,
)

TOL = 1e-10


@pytest.fixture(scope="module")
def pb():
    return pauli_and_bell()


def test_bell_matrix_entries(pb):
    expect = np.array([[1, 0, 0, 1], [0, 1, -1, 0], [0, 1, 1, 0], [-1, 0, 0, 1]]) / math.sqrt(2)
    assert max_deviation(pb.B, expect) == 0
    assert max_deviation(pb.B @ pb.B_inv, identity(4)) < TOL
    assert max_deviation(pb.B_inv, pb.B.T) < TOL


def test_bell_matrix_powers_and_exponential(pb):
    s12 = tensor(pb.sigma1, pb.sigma2)
    b2 = pb.B @ pb.B
    assert max_deviation(b2, 1j * s12) < TOL
    assert max_deviation(np.linalg.matrix_power(pb.B, 4), -identity(4)) < TOL
    assert max_deviation(np.linalg.matrix_power(pb.B, 8), identity(4)) < TOL
    cs = math.cos(math.pi / 4) * identity(4) + 1j * math.sin(math.pi / 4) * s12
    assert max_deviation(pb.B, cs) < TOL
    assert max_deviation(pb.B, (identity(4) + b2) / math.sqrt(2)) < TOL


def test_bell_states_from_b(pb):
    assert max_deviation(pb.B @ basis_state(2, 1, 1), pb.phi_plus) < TOL
    assert max_deviation(pb.B @ basis_state(2, 0, 1), pb.psi_plus) < TOL


def test_local_bell_identities(pb):
    I = identity(2)
    pairs = [
        (tensor(I, pb.sigma3), pb.phi_minus),
        (tensor(pb.sigma3, I), pb.phi_minus),
        (tensor(I, pb.sigma1), pb.psi_plus),
        (tensor(pb.sigma1, I), pb.psi_plus),
        (tensor(I, -1j * pb.sigma2), pb.psi_minus),
        (tensor(1j * pb.sigma2, I), pb.psi_minus),
    ]
    for op, state in pairs:
        assert max_deviation(op @ pb.phi_plus, state) < TOL


def test_all_named_operators_unitary(pb):
    for m in (pb.sigma1, pb.sigma2, pb.sigma3, pb.B, swap(2), swap(3)):
        assert is_unitary(m)
    for d in (2, 3, 4):
        assert all(is_unitary(u) for u in weyl_basis(d).elements)


def test_permutation_and_omega():
    for d in (2, 3):
        po = permutation_and_omega(d)
        assert max_deviation(po.P @ po.P, identity(d * d)) == 0
        assert max_deviation(po.omega @ po.omega, po.omega) < TOL
        assert abs(np.linalg.norm(po.Omega) - 1) < TOL
        assert max_deviation(po.tl_generator(3, 2), tensor(identity(d), po.omega)) == 0
    assert max_deviation(swap(2) @ basis_state(2, 0, 1), basis_state(2, 1, 0)) == 0
    pb = pauli_and_bell()
    pauli_sum = 0.5 * (identity(4) + sum(tensor(s, s) for s in (pb.sigma1, pb.sigma2, pb.sigma3)))
    assert max_deviation(swap(2), pauli_sum) < TOL


def test_tl_generator_index_errors():
    with pytest.raises(InvalidIndexError):
        tl_generator(2, 3, 0)
    with pytest.raises(InvalidIndexError):
        tl_generator(2, 3, 3)
    with pytest.raises(InvalidIndexError):
        pad(omega(2), 2, 3, 3)


def hs_entry_loop(a, b):
    total = 0j
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            total += np.conj(a[i, j]) * b[i, j]
    return total


@pytest.mark.parametrize("d", [2, 3, 4])
def test_weyl_basis_orthogonality(d):
    basis = weyl_basis(d)
    assert len(basis) == d * d
    assert max_deviation(basis[basis.identity_index], identity(d)) == 0
    for n in range(d * d):
        for m in range(d * d):
            assert abs(hs_entry_loop(basis[n], basis[m]) - d * (n == m)) < TOL
    total = sum(basis.projector(n) for n in range(d * d))
    assert max_deviation(total, identity(d * d)) < TOL


def test_qubit_basis_is_pauli(pb):
    basis = weyl_basis(2)
    for got, want in zip(basis.elements, (identity(2), pb.sigma1, pb.sigma2, pb.sigma3)):
        assert max_deviation(got, want) == 0
    assert abs(np.trace(pb.sigma1.conj().T @ pb.sigma2)) == 0
    assert np.trace(pb.sigma1.conj().T @ pb.sigma1) == 2


@pytest.mark.parametrize("d", [2, 3])
def test_matrix_transfer_across_omega(d, rng):
    om = omega_state(d)
    for _ in range(20):
        m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        assert max_deviation(tensor(m, identity(d)) @ om, tensor(identity(d), m.T) @ om) < TOL
    m1 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m2 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    lhs = om.conj() @ tensor(m1.conj().T, identity(d)) @ tensor(m2, identity(d)) @ om
    assert abs(lhs - np.trace(m1.conj().T @ m2) / d) < TOL


def test_braid_relation_for_b(pb):
    rep = check_relations("braid", {"b": pb.B}, n=3)
    assert rep.passed
    closed = (tensor(identity(2), pb.B @ pb.B) + tensor(pb.B @ pb.B, identity(2))) / math.sqrt(2)
    b1, b2 = pad(pb.B, 2, 3, 1), pad(pb.B, 2, 3, 2)
    assert max_deviation(b1 @ b2 @ b1, closed) < TOL
    assert max_deviation(b2 @ b1 @ b2, closed) < TOL


def test_virtual_braid_and_brauer(pb):
    assert check_relations("virtual_braid", {"b": pb.B, "v": swap(2)}, n=3).passed
    for d in (2, 3):
        rep = check_relations("brauer", {"e": omega(d), "v": swap(d)}, n=3, lam=d)
        assert rep.passed, rep.failed_relations()
        names = dict(rep.details)
        assert "v2v1e2=lam e1e2" in names and "e1v3=v3e1" in names


def test_tl_relations_and_local_unitaries(rng):
    for d in (2, 3):
        assert check_relations("tl", {"e": omega(d)}, n=3, lam=d).passed
        basis = weyl_basis(d)
        for n in range(len(basis)):
            assert check_relations("tl", {"e": basis.projector(n)}, n=3, lam=d).passed
    assert not check_relations("tl", {"e": omega(2)}, n=3, lam=3).passed


def test_relation_input_errors(pb):
    with pytest.raises(ValueError):
        check_relations("hecke", {"b": pb.B})
    with pytest.raises(DimensionMismatchError):
        check_relations("braid", {"b": np.eye(3)})
    with pytest.raises(ValueError):
        check_relations("tl", {"e": omega(2)})


def rank_one(d, rng):
    a = rng.normal(size=d) + 1j * rng.normal(size=d)
    b = rng.normal(size=d) + 1j * rng.normal(size=d)
    m = np.outer(a, b.conj())
    return m / np.trace(m)


def rho_omega_n_holds(rho, proj, d):
    fam = [tensor(rho, proj), tensor(proj, rho)]
    return check_relations("tl", {"e": fam}, n=3, lam=d, d=d, hermitian=False).passed


def test_rho_omega_representation(rng):
    for d in (2, 3):
        rho = rank_one(d, rng)
        assert rho_omega_n_holds(rho, omega(d), d)


def test_rho_omega_n_tracks_signed_symmetry(rng):
    # sigma2 is antisymmetric: the sign cancels in U^T U^*, so the axioms still hold
    rho = rank_one(2, rng)
    basis = weyl_basis(2)
    verdict = {basis.labels[n]: rho_omega_n_holds(rho, basis.projector(n), 2) for n in range(4)}
    assert verdict == {"id": True, "sigma1": True, "sigma2": True, "sigma3": True}
    # a genuinely non-symmetric unitary breaks them
    basis3 = weyl_basis(3)
    shift = basis3.labels.index("X1Z0")
    assert not rho_omega_n_holds(rank_one(3, rng), basis3.projector(shift), 3)
    clock = basis3.labels.index("X0Z1")
    assert rho_omega_n_holds(rank_one(3, rng), basis3.projector(clock), 3)


def bracket_roots(lam, samples=20000):
    """Scan the unit circle for A with A^2 + A^-2 = -lam."""
    thetas = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    vals = np.abs(np.exp(2j * thetas) + np.exp(-2j * thetas) + lam)
    return [cmath.exp(1j * t) for t, v in zip(thetas, vals) if v < 1e-12]


def test_state_model_braid():
    roots = bracket_roots(2.0)
    assert roots, "lam = 2 has roots on the unit circle"
    for A in roots:
        b, rep = braid_from_tl(omega(2), A)
        assert rep.passed and loop_constraint(A, 2.0) < 1e-12
    _, rep = braid_from_tl(omega(2), 1.0)
    assert not rep.passed and rep.max_deviation > 1
    _, rep = braid_from_tl(omega(2), cmath.exp(1j * math.pi / 4))
    assert not rep.passed
    b, rep = braid_from_tl(np.zeros((4, 4)), 0.3 + 0.4j)
    assert rep.passed and max_deviation(b, (0.3 + 0.4j) * identity(4)) == 0
    with pytest.raises(ValueError):
        braid_from_tl(omega(2), 0)
    with pytest.raises(ValueError):
        braid_from_tl(swap(2), 1j)


def test_braid_teleportation(pb):
    for d in (2, 3):
        op = braid_teleportation_op(swap(d), d)
        for i, j, k in np.ndindex(d, d, d):
            assert max_deviation(op @ basis_state(d, i, j, k), basis_state(d, k, i, j)) == 0
    assert max_deviation(braid_teleportation_op(identity(4), 2), identity(8)) == 0
    I = identity(2)
    b2 = pb.B @ pb.B
    rhs = tensor(I, pb.B) @ tensor(pb.B_inv, I) + tensor(I, b2) @ tensor(b2, I)
    assert max_deviation(braid_teleportation_op(pb.B, 2), rhs) < TOL
    with pytest.raises(SingularMatrixError):
        braid_teleportation_op(np.zeros((4, 4)), 2)
