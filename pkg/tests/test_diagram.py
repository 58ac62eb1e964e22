import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    LABELS,
    MARKERS,
    crossing_count,
    oracle_evaluate,
    random_decorations,
    random_diagram,
    random_matching,
    random_ops,
)
from tlcat import diagram as dg
from tlcat.diagram import (
    ArityMismatchError,
    B,
    Decoration,
    Diagram,
    DiagramError,
    DuplicatePositionError,
    Letter,
    Strand,
    T,
    ThroughStrandError,
    UnknownStrandError,
)
from tlcat.evaluate import UnknownOperatorError, evaluate
from tlcat.linalg import DimensionMismatchError, identity, max_deviation, partial_trace, tensor
from tlcat.operators import omega, omega_state, swap
from tlcat.rewrite import (
    eliminate_loops,
    reduce_to_normal_form,
    straighten,
    surplus,
    termination_measure,
)

TOL = 1e-10
ORDERS = ["".join(p) for p in itertools.permutations("lsc")]


def shaped_diagram(rng, d, m, n):
    eps = [T(i) for i in range(m)] + [B(i) for i in range(n)]
    strands = tuple(Strand(a, b, random_decorations(rng)) for a, b in random_matching(eps, rng))
    diag = Diagram(d, m, n, strands)
    return Diagram(d, m, n, strands, (), 1.0, diag.count("cup") + diag.count("cap"))


def composable(rng, d):
    while True:
        m, k, n = (int(x) for x in rng.integers(0, 4, size=3))
        if (m + k) % 2 == 0 and (k + n) % 2 == 0 and m + k > 0 and k + n > 0:
            return shaped_diagram(rng, d, m, k), shaped_diagram(rng, d, k, n)


# -- constructors ------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3, 4])
def test_primitives(d):
    assert max_deviation(evaluate(dg.cup(d)).ravel(), omega_state(d)) < TOL
    assert max_deviation(evaluate(dg.cap(d)).ravel(), omega_state(d).conj()) < TOL
    assert max_deviation(evaluate(dg.crossing(d)), swap(d)) == 0
    assert max_deviation(evaluate(dg.identity_diagram(d, 2)), identity(d * d)) == 0
    assert max_deviation(evaluate(dg.tl_diagram(d, 3, 2)), tensor(identity(d), omega(d))) < TOL
    assert max_deviation(evaluate(dg.build("cup", d)), omega_state(d).reshape(-1, 1)) < TOL


def test_decorated_primitives(rng):
    d = 3
    ops = random_ops(d, rng)
    m = ops["A"]
    cup = dg.decorate(dg.cup(d), T(0), Decoration(Fraction(1, 4), "A"))
    assert max_deviation(evaluate(cup, ops).ravel(), tensor(m, identity(d)) @ omega_state(d)) < TOL
    cup_r = dg.decorate(dg.cup(d), T(0), Decoration(Fraction(3, 4), "A"))
    assert max_deviation(evaluate(cup_r, ops).ravel(), tensor(identity(d), m) @ omega_state(d)) < TOL
    cap = dg.decorate(dg.cap(d), B(0), Decoration(Fraction(1, 4), "A", "adjoint"))
    want = omega_state(d).conj() @ tensor(m.conj().T, identity(d))
    assert max_deviation(evaluate(cap, ops).ravel(), want) < TOL
    wire = dg.decorated_wire(d, [Letter("A"), Letter("C", "transposed")])
    assert max_deviation(evaluate(wire, ops), m @ ops["C"].T) < TOL


def test_construction_errors():
    with pytest.raises(DiagramError):
        Diagram(2, 2, 0, (Strand(T(0), T(1)), Strand(T(0), T(1))))
    with pytest.raises(DiagramError):
        Diagram(2, 1, 0, ())
    with pytest.raises(DuplicatePositionError):
        Strand(T(0), B(0), (Decoration(Fraction(1, 3), "A"), Decoration(Fraction(1, 3), "C")))
    with pytest.raises(DiagramError):
        Decoration(Fraction(3, 2), "A")
    with pytest.raises(DiagramError):
        Decoration(Fraction(1, 2), "A", "inverse")
    with pytest.raises(UnknownStrandError):
        dg.decorate(dg.cup(2), T(5), Decoration(Fraction(1, 4), "A"))
    with pytest.raises(ArityMismatchError):
        dg.compose(dg.cup(2), dg.cup(2))
    with pytest.raises(DiagramError):
        dg.build("vertex", 2)


def test_evaluate_errors(rng):
    cup = dg.decorate(dg.cup(2), T(0), Decoration(Fraction(1, 4), "Q"))
    with pytest.raises(UnknownOperatorError):
        evaluate(cup, {})
    with pytest.raises(DimensionMismatchError):
        evaluate(cup, {"Q": np.eye(3)})


# -- evaluation against the brute-force oracle -------------------------------


@pytest.mark.parametrize("chunk", range(8))
def test_evaluate_matches_oracle(chunk):
    rng = np.random.default_rng(1000 + chunk)
    for _ in range(30):
        diag = random_diagram(rng)
        ops = random_ops(diag.d, rng)
        assert max_deviation(evaluate(diag, ops), oracle_evaluate(diag, ops)) < TOL, diag


# -- functoriality -----------------------------------------------------------


@pytest.mark.parametrize("seed", range(6))
def test_compose_is_matrix_product(seed):
    rng = np.random.default_rng(seed)
    for _ in range(15):
        d = int(rng.choice([2, 3]))
        upper, lower = composable(rng, d)
        ops = random_ops(d, rng)
        got = evaluate(dg.compose(upper, lower), ops)
        want = oracle_evaluate(upper, ops) @ oracle_evaluate(lower, ops)
        assert max_deviation(got, want) < 1e-9


@pytest.mark.parametrize("seed", range(4))
def test_tensor_is_kron(seed):
    rng = np.random.default_rng(50 + seed)
    for _ in range(10):
        d = int(rng.choice([2, 3]))
        a, b = random_diagram(rng, d, 2), random_diagram(rng, d, 2)
        ops = random_ops(d, rng)
        got = evaluate(dg.tensor_diagrams(a, b), ops)
        assert max_deviation(got, np.kron(oracle_evaluate(a, ops), oracle_evaluate(b, ops))) < 1e-9


@pytest.mark.parametrize("seed", range(4))
def test_closure_is_partial_trace(seed):
    rng = np.random.default_rng(80 + seed)
    for _ in range(10):
        d = int(rng.choice([2, 3]))
        n = int(rng.integers(1, 4))
        diag = shaped_diagram(rng, d, n, n)
        ops = random_ops(d, rng)
        mat = oracle_evaluate(diag, ops)
        full = evaluate(dg.close_diagram(diag), ops)
        assert abs(full[0, 0] - np.trace(mat)) < 1e-9
        wires = sorted(set(int(x) for x in rng.integers(0, n, size=2)))
        part = evaluate(dg.close_diagram(diag, wires), ops)
        assert max_deviation(part, partial_trace(mat, [d] * n, wires)) < 1e-9


def test_closure_errors():
    with pytest.raises(ArityMismatchError):
        dg.close_diagram(dg.cup(2))
    with pytest.raises(ArityMismatchError):
        dg.close_diagram(dg.identity_diagram(2, 2), [3])


def test_associativity(rng):
    d = 2
    ops = random_ops(d, rng)
    a, b, c = (shaped_diagram(rng, d, 2, 2) for _ in range(3))
    left = dg.compose(dg.compose(a, b), c)
    right = dg.compose(a, dg.compose(b, c))
    assert max_deviation(evaluate(left, ops), evaluate(right, ops)) < 1e-9


# -- dagger ------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(3))
def test_dagger_is_adjoint(seed):
    rng = np.random.default_rng(300 + seed)
    for _ in range(20):
        diag = random_diagram(rng)
        ops = random_ops(diag.d, rng)
        got = evaluate(dg.dagger(diag), ops)
        assert max_deviation(got, evaluate(diag, ops).conj().T) < TOL


# -- sliding and rewriting -----------------------------------------------------


def test_slide_moves_across_bend(rng):
    ops = random_ops(2, rng)
    cup = dg.decorate(dg.cup(2), T(0), Decoration(Fraction(1, 4), "A"))
    moved = dg.slide_decoration(cup, T(0), Fraction(1, 4))
    (deco,) = moved.strand_of(T(0)).decorations
    assert deco.position == Fraction(3, 4) and deco.marker == "transposed"
    assert max_deviation(evaluate(moved, ops), evaluate(cup, ops)) < TOL
    back = dg.slide_decoration(moved, T(1), Fraction(3, 4))
    assert back == cup


def test_slide_errors():
    wire = dg.decorated_wire(2, [Letter("A")])
    with pytest.raises(ThroughStrandError):
        dg.slide_decoration(wire, T(0), wire.strands[0].decorations[0].position)
    cup = dg.decorate(dg.cup(2), T(0), Decoration(Fraction(1, 2), "A"))
    with pytest.raises(DiagramError):
        dg.slide_decoration(cup, T(0), Fraction(1, 2))
    cup = dg.decorate(dg.cup(2), T(0), Decoration(Fraction(1, 4), "A"))
    cup = dg.decorate(cup, T(0), Decoration(Fraction(2, 3), "C"))
    with pytest.raises(DiagramError):
        dg.slide_decoration(cup, T(0), Fraction(1, 4))
    with pytest.raises(DiagramError):
        dg.slide_decoration(cup, T(0), Fraction(1, 5))


@pytest.mark.parametrize("seed", range(4))
def test_random_slides_preserve_value(seed):
    rng = np.random.default_rng(400 + seed)
    done = 0
    while done < 15:
        diag = random_diagram(rng)
        bends = [s for s in diag.strands if s.kind != "through" and s.decorations]
        if not bends:
            continue
        s = bends[int(rng.integers(len(bends)))]
        x = s.decorations[int(rng.integers(len(s.decorations)))]
        ops = random_ops(diag.d, rng)
        try:
            moved = dg.slide_decoration(diag, s.tail, x.position)
        except DiagramError:
            continue
        assert max_deviation(evaluate(moved, ops), evaluate(diag, ops)) < TOL
        done += 1


def test_zigzag_reduces_to_scaled_cup():
    for d in (2, 3):
        zig = dg.compose(
            dg.tensor_all([dg.identity_diagram(d), dg.cap(d), dg.identity_diagram(d)], d),
            dg.tensor_diagrams(dg.cup(d), dg.cup(d)),
        )
        red = reduce_to_normal_form(zig)
        want = dg.cup(d).scaled(1 / d)
        assert red == want
        assert max_deviation(evaluate(red), evaluate(zig)) < TOL


def test_snake_reduces_to_scaled_identity():
    for d in (2, 3):
        snake = dg.compose(dg.tensor_diagrams(dg.cap(d), dg.identity_diagram(d)),
                           dg.tensor_diagrams(dg.identity_diagram(d), dg.cup(d)))
        assert reduce_to_normal_form(snake) == dg.identity_diagram(d).scaled(1 / d)


def test_tl_words():
    for d in (2, 3):
        e1, e2 = dg.tl_diagram(d, 3, 1), dg.tl_diagram(d, 3, 2)
        assert reduce_to_normal_form(dg.compose(e1, e1)) == e1
        assert reduce_to_normal_form(dg.compose_all([e2, e1, e2])) == e2.scaled(d**-2)
        closed = reduce_to_normal_form(dg.compose(dg.cap(d), dg.cup(d)))
        assert closed.top == closed.bottom == 0 and abs(closed.prefactor - 1) < TOL and closed.k == 0


def test_loop_elimination_keeps_unknown_labels():
    loop = Diagram(2, 0, 0, (), ((Letter("A"),), ()), 1.0, 0)
    out = eliminate_loops(loop, {"A": 2 * np.eye(2)})
    assert out.loops == () and abs(out.prefactor - 8) < TOL
    kept = eliminate_loops(loop, {})
    assert kept.loops == ((Letter("A"),),) and abs(kept.prefactor - 2) < TOL


def random_network(rng, d):
    """Compose a few random layers so loops and surplus bends appear."""
    layers = [shaped_diagram(rng, d, 2, 2) for _ in range(int(rng.integers(2, 4)))]
    net = dg.compose_all(layers)
    if rng.random() < 0.5:
        net = dg.close_diagram(net, [0])
    return net


@pytest.mark.parametrize("seed", range(5))
def test_each_rewrite_step_preserves_value(seed):
    rng = np.random.default_rng(500 + seed)
    for _ in range(12):
        d = int(rng.choice([2, 3]))
        net = random_network(rng, d)
        ops = random_ops(d, rng)
        ref = evaluate(net, ops)
        for step in (lambda x: eliminate_loops(x, ops), straighten, dg.canonical):
            nxt = step(net)
            assert max_deviation(evaluate(nxt, ops), ref) < 1e-9
            if nxt != net:
                assert termination_measure(nxt) < termination_measure(net)


@pytest.mark.parametrize("seed", range(5))
def test_rule_orders_agree(seed):
    rng = np.random.default_rng(600 + seed)
    for _ in range(10):
        d = int(rng.choice([2, 3]))
        net = random_network(rng, d)
        ops = random_ops(d, rng)
        forms = [reduce_to_normal_form(net, ops, order) for order in ORDERS]
        ref = evaluate(net, ops)
        for f in forms:
            assert max_deviation(evaluate(f, ops), ref) < 1e-9
            assert dg.structurally_close(f, forms[0], 1e-9)
            assert surplus(f) <= 1


def test_bad_order():
    with pytest.raises(ValueError):
        reduce_to_normal_form(dg.cup(2), order="ls")


# -- planarity -----------------------------------------------------------------


def test_planarity_examples():
    e1e2 = dg.compose(dg.tl_diagram(2, 3, 1), dg.tl_diagram(2, 3, 2))
    assert dg.check_planar(e1e2)
    assert not dg.check_planar(dg.crossing(2))
    assert dg.check_planar(dg.identity_diagram(3, 3))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([0, 2, 4, 6]), st.integers(0, 2**31 - 1))
def test_planarity_matches_crossing_counter(m, seed):
    rng = np.random.default_rng(seed)
    n = 6 - m
    eps = [T(i) for i in range(m)] + [B(i) for i in range(n)]
    diag = Diagram(2, m, n, tuple(Strand(a, b) for a, b in random_matching(eps, rng)))
    assert dg.check_planar(diag) == (crossing_count(diag) == 0)


# -- hypothesis: decorated wire words ----------------------------------------------


letters = st.lists(st.tuples(st.sampled_from(LABELS), st.sampled_from(MARKERS)), max_size=4)


@settings(max_examples=60, deadline=None)
@given(letters, st.integers(0, 2**31 - 1))
def test_wire_word_is_product(word, seed):
    rng = np.random.default_rng(seed)
    ops = random_ops(2, rng)
    mk = {"plain": lambda x: x, "transposed": lambda x: x.T, "adjoint": lambda x: x.conj().T,
          "conjugate": lambda x: x.conj()}
    want = np.eye(2, dtype=complex)
    for lab, marker in word:
        want = want @ mk[marker](ops[lab])
    wire = dg.decorated_wire(2, [Letter(*w) for w in word])
    assert max_deviation(evaluate(wire, ops), want) < 1e-9
