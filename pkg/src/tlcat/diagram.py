"""Decorated Brauer diagrams.

A diagram has ``top`` endpoints T0..T(m-1) and ``bottom`` endpoints
B0..B(n-1); as a matrix it maps the bottom (input) legs to the top (output)
legs.  Endpoints are totally ordered T-before-B, then by index, and each
strand is stored from its smaller endpoint (the tail) to its larger one (the
head).  Three kinds of strand occur:

* through  T_i -- B_j, read downward from the top;
* cup      T_i -- T_j, the ket |Omega>; the left leg (position <= 1/2)
  runs down from T_i, the right leg runs back up to T_j;
* cap      B_i -- B_j, the bra <Omega|; the left leg runs up from B_i, the
  right leg runs back down to B_j.

A decoration at position p (measured from the tail) applies its operator on
the wire it sits on, with the operator's row index on the physically upper
side.  Read along the strand from tail to head a downward-traversed
decoration contributes its matrix and an upward-traversed one contributes
the transpose; that traversal word is what matters for evaluation.

Cups and caps are unnormalized in the strand data; their 1/sqrt(d) factors
are tracked by the integer ``k`` (scalar d^(-k/2)).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

MARKERS = ("plain", "transposed", "adjoint", "conjugate")
_TOGGLE = {"plain": "transposed", "transposed": "plain", "adjoint": "conjugate", "conjugate": "adjoint"}
HALF = Fraction(1, 2)


class DiagramError(ValueError):
    pass


class ArityMismatchError(DiagramError):
    pass


class UnknownStrandError(DiagramError):
    pass


class DuplicatePositionError(DiagramError):
    pass


class ThroughStrandError(DiagramError):
    pass


def toggle(marker: str) -> str:
    """Swap the transposition in a marker: plain<->transposed, adjoint<->conjugate."""
    return _TOGGLE[marker]


class Endpoint(NamedTuple):
    side: str  # "T" or "B"
    index: int

    @property
    def key(self) -> tuple[int, int]:
        return (0 if self.side == "T" else 1, self.index)

    def __str__(self) -> str:
        return f"{self.side}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "Endpoint":
        if len(text) < 2 or text[0] not in "TB" or not text[1:].isdigit():
            raise DiagramError(f"bad endpoint {text!r}")
        return cls(text[0], int(text[1:]))


def T(i: int) -> Endpoint:
    return Endpoint("T", i)


def B(i: int) -> Endpoint:
    return Endpoint("B", i)


class Letter(NamedTuple):
    """An operator label with the marker it carries in a traversal word."""

    label: str
    marker: str = "plain"

    def toggled(self) -> "Letter":
        return Letter(self.label, toggle(self.marker))


@dataclass(frozen=True, order=True)
class Decoration:
    position: Fraction
    label: str
    marker: str = "plain"

    def __post_init__(self):
        object.__setattr__(self, "position", Fraction(self.position))
        if self.marker not in MARKERS:
            raise DiagramError(f"unknown marker {self.marker!r}")
        if not 0 < self.position < 1:
            raise DiagramError(f"decoration position {self.position} outside (0, 1)")


def reverse_word(word: Sequence[Letter]) -> tuple[Letter, ...]:
    """The same path read backwards: order reversed, transposition toggled."""
    return tuple(w.toggled() for w in reversed(word))


@dataclass(frozen=True)
class Strand:
    tail: Endpoint
    head: Endpoint
    decorations: tuple[Decoration, ...] = ()

    def __post_init__(self):
        if self.tail.key >= self.head.key:
            raise DiagramError(f"strand {self.tail}-{self.head} is not tail-ordered")
        decos = tuple(sorted(self.decorations))
        pos = [x.position for x in decos]
        if len(set(pos)) != len(pos):
            raise DuplicatePositionError(f"repeated decoration position on {self.tail}-{self.head}")
        object.__setattr__(self, "decorations", decos)

    @property
    def kind(self) -> str:
        if self.tail.side != self.head.side:
            return "through"
        return "cup" if self.tail.side == "T" else "cap"

    def runs_down(self, p: Fraction) -> bool:
        """Physical direction of travel (tail to head) at position p."""
        kind = self.kind
        if kind == "through":
            return True
        if kind == "cup":
            return p <= HALF
        return p > HALF

    def word(self) -> tuple[Letter, ...]:
        """Traversal word from tail to head."""
        out = []
        for x in self.decorations:
            m = x.marker if self.runs_down(x.position) else toggle(x.marker)
            out.append(Letter(x.label, m))
        return tuple(out)

    def name(self) -> str:
        return f"{self.tail}-{self.head}"


def canonical_loop(word: Sequence[Letter]) -> tuple[Letter, ...]:
    """Least rotation of the loop word over both reading directions."""
    word = tuple(Letter(*w) for w in word)
    if not word:
        return ()
    cands = []
    for w in (word, reverse_word(word)):
        cands.extend(w[i:] + w[:i] for i in range(len(w)))
    return min(cands)


@dataclass(frozen=True)
class Diagram:
    d: int
    top: int
    bottom: int
    strands: tuple[Strand, ...]
    loops: tuple[tuple[Letter, ...], ...] = ()
    prefactor: complex = 1.0
    k: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise DiagramError("dimension must be positive")
        if self.top < 0 or self.bottom < 0:
            raise DiagramError("arities must be nonnegative")
        strands = tuple(sorted(self.strands, key=lambda s: s.tail.key))
        seen = []
        for s in strands:
            seen.extend([s.tail, s.head])
        expected = [T(i) for i in range(self.top)] + [B(i) for i in range(self.bottom)]
        if sorted(seen, key=lambda e: e.key) != expected:
            raise DiagramError("strands do not form a perfect matching of the endpoints")
        object.__setattr__(self, "strands", strands)
        object.__setattr__(self, "loops", tuple(sorted(canonical_loop(w) for w in self.loops)))
        object.__setattr__(self, "prefactor", complex(self.prefactor))

    # lookups -----------------------------------------------------------
    def strand_of(self, ep) -> Strand:
        ep = _as_endpoint(ep)
        for s in self.strands:
            if ep in (s.tail, s.head):
                return s
        raise UnknownStrandError(f"no strand at endpoint {ep}")

    def _replace_strand(self, old: Strand, new: Strand) -> "Diagram":
        strands = tuple(new if s is old else s for s in self.strands)
        return replace(self, strands=strands)

    def labels(self) -> set[str]:
        out = {x.label for s in self.strands for x in s.decorations}
        out.update(w.label for loop in self.loops for w in loop)
        return out

    def pairing(self) -> tuple[tuple[Endpoint, Endpoint], ...]:
        return tuple((s.tail, s.head) for s in self.strands)

    def count(self, kind: str) -> int:
        return sum(1 for s in self.strands if s.kind == kind)

    def scaled(self, c: complex) -> "Diagram":
        return replace(self, prefactor=self.prefactor * c)


def _as_endpoint(ep) -> Endpoint:
    if isinstance(ep, Endpoint):
        return ep
    if isinstance(ep, str):
        return Endpoint.parse(ep)
    if isinstance(ep, Strand):
        return ep.tail
    side, idx = ep
    return Endpoint(side, int(idx))


# --------------------------------------------------------------------------
# primitives


def identity_diagram(d: int, n: int = 1) -> Diagram:
    return Diagram(d, n, n, tuple(Strand(T(i), B(i)) for i in range(n)))


def cup(d: int) -> Diagram:
    """|Omega>, top arity 2, bottom arity 0."""
    return Diagram(d, 2, 0, (Strand(T(0), T(1)),), k=1)


def cap(d: int) -> Diagram:
    """<Omega|, top arity 0, bottom arity 2."""
    return Diagram(d, 0, 2, (Strand(B(0), B(1)),), k=1)


def crossing(d: int) -> Diagram:
    """The virtual crossing; evaluates to the swap P."""
    return Diagram(d, 2, 2, (Strand(T(0), B(1)), Strand(T(1), B(0))))


def build(primitive: str, d: int, n: int = 1) -> Diagram:
    if d < 2:
        raise DiagramError("d must be at least 2")
    if primitive == "identity":
        return identity_diagram(d, n)
    table = {"cup": cup, "cap": cap, "crossing": crossing}
    if primitive not in table:
        raise DiagramError(f"unknown primitive {primitive!r}")
    return table[primitive](d)


def decorate(diag: Diagram, strand, deco: Decoration) -> Diagram:
    s = diag.strand_of(strand)
    if any(x.position == deco.position for x in s.decorations):
        raise DuplicatePositionError(f"position {deco.position} already used on {s.name()}")
    return diag._replace_strand(s, Strand(s.tail, s.head, s.decorations + (deco,)))


def decorated_wire(d: int, word: Sequence[Letter]) -> Diagram:
    """Single through strand carrying ``word`` (read top to bottom)."""
    return Diagram(d, 1, 1, (embed_strand(T(0), B(0), _down_letters(word)),))


def tl_diagram(d: int, n: int, i: int) -> Diagram:
    """e_i on n wires (1-based i): a cap over a cup at wires i, i+1."""
    if not 1 <= i <= n - 1:
        raise DiagramError(f"TL index {i} outside 1..{n - 1}")
    e = compose(cup(d), cap(d))
    return tensor_all([identity_diagram(d, i - 1), e, identity_diagram(d, n - i - 1)], d)


# --------------------------------------------------------------------------
# word <-> decoration embedding

# internal letters: (label, drawn marker, traversed downward?)
_Carried = tuple


def _down_letters(word):
    return [(w.label, w.marker, True) for w in (Letter(*x) for x in word)]


def _effective(c: _Carried) -> Letter:
    label, drawn, down = c
    return Letter(label, drawn if down else toggle(drawn))


def _reverse_carried(word):
    return [(label, drawn, not down) for label, drawn, down in reversed(word)]


def _spaced(n: int, lo: Fraction, hi: Fraction) -> list[Fraction]:
    step = (hi - lo) / (n + 1)
    return [lo + step * (i + 1) for i in range(n)]


def embed_strand(tail: Endpoint, head: Endpoint, word) -> Strand:
    """Lay a carried word onto a fresh strand with evenly spaced positions.

    Letters keep their drawn marker when they land on a leg running in the
    direction they were traversed; otherwise the marker is toggled so that
    the traversal word is unchanged.
    """
    probe = Strand(tail, head)
    kind = probe.kind
    word = list(word)
    if kind == "through":
        pos = _spaced(len(word), Fraction(0), Fraction(1))
        decos = [Decoration(p, *_effective(c)) for p, c in zip(pos, word)]
        return Strand(tail, head, tuple(decos))
    first_leg_down = kind == "cup"
    split = next((i for i, c in enumerate(word) if c[2] != first_leg_down), len(word))
    first, second = word[:split], word[split:]
    decos = []
    for p, c in zip(_spaced(len(first), Fraction(0), HALF), first):
        eff = _effective(c)
        decos.append(Decoration(p, eff.label, eff.marker if first_leg_down else toggle(eff.marker)))
    for p, c in zip(_spaced(len(second), HALF, Fraction(1)), second):
        eff = _effective(c)
        decos.append(Decoration(p, eff.label, toggle(eff.marker) if first_leg_down else eff.marker))
    return Strand(tail, head, tuple(decos))


def embed_on_tail_leg(tail: Endpoint, head: Endpoint, word: Sequence[Letter]) -> Strand:
    """Canonical embedding: the whole traversal word on the tail leg."""
    probe = Strand(tail, head)
    if probe.kind == "through":
        return embed_strand(tail, head, _down_letters(word))
    down = probe.kind == "cup"
    carried = [(w.label, w.marker if down else toggle(w.marker), down) for w in word]
    decos = [
        Decoration(p, label, drawn)
        for p, (label, drawn, _) in zip(_spaced(len(carried), Fraction(0), HALF), carried)
    ]
    return Strand(tail, head, tuple(decos))


def _carried_word(s: Strand):
    return [(x.label, x.marker, s.runs_down(x.position)) for x in s.decorations]


# --------------------------------------------------------------------------
# gluing


def _glue(pieces, links, external):
    """Trace paths through glued pieces.

    ``pieces``: list of (node_a, node_b, carried word from a to b).
    ``links``: involution on internal nodes (glued pairs).
    ``external``: node -> result Endpoint for boundary nodes.
    Returns (strands, loops) with strands as (tail, head, carried word).
    """
    at = {}
    for idx, (a, b, _) in enumerate(pieces):
        at[a] = (idx, 0)
        at[b] = (idx, 1)
    used = [False] * len(pieces)

    def walk(node):
        word = []
        while True:
            idx, end = at[node]
            used[idx] = True
            a, b, w = pieces[idx]
            if end == 0:
                word.extend(w)
                node = b
            else:
                word.extend(_reverse_carried(w))
                node = a
            if node in external:
                return node, word
            node = links[node]

    strands = []
    for node in sorted(external, key=lambda n: external[n].key):
        if used[at[node][0]]:
            continue
        end, word = walk(node)
        t, h = external[node], external[end]
        if t.key > h.key:
            t, h, word = h, t, _reverse_carried(word)
        strands.append(embed_strand(t, h, word))

    loops = []
    for idx in range(len(pieces)):
        if used[idx]:
            continue
        start = pieces[idx][0]
        word, node = [], start
        while True:
            i, end = at[node]
            used[i] = True
            a, b, w = pieces[i]
            if end == 0:
                word.extend(w)
                node = b
            else:
                word.extend(_reverse_carried(w))
                node = a
            node = links[node]
            if node == start:
                break
        loops.append(tuple(_effective(c) for c in word))
    return strands, loops


def _pieces(diag: Diagram, tag):
    return [((tag, s.tail), (tag, s.head), _carried_word(s)) for s in diag.strands]


def compose(upper: Diagram, lower: Diagram) -> Diagram:
    """The product upper . lower (lower is applied first)."""
    if upper.d != lower.d:
        raise DiagramError(f"dimension mismatch {upper.d} vs {lower.d}")
    if upper.bottom != lower.top:
        raise ArityMismatchError(
            f"cannot stack bottom arity {upper.bottom} onto top arity {lower.top}"
        )
    pieces = _pieces(upper, "U") + _pieces(lower, "L")
    links = {}
    for i in range(upper.bottom):
        links[("U", B(i))] = ("L", T(i))
        links[("L", T(i))] = ("U", B(i))
    external = {("U", T(i)): T(i) for i in range(upper.top)}
    external.update({("L", B(i)): B(i) for i in range(lower.bottom)})
    strands, loops = _glue(pieces, links, external)
    return Diagram(
        upper.d,
        upper.top,
        lower.bottom,
        tuple(strands),
        upper.loops + lower.loops + tuple(loops),
        upper.prefactor * lower.prefactor,
        upper.k + lower.k,
    )


def compose_all(diagrams: Iterable[Diagram]) -> Diagram:
    """Product of diagrams listed top to bottom."""
    diagrams = list(diagrams)
    out = diagrams[0]
    for x in diagrams[1:]:
        out = compose(out, x)
    return out


def _shift(s: Strand, dt: int, db: int) -> Strand:
    def mv(e):
        return Endpoint(e.side, e.index + (dt if e.side == "T" else db))

    return Strand(mv(s.tail), mv(s.head), s.decorations)


def tensor_diagrams(left: Diagram, right: Diagram) -> Diagram:
    if left.d != right.d:
        raise DiagramError(f"dimension mismatch {left.d} vs {right.d}")
    strands = left.strands + tuple(_shift(s, left.top, left.bottom) for s in right.strands)
    return Diagram(
        left.d,
        left.top + right.top,
        left.bottom + right.bottom,
        strands,
        left.loops + right.loops,
        left.prefactor * right.prefactor,
        left.k + right.k,
    )


def tensor_all(diagrams: Iterable[Diagram], d: int) -> Diagram:
    out = Diagram(d, 0, 0, ())
    for x in diagrams:
        out = tensor_diagrams(out, x)
    return out


def close_diagram(diag: Diagram, wires: Iterable[int] | None = None) -> Diagram:
    """Join T_i to B_i around the side for every i in ``wires``.

    With all wires this is the trace closure; a subset gives the partial
    trace.  No normalization is added, so the value is the (partial) trace
    of the evaluated matrix.
    """
    if wires is None:
        if diag.top != diag.bottom:
            raise ArityMismatchError("full closure needs equal top and bottom arity")
        wires = range(diag.top)
    wires = sorted(set(wires))
    if any(not (0 <= w < diag.top and w < diag.bottom) for w in wires):
        raise ArityMismatchError(f"cannot close wires {wires} on a ({diag.top},{diag.bottom}) diagram")
    links = {}
    for w in wires:
        links[("D", T(w))] = ("D", B(w))
        links[("D", B(w))] = ("D", T(w))
    keep_t = [i for i in range(diag.top) if i not in wires]
    keep_b = [i for i in range(diag.bottom) if i not in wires]
    external = {("D", T(i)): T(n) for n, i in enumerate(keep_t)}
    external.update({("D", B(i)): B(n) for n, i in enumerate(keep_b)})
    strands, loops = _glue(_pieces(diag, "D"), links, external)
    return Diagram(
        diag.d, len(keep_t), len(keep_b), tuple(strands), diag.loops + tuple(loops),
        diag.prefactor, diag.k,
    )


# --------------------------------------------------------------------------
# local moves and queries


def slide_decoration(diag: Diagram, strand, position) -> Diagram:
    """Slide one cup/cap decoration around the turn to the mirror position.

    The decoration at ``position`` moves to ``1 - position`` on the other
    leg and its transposition is toggled.  A decoration may not pass another
    one, so the move is refused when any decoration sits strictly between
    the two positions.
    """
    s = diag.strand_of(strand)
    if s.kind == "through":
        raise ThroughStrandError(f"{s.name()} is a through strand; nothing to slide around")
    position = Fraction(position)
    hit = [x for x in s.decorations if x.position == position]
    if not hit:
        raise UnknownStrandError(f"no decoration at {position} on {s.name()}")
    if position == HALF:
        raise DiagramError("a decoration at the turning point has no mirror position")
    target = 1 - position
    lo, hi = min(position, target), max(position, target)
    if any(lo < x.position < hi for x in s.decorations):
        raise DiagramError("sliding would move an operator past another operator")
    x = hit[0]
    moved = Decoration(target, x.label, toggle(x.marker))
    rest = tuple(y for y in s.decorations if y is not x)
    return diag._replace_strand(s, Strand(s.tail, s.head, rest + (moved,)))


def boundary_order(diag: Diagram) -> dict[Endpoint, int]:
    """Clockwise boundary positions: top left to right, then bottom right to left."""
    order = {T(i): i for i in range(diag.top)}
    for n, i in enumerate(reversed(range(diag.bottom))):
        order[B(i)] = diag.top + n
    return order


def check_planar(diag: Diagram) -> bool:
    """True when no two strands cross (a Temperley-Lieb diagram)."""
    order = boundary_order(diag)
    chords = sorted(tuple(sorted((order[s.tail], order[s.head]))) for s in diag.strands)
    stack = []
    # non-crossing chords nest like brackets along the boundary
    events = {}
    for a, b in chords:
        events[a] = ("open", (a, b))
        events[b] = ("close", (a, b))
    for pos in sorted(events):
        kind, chord = events[pos]
        if kind == "open":
            stack.append(chord)
        elif not stack or stack.pop() != chord:
            return False
    return True


def canonical(diag: Diagram) -> Diagram:
    """Same pairing and traversal words, laid out on the tail legs."""
    strands = tuple(embed_on_tail_leg(s.tail, s.head, s.word()) for s in diag.strands)
    return replace(diag, strands=strands)


def structurally_close(a: Diagram, b: Diagram, tol: float = 1e-10) -> bool:
    """Equal up to canonical layout and a prefactor difference within tol."""
    ca, cb = canonical(a), canonical(b)
    return (
        ca.d == cb.d
        and ca.top == cb.top
        and ca.bottom == cb.bottom
        and ca.strands == cb.strands
        and ca.loops == cb.loops
        and ca.k == cb.k
        and abs(ca.prefactor - cb.prefactor) <= tol
    )


_CONJ = {"plain": "conjugate", "conjugate": "plain", "transposed": "adjoint", "adjoint": "transposed"}


def dagger(diag: Diagram) -> Diagram:
    """Mirror top and bottom; evaluates to the adjoint matrix."""

    def flip(e):
        return Endpoint("B" if e.side == "T" else "T", e.index)

    strands = []
    for s in diag.strands:
        word = s.word()
        a, b = flip(s.tail), flip(s.head)
        if a.key > b.key:
            a, b = b, a
            new = [Letter(w.label, _CONJ[toggle(w.marker)]) for w in reversed(word)]
        else:
            new = [Letter(w.label, _CONJ[w.marker]) for w in word]
        strands.append(embed_on_tail_leg(a, b, new))
    loops = tuple(tuple(Letter(w.label, _CONJ[w.marker]) for w in loop) for loop in diag.loops)
    return Diagram(
        diag.d, diag.bottom, diag.top, tuple(strands), loops, diag.prefactor.conjugate(), diag.k
    )
