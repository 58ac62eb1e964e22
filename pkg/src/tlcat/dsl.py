"""Text format for diagrams.

A source is a sequence of ``;``-terminated clauses::

    dim 2; wires top 2, bottom 2;
    pair T0-B0; pair T1-B1;
    deco T0-B0 @1/3 adjoint sigma2;
    loop [plain sigma1, transposed weylX];
    scalar 0.5 -1.0;
    normexp 2;

``#`` starts a comment running to the end of the line.  Positions accept
decimals or ``p/q`` and are always written back as reduced fractions.  When
``normexp`` is absent the exponent defaults to one unit per cup and cap, the
natural normalization of |Omega> and <Omega|.

Operator names resolve against a table: :func:`builtin_operators` plus any
user matrices read with :func:`parse_matrix_file`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .diagram import MARKERS, Decoration, Diagram, DiagramError, Endpoint, Letter, Strand
from .evaluate import UnknownOperatorError
from .linalg import DimensionMismatchError, identity
from .operators import pauli_and_bell, swap, weyl_xz


class DSLSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class MatchingError(DiagramError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[;,\-@\[\]+])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise DSLSyntaxError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            out.append(Token(kind, text, line, pos - line_start + 1))
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise DSLSyntaxError(msg, tok.line, tok.col)

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            got = t.text or "end of input"
            self.fail(f"expected {want!r}, found {got!r}", t)
        return self.next()

    def integer(self) -> int:
        t = self.expect("num")
        if not t.text.isdigit():
            self.fail(f"expected a nonnegative integer, found {t.text!r}", t)
        return int(t.text)

    def real(self) -> float:
        sign = 1.0
        if self.peek().kind == "punct" and self.peek().text in ("+", "-"):
            sign = -1.0 if self.next().text == "-" else 1.0
        t = self.peek()
        if t.kind == "ident" and t.text in ("inf", "nan"):
            self.fail("non-finite scalar", t)
        t = self.expect("num")
        if "/" in t.text:
            return sign * float(Fraction(t.text))
        return sign * float(t.text)

    def endpoint(self) -> tuple[Endpoint, Token]:
        t = self.expect("ident")
        if not re.fullmatch(r"[TB]\d+", t.text):
            self.fail(f"expected an endpoint like T0 or B1, found {t.text!r}", t)
        return Endpoint(t.text[0], int(t.text[1:])), t

    def pair(self):
        a, ta = self.endpoint()
        self.expect("punct", "-")
        b, _ = self.endpoint()
        return a, b, ta

    def marker(self) -> str:
        t = self.expect("ident")
        if t.text not in MARKERS:
            self.fail(f"unknown marker {t.text!r}", t)
        return t.text


@dataclass
class _Raw:
    d: int | None = None
    top: int | None = None
    bottom: int | None = None


def parse(src: str, ops: Mapping[str, np.ndarray] | None = None) -> Diagram:
    """Parse a diagram.  With ``ops`` given every label must resolve to a d x d matrix."""
    p = _Parser(src)
    raw = _Raw()
    pairs: list[tuple[Endpoint, Endpoint, Token]] = []
    decos: list[tuple[Endpoint, Endpoint, Decoration, Token]] = []
    loops: list[tuple[tuple[Letter, ...], Token]] = []
    scalar = None
    normexp = None
    labels: list[tuple[str, Token]] = []

    while p.peek().kind != "eof":
        head = p.expect("ident")
        kw = head.text
        if kw == "dim":
            if raw.d is not None:
                p.fail("duplicate dim clause", head)
            raw.d = p.integer()
            if raw.d < 1:
                p.fail("dim must be positive", head)
        elif kw == "wires":
            if raw.top is not None:
                p.fail("duplicate wires clause", head)
            p.expect("ident", "top")
            raw.top = p.integer()
            p.expect("punct", ",")
            p.expect("ident", "bottom")
            raw.bottom = p.integer()
        elif kw == "pair":
            pairs.append(p.pair())
        elif kw == "deco":
            a, b, ta = p.pair()
            p.expect("punct", "@")
            t = p.expect("num")
            try:
                pos = Fraction(t.text)
            except (ValueError, ZeroDivisionError):
                p.fail(f"bad position {t.text!r}", t)
            if not 0 < pos < 1:
                p.fail(f"position {t.text} outside (0, 1)", t)
            mk = p.marker()
            name = p.expect("ident")
            labels.append((name.text, name))
            decos.append((a, b, Decoration(pos, name.text, mk), ta))
        elif kw == "loop":
            p.expect("punct", "[")
            word = []
            if not (p.peek().kind == "punct" and p.peek().text == "]"):
                while True:
                    mk = p.marker()
                    name = p.expect("ident")
                    labels.append((name.text, name))
                    word.append(Letter(name.text, mk))
                    if p.peek().kind == "punct" and p.peek().text == ",":
                        p.next()
                        continue
                    break
            p.expect("punct", "]")
            loops.append((tuple(word), head))
        elif kw == "scalar":
            if scalar is not None:
                p.fail("duplicate scalar clause", head)
            scalar = complex(p.real(), p.real())
        elif kw == "normexp":
            if normexp is not None:
                p.fail("duplicate normexp clause", head)
            neg = p.peek().kind == "punct" and p.peek().text == "-"
            if neg:
                p.next()
            normexp = -p.integer() if neg else p.integer()
        else:
            p.fail(f"unknown clause {kw!r}", head)
        if p.peek().kind == "eof":
            break
        p.expect("punct", ";")

    end = p.peek()
    if raw.d is None:
        raise DSLSyntaxError("missing dim clause", end.line, end.col)
    if raw.top is None:
        raise DSLSyntaxError("missing wires clause", end.line, end.col)

    strands: dict[frozenset, list] = {}
    used: set[Endpoint] = set()
    for a, b, tok in pairs:
        for e in (a, b):
            limit = raw.top if e.side == "T" else raw.bottom
            if e.index >= limit:
                raise MatchingError(f"line {tok.line}, column {tok.col}: endpoint {e} out of range")
            if e in used:
                raise MatchingError(f"line {tok.line}, column {tok.col}: endpoint {e} paired twice")
            used.add(e)
        if a == b:
            raise MatchingError(f"line {tok.line}, column {tok.col}: endpoint {a} paired with itself")
        strands[frozenset((a, b))] = []
    if len(used) != raw.top + raw.bottom:
        raise MatchingError("pairs do not cover every endpoint")

    for a, b, deco, tok in decos:
        key = frozenset((a, b))
        if key not in strands:
            raise MatchingError(f"line {tok.line}, column {tok.col}: no pair {a}-{b} to decorate")
        if any(x.position == deco.position for x in strands[key]):
            raise DSLSyntaxError(f"repeated position {deco.position} on {a}-{b}", tok.line, tok.col)
        strands[key].append(deco)

    if ops is not None:
        for name, tok in labels:
            if name not in ops:
                raise UnknownOperatorError(f"line {tok.line}, column {tok.col}: unknown operator {name!r}")
            shape = np.shape(ops[name])
            if shape != (raw.d, raw.d):
                raise DimensionMismatchError(
                    f"line {tok.line}, column {tok.col}: operator {name!r} is {shape}, not {raw.d}x{raw.d}"
                )

    built = []
    for key, ds in strands.items():
        t, h = sorted(key, key=lambda e: e.key)
        built.append(Strand(t, h, tuple(ds)))
    natural = sum(1 for s in built if s.kind != "through")
    return Diagram(
        raw.d,
        raw.top,
        raw.bottom,
        tuple(built),
        tuple(w for w, _ in loops),
        1.0 if scalar is None else scalar,
        natural if normexp is None else normexp,
    )


def _frac(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


def serialize(diag: Diagram) -> str:
    """Canonical single-line text; parse(serialize(D)) == D."""
    parts = [f"dim {diag.d}", f"wires top {diag.top}, bottom {diag.bottom}"]
    for s in diag.strands:
        parts.append(f"pair {s.name()}")
    for s in diag.strands:
        for x in s.decorations:
            parts.append(f"deco {s.name()} @{_frac(x.position)} {x.marker} {x.label}")
    for loop in diag.loops:
        parts.append("loop [" + ", ".join(f"{w.marker} {w.label}" for w in loop) + "]")
    pf = complex(diag.prefactor)
    if pf != 1:
        parts.append(f"scalar {float(pf.real)!r} {float(pf.imag)!r}")
    if diag.k != diag.count("cup") + diag.count("cap"):
        parts.append(f"normexp {diag.k}")
    return " ".join(f"{x};" for x in parts)


def builtin_operators(d: int) -> dict[str, np.ndarray]:
    """Named matrices every source may use.

    ``bell`` and ``perm`` act on two sites and so cannot decorate a
    single strand; they are listed for the matrix-level tools.
    """
    x, z = weyl_xz(d)
    ops = {"id": identity(d), "weylX": x, "weylZ": z, "perm": swap(d)}
    if d == 2:
        pb = pauli_and_bell()
        ops.update(sigma1=pb.sigma1, sigma2=pb.sigma2, sigma3=pb.sigma3, bell=pb.B)
    return ops


def parse_matrix_file(text: str) -> dict[str, np.ndarray]:
    """Read ``dim d`` then ``op <name>`` blocks of d rows of d ``re,im`` pairs."""
    lines = []
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((n, body))
    if not lines:
        raise DSLSyntaxError("empty matrix file", 1, 1)
    n0, first = lines[0]
    m = re.fullmatch(r"dim\s+(\d+)", first)
    if not m:
        raise DSLSyntaxError("expected 'dim <d>' header", n0, 1)
    d = int(m.group(1))
    ops: dict[str, np.ndarray] = {}
    i = 1
    while i < len(lines):
        n, body = lines[i]
        m = re.fullmatch(r"op\s+([A-Za-z_][A-Za-z0-9_]*)", body)
        if not m:
            raise DSLSyntaxError(f"expected 'op <name>', found {body!r}", n, 1)
        name = m.group(1)
        if name in ops:
            raise DSLSyntaxError(f"operator {name!r} defined twice", n, 1)
        rows = []
        for r in range(d):
            i += 1
            if i >= len(lines):
                raise DSLSyntaxError(f"operator {name!r} needs {d} rows", n, 1)
            rn, row = lines[i]
            entries = row.split()
            if len(entries) != d:
                raise DSLSyntaxError(f"row has {len(entries)} entries, expected {d}", rn, 1)
            vals = []
            for e in entries:
                try:
                    re_s, im_s = e.split(",")
                    vals.append(complex(float(re_s), float(im_s)))
                except ValueError:
                    raise DSLSyntaxError(f"bad entry {e!r}; expected re,im", rn, row.find(e) + 1) from None
            rows.append(vals)
        ops[name] = np.array(rows, dtype=complex)
        if not np.all(np.isfinite(ops[name])):
            raise DSLSyntaxError(f"operator {name!r} has non-finite entries", n, 1)
        i += 1
    return ops
