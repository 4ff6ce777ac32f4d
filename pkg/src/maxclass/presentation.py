"""Words in ``t, t1`` and the finite presentation of a maximal-class group.

Text syntax: generators ``t`` and ``t1``, products with ``*``, powers
``w^k`` (``k`` may be negative), parentheses, and left-normed commutators
``[a,b,c] = [[a,b],c]`` with ``[a,b] = a^-1 b^-1 a b``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

from .errors import BadParameters, ModelInvalid
from .group import GroupElement, MaxClassGroup


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Pow:
    base: "Word"
    exp: int


@dataclass(frozen=True)
class Mul:
    factors: tuple["Word", ...]


@dataclass(frozen=True)
class Comm:
    left: "Word"
    right: "Word"


Word = Union[Gen, Pow, Mul, Comm]

T = Gen("t")
T1 = Gen("t1")


def comm(*args: Word) -> Word:
    """Left-normed commutator of two or more words."""
    if len(args) < 2:
        raise ValueError("a commutator needs at least two entries")
    out = args[0]
    for w in args[1:]:
        out = Comm(out, w)
    return out


def t_k(k: int) -> Word:
    """``t_1 = t1`` and ``t_k = [t_(k-1), t]``."""
    if k < 1:
        raise ValueError("t_k needs k >= 1")
    return comm(T1, *([T] * (k - 1))) if k > 1 else T1


def _comm_entries(w: Comm) -> list[Word]:
    entries: list[Word] = []
    cur: Word = w
    while isinstance(cur, Comm):
        entries.append(cur.right)
        cur = cur.left
    entries.append(cur)
    return entries[::-1]


def render(w: Word) -> str:
    if isinstance(w, Gen):
        return w.name
    if isinstance(w, Comm):
        return "[" + ",".join(render(e) for e in _comm_entries(w)) + "]"
    if isinstance(w, Pow):
        base = render(w.base)
        if isinstance(w.base, (Mul, Pow)):
            base = f"({base})"
        return f"{base}^{w.exp}"
    if isinstance(w, Mul):
        if not w.factors:
            return "1"
        return "*".join(render(f) for f in w.factors)
    raise TypeError(f"not a word: {w!r}")


_TOKEN = re.compile(r"\s*(t1|t|-?\d+|[\[\]\(\),*^]|1)")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise BadParameters(f"cannot parse word at {text[pos:]!r}")
        out.append(mt.group(1))
        pos = mt.end()
    return out


def parse(text: str) -> Word:
    """Inverse of :func:`render`."""
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise BadParameters(f"expected {expected or 'token'} in {text!r}, got {tok!r}")
        pos += 1
        return tok

    def expr() -> Word:
        factors = [term()]
        while peek() == "*":
            take("*")
            factors.append(term())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def term() -> Word:
        w = atom()
        while peek() == "^":
            take("^")
            w = Pow(w, int(take()))
        return w

    def atom() -> Word:
        tok = take()
        if tok in ("t", "t1"):
            return Gen(tok)
        if tok == "1":
            return Mul(())
        if tok == "(":
            w = expr()
            take(")")
            return w
        if tok == "[":
            entries = [expr()]
            while peek() == ",":
                take(",")
                entries.append(expr())
            take("]")
            return comm(*entries)
        raise BadParameters(f"unexpected token {tok!r} in {text!r}")

    w = expr()
    if pos != len(toks):
        raise BadParameters(f"trailing input in {text!r}")
    return w


def evaluate(w: Word, G: MaxClassGroup, assignment: Mapping[str, GroupElement] | None = None) -> GroupElement:
    """Value of ``w`` in ``G`` under ``t -> s``, ``t1 -> s1`` (or ``assignment``)."""
    env = dict(assignment) if assignment else {"t": G.s, "t1": G.s_i(1)}
    cache: dict[Word, GroupElement] = {}

    def ev(x: Word) -> GroupElement:
        if x in cache:
            return cache[x]
        if isinstance(x, Gen):
            val = env[x.name]
        elif isinstance(x, Pow):
            val = G.power(ev(x.base), x.exp)
        elif isinstance(x, Mul):
            val = G.product([ev(f) for f in x.factors])
        else:
            val = G.commutator(ev(x.left), ev(x.right))
        cache[x] = val
        return val

    return ev(w)


def normal_form_word(G: MaxClassGroup, g: GroupElement) -> Word:
    """The word ``t^e0 t_1^e1 ... t_(n-1)^e_(n-1)`` for ``g`` (zero exponents dropped)."""
    exps = G.normal_form(g)
    factors: list[Word] = []
    for k, e in enumerate(exps):
        if e:
            base = T if k == 0 else t_k(k)
            factors.append(base if e == 1 else Pow(base, e))
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))


def rho(G: MaxClassGroup, w: Word) -> Word:
    """``w`` times the inverse of its normal-form word; ``w`` itself if that word is empty."""
    nf = normal_form_word(G, evaluate(w, G))
    if isinstance(nf, Mul) and not nf.factors:
        return w
    return Mul((w, Pow(nf, -1)))


@dataclass(frozen=True)
class FinitePresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    kinds: tuple[str, ...] = field(default=())

    def census(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for k in self.kinds:
            out[k] = out.get(k, 0) + 1
        return out

    def to_text(self) -> str:
        return "".join(render(r) + "\n" for r in self.relators)

    @classmethod
    def from_text(cls, text: str) -> "FinitePresentation":
        rels = tuple(parse(line) for line in text.splitlines() if line.strip())
        return cls(("t", "t1"), rels)

    def check(self, G: MaxClassGroup) -> list[bool]:
        return [evaluate(r, G) == G.identity for r in self.relators]


def emit_presentation(G: MaxClassGroup) -> FinitePresentation:
    """Relators ``t_n``, ``rho(t^p)``, ``rho((t t1)^p)`` and ``rho([t_2i, t1])``, ``i <= (p-1)/2``."""
    p = G.p
    rels: list[Word] = [t_k(G.n)]
    kinds = ["class"]
    for w in (Pow(T, p), Pow(Mul((T, T1)), p)):
        rels.append(rho(G, w))
        kinds.append("power")
    for i in range(1, (p - 1) // 2 + 1):
        rels.append(rho(G, Comm(t_k(2 * i), T1)))
        kinds.append("commutator")
    pres = FinitePresentation(("t", "t1"), tuple(rels), tuple(kinds))
    bad = [render(r) for r, ok in zip(pres.relators, pres.check(G)) if not ok]
    if bad:
        raise ModelInvalid(f"relators do not hold in the group: {bad}")
    return pres
