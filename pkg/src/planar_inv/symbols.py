"""Exact formal linear algebra over the X and Y symbol spaces.

``X[a,b;k,l]`` denotes the basis symbol with top entries ``a, b`` (integers)
and bottom entries ``k, l`` (odd integers). ``Y[n;k,l]`` is antisymmetric in
``k, l`` and is stored with ``k < l``.

Text grammar (canonical output, accepted by :func:`parse`)::

    vector := "0" | term (sep term)*
    term   := [coef "*"] symbol
    sep    := " + " | " - "
    coef   := int | int "/" int
    symbol := "X[" int "," int ";" int "," int "]" | "Y[" int ";" int "," int "]"

A leading ``-`` is allowed on the first term. Terms are sorted by symbol.
"""

from collections import namedtuple
from fractions import Fraction
import re

from .exceptions import ParseError, WrongKind
from .indices import DoubleIndex


def _odd(*vals):
    for v in vals:
        if v % 2 == 0:
            raise ValueError(f"bottom entry {v} must be odd")


class XSymbol(namedtuple("XSymbol", "a b k l")):
    __slots__ = ()

    def __new__(cls, a, b, k, l):
        _odd(k, l)
        return super().__new__(cls, int(a), int(b), int(k), int(l))

    @property
    def grade(self):
        return self.a + self.b - self.k - self.l

    def __str__(self):
        return f"X[{self.a},{self.b};{self.k},{self.l}]"


class YSymbol(namedtuple("YSymbol", "n k l")):
    """Canonical Y symbol (``k < l``); build through :func:`y_term`."""

    __slots__ = ()

    def __new__(cls, n, k, l):
        _odd(k, l)
        if not k < l:
            raise ValueError("YSymbol requires k < l; use y_term to canonicalize")
        return super().__new__(cls, int(n), int(k), int(l))

    @property
    def grade(self):
        return self.n - self.k - self.l

    def __str__(self):
        return f"Y[{self.n};{self.k},{self.l}]"


def grade(sym):
    return sym.grade


class _Vector:
    """Finite map symbol -> nonzero Fraction."""

    __slots__ = ("_terms",)
    prefix = ""

    def __init__(self, terms=None):
        acc = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for sym, coef in items:
                sym = self._check_symbol(sym)
                acc[sym] = acc.get(sym, 0) + Fraction(coef)
        self._terms = {s: c for s, c in acc.items() if c != 0}

    def _check_symbol(self, sym):
        raise NotImplementedError

    @classmethod
    def _raw(cls, terms):
        v = cls.__new__(cls)
        v._terms = terms
        return v

    def items(self):
        return sorted(self._terms.items())

    def keys(self):
        return sorted(self._terms)

    def __getitem__(self, sym):
        return self._terms.get(sym, Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.keys())

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        return type(other) is type(self) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self._terms)
        for s, c in other._terms.items():
            out[s] = out.get(s, 0) + c
            if out[s] == 0:
                del out[s]
        return self._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({s: -c for s, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        if scalar == 0:
            return self._raw({})
        return self._raw({s: c * scalar for s, c in self._terms.items()})

    __rmul__ = __mul__

    def __str__(self):
        return serialize(self)

    def __repr__(self):
        return f"{type(self).__name__}({serialize(self)!r})"

    def to_json(self):
        return [[str(s), _fmt_fraction(c)] for s, c in self.items()]


class XVector(_Vector):
    __slots__ = ()
    prefix = "X"

    def _check_symbol(self, sym):
        return sym if isinstance(sym, XSymbol) else XSymbol(*sym)

    def grades(self):
        return {s.grade for s in self._terms}


class YVector(_Vector):
    __slots__ = ()
    prefix = "Y"

    def _check_symbol(self, sym):
        if not isinstance(sym, YSymbol):
            raise TypeError("YVector keys must be canonical YSymbols; use y_term")
        return sym


def x_term(a, b, k, l, coef=1):
    return XVector({XSymbol(a, b, k, l): coef})


def y_term(n, k, l, coef=1):
    """``coef * Y^n_{k,l}`` with antisymmetry applied (zero when ``k == l``)."""
    _odd(k, l)
    if k == l:
        return YVector()
    if k > l:
        return YVector({YSymbol(n, l, k): -Fraction(coef)})
    return YVector({YSymbol(n, k, l): coef})


def psi(x):
    """Linear map X^{a,b}_{k,l} -> Y^{a+b}_{k,l}."""
    out = {}
    for s, c in x.items():
        if s.k == s.l:
            continue
        if s.k < s.l:
            key, cc = YSymbol(s.a + s.b, s.k, s.l), c
        else:
            key, cc = YSymbol(s.a + s.b, s.l, s.k), -c
        out[key] = out.get(key, 0) + cc
        if out[key] == 0:
            del out[key]
    return YVector._raw(out)


def _g_value(n, k, l, m):
    if n - k - l != m:
        return Fraction(0)
    if k + l == 0:
        return Fraction(k - l)
    if k + l in (2, -2):
        return Fraction(l - k, 2)
    return Fraction(0)


def g_m(y, m):
    """The functional g_m evaluated on a Y vector."""
    return sum((c * _g_value(s.n, s.k, s.l, m) for s, c in y.items()), Fraction(0))


# --- J and S symbols -------------------------------------------------------

J_KINDS = ("J+", "JA", "JB")


def _as_index(x):
    return x if isinstance(x, DoubleIndex) else DoubleIndex(*x)


class JSymbol(namedtuple("JSymbol", "kind first second")):
    """Tangency symbol with an unordered pair of double indices (stored sorted)."""

    __slots__ = ()

    def __new__(cls, kind, first, second):
        if kind not in J_KINDS:
            raise WrongKind(f"unknown J kind {kind!r}")
        p, q = sorted((_as_index(first), _as_index(second)), key=tuple)
        return super().__new__(cls, kind, p, q)

    def __str__(self):
        return f"{self.kind}[{self.first},{self.second}]"


class SSymbol(namedtuple("SSymbol", "entries")):
    """Triple-point symbol: cyclic triple of (DoubleIndex, hatted).

    Stored as the lexicographically minimal rotation.
    """

    __slots__ = ()

    def __new__(cls, entries):
        ents = [(_as_index(d), bool(h)) for d, h in entries]
        if len(ents) != 3:
            raise ValueError("an S symbol has three entries")
        keys = [tuple(ents[r:] + ents[:r]) for r in range(3)]
        best = min(keys, key=lambda e: [(tuple(d), h) for d, h in e])
        return super().__new__(cls, best)

    @property
    def n_hats(self):
        return sum(h for _, h in self.entries)

    def __str__(self):
        parts = [("^" if h else "") + str(d) for d, h in self.entries]
        return "S[" + ",".join(parts) + "]"


def f1_jplus(j):
    if j.kind != "J+":
        raise WrongKind(f"expected J+, got {j.kind}")
    (a1, a2), (b1, b2) = j.first, j.second
    return x_term(a1, b1, a2, b2) + x_term(b1, a1, b2, a2)


def f1_ja(j):
    if j.kind != "JA":
        raise WrongKind(f"expected JA, got {j.kind}")
    (a1, a2), (b1, b2) = j.first, j.second
    return x_term(a1, b1 + 1, a2, b2) + x_term(b1, a1 + 1, b2, a2)


def f1_jb(j):
    """J^B equals J^A with both top entries lowered by one."""
    if j.kind != "JB":
        raise WrongKind(f"expected JB, got {j.kind}")
    (a1, a2), (b1, b2) = j.first, j.second
    return f1_ja(JSymbol("JA", (a1 - 1, a2), (b1 - 1, b2)))


def f1(j):
    return {"J+": f1_jplus, "JA": f1_ja, "JB": f1_jb}[j.kind](j)


# --- text format ------------------------------------------------------------


def _fmt_fraction(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def serialize(v):
    if not v:
        return "0"
    out = []
    for k, (s, c) in enumerate(v.items()):
        mag = abs(c)
        body = str(s) if mag == 1 else f"{_fmt_fraction(mag)}*{s}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+)(?:/(\d+))?\s*\*\s*)?"
    r"(?:X\[(-?\d+),(-?\d+);(-?\d+),(-?\d+)\]|Y\[(-?\d+);(-?\d+),(-?\d+)\])\s*"
)


def parse(text, zero="X"):
    """Inverse of :func:`serialize`; returns an XVector or YVector.

    ``zero`` picks the type returned for the text ``"0"``.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty vector text; the zero vector is written 0")
    if text == "0":
        return XVector() if zero == "X" else YVector()
    pos = 0
    xs, ys = [], []
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse vector at offset {pos}: {text[pos:pos + 20]!r}")
        sign, num, den, *rest = m.groups()
        if sign is None and not first:
            raise ParseError(f"missing operator at offset {pos}")
        if den is not None and int(den) == 0:
            raise ParseError("zero denominator")
        coef = Fraction(int(num), int(den) if den else 1) if num else Fraction(1)
        if sign == "-":
            coef = -coef
        if rest[0] is not None:
            try:
                xs.append((XSymbol(*map(int, rest[:4])), coef))
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
        else:
            n, k, l = map(int, rest[4:])
            try:
                ys.append(y_term(n, k, l, coef))
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
        pos = m.end()
        first = False
    if xs and ys:
        raise ParseError("mixed X and Y symbols")
    if ys:
        return sum(ys, YVector())
    return XVector(xs)


def from_json(pairs, kind="X"):
    """Rebuild a vector from ``[[symbol, "p/q"], ...]``."""
    acc = XVector() if kind == "X" else YVector()
    for sym, coef in pairs:
        term = parse(str(sym), zero=kind)
        acc = acc + term * Fraction(coef)
    return acc
