"""The ring of insertions for the pair ``(P^n, P^{n-1})``.

An insertion is a finite sum of classes ``[alpha]_i``: for contact order
``i = 0`` the class lives on ``X = P^n``, for ``i != 0`` it lives on
``D = P^{n-1}``.  Only contact orders ``|i| <= W`` are representable; any
operation whose nonzero result leaves that window raises ``WindowError``
rather than dropping terms.

Basis elements are addressed by pairs ``(i, a)`` meaning ``[H^a]_0`` when
``i == 0`` and ``[h^a]_i`` otherwise.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .cohomology import CohClass, CohRing, cup_all, integrate, restrict

Basis = tuple  # (contact order i, exponent a)


class WindowError(ValueError):
    """A nonzero term fell outside the contact-order window."""


class InsertionParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Bidegree:
    deg1: int
    deg2: Fraction

    def __add__(self, other):
        return Bidegree(self.deg1 + other.deg1, self.deg2 + other.deg2)

    def __iter__(self):
        return iter((self.deg1, self.deg2))


class InsertionRing:
    """``H^*(X) + sum_{0 < |i| <= W} H^*(D)`` with its pairing and product."""

    def __init__(self, n: int, W: int):
        if n < 1:
            raise ValueError("ambient dimension n must be >= 1")
        if W < 1:
            raise ValueError("window W must be >= 1")
        self.n = n
        self.W = W
        self.X = CohRing(n, "H")
        self.D = CohRing(n - 1, "h")

    def __eq__(self, other):
        return isinstance(other, InsertionRing) and (self.n, self.W) == (other.n, other.W)

    def __hash__(self):
        return hash((InsertionRing, self.n, self.W))

    def __repr__(self):
        return f"InsertionRing(n={self.n}, W={self.W})"

    def with_window(self, W: int) -> "InsertionRing":
        return InsertionRing(self.n, W)

    # -- basis bookkeeping -------------------------------------------------

    def coh_ring(self, i: int) -> CohRing:
        return self.X if i == 0 else self.D

    def top(self, i: int) -> int:
        return self.n if i == 0 else self.n - 1

    def is_basis(self, i: int, a: int) -> bool:
        return 0 <= a <= self.top(i)

    def in_window(self, i: int) -> bool:
        return abs(i) <= self.W

    def basis(self, i: int | None = None) -> list[Basis]:
        """Basis labels at contact order ``i``, or of the whole window."""
        if i is not None:
            return [(i, a) for a in range(self.top(i) + 1)]
        return [b for j in range(-self.W, self.W + 1) for b in self.basis(j)]

    def element(self, i: int, a: int, coef=1) -> "InsClass":
        if not self.is_basis(i, a):
            raise ValueError(f"exponent {a} is not a basis exponent at contact order {i}")
        if not self.in_window(i):
            raise WindowError(f"contact order {i} outside window W={self.W}")
        return InsClass(self, {(i, a): Fraction(coef)})

    def one(self) -> "InsClass":
        return self.element(0, 0)

    def zero(self) -> "InsClass":
        return InsClass(self, {})

    def embed(self, a: CohClass, i: int) -> "InsClass":
        if a.ring != self.coh_ring(i):
            raise ValueError(f"class on {a.ring!r} cannot sit at contact order {i}")
        if not self.in_window(i):
            raise WindowError(f"contact order {i} outside window W={self.W}")
        return InsClass(self, {(i, k): c for k, c in enumerate(a.coeffs) if c})

    def from_terms(self, terms: dict) -> "InsClass":
        """Build from ``{(i, a): coef}``; raises on nonzero out-of-window terms."""
        clean = {}
        for (i, a), c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            if not self.is_basis(i, a):
                raise ValueError(f"exponent {a} is not a basis exponent at contact order {i}")
            if not self.in_window(i):
                raise WindowError(f"contact order {i} outside window W={self.W}")
            clean[(i, a)] = c
        return InsClass(self, clean)

    # -- bilinear and trilinear forms on basis labels ---------------------

    def _mono(self, i: int, a: int) -> CohClass:
        return self.coh_ring(i).monomial(a)

    def pair_basis(self, x: Basis, y: Basis) -> Fraction:
        (i, a), (j, b) = x, y
        if i + j != 0:
            return Fraction(0)
        ring = self.X if i == 0 else self.D
        return integrate(ring.monomial(a) * ring.monomial(b)) if a + b <= ring.m else Fraction(0)

    def _on_D(self, i: int, a: int) -> CohClass:
        m = self._mono(i, a)
        return restrict(m, self.D) if i == 0 else m

    def trilinear_basis(self, x: Basis, y: Basis, z: Basis) -> Fraction:
        idx = (x[0], y[0], z[0])
        if sum(idx) != 0:
            return Fraction(0)
        if idx == (0, 0, 0):
            return integrate(cup_all([self._mono(*x), self._mono(*y), self._mono(*z)]))
        negatives = sum(1 for i in idx if i < 0)
        factors = [self._on_D(*x), self._on_D(*y), self._on_D(*z)]
        if negatives == 2:
            factors.append(self.D.monomial(1) if self.D.m >= 1 else self.D.zero())
        return integrate(cup_all(factors))

    def product_basis(self, x: Basis, y: Basis) -> dict:
        """Case-table product of two basis labels as ``{(i, a): coef}``."""
        (i, a), (j, b) = x, y
        k = i + j
        if i == 0 and j == 0:
            exp = a + b
            top = self.n
        elif i == 0 or j == 0:
            exp = a + b  # restriction of H^a is h^a
            top = self.n - 1
        elif k == 0:
            # iota_!(h^a h^b) = H^{a+b+1}, zero when h^{a+b} already vanishes
            if a + b > self.n - 1:
                return {}
            exp, top = a + b + 1, self.n
        elif (i > 0 and j > 0) or (k < 0 and (i > 0 or j > 0)):
            exp, top = a + b, self.n - 1
        else:
            # both negative, or one negative with positive total: extra factor D
            exp, top = a + b + 1, self.n - 1
        if exp > top:
            return {}
        return {(k, exp): Fraction(1)}

    # -- public operations --------------------------------------------------

    def pairing(self, u: "InsClass", v: "InsClass") -> Fraction:
        self._same(u, v)
        total = Fraction(0)
        for x, c in u.terms.items():
            for y, d in v.terms.items():
                if x[0] + y[0] == 0:
                    total += c * d * self.pair_basis(x, y)
        return total

    def trilinear_A(self, u: "InsClass", v: "InsClass", w: "InsClass") -> Fraction:
        self._same(u, v)
        self._same(u, w)
        total = Fraction(0)
        for x, c in u.terms.items():
            for y, d in v.terms.items():
                for z, e in w.terms.items():
                    if x[0] + y[0] + z[0] == 0:
                        total += c * d * e * self.trilinear_basis(x, y, z)
        return total

    def gram(self, i: int) -> list[list[Fraction]]:
        """Pairing matrix between the basis at ``i`` and the basis at ``-i``."""
        return [[self.pair_basis(x, y) for y in self.basis(-i)] for x in self.basis(i)]

    def dual_basis_terms(self, i: int, a: int) -> dict:
        G = self.gram(i)
        inv = _invert(G)
        # rows of G index basis(i); the dual of x_a is sum_b inv[b][a] y_b
        return {(-i, b): inv[b][a] for b in range(len(G)) if inv[b][a]}

    def dual_basis_element(self, i: int, a: int) -> "InsClass":
        """The class at ``-i`` pairing to 1 with ``(i, a)`` and 0 with the rest."""
        if not self.in_window(i):
            raise WindowError(f"contact order {i} outside window W={self.W}")
        return InsClass(self, self.dual_basis_terms(i, a))

    def product(self, u: "InsClass", v: "InsClass") -> "InsClass":
        self._same(u, v)
        out: dict = {}
        for x, c in u.terms.items():
            for y, d in v.terms.items():
                for z, e in self.product_basis(x, y).items():
                    out[z] = out.get(z, Fraction(0)) + c * d * e
        return self.from_terms(out)

    def product_via_A(self, u: "InsClass", v: "InsClass") -> "InsClass":
        """Product through ``sum_{l,k} A(u, v, T_{l,k}) T^k_{-l}``."""
        self._same(u, v)
        out: dict = {}
        for x, c in u.terms.items():
            for y, d in v.terms.items():
                l = -(x[0] + y[0])
                for k in range(self.top(l) + 1):
                    coef = self.trilinear_basis(x, y, (l, k))
                    if not coef:
                        continue
                    for z, e in self.dual_basis_terms(l, k).items():
                        out[z] = out.get(z, Fraction(0)) + c * d * coef * e
        return self.from_terms(out)

    def bidegree(self, u: "InsClass") -> Bidegree:
        degrees = {bidegree_of(x) for x in u.terms}
        if len(degrees) != 1:
            raise ValueError(f"{u} is not homogeneous")
        return degrees.pop()

    def parse(self, text: str) -> "InsClass":
        return parse(text, self)

    def _same(self, u, v):
        if u.ring.n != v.ring.n:
            raise ValueError("insertions from different pairs")


def bidegree_of(x: Basis) -> Bidegree:
    i, a = x
    return Bidegree(i, Fraction(a + 1 if i < 0 else a))


def _invert(G: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(G)
    M = [list(map(Fraction, row)) + [Fraction(int(r == c)) for c in range(n)]
         for r, row in enumerate(G)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col])
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


@dataclass(frozen=True)
class InsClass:
    ring: InsertionRing
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms",
                           {k: Fraction(v) for k, v in sorted(self.terms.items()) if v})

    def __hash__(self):
        return hash((self.ring.n, tuple(self.terms.items())))

    def __eq__(self, other):
        if not isinstance(other, InsClass):
            return NotImplemented
        return self.ring.n == other.ring.n and self.terms == other.terms

    def _combine(self, other, sign):
        if self.ring.n != other.ring.n:
            raise ValueError("insertions from different pairs")
        ring = self.ring if self.ring.W >= other.ring.W else other.ring
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + sign * v
        return InsClass(ring, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "InsClass":
        c = Fraction(c)
        return InsClass(self.ring, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.ring.product(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def component(self, i: int) -> CohClass:
        ring = self.ring.coh_ring(i)
        coeffs = [self.terms.get((i, a), Fraction(0)) for a in range(ring.rank)]
        return CohClass(ring, tuple(coeffs))

    def indices(self) -> list[int]:
        return sorted({i for i, _ in self.terms})

    def items(self) -> Iterator:
        return iter(self.terms.items())

    def __str__(self):
        return format_terms(self.terms)

    def __repr__(self):
        return f"InsClass({self})"


def basis_label(x: Basis) -> str:
    i, a = x
    s = "H" if i == 0 else "h"
    mono = "1" if a == 0 else (s if a == 1 else f"{s}^{a}")
    return f"[{mono}]@{i}"


def format_terms(terms: dict, label=basis_label) -> str:
    if not terms:
        return "0"
    out = ""
    for x, c in sorted(terms.items()):
        lab = label(x)
        mag = abs(c)
        body = lab if mag == 1 else f"{mag}*{lab}"
        if not out:
            out = body if c > 0 else f"-{mag}*{lab}"
        else:
            out += (" + " if c > 0 else " - ") + body
    return out


# -- parser -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<sym>[-+*/@^\[\]])|(?P<name>[Hh]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise InsertionParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None, value=None):
        tok = self.toks[self.k]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise InsertionParseError(f"expected {want!r}, found {got!r}", tok[2])
        self.k += 1
        return tok

    def integer(self) -> int:
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        return sign * int(self.take("num")[1])

    def expr(self):
        terms = [self.term()]
        while self.peek()[1] in "+-" and self.peek()[0] == "sym":
            if self.take()[1] == "-":
                c, base, i = self.term()
                terms.append((-c, base, i))
            else:
                terms.append(self.term())
        self.take("end")
        return terms

    def term(self):
        coef = Fraction(1)
        tok = self.peek()
        if tok[0] == "num" or tok[1] == "-":
            sign = 1
            if tok[1] == "-":
                self.take()
                sign = -1
            num_tok = self.take("num")
            num = Fraction(int(num_tok[1]))
            if self.peek()[1] == "/":
                self.take()
                den_tok = self.take("num")
                if int(den_tok[1]) == 0:
                    raise InsertionParseError("zero denominator", den_tok[2])
                num /= int(den_tok[1])
            if self.peek()[1] == "@" and num == 1:
                # the bare unit class
                self.take()
                return sign * Fraction(1), (("1", 0), num_tok[2]), self.integer()
            self.take("sym", "*")
            coef = sign * num
        base_pos = self.peek()[2]
        base = self.base()
        self.take("sym", "@")
        i = self.integer()
        return coef, (base, base_pos), i

    def base(self):
        bracket = self.peek()[1] == "["
        if bracket:
            self.take()
        tok = self.peek()
        if tok[0] == "num":
            if tok[1] != "1":
                raise InsertionParseError("only the unit '1' may appear as a bare number", tok[2])
            self.take()
            out = ("1", 0)
        elif tok[0] == "name":
            self.take()
            exp = 1
            if self.peek()[1] == "^":
                self.take()
                exp = int(self.take("num")[1])
            out = (tok[1], exp)
        else:
            raise InsertionParseError("expected 'H^k', 'h^k' or '1'", tok[2])
        if bracket:
            self.take("sym", "]")
        return out


def parse(text: str, ring: InsertionRing) -> InsClass:
    """Parse ``coef*base@i + ...`` where ``base`` is ``H^k``, ``h^k`` or ``1``.

    ``H`` monomials are legal only at contact order 0, ``h`` only away from 0.
    """
    terms: dict = {}
    if text.strip() == "0":
        return InsClass(ring, {})
    for coef, ((sym, exp), pos), i in _Parser(text).expr():
        if sym == "H" and i != 0:
            raise InsertionParseError("'H' classes live at contact order 0 only", pos)
        if sym == "h" and i == 0:
            raise InsertionParseError("'h' classes live at nonzero contact order only", pos)
        if not ring.is_basis(i, exp):
            raise InsertionParseError(f"exponent {exp} too large at contact order {i}", pos)
        if not ring.in_window(i):
            raise WindowError(f"contact order {i} outside window W={ring.W}")
        terms[(i, exp)] = terms.get((i, exp), Fraction(0)) + coef
    return InsClass(ring, terms)


def embed(a: CohClass, i: int, ring: InsertionRing) -> InsClass:
    return ring.embed(a, i)


