"""Sparse polynomials with rational coefficients and truncated Laurent series.

``Poly`` is a commutative polynomial in named symbols.  ``SymLaurent`` is a
series in a formal ``t`` with coefficients in ``Poly``, expanded at
``t = infinity``: exponents are bounded above and the tail below ``floor``
is unknown (not zero).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple  # sorted tuple of (symbol, exponent), exponents > 0


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for s, e in b:
        exps[s] = exps.get(s, 0) + e
    return tuple(sorted(exps.items()))


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(sorted(m))] = clean.get(tuple(sorted(m)), 0) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    @staticmethod
    def _lift(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly.const(x)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        acc = Poly.const(1)
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def degrees(self) -> set[int]:
        """Total degrees of the monomials present."""
        return {sum(e for _, e in m) for m in self.terms}

    def symbols(self) -> set[str]:
        return {s for m in self.terms for s, _ in m}

    def subs(self, values: Mapping[str, "Poly | int | Fraction"]) -> "Poly":
        acc = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            for s, e in m:
                term = term * (self._lift(values[s]) ** e if s in values else Poly.var(s) ** e)
            acc = acc + term
        return acc

    def to_json(self) -> list:
        return [{"coef": _frac_str(c), "powers": dict(m)} for m, c in sorted(self.terms.items())]

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(s if e == 1 else f"{s}^{e}" for s, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _frac_str(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_sum(items: Iterable[Poly]) -> Poly:
    acc = Poly()
    for p in items:
        acc = acc + p
    return acc


def poly_prod(items: Iterable[Poly]) -> Poly:
    acc = Poly.const(1)
    for p in items:
        acc = acc * p
    return acc


class SymLaurent:
    """Truncated Laurent series in ``t``; coefficients below ``floor`` are unknown."""

    def __init__(self, coeffs: Mapping[int, Poly], floor: int):
        self.coeffs = {e: c for e, c in coeffs.items() if e >= floor and not c.is_zero()}
        self.floor = floor

    @classmethod
    def one(cls, floor: int = -10**9) -> "SymLaurent":
        return cls({0: Poly.const(1)}, floor)

    def leading(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    def coefficient(self, e: int) -> Poly:
        if e < self.floor:
            raise ValueError(f"t^{e} lies below the truncation floor t^{self.floor}")
        return self.coeffs.get(e, Poly())

    def __mul__(self, other: "SymLaurent") -> "SymLaurent":
        la = self.leading()
        lb = other.leading()
        if la is None or lb is None:
            return SymLaurent({}, max(self.floor, other.floor))
        floor = min(self.floor + lb, other.floor + la)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                if e1 + e2 >= floor:
                    out[e1 + e2] = out.get(e1 + e2, Poly()) + c1 * c2
        return SymLaurent(out, floor)

    def __repr__(self):
        body = " + ".join(f"({c})t^{e}" for e, c in sorted(self.coeffs.items(), reverse=True))
        return f"{body or '0'} + O(t^{self.floor - 1})"
