"""Cohomology rings of projective spaces.

``H^*(P^m; Q) = Q[H]/(H^{m+1})`` with the monomial basis ``1, H, ..., H^m``.
The same type houses both the ambient ring of ``X = P^n`` and the ring of the
hyperplane ``D = P^{n-1}``; restriction and Gysin pushforward move between
the two.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class CohRing:
    """The ring ``H^*(P^m)``; ``m`` is the complex dimension."""

    m: int
    symbol: str = "H"

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"dimension must be nonnegative, got {self.m}")

    @property
    def rank(self) -> int:
        return self.m + 1

    def basis(self) -> list["CohClass"]:
        return [self.monomial(a) for a in range(self.m + 1)]

    def monomial(self, a: int, coef=1) -> "CohClass":
        if not 0 <= a <= self.m:
            raise ValueError(f"{self.symbol}^{a} is not a basis monomial of P^{self.m}")
        coeffs = [Fraction(0)] * (self.m + 1)
        coeffs[a] = Fraction(coef)
        return CohClass(self, tuple(coeffs))

    def one(self) -> "CohClass":
        return self.monomial(0)

    def zero(self) -> "CohClass":
        return CohClass(self, (Fraction(0),) * (self.m + 1))

    def structure_constant(self, a: int, b: int, c: int) -> Fraction:
        """Coefficient of ``H^c`` in ``H^a * H^b``."""
        return Fraction(1 if a + b == c and c <= self.m else 0)

    def gram(self) -> list[list[Fraction]]:
        """Poincare pairing matrix on the monomial basis."""
        return [[Fraction(1 if a + b == self.m else 0) for b in range(self.rank)]
                for a in range(self.rank)]

    def dual_exponent(self, a: int) -> int:
        return self.m - a

    def __repr__(self):
        return f"CohRing(P^{self.m})"


def make_ring(m: int, symbol: str = "H") -> CohRing:
    return CohRing(m, symbol)


@dataclass(frozen=True)
class CohClass:
    ring: CohRing
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.ring.rank:
            raise ValueError("coefficient vector has wrong length")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def _check(self, other: "CohClass"):
        if not isinstance(other, CohClass) or other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring!r} vs {getattr(other, 'ring', other)!r}")

    def __add__(self, other):
        self._check(other)
        return CohClass(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return CohClass(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CohClass(self.ring, tuple(-a for a in self.coeffs))

    def scale(self, c) -> "CohClass":
        c = Fraction(c)
        return CohClass(self.ring, tuple(c * a for a in self.coeffs))

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return cup(self, other)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> list[int]:
        return [a for a, c in enumerate(self.coeffs) if c]

    def is_monomial(self) -> bool:
        return len(self.support()) == 1

    def __str__(self):
        s = self.ring.symbol
        terms = []
        for a, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if a == 0 else (s if a == 1 else f"{s}^{a}")
            if c == 1:
                terms.append(mono)
            elif a == 0:
                terms.append(str(c))
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"


def cup(a: CohClass, b: CohClass) -> CohClass:
    """Truncated polynomial product."""
    a._check(b)
    m = a.ring.m
    out = [Fraction(0)] * (m + 1)
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j, y in enumerate(b.coeffs[: m + 1 - i]):
            if y:
                out[i + j] += x * y
    return CohClass(a.ring, tuple(out))


def cup_all(classes: Sequence[CohClass]) -> CohClass:
    it = iter(classes)
    acc = next(it)
    for c in it:
        acc = cup(acc, c)
    return acc


def integrate(a: CohClass) -> Fraction:
    return a.coeffs[a.ring.m]


def restrict(a: CohClass, target: CohRing | None = None) -> CohClass:
    """Pull back along the hyperplane inclusion ``P^{m-1} -> P^m``."""
    m = a.ring.m
    if m == 0:
        raise ValueError("P^0 contains no hyperplane")
    target = target or CohRing(m - 1, "h")
    if target.m != m - 1:
        raise ValueError("restriction target must have dimension one less")
    return CohClass(target, a.coeffs[:m])


def gysin(a: CohClass, target: CohRing | None = None) -> CohClass:
    """Pushforward along the hyperplane inclusion: ``h^a -> H^{a+1}``."""
    m = a.ring.m
    target = target or CohRing(m + 1, "H")
    if target.m != m + 1:
        raise ValueError("gysin target must have dimension one more")
    return CohClass(target, (Fraction(0),) + a.coeffs)


def c1_log_tangent(n: int) -> CohClass:
    """``c_1(T_{P^n}(-log P^{n-1})) = (n+1)H - H``."""
    if n < 1:
        raise ValueError("n must be positive")
    X = CohRing(n, "H")
    euler = X.monomial(1, n + 1)
    divisor = X.monomial(1)
    return euler - divisor


def hodge_p(a: CohClass) -> int:
    """``H^a`` has Hodge type ``(a, a)``."""
    supp = a.support()
    if len(supp) != 1:
        raise ValueError(f"hodge_p needs a nonzero monomial, got {a}")
    return supp[0]


def linear_combination(pairs: Iterable[tuple[Fraction, CohClass]], ring: CohRing) -> CohClass:
    acc = ring.zero()
    for c, x in pairs:
        acc = acc + x.scale(c)
    return acc
