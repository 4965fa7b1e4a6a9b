"""Genus-zero Givental formalism and Virasoro operators for ``(P^n, P^{n-1})``.

Operators on ``H = (ring of insertions)((z^-1))`` are stored exactly as
``EndOp``: a term ``(x, y, s) -> c(k)`` sends ``x z^k`` to ``c(k) y z^(k+s)``
where ``c`` is a polynomial in the exponent ``k``.  Composition and brackets
are therefore exact; ``ZSeries`` carries an explicit z-window and applying an
operator that leaves it raises ``ZWindowError``.

Darboux coordinates follow Givental:
``f = sum_l q_{l,x} x z^l + sum_l p_{l,x} x^dual (-z)^(-1-l)`` so that
``Omega(p_{l,x}-direction, q_{l,x}-direction) = 1``.  Quantized operators act
on functions of ``t_{l;x}`` (``x`` a basis label, the unit is ``(0, 0)``)
after the dilaton shift ``q_{1;(0,0)} = t_{1;(0,0)} - 1``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, factorial

from .insertions import Basis, InsertionRing, basis_label
from .laurent import Poly
from .quantum import SmallProvider, Unsupported, dual_label, frac_str

K = Poly.var("k")
UNIT: Basis = (0, 0)


class ZWindowError(ValueError):
    """An operator pushed a z-exponent outside the representable window."""


class InsufficientMargin(ValueError):
    """The interior window left after margins is empty."""


# -- vectors ------------------------------------------------------------------------

@dataclass
class ZSeries:
    ring: InsertionRing
    zmin: int
    zmax: int
    comps: dict = field(default_factory=dict)  # z-exponent -> InsClass

    def __post_init__(self):
        for k in self.comps:
            if not self.zmin <= k <= self.zmax:
                raise ZWindowError(f"z^{k} outside [{self.zmin}, {self.zmax}]")
        self.comps = {k: u for k, u in self.comps.items() if not u.is_zero()}

    @classmethod
    def basis_vector(cls, ring, x: Basis, k: int, zmin: int, zmax: int, coef=1) -> "ZSeries":
        return cls(ring, zmin, zmax, {k: ring.element(*x, coef)})

    def __getitem__(self, k):
        return self.comps.get(k, self.ring.zero())

    def __add__(self, other: "ZSeries") -> "ZSeries":
        out = dict(self.comps)
        for k, u in other.comps.items():
            out[k] = out[k] + u if k in out else u
        return ZSeries(self.ring, min(self.zmin, other.zmin), max(self.zmax, other.zmax), out)

    def scale(self, c) -> "ZSeries":
        return ZSeries(self.ring, self.zmin, self.zmax, {k: u.scale(c) for k, u in self.comps.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, ZSeries) and self.comps == other.comps

    def items(self):
        for k in sorted(self.comps):
            for x, c in sorted(self.comps[k].terms.items()):
                yield k, x, c

    def __str__(self):
        parts = [f"({self.comps[k]})z^{k}" for k in sorted(self.comps)]
        return " + ".join(parts) or "0"


def omega(f: ZSeries, g: ZSeries) -> Fraction:
    """``Res_{z=0} (f(-z), g(z)) dz = sum_k (-1)^k (f_k, g_{-1-k})``."""
    total = Fraction(0)
    for k, u in f.comps.items():
        v = g.comps.get(-1 - k)
        if v is not None:
            total += (-1) ** (k % 2) * f.ring.pairing(u, v)
    return total


# -- exact operators ---------------------------------------------------------------------

class EndOp:
    """Linear operator ``x z^k -> sum c(k) y z^(k+s)`` over a window of labels."""

    def __init__(self, ring: InsertionRing, terms: dict | None = None):
        self.ring = ring
        self.terms = {key: p for key, p in (terms or {}).items() if not p.is_zero()}

    @classmethod
    def shift(cls, ring, s: int) -> "EndOp":
        return cls(ring, {(x, x, s): Poly.const(1) for x in ring.basis()})

    def __add__(self, other: "EndOp") -> "EndOp":
        out = dict(self.terms)
        for key, p in other.terms.items():
            out[key] = out.get(key, Poly()) + p
        return EndOp(self.ring, out)

    def scale(self, c) -> "EndOp":
        return EndOp(self.ring, {key: p * Fraction(c) for key, p in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __matmul__(self, other: "EndOp") -> "EndOp":
        """Composition ``self o other``."""
        by_source: dict = {}
        for (y, w, s), p in self.terms.items():
            by_source.setdefault(y, []).append((w, s, p))
        out: dict = {}
        for (x, y, s1), p1 in other.terms.items():
            for w, s2, p2 in by_source.get(y, ()):
                key = (x, w, s1 + s2)
                out[key] = out.get(key, Poly()) + p2.subs({"k": K + s1}) * p1
        return EndOp(self.ring, out)

    def __eq__(self, other):
        return isinstance(other, EndOp) and self.terms == other.terms

    def max_shift(self) -> int:
        return max((abs(s) for _, _, s in self.terms), default=0)

    def apply(self, f: ZSeries) -> ZSeries:
        out: dict = {}
        for k, x, c in f.items():
            for (x0, y, s), p in self._from(x):
                val = _eval(p, k) * c
                if not val:
                    continue
                if not f.zmin <= k + s <= f.zmax:
                    raise ZWindowError(f"z^{k + s} outside [{f.zmin}, {f.zmax}]")
                out.setdefault(k + s, {})
                out[k + s][y] = out[k + s].get(y, 0) + val
        return ZSeries(f.ring, f.zmin, f.zmax, {k: self.ring.from_terms(t) for k, t in out.items()})

    def _from(self, x):
        if not hasattr(self, "_index"):
            self._index: dict = {}
            for key, p in self.terms.items():
                self._index.setdefault(key[0], []).append((key, p))
        return self._index.get(x, ())

    def to_dict(self) -> list:
        return [{"from": basis_label(x), "to": basis_label(y), "shift": s, "coef": str(p)}
                for (x, y, s), p in sorted(self.terms.items())]


def _eval(p: Poly, k: int) -> Fraction:
    total = Fraction(0)
    for mono, c in p.terms.items():
        total += c * (k ** mono[0][1] if mono else 1)
    return total


def mu_value(x: Basis, n: int) -> Fraction:
    """``dim/2 - p`` for ``i >= 0`` and ``dim/2 - p - 1`` for ``i < 0``."""
    i, p = x
    return Fraction(n, 2) - p - (1 if i < 0 else 0)


def mu_op(ring: InsertionRing) -> EndOp:
    return EndOp(ring, {(x, x, 0): Poly.const(mu_value(x, ring.n)) for x in ring.basis()})


def rho_op(ring: InsertionRing) -> EndOp:
    """Cup with ``c_1(T_X(-log D)) = nH`` (``nh`` on the divisor copies)."""
    terms = {}
    for x in ring.basis():
        i, a = x
        if a + 1 <= ring.top(i):
            terms[(x, (i, a + 1), 0)] = Poly.const(ring.n)
    return EndOp(ring, terms)


def l_op(m: int, ring: InsertionRing) -> EndOp:
    """``l_{-1} = z^-1``, ``l_0 = z d/dz + 1/2 + mu + rho/z``, ``l_m = l_0 (z l_0)^m``."""
    if m < -1:
        raise ValueError("l_m is defined for m >= -1")
    if m == -1:
        return EndOp.shift(ring, -1)
    l0 = (EndOp(ring, {(x, x, 0): K + Fraction(1, 2) for x in ring.basis()})
          + mu_op(ring) + (rho_op(ring) @ EndOp.shift(ring, -1)))
    out = l0
    zl0 = EndOp.shift(ring, 1) @ l0
    for _ in range(m):
        out = out @ zl0
    return out


def bracket(A: EndOp, B: EndOp) -> EndOp:
    return (A @ B) - (B @ A)


def check_bracket(m: int, k: int, ring: InsertionRing) -> bool:
    """``{l_m, l_k} = (k - m) l_{m+k}`` as exact operators."""
    lhs = bracket(l_op(m, ring), l_op(k, ring))
    if m + k < -1:
        return lhs == EndOp(ring)
    return lhs == l_op(m + k, ring).scale(k - m)


def check_bracket_windowed(m: int, k: int, ring: InsertionRing, zmin: int, zmax: int) -> int:
    """Compare both sides on every basis vector of the interior z-window.

    Returns the number of vectors compared; raises ``InsufficientMargin`` if
    the margins swallow the window.
    """
    A, B = l_op(m, ring), l_op(k, ring)
    rhs = l_op(m + k, ring).scale(k - m) if m + k >= -1 else EndOp(ring)
    margin = A.max_shift() + B.max_shift()
    lo, hi = zmin + margin, zmax - margin
    if lo > hi:
        raise InsufficientMargin(f"margin {margin} leaves nothing of [{zmin}, {zmax}]")
    count = 0
    for x in ring.basis():
        for e in range(lo, hi + 1):
            f = ZSeries.basis_vector(ring, x, e, zmin, zmax)
            lhs = A.apply(B.apply(f)) - B.apply(A.apply(f))
            if lhs != rhs.apply(f):
                raise AssertionError(f"bracket fails on {basis_label(x)} z^{e}")
            count += 1
    return count


def symplectic_residual(A: EndOp, ring: InsertionRing, zmin: int, zmax: int) -> Fraction:
    """Max ``|Omega(Af, g) + Omega(f, Ag)|`` over basis vectors of the interior window."""
    margin = A.max_shift()
    lo, hi = zmin + margin, zmax - margin
    if lo > hi:
        raise InsufficientMargin(f"margin {margin} leaves nothing of [{zmin}, {zmax}]")
    vecs = [ZSeries.basis_vector(ring, x, e, zmin, zmax) for x in ring.basis() for e in range(lo, hi + 1)]
    images = [A.apply(f) for f in vecs]
    worst = Fraction(0)
    for f, Af in zip(vecs, images):
        for g, Ag in zip(vecs, images):
            worst = max(worst, abs(omega(Af, g) + omega(f, Ag)))
    return worst


# -- Darboux coordinates and quadratic Hamiltonians ---------------------------------------

def coordinates(ring: InsertionRing, levels: int) -> list:
    """Keys ``("q"|"p", l, x)`` for ``0 <= l <= levels`` and window labels ``x``."""
    return [(kind, l, x) for kind in ("q", "p") for l in range(levels + 1) for x in ring.basis()]


def darboux_vector(key, ring: InsertionRing, zmin: int, zmax: int) -> ZSeries:
    kind, l, x = key
    if kind == "q":
        return ZSeries.basis_vector(ring, x, l, zmin, zmax)
    return ZSeries.basis_vector(ring, dual_label(x, ring.n), -1 - l, zmin, zmax, (-1) ** ((1 + l) % 2))


def hamiltonian(A: EndOp, ring: InsertionRing, levels: int) -> dict:
    """``h_A(f) = Omega(Af, f) / 2`` as ``{sorted (key, key): coef}``."""
    zpad = levels + 2 + A.max_shift()
    coords = coordinates(ring, levels)
    h: dict = {}
    for u in coords:
        Au = A.apply(darboux_vector(u, ring, -zpad, zpad))
        for k, y, c in Au.items():
            # Omega(c y z^k, e_v) is nonzero for one v only: q_{l,x} meets
            # y = dual(x) at k = -1 - l, and p_{l,x} meets y = x at k = l
            if k <= -1:
                v = ("q", -1 - k, dual_label(y, ring.n))
                val = (-1) ** (k % 2) * c
            else:
                v = ("p", k, y)
                val = -c
            if v[1] > levels or not ring.in_window(v[2][0]):
                continue
            pair = tuple(sorted((u, v)))
            h[pair] = h.get(pair, 0) + Fraction(val, 2)
    return {k: c for k, c in h.items() if c}


# -- differential operators -----------------------------------------------------------------

def var_name(v) -> str:
    l, x = v
    return f"t[{l};{x[0]},{x[1]}]"


class DiffOperator:
    """Sum of ``coef * hbar^e * (monomial in t) * (derivatives in t)``."""

    def __init__(self, terms: dict | None = None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    def add_term(self, coef, hbar: int, vars=(), derivs=()):
        key = (hbar, tuple(sorted(vars)), tuple(sorted(derivs)))
        self.terms[key] = self.terms.get(key, 0) + Fraction(coef)
        if not self.terms[key]:
            del self.terms[key]

    def __add__(self, other):
        out = DiffOperator(self.terms)
        for (h, v, d), c in other.terms.items():
            out.add_term(c, h, v, d)
        return out

    def scale(self, c):
        return DiffOperator({k: v * c for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.terms == other.terms

    def restrict(self, keep) -> "DiffOperator":
        return DiffOperator({k: c for k, c in self.terms.items() if keep(k)})

    def to_json(self) -> list:
        return [{"hbar": h, "coef": frac_str(c), "vars": [var_name(x) for x in v],
                 "derivs": [var_name(x) for x in d]}
                for (h, v, d), c in sorted(self.terms.items())]

    def __str__(self):
        rows = []
        for (h, v, d), c in sorted(self.terms.items()):
            hb = {-1: "/hbar", 0: "", 1: "*hbar"}[h]
            mono = "*".join(var_name(x) for x in v)
            der = "".join(f" d/d{var_name(x)}" for x in d)
            rows.append(f"{frac_str(c)}{'*' + mono if mono else ''}{der}{hb}")
        return "\n".join(rows) or "0"


def quantize(h: dict) -> DiffOperator:
    """``qq -> qq/hbar``, ``qp -> q d/dq'``, ``pp -> hbar d^2/dq dq'`` (variables ``(l, x)``)."""
    op = DiffOperator()
    for (u, v), c in h.items():
        kinds = (u[0], v[0])
        a, b = (u[1], u[2]), (v[1], v[2])
        if kinds == ("q", "q"):
            op.add_term(c, -1, (a, b))
        elif kinds == ("p", "q"):
            op.add_term(c, 0, (b,), (a,))
        elif kinds == ("q", "p"):
            op.add_term(c, 0, (a,), (b,))
        elif kinds == ("p", "p"):
            op.add_term(c, 1, (), (a, b))
        else:
            raise ValueError(f"not a quadratic monomial: {u}, {v}")
    return op


DILATON = (1, UNIT)


def dilaton_shift(op: DiffOperator) -> DiffOperator:
    """Substitute ``q_{1;unit} = t_{1;unit} - 1`` in the multiplication part."""
    out = DiffOperator()
    for (h, vars, derivs), c in op.terms.items():
        m = vars.count(DILATON)
        rest = tuple(v for v in vars if v != DILATON)
        for j in range(m + 1):
            # (t - 1)^m = sum_j C(m, j) t^j (-1)^(m-j)
            coef = c * comb(m, j) * (-1) ** (m - j)
            out.add_term(coef, h, rest + (DILATON,) * j, derivs)
    return out


def quantized_l(m: int, ring: InsertionRing, levels: int) -> DiffOperator:
    """``-(h_{l_m})^`` after the dilaton shift."""
    return dilaton_shift(quantize(hamiltonian(l_op(m, ring), ring, levels))).scale(-1)


def build_L(m: int, ring: InsertionRing, levels: int) -> DiffOperator:
    """Explicit ``L_{-1}`` and ``L_0`` for ``(P^n, P^{n-1})``, variables up to ``levels``."""
    n = ring.n
    basis = ring.basis()
    op = DiffOperator()
    if m == -1:
        op.add_term(-1, 0, (), ((0, UNIT),))
        for l in range(levels):
            for x in basis:
                op.add_term(1, 0, ((l + 1, x),), ((l, x),))
        for x in basis:
            for y in basis:
                c = ring.pair_basis(x, y)
                if c:
                    op.add_term(Fraction(c, 2), -1, ((0, x), (0, y)))
        return op
    if m == 0:
        if levels >= 1:
            op.add_term(Fraction(-(3 - n), 2), 0, (), ((1, UNIT),))
        for l in range(levels + 1):
            for x in basis:
                op.add_term(-mu_value(x, n) + l + Fraction(1, 2), 0, ((l, x),), ((l, x),))
        # (c1, T_0^k) is the coefficient of c1 = nH on T_{0,k}
        op.add_term(-n, 0, (), ((0, (0, 1)),))
        rho = rho_op(ring)
        for (x, y, _), p in rho.terms.items():
            c = p.constant()
            for l in range(levels):
                op.add_term(c, 0, ((l + 1, x),), ((l, y),))
        for (x, y, _), p in rho.terms.items():
            for w in basis:
                pair = ring.pair_basis(y, w)
                if pair:
                    op.add_term(p.constant() * pair / 2, -1, ((0, x), (0, w)))
        return op
    raise ValueError("explicit displays exist for m = -1 and m = 0 only")


# -- the potential and the genus-zero check ----------------------------------------------

@dataclass
class PotentialSeries:
    """Coefficients of ``Q^beta prod t^n / prod n!`` indexed by ``(beta, sorted vars)``."""

    n: int
    W: int
    levels: int
    max_vars: int
    max_beta: int
    coeffs: dict = field(default_factory=dict)
    unsupported: set = field(default_factory=set)

    def variables(self) -> list:
        ring = InsertionRing(self.n, self.W)
        return [(l, x) for l in range(self.levels + 1) for x in ring.basis()]

    def in_truncation(self, beta, mono) -> bool:
        return (0 <= beta <= self.max_beta and len(mono) <= self.max_vars
                and all(l <= self.levels and abs(x[0]) <= self.W for l, x in mono))


def assemble_potential(provider: SmallProvider, W: int, levels: int, max_vars: int,
                       max_beta: int) -> PotentialSeries:
    F = PotentialSeries(provider.n, W, levels, max_vars, max_beta)
    vars = F.variables()
    for beta in range(max_beta + 1):
        for k in range(max_vars + 1):
            for mono in combinations_with_replacement(vars, k):
                if sum(x[0] for _, x in mono) != beta:
                    continue
                try:
                    val = provider.query(beta, mono)
                except Unsupported:
                    F.unsupported.add((beta, mono))
                    continue
                if val:
                    sym = 1
                    for c in Counter(mono).values():
                        sym *= factorial(c)
                    F.coeffs[(beta, mono)] = val / sym
    return F


def _remove_one(mono: tuple, v) -> tuple | None:
    if v not in mono:
        return None
    lst = list(mono)
    lst.remove(v)
    return tuple(lst)


def _derivative(F: PotentialSeries, v) -> tuple[dict, set]:
    """``dF/dt_v`` as ``{(beta, mono): coef}`` plus tainted keys."""
    out, bad = {}, set()
    for (beta, mono), c in F.coeffs.items():
        rest = _remove_one(mono, v)
        if rest is not None:
            out[(beta, rest)] = out.get((beta, rest), 0) + c * mono.count(v)
    for beta, mono in F.unsupported:
        rest = _remove_one(mono, v)
        if rest is not None:
            bad.add((beta, rest))
    return out, bad


@dataclass
class ResidualReport:
    values: dict          # (beta, mono) -> nonzero residual on determined monomials
    determined: int
    undetermined: int

    @property
    def vanishes(self) -> bool:
        return not self.values


def genus0_residual(L: DiffOperator, F: PotentialSeries) -> ResidualReport:
    """``hbar^-1`` part of ``exp(-F/hbar) L exp(F/hbar)`` on testable monomials."""
    res: dict = {}
    bad: set = set()
    cache: dict = {}

    def dF(v):
        if v not in cache:
            cache[v] = _derivative(F, v)
        return cache[v]

    def add(beta, mono, c):
        key = (beta, tuple(sorted(mono)))
        res[key] = res.get(key, 0) + c

    for (h, vars, derivs), c in L.terms.items():
        if h == -1 and not derivs:
            add(0, vars, c)
        elif h == 0 and len(derivs) == 1:
            vals, tainted = dF(derivs[0])
            for (beta, mono), d in vals.items():
                add(beta, vars + mono, c * d)
            for beta, mono in tainted:
                bad.add((beta, tuple(sorted(vars + mono))))
        elif h == 1 and len(derivs) == 2:
            (va, ta), (vb, tb) = dF(derivs[0]), dF(derivs[1])
            for (b1, m1), d1 in va.items():
                for (b2, m2), d2 in vb.items():
                    if b1 + b2 <= F.max_beta:
                        add(b1 + b2, vars + m1 + m2, c * d1 * d2)
            for (b1, m1) in ta:
                for (b2, m2) in list(vb) + list(tb):
                    bad.add((b1 + b2, tuple(sorted(vars + m1 + m2))))
            for (b2, m2) in tb:
                for (b1, m1) in va:
                    bad.add((b1 + b2, tuple(sorted(vars + m1 + m2))))
        elif h == 0 and not derivs:
            continue  # constants only affect hbar^0
        else:
            raise ValueError(f"unexpected operator term {(h, vars, derivs)}")

    def testable(key):
        beta, mono = key
        return (beta <= F.max_beta and len(mono) <= F.max_vars - 1
                and all(l <= F.levels and abs(x[0]) <= F.W for l, x in mono))

    keys = {k for k in res if testable(k)} | {k for k in bad if testable(k)}
    determined = [k for k in keys if k not in bad]
    values = {k: res[k] for k in determined if res.get(k)}
    return ResidualReport(values, len(determined), len(keys) - len(determined))


# -- the anomaly of the cutoff ---------------------------------------------------------------

def cocycle(hA: dict, hB: dict) -> Fraction:
    """``C(h_A, h_B)`` from ``C(pp, qq) = -C(qq, pp) = 1 + delta`` on matching monomials."""
    total = Fraction(0)
    for (u, v), a in hA.items():
        if u[0] == v[0] == "p":
            mirror = (("q",) + u[1:], ("q",) + v[1:])
            sign = 1
        elif u[0] == v[0] == "q":
            mirror = (("p",) + u[1:], ("p",) + v[1:])
            sign = -1
        else:
            continue
        b = hB.get(tuple(sorted(mirror)), 0)
        if b:
            total += sign * a * b * (2 if u == v else 1)
    return total


def anomaly(N: int, n: int, levels: int = 2) -> Fraction:
    """``C(h_{l_-1}, h_{l_1})`` with all contact orders ``|i| > N`` cut off."""
    if N < 1:
        raise ValueError("cutoff must be >= 1")
    ring = InsertionRing(n, N)
    return cocycle(hamiltonian(l_op(-1, ring), ring, levels), hamiltonian(l_op(1, ring), ring, levels))


def dilaton_q(t: ZSeries) -> ZSeries:
    """Positive-part coordinates ``q(z) = -z + t(z)`` of a point ``t`` in ``H_+``."""
    if any(k < 0 for k in t.comps):
        raise ValueError("t(z) must lie in the positive part")
    return t + ZSeries.basis_vector(t.ring, UNIT, 1, t.zmin, max(t.zmax, 1), -1)
