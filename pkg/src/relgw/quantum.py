"""The small relative quantum ring of ``(P^n, P^{n-1})``.

Two independent constructions:

* the monoid model: basis insertions are lattice points of
  ``P = {(a, b) : b >= 1} u {(a, 0) : a >= 0}`` via ``[H^a]_0 = y^a``,
  ``[h^a]_i = y^a x^i`` and ``[h^a]_{-i} = y^(a+1) / x^i`` for ``i > 0``, and
  ``q = x y^n``; the product is lattice addition;
* a constraint solver that knows only the classical ring, the two gradings,
  the identity, the seed relation ``[1]_1 * [H^n]_0 = q [1]_0`` and
  associativity.

Invariants of the small sector are served by ``SmallProvider``, which also
implements the string, divisor and dilaton rewrites; ``check_wdvv`` and
``check_trr`` evaluate the two recursions against any provider.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .insertions import (
    Basis, InsClass, InsertionRing, basis_label, bidegree_of,
)
from .linalg import Inconsistent, SparseSystem

UNSUPPORTED = "unsupported"


class Unsupported(Exception):
    """The provider has no rule producing this invariant."""


# -- the monoid model ---------------------------------------------------------

def in_P(a: int, b: int) -> bool:
    return b >= 1 or (b == 0 and a >= 0)


@dataclass(frozen=True)
class MonoidElem:
    """Finite rational combination of points of ``P``."""

    terms: tuple = ()

    @classmethod
    def from_dict(cls, d: dict) -> "MonoidElem":
        for pt, c in d.items():
            if c and not in_P(*pt):
                raise ValueError(f"lattice point {pt} is not in the monoid")
        return cls(tuple(sorted((pt, Fraction(c)) for pt, c in d.items() if c)))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __mul__(self, other):
        return monoid_mult(self, other)

    def __add__(self, other):
        out = self.as_dict()
        for pt, c in other.terms:
            out[pt] = out.get(pt, 0) + c
        return MonoidElem.from_dict(out)


def monomial(a: int, b: int, coef=1) -> MonoidElem:
    return MonoidElem.from_dict({(a, b): coef})


def basis_point(x: Basis, n: int) -> tuple[int, int]:
    i, a = x
    top = n if i == 0 else n - 1
    if not 0 <= a <= top:
        raise ValueError(f"{basis_label(x)} is not a basis class for n={n}")
    return (i, a) if i >= 0 else (i, a + 1)


def ins_to_monoid(u: InsClass) -> MonoidElem:
    n = u.ring.n
    out: dict = {}
    for x, c in u.terms.items():
        pt = basis_point(x, n)
        out[pt] = out.get(pt, 0) + c
    return MonoidElem.from_dict(out)


def monoid_mult(u: MonoidElem, v: MonoidElem) -> MonoidElem:
    out: dict = {}
    for (a1, b1), c1 in u.terms:
        for (a2, b2), c2 in v.terms:
            pt = (a1 + a2, b1 + b2)
            out[pt] = out.get(pt, 0) + c1 * c2
    return MonoidElem.from_dict(out)


def dictionary_label(a: int, b: int, n: int) -> Basis | None:
    """Inverse of ``basis_point`` (``None`` off the dictionary region)."""
    if a == 0 and 0 <= b <= n:
        return (0, b)
    if a > 0 and 0 <= b <= n - 1:
        return (a, b)
    if a < 0 and 1 <= b <= n:
        return (a, b - 1)
    return None


def decompose_point(a: int, b: int, n: int) -> tuple[int, Basis]:
    """The unique ``(m, label)`` with ``(a, b) = m * (1, n) + point(label)``."""
    hits = []
    m = 0
    while b - m * n >= 0:
        lab = dictionary_label(a - m, b - m * n, n)
        if lab is not None:
            hits.append((m, lab))
        m += 1
    if len(hits) != 1:
        raise ValueError(f"lattice point {(a, b)} has {len(hits)} q-decompositions")
    return hits[0]


@dataclass
class QSeries:
    """``sum_m q^m u_m`` with ``u_m`` insertions, truncated above ``Qmax`` if given."""

    ring: InsertionRing
    comps: dict = field(default_factory=dict)
    Qmax: int | None = None

    def __post_init__(self):
        self.comps = {m: u for m, u in self.comps.items()
                      if not u.is_zero() and (self.Qmax is None or m <= self.Qmax)}

    def __getitem__(self, m: int) -> InsClass:
        return self.comps.get(m, self.ring.zero())

    def __eq__(self, other):
        return isinstance(other, QSeries) and self.comps == other.comps

    def __add__(self, other: "QSeries") -> "QSeries":
        out = dict(self.comps)
        for m, u in other.comps.items():
            out[m] = out[m] + u if m in out else u
        return QSeries(self.ring, out, self.Qmax)

    def scale(self, c) -> "QSeries":
        return QSeries(self.ring, {m: u.scale(c) for m, u in self.comps.items()}, self.Qmax)

    def __str__(self):
        if not self.comps:
            return "0"
        parts = []
        for m in sorted(self.comps):
            body = str(self.comps[m])
            q = "" if m == 0 else ("q" if m == 1 else f"q^{m}")
            parts.append(body if not q else f"{q}*({body})")
        return " + ".join(parts)


def monoid_to_qseries(u: MonoidElem, ring: InsertionRing, Qmax: int | None = None) -> QSeries:
    comps: dict = {}
    for (a, b), c in u.terms:
        m, lab = decompose_point(a, b, ring.n)
        if Qmax is not None and m > Qmax:
            continue
        comps.setdefault(m, {})
        comps[m][lab] = comps[m].get(lab, 0) + c
    return QSeries(ring, {m: ring.from_terms(t) for m, t in comps.items()}, Qmax)


def quantum_product_small(u: InsClass, v: InsClass, Qmax: int | None = None) -> QSeries:
    """The oracle product: map to ``C[P]``, multiply, map back."""
    return monoid_to_qseries(monoid_mult(ins_to_monoid(u), ins_to_monoid(v)), u.ring, Qmax)


def classical_limit(s: QSeries) -> InsClass:
    return s[0]


def oracle_constant(x: Basis, y: Basis, n: int) -> tuple[int, Basis]:
    """``x * y = q^m T`` for basis labels; returns ``(m, T)``."""
    a1, b1 = basis_point(x, n)
    a2, b2 = basis_point(y, n)
    return decompose_point(a1 + a2, b1 + b2, n)


def degree_zero_three_point(a: InsClass, b: InsClass, c: InsClass) -> Fraction:
    """``I_0`` of three insertions; it equals the trilinear form ``A``."""
    return a.ring.trilinear_A(a, b, c)


# -- structure-constant solver ------------------------------------------------

DETERMINED, UNDETERMINED, OUT_OF_WINDOW = "determined", "undetermined", "out_of_window"


def candidate_label(x: Basis, y: Basis, m: int, n: int) -> Basis | None:
    """The only basis label that ``q^m``-part of ``x * y`` can hit by bidegree."""
    d1 = bidegree_of(x) + bidegree_of(y)
    i = d1.deg1 - m
    deg2 = int(d1.deg2) - n * m
    p = deg2 if i >= 0 else deg2 - 1
    top = n if i == 0 else n - 1
    return (i, p) if 0 <= p <= top else None


@dataclass
class StructureTable:
    ring: InsertionRing
    Qmax: int
    values: dict  # (x, y, m) with x <= y -> Fraction (coefficient of the candidate)
    status: dict  # (x, y, m) -> status string

    @staticmethod
    def key(x: Basis, y: Basis, m: int) -> tuple:
        return (min(x, y), max(x, y), m)

    def get(self, x: Basis, y: Basis, m: int):
        k = self.key(x, y, m)
        return self.status[k], self.values.get(k)

    def product(self, x: Basis, y: Basis) -> dict:
        """``{m: (label, coef)}`` for determined nonzero entries."""
        out = {}
        for m in range(self.Qmax + 1):
            st, val = self.get(x, y, m)
            if st == DETERMINED and val:
                out[m] = (candidate_label(x, y, m, self.ring.n), val)
        return out

    def counts(self) -> dict:
        out: dict = {}
        for st in self.status.values():
            out[st] = out.get(st, 0) + 1
        return out

    def to_dict(self) -> dict:
        entries = []
        for (x, y, m) in sorted(self.status):
            st = self.status[(x, y, m)]
            lab = candidate_label(x, y, m, self.ring.n)
            coeffs = {}
            if st == DETERMINED and lab is not None and self.values[(x, y, m)]:
                coeffs[basis_label(lab)] = frac_str(self.values[(x, y, m)])
            entries.append({"lhs": basis_label(x), "rhs": basis_label(y), "q": m,
                            "coeffs": coeffs, "status": st})
        return {"n": self.ring.n, "W": self.ring.W, "Qmax": self.Qmax, "entries": entries}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def frac_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class SolverInconsistent(RuntimeError):
    pass


def solve_structure_constants(n: int, W: int, Qmax: int) -> StructureTable:
    """Structure constants from classical data, gradings, identity, seed, associativity."""
    if W < 1 or Qmax < 1:
        raise ValueError("W and Qmax must be >= 1")
    ring = InsertionRing(n, W)
    basis = ring.basis()
    values: dict = {}
    status: dict = {}
    unit = (0, 0)

    def lookup(x, y, m):
        """(known, value) for the coefficient of the candidate of ``x * y`` at ``q^m``."""
        if candidate_label(x, y, m, n) is None:
            return True, Fraction(0)
        k = StructureTable.key(x, y, m)
        if k not in status:
            return False, None  # a factor outside the window
        st = status[k]
        return (True, values[k]) if st == DETERMINED else (False, k if st == UNDETERMINED else None)

    for x, y in product(basis, repeat=2):
        if x > y:
            continue
        for m in range(Qmax + 1):
            k = (x, y, m)
            lab = candidate_label(x, y, m, n)
            if lab is None:
                status[k], values[k] = DETERMINED, Fraction(0)
            elif not ring.in_window(lab[0]):
                status[k] = OUT_OF_WINDOW
            elif m == 0:
                status[k] = DETERMINED
                values[k] = ring.product_basis(x, y).get(lab, Fraction(0))
            else:
                status[k] = UNDETERMINED

    for M in range(1, Qmax + 1):
        system = SparseSystem()
        unknowns = [k for k, st in status.items() if k[2] == M and st == UNDETERMINED]
        for (x, y, m) in unknowns:
            if unit in (x, y):
                system.add({(x, y, m): 1}, 0)
        seed = StructureTable.key((1, 0), (0, n), 1)
        if M == 1 and seed in status and status[seed] == UNDETERMINED:
            system.add({seed: 1}, 1)
        try:
            for x, y, z in product(basis, repeat=3):
                eq = _associativity_row(x, y, z, M, n, lookup)
                if eq is not None:
                    system.add(*eq)
        except Inconsistent as err:
            raise SolverInconsistent(f"associativity at q^{M}: {err}") from err
        for k in unknowns:
            val = system.value(k)
            if val is not None:
                status[k], values[k] = DETERMINED, val
    return StructureTable(ring, Qmax, values, status)


def _associativity_row(x, y, z, M, n, lookup):
    """Coefficient equation of ``(x*y)*z = x*(y*z)`` at ``q^M`` or ``None``.

    ``None`` when some needed intermediate or output leaves the window or a
    lower-degree factor is still unknown.
    """
    final = None
    row: dict = {}
    const = Fraction(0)
    for sign, (a, b, c) in ((1, (x, y, z)), (-1, (z, y, x))):
        # (a*b)*c ; the right side x*(y*z) = (z*y)*x by commutativity
        for m1 in range(M + 1):
            m2 = M - m1
            T = candidate_label(a, b, m1, n)
            if T is None:
                continue
            out = candidate_label(T, c, m2, n)
            if out is None:
                continue
            if final is None:
                final = out
            k1, v1 = lookup(a, b, m1)
            k2, v2 = lookup(T, c, m2)
            if (k1 and v1 == 0) or (k2 and v2 == 0):
                continue
            if k1 and k2:
                const += sign * v1 * v2
            elif k1 and not k2 and v2 is not None and m2 == M:
                row[v2] = row.get(v2, 0) + sign * v1
            elif k2 and not k1 and v1 is not None and m1 == M:
                row[v1] = row.get(v1, 0) + sign * v2
            else:
                return None
    if final is None:
        return None
    return row, -const


# -- invariants ------------------------------------------------------------------

Query = tuple  # tuple of (psi power, basis label)


def dual_label(x: Basis, n: int) -> Basis:
    i, a = x
    return (0, n - a) if i == 0 else (-i, n - 1 - a)


class SmallProvider:
    """Genus-zero invariants reachable from three-point data.

    Three-point non-descendant invariants come from the monoid model
    (``source="oracle"``) or a solver table; all other queries must reduce to
    them through string, dilaton, divisor or the reverse divisor rule.
    """

    def __init__(self, n: int, table: StructureTable | None = None):
        self.n = n
        self.table = table
        self._cache: dict = {}

    def vdim(self, beta: int, query: Query) -> int:
        legs = sum(1 for _, (i, _) in query if i == 0)
        rho_plus = sum(1 for _, (i, _) in query if i > 0)
        return self.n - 3 + self.n * beta + legs + rho_plus

    def query(self, beta: int, query) -> Fraction:
        key = (beta, tuple(sorted(query)))
        if key not in self._cache:
            self._cache[key] = self._compute(beta, key[1])
        return self._cache[key]

    def get(self, beta: int, query):
        try:
            return self.query(beta, query)
        except Unsupported:
            return UNSUPPORTED

    def _compute(self, beta: int, q: Query) -> Fraction:
        n = self.n
        if beta < 0 or any(a < 0 for a, _ in q):
            return Fraction(0)
        if sum(i for _, (i, _) in q) != beta:
            return Fraction(0)
        if sum(a + p for a, (_, p) in q) != self.vdim(beta, q):
            return Fraction(0)
        k = len(q)
        if beta == 0 and k < 3:
            return Fraction(0)
        base = k == 3 and all(a == 0 for a, _ in q)
        if not (beta == 0 and base):
            j = _find(q, 0, (0, 0))
            if j is not None:
                return sum((self.query(beta, nq) * c for c, nq in string_reduce(q, j)), Fraction(0))
        j = _find(q, 1, (0, 0))
        if j is not None:
            return sum((self.query(beta, nq) * c for c, nq in dilaton_reduce(q, j)), Fraction(0))
        if not base:
            j = _find(q, 0, (0, 1))
            if j is not None:
                return sum((self.query(beta, nq) * c for c, nq in divisor_reduce(q, j, beta, n)),
                           Fraction(0))
        if base:
            return self._three_point(beta, [x for _, x in q])
        if beta > 0 and k < 3 and all(a == 0 for a, _ in q):
            lifted = tuple(q) + ((0, (0, 1)),) * (3 - k)
            return self.query(beta, lifted) / Fraction(beta) ** (3 - k)
        raise Unsupported(f"no rule for I_{beta}({format_query(q)})")

    def _three_point(self, beta: int, xs: list) -> Fraction:
        if self.table is None:
            pts = [basis_point(x, self.n) for x in xs]
            total = (sum(p[0] for p in pts), sum(p[1] for p in pts))
            return Fraction(int(total == (beta, self.n + self.n * beta)))
        # I_beta(x, y, z) = (q^beta part of x*y, z)
        x, y, z = xs
        if beta > self.table.Qmax:
            raise Unsupported(f"q-degree {beta} beyond the table")
        st, val = self.table.get(x, y, beta)
        if st != DETERMINED:
            raise Unsupported(f"{basis_label(x)} * {basis_label(y)} at q^{beta} is {st}")
        lab = candidate_label(x, y, beta, self.n)
        if lab is None or not val:
            return Fraction(0)
        return val * Fraction(int(dual_label(lab, self.n) == z))


def _find(q: Query, a: int, label: Basis):
    for j, item in enumerate(q):
        if item == (a, label):
            return j
    return None


def format_query(q: Query) -> str:
    parts = []
    for a, x in q:
        lab = basis_label(x)
        parts.append(lab if a == 0 else (f"psi*{lab}" if a == 1 else f"psi^{a}*{lab}"))
    return ", ".join(parts)


def string_reduce(q: Query, j: int) -> list:
    """Remove the unit insertion at ``j``; lower each other descendant once."""
    if q[j] != (0, (0, 0)):
        raise ValueError("string rewrite needs [1]@0 without psi")
    rest = q[:j] + q[j + 1:]
    out = []
    for l, (a, x) in enumerate(rest):
        if a >= 1:
            out.append((Fraction(1), rest[:l] + ((a - 1, x),) + rest[l + 1:]))
    return out


def dilaton_reduce(q: Query, j: int) -> list:
    if q[j] != (1, (0, 0)):
        raise ValueError("dilaton rewrite needs psi*[1]@0")
    rest = q[:j] + q[j + 1:]
    return [(Fraction(len(rest) - 2), rest)]


def divisor_reduce(q: Query, j: int, beta: int, n: int) -> list:
    """Divisor equation for ``[H]@0`` at position ``j``."""
    if q[j] != (0, (0, 1)):
        raise ValueError("divisor rewrite needs [H]@0 without psi")
    rest = q[:j] + q[j + 1:]
    out = [(Fraction(beta), rest)] if beta else []
    for l, (a, (i, p)) in enumerate(rest):
        top = n if i == 0 else n - 1
        if a >= 1 and p + 1 <= top:
            out.append((Fraction(1), rest[:l] + ((a - 1, (i, p + 1)),) + rest[l + 1:]))
    return out


# -- WDVV and TRR -----------------------------------------------------------------

def _split_sum(provider, beta, first: Query, second: Query, rest: Query, n: int) -> Fraction:
    """``sum I_b1(first, S1, T) I_b2(T^dual, second, S2)`` over b1 + b2 = beta."""
    total = Fraction(0)
    m = len(rest)
    for b1 in range(beta + 1):
        b2 = beta - b1
        for mask in range(1 << m):
            S1 = tuple(rest[t] for t in range(m) if mask >> t & 1)
            S2 = tuple(rest[t] for t in range(m) if not mask >> t & 1)
            left = first + S1
            i_T = b1 - sum(i for _, (i, _) in left)  # forced by tangency
            top = n if i_T == 0 else n - 1
            for p in range(top + 1):
                T = (i_T, p)
                a = provider.query(b1, left + ((0, T),))
                if not a:
                    continue
                b = provider.query(b2, ((0, dual_label(T, n)),) + second + S2)
                total += a * b
    return total


def check_wdvv(provider: SmallProvider, beta: int, inputs) -> Fraction | str:
    """Left minus right side of WDVV exchanging insertions 2 and 3."""
    q = tuple(inputs)
    if len(q) < 4:
        raise ValueError("WDVV needs at least four insertions")
    n = provider.n
    try:
        lhs = _split_sum(provider, beta, (q[0], q[1]), (q[2], q[3]), q[4:], n)
        rhs = _split_sum(provider, beta, (q[0], q[2]), (q[1], q[3]), q[4:], n)
    except Unsupported:
        return UNSUPPORTED
    return lhs - rhs


def check_trr(provider: SmallProvider, beta: int, inputs) -> Fraction | str:
    """``I(psi^(a1+1) x1, x2, x3, ...)`` minus the split sum; ``a1`` must be >= 1."""
    q = tuple(inputs)
    if len(q) < 3:
        raise ValueError("TRR needs at least three insertions")
    a1, x1 = q[0]
    if a1 < 1:
        raise ValueError("TRR applies to a first insertion carrying psi^(a+1)")
    n = provider.n
    try:
        lhs = provider.query(beta, q)
        rhs = _split_sum(provider, beta, ((a1 - 1, x1),), (q[1], q[2]), q[3:], n)
    except Unsupported:
        return UNSUPPORTED
    return lhs - rhs


def query_from_insertions(items) -> list:
    """Expand ``[(psi power, InsClass)]`` into ``[(coef, Query)]`` by multilinearity."""
    out = [(Fraction(1), ())]
    for a, u in items:
        out = [(c * d, q + ((a, x),)) for c, q in out for x, d in u.terms.items()]
    return out


def invariant(provider: SmallProvider, beta: int, items) -> Fraction:
    return sum((c * provider.query(beta, q) for c, q in query_from_insertions(items)), Fraction(0))


def compare_with_oracle(table: StructureTable) -> dict:
    """Counts per status and the determined entries that disagree with the monoid model."""
    n = table.ring.n
    mismatches = []
    for (x, y, m), st in sorted(table.status.items()):
        if st != DETERMINED:
            continue
        mo, lab = oracle_constant(x, y, n)
        expect = Fraction(int(mo == m and lab == candidate_label(x, y, m, n)))
        if table.values[(x, y, m)] != expect:
            mismatches.append({"lhs": basis_label(x), "rhs": basis_label(y), "q": m,
                               "solver": frac_str(table.values[(x, y, m)]),
                               "oracle": frac_str(expect)})
    counts = table.counts()
    return {"n": n, "W": table.ring.W, "Qmax": table.Qmax, "entries": len(table.status),
            "determined": counts.get(DETERMINED, 0), "undetermined": counts.get(UNDETERMINED, 0),
            "out_of_window": counts.get(OUT_OF_WINDOW, 0), "mismatches": mismatches}
