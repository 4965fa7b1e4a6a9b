from fractions import Fraction

import pytest
import sympy as sp

from relgw.cycleclasses import (
    C_G, C_type0, C_typeInf, c_l, leading_power, node_weight_product, root_class,
    sigma_k, sym_evD, sym_Psi, sym_PsiInf, sym_psi,
)
from relgw.graphs import Root, TopType, Vertex, enumerate_graphs
from relgw.laurent import Poly, SymLaurent


def rubber(weights, neg_marks=()):
    roots = [Root(w, "node") for w in weights]
    roots += [Root(w, "mark", j + 1) for j, w in enumerate(neg_marks)]
    return Vertex("zero", 0, (), tuple(roots))


# -- Poly / SymLaurent ----------------------------------------------------------

def test_poly_arithmetic():
    x, y = Poly.var("x"), Poly.var("y")
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y
    assert (x - x).is_zero()
    assert ((x + 1) * Fraction(1, 2)).constant() == Fraction(1, 2)
    assert (x * y + x).subs({"y": 2}) == 3 * x
    assert (x * y).to_json() == [{"coef": "1", "powers": {"x": 1, "y": 1}}]


def test_laurent_floor():
    a = SymLaurent({0: Poly.const(1), -1: Poly.const(2)}, -1)
    b = SymLaurent({1: Poly.const(1), 0: Poly.const(3)}, 0)
    ab = a * b
    assert ab.floor == 0 and ab.leading() == 1
    assert ab.coefficient(0) == 5
    with pytest.raises(ValueError):
        ab.coefficient(-1)


# -- sigma, c(l), factors ---------------------------------------------------------

def test_sigma_examples():
    v = rubber([-2, -3])
    assert sigma_k(v, 0) == 1
    e1 = 2 * sym_psi(0, 0) - sym_evD(0, 0)
    e2 = 3 * sym_psi(0, 1) - sym_evD(0, 1)
    assert sigma_k(v, 1) == e1 + e2
    assert sigma_k(v, 2) == e1 * e2
    assert sigma_k(v, 3).is_zero()


def test_c_l_examples():
    v = rubber([-2, -3], [-1])
    P = sym_PsiInf(0)
    assert c_l(v, 0) == 1
    assert c_l(v, 1) == P - sigma_k(v, 1)
    assert c_l(v, 2) == P * P - P * sigma_k(v, 1) + sigma_k(v, 2)


def test_C_type0_examples():
    v = rubber([-2, -3])
    C = C_type0(v, 2)
    assert C.leading() == -1 and C.coefficient(-1) == 6
    v1 = rubber([-2, -3], [-1])
    assert C_type0(v1, 1).coefficient(0) == 6
    lone = rubber([], [-1])
    assert C_type0(lone, 0).coefficient(0) == 1


def test_C_typeInf_examples():
    assert C_typeInf(0).coefficient(0) == 1
    C = C_typeInf(2)
    P = sym_Psi()
    assert [C.coefficient(-j) for j in range(3)] == [Poly.const(1), -P, P * P]


def test_n_amb_one_drops_evD():
    v = rubber([-2], [-1])
    assert sigma_k(v, 1, n_amb=1) == 2 * sym_psi(0, 0) + sym_psi(0, 1)


# -- sympy oracle -------------------------------------------------------------------

def to_sympy(p: Poly):
    return sum(sp.Rational(c.numerator, c.denominator)
               * sp.Mul(*[sp.Symbol(s) ** e for s, e in m]) for m, c in p.terms.items())


def oracle_C_G(G, n_amb=2):
    """Closed form at s = 1/t: C_v = s^(1 - rho_-) * g_v(s) with g_v analytic,
    using sum_l c(l) x^l = prod(1 - r_e x) / (1 - PsiInf x)."""
    s = sp.Symbol("s")
    g = 1 / (1 + sp.Symbol("Psi") * s) if G.inf_vertices else sp.Integer(1)
    total = 0
    for v in G.zero_vertices:
        x = G.vertices[v]
        total += x.rho_minus - 1
        g /= 1 - to_sympy(sym_PsiInf(v)) * s
        for k in x.inf_roots:
            g *= 1 - to_sympy(root_class(x, k, v, n_amb)) * s
        for k in x.node_roots:
            d = abs(x.roots[k].weight)
            # 1/((1/s + evD)/d - psi) = d s / (1 + s (evD - d psi))
            g *= d / (1 + s * (to_sympy(sym_evD(v, k, n_amb)) - d * to_sympy(sym_psi(v, k))))
    if total < 0:
        return sp.Integer(0)
    return sp.expand(sp.diff(g, s, total).subs(s, 0) / sp.factorial(total))


ORACLE_TYPES = [TopType(0, 1, (2, -1)), TopType(1, 2, (2, 1, -1)), TopType(0, 2, (3, -1)),
                TopType(1, 1, (2, -1)), TopType(0, 1, (2, 1, -1, -1)), TopType(1, 0, (1, 1, -1, -1)),
                TopType(0, 2, (1, 1)), TopType(1, 2, (2, 2, -1, -1)),
                TopType(1, 2, (3, 1, -1, -1))]


@pytest.mark.parametrize("top", ORACLE_TYPES, ids=str)
def test_C_G_against_sympy(top):
    graphs = enumerate_graphs(top, 2)
    assert graphs
    for G in graphs:
        ours = C_G(G)
        assert sp.expand(to_sympy(ours) - oracle_C_G(G)) == 0
        assert C_G(G, extra_depth=2) == ours


@pytest.mark.parametrize("top", ORACLE_TYPES, ids=str)
def test_leading_power_law(top):
    for G in enumerate_graphs(top, 2):
        for v in G.zero_vertices:
            x = G.vertices[v]
            C = C_type0(x, 1, v)
            assert C.leading() == leading_power(x) == x.rho_minus - 1
            prod = 1
            for k in x.node_roots:
                prod *= abs(x.roots[k].weight)
            assert C.coefficient(C.leading()) == prod


def test_no_negative_markings_kills_rubber():
    for G in enumerate_graphs(TopType(1, 2, (1, 1)), 2):
        if G.zero_vertices:
            assert C_G(G).is_zero()
        else:
            assert C_G(G) == 1


def test_one_negative_marking():
    for top in (TopType(1, 2, (2, 1, -1)), TopType(0, 2, (3, -1)), TopType(2, 1, (2, -1))):
        for G in enumerate_graphs(top, 2):
            rubber_count = len(G.zero_vertices)
            if rubber_count == 1:
                assert C_G(G) == node_weight_product(G)
            else:
                assert C_G(G).is_zero()


def test_two_negative_markings_families():
    seen = set()
    graphs = [G for top in (TopType(1, 2, (2, 2, -1, -1)), TopType(1, 2, (3, 1, -1, -1)))
              for G in enumerate_graphs(top, 2)]
    for G in graphs:
        zs = [G.vertices[v] for v in G.zero_vertices]
        split = tuple(sorted((z.rho_minus for z in zs), reverse=True))
        C = C_G(G)
        d = node_weight_product(G)
        if split == (2,):
            (v,) = G.zero_vertices
            x = G.vertices[v]
            corr = poly_node_sum(x, v)
            expected = d * (c_l(x, 1, v) + corr - (sym_Psi() if G.inf_vertices else 0))
            assert C == expected
            seen.add(1)
        elif split in ((1, 1), (2, 0)):
            assert C == d
            seen.add(2 if split == (1, 1) else 3)
        else:
            assert C.is_zero()
    assert seen == {1, 2, 3}
    for G in graphs:
        C = C_G(G)
        if not C.is_zero():
            total = sum(leading_power(G.vertices[v]) for v in G.zero_vertices)
            assert C.degrees() == {total}


def poly_node_sum(x, v):
    acc = Poly()
    for k in x.node_roots:
        acc = acc + root_class(x, k, v)
    return acc
