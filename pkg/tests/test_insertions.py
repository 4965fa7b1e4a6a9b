from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from relgw.cohomology import gysin, integrate
from relgw.insertions import (
    Bidegree, InsertionParseError, InsertionRing, WindowError, bidegree_of,
)


@pytest.fixture
def R2():
    return InsertionRing(2, 4)


def test_embed(R2):
    assert R2.embed(R2.X.monomial(1), 0).terms == {(0, 1): 1}
    assert R2.embed(R2.D.one(), -2).terms == {(-2, 0): 1}
    with pytest.raises(WindowError):
        R2.embed(R2.D.monomial(1), 5)
    with pytest.raises(ValueError):
        R2.embed(R2.X.monomial(1), 1)


def test_pairing_examples(R2):
    p = R2.parse
    assert R2.pairing(p("H^1@0"), p("H^1@0")) == integrate(R2.X.monomial(2))
    assert R2.pairing(p("1@1"), p("h^1@-1")) == 1
    assert R2.pairing(p("1@1"), p("1@2")) == 0
    assert R2.pairing(p("H^1@0"), p("1@0")) == 0


def test_dual_basis_examples(R2):
    assert R2.dual_basis_element(0, 0).terms == {(0, 2): 1}
    assert R2.dual_basis_element(3, 1).terms == {(-3, 0): 1}
    R1 = InsertionRing(1, 2)
    assert R1.dual_basis_element(1, 0).terms == {(-1, 0): 1}
    with pytest.raises(WindowError):
        R2.dual_basis_element(5, 0)


def test_trilinear_examples(R2):
    p = R2.parse
    assert R2.trilinear_A(p("h^1@1"), p("1@-2"), p("1@1")) == 1
    assert R2.trilinear_A(p("1@-1"), p("1@-1"), p("1@2")) == 1
    assert R2.trilinear_A(p("1@1"), p("1@1"), p("1@1")) == 0


def test_product_examples(R2):
    p = R2.parse
    # iota_!(1) is the divisor class
    assert R2.product(p("1@1"), p("1@-1")) == R2.embed(gysin(R2.D.one(), R2.X), 0)
    assert R2.product(p("1@-1"), p("1@-1")) == p("h^1@-2")
    assert R2.product(p("h^1@1"), p("1@2")) == p("h^1@3")
    assert R2.product_via_A(p("1@1"), p("1@-1")) == p("H^1@0")
    assert R2.product_via_A(p("1@-1"), p("1@-1")) == p("h^1@-2")
    assert R2.product_via_A(p("H^1@0"), p("H^2@0")).is_zero()


def test_product_window_overflow():
    R = InsertionRing(2, 2)
    p = R.parse
    with pytest.raises(WindowError):
        R.product(p("1@1"), p("1@2"))
    with pytest.raises(WindowError):
        R.product_via_A(p("1@1"), p("1@2"))
    # zero products are representable even when the index would overflow
    assert R.product(p("h^1@1"), p("h^1@2")).is_zero()


def test_bidegree_examples(R2):
    p = R2.parse
    assert R2.bidegree(p("H^1@0")) == Bidegree(0, 1)
    assert R2.bidegree(p("1@-1")) == Bidegree(-1, 1)
    assert R2.bidegree(p("h^1@2")) == Bidegree(2, 1)
    with pytest.raises(ValueError):
        R2.bidegree(p("1@0 + 1@1"))


def test_parse_examples(R2):
    assert R2.parse("H^1@0").terms == {(0, 1): 1}
    assert R2.parse("2*h^1@-3 + 1@1").terms == {(-3, 1): 2, (1, 0): 1}
    assert R2.parse("1/3*H^2@0").terms == {(0, 2): Fraction(1, 3)}
    with pytest.raises(InsertionParseError) as err:
        R2.parse("H^1@@0")
    assert err.value.position == 4
    with pytest.raises(InsertionParseError):
        R2.parse("H^1@1")
    with pytest.raises(InsertionParseError):
        R2.parse("h^1@0")
    with pytest.raises(WindowError):
        R2.parse("1@9")


coefs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def insertions(draw, ring):
    keys = draw(st.lists(st.sampled_from(ring.basis()), max_size=4))
    return ring.from_terms({k: draw(coefs) for k in keys})


@given(insertions(InsertionRing(3, 3)))
def test_parse_roundtrip(x):
    assert x.ring.parse(str(x)) == x


def _products(R):
    for x, y in product(R.basis(), repeat=2):
        yield x, y


@pytest.mark.parametrize("n,W", [(1, 4), (2, 4), (3, 4)])
def test_commutative_and_oracle_equal(n, W):
    R = InsertionRing(n, W)
    for x, y in _products(R):
        if abs(x[0] + y[0]) > W:
            continue
        u, v = R.element(*x), R.element(*y)
        assert R.product(u, v) == R.product(v, u)
        assert R.product(u, v) == R.product_via_A(u, v)


@pytest.mark.parametrize("n,W", [(1, 3), (2, 4), (3, 4)])
def test_associative_in_window(n, W):
    R = InsertionRing(n, W)
    basis = R.basis()
    for x, y, z in product(basis, repeat=3):
        if max(abs(x[0] + y[0]), abs(y[0] + z[0]), abs(x[0] + y[0] + z[0])) > W:
            continue
        u, v, w = (R.element(*b) for b in (x, y, z))
        assert (u * v) * w == u * (v * w), (x, y, z)


@pytest.mark.parametrize("n,W", [(1, 4), (2, 4), (3, 4)])
def test_duality_bigrading_identity(n, W):
    R = InsertionRing(n, W)
    one = R.one()
    for x in R.basis():
        u = R.element(*x)
        assert one * u == u and u * one == u
        for kk in R.basis(-x[0]):
            dual = R.dual_basis_element(*x)
            for a in range(R.top(x[0]) + 1):
                expect = int(a == x[1])
                assert R.pairing(R.element(x[0], a), dual) == expect
    for x, y in _products(R):
        if abs(x[0] + y[0]) > W:
            continue
        u, v = R.element(*x), R.element(*y)
        uv = u * v
        for z in R.basis():
            assert R.pairing(uv, R.element(*z)) == R.trilinear_A(u, v, R.element(*z))
        if not uv.is_zero():
            assert R.bidegree(uv) == bidegree_of(x) + bidegree_of(y)
