from fractions import Fraction
from itertools import product

import pytest

from relgw.cohomology import (
    CohRing, c1_log_tangent, cup, gysin, hodge_p, integrate, make_ring, restrict,
)


def test_make_ring_bases():
    assert [str(c) for c in make_ring(0).basis()] == ["1"]
    assert [str(c) for c in make_ring(1, "h").basis()] == ["1", "h"]
    assert [str(c) for c in make_ring(2).basis()] == ["1", "H", "H^2"]


def test_cup_examples():
    P2, P1 = make_ring(2), make_ring(1, "h")
    H = P2.monomial(1)
    assert cup(H, H) == P2.monomial(2)
    assert cup(P2.monomial(2), H).is_zero()
    one_plus_h = P1.one() + P1.monomial(1)
    assert cup(one_plus_h, one_plus_h) == P1.one() + P1.monomial(1, 2)


def test_cup_ring_mismatch():
    with pytest.raises(ValueError):
        cup(make_ring(2).one(), make_ring(1).one())


def test_integrate_examples():
    P2, P1 = make_ring(2), make_ring(1, "h")
    assert integrate(P2.monomial(2)) == 1
    assert integrate(P2.monomial(1)) == 0
    assert integrate(P1.monomial(1, 3)) == 3


def test_restrict_examples():
    P2, P3 = make_ring(2), make_ring(3)
    assert restrict(P2.monomial(1)) == CohRing(1, "h").monomial(1)
    assert restrict(P2.monomial(2)).is_zero()
    assert restrict(P3.one() + P3.monomial(1)) == CohRing(2, "h").one() + CohRing(2, "h").monomial(1)


@pytest.mark.parametrize("n, a, b", [(2, 0, 1), (2, 1, 2), (3, 2, 3)])
def test_gysin_examples(n, a, b):
    D, X = CohRing(n - 1, "h"), CohRing(n)
    assert gysin(D.monomial(a), X) == X.monomial(b)
    # projection-formula oracle against H^{n-1-a}
    test = X.monomial(n - 1 - a)
    assert integrate(cup(gysin(D.monomial(a), X), test)) == integrate(cup(D.monomial(a), restrict(test, D)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c1_log_tangent_from_euler_sequence(n):
    # c1(T P^n) = (n+1)H from the Euler sequence; the residue sequence
    # 0 -> T(-log D) -> T -> N_D -> 0 subtracts c1(O(1)) = H.
    X = CohRing(n)
    assert c1_log_tangent(n) == X.monomial(1, n + 1) - X.monomial(1)
    assert c1_log_tangent(n) == X.monomial(1, n)


def test_hodge_p():
    assert hodge_p(make_ring(3).monomial(2)) == 2
    assert hodge_p(make_ring(3).one()) == 0
    assert hodge_p(make_ring(1, "h").monomial(1)) == 1
    with pytest.raises(ValueError):
        hodge_p(make_ring(2).one() + make_ring(2).monomial(1))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projection_formula_exhaustive(n):
    X, D = CohRing(n), CohRing(n - 1, "h")
    for a, b in product(D.basis(), X.basis()):
        assert integrate(cup(gysin(a, X), b)) == integrate(cup(a, restrict(b, D)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_restrict_is_ring_map(n):
    X = CohRing(n)
    for a, b in product(X.basis(), repeat=2):
        assert restrict(cup(a, b)) == cup(restrict(a), restrict(b))


@pytest.mark.parametrize("m", [0, 1, 2, 5])
def test_gram_is_antidiagonal(m):
    R = CohRing(m)
    G = [[integrate(cup(x, y)) for y in R.basis()] for x in R.basis()]
    assert G == [[Fraction(int(a + b == m)) for b in range(m + 1)] for a in range(m + 1)]
    assert G == R.gram()
