from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from relgw.givental import (
    DILATON, UNIT, DiffOperator, EndOp, InsufficientMargin, ZSeries, ZWindowError,
    anomaly, assemble_potential, bracket, build_L, check_bracket, check_bracket_windowed,
    cocycle, dilaton_q, dilaton_shift, genus0_residual, hamiltonian, l_op, mu_value, omega,
    quantize, quantized_l, symplectic_residual,
)
from relgw.insertions import InsertionRing
from relgw.quantum import SmallProvider, dual_label


def R(n, W=2):
    return InsertionRing(n, W)


# -- basic operators --------------------------------------------------------------

def test_mu_values():
    assert mu_value((0, 0), 2) == 1
    assert mu_value((0, 2), 2) == -1
    assert mu_value((-1, 0), 2) == 0
    assert mu_value((1, 0), 3) == Fraction(3, 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mu_is_odd_under_duality(n):
    for x in R(n).basis():
        assert mu_value(dual_label(x, n), n) == -mu_value(x, n)


def test_l0_on_unit():
    r = R(2)
    f = ZSeries.basis_vector(r, (0, 0), 0, -6, 6)
    out = l_op(0, r).apply(f)
    assert out[0] == r.element(0, 0, Fraction(3, 2))
    assert out[-1] == r.element(0, 1, 2)


def test_l_minus_one_is_shift():
    r = R(2)
    f = ZSeries.basis_vector(r, (1, 1), 3, -6, 6)
    assert l_op(-1, r).apply(f) == ZSeries.basis_vector(r, (1, 1), 2, -6, 6)


def test_zwindow_overflow():
    r = R(2)
    f = ZSeries.basis_vector(r, (0, 0), 6, -6, 6)
    with pytest.raises(ZWindowError):
        l_op(1, r).apply(f)
    with pytest.raises(ZWindowError):
        ZSeries.basis_vector(r, (0, 0), 7, -6, 6)


def test_omega_darboux_pairing():
    r = R(2)
    q = ZSeries.basis_vector(r, (1, 0), 2, -6, 6)
    p = ZSeries.basis_vector(r, dual_label((1, 0), 2), -3, -6, 6, (-1) ** 3)
    assert omega(p, q) == 1
    assert omega(q, p) == -1


def test_composition_is_exact():
    r = R(1)
    z, zi = EndOp.shift(r, 1), EndOp.shift(r, -1)
    assert z @ zi == EndOp.shift(r, 0)
    l0 = l_op(0, r)
    # {z^-1, l_0} = z^-1 regardless of mu and rho
    assert bracket(zi, l0) == zi


# -- brackets and symplecticity ----------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("m", [-1, 0, 1, 2])
@pytest.mark.parametrize("k", [-1, 0, 1, 2])
def test_bracket_table(n, m, k):
    assert check_bracket(m, k, R(n))


def test_bracket_minus_one_one():
    r = R(2)
    assert bracket(l_op(-1, r), l_op(1, r)) == l_op(0, r).scale(2)


def test_bracket_windowed_and_margin():
    r = R(2)
    assert check_bracket_windowed(-1, 1, r, -6, 6) == len(r.basis()) * 9
    with pytest.raises(InsufficientMargin):
        check_bracket_windowed(2, 2, r, -3, 3)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("m", [-1, 0, 1])
def test_symplectic(n, m):
    assert symplectic_residual(l_op(m, R(n)), R(n), -4, 4) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(-1, 2),
       st.lists(st.tuples(st.integers(-2, 2), st.integers(0, 3), st.integers(-3, 3),
                          st.integers(-4, 4)), min_size=1, max_size=5),
       st.lists(st.tuples(st.integers(-2, 2), st.integers(0, 3), st.integers(-3, 3),
                          st.integers(-4, 4)), min_size=1, max_size=5))
def test_symplectic_on_random_vectors(n, m, fs, gs):
    r = R(n)

    def build(spec):
        v = ZSeries(r, -10, 10)
        for i, a, k, c in spec:
            if r.is_basis(i, a):
                v = v + ZSeries.basis_vector(r, (i, a), k, -10, 10, c)
        return v

    f, g = build(fs), build(gs)
    A = l_op(m, r)
    assert omega(A.apply(f), g) + omega(f, A.apply(g)) == 0


# -- quantization ---------------------------------------------------------------------

def interior(levels):
    return lambda key: all(l < levels for l, _ in key[1] + key[2])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_L_minus_one_is_quantized_l_minus_one(n):
    r, L = R(n), 2
    assert quantized_l(-1, r, L).restrict(interior(L)) == build_L(-1, r, L).restrict(interior(L))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_L0_against_quantized_l0(n):
    """Everything agrees except the Euler term, whose mu enters with the opposite sign."""
    r, L = R(n), 2
    euler = DiffOperator()
    for l in range(L + 1):
        for x in r.basis():
            euler.add_term(2 * mu_value(x, n), 0, ((l, x),), ((l, x),))
    lhs = quantized_l(0, r, L) - build_L(0, r, L)
    assert lhs.restrict(interior(L)) == dilaton_shift(euler).restrict(interior(L))


def test_quantize_rules():
    a, b = ("q", 0, (0, 0)), ("p", 1, (0, 1))
    op = quantize({(a, b): Fraction(3), (a, a): Fraction(1, 2), (b, b): Fraction(-1)})
    assert op.terms == {
        (0, ((0, (0, 0)),), ((1, (0, 1)),)): 3,
        (-1, ((0, (0, 0)), (0, (0, 0))), ()): Fraction(1, 2),
        (1, (), ((1, (0, 1)), (1, (0, 1)))): -1,
    }


def test_dilaton_shift_expands_powers():
    op = DiffOperator()
    op.add_term(1, 0, (DILATON, DILATON), ((0, UNIT),))
    out = dilaton_shift(op)
    assert out.terms == {
        (0, (DILATON, DILATON), ((0, UNIT),)): 1,
        (0, (DILATON,), ((0, UNIT),)): -2,
        (0, (), ((0, UNIT),)): 1,
    }


def test_operator_json_shape():
    row = build_L(-1, R(1, 1), 1).to_json()[0]
    assert set(row) == {"hbar", "coef", "vars", "derivs"}


# -- genus-zero residual ---------------------------------------------------------------

@pytest.fixture(scope="module")
def potentials():
    out = {}
    for n, W, levels, K, B in ((1, 2, 2, 4, 2), (2, 3, 2, 4, 2), (3, 2, 1, 4, 2)):
        out[n] = (InsertionRing(n, W), levels, assemble_potential(SmallProvider(n), W, levels, K, B))
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("m", [-1, 0])
def test_genus0_residual_vanishes(potentials, n, m):
    r, levels, F = potentials[n]
    rep = genus0_residual(build_L(m, r, levels), F)
    assert rep.determined >= 20
    assert rep.values == {}


@pytest.mark.parametrize("n", [2, 3])
def test_plus_mu_euler_term_fails(potentials, n):
    r, levels, F = potentials[n]
    assert genus0_residual(quantized_l(0, r, levels), F).values


def test_potential_coefficients():
    F = assemble_potential(SmallProvider(2), 1, 0, 3, 1)
    # 1/2 t_{0;1}^2 t_{0;H^2}: A([1],[1],[H^2]) = 1 over 2!
    assert F.coeffs[(0, ((0, (0, 0)), (0, (0, 0)), (0, (0, 2))))] == Fraction(1, 2)
    assert F.in_truncation(1, ((0, (1, 0)),))


def test_residual_detects_a_wrong_coefficient(potentials):
    r, levels, F = potentials[2]
    key = (0, ((0, (0, 0)), (0, (0, 0)), (0, (0, 2))))
    bad = type(F)(F.n, F.W, F.levels, F.max_vars, F.max_beta, dict(F.coeffs), set(F.unsupported))
    bad.coeffs[key] += 1
    assert genus0_residual(build_L(-1, r, levels), bad).values


# -- anomaly ------------------------------------------------------------------------------

def anomaly_oracle(N, n):
    return sum(mu_value(x, n) ** 2 - Fraction(1, 4) for x in InsertionRing(n, N).basis()) / 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_anomaly_closed_form(n):
    for N in range(1, 6):
        assert anomaly(N, n) == anomaly_oracle(N, n)


@pytest.mark.parametrize("n", [2, 3])
def test_anomaly_linear_growth(n):
    vals = [anomaly(N, n) for N in range(2, 9)]
    diffs = {b - a for a, b in zip(vals, vals[1:])}
    assert len(diffs) == 1 and diffs != {0}


def test_anomaly_level_independent():
    assert anomaly(3, 2, levels=1) == anomaly(3, 2, levels=3)


def test_cocycle_antisymmetric():
    r = R(2)
    hA, hB = hamiltonian(l_op(-1, r), r, 2), hamiltonian(l_op(1, r), r, 2)
    assert cocycle(hA, hB) == -cocycle(hB, hA)


def test_anomaly_magnitude_increases():
    for n in (2, 3):
        vals = [abs(anomaly(N, n)) for N in range(2, 9)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_omega_examples(n):
    r = R(n)
    f = ZSeries.basis_vector(r, (1, 0), 0, -6, 6)
    g = ZSeries.basis_vector(r, (-1, n - 1), -1, -6, 6)
    assert omega(f, g) == 1
    assert omega(f, ZSeries.basis_vector(r, (-1, 0), -1, -6, 6)) == (1 if n == 1 else 0)
    assert omega(f, f) == 0
    assert omega(g, f) == -omega(f, g)
    plus = ZSeries.basis_vector(r, (0, 0), 2, -6, 6)
    assert omega(f, plus) == 0


def test_dilaton_round_trip():
    r = R(2)
    zero = ZSeries(r, -6, 6)
    assert dilaton_q(zero) == ZSeries.basis_vector(r, UNIT, 1, -6, 6, -1)
    t = ZSeries.basis_vector(r, (0, 1), 0, -6, 6, 3)
    assert dilaton_q(t) - t == dilaton_q(zero)


def test_residual_of_zero_potential():
    from relgw.givental import PotentialSeries
    r = R(2)
    F = PotentialSeries(2, 2, 1, 3, 0)
    rep = genus0_residual(build_L(-1, r, 1), F)
    # only the quadratic (t_0, t_0)/2 survives; it vanishes at t = 0
    assert rep.values and all(len(mono) == 2 for _, mono in rep.values)
