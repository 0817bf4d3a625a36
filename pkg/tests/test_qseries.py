import cmath
import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from mirror_torus.qseries import (FourierQSeries, QSeries, expand_in_theta_basis, format_series, fq_mul,
                                  q_add, q_max_deviation, q_mul, q_scale, root_of_unity,
                                  theta_basis_section, theta_value)

F = Fraction
exps = st.fractions(min_value=0, max_value=6, max_denominator=4)
coeffs = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
series = st.lists(st.tuples(exps, coeffs), max_size=6).map(lambda t: QSeries.make(t, 6))


def close(a, b, tol=1e-9):
    return q_max_deviation(a, b)[0] < tol


def test_root_of_unity_exact_quarters():
    assert root_of_unity(F(1, 2)) == -1
    assert root_of_unity(F(5, 4)) == 1j
    assert abs(root_of_unity(F(1, 3)) - cmath.exp(2j * math.pi / 3)) < 1e-15


def test_basic_products():
    one_plus = QSeries.make([(0, 1), (1, 1)], 6)
    one_minus = QSeries.make([(0, 1), (1, -1)], 6)
    assert close(q_mul(one_plus, one_minus), QSeries.make([(0, 1), (2, -1)], 6))
    quarter = QSeries.monomial(F(1, 4), 1, 6)
    assert q_mul(quarter, quarter).terms == ((F(1, 2), 1),)


@settings(max_examples=60, deadline=None)
@given(series, series, st.fractions(min_value=0, max_value=5, max_denominator=3))
def test_truncation_commutes_with_product(a, b, Q):
    lhs = q_mul(a, b).truncate(Q)
    rhs = q_mul(a.truncate(Q), b.truncate(Q)).truncate(Q)
    assert close(lhs, rhs)


@settings(max_examples=40, deadline=None)
@given(series, series)
def test_add_scale(a, b):
    assert close(q_add(a, b), q_add(b, a))
    assert close(q_scale(q_add(a, b), 2), q_add(q_scale(a, 2), q_scale(b, 2)))


def test_theta_degree_one_leading_terms():
    s = theta_basis_section(1, 0, 0, 0, 5)
    m = s.as_dict()
    assert set(m) == {F(j) for j in range(-3, 4)}
    lows = sorted(ser.terms[0][0] for ser in m.values())
    assert lows[:5] == [0, F(1, 2), F(1, 2), 2, 2]


def test_theta_cosets_and_phase():
    s = theta_basis_section(2, 1, 0, 0, 8)
    assert all(r.denominator == 1 and int(r) % 2 == 1 for r, _ in s.modes)
    t = theta_basis_section(1, 0, 0, F(1, 2), 8)
    for r, ser in t.modes:
        assert abs(ser.terms[0][1] - (-1) ** int(r)) < 1e-15


def _direct_mode(n, k, a, b, j):
    # mode j of sum_m q^{n (m + k/n)^2 / 2 + (m + k/n) n a} e^{2 pi i (m + k/n) n b}
    m = F(j - k, n)
    x = m + F(k, n)
    return n * x * x / 2 + x * n * a, cmath.exp(2j * math.pi * float(x * n * b))


def test_theta_matches_direct_summation():
    for n, k, a, b in [(1, 0, 0, 0), (3, 2, F(1, 9), F(1, 3)), (2, 1, F(1, 4), F(1, 5))]:
        s = theta_basis_section(n, k, a, b, 6)
        for r, ser in s.modes:
            e, c = _direct_mode(n, k, F(a), F(b), int(r))
            assert ser.terms == ((e, ser.terms[0][1]),)
            assert abs(ser.terms[0][1] - c) < 1e-12


def test_fq_mul_identity_and_commutativity():
    s = theta_basis_section(2, 1, F(1, 3), F(1, 4), 6)
    t = theta_basis_section(1, 0, 0, F(1, 2), 6)
    one = FourierQSeries.make({0: QSeries.one(20)}, 20)
    assert fq_mul(one, s) == fq_mul(s, one)
    for r, ser in s.modes:
        assert close(fq_mul(one, s).mode(r), ser)
    st_, ts = fq_mul(s, t), fq_mul(t, s)
    assert [r for r, _ in st_.modes] == [r for r, _ in ts.modes]
    for (r, x), (_, y) in zip(st_.modes, ts.modes):
        assert close(x, y)


def test_fq_mul_associative():
    a = theta_basis_section(1, 0, F(1, 4), 0, 5)
    b = theta_basis_section(2, 1, 0, F(1, 3), 5)
    c = theta_basis_section(1, 0, F(1, 2), F(1, 2), 5)
    left, right = fq_mul(fq_mul(a, b), c), fq_mul(a, fq_mul(b, c))
    cut = min(left.cutoff, right.cutoff)
    for r in {r for r, _ in left.modes} | {r for r, _ in right.modes}:
        assert q_max_deviation(left.mode(r), right.mode(r), cut)[0] < 1e-9


def test_theta_square_by_double_sum():
    s = theta_basis_section(1, 0, 0, 0, 6)
    sq = fq_mul(s, s)
    # brute force: modes j1 + j2 with exponent (j1^2 + j2^2) / 2
    acc = {}
    for j1 in range(-5, 6):
        for j2 in range(-5, 6):
            e = F(j1 * j1 + j2 * j2, 2)
            if e <= sq.cutoff:
                acc.setdefault(j1 + j2, {}).setdefault(e, 0)
                acc[j1 + j2][e] += 1
    for j, terms in acc.items():
        assert close(sq.mode(j), QSeries.make(terms, sq.cutoff))


def test_expand_basis_element_and_linear_combination():
    b0 = theta_basis_section(2, 0, F(1, 3), F(1, 4), 6)
    b1 = theta_basis_section(2, 1, F(1, 3), F(1, 4), 6)
    ex = expand_in_theta_basis(b1, 2, F(1, 3), F(1, 4))
    assert ex.residual < 1e-12
    assert ex.coeffs[0].is_zero() and close(ex.coeffs[1], QSeries.one(6), 1e-12)
    combo = b0.scale(2) + FourierQSeries.make(
        [(r, q_mul(QSeries.monomial(1, 1, 10), s)) for r, s in b1.modes], 6)
    ex = expand_in_theta_basis(combo, 2, F(1, 3), F(1, 4))
    assert ex.residual < 1e-9
    assert q_max_deviation(ex.coeffs[0], QSeries.make([(0, 2)], 6), 4)[0] < 1e-9
    assert q_max_deviation(ex.coeffs[1], QSeries.monomial(1, 1, 6), 4)[0] < 1e-9


def test_theta_square_splitting():
    s = theta_basis_section(1, 0, 0, 0, 8)
    ex = expand_in_theta_basis(fq_mul(s, s), 2, 0, 0)
    assert ex.residual < 1e-9
    assert q_max_deviation(ex.coeffs[0], QSeries.make([(0, 1), (1, 2), (4, 2)], 5), 5)[0] < 1e-9
    assert q_max_deviation(ex.coeffs[1], QSeries.make([(F(1, 4), 2), (F(9, 4), 2)], 5), 5)[0] < 1e-9


def test_expand_rejects_foreign_section():
    s = theta_basis_section(1, 0, 0, 0, 6)
    assert expand_in_theta_basis(s, 2, 0, 0).residual > 0.5


def test_theta_value_at_origin():
    v = theta_value(1, 0, 0, 0, 0, 0, 5)
    assert close(v, QSeries.make([(0, 1), (F(1, 2), 2), (2, 2), (F(9, 2), 2)], 5))


def test_series_json_and_format():
    s = theta_basis_section(2, 1, F(1, 3), F(1, 4), 4)
    assert FourierQSeries.from_json(s.to_json()) == s
    q = QSeries.make([(F(1, 4), 2)], 3)
    assert QSeries.from_json(q.to_json()) == q
    assert format_series(q) == "2·q^{1/4} + O(q^{3/1})"
