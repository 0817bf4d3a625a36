import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirror_torus.fukayaside import (LagrangianObject, ScopeError, TupleObject, compose_A, compose_tuple,
                                     det, enumerate_triangles, hom_dim_A, hom_space, intersections,
                                     pullback_obj, pushforward_obj, serre_pairing_A, shift_A,
                                     structure_constants_A, tuple_hom_dim, tuple_hom_dims)
from mirror_torus.linalg import RatMatrix
from mirror_torus.localsys import LocalSystemData
from mirror_torus.qseries import QSeries, q_max_deviation

F = Fraction
ORIGIN = (0, 0)
H0, S1, S2 = (LagrangianObject((1, n), ORIGIN) for n in range(3))
JORDAN2 = RatMatrix.from_rows([[0, 1], [0, 0]])

dirs = st.tuples(st.integers(-4, 4), st.integers(-4, 4)).filter(lambda v: math.gcd(*v) == 1)
rats = st.fractions(min_value=0, max_value=1, max_denominator=6).filter(lambda x: x < 1)


def line(dir, base=ORIGIN, shift=0, b=0, rank=1, N=None):
    return LagrangianObject.make(dir, base, shift, LocalSystemData(rank, b, N))


def test_intersection_examples():
    assert intersections(H0, S2) == [(0, 0), (F(1, 2), 0)]
    assert intersections(H0, S1) == [(0, 0)]
    assert intersections(H0, line((1, 0), (0, F(1, 3)))) == []


@settings(max_examples=80, deadline=None)
@given(dirs, dirs, rats, rats, rats, rats)
def test_intersection_count_is_determinant(v0, v1, x0, y0, x1, y1):
    L0, L1 = line(v0, (x0, y0)), line(v1, (x1, y1))
    pts = intersections(L0, L1)
    assert len(pts) == abs(det(L0.dir, L1.dir))
    for p in pts:
        for L in (L0, L1):
            # the point lies on the line mod Z^2
            assert det(L.dir, (p[0] - L.base[0], p[1] - L.base[1])).denominator == 1


def test_hom_space_cases():
    assert hom_space(H0, S1).dim == 1
    rank2 = line((1, 1), rank=2)
    assert hom_space(rank2, rank2).dim == 4 and hom_space(rank2, rank2).kind == "equal0"
    jordan = line((1, 1), rank=2, N=JORDAN2)
    assert hom_space(jordan, jordan).dim == 2
    assert hom_space(H0, S1.shifted(2)).dim == 0
    assert hom_space(S1, S1.shifted(2)).dim == 0
    assert hom_space(S1, S1.shifted(1)).dim == 1  # cokernel of M f M^-1 - f on C


def test_shift_window():
    assert shift_A(shift_A(S1), -1) == S1
    assert hom_dim_A(H0, S2, 2) == 0
    assert hom_dim_A(S2, H0, 1) == hom_dim_A(H0, S2, 0) == 2
    assert hom_dim_A(H0, S2, 1) == hom_dim_A(S2, H0, 0) == 0


@settings(max_examples=60, deadline=None)
@given(dirs, dirs, rats, rats, st.integers(-2, 2))
def test_symplectic_serre_dims(v0, v1, x, b, k):
    L0, L1 = line(v0, shift=k), line(v1, (x, 0), b=b)
    assert hom_dim_A(L0, L1, 1) == hom_dim_A(L1, L0, 0)


def _areas(tris):
    return sorted(t.area for t in tris)


def test_triangle_examples():
    tris = enumerate_triangles(H0, S1, S2, ORIGIN, ORIGIN, ORIGIN, 5)
    assert _areas(tris) == [0, 1, 1, 4, 4]
    tris = enumerate_triangles(H0, S1, S2, ORIGIN, ORIGIN, (F(1, 2), 0), 5)
    assert _areas(tris) == [F(1, 4), F(1, 4), F(9, 4), F(9, 4)]
    assert enumerate_triangles(H0, S1, S2, ORIGIN, ORIGIN, (F(1, 2), 0), 0) == []


def test_triangle_rejects_non_positive_triple():
    with pytest.raises(ValueError):
        enumerate_triangles(H0, S2, S1, ORIGIN, ORIGIN, ORIGIN, 5)
    with pytest.raises(ValueError):
        enumerate_triangles(H0, H0, S1, ORIGIN, ORIGIN, ORIGIN, 5)


def test_triangle_count_grows_like_sqrt():
    counts = [len(enumerate_triangles(H0, S1, S2, ORIGIN, ORIGIN, ORIGIN, E)) for E in (1, 4, 9)]
    assert counts == [3, 5, 7]
    assert all(c <= 2 * math.sqrt(E) + 1 for c, E in zip(counts, (1, 4, 9)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(1, 2), st.integers(1, 2), rats, rats, rats, rats)
def test_doubled_box_finds_nothing_new(n0, d1, d2, a1, b1, a2, b2):
    L = [line((1, n0)), line((1, n0 + d1), (a1, (n0 + d1 - 1) * a1), b=b1),
         line((1, n0 + d1 + d2), (a2, (n0 + d1 + d2 - 1) * a2), b=b2)]
    one = structure_constants_A(*L, cutoff=4)
    two = structure_constants_A(*L, cutoff=4, box_scale=2)
    for key, row in one.items():
        for x, y in zip(row, two[key]):
            assert q_max_deviation(x, y.truncate(4), 4)[0] < 1e-12


def test_zero_area_at_most_once_per_target():
    for x2 in intersections(H0, S2):
        tris = enumerate_triangles(H0, S1, S2, ORIGIN, ORIGIN, x2, 6)
        assert sum(t.area == 0 for t in tris) <= 1


def test_compose_headline():
    u = hom_space(H0, S1).basis_element(0)
    v = hom_space(S1, S2).basis_element(0)
    w = compose_A(v, u, 6)
    assert w.points == ((0, 0), (F(1, 2), 0))
    assert q_max_deviation(w.coords[0], QSeries.make([(0, 1), (1, 2), (4, 2)], 6))[0] < 1e-12
    assert q_max_deviation(w.coords[1], QSeries.make([(F(1, 4), 2), (F(9, 4), 2)], 6))[0] < 1e-12


def test_compose_bilinear():
    u = hom_space(H0, S1).basis_element(0)
    v = hom_space(S1, S2).basis_element(0)
    base = compose_A(v, u, 6)
    scaled = compose_A(v, u.with_coords([QSeries.make([(0, 3j)], 8)]), 6)
    for x, y in zip(base.coords, scaled.coords):
        assert q_max_deviation(QSeries.make([(e, 3j * c) for e, c in x.terms], 6), y)[0] < 1e-12


def test_compose_out_of_window_is_zero():
    u = hom_space(H0, S1).basis_element(0)
    v = hom_space(S1, S2.shifted(2))
    assert v.kind == "zero"
    w = compose_A(v, u, 6)
    assert all(c.is_zero() for c in w.coords)


def test_compose_equal_supports_is_matrix_product():
    J = line((1, 1), rank=2, N=JORDAN2)
    H = hom_space(J, J)
    for i in range(H.dim):
        for j in range(H.dim):
            w = compose_A(H.basis_element(i), H.basis_element(j), 6)
            got = sum(c.coeff(0) * m for c, (_, m) in zip(w.coords, w.basis))
            assert np.allclose(got, H.basis[i][1] @ H.basis[j][1])


def test_compose_degree_one_equal_support_routed_away():
    Sh = S1.shifted(1)
    u = hom_space(S1, Sh).basis_element(0)
    with pytest.raises(ScopeError):
        compose_A(hom_space(Sh, S2.shifted(1)).basis_element(0), u)


def test_serre_pairing_A():
    p = serre_pairing_A(S2, H0)
    assert p.rank == 2 and np.allclose(p.matrix, np.eye(2))
    assert serre_pairing_A(H0, line((1, 0), (0, F(1, 2)))).matrix.size == 0


def test_additive_closure():
    A = TupleObject((H0, S1))
    B = TupleObject((S2,))
    assert tuple_hom_dims(A, B) == [[2, 1]]
    assert tuple_hom_dim(A, B) == 3
    u = hom_space(H0, S1).basis_element(0)
    v = hom_space(S1, S2).basis_element(0)
    (w,), = compose_tuple([[v]], [[u]], 6)
    direct = compose_A(v, u, 6)
    for x, y in zip(w.coords, direct.coords):
        assert q_max_deviation(x, y)[0] < 1e-12


def test_pushforward_and_pullback():
    assert pushforward_obj(1, S1) == S1
    horizontal = line((1, 0), (0, F(1, 3)))
    assert pushforward_obj(2, horizontal).dim == 2
    vertical = line((0, 1), (F(1, 3), 0))
    assert pushforward_obj(2, vertical).dim == 1
    parts = pullback_obj(2, line((0, 1), (F(1, 3), 0), b=F(1, 5))).parts
    assert len(parts) == 2 and all(p.ls.b == F(1, 5) for p in parts)
    (only,) = pullback_obj(2, line((1, 0), b=F(1, 5))).parts
    assert only.ls.b == F(2, 5)


@settings(max_examples=40, deadline=None)
@given(dirs, rats, rats, st.integers(-2, 2), rats)
def test_json_round_trip(v, x, y, k, b):
    L = line(v, (x, y), k, b)
    assert LagrangianObject.from_json(L.to_json()) == L
