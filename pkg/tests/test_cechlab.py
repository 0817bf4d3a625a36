from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirror_torus.cechlab import (CoverModel, cech_cohomology, cech_complex, cech_dims, circle_three_arcs,
                                  circle_two_arcs, cochain_value, constant_nerve_model, glued_sections,
                                  single_set_model)
from mirror_torus.homcore import BoundedComplex
from mirror_torus.linalg import RatMatrix


def test_single_set():
    C = cech_complex(single_set_model(3))
    assert C == BoundedComplex.build(0, [3])
    assert cech_cohomology(single_set_model(3), 0) == 3
    assert cech_cohomology(single_set_model(3), 1) == 0


def test_two_arcs():
    m = circle_two_arcs()
    C = cech_complex(m)
    assert (C.dim(0), C.dim(1)) == (2, 2)
    assert C.d(0) == RatMatrix.from_rows([[-1, 1], [-1, 1]])
    assert cech_dims(m) == [1, 1]


def test_three_arcs_support():
    C = cech_complex(circle_three_arcs())
    assert C.dim(2) == 0
    assert cech_dims(circle_three_arcs()) == [1, 1]


def test_contractible_nerve():
    m = constant_nerve_model([(0, 1, 2)], 3)
    assert cech_dims(m) == [1, 0, 0]


def test_sphere_nerves():
    hollow = constant_nerve_model(list(combinations(range(3), 2)), 3)
    assert cech_dims(hollow)[:2] == [1, 1]
    tetra = constant_nerve_model(list(combinations(range(4), 3)), 4)
    assert cech_dims(tetra) == [1, 0, 1]


simplices = st.lists(st.sets(st.integers(0, 4), min_size=1, max_size=3), min_size=1, max_size=5)


@settings(max_examples=40, deadline=None)
@given(simplices)
def test_h0_is_glued_sections(simps):
    m = constant_nerve_model([tuple(s) for s in simps], 5)
    C = cech_complex(m)
    assert all((C.d(n + 1) @ C.d(n)).is_zero() for n in C.degrees())
    assert cech_cohomology(m, 0) == glued_sections(m)


def test_incompatible_restrictions_rejected():
    one, two = RatMatrix.from_rows([[1]]), RatMatrix.from_rows([[2]])
    cells = [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    restr = {(t, k): one for t in cells if len(t) > 1 for k in range(len(t))}
    restr[((0, 1), 0)] = two
    m = CoverModel(3, {t: 1 for t in cells}, restr)
    assert m.check_compatibility()
    with pytest.raises(ValueError):
        cech_complex(m)


def test_cochain_antisymmetry():
    c = {(0, 1): (5,), (0, 2): (7,)}
    assert cochain_value(c, (1, 0)) == (-5,)
    assert cochain_value(c, (2, 0)) == (-7,)
    assert cochain_value(c, (0, 0)) == (0,)


def test_json_round_trip():
    for m in (circle_two_arcs(), circle_three_arcs(), single_set_model(2)):
        assert CoverModel.from_json(m.to_json()) == m
