import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirror_torus import fukayaside
from mirror_torus.fukayaside import LagrangianObject, intersections, structure_constants_A
from mirror_torus.linalg import RatMatrix
from mirror_torus.localsys import LocalSystemData
from mirror_torus.mirror import (dimension_table, functoriality_grid, grid_points, mirror_morphism_basis,
                                 mirror_object, mirror_points, report_to_json, verify_dimensions,
                                 verify_functoriality)
from mirror_torus.qseries import q_max_deviation
from mirror_torus.sheafside import LineBundle, Pushforward, Torsion, UnsupportedError

F = Fraction


def rats(den):
    return st.fractions(min_value=0, max_value=1, max_denominator=den).filter(lambda x: x < 1)


def test_mirror_objects():
    L = mirror_object(LineBundle(0))
    assert (L.dir, L.base, L.grade_shift, L.ls.b) == ((1, 0), (0, 0), 0, 0)
    T = mirror_object(Torsion(F(1, 3), F(1, 4)))
    assert T.dir == (0, 1) and T.base == (F(2, 3), 0) and T.ls.b == -F(1, 4)
    assert T.alpha() == 0.5
    P = mirror_object(Pushforward(2, LineBundle(1)))
    assert P.dir == (2, 1) and P.dim == 1
    P = mirror_object(Pushforward(2, LineBundle(2)))
    assert P.dir == (1, 1) and P.dim == 2


def test_meridian_is_a_torsion_mirror():
    c, beta = F(1, 5), F(2, 7)
    meridian = LagrangianObject((0, 1), (c, 0), 0, LocalSystemData(1, beta))
    assert mirror_object(Torsion(-c, -beta)) == meridian


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), rats(4), rats(4), st.integers(-2, 2))
def test_shift_compatibility(n, a, b, k):
    for E in (LineBundle(n, a, b), Torsion(a, b)):
        assert mirror_object(E.shifted(k)) == mirror_object(E).shifted(k)


def test_morphism_basis_examples():
    assert mirror_points(LineBundle(0), LineBundle(1)) == [(0, 0)]
    assert mirror_points(LineBundle(0), LineBundle(2)) == [(0, 0), (F(1, 2), 0)]
    E1 = LineBundle(3, F(1, 3), 0)
    pts = mirror_points(LineBundle(0), E1)
    assert pts == [(F(1, 9), 0), (F(4, 9), 0), (F(7, 9), 0)]
    assert sorted(pts) == intersections(mirror_object(LineBundle(0)), mirror_object(E1))
    assert mirror_morphism_basis(LineBundle(0), LineBundle(2)) == {0: 0, 1: 1}


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 5), st.integers(1, 6), rats(12), rats(12), rats(12), rats(12))
def test_basis_image_is_intersection_set(n0, d, a0, b0, a1, b1):
    E0, E1 = LineBundle(n0, a0, b0), LineBundle(n0 + d, a1, b1)
    basis = mirror_morphism_basis(E0, E1)
    assert sorted(basis.values()) == list(range(d))


def test_dimension_examples():
    for n in range(1, 7):
        assert dimension_table(LineBundle(0), LineBundle(n))[0] == (n, n)
        t = dimension_table(LineBundle(n), LineBundle(0))
        assert t[0] == (0, 0) and t[1] == (n, n)
    assert dimension_table(LineBundle(2, rank=2), Torsion(F(1, 2), 0))[0] == (2, 2)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), rats(6), rats(6), rats(6), rats(6),
       st.integers(1, 2), st.integers(1, 2))
def test_verify_dimensions_grid(n0, n1, a0, b0, a1, b1, r0, r1):
    E0, E1 = LineBundle(n0, a0, b0, rank=r0), LineBundle(n1, a1, b1, rank=r1)
    assert verify_dimensions(E0, E1)
    assert verify_dimensions(E0, Torsion(a1, b1))
    assert verify_dimensions(Torsion(a0, b0), E1)
    assert verify_dimensions(Torsion(a0, b0), Torsion(a1, b1))


def test_verify_dimensions_higher_rank_torsion_and_pushforward():
    J = RatMatrix.from_rows([[0, 1], [0, 0]])
    assert verify_dimensions(LineBundle(1), Torsion(0, 0, rank=2))
    assert verify_dimensions(Torsion(0, 0, rank=2), Torsion(0, 0, rank=2, N=J))
    assert verify_dimensions(LineBundle(1, rank=2, N=J), LineBundle(1, rank=2, N=J))
    for n in (1, 3):
        assert verify_dimensions(LineBundle(0), Pushforward(2, LineBundle(n)))


def test_headline_and_b_shift():
    rep = verify_functoriality(LineBundle(0), LineBundle(1), LineBundle(2), 6, 1e-8)
    assert rep.passed and rep.normalization["status"] == "none needed"
    rep = verify_functoriality(LineBundle(0), LineBundle(1, 0, F(1, 2)), LineBundle(2), 6, 1e-8)
    assert rep.passed
    phases = [c for comp in rep.comparisons for _, c in comp.a_series.terms]
    assert any(abs(c.imag) > 1e-9 or c.real < 0 for c in phases)


def test_normalization_discrepancy_is_flagged_but_passes():
    rep = verify_functoriality(LineBundle(0), LineBundle(1, F(1, 2), 0), LineBundle(2), 6, 1e-8)
    assert rep.passed
    assert rep.normalization["status"] == "normalization discrepancy"


def test_torsion_target():
    rep = verify_functoriality(LineBundle(0), LineBundle(2, F(1, 3), F(1, 4)),
                               Torsion(F(1, 2), F(1, 3)), 6, 1e-8)
    assert rep.passed and len(rep.comparisons) == 2


def test_scope_errors():
    with pytest.raises(UnsupportedError):
        verify_functoriality(LineBundle(0), LineBundle(2), LineBundle(1))
    with pytest.raises(UnsupportedError):
        verify_functoriality(LineBundle(0), LineBundle(1, rank=2), LineBundle(2))
    with pytest.raises(UnsupportedError):
        verify_functoriality(LineBundle(0), LineBundle(1), Pushforward(2, LineBundle(3)))


def test_flipped_orientation_fails_with_localized_mismatch(monkeypatch):
    monkeypatch.setattr(fukayaside, "ORIENTATION", -fukayaside.ORIENTATION)
    rep = verify_functoriality(LineBundle(0), LineBundle(1), LineBundle(2), 6, 1e-8)
    assert not rep.passed
    bad = [c for c in rep.comparisons if c.first_mismatch]
    assert bad and bad[0].first_mismatch[0] <= 6


def test_report_json_is_deterministic():
    args = (LineBundle(0), LineBundle(1, F(1, 4), F(1, 3)), LineBundle(3), 6, 1e-8)
    a, b = report_to_json(verify_functoriality(*args)), report_to_json(verify_functoriality(*args))
    assert a == b
    data = json.loads(a)
    assert data["verdict"] == "pass" and data["config"]["cutoff"] == "6/1"


def _translate(E, a, b):
    if E.kind == "torsion":
        return Torsion(E.a + a, E.b + b)
    return LineBundle(E.n, E.a + a, E.b + b)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), rats(4), rats(4))
def test_common_translation_symmetry(index, a, b):
    triples = list(functoriality_grid(3, 2))
    triple = triples[index % len(triples)]
    moved = tuple(_translate(E, a, b) for E in triple)
    assert verify_functoriality(*moved, 6, 1e-8).passed
    if triple[2].kind == "line":
        # the A-side structure constants do not change at all
        before = structure_constants_A(*(mirror_object(E) for E in triple), cutoff=6)
        after = structure_constants_A(*(mirror_object(E) for E in moved), cutoff=6)
        for key in before:
            for x, y in zip(before[key], after[key]):
                assert q_max_deviation(x, y, 6)[0] < 1e-12


def test_grid_size():
    assert len(grid_points(4)) == 36
    assert sum(1 for _ in functoriality_grid(4, 4)) == 10 * 36 * 36 * 2
