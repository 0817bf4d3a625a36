"""The dictionary from sheaf descriptors to Lagrangian descriptors, and the
check that it respects composition.

Objects: a degree-n line bundle at x = a tau + b goes to the line
y = n x - a through (a, (n-1) a) with monodromy exp(-2 pi i b + N); a torsion
sheaf at x goes to the vertical line at -a with monodromy exp(2 pi i b + N) and
grading 1/2; a pushforward goes to the image of its inner bundle's line under
(x, y) |-> (r x, y).

Morphisms: the k-th theta section of Hom(E0, E1) goes to the intersection
point e_k, scaled by the monomial of :func:`sheafside.hom_normalization`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .fukayaside import (LagrangianObject, hom_dim_A, intersections, pushforward_obj,
                         structure_constants_A)
from .linalg import rat, rat_str
from .localsys import LocalSystemData
from .qseries import QSeries, q_max_deviation, q_scale
from .sheafside import (SheafObject, UnsupportedError, hom_dim, hom_normalization, hom_point,
                        section_at, structure_constants_B, torsion_prefactor)


class MirrorError(RuntimeError):
    """The theta-index dictionary disagrees with the computed intersections."""


def mirror_object(E: SheafObject) -> LagrangianObject:
    if E.kind == "line":
        ls = LocalSystemData(E.rank, E.b, E.N)
        return LagrangianObject((1, E.n), (E.a, (E.n - 1) * E.a), E.shift, ls)
    if E.kind == "torsion":
        ls = LocalSystemData(E.rank, -E.b, E.N)
        return LagrangianObject((0, 1), (-E.a, 0), E.shift, ls)
    inner = mirror_object(E.inner())
    return pushforward_obj(E.r, inner).shifted(E.shift)


def mirror_points(E0: SheafObject, E1: SheafObject) -> list:
    """e_k = ((a1 - a0 + k)/d, (n0 a1 - n1 a0 + n0 k)/d) mod 1 for k < d = n1 - n0."""
    d = E1.n - E0.n
    if d <= 0:
        raise ValueError("the theta dictionary needs n1 > n0")
    pts = []
    for k in range(d):
        x = (E1.a - E0.a + k) / d
        y = (E0.n * E1.a - E1.n * E0.a + E0.n * k) / d
        pts.append((x % 1, y % 1))
    return pts


def mirror_morphism_basis(E0: SheafObject, E1: SheafObject) -> dict:
    """k -> index of e_k in the sorted intersection list of the mirror lines."""
    if E0.kind != "line" or E1.kind != "line":
        raise ValueError("the theta dictionary is defined between line bundles")
    pts = mirror_points(E0, E1)
    inter = intersections(mirror_object(E0), mirror_object(E1))
    if sorted(pts) != inter or len(set(pts)) != len(pts):
        raise MirrorError(f"theta points {pts} differ from intersections {inter}")
    return {k: inter.index(p) for k, p in enumerate(pts)}


# -- dimensions -----------------------------------------------------------

def dimension_table(E0: SheafObject, E1: SheafObject, ks=(-1, 0, 1, 2)) -> dict:
    L0, L1 = mirror_object(E0), mirror_object(E1)
    return {k: (hom_dim(E0, E1, k), hom_dim_A(L0, L1, k)) for k in ks}


def verify_dimensions(E0: SheafObject, E1: SheafObject) -> bool:
    table = dimension_table(E0, E1)
    return all(b == a for b, a in table.values()) and table[-1] == (0, 0) and table[2] == (0, 0)


# -- functoriality --------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    label: str           # "u=j v=i -> l"
    a_series: QSeries
    b_series: QSeries
    deviation: float
    exponent_range: tuple
    raw_deviation: float
    first_mismatch: tuple | None  # (exponent, A value, B value)

    def to_json(self) -> dict:
        fm = None
        if self.first_mismatch:
            e, av, bv = self.first_mismatch
            fm = {"exponent": rat_str(e), "a": [av.real, av.imag], "b": [bv.real, bv.imag]}
        return {"label": self.label, "a_series": self.a_series.to_json(),
                "b_series": self.b_series.to_json(), "deviation": self.deviation,
                "exponent_range": [rat_str(x) for x in self.exponent_range],
                "raw_deviation": self.raw_deviation, "first_mismatch": fm}


@dataclass(frozen=True)
class MirrorReport:
    triple: tuple
    comparisons: tuple
    verdict: str                  # "pass" | "fail"
    normalization: dict           # status, exponent, phase of the per-triple constant
    residual: float
    cutoff: Fraction
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.comparisons), default=0.0)

    def to_json(self) -> dict:
        return {"triple": [E.to_json() for E in self.triple],
                "comparisons": [c.to_json() for c in self.comparisons],
                "verdict": self.verdict, "normalization": self.normalization,
                "residual": self.residual, "max_deviation": self.max_deviation,
                "config": {"cutoff": rat_str(self.cutoff), "tolerance": self.tolerance}}

    def summary(self) -> str:
        labels = ", ".join(E.label() for E in self.triple)
        return (f"{self.verdict.upper()}  ({labels})  max deviation {self.max_deviation:.2e}"
                f"  normalization {self.normalization['status']}")


def _first_mismatch(a: QSeries, b: QSeries, upto, tol):
    da, db = a.as_dict(), b.as_dict()
    for e in sorted(set(da) | set(db)):
        if e > upto:
            break
        if abs(da.get(e, 0) - db.get(e, 0)) >= tol:
            return (e, da.get(e, 0j), db.get(e, 0j))
    return None


def _compare(label, a, b_norm, b_raw, cutoff, tol) -> Comparison:
    dev, _ = q_max_deviation(a, b_norm, cutoff)
    raw, _ = q_max_deviation(a, b_raw, cutoff)
    exps = [e for e, _ in a.terms] + [e for e, _ in b_norm.terms]
    lo = min(exps) if exps else Fraction(0)
    return Comparison(label, a, b_norm, dev, (lo, cutoff), raw, _first_mismatch(a, b_norm, cutoff, tol))


def _check_scope(E0, E1, E2):
    for E in (E0, E1):
        if E.kind != "line":
            raise UnsupportedError("scope: the first two objects must be line bundles")
    for E in (E0, E1, E2):
        if not E.is_scalar():
            raise UnsupportedError("scope: rank-1 local systems with N = 0 only")
        if E.shift:
            raise UnsupportedError("scope: objects must sit in degree 0")
    if E2.kind == "line":
        if not E0.n < E1.n < E2.n:
            raise UnsupportedError("scope: degrees must increase strictly")
    elif E2.kind == "torsion":
        if not E0.n < E1.n:
            raise UnsupportedError("scope: degrees must increase strictly")
    else:
        raise UnsupportedError("scope: pushforward targets are not verified")


def _times(m1: QSeries, m2: QSeries, sign: int = 1):
    """Exponent and phase of m1 * m2^sign for two monomials."""
    (e1, c1), (e2, c2) = m1.terms[0], m2.terms[0]
    return e1 + sign * e2, c1 * (c2 if sign > 0 else 1 / c2)


def verify_functoriality(E0, E1, E2, cutoff=6, tolerance: float = 1e-8) -> MirrorReport:
    _check_scope(E0, E1, E2)
    cutoff = rat(cutoff)
    if E2.kind == "torsion":
        return _verify_torsion(E0, E1, E2, cutoff, tolerance)
    L0, L1, L2 = (mirror_object(E) for E in (E0, E1, E2))
    k01, k12, k02 = (mirror_morphism_basis(X, Y) for X, Y in ((E0, E1), (E1, E2), (E0, E2)))
    # per-triple constant lambda02 / (lambda01 lambda12)
    e, ph = _times(hom_normalization(E0, E2), hom_normalization(E0, E1), -1)
    l12 = hom_normalization(E1, E2).terms[0]
    e, ph = e - l12[0], ph / l12[1]
    sc_b = structure_constants_B(E0, E1, E2, cutoff - min(e, 0))
    sc_a = structure_constants_A(L0, L1, L2, cutoff)
    comps = []
    for (i, j), cs in sorted(sc_b.consts.items()):
        for l, c in enumerate(cs):
            b_norm = q_scale(c.shift(e), ph).truncate(cutoff)
            b_raw = c.truncate(cutoff)
            a = sc_a[(k12[i], k01[j])][k02[l]]
            comps.append(_compare(f"u=θ01_{j} v=θ12_{i} -> θ02_{l}", a, b_norm, b_raw, cutoff,
                                  tolerance))
    return _report((E0, E1, E2), comps, e, ph, sc_b.residual, cutoff, tolerance)


def _verify_torsion(E0, E1, S, cutoff, tolerance) -> MirrorReport:
    L0, L1, L2 = (mirror_object(E) for E in (E0, E1, S))
    k01 = mirror_morphism_basis(E0, E1)
    # printed map on Hom(L, S): multiply by the torsion prefactor
    e_raw, ph_raw = _times(torsion_prefactor(E0, S), torsion_prefactor(E1, S), -1)
    lam = hom_normalization(E0, E1).terms[0]
    e, ph = e_raw - lam[0], ph_raw / lam[1]
    sc_a = structure_constants_A(L0, L1, L2, cutoff)
    d, _, _ = hom_point(E0, E1)
    comps = []
    for k in range(d):
        val = section_at(E0, E1, k, S, cutoff - min(e, e_raw, 0))
        b_norm = q_scale(val.shift(e), ph).truncate(cutoff)
        b_raw = q_scale(val.shift(e_raw), ph_raw).truncate(cutoff)
        a = sc_a[(0, k01[k])][0]
        comps.append(_compare(f"u=θ01_{k} v=ev -> ev", a, b_norm, b_raw, cutoff, tolerance))
    return _report((E0, E1, S), comps, e - e_raw, ph / ph_raw, 0.0, cutoff, tolerance)


def _report(triple, comps, e, ph, residual, cutoff, tolerance) -> MirrorReport:
    ok = residual < tolerance and all(c.deviation < tolerance for c in comps)
    raw_ok = all(c.raw_deviation < tolerance for c in comps)
    if raw_ok:
        status = "none needed"
    elif ok:
        status = "normalization discrepancy"
    else:
        status = "mismatch"
    norm = {"status": status, "exponent": rat_str(e), "phase": [ph.real, ph.imag]}
    return MirrorReport(tuple(triple), tuple(comps), "pass" if ok else "fail", norm, residual,
                        cutoff, tolerance)


def report_to_json(report: MirrorReport) -> str:
    return json.dumps(report.to_json(), sort_keys=True)


# -- grids ----------------------------------------------------------------

def grid_points(max_den: int) -> list:
    """All a tau + b with a, b in [0, 1) of denominator <= max_den."""
    vals = sorted({Fraction(p, q) for q in range(1, max_den + 1) for p in range(q)})
    return [(a, b) for a in vals for b in vals]


def functoriality_grid(max_degree: int = 4, max_den: int = 4):
    """Supported rank-one triples with degrees in [0, max_degree].

    The first object is pinned at the origin: translating all three points by
    a common amount is an exact symmetry of both sides, so every triple of
    the full grid is a translate of one listed here.  Yields line triples
    first, then (line, line, torsion) triples.
    """
    from .sheafside import LineBundle, Torsion
    pts = grid_points(max_den)
    for n0 in range(max_degree + 1):
        for n1 in range(n0 + 1, max_degree + 1):
            for n2 in range(n1 + 1, max_degree + 1):
                for x1 in pts:
                    for x2 in pts:
                        yield LineBundle(n0), LineBundle(n1, *x1), LineBundle(n2, *x2)
    for n0 in range(max_degree + 1):
        for n1 in range(n0 + 1, max_degree + 1):
            for x1 in pts:
                for xs in pts:
                    yield LineBundle(n0), LineBundle(n1, *x1), Torsion(*xs)
