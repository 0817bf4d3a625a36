"""Closed geodesics on the square torus R^2/Z^2 with gradings and local systems.

A line is ``base + t * dir`` with ``dir`` a primitive integer vector in
canonical sign (p > 0, or p = 0 and q > 0).  Its grading is
``alpha = alpha0(dir) + grade_shift`` where ``alpha0`` is the angle of ``dir``
divided by pi, in (-1/2, 1/2].  Gradings are compared exactly: the integer part
first, then the slope.

Morphisms live at intersection points.  Products are sums over lattice
triangles weighted by ``q^area`` and by parallel transport of the local systems
along the three sides.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .linalg import RatMatrix, rat, rat_str
from .localsys import LocalSystemData, transport
from .qseries import DEFAULT_CUTOFF, QSeries, q_add, q_mul, root_of_unity

# Triangles contribute when the signed area of (target, first, second) vertex
# has this sign; zero-area (concurrent) configurations always contribute.
ORIENTATION = -1


class ScopeError(ValueError):
    """A composition branch that is not computed here."""


def canonical_dir(p: int, q: int) -> tuple:
    if (p, q) == (0, 0):
        raise ValueError("direction must be nonzero")
    g = gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return (p, q)


def det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _reduce(pt) -> tuple:
    return (rat(pt[0]) % 1, rat(pt[1]) % 1)


@dataclass(frozen=True)
class LagrangianObject:
    dir: tuple
    base: tuple
    grade_shift: int = 0
    ls: LocalSystemData = field(default_factory=lambda: LocalSystemData(1))

    def __post_init__(self):
        p, q = (int(x) for x in self.dir)
        if canonical_dir(p, q) != (p, q):
            raise ValueError(f"direction {self.dir} is not primitive with canonical sign")
        object.__setattr__(self, "dir", (p, q))
        object.__setattr__(self, "base", _reduce(self.base))

    @classmethod
    def make(cls, dir, base=(0, 0), grade_shift: int = 0, ls=None) -> "LagrangianObject":
        """Like the constructor, but accepts any nonzero direction and makes it
        primitive with canonical sign."""
        p, q = canonical_dir(int(dir[0]), int(dir[1]))
        return cls((p, q), base, grade_shift, ls or LocalSystemData(1))

    @property
    def dim(self) -> int:
        return self.ls.dim

    def alpha(self) -> float:
        p, q = self.dir
        a0 = 0.5 if p == 0 else math.atan2(q, p) / math.pi
        return a0 + self.grade_shift

    def alpha_key(self) -> tuple:
        p, q = self.dir
        angle = (1, Fraction(0)) if p == 0 else (0, Fraction(q, p))
        return (self.grade_shift, angle)

    def support_invariant(self) -> Fraction:
        """det(dir, base) mod 1 classifies lines of a given direction."""
        return det(self.dir, self.base) % 1

    def same_support(self, other: "LagrangianObject") -> bool:
        return self.dir == other.dir and self.support_invariant() == other.support_invariant()

    def shifted(self, k: int = 1) -> "LagrangianObject":
        return LagrangianObject(self.dir, self.base, self.grade_shift + k, self.ls)

    def to_json(self) -> dict:
        out = {"dir": list(self.dir), "base": [rat_str(self.base[0]), rat_str(self.base[1])],
               "grade_shift": self.grade_shift, "rank": self.ls.rank, "b": rat_str(self.ls.b),
               "N": self.ls.N.to_json()}
        if self.ls.cycle != 1:
            out["cycle"] = self.ls.cycle
        return out

    @classmethod
    def from_json(cls, data) -> "LagrangianObject":
        if isinstance(data, str):
            data = json.loads(data)
        ls = LocalSystemData.from_json(data)
        return cls(tuple(int(x) for x in data["dir"]), tuple(rat(x) for x in data["base"]),
                   int(data.get("grade_shift", 0)), ls)


def shift_A(L: LagrangianObject, k: int = 1) -> LagrangianObject:
    return L.shifted(k)


def in_window(L0: LagrangianObject, L1: LagrangianObject) -> bool:
    """alpha1 - alpha0 in [0, 1)."""
    K = L1.grade_shift - L0.grade_shift
    D = det(L0.dir, L1.dir)
    if D > 0:
        return K == 0
    if D < 0:
        return K == 1
    return K == 0


def alpha_difference(L0: LagrangianObject, L1: LagrangianObject) -> float:
    return L1.alpha() - L0.alpha()


# -- intersections --------------------------------------------------------

def intersections(L0: LagrangianObject, L1: LagrangianObject) -> list:
    """Points of L0 meeting L1 in [0,1)^2, sorted; empty for parallel lines."""
    return list(_intersections(L0.dir, L0.base, L1.dir, L1.base))


@lru_cache(maxsize=16384)
def _intersections(v0, base0, v1, base1) -> tuple:
    D = det(v1, v0)
    if D == 0:
        return []
    off = det(v1, (base0[0] - base1[0], base0[1] - base1[1]))
    pts = set()
    # s = (j - off) / D must lie in [0, 1)
    lo, hi = min(off, off + D), max(off, off + D)
    for j in range(math.floor(lo), math.ceil(hi) + 1):
        s = (j - off) / D
        if not 0 <= s < 1:
            continue
        pts.add(_reduce((base0[0] + s * v0[0], base0[1] + s * v0[1])))
    return tuple(sorted(pts))


# -- Hom spaces -----------------------------------------------------------

def _intertwiners(ls0: LocalSystemData, ls1: LocalSystemData) -> list:
    """Basis of {f : M1 f = f M0}, as complex matrices of shape (dim1, dim0)."""
    r0, r1 = ls0.dim, ls1.dim
    if ls0.cycle == 1 and ls1.cycle == 1:
        if (ls1.b - ls0.b) % 1 != 0:
            return []
        U0, U1 = ls0.unipotent(), ls1.unipotent()
        A = _sylvester(U1, U0)
        return [_unflatten(v, r1, r0) for v in A.nullspace().columns()]
    M0, M1 = ls0.monodromy(), ls1.monodromy()
    A = np.kron(M1, np.eye(r0)) - np.kron(np.eye(r1), M0.T)
    return [v.reshape(r1, r0) for v in _numeric_null(A)]


def _sylvester(U1: RatMatrix, U0: RatMatrix) -> RatMatrix:
    """Matrix of f |-> U1 f - f U0 on row-major flattened f."""
    r1, r0 = U1.rows, U0.rows
    rows = []
    for i in range(r1):
        for j in range(r0):
            row = [Fraction(0)] * (r1 * r0)
            for l in range(r1):
                if U1.entries[i][l]:
                    row[l * r0 + j] += U1.entries[i][l]
            for l in range(r0):
                if U0.entries[l][j]:
                    row[i * r0 + l] -= U0.entries[l][j]
            rows.append(row)
    return RatMatrix.from_rows(rows, cols=r1 * r0)


def _unflatten(v, r1, r0) -> np.ndarray:
    return np.array([complex(x) for x in v], dtype=complex).reshape(r1, r0)


def _numeric_null(A: np.ndarray, tol: float = 1e-9) -> list:
    if A.size == 0:
        return [np.eye(A.shape[1])[i] for i in range(A.shape[1])]
    _, s, vh = np.linalg.svd(A)
    rank = int((s > tol).sum())
    return [vh[i].conj() for i in range(rank, vh.shape[0])]


def _cokernel(ls0: LocalSystemData, ls1: LocalSystemData) -> list:
    """Representatives of Hom(V0,V1) modulo the image of f |-> M1 f M0^{-1} - f."""
    r0, r1 = ls0.dim, ls1.dim
    if ls0.cycle == 1 and ls1.cycle == 1:
        if (ls1.b - ls0.b) % 1 != 0:
            return []
        U0inv, U1 = ls0.unipotent().inverse(), ls1.unipotent()
        # f |-> U1 f U0^{-1} - f, row-major
        n = r1 * r0
        cols = []
        for t in range(n):
            F = [[Fraction(int(i * r0 + j == t)) for j in range(r0)] for i in range(r1)]
            Fm = RatMatrix.from_rows(F, cols=r0)
            img = U1 @ Fm @ U0inv - Fm
            cols.append([x for row in img.entries for x in row])
        image = RatMatrix.from_columns(cols, n)
        ext = image.hstack(RatMatrix.identity(n))
        piv = ext.pivot_columns()
        chosen = [p - n for p in piv if p >= n]
        return [_unflatten([Fraction(int(i == c)) for i in range(n)], r1, r0) for c in chosen]
    M0, M1 = ls0.monodromy(), ls1.monodromy()
    A = np.kron(M1, np.linalg.inv(M0).T) - np.eye(r1 * r0)
    u, s, _ = np.linalg.svd(A)
    rank = int((s > 1e-9).sum())
    return [u[:, i].reshape(r1, r0) for i in range(rank, u.shape[1])]


@dataclass(frozen=True)
class FukHom:
    source: LagrangianObject
    target: LagrangianObject
    kind: str          # "zero" | "transverse" | "equal0" | "equal1"
    points: tuple      # intersection points (transverse) or () for equal supports
    basis: tuple       # ((point index or -1, matrix), ...)
    coords: tuple      # QSeries per basis element

    @property
    def dim(self) -> int:
        return len(self.basis)

    def with_coords(self, coords) -> "FukHom":
        if len(coords) != self.dim:
            raise ValueError("wrong number of coordinates")
        return FukHom(self.source, self.target, self.kind, self.points, self.basis, tuple(coords))

    def basis_element(self, i: int, cutoff=DEFAULT_CUTOFF) -> "FukHom":
        return self.with_coords([QSeries.make([(0, int(j == i))], cutoff) for j in range(self.dim)])


def _unit(r1, r0, a, b) -> np.ndarray:
    m = np.zeros((r1, r0), dtype=complex)
    m[a, b] = 1
    return m


def hom_space(L0: LagrangianObject, L1: LagrangianObject, cutoff=DEFAULT_CUTOFF) -> FukHom:
    """The Hom space with zero coordinates."""
    zero = QSeries.zero(cutoff)
    if L0.same_support(L1):
        K = L1.grade_shift - L0.grade_shift
        if K == 0:
            basis = tuple((-1, m) for m in _intertwiners(L0.ls, L1.ls))
            kind = "equal0"
        elif K == 1:
            basis = tuple((-1, m) for m in _cokernel(L0.ls, L1.ls))
            kind = "equal1"
        else:
            basis, kind = (), "zero"
        return FukHom(L0, L1, kind if basis else "zero", (), basis, (zero,) * len(basis))
    if L0.dir == L1.dir or not in_window(L0, L1):
        return FukHom(L0, L1, "zero", (), (), ())
    pts = tuple(intersections(L0, L1))
    r0, r1 = L0.dim, L1.dim
    basis = tuple((i, _unit(r1, r0, a, b)) for i in range(len(pts))
                  for a in range(r1) for b in range(r0))
    return FukHom(L0, L1, "transverse", pts, basis, (zero,) * len(basis))


def hom_dim_A(L0: LagrangianObject, L1: LagrangianObject, k: int = 0) -> int:
    return hom_space(L0, L1.shifted(k)).dim


# -- triangles ------------------------------------------------------------

@dataclass(frozen=True)
class TriangleContribution:
    area: Fraction
    holonomy: np.ndarray   # (dim2, dim0) for matrix inputs, 1x1 for rank one
    s: Fraction            # offset of the L1 lift, identifies the triangle
    vertices: tuple        # (X2, X0, X1) in the universal cover
    dts: tuple             # transport lengths along L0, L1, L2


def _is_positive_triple(L0, L1, L2) -> bool:
    if L0.dir == L1.dir or L1.dir == L2.dir or L0.dir == L2.dir:
        return False
    return in_window(L0, L1) and in_window(L1, L2) and in_window(L0, L2)


def _bezout(p: int, q: int) -> tuple:
    """(u, v) with u p + v q = 1 for coprime p, q."""
    old_r, r, old_s, s_, old_t, t = p, q, 1, 0, 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s_ = s_, old_s - k * s_
        old_t, t = t, old_t - k * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def _param_mod1(v, x, X) -> Fraction:
    """t mod 1 with X + t v = x mod Z^2, for a point x on the line through X."""
    u, w = _bezout(*v)
    return (u * (rat(x[0]) - X[0]) + w * (rat(x[1]) - X[1])) % 1


def triangle_geometry(L0, L1, L2, x0, x1, x2, cutoff, box_scale: int = 1) -> list:
    """Triangles with vertices over x0 (on L0, L1), x1 (on L1, L2) and x2
    (on L0, L2), one per lattice class, with area <= cutoff, sorted by
    (area, s).  Returns (area, s, X2, X0, X1, dt0, dt1, dt2) tuples."""
    if not _is_positive_triple(L0, L1, L2):
        raise ValueError("triangle enumeration needs a transverse positive triple")
    v0, v1, v2 = L0.dir, L1.dir, L2.dir
    d01, d12, d02 = det(v0, v1), det(v1, v2), det(v0, v2)
    cutoff = rat(cutoff)
    X2 = (rat(x2[0]), rat(x2[1]))
    x0, x1 = _reduce(x0), _reduce(x1)
    # area = s^2 |d02| / (2 |d01 d12|) <= cutoff bounds |s|
    bound = math.sqrt(2 * float(cutoff) * abs(d01 * d12) / abs(d02)) * box_scale + 1
    sign_area = -d02 * d01 * d12  # sign of the signed area of (X2, X0, X1) for s != 0
    # X0 = X2 + t0 v0 lies over x0 iff t0 = t0* mod 1 (v0 is primitive); same for X1
    t0s = _param_mod1(v0, x0, X2)
    t2s = _param_mod1(v2, x1, X2)
    area_cut = cutoff * box_scale * box_scale
    # integer form of the loop: t0 = (P + m Q) / Q, t2* = R / S
    P, Q = t0s.numerator, t0s.denominator
    R, S = t2s.numerator, t2s.denominator
    modulus = Q * d12 * S
    # area <= area_cut  <=>  (P + m Q)^2 |d01 d02| <= 2 |d12| Q^2 area_cut
    lhs_scale = abs(d01 * d02) * area_cut.denominator
    rhs = 2 * abs(d12) * Q * Q * area_cut.numerator
    out = []
    tmax = bound / abs(d01)
    for m in range(math.floor(-tmax - float(t0s)), math.ceil(tmax - float(t0s)) + 1):
        w = P + m * Q
        # t2 - t2* = (-d01 w S - R Q d12) / (Q d12 S) must be an integer
        if (-d01 * w * S - R * Q * d12) % modulus:
            continue
        if w * w * lhs_scale > rhs:
            continue
        if w != 0 and (sign_area > 0) != (ORIENTATION > 0):
            continue
        t0 = Fraction(w, Q)
        s = d01 * t0
        t2 = -s / d12
        area = s * s * abs(d02) / (2 * abs(d01 * d12))
        X0 = (X2[0] + t0 * v0[0], X2[1] + t0 * v0[1])
        X1 = (X2[0] + t2 * v2[0], X2[1] + t2 * v2[1])
        diff = (X1[0] - X0[0], X1[1] - X0[1])
        dt1 = diff[0] / v1[0] if v1[0] else diff[1] / v1[1]
        out.append((area, s, X2, X0, X1, t0, dt1, -t2))
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def enumerate_triangles(L0, L1, L2, x0, x1, x2, area_cutoff, u=None, v=None,
                        box_scale: int = 1) -> list:
    """Triangle contributions for basis points x0 in L0∩L1, x1 in L1∩L2 and target
    x2 in L0∩L2.  ``u`` and ``v`` are the matrices sitting at x0 and x1
    (identity-like 1x1 by default); the holonomy is P2 v P1 u P0."""
    tris = triangle_geometry(L0, L1, L2, x0, x1, x2, area_cutoff, box_scale)
    out = []
    for area, s, X2, X0, X1, dt0, dt1, dt2 in tris:
        hol = enumerate_holonomy(L0, L1, L2, (dt0, dt1, dt2), u, v)
        out.append(TriangleContribution(area, hol, s, (X2, X0, X1), (dt0, dt1, dt2)))
    return out


# -- composition ----------------------------------------------------------

def _matrix_series(entries: dict, shape, cutoff) -> list:
    """{exponent: matrix} -> row-major list of QSeries."""
    r, c = shape
    return [QSeries.make([(e, m[i, j]) for e, m in entries.items()], cutoff)
            for i in range(r) for j in range(c)]


def _coords_in_basis(target: FukHom, per_point: dict, cutoff) -> list:
    """Coordinates, on a transverse basis of matrix units, of {point index: {exp: matrix}}."""
    coords = []
    for pi, unit in target.basis:
        a, b = np.argwhere(unit != 0)[0]
        acc = per_point.get(pi, {})
        coords.append(QSeries.make([(e, m[a, b]) for e, m in acc.items()], cutoff))
    return coords


def _solve_in_span(basis: list, m: np.ndarray) -> np.ndarray:
    if not basis:
        if np.abs(m).max(initial=0) > 1e-9:
            raise ArithmeticError("composite leaves the target Hom space")
        return np.zeros(0, dtype=complex)
    A = np.stack([b.reshape(-1) for b in basis], axis=1)
    x, *_ = np.linalg.lstsq(A, m.reshape(-1), rcond=None)
    if np.abs(A @ x - m.reshape(-1)).max(initial=0) > 1e-9:
        raise ArithmeticError("composite leaves the target Hom space")
    return x


def _series_matrix(hom: FukHom, shape) -> dict:
    """Σ coords_i * basis_i as {exponent: matrix} (equal-support kinds only)."""
    acc: dict = {}
    for c, (_, m) in zip(hom.coords, hom.basis):
        for e, x in c.terms:
            acc[e] = acc.get(e, np.zeros(shape, dtype=complex)) + x * m
    return acc


def compose_A(v: FukHom, u: FukHom, cutoff=6) -> FukHom:
    """v o u for u: L0 -> L1 and v: L1 -> L2."""
    if u.target != v.source:
        raise ValueError("morphisms are not composable")
    L0, L1, L2 = u.source, u.target, v.target
    cutoff = rat(cutoff)
    target = hom_space(L0, L2, cutoff)
    zero = target.with_coords([QSeries.zero(cutoff)] * target.dim)
    if u.kind == "zero" or v.kind == "zero":
        return zero
    # grading bookkeeping: alpha2 - alpha0 = (alpha1 - alpha0) + (alpha2 - alpha1)
    if u.kind == "equal1" or v.kind == "equal1":
        raise ScopeError("degree-one equal-support factors go through serre_pairing_A")
    if target.kind == "zero":
        return zero
    if u.kind == "equal0" and v.kind == "equal0":
        mu = _series_matrix(u, (L1.dim, L0.dim))
        mv = _series_matrix(v, (L2.dim, L1.dim))
        prod: dict = {}
        for e1, a in mu.items():
            for e2, b in mv.items():
                if e1 + e2 <= cutoff:
                    prod[e1 + e2] = prod.get(e1 + e2, 0) + b @ a
        basis = [m for _, m in target.basis]
        coords = [{} for _ in basis]
        for e, m in prod.items():
            for i, x in enumerate(_solve_in_span(basis, m)):
                coords[i][e] = coords[i].get(e, 0) + x
        return target.with_coords([QSeries.make(c, cutoff) for c in coords])
    if u.kind == "equal0" or v.kind == "equal0":
        # a flat endomorphism acts pointwise on the transverse factor
        trans, flat = (v, u) if u.kind == "equal0" else (u, v)
        mflat = _series_matrix(flat, (flat.target.dim, flat.source.dim))
        per_point: dict = {}
        for c, (pi, unit) in zip(trans.coords, trans.basis):
            for e1, x in c.terms:
                for e2, f in mflat.items():
                    if e1 + e2 > cutoff:
                        continue
                    m = x * (unit @ f if flat is u else f @ unit)
                    pt = trans.points[pi]
                    ti = target.points.index(pt)
                    acc = per_point.setdefault(ti, {})
                    acc[e1 + e2] = acc.get(e1 + e2, 0) + m
        return target.with_coords(_coords_in_basis(target, per_point, cutoff))
    # three transverse supports
    if not _is_positive_triple(L0, L1, L2):
        raise ScopeError("only transverse positive triples are composed by triangle counts")
    per_point: dict = {}
    for cu, (iu, mu) in zip(u.coords, u.basis):
        if not cu.terms:
            continue
        for cv, (iv, mv) in zip(v.coords, v.basis):
            if not cv.terms:
                continue
            w = q_mul(cv, cu)
            for ti, x2 in enumerate(target.points):
                budget = cutoff - (w.low() or 0)
                tris = enumerate_triangles(L0, L1, L2, u.points[iu], v.points[iv], x2,
                                           max(budget, Fraction(0)), mu, mv)
                acc = per_point.setdefault(ti, {})
                for t in tris:
                    for e, c in w.terms:
                        if e + t.area <= cutoff:
                            acc[e + t.area] = acc.get(e + t.area, 0) + c * t.holonomy
    return target.with_coords(_coords_in_basis(target, per_point, cutoff))


def _scalar_holonomy(L0, L1, L2, dts) -> complex:
    """P2 P1 P0 for N = 0 rank-one systems: a single root of unity."""
    if not all(L.ls.is_scalar() for L in (L0, L1, L2)):
        return complex(enumerate_holonomy(L0, L1, L2, dts)[0, 0])
    dt0, dt1, dt2 = dts
    return root_of_unity(-(L0.ls.b * dt0 + L1.ls.b * dt1 + L2.ls.b * dt2))


def enumerate_holonomy(L0, L1, L2, dts, u=None, v=None) -> np.ndarray:
    if u is None:
        u = np.eye(L1.dim, L0.dim, dtype=complex)
    if v is None:
        v = np.eye(L2.dim, L1.dim, dtype=complex)
    dt0, dt1, dt2 = dts
    return transport(L2.ls, dt2) @ v @ transport(L1.ls, dt1) @ u @ transport(L0.ls, dt0)


def structure_constants_A(L0, L1, L2, cutoff=6, box_scale: int = 1) -> dict:
    """(i, j) -> [series at each target point] for rank-one objects, i indexing
    L1∩L2 and j indexing L0∩L1."""
    for L in (L0, L1, L2):
        if L.dim != 1:
            raise ScopeError("structure constants are tabulated for rank-one systems")
    p01, p12, p02 = intersections(L0, L1), intersections(L1, L2), intersections(L0, L2)
    out = {}
    for i, x1 in enumerate(p12):
        for j, x0 in enumerate(p01):
            row = []
            for x2 in p02:
                tris = triangle_geometry(L0, L1, L2, x0, x1, x2, cutoff, box_scale)
                row.append(QSeries.make([(t[0], _scalar_holonomy(L0, L1, L2, t[5:])) for t in tris],
                                        cutoff))
            out[(i, j)] = row
    return out


# -- Serre duality --------------------------------------------------------

@dataclass(frozen=True)
class FukPairing:
    matrix: np.ndarray  # rows: basis of Hom(L0, L1[1]); cols: basis of Hom(L1, L0)
    rank: int


def serre_pairing_A(L0: LagrangianObject, L1: LagrangianObject) -> FukPairing:
    """tr(f g) for f in Hom(L0, L1[1]) and g in Hom(L1, L0), summed at shared points."""
    H1 = hom_space(L0, L1.shifted(1))
    H2 = hom_space(L1, L0)
    if H1.dim != H2.dim:
        raise ArithmeticError("Serre dimensions disagree")
    M = np.zeros((H1.dim, H2.dim), dtype=complex)
    for a, (p1, f) in enumerate(H1.basis):
        for c, (p2, g) in enumerate(H2.basis):
            if H1.kind == "transverse":
                if H1.points[p1] != H2.points[p2]:
                    continue
            M[a, c] = np.trace(f @ g)
    rank = int(np.linalg.matrix_rank(M, tol=1e-9)) if M.size else 0
    return FukPairing(M, rank)


# -- additive closure -----------------------------------------------------

@dataclass(frozen=True)
class TupleObject:
    parts: tuple

    def shifted(self, k: int = 1) -> "TupleObject":
        return TupleObject(tuple(L.shifted(k) for L in self.parts))


def tuple_hom_dims(A: TupleObject, B: TupleObject, k: int = 0) -> list:
    """Matrix of componentwise Hom dimensions, rows indexed by B."""
    return [[hom_dim_A(a, b, k) for a in A.parts] for b in B.parts]


def tuple_hom_dim(A: TupleObject, B: TupleObject, k: int = 0) -> int:
    return sum(sum(r) for r in tuple_hom_dims(A, B, k))


def compose_tuple(V: list, U: list, cutoff=6) -> list:
    """Matrix product of morphism matrices: (V U)[i][j] = sum_l V[i][l] o U[l][j]."""
    rows, inner, cols = len(V), len(U), len(U[0]) if U else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for l in range(inner):
                c = compose_A(V[i][l], U[l][j], cutoff)
                acc = c if acc is None else acc.with_coords(
                    [q_add(x, y) for x, y in zip(acc.coords, c.coords)])
            row.append(acc)
        out.append(row)
    return out


# -- coverings ------------------------------------------------------------

def pushforward_obj(r: int, L: LagrangianObject) -> LagrangianObject:
    """Image under (x, y) |-> (r x, y); a d-fold wrapped image carries a d-sheet
    cyclic monodromy, and the grading stays in the same unit interval."""
    if r < 1:
        raise ValueError("r must be positive")
    if r == 1:
        return L
    p, q = L.dir
    g = gcd(r * p, q)
    new_dir = canonical_dir(r * p, q)
    ls = LocalSystemData(L.ls.rank, L.ls.b, L.ls.N, L.ls.cycle * g)
    return LagrangianObject(new_dir, (r * L.base[0], L.base[1]), L.grade_shift, ls)


def pullback_obj(r: int, L: LagrangianObject) -> TupleObject:
    """Preimage under (x, y) |-> (r x, y): gcd(p, r) components, each covering the
    original loop r / gcd(p, r) times and so carrying the monodromy M^{r/gcd(p, r)}."""
    if r < 1:
        raise ValueError("r must be positive")
    if r == 1:
        return TupleObject((L,))
    p, q = L.dir
    new_dir = canonical_dir(p, r * q)
    d = r // gcd(p, r)
    ls = L.ls.power(d)
    parts, seen = [], set()
    for m in range(r):
        comp = LagrangianObject(new_dir, ((L.base[0] + m) / r, L.base[1]), L.grade_shift, ls)
        key = comp.support_invariant()
        if key not in seen:
            seen.add(key)
            parts.append(comp)
    return TupleObject(tuple(sorted(parts, key=lambda c: c.support_invariant())))
