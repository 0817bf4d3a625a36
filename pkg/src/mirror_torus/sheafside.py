"""Indecomposable coherent sheaves on E_tau and their morphisms.

Objects are descriptors: a line bundle of degree ``n`` translated to
``x = a tau + b`` and tensored with a unipotent bundle F(V, e^N); a torsion
sheaf at ``x``; or the pushforward of such a line bundle along the isogeny
E_{r tau} -> E_tau.  Every object also carries a complex-degree ``shift``.

Morphisms between line bundles of degrees n0 < n1 are theta sections of degree
n1 - n0 at ``x01 = (x1 - x0) / (n1 - n0)``.  A morphism from a line bundle to a
torsion sheaf is a scalar (rank 1); composing with a section evaluates it at
the support point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .linalg import RatMatrix, rat, rat_str
from .localsys import LocalSystemData, is_cyclic_nilpotent
from .qseries import (DEFAULT_CUTOFF, DEFAULT_TOL, QSeries, expand_in_theta_basis, fq_mul,
                      lowest_mode, q_add, q_mul, q_scale, root_of_unity, theta_basis_section,
                      theta_exponent, theta_value)


class UnsupportedError(ValueError):
    """The requested combination lies outside what is implemented."""


KINDS = ("line", "torsion", "push")


@dataclass(frozen=True)
class SheafObject:
    kind: str
    n: int = 0
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    rank: int = 1
    N: RatMatrix | None = field(default=None)
    r: int = 1
    shift: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sheaf kind {self.kind!r}")
        object.__setattr__(self, "a", rat(self.a))
        object.__setattr__(self, "b", rat(self.b))
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.N is None:
            object.__setattr__(self, "N", RatMatrix.zeros(self.rank, self.rank))
        ls = LocalSystemData(self.rank, self.b, self.N)  # validates N
        if self.kind == "torsion" and not is_cyclic_nilpotent(ls.N):
            raise ValueError("a torsion sheaf needs a cyclic nilpotent N")
        if self.kind == "push" and self.r < 2:
            raise ValueError("pushforwards need r >= 2")
        if self.kind != "push" and self.r != 1:
            raise ValueError("r is only meaningful for pushforwards")
        if self.kind == "torsion" and self.n != 0:
            raise ValueError("torsion sheaves carry no degree")

    # -- descriptors ------------------------------------------------------

    @property
    def is_bundle(self) -> bool:
        return self.kind != "torsion"

    @property
    def total_rank(self) -> int:
        if self.kind == "torsion":
            return 0
        return self.rank * self.r

    @property
    def degree(self) -> int:
        """Degree (for torsion: the length)."""
        if self.kind == "torsion":
            return self.rank
        return self.n * self.rank

    @property
    def slope(self) -> Fraction:
        if self.kind == "torsion":
            raise ValueError("torsion sheaves have infinite slope")
        return Fraction(self.degree, self.total_rank)

    @property
    def ls(self) -> LocalSystemData:
        return LocalSystemData(self.rank, self.b, self.N)

    def is_scalar(self) -> bool:
        return self.rank == 1 and self.N.is_zero()

    def shifted(self, k: int = 1) -> "SheafObject":
        return SheafObject(self.kind, self.n, self.a, self.b, self.rank, self.N, self.r,
                           self.shift + k)

    def inner(self) -> "SheafObject":
        """The line bundle on E_{r tau} a pushforward is built from."""
        if self.kind != "push":
            raise ValueError("only pushforwards have an inner bundle")
        return SheafObject("line", self.n, self.a, self.b, self.rank, self.N, 1, 0)

    def label(self) -> str:
        if self.kind == "line":
            s = f"L(n={self.n}, x={self.a}τ+{self.b})"
        elif self.kind == "torsion":
            s = f"S(x={self.a}τ+{self.b})"
        else:
            s = f"π{self.r}*L(n={self.n}, x={self.a}τ+{self.b})"
        if self.rank > 1:
            s += f"⊗V{self.rank}"
        if self.shift:
            s += f"[{self.shift}]"
        return s

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "a": rat_str(self.a), "b": rat_str(self.b),
                "rank": self.rank, "N": self.N.to_json(), "r": self.r, "shift": self.shift}

    @classmethod
    def from_json(cls, data) -> "SheafObject":
        if isinstance(data, str):
            data = json.loads(data)
        rank = int(data.get("rank", 1))
        N = data.get("N")
        N = RatMatrix.from_json(N, rank, rank) if N else None
        return cls(str(data["kind"]), int(data.get("n", 0)), rat(data.get("a", "0/1")),
                   rat(data.get("b", "0/1")), rank, N, int(data.get("r", 1)),
                   int(data.get("shift", 0)))


def LineBundle(n: int, a=0, b=0, rank: int = 1, N=None, shift: int = 0) -> SheafObject:
    return SheafObject("line", n, rat(a), rat(b), rank, N, 1, shift)


def Torsion(a=0, b=0, rank: int = 1, N=None, shift: int = 0) -> SheafObject:
    if N is None and rank > 1:
        N = RatMatrix.from_rows([[int(j == i + 1) for j in range(rank)] for i in range(rank)])
    return SheafObject("torsion", 0, rat(a), rat(b), rank, N, 1, shift)


def Pushforward(r: int, inner: SheafObject, shift: int = 0) -> SheafObject:
    if inner.kind != "line":
        raise ValueError("pushforwards are taken of line-bundle descriptors")
    return SheafObject("push", inner.n, inner.a, inner.b, inner.rank, inner.N, r,
                       inner.shift + shift)


# -- dimensions -----------------------------------------------------------

def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def _same_point(E0: SheafObject, E1: SheafObject) -> bool:
    return _is_int(E1.a - E0.a) and _is_int(E1.b - E0.b)


def intertwiner_dim(N0: RatMatrix, N1: RatMatrix) -> int:
    """dim {f in Hom(V0, V1) : N1 f = f N0}."""
    r0, r1 = N0.rows, N1.rows
    rows = []
    for i in range(r1):
        for j in range(r0):
            row = [Fraction(0)] * (r1 * r0)
            for l in range(r1):      # (N1 f)_{ij} = sum_l N1_{il} f_{lj}
                if N1.entries[i][l]:
                    row[l * r0 + j] += N1.entries[i][l]
            for l in range(r0):      # (f N0)_{ij} = sum_l f_{il} N0_{lj}
                if N0.entries[l][j]:
                    row[i * r0 + l] -= N0.entries[l][j]
            rows.append(row)
    A = RatMatrix.from_rows(rows, cols=r1 * r0)
    return r1 * r0 - A.rank()


def _hom0(E0: SheafObject, E1: SheafObject) -> int:
    if E0.is_bundle and E1.is_bundle:
        m0, m1 = E0.slope, E1.slope
        if m0 < m1:
            return E0.total_rank * E1.degree - E1.total_rank * E0.degree
        if m0 > m1:
            return 0
        if E0.kind == "line" and E1.kind == "line":
            if not _same_point(E0, E1):
                return 0
            return intertwiner_dim(E0.N, E1.N)
        raise UnsupportedError("equal-slope Homs involving pushforwards are not implemented")
    if E0.is_bundle and not E1.is_bundle:
        return E0.total_rank * E1.rank
    if not E0.is_bundle and E1.is_bundle:
        return 0
    if not _same_point(E0, E1):
        return 0
    return intertwiner_dim(E0.N, E1.N)


def hom_dim(E0: SheafObject, E1: SheafObject, k: int = 0) -> int:
    """dim Hom(E0, E1[k]) in D^b(E_tau); only total degrees 0 and 1 are nonzero.

    Degree 1 is computed by duality as dim Hom(E1, E0)."""
    eff = k + E1.shift - E0.shift
    if eff == 0:
        return _hom0(E0, E1)
    if eff == 1:
        return _hom0(E1, E0)
    return 0


def euler_form(E0: SheafObject, E1: SheafObject) -> int:
    """dim Hom - dim Ext^1 for shift-0 objects, by Riemann-Roch: r0 d1 - r1 d0."""
    return E0.total_rank * E1.degree - E1.total_rank * E0.degree


# -- theta bases ----------------------------------------------------------

def _require_scalar_lines(*objs):
    for E in objs:
        if E.kind != "line" or not E.is_scalar():
            raise UnsupportedError("unsupported in composition scope: need rank-1, N=0 line bundles")


def hom_point(E0: SheafObject, E1: SheafObject) -> tuple:
    """(d, a01, b01) with d = n1 - n0 and x01 = (x1 - x0)/d."""
    d = E1.n - E0.n
    if d <= 0:
        raise ValueError("theta bases need n1 > n0")
    return d, (E1.a - E0.a) / d, (E1.b - E0.b) / d


def hom_basis(E0: SheafObject, E1: SheafObject, cutoff=DEFAULT_CUTOFF) -> list:
    _require_scalar_lines(E0, E1)
    d, a, b = hom_point(E0, E1)
    return [theta_basis_section(d, k, a, b, cutoff) for k in range(d)]


def basis_low(d: int, k: int, a) -> Fraction:
    """Smallest q-exponent occurring in the k-th theta basis section."""
    return theta_exponent(d, lowest_mode(d, k, a), a)


def hom_normalization(E0: SheafObject, E1: SheafObject) -> QSeries:
    """lambda = exp(-pi i d <x01, x01>) = q^{-d a^2 / 2} e^{-2 pi i d a b} for x01 = a tau + b.

    Rescaling each theta basis element by this monomial (it depends on the pair
    only) makes section products match triangle counts term by term.
    """
    d, a, b = hom_point(E0, E1)
    return QSeries.monomial(-d * a * a / 2, root_of_unity(-d * a * b), Fraction(10 ** 6))


@dataclass(frozen=True)
class SheafHom:
    source: SheafObject
    target: SheafObject
    coords: tuple  # QSeries per basis element

    @property
    def basis_dim(self) -> int:
        return len(self.coords)

    def scale(self, c) -> "SheafHom":
        return SheafHom(self.source, self.target, tuple(q_scale(x, c) for x in self.coords))


def basis_hom(E0: SheafObject, E1: SheafObject, k: int, cutoff=DEFAULT_CUTOFF) -> SheafHom:
    dim = hom_dim(E0, E1, 0)
    if not 0 <= k < dim:
        raise IndexError("basis index out of range")
    return SheafHom(E0, E1, tuple(QSeries.make([(0, int(i == k))], cutoff) for i in range(dim)))


@dataclass(frozen=True)
class StructureConstants:
    dims: tuple        # (dim Hom(E1,E2), dim Hom(E0,E1), dim Hom(E0,E2))
    consts: dict       # (i, j) -> tuple of QSeries, coefficient of target basis l
    residual: float
    cutoff: Fraction


def structure_constants_B(E0, E1, E2, cutoff=6) -> StructureConstants:
    """theta12_i * theta01_j = sum_l C[i, j][l] theta02_l, by Fourier convolution
    and coset-wise expansion."""
    _require_scalar_lines(E0, E1, E2)
    return _structure_constants(hom_point(E0, E1), hom_point(E1, E2), rat(cutoff))


@lru_cache(maxsize=32768)
def _structure_constants(p01: tuple, p12: tuple, cutoff: Fraction) -> StructureConstants:
    # depends on the two Hom points only, so grids that repeat them share work
    d01, a01, b01 = p01
    d12, a12, b12 = p12
    d02 = d01 + d12
    a02, b02 = (d01 * a01 + d12 * a12) / d02, (d01 * b01 + d12 * b12) / d02
    top = max(basis_low(d02, l, a02) for l in range(d02))
    work = cutoff + max(top, 0)
    lows = [basis_low(d01, k, a01) for k in range(d01)] + [basis_low(d12, k, a12) for k in range(d12)]
    factor_cut = work - min(min(lows), 0)
    u_basis = [theta_basis_section(d01, k, a01, b01, factor_cut) for k in range(d01)]
    v_basis = [theta_basis_section(d12, k, a12, b12, factor_cut) for k in range(d12)]
    consts, residual = {}, 0.0
    for i, v in enumerate(v_basis):
        for j, u in enumerate(u_basis):
            ex = expand_in_theta_basis(fq_mul(v, u), d02, a02, b02)
            residual = max(residual, ex.residual)
            consts[(i, j)] = tuple(c.truncate(cutoff) for c in ex.coeffs)
    return StructureConstants((d12, d01, d02), consts, residual, cutoff)


def compose_B(v: SheafHom, u: SheafHom, cutoff=6, tol: float = DEFAULT_TOL) -> SheafHom:
    """v o u for v: E1 -> E2 and u: E0 -> E1 with strictly increasing degrees."""
    if u.target != v.source:
        raise ValueError("morphisms are not composable")
    E0, E1, E2 = u.source, u.target, v.target
    if E2.kind == "torsion":
        return compose_torsion_B(v, u, cutoff)
    _require_scalar_lines(E0, E1, E2)
    if not E0.n < E1.n < E2.n:
        raise UnsupportedError("unsupported in composition scope: degrees must increase strictly")
    sc = structure_constants_B(E0, E1, E2, cutoff)
    if sc.residual >= tol:
        raise ArithmeticError(f"theta expansion residual {sc.residual:.3g} above tolerance")
    cutoff = rat(cutoff)
    out = [QSeries.zero(cutoff) for _ in range(sc.dims[2])]
    for (i, j), cs in sc.consts.items():
        w = q_mul(v.coords[i], u.coords[j])
        if not w.terms:
            continue
        for l, c in enumerate(cs):
            out[l] = q_add(out[l], q_mul(w, c))
    return SheafHom(E0, E2, tuple(x.truncate(cutoff) if x.cutoff > cutoff else x for x in out))


# -- torsion targets ------------------------------------------------------

def _check_torsion_pair(L: SheafObject, S: SheafObject):
    if L.kind != "line" or S.kind != "torsion":
        raise UnsupportedError("need a line bundle source and a torsion target")
    if not (L.is_scalar() and S.is_scalar()):
        raise UnsupportedError("unsupported ranks: torsion composition is rank 1 only")


def section_at(E0: SheafObject, E1: SheafObject, k: int, S: SheafObject, cutoff) -> QSeries:
    """The k-th theta basis section of Hom(E0, E1) evaluated at the support of S."""
    d, a, b = hom_point(E0, E1)
    return theta_value(d, k, a, b, S.a, S.b, cutoff)


def compose_torsion_B(v: SheafHom, u: SheafHom, cutoff=6) -> SheafHom:
    """v o u for u: L0 -> L1 and v: L1 -> S, with Hom(L_i, S) = C.

    The composite is v times the value of u at the support point of S.
    """
    if u.target != v.source:
        raise ValueError("morphisms are not composable")
    L0, L1, S = u.source, u.target, v.target
    _require_scalar_lines(L0, L1)
    _check_torsion_pair(L1, S)
    cutoff = rat(cutoff)
    total = QSeries.zero(cutoff)
    for k, c in enumerate(u.coords):
        if c.terms:
            total = q_add(total, q_mul(c, section_at(L0, L1, k, S, cutoff)))
    return SheafHom(L0, S, (q_mul(v.coords[0], total),))


def torsion_prefactor(L: SheafObject, S: SheafObject) -> QSeries:
    """exp(-pi i (tau (n a1^2 + 2 a0 a1) + 2 (a1 b0 + a0 b1 + n a1 b1))) for
    L of degree n at a0 tau + b0 and S supported at a1 tau + b1 (rank 1)."""
    _check_torsion_pair(L, S)
    n, a0, b0, a1, b1 = L.n, L.a, L.b, S.a, S.b
    exponent = -(n * a1 * a1 + 2 * a0 * a1) / 2
    phase = root_of_unity(-(a1 * b0 + a0 * b1 + n * a1 * b1))
    return QSeries.monomial(exponent, phase, Fraction(10 ** 6))


# -- Serre duality --------------------------------------------------------

@dataclass(frozen=True)
class SerrePairing:
    matrix: tuple  # rows: functionals on Hom(E0,E1); cols: basis of Hom(E0,E1)
    rank: int


def _pairing_matrix(sections: list, functionals: list) -> tuple:
    if len(sections) != len(functionals):
        raise ValueError("paired spaces have different dimensions")
    return tuple(tuple(phi(s) for s in sections) for phi in functionals)


def serre_pairing_B(E0: SheafObject, E1: SheafObject, cutoff=DEFAULT_CUTOFF,
                    probe_q: float = 0.1) -> SerrePairing:
    """Pairing of Hom(E0, E1) with Ext^1(E1, E0), the latter modelled as the dual
    space spanned by reading off the Fourier coefficient at the lowest mode of
    each coset.  The rank is taken at a numeric probe q."""
    _require_scalar_lines(E0, E1)
    if hom_dim(E0, E1, 0) != hom_dim(E1, E0, 1):
        raise ArithmeticError("Serre dimensions disagree")
    if E1.n <= E0.n:
        return SerrePairing((), 0)
    d, a, _ = hom_point(E0, E1)
    sections = hom_basis(E0, E1, cutoff)
    functionals = [(lambda s, j=lowest_mode(d, l, a): s.mode(j)) for l in range(d)]
    M = _pairing_matrix(sections, functionals)
    num = np.array([[x.evaluate(probe_q) for x in row] for row in M], dtype=complex)
    rank = int(np.linalg.matrix_rank(num, tol=1e-12)) if num.size else 0
    if rank < d:
        raise ArithmeticError("Serre pairing is degenerate")
    return SerrePairing(M, rank)
