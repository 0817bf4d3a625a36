"""Bounded cochain complexes of finite-dimensional Q-vector spaces.

A complex lives on an explicit window ``[lo, hi]``; outside it every space is
zero.  The differential ``d^n : X^n -> X^{n+1}`` is a :class:`RatMatrix` of
shape ``(dim X^{n+1}, dim X^n)``.  All operations are exact.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .linalg import RatMatrix


@dataclass(frozen=True)
class BoundedComplex:
    lo: int
    hi: int
    dims: tuple
    diffs: tuple  # d^lo, ..., d^{hi-1}

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError("empty window: hi < lo")
        if len(self.dims) != self.hi - self.lo + 1:
            raise ValueError("dims do not cover the window")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")
        if len(self.diffs) != self.hi - self.lo:
            raise ValueError("need one differential per consecutive pair of degrees")
        for n, d in zip(range(self.lo, self.hi), self.diffs):
            if d.shape != (self.dim(n + 1), self.dim(n)):
                raise ValueError(f"d^{n} has shape {d.shape}, expected "
                                 f"{(self.dim(n + 1), self.dim(n))}")
        for n in range(self.lo, self.hi - 1):
            if not (self.d(n + 1) @ self.d(n)).is_zero():
                raise ValueError(f"d^{n + 1} d^{n} != 0")

    @classmethod
    def build(cls, lo: int, dims, diffs=None) -> "BoundedComplex":
        """Convenience constructor; ``diffs`` may hold nested lists or RatMatrix values
        and defaults to all-zero differentials."""
        dims = tuple(int(d) for d in dims)
        if not dims:
            dims = (0,)
        hi = lo + len(dims) - 1
        if diffs is None:
            diffs = [None] * (len(dims) - 1)
        mats = []
        for i, d in enumerate(diffs):
            r, c = dims[i + 1], dims[i]
            if d is None:
                mats.append(RatMatrix.zeros(r, c))
            elif isinstance(d, RatMatrix):
                mats.append(d)
            else:
                mats.append(RatMatrix.from_json(d, r, c))
        return cls(lo, hi, dims, tuple(mats))

    @classmethod
    def zero(cls) -> "BoundedComplex":
        return cls(0, 0, (0,), ())

    def dim(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.dims[n - self.lo]
        return 0

    def d(self, n: int) -> RatMatrix:
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return RatMatrix.zeros(self.dim(n + 1), self.dim(n))

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def total_dim(self) -> int:
        return sum(self.dims)

    def restrict(self, lo: int, hi: int) -> "BoundedComplex":
        """Re-express on another window; it must contain the support."""
        for n in self.degrees():
            if self.dim(n) and not lo <= n <= hi:
                raise ValueError("new window cuts off a nonzero space")
        dims = tuple(self.dim(n) for n in range(lo, hi + 1))
        return BoundedComplex(lo, hi, dims, tuple(self.d(n) for n in range(lo, hi)))

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "dims": list(self.dims),
                "diffs": [d.to_json() for d in self.diffs]}

    @classmethod
    def from_json(cls, data) -> "BoundedComplex":
        if isinstance(data, str):
            data = json.loads(data)
        lo, hi, dims = int(data["lo"]), int(data["hi"]), [int(x) for x in data["dims"]]
        if len(dims) != hi - lo + 1:
            raise ValueError("dims length disagrees with lo/hi")
        diffs = data.get("diffs", [])
        if len(diffs) != hi - lo:
            raise ValueError("diffs length disagrees with lo/hi")
        mats = tuple(RatMatrix.from_json(d, dims[i + 1], dims[i]) for i, d in enumerate(diffs))
        return cls(lo, hi, tuple(dims), mats)


@dataclass(frozen=True)
class ChainMap:
    source: BoundedComplex
    target: BoundedComplex
    lo: int
    maps: tuple  # f^lo, ..., f^hi on the union window

    def __post_init__(self):
        for i, f in enumerate(self.maps):
            n = self.lo + i
            if f.shape != (self.target.dim(n), self.source.dim(n)):
                raise ValueError(f"f^{n} has shape {f.shape}, expected "
                                 f"{(self.target.dim(n), self.source.dim(n))}")
        for n in range(self.lo - 1, self.hi + 1):
            lhs = self.f(n + 1) @ self.source.d(n)
            rhs = self.target.d(n) @ self.f(n)
            if lhs != rhs:
                raise ValueError(f"chain map condition fails in degree {n}")

    @property
    def hi(self) -> int:
        return self.lo + len(self.maps) - 1

    @classmethod
    def build(cls, source: BoundedComplex, target: BoundedComplex, maps: dict) -> "ChainMap":
        """Build from a {degree: matrix-like} dict; missing degrees are zero."""
        lo, hi = _union_window(source, target)
        mats = []
        for n in range(lo, hi + 1):
            r, c = target.dim(n), source.dim(n)
            m = maps.get(n)
            if m is None:
                mats.append(RatMatrix.zeros(r, c))
            elif isinstance(m, RatMatrix):
                mats.append(m)
            else:
                mats.append(RatMatrix.from_json(m, r, c))
        return cls(source, target, lo, tuple(mats))

    def f(self, n: int) -> RatMatrix:
        if self.lo <= n <= self.hi:
            return self.maps[n - self.lo]
        return RatMatrix.zeros(self.target.dim(n), self.source.dim(n))

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "lo": self.lo, "maps": [m.to_json() for m in self.maps]}

    @classmethod
    def from_json(cls, data) -> "ChainMap":
        if isinstance(data, str):
            data = json.loads(data)
        X = BoundedComplex.from_json(data["source"])
        Y = BoundedComplex.from_json(data["target"])
        lo = int(data["lo"])
        mats = tuple(RatMatrix.from_json(m, Y.dim(lo + i), X.dim(lo + i))
                     for i, m in enumerate(data["maps"]))
        return cls(X, Y, lo, mats)


def _union_window(X: BoundedComplex, Y: BoundedComplex) -> tuple[int, int]:
    return min(X.lo, Y.lo), max(X.hi, Y.hi)


def identity_map(X: BoundedComplex) -> ChainMap:
    return ChainMap(X, X, X.lo, tuple(RatMatrix.identity(X.dim(n)) for n in X.degrees()))


def zero_map(X: BoundedComplex, Y: BoundedComplex) -> ChainMap:
    return ChainMap.build(X, Y, {})


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g o f."""
    if f.target != g.source:
        raise ValueError("maps are not composable")
    return ChainMap.build(f.source, g.target,
                          {n: g.f(n) @ f.f(n) for n in range(*_span(f.source, g.target))})


def _span(X, Y):
    lo, hi = _union_window(X, Y)
    return lo, hi + 1


def direct_sum(X: BoundedComplex, Y: BoundedComplex) -> BoundedComplex:
    lo, hi = _union_window(X, Y)
    dims = tuple(X.dim(n) + Y.dim(n) for n in range(lo, hi + 1))
    diffs = tuple(RatMatrix.block([
        [X.d(n), RatMatrix.zeros(X.dim(n + 1), Y.dim(n))],
        [RatMatrix.zeros(Y.dim(n + 1), X.dim(n)), Y.d(n)],
    ]) for n in range(lo, hi))
    return BoundedComplex(lo, hi, dims, diffs)


# -- translation, cone, cylinder ------------------------------------------

def shift(X: BoundedComplex, n: int) -> BoundedComplex:
    """X[n]: X[n]^k = X^{n+k} with differential (-1)^n d^{n+k}."""
    sign = -1 if n % 2 else 1
    return BoundedComplex(X.lo - n, X.hi - n, X.dims,
                          tuple(d.scale(sign) for d in X.diffs))


def shift_map(f: ChainMap, n: int) -> ChainMap:
    return ChainMap(shift(f.source, n), shift(f.target, n), f.lo - n, f.maps)


def cone(f: ChainMap) -> BoundedComplex:
    """C(f)^n = X^{n+1} + Y^n with d(x, y) = (-d_X x, f x + d_Y y)."""
    X, Y = f.source, f.target
    lo, hi = min(X.lo - 1, Y.lo), max(X.hi - 1, Y.hi)
    dims = tuple(X.dim(n + 1) + Y.dim(n) for n in range(lo, hi + 1))
    diffs = []
    for n in range(lo, hi):
        diffs.append(RatMatrix.block([
            [-X.d(n + 1), RatMatrix.zeros(X.dim(n + 2), Y.dim(n))],
            [f.f(n + 1), Y.d(n)],
        ]))
    return BoundedComplex(lo, hi, dims, tuple(diffs))


def cone_inclusion(f: ChainMap) -> ChainMap:
    """i_2 : Y -> C(f), y |-> (0, y)."""
    X, Y = f.source, f.target
    C = cone(f)
    maps = {n: RatMatrix.block([[RatMatrix.zeros(X.dim(n + 1), Y.dim(n))],
                                [RatMatrix.identity(Y.dim(n))]])
            for n in range(*_span(Y, C))}
    return ChainMap.build(Y, C, maps)


def cone_projection(f: ChainMap) -> ChainMap:
    """p_1 : C(f) -> X[1], (x, y) |-> x."""
    X, Y = f.source, f.target
    C = cone(f)
    X1 = shift(X, 1)
    maps = {n: RatMatrix.block([[RatMatrix.identity(X.dim(n + 1)),
                                 RatMatrix.zeros(X.dim(n + 1), Y.dim(n))]])
            for n in range(*_span(C, X1))}
    return ChainMap.build(C, X1, maps)


def cylinder(f: ChainMap) -> BoundedComplex:
    """Z(f)^n = X^n + X^{n+1} + Y^n with
    d(x, x', y) = (d_X x - x', -d_X x', f x' + d_Y y)."""
    X, Y = f.source, f.target
    lo, hi = min(X.lo - 1, Y.lo), max(X.hi, Y.hi)
    dims = tuple(X.dim(n) + X.dim(n + 1) + Y.dim(n) for n in range(lo, hi + 1))
    Z = RatMatrix.zeros
    diffs = []
    for n in range(lo, hi):
        a, b, c = X.dim(n), X.dim(n + 1), Y.dim(n)
        a1, b1, c1 = X.dim(n + 1), X.dim(n + 2), Y.dim(n + 1)
        diffs.append(RatMatrix.block([
            [X.d(n), -RatMatrix.identity(b), Z(a1, c)],
            [Z(b1, a), -X.d(n + 1), Z(b1, c)],
            [Z(c1, a), f.f(n + 1), Y.d(n)],
        ]))
    return BoundedComplex(lo, hi, dims, tuple(diffs))


def cylinder_projection(f: ChainMap) -> ChainMap:
    """p_3 : Z(f) -> Y, (x, x', y) |-> f x + y."""
    X, Y = f.source, f.target
    Zf = cylinder(f)
    maps = {n: RatMatrix.block([[f.f(n), RatMatrix.zeros(Y.dim(n), X.dim(n + 1)),
                                 RatMatrix.identity(Y.dim(n))]])
            for n in range(*_span(Zf, Y))}
    return ChainMap.build(Zf, Y, maps)


def cylinder_inclusion(f: ChainMap) -> ChainMap:
    """i_3 : Y -> Z(f), y |-> (0, 0, y)."""
    X, Y = f.source, f.target
    Zf = cylinder(f)
    maps = {n: RatMatrix.block([[RatMatrix.zeros(X.dim(n) + X.dim(n + 1), Y.dim(n))],
                                [RatMatrix.identity(Y.dim(n))]])
            for n in range(*_span(Y, Zf))}
    return ChainMap.build(Y, Zf, maps)


# -- cohomology -----------------------------------------------------------

class Cohomology(NamedTuple):
    dim: int
    basis: RatMatrix       # columns: representatives of a complement of im d^{n-1} in ker d^n
    boundaries: RatMatrix  # columns: a basis of im d^{n-1}


def cohomology(X: BoundedComplex, n: int) -> Cohomology:
    """dim H^n = dim ker d^n - rank d^{n-1}, with an explicit basis.

    The complement is picked by column-pivot order on [boundaries | kernel],
    which makes the choice deterministic.
    """
    m = X.dim(n)
    kernel = X.d(n).nullspace()
    boundaries = X.d(n - 1).column_basis()
    piv = boundaries.hstack(kernel).pivot_columns()
    nb = boundaries.cols
    chosen = [p - nb for p in piv if p >= nb]
    basis = kernel.select_columns(chosen) if m else RatMatrix.zeros(0, 0)
    return Cohomology(len(chosen), basis, boundaries)


def betti(X: BoundedComplex) -> dict:
    return {n: cohomology(X, n).dim for n in range(X.lo, X.hi + 1)}


def is_acyclic(X: BoundedComplex) -> bool:
    return all(cohomology(X, n).dim == 0 for n in X.degrees())


def _coords_mod_boundaries(H: Cohomology, vectors: RatMatrix) -> RatMatrix:
    """Coordinates, on the cohomology basis, of cocycles given as columns."""
    if H.dim == 0 or vectors.cols == 0:
        return RatMatrix.zeros(H.dim, vectors.cols)
    A = H.boundaries.hstack(H.basis)
    sol = A.solve(vectors)
    if sol is None:
        raise ValueError("vectors are not cocycles")
    return sol.select_rows(list(range(H.boundaries.cols, A.cols)))


def induced_map(f: ChainMap, n: int) -> RatMatrix:
    """Matrix of H^n(f) on the cohomology bases chosen by :func:`cohomology`."""
    HX = cohomology(f.source, n)
    HY = cohomology(f.target, n)
    if HX.dim == 0:
        return RatMatrix.zeros(HY.dim, 0)
    return _coords_mod_boundaries(HY, f.f(n) @ HX.basis)


def is_quasi_iso(f: ChainMap) -> bool:
    lo, hi = _union_window(f.source, f.target)
    for n in range(lo, hi + 1):
        M = induced_map(f, n)
        if M.rows != M.cols or M.rank() != M.rows:
            return False
    return True


def is_null_homotopic(f: ChainMap):
    """Solve f^n = k^{n+1} d_X^n + d_Y^{n-1} k^n for k^n : X^n -> Y^{n-1}.

    Returns ``(True, {n: k^n})`` or ``(False, None)``.  The witness is the
    particular solution of one exact linear solve with free unknowns set to 0.
    """
    X, Y = f.source, f.target
    lo, hi = _union_window(X, Y)
    # unknown blocks k^n for n in lo..hi+1, each of shape (Y^{n-1}, X^n), row-major
    offsets, total = {}, 0
    for n in range(lo, hi + 2):
        offsets[n] = total
        total += Y.dim(n - 1) * X.dim(n)
    rows, rhs = [], []
    for n in range(lo, hi + 1):
        dX, dY = X.d(n), Y.d(n - 1)
        fn = f.f(n)
        for i in range(Y.dim(n)):
            for j in range(X.dim(n)):
                row = [Fraction(0)] * total
                # (k^{n+1} d_X^n)_{ij} = sum_l k^{n+1}_{il} dX_{lj}
                for l in range(X.dim(n + 1)):
                    c = dX.entries[l][j]
                    if c:
                        row[offsets[n + 1] + i * X.dim(n + 1) + l] += c
                # (d_Y^{n-1} k^n)_{ij} = sum_l dY_{il} k^n_{lj}
                for l in range(Y.dim(n - 1)):
                    c = dY.entries[i][l]
                    if c:
                        row[offsets[n] + l * X.dim(n) + j] += c
                rows.append(row)
                rhs.append([fn.entries[i][j]])
    if not rows:
        return True, {}
    A = RatMatrix.from_rows(rows, cols=total)
    sol = A.solve(RatMatrix.from_rows(rhs, cols=1)) if total else (
        RatMatrix.zeros(0, 1) if all(r[0] == 0 for r in rhs) else None)
    if sol is None:
        return False, None
    k = {}
    for n in range(lo, hi + 2):
        r, c = Y.dim(n - 1), X.dim(n)
        flat = [sol.entries[offsets[n] + t][0] for t in range(r * c)]
        k[n] = RatMatrix(r, c, tuple(tuple(flat[i * c:(i + 1) * c]) for i in range(r)))
    return True, k


def check_homotopy(f: ChainMap, k: dict) -> bool:
    X, Y = f.source, f.target
    lo, hi = _union_window(X, Y)

    def K(n):
        return k.get(n, RatMatrix.zeros(Y.dim(n - 1), X.dim(n)))

    return all(K(n + 1) @ X.d(n) + Y.d(n - 1) @ K(n) == f.f(n) for n in range(lo, hi + 1))


# -- long exact sequence --------------------------------------------------

def les_maps(f: ChainMap) -> list:
    """The cohomology long exact sequence of X -> Y -> C(f) -> X[1] as a list of
    ``(label, matrix)`` entries over the full window, in sequence order."""
    X, Y = f.source, f.target
    C = cone(f)
    i2 = cone_inclusion(f)
    p1 = cone_projection(f)
    lo = min(X.lo, Y.lo, C.lo) - 1
    hi = max(X.hi, Y.hi, C.hi) + 1
    seq = []
    for n in range(lo, hi + 1):
        seq.append((f"H^{n}(f)", induced_map(f, n)))
        seq.append((f"H^{n}(i)", induced_map(i2, n)))
        seq.append((f"delta^{n}", _connecting(p1, X, n)))
    return seq


def _connecting(p1: ChainMap, X: BoundedComplex, n: int) -> RatMatrix:
    # H^n(C) -> H^n(X[1]) = H^{n+1}(X); the bases of X[1] and X agree up to the
    # sign of the differential, which leaves kernels and images unchanged.
    HC = cohomology(p1.source, n)
    HX = cohomology(X, n + 1)
    if HC.dim == 0:
        return RatMatrix.zeros(HX.dim, 0)
    return _coords_mod_boundaries(HX, p1.f(n) @ HC.basis)


def is_exact(seq: list) -> bool:
    """im = ker at every interior slot of a sequence of composable matrices."""
    mats = [m for _, m in seq]
    for a, b in zip(mats, mats[1:]):
        if a.rows != b.cols:
            return False
        if not (b @ a).is_zero():
            return False
        if a.rank() + b.rank() != a.rows:
            return False
    return True


def les_check(f: ChainMap) -> bool:
    return is_exact(les_maps(f))


# -- splitting ------------------------------------------------------------

def split_complex(X: BoundedComplex):
    """Quasi-isomorphism X -> (+)_n H^n(X)[-n] (target has zero differential).

    Returns ``(summands, witness)`` where ``summands`` lists (degree, dim) for
    every nonzero cohomology.
    """
    dims, maps = [], {}
    for n in X.degrees():
        H = cohomology(X, n)
        dims.append(H.dim)
        m = X.dim(n)
        if m == 0:
            maps[n] = RatMatrix.zeros(H.dim, 0)
            continue
        frame = H.boundaries.hstack(H.basis)
        # extend [B | H] to a basis of X^n with standard vectors, pivot order
        ext = frame.hstack(RatMatrix.identity(m))
        full = ext.select_columns(ext.pivot_columns())
        inv = full.inverse()
        nb = H.boundaries.cols
        maps[n] = inv.select_rows(list(range(nb, nb + H.dim)))
    target = BoundedComplex.build(X.lo, dims)
    witness = ChainMap.build(X, target, maps)
    summands = [(n, d) for n, d in zip(X.degrees(), dims) if d]
    return summands, witness


# -- random instances -----------------------------------------------------

def random_complex(rng: random.Random, max_dim: int = 5, max_len: int = 4,
                   lo: int | None = None) -> BoundedComplex:
    """Random complex with dims <= max_dim and entries drawn from -2..2.

    Each new differential is R @ P where the rows of P span the left kernel of
    the previous one, so d^2 = 0 holds by construction.
    """
    length = rng.randint(1, max_len)
    if lo is None:
        lo = rng.randint(-2, 1)
    dims = [rng.randint(0, max_dim) for _ in range(length)]
    diffs = []
    prev = None
    for i in range(length - 1):
        r, c = dims[i + 1], dims[i]
        R = RatMatrix.from_rows([[rng.randint(-2, 2) for _ in range(c)] for _ in range(r)], cols=c) \
            if r else RatMatrix.zeros(0, c)
        if prev is not None and c:
            P = prev.T.nullspace().T  # rows span the left kernel of prev
            if P.rows == 0:
                R = RatMatrix.zeros(r, c)
            else:
                coef = RatMatrix.from_rows(
                    [[rng.randint(-2, 2) for _ in range(P.rows)] for _ in range(r)], cols=P.rows) \
                    if r else RatMatrix.zeros(0, P.rows)
                R = coef @ P
        diffs.append(R)
        prev = R
    return BoundedComplex(lo, lo + length - 1, tuple(dims), tuple(diffs))


def chain_map_space(X: BoundedComplex, Y: BoundedComplex) -> list:
    """Basis of all chain maps X -> Y, each as a {degree: RatMatrix} dict."""
    lo, hi = _union_window(X, Y)
    offsets, total = {}, 0
    for n in range(lo, hi + 1):
        offsets[n] = total
        total += Y.dim(n) * X.dim(n)
    rows = []
    for n in range(lo - 1, hi + 1):
        dX, dY = X.d(n), Y.d(n)
        for i in range(Y.dim(n + 1)):
            for j in range(X.dim(n)):
                row = [Fraction(0)] * total
                # (f^{n+1} dX)_{ij} - (dY f^n)_{ij}
                for l in range(X.dim(n + 1)):
                    c = dX.entries[l][j]
                    if c:
                        row[offsets[n + 1] + i * X.dim(n + 1) + l] += c
                for l in range(Y.dim(n)):
                    c = dY.entries[i][l]
                    if c:
                        row[offsets[n] + l * X.dim(n) + j] -= c
                rows.append(row)
    if total == 0:
        return []
    A = RatMatrix.from_rows(rows, cols=total) if rows else RatMatrix.zeros(0, total)
    ker = A.nullspace()
    out = []
    for v in ker.columns():
        maps = {}
        for n in range(lo, hi + 1):
            r, c = Y.dim(n), X.dim(n)
            flat = v[offsets[n]:offsets[n] + r * c]
            maps[n] = RatMatrix(r, c, tuple(tuple(flat[i * c:(i + 1) * c]) for i in range(r)))
        out.append(maps)
    return out


def random_chain_map(rng: random.Random, X: BoundedComplex, Y: BoundedComplex) -> ChainMap:
    """Random integer combination of a basis of chain maps X -> Y."""
    basis = chain_map_space(X, Y)
    maps = {}
    for b in basis:
        c = rng.randint(-2, 2)
        if not c:
            continue
        for n, m in b.items():
            maps[n] = maps[n] + m.scale(c) if n in maps else m.scale(c)
    return ChainMap.build(X, Y, maps)


def random_instance(rng: random.Random, max_dim: int = 5, max_len: int = 4) -> ChainMap:
    """A random chain map drawn from a mix of strategies.

    Plain random maps between random complexes are rarely quasi-isomorphisms,
    so a share of instances is perturbed from an identity by a null-homotopic
    map (always a quasi-isomorphism) to exercise both sides of every property.
    """
    kind = rng.random()
    X = random_complex(rng, max_dim, max_len)
    if kind < 0.55:
        Y = random_complex(rng, max_dim, max_len, lo=X.lo + rng.randint(-1, 1))
        return random_chain_map(rng, X, Y)
    if kind < 0.85:
        # id + (d k + k d) with random k
        k = {}
        for n in range(X.lo, X.hi + 2):
            r, c = X.dim(n - 1), X.dim(n)
            k[n] = RatMatrix.from_rows([[rng.randint(-1, 1) for _ in range(c)] for _ in range(r)],
                                       cols=c) if r else RatMatrix.zeros(0, c)
        maps = {n: RatMatrix.identity(X.dim(n)) + k[n + 1] @ X.d(n) + X.d(n - 1) @ k[n]
                for n in X.degrees()}
        return ChainMap.build(X, X, maps)
    # inclusion of X into X (+) (Q -1-> Q), a quasi-isomorphism with a larger target
    at = rng.randint(X.lo - 1, X.hi)
    E = BoundedComplex.build(at, [1, 1], [[[1]]])
    Y = direct_sum(X, E)
    maps = {n: RatMatrix.identity(X.dim(n)).vstack(RatMatrix.zeros(E.dim(n), X.dim(n)))
            for n in X.degrees()}
    return ChainMap.build(X, Y, maps)


# -- property suite -------------------------------------------------------

SUITE_PROPERTIES = ("cone_criterion", "les_exact", "split_witness", "cylinder_projection")


def property_suite(seed: int = 42, count: int = 200, max_dim: int = 5) -> dict:
    """Run the structural checks on ``count`` seeded random chain maps.

    Returns ``{"instances": count, "quasi_isos": k, "properties": {name: passed}}``
    plus the indices of failing instances under ``"failures"``.
    """
    rng = random.Random(seed)
    passed = dict.fromkeys(SUITE_PROPERTIES, 0)
    failures: dict = {name: [] for name in SUITE_PROPERTIES}
    qis = 0
    for i in range(count):
        f = random_instance(rng, max_dim)
        qi = is_quasi_iso(f)
        qis += qi
        _, w = split_complex(f.source)
        results = {
            "cone_criterion": qi == is_acyclic(cone(f)),
            "les_exact": les_check(f),
            "split_witness": is_quasi_iso(w) and all(w.target.d(n).is_zero() for n in w.target.degrees()),
            "cylinder_projection": is_quasi_iso(cylinder_projection(f)),
        }
        for name, ok in results.items():
            if ok:
                passed[name] += 1
            else:
                failures[name].append(i)
    return {"instances": count, "quasi_isos": qis, "properties": passed,
            "failures": {k: v for k, v in failures.items() if v}}
