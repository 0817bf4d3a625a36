"""Čech cohomology of finite cover models.

A model lists, for each strictly increasing index tuple, the dimension of the
section space on that intersection, and for each tuple with one index removed
the restriction matrix from the smaller tuple to the larger one.  Tuples not
mentioned are empty intersections (dimension 0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .homcore import BoundedComplex, cohomology
from .linalg import RatMatrix


def _face_sign(k: int) -> int:
    """Sign of the k-th face in the alternating sum."""
    return -1 if k % 2 else 1


def _key(t) -> str:
    return ",".join(str(i) for i in t)


def _parse_key(s: str) -> tuple:
    s = s.strip()
    return tuple(int(x) for x in s.split(",")) if s else ()


@dataclass(frozen=True)
class CoverModel:
    index_count: int
    sections: dict      # tuple -> dim
    restrictions: dict  # (tuple, omitted position) -> RatMatrix, dim(tuple) x dim(tuple minus that index)

    def __post_init__(self):
        if self.index_count < 1:
            raise ValueError("a cover needs at least one open set")
        for t, d in self.sections.items():
            if list(t) != sorted(set(t)) or not t or t[0] < 0 or t[-1] >= self.index_count:
                raise ValueError(f"bad index tuple {t}")
            if d < 0:
                raise ValueError(f"negative section dimension on {t}")
        for (t, k), m in self.restrictions.items():
            if len(t) < 2 or not 0 <= k < len(t):
                raise ValueError(f"bad restriction key {(t, k)}")
            face = t[:k] + t[k + 1:]
            if m.shape != (self.dim(t), self.dim(face)):
                raise ValueError(f"restriction {face}->{t} has shape {m.shape}, "
                                 f"expected {(self.dim(t), self.dim(face))}")

    def dim(self, t) -> int:
        return self.sections.get(tuple(t), 0)

    def restriction(self, t, k) -> RatMatrix:
        t = tuple(t)
        face = t[:k] + t[k + 1:]
        m = self.restrictions.get((t, k))
        if m is not None:
            return m
        if self.dim(t) and self.dim(face):
            raise ValueError(f"missing restriction {face} -> {t}")
        return RatMatrix.zeros(self.dim(t), self.dim(face))

    def tuples(self, n: int) -> list:
        """Nonempty (n+1)-fold intersections in lexicographic order."""
        return [t for t in combinations(range(self.index_count), n + 1) if self.dim(t)]

    def max_degree(self) -> int:
        return max((len(t) - 1 for t, d in self.sections.items() if d), default=0)

    def check_compatibility(self) -> list:
        """Pairs of restriction paths that disagree; empty when consistent.

        Refining a tuple by dropping positions j < k in either order must give
        the same matrix.
        """
        bad = []
        for t, d in self.sections.items():
            if not d or len(t) < 3:
                continue
            for j, k in combinations(range(len(t)), 2):
                # drop k first then j, versus drop j first then k (shifted index)
                mid_k = t[:k] + t[k + 1:]
                mid_j = t[:j] + t[j + 1:]
                p1 = self.restriction(t, k) @ self.restriction(mid_k, j)
                p2 = self.restriction(t, j) @ self.restriction(mid_j, k - 1)
                if p1 != p2:
                    bad.append((t, j, k))
        return bad

    def to_json(self) -> dict:
        return {
            "index_count": self.index_count,
            "sections": {_key(t): d for t, d in sorted(self.sections.items())},
            "restrictions": [
                {"tuple": list(t), "omit": k, "matrix": m.to_json()}
                for (t, k), m in sorted(self.restrictions.items())
            ],
        }

    @classmethod
    def from_json(cls, data) -> "CoverModel":
        if isinstance(data, str):
            data = json.loads(data)
        sections = {_parse_key(k): int(v) for k, v in data["sections"].items()}
        restr = {}
        for r in data.get("restrictions", []):
            t, k = tuple(int(i) for i in r["tuple"]), int(r["omit"])
            face = t[:k] + t[k + 1:]
            restr[(t, k)] = RatMatrix.from_json(r["matrix"], sections.get(t, 0),
                                                sections.get(face, 0))
        return cls(int(data["index_count"]), sections, restr)


def cech_complex(m: CoverModel) -> BoundedComplex:
    bad = m.check_compatibility()
    if bad:
        raise ValueError(f"inconsistent restriction data at {bad[0]}")
    top = m.max_degree()
    dims, diffs = [], []
    for n in range(top + 1):
        dims.append(sum(m.dim(t) for t in m.tuples(n)))
    for n in range(top):
        src, tgt = m.tuples(n), m.tuples(n + 1)
        blocks = []
        for T in tgt:
            row = []
            for S in src:
                blk = RatMatrix.zeros(m.dim(T), m.dim(S))
                for k in range(len(T)):
                    if T[:k] + T[k + 1:] == S:
                        blk = blk + m.restriction(T, k).scale(_face_sign(k))
                row.append(blk)
            blocks.append(row)
        if tgt and src:
            diffs.append(RatMatrix.block(blocks))
        else:
            diffs.append(RatMatrix.zeros(dims[n + 1], dims[n]))
    return BoundedComplex(0, top, tuple(dims), tuple(diffs))


def cech_cohomology(m: CoverModel, n: int) -> int:
    return cohomology(cech_complex(m), n).dim


def cech_dims(m: CoverModel) -> list:
    X = cech_complex(m)
    return [cohomology(X, n).dim for n in X.degrees()]


def glued_sections(m: CoverModel) -> int:
    """Dimension of {(s_i) : s_i|_{ij} = s_j|_{ij}}, computed directly."""
    ones = m.tuples(0)
    total = sum(m.dim(t) for t in ones)
    rows = []
    offs, o = {}, 0
    for t in ones:
        offs[t] = o
        o += m.dim(t)
    for (i, j) in m.tuples(1):
        ri = m.restriction((i, j), 1)  # drop j: from (i,)
        rj = m.restriction((i, j), 0)  # drop i: from (j,)
        for r in range(m.dim((i, j))):
            row = [0] * total
            for c in range(m.dim((i,))):
                row[offs[(i,)] + c] += ri.entries[r][c]
            for c in range(m.dim((j,))):
                row[offs[(j,)] + c] -= rj.entries[r][c]
            rows.append(row)
    if not rows:
        return total
    return total - RatMatrix.from_rows(rows, cols=total).rank()


def cochain_value(c: dict, idx) -> tuple:
    """Value of an alternating cochain (stored on increasing tuples) at any tuple.

    Repeated indices give zero; a permutation multiplies by its sign.
    """
    idx = tuple(idx)
    if len(set(idx)) < len(idx):
        base = next(iter(c.values()))
        return tuple(0 * x for x in base)
    order = sorted(range(len(idx)), key=lambda i: idx[i])
    sign = _perm_sign(order)
    v = c[tuple(sorted(idx))]
    return tuple(sign * x for x in v)


def _perm_sign(p) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


# -- ready-made models ----------------------------------------------------

def single_set_model(dim: int) -> CoverModel:
    return CoverModel(1, {(0,): dim}, {})


def circle_two_arcs() -> CoverModel:
    """Constant sheaf Q on a circle covered by two arcs whose overlap has two components."""
    one = RatMatrix.from_rows([[1], [1]])
    return CoverModel(2, {(0,): 1, (1,): 1, (0, 1): 2}, {((0, 1), 0): one, ((0, 1), 1): one})


def circle_three_arcs() -> CoverModel:
    """Constant sheaf Q on a circle covered by three arcs, pairwise overlaps connected."""
    one = RatMatrix.from_rows([[1]])
    sections = {(0,): 1, (1,): 1, (2,): 1, (0, 1): 1, (0, 2): 1, (1, 2): 1}
    restr = {(t, k): one for t in [(0, 1), (0, 2), (1, 2)] for k in (0, 1)}
    return CoverModel(3, sections, restr)


def constant_nerve_model(simplices, count: int) -> CoverModel:
    """Constant sheaf Q on a cover whose nonempty intersections are ``simplices``
    (closed under faces), every intersection connected."""
    cells = set()
    for s in simplices:
        s = tuple(sorted(s))
        for r in range(1, len(s) + 1):
            cells.update(combinations(s, r))
    one = RatMatrix.from_rows([[1]])
    sections = {t: 1 for t in cells}
    restr = {(t, k): one for t in cells if len(t) > 1 for k in range(len(t))}
    return CoverModel(count, sections, restr)
