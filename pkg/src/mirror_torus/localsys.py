"""Flat local systems on a loop: M = exp(-2 pi i b) * exp(N), optionally cyclically
permuted across ``cycle`` sheets (the shape a pushforward along a covering takes)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .linalg import RatMatrix, nilpotent_exp, rat, rat_str
from .qseries import root_of_unity


def _check_strict_upper(N: RatMatrix) -> None:
    for i in range(N.rows):
        for j in range(min(i + 1, N.cols)):
            if N.entries[i][j] != 0:
                raise ValueError("N must be strictly upper triangular")


def is_cyclic_nilpotent(N: RatMatrix) -> bool:
    """A single Jordan block: rank N = dim - 1 (dimension 0 excluded)."""
    return N.rows >= 1 and N.rank() == N.rows - 1


@dataclass(frozen=True)
class LocalSystemData:
    rank: int
    b: Fraction = Fraction(0)
    N: RatMatrix | None = field(default=None)
    cycle: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("local systems need rank >= 1")
        if self.cycle < 1:
            raise ValueError("cycle length must be positive")
        object.__setattr__(self, "b", rat(self.b))
        if self.N is None:
            object.__setattr__(self, "N", RatMatrix.zeros(self.rank, self.rank))
        if self.N.shape != (self.rank, self.rank):
            raise ValueError("N has the wrong size")
        _check_strict_upper(self.N)

    @property
    def dim(self) -> int:
        """Dimension of the fibre, counting all sheets."""
        return self.rank * self.cycle

    def is_scalar(self) -> bool:
        return self.N.is_zero() and self.cycle == 1

    def unipotent(self) -> RatMatrix:
        """exp(N), exact."""
        return nilpotent_exp(self.N)

    def base_monodromy(self) -> np.ndarray:
        return root_of_unity(-self.b) * self.unipotent().to_complex()

    def monodromy(self) -> np.ndarray:
        """The full monodromy; with cycle d it is the block shift sending sheet i
        to sheet i+1 and the last sheet back to the first through M."""
        M0 = self.base_monodromy()
        d, r = self.cycle, self.rank
        if d == 1:
            return M0
        out = np.zeros((d * r, d * r), dtype=complex)
        for i in range(d - 1):
            out[(i + 1) * r:(i + 2) * r, i * r:(i + 1) * r] = np.eye(r)
        out[0:r, (d - 1) * r:d * r] = M0
        return out

    def power(self, d: int) -> "LocalSystemData":
        """M^d for a single-sheet system: exp(-2 pi i b d + d N)."""
        if self.cycle != 1:
            raise ValueError("powers are only formed for single-sheet systems")
        return LocalSystemData(self.rank, self.b * d, self.N.scale(d))

    def to_json(self) -> dict:
        out = {"rank": self.rank, "b": rat_str(self.b), "N": self.N.to_json()}
        if self.cycle != 1:
            out["cycle"] = self.cycle
        return out

    @classmethod
    def from_json(cls, data) -> "LocalSystemData":
        rank = int(data.get("rank", 1))
        N = data.get("N")
        N = RatMatrix.from_json(N, rank, rank) if N else None
        return cls(rank, rat(data.get("b", "0/1")), N, int(data.get("cycle", 1)))


def transport(ls: LocalSystemData, dt) -> np.ndarray:
    """Parallel transport over dt periods: exp(dt (-2 pi i b I + N)), single sheet."""
    if ls.cycle != 1:
        raise ValueError("transport is defined for single-sheet systems")
    dt = rat(dt)
    phase = root_of_unity(-ls.b * dt)
    if ls.N.is_zero():
        return phase * np.eye(ls.rank, dtype=complex)
    return phase * nilpotent_exp(ls.N, dt).to_complex()
