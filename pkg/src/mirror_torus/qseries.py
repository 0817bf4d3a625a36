"""Truncated q-series with rational exponents, and Fourier families of them.

Exponents and Fourier modes are exact :class:`Fraction` values; coefficients
are complex floats.  A series carries a cutoff: every term with exponent at
most the cutoff is known, everything above it is unknown (not zero).

Theta sections.  For degree ``n``, coset ``k`` and point ``x = a*tau + b`` the
basis section is

    theta_{n,k,x}(z) = sum_{j = k mod n} q^{j^2/(2n) + j a} e^{2 pi i j b} e^{2 pi i j z},

so the Fourier mode ``j = n m + k`` carries the single term
``e^{2 pi i (m + k/n) n b} q^{e(m)}`` with ``e(m) = n (m + k/n)^2 / 2 + (m + k/n) n a``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import rat, rat_str

DROP_TOL = 1e-12
DEFAULT_CUTOFF = Fraction(8)
DEFAULT_TOL = 1e-9


_EXACT_ROOTS = {Fraction(0): 1 + 0j, Fraction(1, 2): -1 + 0j,
                Fraction(1, 4): 1j, Fraction(3, 4): -1j}


def root_of_unity(x) -> complex:
    """e^{2 pi i x} for rational x, exact for denominators 1, 2 and 4."""
    return _root(rat(x) % 1)


@lru_cache(maxsize=65536)
def _root(x: Fraction) -> complex:
    if x in _EXACT_ROOTS:
        return _EXACT_ROOTS[x]
    return cmath.exp(2j * math.pi * float(x))


def _clean(terms: dict, cutoff: Fraction, drop_tol: float) -> tuple:
    return tuple(sorted((e, c) for e, c in terms.items() if e <= cutoff and abs(c) >= drop_tol))


@dataclass(frozen=True)
class QSeries:
    terms: tuple  # ((exponent, coeff), ...) sorted, exponents strictly increasing
    cutoff: Fraction

    @classmethod
    def make(cls, terms, cutoff, drop_tol: float = DROP_TOL) -> "QSeries":
        """Build from (exponent, coeff) pairs; repeated exponents are summed."""
        cutoff = rat(cutoff)
        acc: dict = {}
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            e = rat(e)
            acc[e] = acc.get(e, 0) + complex(c)
        return cls(_clean(acc, cutoff, drop_tol), cutoff)

    @classmethod
    def zero(cls, cutoff) -> "QSeries":
        return cls((), rat(cutoff))

    @classmethod
    def one(cls, cutoff) -> "QSeries":
        return cls.make([(0, 1)], cutoff)

    @classmethod
    def monomial(cls, exponent, coeff, cutoff) -> "QSeries":
        return cls.make([(exponent, coeff)], cutoff)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def coeff(self, e) -> complex:
        return self.as_dict().get(rat(e), 0j)

    def low(self):
        """Smallest exponent present, or None for the zero series."""
        return self.terms[0][0] if self.terms else None

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for _, c in self.terms)

    def truncate(self, cutoff) -> "QSeries":
        cutoff = rat(cutoff)
        if cutoff > self.cutoff:
            raise ValueError("cannot raise the cutoff of a truncated series")
        return QSeries(tuple(t for t in self.terms if t[0] <= cutoff), cutoff)

    def shift(self, de) -> "QSeries":
        """Multiply by q^{de}."""
        de = rat(de)
        return QSeries(tuple((e + de, c) for e, c in self.terms), self.cutoff + de)

    def __add__(self, other: "QSeries") -> "QSeries":
        return q_add(self, other)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return q_add(self, q_scale(other, -1))

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return q_mul(self, other)
        return q_scale(self, other)

    __rmul__ = __mul__

    def evaluate(self, q: complex) -> complex:
        return sum(c * q ** float(e) for e, c in self.terms)

    def __str__(self) -> str:
        return format_series(self)

    def to_json(self) -> dict:
        return {"terms": [[rat_str(e), [c.real, c.imag]] for e, c in self.terms],
                "cutoff": rat_str(self.cutoff)}

    @classmethod
    def from_json(cls, data) -> "QSeries":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.make([(rat(e), complex(c[0], c[1])) for e, c in data["terms"]],
                        data["cutoff"])


def _low_or_zero(s: QSeries) -> Fraction:
    lo = s.low()
    return min(lo, Fraction(0)) if lo is not None else Fraction(0)


def product_cutoff(ca, low_a, cb, low_b) -> Fraction:
    """Largest exponent up to which a product of truncated series is known.

    Unknown terms of ``a`` sit above ``ca`` and get multiplied by terms of
    ``b`` down to ``low_b``; only negative lows lower the bound.
    """
    return min(ca + min(low_b, 0), cb + min(low_a, 0))


def q_add(a: QSeries, b: QSeries, drop_tol: float = DROP_TOL) -> QSeries:
    cutoff = min(a.cutoff, b.cutoff)
    acc = a.as_dict()
    for e, c in b.terms:
        acc[e] = acc.get(e, 0) + c
    return QSeries(_clean(acc, cutoff, drop_tol), cutoff)


def q_scale(a: QSeries, c, drop_tol: float = DROP_TOL) -> QSeries:
    c = complex(c)
    return QSeries(tuple((e, c * x) for e, x in a.terms if abs(c * x) >= drop_tol), a.cutoff)


def q_mul(a: QSeries, b: QSeries, drop_tol: float = DROP_TOL) -> QSeries:
    cutoff = product_cutoff(a.cutoff, _low_or_zero(a), b.cutoff, _low_or_zero(b))
    acc: dict = {}
    for e1, c1 in a.terms:
        for e2, c2 in b.terms:
            e = e1 + e2
            if e <= cutoff:
                acc[e] = acc.get(e, 0) + c1 * c2
    return QSeries(_clean(acc, cutoff, drop_tol), cutoff)


def q_max_deviation(a: QSeries, b: QSeries, upto=None) -> tuple:
    """(max |a_e - b_e|, exponent where it occurs) over exponents <= upto."""
    upto = min(a.cutoff, b.cutoff) if upto is None else rat(upto)
    da, db = a.as_dict(), b.as_dict()
    worst, where = 0.0, None
    for e in sorted(set(da) | set(db)):
        if e > upto:
            break
        d = abs(da.get(e, 0) - db.get(e, 0))
        if d > worst:
            worst, where = d, e
    return worst, where


def format_series(s: QSeries, digits: int = 6) -> str:
    if not s.terms:
        return f"0 + O(q^{{{rat_str(s.cutoff)}}})"
    parts = []
    for e, c in s.terms:
        parts.append(f"{_fmt_complex(c, digits)}·q^{{{rat_str(e)}}}")
    return " + ".join(parts) + f" + O(q^{{{rat_str(s.cutoff)}}})"


def _fmt_complex(c: complex, digits: int) -> str:
    re, im = round(c.real, digits) + 0.0, round(c.imag, digits) + 0.0
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}i"
    return f"({re:g}{im:+g}i)"


@dataclass(frozen=True)
class FourierQSeries:
    modes: tuple  # ((mode, QSeries), ...) sorted by mode, no empty series
    cutoff: Fraction

    @classmethod
    def make(cls, modes, cutoff) -> "FourierQSeries":
        cutoff = rat(cutoff)
        out = []
        for r, s in sorted((rat(r), s) for r, s in (modes.items() if isinstance(modes, dict) else modes)):
            if s.cutoff < cutoff:
                raise ValueError("mode series known below the shared cutoff")
            s = s.truncate(cutoff)
            if s.terms:
                out.append((r, s))
        return cls(tuple(out), cutoff)

    def as_dict(self) -> dict:
        return dict(self.modes)

    def mode(self, r) -> QSeries:
        return self.as_dict().get(rat(r), QSeries.zero(self.cutoff))

    def low(self) -> Fraction:
        lows = [s.low() for _, s in self.modes]
        return min(lows) if lows else Fraction(0)

    def scale(self, c) -> "FourierQSeries":
        return FourierQSeries.make([(r, q_scale(s, c)) for r, s in self.modes], self.cutoff)

    def __add__(self, other: "FourierQSeries") -> "FourierQSeries":
        cutoff = min(self.cutoff, other.cutoff)
        acc = {r: s.truncate(cutoff) for r, s in self.modes}
        for r, s in other.modes:
            acc[r] = q_add(acc[r], s) if r in acc else s.truncate(cutoff)
        return FourierQSeries.make(acc, cutoff)

    def to_json(self) -> dict:
        return {"modes": {rat_str(r): [[rat_str(e), [c.real, c.imag]] for e, c in s.terms]
                          for r, s in self.modes},
                "cutoff": rat_str(self.cutoff)}

    @classmethod
    def from_json(cls, data) -> "FourierQSeries":
        if isinstance(data, str):
            data = json.loads(data)
        cutoff = rat(data["cutoff"])
        modes = {rat(r): QSeries.make([(rat(e), complex(c[0], c[1])) for e, c in terms], cutoff)
                 for r, terms in data["modes"].items()}
        return cls.make(modes, cutoff)


def fq_mul(s: FourierQSeries, t: FourierQSeries, drop_tol: float = DROP_TOL) -> FourierQSeries:
    """Fourier convolution: mode r of the result is sum_{r1 + r2 = r} s(r1) t(r2)."""
    cutoff = product_cutoff(s.cutoff, min(s.low(), 0), t.cutoff, min(t.low(), 0))
    acc: dict = {}
    for r1, a in s.modes:
        for r2, b in t.modes:
            terms = acc.setdefault(r1 + r2, {})
            for e1, c1 in a.terms:
                for e2, c2 in b.terms:
                    e = e1 + e2
                    if e <= cutoff:
                        terms[e] = terms.get(e, 0) + c1 * c2
    modes = []
    for r in sorted(acc):
        cleaned = _clean(acc[r], cutoff, drop_tol)
        if cleaned:
            modes.append((r, QSeries(cleaned, cutoff)))
    return FourierQSeries(tuple(modes), cutoff)


# -- theta sections -------------------------------------------------------

def theta_exponent(n: int, j: int, a) -> Fraction:
    """q-exponent of Fourier mode j in a degree-n theta section at x = a tau + b."""
    return Fraction(j * j, 2 * n) + j * rat(a)


def theta_modes(n: int, k: int, a, cutoff) -> list:
    """All modes j = k mod n with theta_exponent(n, j, a) <= cutoff, increasing."""
    a, cutoff = rat(a), rat(cutoff)
    # j^2/(2n) + j a <= C  <=>  (j + n a)^2 <= n^2 a^2 + 2 n C
    disc = float(n * n * a * a + 2 * n * cutoff)
    if disc < 0:
        return []
    centre = -float(n * a)
    span = math.sqrt(disc) + 1
    lo, hi = math.floor(centre - span), math.ceil(centre + span)
    first = lo + ((k - lo) % n)
    return [j for j in range(first, hi + 1, n) if theta_exponent(n, j, a) <= cutoff]


def theta_basis_section(n: int, k: int, a, b, cutoff=DEFAULT_CUTOFF) -> FourierQSeries:
    return _theta_section(n, k, rat(a), rat(b), rat(cutoff))


@lru_cache(maxsize=4096)
def _theta_section(n: int, k: int, a: Fraction, b: Fraction, cutoff: Fraction) -> FourierQSeries:
    if n < 1:
        raise ValueError("theta sections need degree n >= 1")
    if not 0 <= k < n:
        raise ValueError("coset index must satisfy 0 <= k < n")
    a, b, cutoff = rat(a), rat(b), rat(cutoff)
    modes = []
    for j in theta_modes(n, k, a, cutoff):
        modes.append((Fraction(j), QSeries.monomial(theta_exponent(n, j, a),
                                                    root_of_unity(j * b), cutoff)))
    return FourierQSeries(tuple(modes), cutoff)


def theta_value(n: int, k: int, a, b, za, zb, cutoff) -> QSeries:
    """The degree-n basis section at x = a tau + b evaluated at z = za tau + zb.

    Mode j contributes q^{j^2/(2n) + j (a + za)} e^{2 pi i j (b + zb)}, which is
    again a theta-type sum, so the enumeration is exact below the cutoff.
    """
    a2, b2 = rat(a) + rat(za), rat(b) + rat(zb)
    return QSeries.make([(theta_exponent(n, j, a2), root_of_unity(j * b2))
                         for j in theta_modes(n, k, a2, cutoff)], cutoff)


def fq_evaluate(s: FourierQSeries, za, zb, cutoff) -> QSeries:
    """Sum the stored modes at z = za tau + zb: mode r picks up q^{r za} e^{2 pi i r zb}.

    The caller vouches that modes missing from ``s`` cannot reach ``cutoff``.
    """
    za, zb = rat(za), rat(zb)
    acc: dict = {}
    for r, ser in s.modes:
        ph = root_of_unity(r * zb)
        for e, c in ser.terms:
            ee = e + r * za
            acc[ee] = acc.get(ee, 0) + ph * c
    return QSeries(_clean(acc, rat(cutoff), DROP_TOL), rat(cutoff))


def lowest_mode(n: int, k: int, a) -> int:
    """The mode of coset k with the smallest theta exponent (ties: smaller j)."""
    return _lowest_mode(n, k, rat(a))


@lru_cache(maxsize=4096)
def _lowest_mode(n: int, k: int, a: Fraction) -> int:
    centre = -n * a
    cands = [j for j in range(math.floor(centre) - n - 1, math.ceil(centre) + n + 2)
             if (j - k) % n == 0]
    return min(cands, key=lambda j: (theta_exponent(n, j, a), j))


@dataclass(frozen=True)
class ThetaExpansion:
    coeffs: tuple  # one QSeries per coset k
    residual: float
    worst: tuple   # (mode, exponent) of the worst mismatch, or None


def expand_in_theta_basis(s: FourierQSeries, n: int, a, b) -> ThetaExpansion:
    """Write s = sum_k c_k(q) theta_{n,k,(a,b)}.

    Each c_k is read off from the lowest mode of coset k (one exact shift of
    exponents and one division by a phase) and then checked on every other
    mode of the coset; modes outside the integers count fully as mismatch.
    """
    a, b = rat(a), rat(b)
    stored = s.as_dict()
    empty = QSeries.zero(s.cutoff)
    coeffs = []
    for k in range(n):
        j = lowest_mode(n, k, a)
        e, ph = theta_exponent(n, j, a), root_of_unity(j * b)
        coeffs.append(q_scale(stored.get(Fraction(j), empty).shift(-e), 1 / ph))
    residual, worst = 0.0, None
    for r, ser in s.modes:
        if r.denominator != 1:
            m = max(abs(c) for _, c in ser.terms)
            if m > residual:
                residual, worst = m, (r, ser.terms[0][0])
    for k, ck in enumerate(coeffs):
        clow = ck.low() if ck.terms else None
        if clow is None:
            check_modes = [r for r in stored if r.denominator == 1 and (int(r) - k) % n == 0]
        else:
            check_modes = set(Fraction(j) for j in theta_modes(n, k, a, s.cutoff - clow))
            check_modes |= {r for r in stored if r.denominator == 1 and (int(r) - k) % n == 0}
        for r in sorted(check_modes):
            j = int(r)
            e, ph = theta_exponent(n, j, a), root_of_unity(j * b)
            predicted = q_scale(ck.shift(e), ph)
            upto = min(s.cutoff, predicted.cutoff)
            dev, where = q_max_deviation(predicted, stored.get(r, empty), upto)
            if dev > residual:
                residual, worst = dev, (r, where)
    return ThetaExpansion(tuple(coeffs), residual, worst)
