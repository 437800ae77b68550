"""Hilbert series in reduced rational form, Hilbert function and
polynomial, Krull dimension, and postulation numbers.

The series numerator is computed from the leading-term module of a
Groebner basis of the relations by the classic pivot recursion on
monomial ideals, componentwise over the ambient twists.  The brute-force
graded dimension oracle at the bottom shares none of that pipeline: it
enumerates monomials and ranks a dense matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _backend as bk
from .errors import WindowExceeded
from .groebner import relations_gb
from .ring import NEG_INF, Presentation, monomials_of_degree

ORACLE_WINDOW = 20


def _minimalize(gens: tuple[tuple[int, ...], ...]) -> list[tuple[int, ...]]:
    ordered = sorted(set(gens), key=lambda g: (sum(g), g))
    kept: list[tuple[int, ...]] = []
    for g in ordered:
        if not any(all(x <= y for x, y in zip(k, g)) for k in kept):
            kept.append(g)
    return kept


def _dict_mul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for da, ca in a.items():
        for db, cb in b.items():
            out[da + db] = out.get(da + db, 0) + ca * cb
    return {d: c for d, c in out.items() if c}


def _mono_numerator(gens: tuple[tuple[int, ...], ...], n: int) -> dict[int, int]:
    """Numerator of the series of R/(monomial ideal) over (1-Z)^n."""
    kept = _minimalize(gens)
    if not kept:
        return {0: 1}
    if any(sum(g) == 0 for g in kept):
        return {}
    nonpure = [g for g in kept if sum(1 for e in g if e) > 1]
    if not nonpure:
        out = {0: 1}
        for g in kept:
            out = _dict_mul(out, {0: 1, sum(g): -1})
        return out
    counts = [sum(1 for g in kept if g[v] > 0) for v in range(n)]
    candidates = [v for v in range(n) if any(g[v] > 0 for g in nonpure)]
    v = max(candidates, key=lambda i: (counts[i], -i))
    pivot = tuple(1 if i == v else 0 for i in range(n))
    plus = tuple(g for g in kept if g[v] == 0) + (pivot,)
    colon = tuple(
        tuple(e - 1 if i == v and e > 0 else e for i, e in enumerate(g)) for g in kept
    )
    out = _mono_numerator(plus, n)
    for d, c in _mono_numerator(colon, n).items():
        out[d + 1] = out.get(d + 1, 0) + c
    return {d: c for d, c in out.items() if c}


def _divide_one_minus_z(numer: dict[int, int]) -> dict[int, int]:
    """Exact quotient by (1 - Z); requires sum of coefficients zero."""
    lo = min(numer)
    hi = max(numer)
    acc = 0
    out: dict[int, int] = {}
    for d in range(lo, hi):
        acc += numer.get(d, 0)
        if acc:
            out[d] = acc
    return out


@dataclass(frozen=True)
class HilbertSeries:
    """Reduced rational form: numerator/(1-Z)^dim with numerator(1) != 0.

    numerator is a tuple of (degree, coefficient) pairs, ascending degree;
    dim is the Krull dimension, -1 for the zero module.
    """

    numerator: tuple[tuple[int, int], ...]
    dim: int

    def numerator_dict(self) -> dict[int, int]:
        return dict(self.numerator)

    @property
    def top_degree(self):
        return self.numerator[-1][0] if self.numerator else NEG_INF

    def __str__(self):
        if not self.numerator:
            return "0"
        num = " + ".join(f"{c}*Z^{d}" for d, c in self.numerator)
        return f"({num}) / (1-Z)^{self.dim}"


def hilbert_series(m: Presentation) -> HilbertSeries:
    hs = m._cache.get("series")
    if hs is not None:
        return hs
    ring = m.ring
    n = ring.num_vars
    lay = ring.layout
    leads: list[tuple[int, tuple[int, ...]]] = []
    for v in relations_gb(m).vectors:
        key = int(v.keys[0])
        leads.append((lay.component(key), lay.exponents(key)))
    numer: dict[int, int] = {}
    for k, a in enumerate(m.ambient.twists):
        gens_k = tuple(e for comp, e in leads if comp == k)
        for d, c in _mono_numerator(gens_k, n).items():
            numer[d + a] = numer.get(d + a, 0) + c
    numer = {d: c for d, c in numer.items() if c}
    e = 0
    while numer and sum(numer.values()) == 0:
        numer = _divide_one_minus_z(numer)
        e += 1
    if not numer:
        hs = HilbertSeries((), -1)
    else:
        hs = HilbertSeries(tuple(sorted(numer.items())), n - e)
    m._cache["series"] = hs
    return hs


def krull_dim(m: Presentation) -> int:
    """Krull dimension; -1 for the zero module."""
    return hilbert_series(m).dim


def hilbert_function(m: Presentation, i: int) -> int:
    """dim_K of the degree-i piece, by expanding the reduced series."""
    hs = hilbert_series(m)
    d = hs.dim
    if d < 0:
        return 0
    if d == 0:
        return hs.numerator_dict().get(i, 0)
    total = 0
    for j, c in hs.numerator:
        k = i - j
        if k >= 0:
            total += c * math.comb(k + d - 1, d - 1)
    return total


@dataclass(frozen=True)
class QPoly:
    """Polynomial with rational coefficients, low degree first."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def zero() -> "QPoly":
        return QPoly(())

    @staticmethod
    def make(coeffs) -> "QPoly":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return QPoly(tuple(cs))

    def __call__(self, i: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * i + c
        return acc

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append(f"{c}*i")
            else:
                parts.append(f"{c}*i^{e}")
        return " + ".join(reversed(parts))


def _binom_poly(shift: int, r: int) -> QPoly:
    """binom(i + shift, r) as a polynomial in i, the falling-factorial way."""
    coeffs = [Fraction(1)]
    for t in range(r):
        # multiply by (i + shift - t)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for e, c in enumerate(coeffs):
            nxt[e + 1] += c
            nxt[e] += c * (shift - t)
        coeffs = nxt
    fact = math.factorial(r)
    return QPoly.make([c / fact for c in coeffs])


def hilbert_polynomial(m: Presentation) -> QPoly:
    """The polynomial agreeing with the Hilbert function in large degrees."""
    hs = hilbert_series(m)
    d = hs.dim
    if d <= 0:
        return QPoly.zero()
    acc = [Fraction(0)] * d
    for j, c in hs.numerator:
        b = _binom_poly(d - 1 - j, d - 1)
        for e, q in enumerate(b.coeffs):
            acc[e] += c * q
    return QPoly.make(acc)


def postulation_number(m: Presentation):
    """Largest degree where Hilbert function and polynomial disagree.

    Equals (top numerator degree) - dim; NEG_INF for the zero module.
    """
    hs = hilbert_series(m)
    if not hs.numerator:
        return NEG_INF
    return hs.numerator[-1][0] - hs.dim


@dataclass(frozen=True)
class PostulationData:
    """Postulation number together with the Hilbert polynomial it is
    measured against: H(i) = P(i) for all i > alpha and H(alpha) != P(alpha)."""

    alpha: object  # int, or NEG_INF for the zero module
    hilbert_polynomial: QPoly


def postulation_data(m: Presentation) -> PostulationData:
    return PostulationData(postulation_number(m), hilbert_polynomial(m))


def graded_dim_oracle(m: Presentation, i: int, window: int = ORACLE_WINDOW) -> int:
    """Brute-force dim_K of the degree-i piece by pure linear algebra.

    Enumerates the monomial basis of the ambient in degree i, spans the
    degree-i slice of the relation submodule by multiplying every relation
    with every monomial of complementary degree, and subtracts the rank.
    Deliberately shares no computation with hilbert_series.
    """
    if abs(i) > window:
        raise WindowExceeded(f"degree {i} outside oracle window {window}")
    ring = m.ring
    n = ring.num_vars
    p = ring.p
    index: dict[tuple[int, tuple[int, ...]], int] = {}
    for k, a in enumerate(m.ambient.twists):
        for exps in monomials_of_degree(n, i - a):
            index[(k, exps)] = len(index)
    total = len(index)
    if total == 0:
        return 0
    rows = []
    for r in m.relations:
        terms = [(mono.component, mono.exponents, c) for mono, c in r.terms()]
        d_r = m.ambient.degree_of(r)
        rem = i - d_r
        if rem < 0:
            continue
        for mult in monomials_of_degree(n, rem):
            row = [0] * total
            for comp, exps, c in terms:
                shifted = tuple(e + f for e, f in zip(exps, mult))
                row[index[(comp, shifted)]] = (row[index[(comp, shifted)]] + c) % p
            rows.append(row)
    if not rows:
        return total
    rank = bk.rref_mod(np.array(rows, dtype=np.int64), p)[2]
    return total - int(rank)
