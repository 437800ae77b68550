"""Exact arithmetic core: prime fields, standard-graded polynomial rings,
twisted free modules, and validated graded module presentations.

Every term of a polynomial or module vector is packed into one int64 key
so that plain integer comparison realizes degree-reverse-lex order,
extended term-over-position to free modules (ties broken toward the lower
component index).  Multiplying a term by a monomial is adding a
precomputed delta to its key; the reduction kernels live off that fact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import _backend as bk
from .errors import (
    AmbientMismatch,
    NonHomogeneousRelation,
    RingMismatch,
    UnsupportedRing,
)

NEG_INF = float("-inf")

DEFAULT_PRIME = 32003

_I64 = np.int64


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


_EMPTY = _frozen(np.empty(0, dtype=_I64))


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Prime field F_p; all element values are canonical in [0, p)."""

    characteristic: int = DEFAULT_PRIME

    def __post_init__(self):
        if not _is_prime(self.characteristic):
            raise UnsupportedRing(f"characteristic {self.characteristic} is not prime")

    @property
    def p(self) -> int:
        return self.characteristic

    def normalize(self, c: int) -> int:
        return c % self.characteristic

    def inv(self, c: int) -> int:
        c %= self.characteristic
        if c == 0:
            raise ZeroDivisionError("inverse of 0 in a field")
        return pow(c, self.characteristic - 2, self.characteristic)

    def neg(self, c: int) -> int:
        return -c % self.characteristic


class TermLayout:
    """Bit layout of packed term keys for a ring with n variables.

    From most to least significant: one elimination-block bit, the total
    monomial degree, the fields C - e_n, ..., C - e_2, and finally
    COMP_MASK - component.  Key order is therefore degrevlex on the
    monomial, then lower component wins; an elimination block dominates
    everything below it.
    """

    __slots__ = ("nvars", "exp_bits", "emask", "shift_deg", "shift_block", "key_one")

    def __init__(self, nvars: int):
        exp_bits = min(12, (62 - bk.COMP_BITS) // nvars)
        if nvars < 1 or exp_bits < 5:
            raise UnsupportedRing(f"{nvars} variables not supported by the term encoding")
        self.nvars = nvars
        self.exp_bits = exp_bits
        self.emask = (1 << exp_bits) - 1
        self.shift_deg = bk.COMP_BITS + (nvars - 1) * exp_bits
        self.shift_block = bk.COMP_BITS + nvars * exp_bits
        one = bk.COMP_MASK
        for v in range(1, nvars):
            one |= self.emask << (bk.COMP_BITS + (v - 1) * exp_bits)
        self.key_one = one  # key of the monomial 1 in component 0, block 0

    def encode(self, exps: Sequence[int], comp: int = 0, block: int = 0) -> int:
        deg = 0
        for e in exps:
            if e < 0:
                raise ValueError("negative exponent")
            deg += e
        if deg > self.emask:
            raise UnsupportedRing(f"degree {deg} exceeds encoding capacity {self.emask}")
        if not 0 <= comp <= bk.COMP_MASK:
            raise UnsupportedRing(f"component {comp} exceeds encoding capacity")
        key = (block << self.shift_block) | (deg << self.shift_deg)
        for v in range(1, self.nvars):
            key |= (self.emask - exps[v]) << (bk.COMP_BITS + (v - 1) * self.exp_bits)
        return key | (bk.COMP_MASK - comp)

    def delta(self, exps: Sequence[int]) -> int:
        """Key increment realizing multiplication by the monomial exps."""
        d = sum(exps) << self.shift_deg
        for v in range(1, self.nvars):
            d -= exps[v] << (bk.COMP_BITS + (v - 1) * self.exp_bits)
        return d

    def mono_degree(self, key: int) -> int:
        return (key >> self.shift_deg) & self.emask

    def component(self, key: int) -> int:
        return bk.COMP_MASK - (key & bk.COMP_MASK)

    def block(self, key: int) -> int:
        return key >> self.shift_block

    def exponents(self, key: int) -> tuple[int, ...]:
        deg = self.mono_degree(key)
        out = [0] * self.nvars
        rest = 0
        for v in range(1, self.nvars):
            e = self.emask - ((key >> (bk.COMP_BITS + (v - 1) * self.exp_bits)) & self.emask)
            out[v] = e
            rest += e
        out[0] = deg - rest
        return tuple(out)

    def mono_degrees(self, keys: np.ndarray) -> np.ndarray:
        return (keys >> self.shift_deg) & self.emask

    def components(self, keys: np.ndarray) -> np.ndarray:
        return bk.COMP_MASK - (keys & bk.COMP_MASK)


@dataclass(frozen=True)
class RingSpec:
    """Polynomial ring over a prime field with the standard grading."""

    field: FieldSpec
    var_names: tuple[str, ...]
    layout: TermLayout = field(init=False, compare=False, repr=False, hash=False)

    def __post_init__(self):
        names = tuple(self.var_names)
        if len(set(names)) != len(names) or not names:
            raise UnsupportedRing("variable names must be distinct and nonempty")
        for nm in names:
            if not nm.isidentifier():
                raise UnsupportedRing(f"bad variable name {nm!r}")
        object.__setattr__(self, "var_names", names)
        object.__setattr__(self, "layout", TermLayout(len(names)))

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    @property
    def p(self) -> int:
        return self.field.characteristic

    def __repr__(self):
        return f"F{self.p}[{','.join(self.var_names)}]"


def make_ring(var_names: Sequence[str], p: int = DEFAULT_PRIME) -> RingSpec:
    return RingSpec(FieldSpec(p), tuple(var_names))


@dataclass(frozen=True)
class Monomial:
    """Boundary representation of a single term position."""

    exponents: tuple[int, ...]
    component: int | None = None

    @property
    def degree(self) -> int:
        return sum(self.exponents)


def canonicalize_terms(keys, coeffs, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Sort descending, merge duplicate keys mod p, drop zeros."""
    k = np.asarray(keys, dtype=_I64)
    c = np.asarray(coeffs, dtype=_I64)
    if k.size == 0:
        return _EMPTY, _EMPTY
    order = np.argsort(-k, kind="stable")
    k = k[order]
    c = c[order] % p
    starts = np.flatnonzero(np.r_[True, k[1:] != k[:-1]])
    k = k[starts]
    c = np.add.reduceat(c, starts) % p
    keep = c != 0
    return _frozen(k[keep]), _frozen(c[keep])


class _Terms:
    """Shared storage for polynomials and module vectors."""

    __slots__ = ("ring", "keys", "coeffs")

    def __init__(self, ring: RingSpec, keys: np.ndarray, coeffs: np.ndarray):
        self.ring = ring
        self.keys = keys
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return self.keys.size == 0

    def __len__(self) -> int:
        return int(self.keys.size)

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.ring == other.ring
            and np.array_equal(self.keys, other.keys)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.ring.p, self.keys.tobytes(), self.coeffs.tobytes()))

    def _combine(self, other, sa=1, sb=1, da=0, db=0):
        k, c = bk.combine_terms(
            self.keys, self.coeffs, sa % self.ring.p, da,
            other.keys, other.coeffs, sb % self.ring.p, db, self.ring.p,
        )
        return type(self)(self.ring, _frozen(k), _frozen(c))

    def scaled(self, s: int):
        s %= self.ring.p
        if s == 0 or self.is_zero():
            return type(self)(self.ring, _EMPTY, _EMPTY)
        return type(self)(self.ring, self.keys, _frozen(self.coeffs * s % self.ring.p))

    def shifted_by_monomial(self, exps: Sequence[int]):
        if self.is_zero():
            return self
        d = self.ring.layout.delta(exps)
        top = int(self.ring.layout.mono_degrees(self.keys).max()) + sum(exps)
        if top > self.ring.layout.emask:
            raise UnsupportedRing(f"degree {top} exceeds encoding capacity")
        return type(self)(self.ring, _frozen(self.keys + d), self.coeffs)

    def __add__(self, other):
        self._check(other)
        return self._combine(other)

    def __sub__(self, other):
        self._check(other)
        return self._combine(other, sb=-1)

    def __neg__(self):
        return self.scaled(-1)

    def _check(self, other):
        if type(self) is not type(other) or self.ring != other.ring:
            raise RingMismatch(f"cannot combine {self!r} and {other!r}")

    def mono_degree_span(self) -> tuple[int, int] | None:
        if self.is_zero():
            return None
        degs = self.ring.layout.mono_degrees(self.keys)
        return int(degs.min()), int(degs.max())


class Polynomial(_Terms):
    """Sparse homogeneous-friendly polynomial; component always 0."""

    @classmethod
    def zero(cls, ring: RingSpec) -> "Polynomial":
        return cls(ring, _EMPTY, _EMPTY)

    @classmethod
    def constant(cls, ring: RingSpec, c: int) -> "Polynomial":
        c %= ring.p
        if c == 0:
            return cls.zero(ring)
        k = _frozen(np.array([ring.layout.encode((0,) * ring.num_vars)], dtype=_I64))
        return cls(ring, k, _frozen(np.array([c], dtype=_I64)))

    @classmethod
    def monomial(cls, ring: RingSpec, exps: Sequence[int], c: int = 1) -> "Polynomial":
        c %= ring.p
        if c == 0:
            return cls.zero(ring)
        k = _frozen(np.array([ring.layout.encode(tuple(exps))], dtype=_I64))
        return cls(ring, k, _frozen(np.array([c], dtype=_I64)))

    @classmethod
    def variable(cls, ring: RingSpec, v: int) -> "Polynomial":
        exps = [0] * ring.num_vars
        exps[v] = 1
        return cls.monomial(ring, exps)

    @classmethod
    def from_terms(cls, ring: RingSpec, terms: dict) -> "Polynomial":
        keys = [ring.layout.encode(tuple(e)) for e in terms]
        k, c = canonicalize_terms(keys, list(terms.values()), ring.p)
        return cls(ring, k, c)

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        lay = self.ring.layout
        for key, c in zip(self.keys, self.coeffs):
            yield Monomial(lay.exponents(int(key))), int(c)

    def degree(self) -> int | None:
        span = self.mono_degree_span()
        return None if span is None else span[1]

    def is_homogeneous(self) -> bool:
        span = self.mono_degree_span()
        return span is None or span[0] == span[1]

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scaled(other)
        if isinstance(other, Polynomial):
            return _poly_times_terms(self, other, Polynomial)
        if isinstance(other, Vector):
            return _poly_times_terms(self, other, Vector)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Polynomial.constant(self.ring, 1)
        for _ in range(e):
            out = out * self
        return out

    def as_vector(self, comp: int = 0) -> "Vector":
        if comp == 0:
            return Vector(self.ring, self.keys, self.coeffs)
        return Vector(self.ring, _frozen(self.keys - comp), self.coeffs)

    def __str__(self):
        if self.is_zero():
            return "0"
        names = self.ring.var_names
        parts = []
        for mono, c in self.terms():
            factors = [str(c)] if c != 1 or mono.degree == 0 else []
            for nm, e in zip(names, mono.exponents):
                if e == 1:
                    factors.append(nm)
                elif e > 1:
                    factors.append(f"{nm}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"


def _poly_times_terms(p: Polynomial, v: _Terms, cls):
    """Sum over terms of p of coeff * (monomial shift of v)."""
    ring = p.ring
    if p.ring != v.ring:
        raise RingMismatch("product over different rings")
    acc_k, acc_c = _EMPTY, _EMPTY
    key_one = ring.layout.key_one
    for key, c in zip(p.keys, p.coeffs):
        acc_k, acc_c = bk.combine_terms(
            acc_k, acc_c, 1, 0, v.keys, v.coeffs, int(c), int(key) - key_one, ring.p
        )
    return cls(ring, _frozen(acc_k), _frozen(acc_c))


class Vector(_Terms):
    """Element of a twisted free module: terms carry component indices."""

    @classmethod
    def zero(cls, ring: RingSpec) -> "Vector":
        return cls(ring, _EMPTY, _EMPTY)

    @classmethod
    def basis(cls, ring: RingSpec, comp: int) -> "Vector":
        k = ring.layout.encode((0,) * ring.num_vars, comp)
        return cls(ring, _frozen(np.array([k], dtype=_I64)),
                   _frozen(np.array([1], dtype=_I64)))

    @classmethod
    def from_polys(cls, polys: Sequence[Polynomial]) -> "Vector":
        """Assemble a vector with component k carrying polys[k]."""
        ring = polys[0].ring
        keys, coeffs = [], []
        for comp, q in enumerate(polys):
            if q.ring != ring:
                raise RingMismatch("vector entries over different rings")
            keys.append(q.keys - comp)
            coeffs.append(q.coeffs)
        k, c = canonicalize_terms(np.concatenate(keys), np.concatenate(coeffs), ring.p)
        return cls(ring, k, c)

    def components(self) -> np.ndarray:
        return self.ring.layout.components(self.keys)

    def component_split(self) -> list[tuple[int, Polynomial]]:
        """Decompose into (component, polynomial) pairs, ascending component."""
        comps = self.components()
        out = []
        for comp in sorted(set(int(x) for x in comps)):
            sel = comps == comp
            out.append((comp, Polynomial(self.ring, _frozen(self.keys[sel] + comp),
                                         _frozen(self.coeffs[sel].copy()))))
        return out

    def entry(self, comp: int) -> Polynomial:
        sel = self.components() == comp
        return Polynomial(self.ring, _frozen(self.keys[sel] + comp),
                          _frozen(self.coeffs[sel].copy()))

    def remap_components(self, table: np.ndarray) -> "Vector":
        """Move component c to table[c]; table must be injective on used comps."""
        if self.is_zero():
            return self
        comps = self.components()
        new = table[comps]
        keys = (self.keys + comps) - new
        k, c = canonicalize_terms(keys, self.coeffs, self.ring.p)
        return Vector(self.ring, k, c)

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        lay = self.ring.layout
        for key, c in zip(self.keys, self.coeffs):
            key = int(key)
            yield Monomial(lay.exponents(key), lay.component(key)), int(c)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scaled(other)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self):
        return "[" + ", ".join(str(q) for _, q in sorted(self.component_split())) + "]"

    def __repr__(self):
        if self.is_zero():
            return "Vector(0)"
        return f"Vector({', '.join(f'{c}:{q}' for c, q in self.component_split())})"


@dataclass(frozen=True)
class FreeModule:
    """Direct sum of twisted copies of the ring: basis k sits in degree twists[k]."""

    ring: RingSpec
    twists: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.twists)

    def shifted(self, a: int) -> "FreeModule":
        return FreeModule(self.ring, tuple(t + a for t in self.twists))

    def basis_vector(self, k: int) -> Vector:
        return Vector.basis(self.ring, k)

    def term_degree(self, key: int) -> int:
        lay = self.ring.layout
        return lay.mono_degree(key) + self.twists[lay.component(key)]

    def degree_span(self, v: Vector) -> tuple[int, int] | None:
        if v.is_zero():
            return None
        lay = self.ring.layout
        degs = lay.mono_degrees(v.keys) + np.array(self.twists, dtype=_I64)[lay.components(v.keys)]
        return int(degs.min()), int(degs.max())

    def degree_of(self, v: Vector, column: int = -1) -> int | None:
        """Graded degree of a homogeneous vector (None for zero)."""
        span = self.degree_span(v)
        if span is None:
            return None
        if span[0] != span[1]:
            raise NonHomogeneousRelation(column, span)
        return span[0]

    def dim_in_degree(self, i: int) -> int:
        n = self.ring.num_vars
        return sum(count_monomials(n, i - a) for a in self.twists)


def count_monomials(n: int, d: int) -> int:
    """Number of degree-d monomials in n variables (0 for d < 0)."""
    if d < 0:
        return 0
    return math.comb(d + n - 1, n - 1)


def monomials_of_degree(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """All exponent tuples of total degree d, first variable descending."""
    if d < 0:
        return
    if n == 1:
        yield (d,)
        return
    for e in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - e):
            yield (e,) + rest


class Presentation:
    """Finitely generated graded module as cokernel of a homogeneous matrix.

    The module is ambient / span(relations); immutable after construction.
    Expensive derived data (Groebner basis, Hilbert series, resolution,
    cohomology profile) is memoized on the instance.
    """

    __slots__ = ("ambient", "relations", "_cache")

    def __init__(self, ambient: FreeModule, relations: tuple[Vector, ...]):
        self.ambient = ambient
        self.relations = relations
        self._cache: dict = {}

    @property
    def ring(self) -> RingSpec:
        return self.ambient.ring

    def relation_degrees(self) -> tuple[int, ...]:
        return tuple(self.ambient.degree_of(r) for r in self.relations)

    def __repr__(self):
        return (f"Presentation(rank {self.ambient.rank}, twists {self.ambient.twists}, "
                f"{len(self.relations)} relations)")


def make_presentation(ambient: FreeModule, relations: Sequence[Vector]) -> Presentation:
    """Validate homogeneity and ring agreement; drop zero columns."""
    kept = []
    for col, v in enumerate(relations):
        if not isinstance(v, Vector):
            raise AmbientMismatch(f"relation {col} is not a module vector")
        if v.ring != ambient.ring:
            raise RingMismatch(f"relation {col} lives over a different ring")
        if v.is_zero():
            continue
        if int(v.components().max()) >= ambient.rank:
            raise AmbientMismatch(
                f"relation {col} uses component {int(v.components().max())} "
                f"outside rank {ambient.rank}"
            )
        ambient.degree_of(v, col)
        kept.append(v)
    return Presentation(ambient, tuple(kept))


def free_presentation(free: FreeModule) -> Presentation:
    return Presentation(free, ())


def ring_as_module(ring: RingSpec, twist_: int = 0) -> Presentation:
    """R(-twist_): the free rank-1 module generated in degree twist_."""
    return Presentation(FreeModule(ring, (twist_,)), ())


def zero_module(ring: RingSpec) -> Presentation:
    return Presentation(FreeModule(ring, ()), ())


def twist(m: Presentation, a: int) -> Presentation:
    """Shift: twist(M, a) has graded pieces twist(M, a)_i = M_{i-a}."""
    return Presentation(m.ambient.shifted(a), m.relations)


def ideal_to_cyclic_module(ring: RingSpec, gens: Sequence[Polynomial]) -> Presentation:
    """R/I for the ideal generated by homogeneous gens."""
    amb = FreeModule(ring, (0,))
    return make_presentation(amb, [g.as_vector() for g in gens])
