"""Minimal graded free resolutions, Betti tables, the resolution-shift
regularity oracle, Tor, Hom, Ext, graded local cohomology through duality
against R(-n), and partial regularity over an index set.

Matrices are stored by columns as module vectors; minimization is Gaussian
elimination on constant entries (Schur complement at the pivot), repeated
to a fixed point with the lowest (row, column) pivot each time, so Betti
numbers come out canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import CmregError, NotAComplex, ZeroModule
from .groebner import (
    _elimination_syzygies,
    is_zero_module,
    kernel_gens,
    relations_gb,
    submodule_presentation,
)
from .hilbert import hilbert_function, hilbert_series, krull_dim
from .ring import (
    NEG_INF,
    FreeModule,
    Polynomial,
    Presentation,
    RingSpec,
    Vector,
    _frozen,
    canonicalize_terms,
)

_I64 = np.int64


def _drop_component(v: Vector, r: int) -> Vector:
    """Delete component r and renumber the ones above it down by one."""
    comps = v.components()
    sel = comps != r
    keys = v.keys[sel]
    coeffs = v.coeffs[sel]
    adj = (comps[sel] > r).astype(_I64)
    return Vector(v.ring, _frozen(keys + adj), _frozen(coeffs.copy()))


def apply_columns(cols: Sequence[Vector], v: Vector) -> Vector:
    """Image of v under the map whose c-th basis image is cols[c]."""
    out = Vector.zero(v.ring)
    for comp, q in v.component_split():
        out = out + q * cols[comp]
    return out


class GradedMatrix:
    """Degree-zero map between twisted free modules, stored by columns."""

    __slots__ = ("domain", "codomain", "cols")

    def __init__(self, domain: FreeModule, codomain: FreeModule, cols: Sequence[Vector]):
        if len(cols) != domain.rank:
            raise CmregError("one column per domain basis vector required")
        self.domain = domain
        self.codomain = codomain
        self.cols = tuple(cols)

    def entry(self, r: int, c: int) -> Polynomial:
        return self.cols[c].entry(r)

    def apply(self, v: Vector) -> Vector:
        return apply_columns(self.cols, v)

    def compose(self, other: "GradedMatrix") -> "GradedMatrix":
        return GradedMatrix(other.domain, self.codomain,
                            [self.apply(c) for c in other.cols])

    def __repr__(self):
        return f"GradedMatrix({self.domain.rank} -> {self.codomain.rank})"


@dataclass(frozen=True)
class FreeResolution:
    """Complex F_L -> ... -> F_0 with H_0 = the resolved module."""

    modules: tuple[FreeModule, ...]
    maps: tuple[GradedMatrix, ...]
    minimal: bool

    @property
    def length(self) -> int:
        return len(self.maps)


def _unit_pivot(cols: Sequence[Vector], ring: RingSpec):
    """Lowest (row, column) position holding a nonzero constant entry."""
    lay = ring.layout
    best = None
    for c, v in enumerate(cols):
        if v.is_zero():
            continue
        degs = lay.mono_degrees(v.keys)
        for key in v.keys[degs == 0]:
            r = lay.component(int(key))
            if best is None or (r, c) < best:
                best = (r, c)
    return best


def _eliminate_units(f_mods: list[list[int]], maps_cols: list[list[Vector]],
                     ring: RingSpec, only_last: bool = False) -> None:
    """Split off trivial summands until no map has a constant entry."""
    while maps_cols:
        t0 = len(maps_cols) - 1 if only_last else 0
        hit = None
        for t in range(t0, len(maps_cols)):
            piv = _unit_pivot(maps_cols[t], ring)
            if piv is not None:
                hit = (t, piv)
                break
        if hit is None:
            return
        t, (r, c) = hit
        cols = maps_cols[t]
        col = cols[c]
        uinv = ring.field.inv(int(col.entry(r).coeffs[0]))
        for c2 in range(len(cols)):
            if c2 == c:
                continue
            q = cols[c2].entry(r)
            if not q.is_zero():
                cols[c2] = cols[c2] - q.scaled(uinv) * col
        del cols[c]
        del f_mods[t + 1][c]
        maps_cols[t] = [_drop_component(v, r) for v in cols]
        del f_mods[t][r]
        if t > 0:
            del maps_cols[t - 1][r]
        if t + 1 < len(maps_cols):
            maps_cols[t + 1] = [_drop_component(v, c) for v in maps_cols[t + 1]]
        while maps_cols and not maps_cols[-1]:
            maps_cols.pop()
            f_mods.pop()


def free_resolution(m: Presentation, minimize: bool = True,
                    degree_cap: int | None = None) -> FreeResolution:
    """Iterated syzygies of the presentation, optionally minimized.

    With minimize=True every step is pruned of constant entries as it is
    produced, so the result is the minimal graded free resolution; its F_0
    presents a module isomorphic to m (equal Hilbert functions).
    """
    key = ("res", minimize)
    cached = m._cache.get(key)
    if cached is not None:
        return cached
    ring = m.ring
    lay = ring.layout
    n = ring.num_vars
    f_mods: list[list[int]] = [list(m.ambient.twists)]
    maps_cols: list[list[Vector]] = []
    cur = list(m.relations)
    degrees = [m.ambient.degree_of(r) for r in cur]
    steps = 0
    while cur:
        f_mods.append(list(degrees))
        maps_cols.append(list(cur))
        if minimize:
            _eliminate_units(f_mods, maps_cols, ring, only_last=True)
            if not maps_cols or not maps_cols[-1]:
                break
            cur = maps_cols[-1]
        steps += 1
        if steps > n + 6:
            raise CmregError("resolution did not terminate")  # pragma: no cover
        cod = FreeModule(ring, tuple(f_mods[-2]))
        dom_twists = tuple(f_mods[-1])
        cur = _elimination_syzygies(cur, cod, dom_twists, degree_cap)
        degrees = [
            lay.mono_degree(int(v.keys[0])) + dom_twists[lay.component(int(v.keys[0]))]
            for v in cur
        ]
    if minimize:
        _eliminate_units(f_mods, maps_cols, ring)
    mods = tuple(FreeModule(ring, tuple(tw)) for tw in f_mods)
    maps = tuple(
        GradedMatrix(mods[t + 1], mods[t], cols) for t, cols in enumerate(maps_cols)
    )
    res = FreeResolution(mods, maps, minimize)
    m._cache[key] = res
    return res


@dataclass(frozen=True)
class BettiTable:
    """Graded Betti numbers beta_{i,j}; absent entries are zero."""

    entries: tuple[tuple[tuple[int, int], int], ...]

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.entries)

    def __str__(self):
        if not self.entries:
            return "zero module"
        return ", ".join(f"b[{i},{j}]={v}" for (i, j), v in self.entries)


def betti_table(m: Presentation) -> BettiTable:
    table = m._cache.get("betti")
    if table is None:
        res = free_resolution(m, minimize=True)
        counts: dict[tuple[int, int], int] = {}
        for i, fm in enumerate(res.modules):
            for j in fm.twists:
                counts[(i, j)] = counts.get((i, j), 0) + 1
        table = BettiTable(tuple(sorted(counts.items())))
        m._cache["betti"] = table
    return table


def regularity_from_betti(m: Presentation):
    """max(j - i) over nonzero beta_{i,j}; the oracle regularity.

    NEG_INF for the zero module.
    """
    entries = betti_table(m).entries
    if not entries:
        return NEG_INF
    return max(j - i for (i, j), _ in entries)


def min_gen_degrees(m: Presentation) -> list[int]:
    """Degrees of a minimal generating set (with multiplicity), ascending.

    Read off the graded dimensions of m / (R_+ m), which by the graded
    Nakayama lemma count minimal generators degree by degree.
    """
    cached = m._cache.get("mingens")
    if cached is not None:
        return cached
    if is_zero_module(m):
        m._cache["mingens"] = []
        return []
    ring = m.ring
    extra = []
    for v in range(ring.num_vars):
        xv = Polynomial.variable(ring, v)
        for k in range(m.ambient.rank):
            extra.append(xv.as_vector(k))
    q = Presentation(m.ambient, m.relations + tuple(extra))
    out = []
    for t in range(min(m.ambient.twists), max(m.ambient.twists) + 1):
        out.extend([t] * hilbert_function(q, t))
    m._cache["mingens"] = out
    return out


# ---------------------------------------------------------------------------
# tensor products and Tor

def _remap_table(rank: int, f) -> np.ndarray:
    return np.array([f(c) for c in range(rank)], dtype=_I64)


def tensor_product(m: Presentation, n: Presentation) -> Presentation:
    """m (x) n with ambient basis (i, j) -> i*rank(n) + j and summed twists."""
    if m.ring != n.ring:
        from .errors import RingMismatch

        raise RingMismatch("tensor product over different rings")
    rm, rn = m.ambient.rank, n.ambient.rank
    twists = tuple(a + b for a in m.ambient.twists for b in n.ambient.twists)
    rels = []
    for r in m.relations:
        for j in range(rn):
            rels.append(r.remap_components(_remap_table(rm, lambda c: c * rn + j)))
    for s in n.relations:
        for i in range(rm):
            rels.append(s.remap_components(_remap_table(rn, lambda c: i * rn + c)))
    return Presentation(FreeModule(m.ring, twists), tuple(rels))


def _tensor_free_with(fm: FreeModule, n: Presentation) -> Presentation:
    """F (x) n for a free module F: a direct sum of shifted copies of n."""
    rn = n.ambient.rank
    twists = tuple(a + b for a in fm.twists for b in n.ambient.twists)
    rels = []
    for s in n.relations:
        for i in range(fm.rank):
            rels.append(s.remap_components(_remap_table(rn, lambda c: i * rn + c)))
    return Presentation(FreeModule(fm.ring, twists), tuple(rels))


def tensor_complex(m: Presentation, n: Presentation,
                   degree_cap: int | None = None) -> "ChainComplex":
    """(minimal resolution of m) (x) n, homologies = Tor_i(m, n)."""
    res = free_resolution(m, minimize=True, degree_cap=degree_cap)
    rn = n.ambient.rank
    modules = [_tensor_free_with(fm, n) for fm in res.modules]
    maps = []
    for d in res.maps:
        cols = []
        for a in range(d.domain.rank):
            base = d.cols[a]
            for b in range(rn):
                cols.append(
                    base.remap_components(
                        _remap_table(d.codomain.rank, lambda c: c * rn + b)
                    )
                )
        maps.append(cols)
    return ChainComplex(tuple(modules), tuple(tuple(c) for c in maps))


@dataclass(frozen=True)
class ChainComplex:
    """C_0, ..., C_L of presentations with maps[k] : C_{k+1} -> C_k."""

    modules: tuple[Presentation, ...]
    maps: tuple[tuple[Vector, ...], ...]

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def check_complex(self) -> None:
        """Raise NotAComplex unless consecutive composites vanish mod relations."""
        for k in range(len(self.maps) - 1):
            gb = relations_gb(self.modules[k])
            for col in self.maps[k + 1]:
                image = apply_columns(self.maps[k], col)
                if not gb.reduce(image).is_zero():
                    raise NotAComplex(f"composite at position {k + 2} is nonzero")


def homology_at(cx: ChainComplex, i: int, degree_cap: int | None = None) -> Presentation:
    """H_i = ker(d_i) / im(d_{i+1}) as a presented module."""
    ring = cx.modules[0].ring
    if i < 0 or i > cx.length:
        return Presentation(FreeModule(ring, ()), ())
    ci = cx.modules[i]
    if i == 0:
        cycles = [Vector.basis(ring, k) for k in range(ci.ambient.rank)]
    else:
        cycles = kernel_gens(cx.maps[i - 1], ci.ambient, cx.modules[i - 1], degree_cap)
    boundaries = tuple(v for v in cx.maps[i]) if i < cx.length else ()
    boundaries = tuple(v for v in boundaries if not v.is_zero())
    quotient = Presentation(ci.ambient, ci.relations + boundaries)
    return submodule_presentation(quotient, cycles, degree_cap)


def cycles_at(cx: ChainComplex, i: int, degree_cap: int | None = None) -> Presentation:
    """Z_i = ker(d_i); Z_0 is all of C_0."""
    ring = cx.modules[0].ring
    if i < 0 or i > cx.length:
        return Presentation(FreeModule(ring, ()), ())
    ci = cx.modules[i]
    if i == 0:
        gens = [Vector.basis(ring, k) for k in range(ci.ambient.rank)]
    else:
        gens = kernel_gens(cx.maps[i - 1], ci.ambient, cx.modules[i - 1], degree_cap)
    return submodule_presentation(ci, gens, degree_cap)


def boundaries_at(cx: ChainComplex, i: int, degree_cap: int | None = None) -> Presentation:
    """B_i = im(d_{i+1}) inside C_i (zero at the top)."""
    ring = cx.modules[0].ring
    if i < 0 or i >= cx.length:
        return Presentation(FreeModule(ring, ()), ())
    gens = [v for v in cx.maps[i] if not v.is_zero()]
    return submodule_presentation(cx.modules[i], gens, degree_cap)


def tor(m: Presentation, n: Presentation, i: int,
        degree_cap: int | None = None) -> Presentation:
    """Tor_i as homology of (minimal resolution of m) (x) n."""
    if i < 0:
        raise CmregError("Tor index must be nonnegative")
    cx = tensor_complex(m, n, degree_cap)
    return homology_at(cx, i, degree_cap)


# ---------------------------------------------------------------------------
# Hom, Ext and local cohomology

def _hom_free_into(fm: FreeModule, n: Presentation) -> Presentation:
    """Hom(F, n) for free F: copies of n with negated twists, index (a, b)."""
    rn = n.ambient.rank
    twists = tuple(b - a for a in fm.twists for b in n.ambient.twists)
    rels = []
    for s in n.relations:
        for a in range(fm.rank):
            rels.append(s.remap_components(_remap_table(rn, lambda c: a * rn + c)))
    return Presentation(FreeModule(fm.ring, twists), tuple(rels))


def hom_cochain(m: Presentation, n: Presentation,
                degree_cap: int | None = None) -> "ChainComplex":
    """Hom(resolution of m, n) with maps reindexed so homology_at(L - i)
    computes Ext^i; modules run Hom(F_L, n), ..., Hom(F_0, n)."""
    res = free_resolution(m, minimize=True, degree_cap=degree_cap)
    ring = m.ring
    rn = n.ambient.rank
    hom_mods = [_hom_free_into(fm, n) for fm in res.modules]
    cochain_maps = []
    for k, d in enumerate(res.maps):
        # D_k : Hom(F_k, n) -> Hom(F_{k+1}, n), column (a, b)
        r_next = d.domain.rank
        entries: list[list[Polynomial]] = [
            [d.entry(a, c) for c in range(r_next)] for a in range(d.codomain.rank)
        ]
        cols = []
        for a in range(d.codomain.rank):
            for b in range(rn):
                keys = []
                coeffs = []
                for c in range(r_next):
                    q = entries[a][c]
                    if q.is_zero():
                        continue
                    keys.append(q.keys - (c * rn + b))
                    coeffs.append(q.coeffs)
                if keys:
                    kk, cc = canonicalize_terms(
                        np.concatenate(keys), np.concatenate(coeffs), ring.p
                    )
                    cols.append(Vector(ring, kk, cc))
                else:
                    cols.append(Vector.zero(ring))
        cochain_maps.append(cols)
    # reverse: modules[j] = Hom(F_{L-j}, n); maps[j] : modules[j+1] -> modules[j]
    modules = tuple(reversed(hom_mods))
    maps = tuple(tuple(cochain_maps[k]) for k in reversed(range(len(cochain_maps))))
    return ChainComplex(modules, maps)


def ext_module(m: Presentation, n: Presentation, i: int,
               degree_cap: int | None = None) -> Presentation:
    """Ext^i as cohomology of Hom(minimal resolution of m, n)."""
    if i < 0:
        raise CmregError("Ext index must be nonnegative")
    res = free_resolution(m, minimize=True, degree_cap=degree_cap)
    if i > res.length:
        return Presentation(FreeModule(m.ring, ()), ())
    cx = hom_cochain(m, n, degree_cap)
    return homology_at(cx, cx.length - i, degree_cap)


def hom_module(m: Presentation, n: Presentation,
               degree_cap: int | None = None) -> Presentation:
    """Hom(m, n) = kernel of Hom(F_0, n) -> Hom(F_1, n)."""
    return ext_module(m, n, 0, degree_cap)


@dataclass(frozen=True)
class IndexSet:
    """Subset of the cohomological indices {0, ..., n}."""

    indices: frozenset[int]
    n: int

    @classmethod
    def of(cls, items: Iterable[int], n: int) -> "IndexSet":
        return cls(frozenset(i for i in items if 0 <= i <= n), n)

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(frozenset(range(n + 1)), n)

    @classmethod
    def empty(cls, n: int) -> "IndexSet":
        return cls(frozenset(), n)

    def shifted(self, a: int) -> "IndexSet":
        return IndexSet.of((i + a for i in self.indices), self.n)

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.indices | other.indices, self.n)

    def __iter__(self):
        return iter(sorted(self.indices))

    def __contains__(self, i):
        return i in self.indices

    def __len__(self):
        return len(self.indices)

    def __str__(self):
        return "{" + ",".join(str(i) for i in sorted(self.indices)) + "}"


@dataclass(frozen=True)
class LocalCohomologyProfile:
    """Top nonzero degrees of the local cohomology modules H^j, j = 0..n.

    Computed through graded duality: dim H^j(M)_i = dim Ext^{n-j}(M, R(-n))_{-i},
    and the top degree of H^j is minus the lowest minimal-generator degree
    of that Ext module.
    """

    top_degree: tuple
    exts: tuple[Presentation, ...]  # exts[j] = Ext^{n-j}(M, R(-n))

    def dim(self, j: int, i: int) -> int:
        return hilbert_function(self.exts[j], -i)

    def dims_window(self, lo: int, hi: int) -> dict[tuple[int, int], int]:
        out = {}
        for j in range(len(self.exts)):
            for i in range(lo, hi + 1):
                d = self.dim(j, i)
                if d:
                    out[(j, i)] = d
        return out

    def regularity(self):
        vals = [t + j for j, t in enumerate(self.top_degree) if t != NEG_INF]
        return max(vals) if vals else NEG_INF


def local_cohomology_profile(m: Presentation,
                             degree_cap: int | None = None) -> LocalCohomologyProfile:
    profile = m._cache.get("profile")
    if profile is not None:
        return profile
    ring = m.ring
    n = ring.num_vars
    dualizer = Presentation(FreeModule(ring, (n,)), ())  # R(-n)
    tops = []
    exts = []
    for j in range(n + 1):
        e = ext_module(m, dualizer, n - j, degree_cap)
        exts.append(e)
        if is_zero_module(e):
            tops.append(NEG_INF)
        else:
            tops.append(-min(min_gen_degrees(e)))
    profile = LocalCohomologyProfile(tuple(tops), tuple(exts))
    m._cache["profile"] = profile
    return profile


def partial_regularity(m: Presentation, x: IndexSet,
                       degree_cap: int | None = None):
    """Least t with H^i(m) vanishing above degree t - i for every i in x.

    NEG_INF when x is empty or every listed H^i vanishes.
    """
    profile = local_cohomology_profile(m, degree_cap)
    vals = [
        profile.top_degree[i] + i
        for i in x
        if i < len(profile.top_degree) and profile.top_degree[i] != NEG_INF
    ]
    return max(vals) if vals else NEG_INF


def depth_and_cm_test(m: Presentation) -> tuple[int, bool]:
    """(depth, is Cohen-Macaulay) via the Auslander-Buchsbaum formula."""
    if is_zero_module(m):
        raise ZeroModule("depth of the zero module is undefined")
    cached = m._cache.get("depth")
    if cached is None:
        depth = m.ring.num_vars - free_resolution(m, minimize=True).length
        cached = (depth, depth == krull_dim(m))
        m._cache["depth"] = cached
    return cached


def koszul_complex(elements: Sequence[Polynomial],
                   coefficients: Presentation) -> ChainComplex:
    """Koszul complex on the given homogeneous elements, tensored with a module.

    C_j has basis e_S (x) e_b over size-j subsets S, with the usual signed
    differential d(e_S) = sum (-1)^pos l_{S[pos]} e_{S minus pos}.
    """
    ring = coefficients.ring
    k = len(elements)
    degs = [el.degree() for el in elements]
    rn = coefficients.ambient.rank
    subsets = [list(combinations(range(k), j)) for j in range(k + 1)]
    index = [{s: t for t, s in enumerate(level)} for level in subsets]
    modules = []
    for j in range(k + 1):
        twists = tuple(
            sum(degs[t] for t in s) + b
            for s in subsets[j]
            for b in coefficients.ambient.twists
        )
        rels = []
        for srel in coefficients.relations:
            for t in range(len(subsets[j])):
                rels.append(
                    srel.remap_components(_remap_table(rn, lambda c: t * rn + c))
                )
        modules.append(Presentation(FreeModule(ring, twists), tuple(rels)))
    maps = []
    for j in range(1, k + 1):
        cols = []
        for s in subsets[j]:
            for b in range(rn):
                keys = []
                coeffs = []
                for pos, t in enumerate(s):
                    s_minus = tuple(u for u in s if u != t)
                    tgt = index[j - 1][s_minus] * rn + b
                    el = elements[t] if pos % 2 == 0 else -elements[t]
                    if el.is_zero():
                        continue
                    keys.append(el.keys - tgt)
                    coeffs.append(el.coeffs)
                if keys:
                    kk, cc = canonicalize_terms(
                        np.concatenate(keys), np.concatenate(coeffs), ring.p
                    )
                    cols.append(Vector(ring, kk, cc))
                else:
                    cols.append(Vector.zero(ring))
        maps.append(tuple(cols))
    return ChainComplex(tuple(modules), tuple(maps))
