"""Groebner bases for submodules of twisted free modules, normal forms,
syzygies, kernels of maps, and colon/saturation computations.

The order is degree-reverse-lex on monomials, term-over-position on
modules (fixed; required degree-compatible so leading-term modules carry
the Hilbert data).  Syzygies are computed by an elimination block: lift
generators g_i to g_i + e_i in F (+) E with F dominating, take a basis,
and read off the pure-E elements.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend as bk
from .errors import AmbientMismatch, CmregError, DegreeLimitExceeded
from .ring import (
    FreeModule,
    Presentation,
    RingSpec,
    Vector,
    _frozen,
    monomials_of_degree,
)

_I64 = np.int64
_EMPTY = np.empty(0, dtype=_I64)

DEFAULT_DEGREE_CAP = 30


@dataclass(frozen=True)
class TermOrder:
    """The one order family the engine supports."""

    kind: str = "degrevlex"
    module_extension: str = "top"


DEGREVLEX_TOP = TermOrder()


class _FlatBasis:
    """Basis elements stored flat for the reduction kernels."""

    def __init__(self, ring: RingSpec):
        self.ring = ring
        self.kflat = np.empty(1024, dtype=_I64)
        self.cflat = np.empty(1024, dtype=_I64)
        self.size = 0
        self.off = [0]
        self.lead_key: list[int] = []
        self.lead_comp: list[int] = []
        self.lead_exp: list[tuple[int, ...]] = []
        self.lc_inv: list[int] = []
        self.elems: list[tuple[np.ndarray, np.ndarray]] = []
        self._np = None

    def __len__(self):
        return len(self.lead_key)

    def add(self, keys: np.ndarray, coeffs: np.ndarray):
        m = keys.size
        while self.size + m > self.kflat.size:
            grown_k = np.empty(self.kflat.size * 2, dtype=_I64)
            grown_c = np.empty(self.cflat.size * 2, dtype=_I64)
            grown_k[: self.size] = self.kflat[: self.size]
            grown_c[: self.size] = self.cflat[: self.size]
            self.kflat, self.cflat = grown_k, grown_c
        self.kflat[self.size : self.size + m] = keys
        self.cflat[self.size : self.size + m] = coeffs
        self.size += m
        self.off.append(self.size)
        lay = self.ring.layout
        lead = int(keys[0])
        self.lead_key.append(lead)
        self.lead_comp.append(lay.component(lead))
        self.lead_exp.append(lay.exponents(lead))
        self.lc_inv.append(self.ring.field.inv(int(coeffs[0])))
        self.elems.append((keys, coeffs))
        self._np = None

    def _arrays(self):
        if self._np is None:
            m = len(self)
            self._np = (
                self.kflat[: self.size],
                self.cflat[: self.size],
                np.array(self.off, dtype=_I64),
                np.array(self.lead_key, dtype=_I64),
                np.array(self.lead_comp, dtype=_I64),
                np.array(self.lead_exp, dtype=_I64).reshape(m, self.ring.num_vars),
                np.array(self.lc_inv, dtype=_I64),
            )
        return self._np

    def reduce(self, keys: np.ndarray, coeffs: np.ndarray, head_only: bool = False):
        if len(self) == 0 or keys.size == 0:
            return keys, coeffs
        kf, cf, off, lk, lc, le, li = self._arrays()
        return bk.reduce_full(
            keys, coeffs, kf, cf, off, lk, lc, le, li,
            self.ring.p, self.ring.num_vars, self.ring.layout.exp_bits,
            1 if head_only else 0,
        )


def _graded_degree(keys: np.ndarray, twists: Sequence[int], ring: RingSpec) -> int:
    lay = ring.layout
    lead = int(keys[0])
    return lay.mono_degree(lead) + twists[lay.component(lead)]


def _buchberger_engine(
    vecs: list[tuple[np.ndarray, np.ndarray]],
    twists: Sequence[int],
    ring: RingSpec,
    degree_cap: int | None,
    syz_mode: bool = False,
    truncate_at: int | None = None,
    inputs_out: list | None = None,
) -> tuple[list[tuple[np.ndarray, np.ndarray]], list[tuple[np.ndarray, np.ndarray]]]:
    """Core S-pair loop; returns (basis elements, side outputs).

    S-pairs are processed in increasing graded degree (normal strategy);
    the cap applies to the monomial degree of an S-pair lcm.  The product
    criterion is only sound for ideals and is applied only at rank 1; the
    chain criterion is componentwise and applies throughout.

    In syz_mode any element whose lead falls outside the dominating
    elimination block is a finished syzygy: it is routed to the side list
    instead of the basis, never paired (elements of the low block cannot
    reduce terms of the high one, and the recorded reduction cofactors
    already generate the full syzygy module).

    With truncate_at, S-pairs of graded degree beyond it are silently
    dropped: the result is a degree-truncated basis, which still spans the
    input module when truncate_at bounds the input degrees (homogeneity).

    With inputs_out the engine doubles as a generator slimmer: inputs that
    reduce to zero on arrival are redundant, the others are collected.
    Membership testing then needs the basis complete through each input's
    degree, so same-degree S-pairs are ordered before inputs and reductions
    run to full normal form; the plain modes use head-only reduction and
    take inputs first.
    """
    lay = ring.layout
    p = ring.p
    cap = DEFAULT_DEGREE_CAP if degree_cap is None else degree_cap
    prodcrit = len(twists) == 1
    slim = inputs_out is not None
    input_kind = 1 if slim else 0
    pair_kind = 1 - input_kind

    heap: list[tuple[int, int, int, int]] = []
    for t, (k, _) in enumerate(vecs):
        if k.size:
            heapq.heappush(heap, (_graded_degree(k, twists, ring), input_kind, t, -1))

    basis = _FlatBasis(ring)
    side: list[tuple[np.ndarray, np.ndarray]] = []
    pending: set[tuple[int, int]] = set()

    def push_pairs(j: int):
        cj = basis.lead_comp[j]
        ej = basis.lead_exp[j]
        for i in range(j):
            if basis.lead_comp[i] != cj:
                continue
            ei = basis.lead_exp[i]
            lcm = tuple(max(a, b) for a, b in zip(ei, ej))
            if prodcrit and all(a + b == m for a, b, m in zip(ei, ej, lcm)):
                continue
            gdeg = sum(lcm) + twists[cj]
            pending.add((i, j))
            heapq.heappush(heap, (gdeg, pair_kind, i, j))

    while heap:
        gdeg, kind, a, b = heapq.heappop(heap)
        if kind == input_kind:
            rk, rc = basis.reduce(*vecs[a], head_only=not slim)
        else:
            pending.discard((a, b))
            if truncate_at is not None and gdeg > truncate_at:
                continue
            ca = basis.lead_comp[a]
            ea, eb = basis.lead_exp[a], basis.lead_exp[b]
            lcm = tuple(max(x, y) for x, y in zip(ea, eb))
            mono = sum(lcm)
            if mono > cap:
                raise DegreeLimitExceeded(mono, cap)
            skip = False
            for t in range(len(basis)):
                if t == a or t == b or basis.lead_comp[t] != ca:
                    continue
                if (
                    all(x <= y for x, y in zip(basis.lead_exp[t], lcm))
                    and (min(a, t), max(a, t)) not in pending
                    and (min(b, t), max(b, t)) not in pending
                ):
                    skip = True
                    break
            if skip:
                continue
            blk = lay.block(basis.lead_key[a])
            lcm_key = lay.encode(lcm, ca, blk)
            ka, cc_a = basis.elems[a]
            kb, cc_b = basis.elems[b]
            sk, sc = bk.combine_terms(
                ka, cc_a, basis.lc_inv[a], lcm_key - basis.lead_key[a],
                kb, cc_b, p - basis.lc_inv[b], lcm_key - basis.lead_key[b], p,
            )
            rk, rc = basis.reduce(sk, sc, head_only=not slim)
        if rk.size == 0:
            continue
        if syz_mode and (int(rk[0]) >> lay.shift_block) == 0:
            side.append((rk, rc))
            continue
        inv = ring.field.inv(int(rc[0]))
        rc = rc * inv % p
        basis.add(rk, rc)
        if slim and kind == input_kind:
            inputs_out.append((rk, rc))
        push_pairs(len(basis) - 1)

    return basis.elems, side


def _buchberger_raw(
    vecs: list[tuple[np.ndarray, np.ndarray]],
    twists: Sequence[int],
    ring: RingSpec,
    degree_cap: int | None,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Canonical reduced basis of the submodule generated by vecs."""
    elems, _ = _buchberger_engine(vecs, twists, ring, degree_cap)
    return _autoreduce(elems, ring)


def _autoreduce(elems, ring: RingSpec) -> list[tuple[np.ndarray, np.ndarray]]:
    """Unique reduced basis: minimal leads, monic, fully tail-reduced."""
    lay = ring.layout
    elems = sorted(elems, key=lambda t: int(t[0][0]))
    kept: list[tuple[np.ndarray, np.ndarray]] = []
    info: list[tuple[int, tuple[int, ...]]] = []
    for k, c in elems:
        comp = lay.component(int(k[0]))
        exps = lay.exponents(int(k[0]))
        if any(
            kc == comp and all(x <= y for x, y in zip(ke, exps))
            for kc, ke in info
        ):
            continue
        kept.append((k, c))
        info.append((comp, exps))
    for i in range(len(kept)):
        flat = _FlatBasis(ring)
        for k, c in kept:
            flat.add(k, c)
        ki, ci = kept[i]
        tk, tc = flat.reduce(ki[1:], ci[1:])
        kept[i] = (
            np.concatenate([ki[:1], tk]),
            np.concatenate([ci[:1], tc]),
        )
    return kept


class GroebnerBasis:
    """Auto-reduced basis of a submodule, with fast normal forms."""

    __slots__ = ("ambient", "order", "vectors", "_flat")

    def __init__(self, ambient: FreeModule, vectors: tuple[Vector, ...]):
        self.ambient = ambient
        self.order = DEGREVLEX_TOP
        self.vectors = vectors
        flat = _FlatBasis(ambient.ring)
        for v in vectors:
            flat.add(v.keys, v.coeffs)
        self._flat = flat

    @property
    def generators(self) -> tuple[Vector, ...]:
        return self.vectors

    def __len__(self):
        return len(self.vectors)

    def reduce(self, v: Vector) -> Vector:
        k, c = self._flat.reduce(v.keys, v.coeffs)
        return Vector(self.ambient.ring, _frozen(k), _frozen(c))

    def signature(self) -> tuple:
        """Hashable content identity, used to detect saturation stabilizing."""
        return tuple(
            (v.keys.tobytes(), v.coeffs.tobytes()) for v in self.vectors
        )


def buchberger(
    gens: Sequence[Vector], ambient: FreeModule, degree_cap: int | None = None
) -> GroebnerBasis:
    for g in gens:
        if g.ring != ambient.ring:
            raise AmbientMismatch("generator over a different ring")
    raw = _buchberger_raw(
        [(g.keys, g.coeffs) for g in gens], ambient.twists, ambient.ring, degree_cap
    )
    vecs = tuple(Vector(ambient.ring, _frozen(k), _frozen(c)) for k, c in raw)
    return GroebnerBasis(ambient, vecs)


def normal_form(v: Vector, gb: GroebnerBasis) -> Vector:
    if v.ring != gb.ambient.ring:
        raise AmbientMismatch("vector over a different ring")
    if not v.is_zero() and int(v.components().max()) >= gb.ambient.rank:
        raise AmbientMismatch("vector outside the basis ambient")
    return gb.reduce(v)


def relations_gb(m: Presentation, degree_cap: int | None = None) -> GroebnerBasis:
    gb = m._cache.get("gb")
    if gb is None:
        gb = buchberger(m.relations, m.ambient, degree_cap)
        m._cache["gb"] = gb
    return gb


def is_zero_module(m: Presentation) -> bool:
    flag = m._cache.get("is_zero")
    if flag is None:
        gb = relations_gb(m)
        flag = all(
            gb.reduce(Vector.basis(m.ring, k)).is_zero() for k in range(m.ambient.rank)
        )
        m._cache["is_zero"] = flag
    return flag


def _elimination_syzygies(
    cols: list[Vector],
    free: FreeModule,
    gen_degrees: Sequence[int],
    degree_cap: int | None,
) -> list[Vector]:
    """Generators of the syzygy module of cols inside free."""
    ring = free.ring
    lay = ring.layout
    r0 = free.rank
    blockbit = 1 << lay.shift_block
    lifted = []
    for i, v in enumerate(cols):
        ek = lay.encode((0,) * ring.num_vars, r0 + i)
        keys = np.concatenate([v.keys + blockbit, np.array([ek], dtype=_I64)])
        coeffs = np.concatenate([v.coeffs, np.array([1], dtype=_I64)])
        lifted.append((keys, coeffs))
    twists_ext = tuple(free.twists) + tuple(gen_degrees)
    _, side = _buchberger_engine(lifted, twists_ext, ring, degree_cap, syz_mode=True)
    side = [(k + r0, c) for k, c in side]
    side = _slim_generators(side, tuple(gen_degrees), ring, degree_cap)
    return [Vector(ring, _frozen(k), _frozen(c)) for k, c in side]


def _slim_generators(
    raw: list[tuple[np.ndarray, np.ndarray]],
    twists: Sequence[int],
    ring: RingSpec,
    degree_cap: int | None,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Drop redundant members of a homogeneous generating set.

    Runs a degree-truncated basis completion (inputs streamed in degree
    order) and keeps only the inputs that do not reduce to zero when they
    arrive; those span the whole module by a triangular-substitution
    argument.  The raw Schreyer-style syzygy outputs grow quadratically
    step over step without this.
    """
    if len(raw) <= 1:
        return raw
    lay = ring.layout
    top = 0
    for k, _ in raw:
        lead = int(k[0])
        top = max(top, lay.mono_degree(lead) + twists[lay.component(lead)])
    kept: list[tuple[np.ndarray, np.ndarray]] = []
    _buchberger_engine(raw, twists, ring, degree_cap, truncate_at=top,
                       inputs_out=kept)
    return kept


def syzygies(
    free: FreeModule, gens: Sequence[Vector], degree_cap: int | None = None
) -> tuple[FreeModule, list[Vector]]:
    """First syzygies of gens; returned in a free module twisted by their degrees."""
    degrees = []
    for col, g in enumerate(gens):
        d = free.degree_of(g, col)
        if d is None:
            raise AmbientMismatch(f"generator {col} is zero; drop it before syzygies")
        degrees.append(d)
    syz = _elimination_syzygies(list(gens), free, degrees, degree_cap)
    return FreeModule(free.ring, tuple(degrees)), syz


def kernel_gens(
    cols: Sequence[Vector],
    dom: FreeModule,
    target: Presentation,
    degree_cap: int | None = None,
) -> list[Vector]:
    """Generators of {v in dom : (cols applied to v) lies in span(relations)}.

    cols[c] is the image in target.ambient of the c-th basis vector of dom;
    the map must be homogeneous of degree zero.
    """
    for c, v in enumerate(cols):
        d = target.ambient.degree_of(v, c)
        if d is not None and d != dom.twists[c]:
            raise AmbientMismatch(
                f"column {c} has degree {d}, expected twist {dom.twists[c]}"
            )
    rel = list(target.relations)
    degrees = list(dom.twists) + [target.ambient.degree_of(r) for r in rel]
    syz = _elimination_syzygies(list(cols) + rel, target.ambient, degrees, degree_cap)
    m1 = len(cols)
    out = []
    for s in syz:
        comps = s.components()
        sel = comps < m1
        if not sel.any():
            continue
        out.append((s.keys[sel], s.coeffs[sel].copy()))
    # replace the raw projections by their reduced basis: same span,
    # canonical and usually much smaller
    ring = target.ring
    slim = _buchberger_raw(out, dom.twists, ring, degree_cap)
    return [Vector(ring, _frozen(k), _frozen(c)) for k, c in slim]


def submodule_presentation(
    m: Presentation, gens: Sequence[Vector], degree_cap: int | None = None
) -> Presentation:
    """The submodule of m generated by the images of gens, as a Presentation."""
    gb = relations_gb(m)
    kept = [g for g in gens if not gb.reduce(g).is_zero()]
    degrees = tuple(m.ambient.degree_of(g) for g in kept)
    free = FreeModule(m.ring, degrees)
    rels = kernel_gens(kept, free, m, degree_cap)
    return Presentation(free, tuple(rels))


def kernel_of_map(
    cols: Sequence[Vector],
    domain: Presentation,
    target: Presentation,
    degree_cap: int | None = None,
) -> tuple[list[Vector], Presentation]:
    """Kernel of the induced map domain -> target.

    cols give the images of domain's ambient basis.  Returns generators of
    the kernel (as vectors in domain's ambient) and its Presentation.
    """
    if len(cols) != domain.ambient.rank:
        raise AmbientMismatch("one column per domain basis vector required")
    u = kernel_gens(cols, domain.ambient, target, degree_cap)
    return u, submodule_presentation(domain, u, degree_cap)


def _colon_by_monomials(
    ugens: Sequence[Vector], free: FreeModule, power: int,
    degree_cap: int | None = None,
) -> list[Vector]:
    """{v in free : m*v in span(ugens) for every degree-`power` monomial m}."""
    ring = free.ring
    r0 = free.rank
    monos = list(monomials_of_degree(ring.num_vars, power))
    t = len(monos)
    block_twists = []
    block_rels = []
    for ti, mono in enumerate(monos):
        block_twists.extend(a - power for a in free.twists)
        shift = np.int64(ti * r0)
        for u in ugens:
            block_rels.append(Vector(ring, _frozen(u.keys - shift), u.coeffs))
    target = Presentation(FreeModule(ring, tuple(block_twists)), tuple(block_rels))
    lay = ring.layout
    cols = []
    for c in range(r0):
        keys = np.array(
            [lay.encode(mono, ti * r0 + c) for ti, mono in enumerate(monos)],
            dtype=_I64,
        )
        coeffs = np.ones(t, dtype=_I64)
        order = np.argsort(-keys)
        cols.append(Vector(ring, _frozen(keys[order]), _frozen(coeffs[order])))
    return kernel_gens(cols, free, target, degree_cap)


def saturation_generators(
    m: Presentation, degree_cap: int | None = None
) -> list[Vector]:
    """Reduced basis of the stabilized union of (relations : (R_+)^k).

    Its image in m is H^0 with respect to the irrelevant ideal.  Each round
    takes one colon by the variables, so round k holds (0 : (R_+)^k); the
    loop stops when two successive reduced bases agree.  (Stacking all
    degree-k monomials to double the exponent per round costs far more per
    kernel than the handful of extra rounds saves at desk scale.)
    """
    cached = m._cache.get("sat_gens")
    if cached is not None:
        return cached
    free = m.ambient
    prev = relations_gb(m, degree_cap)
    for _ in range(64):
        gens = _colon_by_monomials(prev.vectors, free, 1, degree_cap)
        cur = buchberger(list(prev.vectors) + gens, free, degree_cap)
        if cur.signature() == prev.signature():
            out = list(cur.vectors)
            m._cache["sat_gens"] = out
            return out
        prev = cur
    raise CmregError("saturation did not stabilize")  # pragma: no cover


def h0_submodule(m: Presentation, degree_cap: int | None = None) -> Presentation:
    """H^0 of m for the irrelevant ideal: the (0 : (R_+)^infinity) submodule."""
    return submodule_presentation(m, saturation_generators(m, degree_cap), degree_cap)
