"""Filter-regular elements and sequences, hyperplane restriction, and the
three regularity formulas: postulation numbers along a filter-regular
chain, the saturation-index variant, and the recursive single-restriction
formula.

Random forms are drawn from numpy SeedSequence streams keyed by
(seed, slot, attempt), so chains are reproducible and independent slots
never share draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CmregError, RetriesExhausted, ZeroElement, ZeroModule
from .groebner import (
    h0_submodule,
    is_zero_module,
    kernel_of_map,
    saturation_generators,
)
from .hilbert import hilbert_series, krull_dim, postulation_number
from .ring import (
    NEG_INF,
    Polynomial,
    Presentation,
    RingSpec,
    Vector,
    make_presentation,
    monomials_of_degree,
    twist,
)

MAX_RETRIES = 50


@dataclass(frozen=True)
class FilterRegularCertificate:
    """Verdict plus witness kernel for multiplication by an element.

    verdict is true exactly when the kernel of l : M(-D) -> M has finite
    length, i.e. multiplication is injective in all large degrees.
    """

    element: Polynomial
    verdict: bool
    witness: Presentation
    retries_used: int = 0


def is_filter_regular(l: Polynomial, m: Presentation) -> FilterRegularCertificate:
    if is_zero_module(m):
        raise ZeroModule("filter-regularity is tested on nonzero modules")
    if l.is_zero():
        raise ZeroElement("the zero form is never filter-regular")
    if not l.is_homogeneous() or l.degree() < 1:
        raise CmregError("need a homogeneous form of positive degree")
    d = l.degree()
    dom = twist(m, d)
    cols = [l * Vector.basis(m.ring, k) for k in range(m.ambient.rank)]
    _, ker = kernel_of_map(cols, dom, m)
    return FilterRegularCertificate(l, krull_dim(ker) <= 0, ker)


def restrict(m: Presentation, l: Polynomial) -> Presentation:
    """The quotient m / l*m."""
    if not l.is_homogeneous() or l.is_zero() or l.degree() < 1:
        raise CmregError("restriction needs a homogeneous form of positive degree")
    extra = tuple(l * Vector.basis(m.ring, k) for k in range(m.ambient.rank))
    return make_presentation(m.ambient, m.relations + extra)


def sat_index(m: Presentation):
    """Top nonzero degree of H^0 for the irrelevant ideal; NEG_INF if zero."""
    h0 = h0_submodule(m)
    hs = hilbert_series(h0)
    if not hs.numerator:
        return NEG_INF
    return hs.numerator[-1][0]


def quotient_by_h0(m: Presentation) -> Presentation:
    """m / H^0(m), presented on the same ambient."""
    return Presentation(m.ambient, m.relations + tuple(saturation_generators(m)))


def random_homogeneous_form(
    ring: RingSpec, degree: int, rng: np.random.Generator
) -> Polynomial:
    """Uniform nonzero homogeneous form of the given degree."""
    monos = list(monomials_of_degree(ring.num_vars, degree))
    while True:
        coeffs = rng.integers(0, ring.p, size=len(monos))
        if coeffs.any():
            return Polynomial.from_terms(
                ring, {m: int(c) for m, c in zip(monos, coeffs) if c}
            )


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


@dataclass(frozen=True)
class RestrictionChain:
    """M, M/l_1, M/(l_1,l_2), ... with certified filter-regular forms.

    alphas and sat_indices always have one entry per expected restriction
    (len(degrees) + 1); when a restriction vanishes early the chain
    truncates and the remaining entries are NEG_INF.
    """

    modules: tuple[Presentation, ...]
    elements: tuple[Polynomial, ...]
    degrees: tuple[int, ...]
    alphas: tuple
    sat_indices: tuple
    certificates: tuple[FilterRegularCertificate, ...]


def random_filter_regular_sequence(
    m: Presentation, degrees, seed: int, max_retries: int = MAX_RETRIES
) -> RestrictionChain:
    """Draw and certify a filter-regular sequence of the given degrees.

    Requires len(degrees) == dim(m) in the standard path (dim <= 0 means
    an empty degree list).  Each slot retries fresh draws; RetriesExhausted
    signals a degenerate module or a field too small.
    """
    degrees = tuple(degrees)
    d = krull_dim(m)
    if len(degrees) != max(d, 0):
        raise CmregError(
            f"chain needs exactly dim(M)={max(d, 0)} forms, got {len(degrees)}"
        )
    modules = [m]
    elements: list[Polynomial] = []
    certs: list[FilterRegularCertificate] = []
    cur = m
    for slot, deg in enumerate(degrees):
        if is_zero_module(cur):
            break
        found = None
        for attempt in range(max_retries):
            l = random_homogeneous_form(m.ring, deg, _stream(seed, slot, attempt))
            cert = is_filter_regular(l, cur)
            if cert.verdict:
                found = FilterRegularCertificate(l, True, cert.witness, attempt)
                break
        if found is None:
            raise RetriesExhausted(
                f"no filter-regular form of degree {deg} found in {max_retries} draws"
            )
        certs.append(found)
        elements.append(found.element)
        cur = restrict(cur, found.element)
        modules.append(cur)
    want = len(degrees) + 1
    alphas = [postulation_number(mod) for mod in modules]
    sats = [sat_index(mod) for mod in modules]
    alphas += [NEG_INF] * (want - len(alphas))
    sats += [NEG_INF] * (want - len(sats))
    return RestrictionChain(
        tuple(modules), tuple(elements), degrees,
        tuple(alphas), tuple(sats), tuple(certs),
    )


def _chain_maximum(values, degrees):
    best = NEG_INF
    offset = 0
    for i, v in enumerate(values):
        if i > 0:
            offset += degrees[i - 1] - 1
        if v != NEG_INF:
            best = max(best, v - offset)
    return best


def regularity_postulation(m: Presentation, chain: RestrictionChain):
    """max_i (postulation number of the i-th restriction, degree-corrected)."""
    if chain.modules[0] is not m:
        raise CmregError("chain was built for a different module")
    return _chain_maximum(chain.alphas, chain.degrees)


def regularity_sat_formula(m: Presentation, chain: RestrictionChain):
    """Same maximum with saturation indices in place of postulation numbers."""
    if chain.modules[0] is not m:
        raise CmregError("chain was built for a different module")
    return _chain_maximum(chain.sat_indices, chain.degrees)


def regularity_conca_recursive(
    m: Presentation, seed: int, form_degree: int = 1,
    max_retries: int = MAX_RETRIES, _level: int = 0,
):
    """Recursive route: max(sat index, recurse on a single restriction).

    Base case is any module of dimension <= 0, where the saturation index
    is the whole answer.
    """
    if krull_dim(m) <= 0:
        return sat_index(m)
    found = None
    for attempt in range(max_retries):
        l = random_homogeneous_form(
            m.ring, form_degree, _stream(seed, 1000 + _level, attempt)
        )
        cert = is_filter_regular(l, m)
        if cert.verdict:
            found = l
            break
    if found is None:
        raise RetriesExhausted("no filter-regular form found for the recursion")
    rec = regularity_conca_recursive(
        restrict(m, found), seed, form_degree, max_retries, _level + 1
    )
    sub = NEG_INF if rec == NEG_INF else rec - form_degree + 1
    return max(sat_index(m), sub)
