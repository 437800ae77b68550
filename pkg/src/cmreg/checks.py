"""Theorem checkers: each evaluates its hypotheses on a concrete instance,
asserts the concluded inequality only when they hold, and returns a
structured CheckReport.  HYPOTHESIS_NOT_MET is a first-class verdict,
never folded into HOLDS.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CmregError, NotFilterRegular, ZeroModule
from .groebner import is_zero_module, submodule_presentation
from .hilbert import (
    hilbert_function,
    hilbert_polynomial,
    krull_dim,
    postulation_number,
)
from .homology import (
    ChainComplex,
    IndexSet,
    boundaries_at,
    cycles_at,
    ext_module,
    depth_and_cm_test,
    homology_at,
    local_cohomology_profile,
    min_gen_degrees,
    partial_regularity,
    regularity_from_betti,
    tensor_product,
    tor,
)
from .reglab import (
    RestrictionChain,
    is_filter_regular,
    random_filter_regular_sequence,
    regularity_conca_recursive,
    regularity_postulation,
    regularity_sat_formula,
    restrict,
)
from .ring import NEG_INF, FreeModule, Polynomial, Presentation, Vector

HOLDS = "HOLDS"
HYPOTHESIS_NOT_MET = "HYPOTHESIS_NOT_MET"
VIOLATED = "VIOLATED"


def fmt_value(v):
    """JSON-safe rendering: NEG_INF becomes the string '-inf'."""
    return "-inf" if v == NEG_INF else int(v)


def _plus(a, b):
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    instance_id: str
    verdict: str
    hypotheses: tuple[tuple[str, str, bool], ...] = ()
    quantities: tuple[tuple[str, object], ...] = ()
    notes: tuple[str, ...] = ()
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "check": self.check_name,
            "instance": self.instance_id,
            "verdict": self.verdict,
            "hypotheses": [list(h) for h in self.hypotheses],
            "quantities": {k: fmt_value(v) for k, v in self.quantities},
            "notes": list(self.notes),
            "witness": self.witness,
        }

    def with_witness(self, payload: dict) -> "CheckReport":
        return CheckReport(
            self.check_name, self.instance_id, self.verdict,
            self.hypotheses, self.quantities, self.notes, payload,
        )


def check_serre_formula(m: Presentation, window: tuple[int, int] | None = None,
                        instance_id: str = "") -> CheckReport:
    """H(i) - P(i) = alternating sum of local cohomology dimensions, exactly."""
    name = "serre"
    if is_zero_module(m):
        return CheckReport(name, instance_id, HOLDS,
                           notes=("zero module: identity is 0 = 0",))
    alpha = postulation_number(m)
    if window is None:
        window = (int(alpha) - 4, int(alpha) + 3)
    poly = hilbert_polynomial(m)
    prof = local_cohomology_profile(m)
    n = m.ring.num_vars
    quantities = [("alpha", alpha), ("window_lo", window[0]), ("window_hi", window[1])]
    for i in range(window[0], window[1] + 1):
        pv = poly(i)
        if pv.denominator != 1:
            return CheckReport(name, instance_id, VIOLATED, quantities=tuple(quantities),
                               notes=(f"Hilbert polynomial non-integral at {i}",))
        lhs = hilbert_function(m, i) - int(pv)
        rhs = sum((-1) ** j * prof.dim(j, i) for j in range(n + 1))
        if lhs != rhs:
            quantities += [("degree", i), ("lhs", lhs), ("rhs", rhs)]
            return CheckReport(name, instance_id, VIOLATED, quantities=tuple(quantities))
    return CheckReport(name, instance_id, HOLDS, quantities=tuple(quantities))


def check_tensor_bound(m: Presentation, n_mod: Presentation, a: int = 0,
                       instance_id: str = "") -> CheckReport:
    """Tensor regularity bound over the index set {a, ..., n}.

    For a = 0 the hypothesis is dim Tor_1 <= 1 (rigidity covers the rest);
    for a > 0 each Tor_i must have dimension at most min(a + i, n).
    """
    name = "tensor"
    nv = m.ring.num_vars
    x = IndexSet.of(range(a, nv + 1), nv)
    hyps = []
    ok = True
    if a == 0:
        d1 = krull_dim(tor(m, n_mod, 1))
        sat = d1 <= 1
        hyps.append(("dim Tor_1 <= 1", f"dim Tor_1 = {d1}", sat))
        ok = sat
        notes = ("rigidity: dim Tor_1 <= 1 propagates to all higher Tor",)
    else:
        notes = ()
        for i in range(1, nv + 1):
            di = krull_dim(tor(m, n_mod, i))
            bound = min(a + i, nv)
            sat = di <= bound
            hyps.append((f"dim Tor_{i} <= {bound}", f"dim Tor_{i} = {di}", sat))
            ok = ok and sat
    reg_m = partial_regularity(m, IndexSet.full(nv))
    preg_n = partial_regularity(n_mod, x)
    quantities = [("reg_m", reg_m), ("preg_n", preg_n), ("a", a)]
    if not ok:
        return CheckReport(name, instance_id, HYPOTHESIS_NOT_MET,
                           tuple(hyps), tuple(quantities), notes)
    t = tensor_product(m, n_mod)
    lhs = partial_regularity(t, x)
    rhs = _plus(reg_m, preg_n)
    quantities += [("preg_tensor", lhs), ("bound", rhs)]
    verdict = HOLDS if lhs <= rhs else VIOLATED
    return CheckReport(name, instance_id, verdict, tuple(hyps), tuple(quantities), notes)


def check_ideal_module_bound(gens: list[Polynomial], m: Presentation,
                             instance_id: str = "") -> CheckReport:
    """reg(I m) <= reg(I) + reg(m) under dim Tor_1(m, R/I) <= 1.

    Also exercises reg(R/I) = reg(I) - 1 and, when dim R/I <= 1, that the
    Tor hypothesis is implied (both hard identities: failures are VIOLATED).
    """
    name = "im"
    ring = m.ring
    if not gens:
        raise CmregError("the ideal needs at least one generator")
    for g in gens:
        if g.is_zero() or not g.is_homogeneous() or g.degree() < 1:
            raise CmregError("ideal generators must be homogeneous of positive degree")
    r_free = Presentation(FreeModule(ring, (0,)), ())
    ri = Presentation(FreeModule(ring, (0,)), tuple(g.as_vector() for g in gens))
    i_mod = submodule_presentation(r_free, [g.as_vector() for g in gens])
    reg_i = regularity_from_betti(i_mod)
    reg_ri = regularity_from_betti(ri)
    reg_m = regularity_from_betti(m)
    dim_ri = krull_dim(ri)
    d1 = krull_dim(tor(m, ri, 1))
    hyp = d1 <= 1
    hyps = [("dim Tor_1(M, R/I) <= 1", f"dim Tor_1 = {d1}", hyp)]
    quantities = [("reg_I", reg_i), ("reg_RI", reg_ri), ("reg_M", reg_m),
                  ("dim_RI", dim_ri), ("dim_tor1", d1)]
    notes = []
    if not is_zero_module(i_mod) and reg_ri != _plus(reg_i, -1):
        return CheckReport(name, instance_id, VIOLATED, tuple(hyps), tuple(quantities),
                           ("reg(R/I) = reg(I) - 1 failed",))
    if dim_ri <= 1 and not hyp:
        return CheckReport(name, instance_id, VIOLATED, tuple(hyps), tuple(quantities),
                           ("dim R/I <= 1 must imply dim Tor_1 <= 1",))
    if dim_ri <= 1:
        notes.append("dim R/I <= 1: Tor hypothesis implied and confirmed")
    if not hyp:
        return CheckReport(name, instance_id, HYPOTHESIS_NOT_MET,
                           tuple(hyps), tuple(quantities), tuple(notes))
    im_gens = [g * Vector.basis(ring, k) for g in gens for k in range(m.ambient.rank)]
    im = submodule_presentation(m, im_gens)
    reg_im = regularity_from_betti(im)
    bound = _plus(reg_i, reg_m)
    quantities += [("reg_IM", reg_im), ("bound", bound)]
    verdict = HOLDS if reg_im <= bound else VIOLATED
    return CheckReport(name, instance_id, verdict, tuple(hyps), tuple(quantities),
                       tuple(notes))


def check_hom_bound(m: Presentation, n_mod: Presentation,
                    instance_id: str = "") -> CheckReport:
    """reg Hom(m, n) <= reg(n) - (lowest minimal generator degree of m).

    Gate: every Ext^i(m, n) with i > 0 is zero or Cohen-Macaulay of the
    maximal possible dimension n - i, i.e. depth Ext^i >= n - i.  Plain
    Cohen-Macaulayness of a lower-dimensional Ext is not enough for the
    vanishing the bound rests on, so it does not open the gate.
    """
    name = "hom"
    if is_zero_module(m):
        raise ZeroModule("hom bound needs a nonzero first argument")
    nv = m.ring.num_vars
    mgen = min(min_gen_degrees(m))
    hyps = []
    ok = True
    from .homology import hom_module  # local import keeps module init cheap

    for i in range(1, nv + 1):
        e = ext_module(m, n_mod, i)
        if is_zero_module(e):
            hyps.append((f"Ext^{i} CM of dim {nv - i}", "zero (vacuous)", True))
            continue
        depth, cm = depth_and_cm_test(e)
        sat = depth >= nv - i
        hyps.append((
            f"Ext^{i} CM of dim {nv - i}",
            f"depth {depth}, dim {krull_dim(e)}, CM {cm}",
            sat,
        ))
        ok = ok and sat
    reg_n = regularity_from_betti(n_mod)
    quantities = [("min_gen_degree", mgen), ("reg_n", reg_n)]
    if not ok:
        return CheckReport(name, instance_id, HYPOTHESIS_NOT_MET,
                           tuple(hyps), tuple(quantities))
    h = hom_module(m, n_mod)
    lhs = regularity_from_betti(h)
    rhs = _plus(reg_n, -mgen)
    quantities += [("reg_hom", lhs), ("bound", rhs)]
    verdict = HOLDS if lhs <= rhs else VIOLATED
    return CheckReport(name, instance_id, verdict, tuple(hyps), tuple(quantities))


def check_prop_almost(m: Presentation, l: Polynomial, x: IndexSet,
                      instance_id: str = "") -> CheckReport:
    """Both restriction inequalities for a certified filter-regular form."""
    name = "almost"
    cert = is_filter_regular(l, m)
    if not cert.verdict:
        raise NotFilterRegular(f"{l} is not filter-regular on the module")
    d = l.degree()
    ml = restrict(m, l)
    x1 = x.shifted(1)
    xu = x.union(x1)
    lhs1 = partial_regularity(m, x1)
    rhs1 = _plus(partial_regularity(ml, xu), 1 - d)
    lhs2 = _plus(partial_regularity(ml, x), 1 - d)
    rhs2 = partial_regularity(m, xu)
    hyps = [("l filter-regular", f"deg {d}, kernel dim {krull_dim(cert.witness)}", True)]
    quantities = [
        ("D", d),
        ("preg_M_X1", lhs1), ("preg_MlM_XU_corr", rhs1),
        ("preg_MlM_X_corr", lhs2), ("preg_M_XU", rhs2),
    ]
    notes = []
    if len(x) == 0:
        notes.append("empty index set: both inequalities vacuous")
    ok = lhs1 <= rhs1 and lhs2 <= rhs2
    return CheckReport(name, instance_id, HOLDS if ok else VIOLATED,
                       tuple(hyps), tuple(quantities), tuple(notes))


def verify_complex_lemma(cx: ChainComplex, m: int, x: IndexSet,
                         instance_id: str = "") -> CheckReport:
    """Boundary/cycle regularity conclusions for a finite complex.

    Both directions are evaluated: the descending form bounds boundaries
    and H_0, the ascending form bounds cycles and the top homology; each is
    gated on its own hypotheses about the terms and interior homologies.
    """
    name = "complex"
    cx.check_complex()
    ln = cx.length
    homs = [homology_at(cx, i) for i in range(ln + 1)]
    hyps = []
    notes = []

    def preg(mod, xs):
        if len(xs) == 0:
            return NEG_INF
        return partial_regularity(mod, xs)

    fwd_ok = True
    for i in range(1, ln + 1):
        xi = x.shifted(i)
        if len(xi) == 0:
            notes.append(f"index set X+{i} empty: condition vacuous")
        v = preg(cx.modules[i], xi)
        sat = v <= m + i
        hyps.append((f"C_{i} ({m + i})-reg over X+{i}", f"preg = {fmt_value(v)}", sat))
        fwd_ok = fwd_ok and sat
        xi1 = x.shifted(i + 1)
        v = preg(homs[i], xi1)
        sat = v <= m + i + 1
        hyps.append((f"H_{i} ({m + i + 1})-reg over X+{i + 1}", f"preg = {fmt_value(v)}", sat))
        fwd_ok = fwd_ok and sat
    c0_val = preg(cx.modules[0], x)
    c0_ok = c0_val <= m
    hyps.append((f"C_0 {m}-reg over X", f"preg = {fmt_value(c0_val)}", c0_ok))

    prm_ok = True
    for i in range(0, ln + 1):
        xi = x.shifted(-i)
        v = preg(cx.modules[ln - i], xi)
        sat = v <= m - i
        hyps.append((f"C_{ln - i} ({m - i})-reg over X-{i}", f"preg = {fmt_value(v)}", sat))
        prm_ok = prm_ok and sat
    for i in range(1, ln + 1):
        xi = x.shifted(-i - 1)
        v = preg(homs[ln - i], xi)
        sat = v <= m - i - 1
        hyps.append(
            (f"H_{ln - i} ({m - i - 1})-reg over X-{i + 1}", f"preg = {fmt_value(v)}", sat)
        )
        prm_ok = prm_ok and sat

    quantities = [("length", ln), ("m", m)]
    failures = []
    if fwd_ok:
        for i in range(ln + 1):
            b = boundaries_at(cx, i)
            v = preg(b, x.shifted(i + 1))
            quantities.append((f"preg_B{i}", v))
            if v > m + i + 1:
                failures.append(f"boundary B_{i} exceeds {m + i + 1}")
        if c0_ok:
            v = preg(homs[0], x)
            quantities.append(("preg_H0", v))
            if v > m:
                failures.append(f"H_0 exceeds {m}")
    if prm_ok:
        for i in range(ln + 1):
            z = cycles_at(cx, ln - i)
            v = preg(z, x.shifted(-i))
            quantities.append((f"preg_Z{ln - i}", v))
            if v > m - i:
                failures.append(f"cycles Z_{ln - i} exceed {m - i}")
        v = preg(homs[ln], x)
        quantities.append((f"preg_H{ln}", v))
        if v > m:
            failures.append(f"H_{ln} exceeds {m}")
    if not fwd_ok and not prm_ok:
        return CheckReport(name, instance_id, HYPOTHESIS_NOT_MET,
                           tuple(hyps), tuple(quantities), tuple(notes))
    verdict = VIOLATED if failures else HOLDS
    return CheckReport(name, instance_id, verdict, tuple(hyps), tuple(quantities),
                       tuple(notes) + tuple(failures))


def check_regularity_routes(m: Presentation, chain: RestrictionChain, seed: int,
                            instance_id: str = "") -> CheckReport:
    """All three chain formulas against the Betti-table oracle, exactly."""
    name = "postulation"
    rb = regularity_from_betti(m)
    rp = regularity_postulation(m, chain)
    rs = regularity_sat_formula(m, chain)
    rc = regularity_conca_recursive(m, seed)
    quantities = [
        ("reg_betti", rb), ("reg_postulation", rp),
        ("reg_sat", rs), ("reg_conca", rc),
        ("dim", krull_dim(m)),
    ]
    hyps = [("chain certified", f"degrees {list(chain.degrees)}", True)]
    ok = rp == rb and rs == rb and rc == rb
    notes = () if ok else ("a chain route disagrees with the Betti oracle",)
    return CheckReport(name, instance_id, HOLDS if ok else VIOLATED,
                       tuple(hyps), tuple(quantities), notes)


def check_chain_independence(m: Presentation, seed: int,
                             instance_id: str = "") -> CheckReport:
    """Two chains, different seeds and degree vectors, same value."""
    name = "indep"
    d = max(krull_dim(m), 0)
    degs_a = [1] * d
    degs_b = ([2] + [1] * (d - 1)) if d >= 1 else []
    chain_a = random_filter_regular_sequence(m, degs_a, 2 * seed + 1)
    chain_b = random_filter_regular_sequence(m, degs_b, 2 * seed + 2)
    va = regularity_postulation(m, chain_a)
    vb = regularity_postulation(m, chain_b)
    rb = regularity_from_betti(m)
    quantities = [("value_a", va), ("value_b", vb), ("reg_betti", rb), ("dim", d)]
    hyps = [
        ("chain A certified", f"degrees {degs_a}", True),
        ("chain B certified", f"degrees {degs_b}", True),
    ]
    ok = va == vb
    return CheckReport(name, instance_id, HOLDS if ok else VIOLATED,
                       tuple(hyps), tuple(quantities))
