"""Command-line surface: inspection commands over corpus files, randomized
theorem checking with structured reports, and witness replay.

Machine-readable records (one JSON object per line) go to stdout; the
human summary goes to stderr.  Exit codes: 0 all HOLDS/HYPOTHESIS_NOT_MET,
1 any VIOLATED, 2 parse/usage error, 3 degree cap or retry budget hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .checks import (
    VIOLATED,
    CheckReport,
    check_chain_independence,
    check_hom_bound,
    check_ideal_module_bound,
    check_prop_almost,
    check_regularity_routes,
    check_serre_formula,
    check_tensor_bound,
    verify_complex_lemma,
)
from .corpus import (
    Recipe,
    generate_instance,
    parse_corpus,
    parse_polynomial,
    random_hom_pair,
    random_ideal_gens,
    random_module,
    seeded_stream,
    serialize_corpus,
)
from .errors import (
    CmregError,
    CorpusParseError,
    DegreeLimitExceeded,
    RetriesExhausted,
)
from .hilbert import hilbert_function, hilbert_series, krull_dim, postulation_number
from .homology import (
    IndexSet,
    betti_table,
    koszul_complex,
    local_cohomology_profile,
    regularity_from_betti,
    tensor_complex,
)
from .reglab import (
    is_filter_regular,
    random_filter_regular_sequence,
    random_homogeneous_form,
    regularity_conca_recursive,
    regularity_postulation,
    regularity_sat_formula,
)
from .ring import NEG_INF, FreeModule, Polynomial, Presentation

CHECK_KINDS = ("serre", "tensor", "im", "hom", "almost", "postulation", "indep", "complex")


def _fmt(v):
    return "-inf" if v == NEG_INF else str(int(v))


def _default_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CMREG_SEED")
    return int(env) if env else 1


def _recipe(args) -> Recipe:
    return Recipe(
        kind=args.kind, num_vars=args.vars, max_gens=args.max_gens,
        max_degree=args.max_degree, p=args.p,
    )


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CorpusParseError(0, 0, f"cannot read {path}: {exc}")
    return parse_corpus(text)


def cmd_hilbert(args) -> int:
    _, modules = _load(args.file)
    for name, m in modules.items():
        hs = hilbert_series(m)
        hvals = ",".join(str(hilbert_function(m, i)) for i in range(0, 9))
        print(f"{name}: series={hs} dim={krull_dim(m)} "
              f"alpha={_fmt(postulation_number(m))} H[0..8]={hvals}")
    return 0


def cmd_betti(args) -> int:
    _, modules = _load(args.file)
    for name, m in modules.items():
        print(f"{name}: {betti_table(m)} reg={_fmt(regularity_from_betti(m))}")
    return 0


def cmd_reg(args) -> int:
    _, modules = _load(args.file)
    seed = _default_seed(args)
    routes = args.route or ["betti"]
    for name, m in modules.items():
        for route in routes:
            if route == "betti":
                val = regularity_from_betti(m)
            elif route == "postulation" or route == "sat":
                d = max(krull_dim(m), 0)
                chain = random_filter_regular_sequence(m, [1] * d, seed)
                val = (regularity_postulation(m, chain) if route == "postulation"
                       else regularity_sat_formula(m, chain))
            elif route == "conca":
                val = regularity_conca_recursive(m, seed)
            else:
                raise CorpusParseError(0, 0, f"unknown route {route!r}")
            print(f"{name} {route} {_fmt(val)}")
    return 0


def cmd_lc_profile(args) -> int:
    _, modules = _load(args.file)
    for name, m in modules.items():
        prof = local_cohomology_profile(m)
        tops = " ".join(f"H^{j}:{_fmt(t)}" for j, t in enumerate(prof.top_degree))
        print(f"{name}: {tops} reg={_fmt(prof.regularity())}")
    return 0


def cmd_gen(args) -> int:
    recipe = _recipe(args)
    names = tuple(f"M{i}" for i in range(args.count)) if args.count > 1 else ("M",)
    inst = generate_instance(recipe, _default_seed(args), names)
    sys.stdout.write(inst.serialize())
    return 0


# ---------------------------------------------------------------------------
# check driver

def _emit(report: CheckReport, counts: dict) -> None:
    rec = json.dumps(report.to_dict(), sort_keys=True, separators=(",", ":"))
    sys.stdout.write(rec + "\n")
    counts[report.verdict] = counts.get(report.verdict, 0) + 1
    sys.stderr.write(f"[{report.verdict}] {report.instance_id}\n")


def _witness_payload(kind: str, instance_id: str, seed: int, recipe: Recipe,
                     modules: dict[str, Presentation], extra: dict) -> dict:
    ring = next(iter(modules.values())).ring if modules else recipe.ring()
    return {
        "check": kind,
        "instance": instance_id,
        "seed": seed,
        "recipe": recipe.to_dict(),
        "corpus": serialize_corpus(ring, modules),
        "extra": extra,
    }


def _draw_filter_regular(m, degree, seed, tag):
    for attempt in range(50):
        l = random_homogeneous_form(m.ring, degree, seeded_stream(seed, tag, attempt))
        if is_filter_regular(l, m).verdict:
            return l
    raise RetriesExhausted(f"no filter-regular form of degree {degree} found")


def run_one_check(kind: str, iseed: int, k: int, recipe: Recipe, a: int,
                  instance_id: str) -> tuple[CheckReport, dict]:
    """Build the instance for one check and run it; returns (report, witness)."""
    ring = recipe.ring()
    nv = recipe.num_vars
    if kind == "serre":
        m = random_module(recipe, seeded_stream(iseed, 7, 0), ring)
        rep = check_serre_formula(m, instance_id=instance_id)
        wit = _witness_payload(kind, instance_id, iseed, recipe, {"M": m}, {})
    elif kind == "tensor":
        m = random_module(recipe, seeded_stream(iseed, 7, 0), ring)
        n = random_module(recipe, seeded_stream(iseed, 7, 1), ring)
        rep = check_tensor_bound(m, n, a, instance_id=instance_id)
        wit = _witness_payload(kind, instance_id, iseed, recipe,
                               {"M": m, "N": n}, {"a": a})
    elif kind == "im":
        gens = random_ideal_gens(recipe, seeded_stream(iseed, 7, 0), ring)
        m = random_module(recipe, seeded_stream(iseed, 7, 1), ring)
        ri = Presentation(FreeModule(ring, (0,)), tuple(g.as_vector() for g in gens))
        rep = check_ideal_module_bound(gens, m, instance_id=instance_id)
        wit = _witness_payload(kind, instance_id, iseed, recipe,
                               {"RI": ri, "M": m}, {})
    elif kind == "hom":
        m, n = random_hom_pair(
            recipe, seeded_stream(iseed, 7, 0), seeded_stream(iseed, 7, 1), ring
        )
        rep = check_hom_bound(m, n, instance_id=instance_id)
        wit = _witness_payload(kind, instance_id, iseed, recipe, {"M": m, "N": n}, {})
    elif kind == "almost":
        m = random_module(recipe, seeded_stream(iseed, 7, 0), ring)
        degree = 2 if k % 3 == 2 else 1
        l = _draw_filter_regular(m, degree, iseed, 3)
        rng = seeded_stream(iseed, 4)
        idxs = [j for j in range(nv + 1) if rng.random() < 0.6]
        x = IndexSet.of(idxs, nv)
        rep = check_prop_almost(m, l, x, instance_id=instance_id)
        wit = _witness_payload(kind, instance_id, iseed, recipe, {"M": m},
                               {"l": str(l), "X": sorted(x.indices)})
    elif kind == "postulation":
        m = random_module(recipe, seeded_stream(iseed, 7, 0), ring)
        d = max(krull_dim(m), 0)
        degs = [1] * d
        if d >= 1 and k % 4 == 0:
            degs[0] = 2
        chain = random_filter_regular_sequence(m, degs, iseed)
        rep = check_regularity_routes(m, chain, iseed, instance_id=instance_id)
        wit = _witness_payload(kind, instance_id, iseed, recipe, {"M": m},
                               {"degrees": degs})
    elif kind == "indep":
        m = random_module(recipe, seeded_stream(iseed, 7, 0), ring)
        rep = check_chain_independence(m, iseed, instance_id=instance_id)
        wit = _witness_payload(kind, instance_id, iseed, recipe, {"M": m}, {})
    elif kind == "complex":
        m = random_module(recipe, seeded_stream(iseed, 7, 0), ring)
        rng = seeded_stream(iseed, 5)
        if k % 5 == 4:
            n = random_module(recipe, seeded_stream(iseed, 7, 1), ring)
            cx = tensor_complex(m, n)
            x = IndexSet.full(nv)
            base_a = regularity_from_betti(m)
            base_b = regularity_from_betti(n)
            mm = (0 if base_a == NEG_INF or base_b == NEG_INF
                  else int(base_a + base_b)) + int(rng.integers(0, 2))
            rep = verify_complex_lemma(cx, mm, x, instance_id=instance_id)
            wit = _witness_payload(kind, instance_id, iseed, recipe,
                                   {"M": m, "N": n},
                                   {"variant": "tensor", "m": mm,
                                    "X": sorted(x.indices)})
        else:
            size = 1 + k % nv
            chosen = sorted(int(v) for v in rng.choice(nv, size=size, replace=False))
            elems = [Polynomial.variable(ring, v) for v in chosen]
            cx = koszul_complex(elems, m)
            x = IndexSet.full(nv)
            base = regularity_from_betti(m)
            mm = (0 if base == NEG_INF else int(base)) + size + int(rng.integers(-1, 2))
            rep = verify_complex_lemma(cx, mm, x, instance_id=instance_id)
            wit = _witness_payload(kind, instance_id, iseed, recipe, {"M": m},
                                   {"variant": "koszul", "m": mm,
                                    "variables": chosen, "X": sorted(x.indices)})
    else:
        raise CorpusParseError(0, 0, f"unknown check kind {kind!r}")
    return rep, wit


def cmd_check(args) -> int:
    kind = args.check_kind
    seed = _default_seed(args)
    recipe = _recipe(args)
    counts: dict[str, int] = {}
    exit_code = 0
    for k in range(args.count):
        iseed = seed + k
        instance_id = f"{kind}-{iseed:05d}"
        rep, wit = run_one_check(kind, iseed, k, recipe, args.a, instance_id)
        if rep.verdict == VIOLATED:
            exit_code = 1
            wdir = Path(args.witness_dir)
            wdir.mkdir(parents=True, exist_ok=True)
            wpath = wdir / f"witness-{instance_id}.json"
            wpath.write_text(json.dumps(wit, sort_keys=True, indent=1))
            rep = rep.with_witness({"file": str(wpath)})
            sys.stderr.write(f"witness written: {wpath}\n")
        _emit(rep, counts)
    summary = " ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    sys.stderr.write(f"done: {summary}\n")
    return exit_code


def replay_witness(payload: dict) -> CheckReport:
    """Re-run the check recorded in a witness payload."""
    kind = payload["check"]
    instance_id = payload["instance"]
    seed = payload["seed"]
    ring, modules = parse_corpus(payload["corpus"])
    extra = payload.get("extra", {})
    nv = ring.num_vars
    if kind == "serre":
        return check_serre_formula(modules["M"], instance_id=instance_id)
    if kind == "tensor":
        return check_tensor_bound(modules["M"], modules["N"],
                                  extra.get("a", 0), instance_id=instance_id)
    if kind == "im":
        gens = [r.entry(0) for r in modules["RI"].relations]
        return check_ideal_module_bound(gens, modules["M"], instance_id=instance_id)
    if kind == "hom":
        return check_hom_bound(modules["M"], modules["N"], instance_id=instance_id)
    if kind == "almost":
        l = parse_polynomial(extra["l"], ring)
        x = IndexSet.of(extra["X"], nv)
        return check_prop_almost(modules["M"], l, x, instance_id=instance_id)
    if kind == "postulation":
        m = modules["M"]
        chain = random_filter_regular_sequence(m, extra["degrees"], seed)
        return check_regularity_routes(m, chain, seed, instance_id=instance_id)
    if kind == "indep":
        return check_chain_independence(modules["M"], seed, instance_id=instance_id)
    if kind == "complex":
        m = modules["M"]
        x = IndexSet.of(extra["X"], nv)
        if extra.get("variant") == "tensor":
            cx = tensor_complex(m, modules["N"])
        else:
            elems = [Polynomial.variable(ring, v) for v in extra["variables"]]
            cx = koszul_complex(elems, m)
        return verify_complex_lemma(cx, extra["m"], x, instance_id=instance_id)
    raise CorpusParseError(0, 0, f"unknown check kind {kind!r} in witness")


def cmd_replay(args) -> int:
    try:
        payload = json.loads(Path(args.file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusParseError(0, 0, f"cannot read witness {args.file}: {exc}")
    rep = replay_witness(payload)
    counts: dict[str, int] = {}
    _emit(rep, counts)
    return 1 if rep.verdict == VIOLATED else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cmreg",
        description="Castelnuovo-Mumford regularity toolkit and theorem harness",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_recipe_opts(p):
        p.add_argument("--seed", type=int, default=None,
                       help="base seed (default: CMREG_SEED env or 1)")
        p.add_argument("--kind", default="mixed", choices=("ideal", "matrix", "mixed"))
        p.add_argument("--vars", type=int, default=3)
        p.add_argument("--max-gens", type=int, default=3)
        p.add_argument("--max-degree", type=int, default=3)
        p.add_argument("--p", type=int, default=32003)

    p = sub.add_parser("hilbert", help="Hilbert data of every module in a corpus file")
    p.add_argument("file")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("betti", help="Betti tables and the oracle regularity")
    p.add_argument("file")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("reg", help="regularity by selectable routes")
    p.add_argument("file")
    p.add_argument("--route", action="append",
                   choices=("betti", "postulation", "conca", "sat"))
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_reg)

    p = sub.add_parser("lc-profile", help="local cohomology top degrees")
    p.add_argument("file")
    p.set_defaults(func=cmd_lc_profile)

    p = sub.add_parser("gen", help="print a generated corpus instance")
    add_recipe_opts(p)
    p.add_argument("--count", type=int, default=1, help="number of modules")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="run one checker over generated instances")
    p.add_argument("check_kind", choices=CHECK_KINDS)
    add_recipe_opts(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--a", type=int, default=0,
                   help="tensor check: lower end of the index set")
    p.add_argument("--witness-dir", default=".")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("replay", help="re-run a recorded witness file")
    p.add_argument("file")
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except CorpusParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (DegreeLimitExceeded, RetriesExhausted) as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return 3
    except CmregError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
