"""Acceptance criteria, run at full scale with exact (tolerance-zero)
comparisons.  Each criterion prints one PASS line; failures raise with the
offending instance so they can be replayed from its seed.
"""

import json
import os
import subprocess
import sys
import time

import pytest

from cmreg import (
    NEG_INF,
    IndexSet,
    hilbert_function,
    is_zero_module,
    krull_dim,
    partial_regularity,
    random_filter_regular_sequence,
    regularity_conca_recursive,
    regularity_from_betti,
    regularity_postulation,
    regularity_sat_formula,
)
from cmreg.checks import (
    HOLDS,
    HYPOTHESIS_NOT_MET,
    VIOLATED,
    check_hom_bound,
    check_ideal_module_bound,
    check_prop_almost,
    check_serre_formula,
    check_tensor_bound,
)
from cmreg.cli import run_one_check
from cmreg.corpus import (
    Recipe,
    random_hom_pair,
    random_ideal_gens,
    random_module,
    seeded_stream,
)
from cmreg.hilbert import graded_dim_oracle
from cmreg.reglab import random_homogeneous_form, is_filter_regular

CORPUS_SIZE = 200


def _recipe_for(seed: int) -> Recipe:
    return Recipe(num_vars=2 if seed % 3 == 0 else 3)


@pytest.fixture(scope="module")
def corpus():
    """CORPUS_SIZE seeded modules over n <= 3, p = 32003."""
    out = []
    for seed in range(1, CORPUS_SIZE + 1):
        recipe = _recipe_for(seed)
        out.append((seed, random_module(recipe, seeded_stream(seed, 7, 0))))
    return out


_CHAIN_TIME = {}


@pytest.fixture(scope="module")
def chains(corpus):
    """One certified chain per module; a degree-2 form on even seeds."""
    t0 = time.time()
    out = {}
    for seed, m in corpus:
        d = max(krull_dim(m), 0)
        degrees = [1] * d
        if d >= 1 and seed % 2 == 0:
            degrees[0] = 2
        out[seed] = random_filter_regular_sequence(m, degrees, seed)
    _CHAIN_TIME["build"] = time.time() - t0
    return out


def test_criterion_1_postulation_route(corpus, chains):
    t0 = time.time()
    deg2 = 0
    for seed, m in corpus:
        chain = chains[seed]
        if 2 in chain.degrees:
            deg2 += 1
        assert regularity_postulation(m, chain) == regularity_from_betti(m), seed
    elapsed = time.time() - t0 + _CHAIN_TIME.get("build", 0.0)
    assert len(corpus) >= 200
    assert deg2 >= 50, f"only {deg2} chains carry a degree-2 form"
    assert elapsed < 300
    print(f"\nCRITERION 1 PASS: postulation route == Betti oracle on "
          f"{len(corpus)} instances ({deg2} with a degree-2 form), {elapsed:.1f}s")


def test_criterion_2_sat_and_recursive_routes(corpus, chains):
    t0 = time.time()
    for seed, m in corpus:
        rb = regularity_from_betti(m)
        assert regularity_sat_formula(m, chains[seed]) == rb, seed
        assert regularity_conca_recursive(m, seed) == rb, seed
    elapsed = time.time() - t0
    assert elapsed < 300
    print(f"\nCRITERION 2 PASS: saturation and recursive routes == Betti "
          f"oracle on {len(corpus)} instances, {elapsed:.1f}s")


def test_criterion_3_chain_independence(corpus):
    for seed, m in corpus:
        d = max(krull_dim(m), 0)
        degs_a = [1] * d
        degs_b = ([2] + [1] * (d - 1)) if d >= 1 else []
        va = regularity_postulation(
            m, random_filter_regular_sequence(m, degs_a, 10_000 + seed))
        vb = regularity_postulation(
            m, random_filter_regular_sequence(m, degs_b, 20_000 + seed))
        assert va == vb, seed
    print(f"\nCRITERION 3 PASS: chain-independent values on {len(corpus)} instances")


def test_criterion_4_serre_formula(corpus):
    count = 0
    for seed, m in corpus[:120]:
        rep = check_serre_formula(m, instance_id=f"serre-{seed}")
        assert rep.verdict == HOLDS, (seed, rep.to_dict())
        count += 1
    assert count >= 100
    print(f"\nCRITERION 4 PASS: Serre identity exact on window for {count} instances")


def test_criterion_5_restriction_inequalities(corpus):
    triples = 0
    for seed, m in corpus:
        if triples >= 110:
            break
        if is_zero_module(m):
            continue
        degree = 2 if seed % 3 == 0 else 1
        l = None
        for attempt in range(50):
            cand = random_homogeneous_form(
                m.ring, degree, seeded_stream(seed, 31, attempt))
            if is_filter_regular(cand, m).verdict:
                l = cand
                break
        if l is None:
            continue
        rng = seeded_stream(seed, 32)
        n = m.ring.num_vars
        x = IndexSet.of([j for j in range(n + 1) if rng.random() < 0.6], n)
        rep = check_prop_almost(m, l, x, instance_id=f"almost-{seed}")
        assert rep.verdict == HOLDS, (seed, rep.to_dict())
        triples += 1
    assert triples >= 100
    print(f"\nCRITERION 5 PASS: both restriction inequalities on {triples} triples")


def test_criterion_6_tensor_and_im_bounds():
    results = {HOLDS: 0, HYPOTHESIS_NOT_MET: 0}
    for k in range(200):
        seed = 5000 + k
        recipe = _recipe_for(seed)
        ring = recipe.ring()
        m = random_module(recipe, seeded_stream(seed, 7, 0), ring)
        n = random_module(recipe, seeded_stream(seed, 7, 1), ring)
        a = 1 if k % 5 == 4 else 0
        rep = check_tensor_bound(m, n, a, instance_id=f"tensor-{seed}")
        assert rep.verdict != VIOLATED, (seed, rep.to_dict())
        results[rep.verdict] += 1
    im_results = {HOLDS: 0, HYPOTHESIS_NOT_MET: 0}
    for k in range(200):
        seed = 6000 + k
        recipe = _recipe_for(seed)
        ring = recipe.ring()
        gens = random_ideal_gens(recipe, seeded_stream(seed, 7, 0), ring)
        m = random_module(recipe, seeded_stream(seed, 7, 1), ring)
        rep = check_ideal_module_bound(gens, m, instance_id=f"im-{seed}")
        assert rep.verdict != VIOLATED, (seed, rep.to_dict())
        im_results[rep.verdict] += 1
    print(f"\nCRITERION 6 PASS: tensor pairs {results}, ideal-module pairs "
          f"{im_results}; zero VIOLATED among 400")


def test_criterion_7_hom_bound():
    passing = 0
    gated = 0
    for k in range(260):
        seed = 7000 + k
        recipe = _recipe_for(seed)
        ring = recipe.ring()
        m, n = random_hom_pair(
            recipe, seeded_stream(seed, 7, 0), seeded_stream(seed, 7, 1), ring)
        rep = check_hom_bound(m, n, instance_id=f"hom-{seed}")
        assert rep.verdict != VIOLATED, (seed, rep.to_dict())
        if rep.verdict == HOLDS:
            passing += 1
        else:
            gated += 1
    assert passing >= 100, f"only {passing} gate-passing pairs"
    print(f"\nCRITERION 7 PASS: Hom bound exact on {passing} gate-passing pairs "
          f"({gated} gated out); zero violations")


def test_criterion_8_oracle_cross_checks(corpus):
    full_agree = 0
    for seed, m in corpus:
        for i in range(-5, 11):
            assert hilbert_function(m, i) == graded_dim_oracle(m, i), (seed, i)
        full = IndexSet.full(m.ring.num_vars)
        assert regularity_from_betti(m) == partial_regularity(m, full), seed
        full_agree += 1
    print(f"\nCRITERION 8 PASS: Hilbert oracle and regularity routes agree on "
          f"{full_agree} modules, degrees -5..10")


def test_criterion_9_determinism():
    cmd = [sys.executable, "-m", "cmreg.cli", "check", "almost",
           "--count", "5", "--seed", "42"]
    env = dict(os.environ)
    runs = [
        subprocess.run(cmd, capture_output=True, env=env) for _ in range(2)
    ]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout
    assert runs[0].stdout.count(b"\n") == 5
    for line in runs[0].stdout.strip().splitlines():
        json.loads(line)
    print("\nCRITERION 9 PASS: byte-identical report streams for equal seeds")
