"""The numba and numpy kernel backends must agree bit for bit; both must
agree with slow dict/Fraction reference implementations."""

import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmreg._backend import numpy_impl

numba_impl = pytest.importorskip("cmreg._backend.numba_impl")

P = 32003


@st.composite
def term_array(draw, maxlen=12):
    n = draw(st.integers(0, maxlen))
    keys = draw(
        st.lists(st.integers(0, 2**40), min_size=n, max_size=n, unique=True)
    )
    keys = sorted(keys, reverse=True)
    coeffs = draw(st.lists(st.integers(1, P - 1), min_size=n, max_size=n))
    return np.array(keys, dtype=np.int64), np.array(coeffs, dtype=np.int64)


def combine_reference(ak, ac, sa, da, bk_, bc, sb, db):
    acc = {}
    for k, c in zip(ak, ac):
        acc[int(k) + da] = (acc.get(int(k) + da, 0) + int(c) * sa) % P
    for k, c in zip(bk_, bc):
        acc[int(k) + db] = (acc.get(int(k) + db, 0) + int(c) * sb) % P
    items = sorted(((k, c) for k, c in acc.items() if c), reverse=True)
    return [k for k, _ in items], [c for _, c in items]


@settings(max_examples=200, deadline=None)
@given(term_array(), term_array(), st.integers(0, P - 1), st.integers(0, P - 1),
       st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_combine_terms_matches_reference_and_backends_agree(a, b, sa, sb, da, db):
    ak, ac = a
    bk_, bc = b
    k1, c1 = numpy_impl.combine_terms(ak, ac, sa, da, bk_, bc, sb, db, P)
    k2, c2 = numba_impl.combine_terms(ak, ac, sa, da, bk_, bc, sb, db, P)
    rk, rc = combine_reference(ak, ac, sa, da, bk_, bc, sb, db)
    assert list(k1) == list(k2) == rk
    assert list(c1) == list(c2) == rc


def rank_reference(rows):
    """Fraction Gaussian elimination treating entries as field elements mod P."""
    mat = [[Fraction(int(v) % P) for v in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][c] % P != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = Fraction(pow(int(mat[rank][c] % P), P - 2, P))
        mat[rank] = [v * inv % P for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c] % P != 0:
                f = mat[r][c] % P
                mat[r] = [(v - f * w) % P for v, w in zip(mat[r], mat[rank])]
        rank += 1
    return rank


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_rref_mod_rank_matches_reference(rows, cols, data):
    mat = [
        [data.draw(st.integers(0, P - 1)) for _ in range(cols)] for _ in range(rows)
    ]
    a = np.array(mat, dtype=np.int64)
    r1, p1, rank1 = numpy_impl.rref_mod(a, P)
    r2, p2, rank2 = numba_impl.rref_mod(a, P)
    assert rank1 == rank2 == rank_reference(mat)
    assert list(p1) == list(p2)
    assert np.array_equal(r1, r2)


def test_reduce_full_backends_agree_on_groebner_workload(R2, xy):
    from cmreg.groebner import _FlatBasis

    x, y = xy
    flat = _FlatBasis(R2)
    for q in (x * x + y * y, x * y, y * y * y):
        flat.add(q.keys, q.coeffs)
    probe = (x * x * y * y + 3 * x * y + y ** 4) * (x + y)
    kf, cf, off, lk, lc, le, li = flat._arrays()
    args = (kf, cf, off, lk, lc, le, li, R2.p, R2.num_vars, R2.layout.exp_bits)
    k1, c1 = numpy_impl.reduce_full(probe.keys, probe.coeffs, *args)
    k2, c2 = numba_impl.reduce_full(probe.keys, probe.coeffs, *args)
    assert np.array_equal(k1, k2) and np.array_equal(c1, c2)


def test_env_flag_selects_backend():
    for want in ("numpy", "numba"):
        out = subprocess.run(
            [sys.executable, "-c", "import cmreg; print(cmreg.BACKEND)"],
            env={**os.environ, "CMREG_BACKEND": want},
            capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == want


def test_bad_env_flag_rejected():
    out = subprocess.run(
        [sys.executable, "-c", "import cmreg"],
        env={**os.environ, "CMREG_BACKEND": "cuda"},
        capture_output=True, text=True,
    )
    assert out.returncode != 0
