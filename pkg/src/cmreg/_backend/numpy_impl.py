"""Pure-numpy implementations of the hot kernels.

These are the fallback path selected by CMREG_BACKEND=numpy.  They must
agree bit for bit with cmreg._backend.numba_impl: reducer selection is
always the lowest basis index whose lead term divides, and merged term
arrays are canonical (strictly descending keys, coefficients in [1, p)).
"""

import numpy as np

from .common import COMP_BITS, COMP_MASK

NAME = "numpy"

_EMPTY = np.empty(0, dtype=np.int64)


def combine_terms(ak, ac, sa, da, bk, bc, sb, db, p):
    """Canonical merge of sa*shift(a, da) + sb*shift(b, db) mod p."""
    keys = np.concatenate([ak + da, bk + db])
    if keys.size == 0:
        return _EMPTY, _EMPTY
    coeffs = np.concatenate([ac * sa % p, bc * sb % p])
    order = np.argsort(-keys, kind="stable")
    keys = keys[order]
    coeffs = coeffs[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    keys = keys[starts]
    coeffs = np.add.reduceat(coeffs, starts) % p
    keep = coeffs != 0
    return keys[keep], coeffs[keep]


def reduce_full(fk, fc, gk, gc, goff, glkey, glcomp, glexp, glcinv, p, nvars,
                exp_bits, head_only=0):
    """Reduce term array f against the flat basis (gk, gc, goff).

    Scans terms of f from the largest key down; whenever a term is
    divisible by some basis lead (lowest index wins) the corresponding
    multiple is subtracted.  With head_only the scan stops at the first
    irreducible term (enough for the Buchberger loop); otherwise the
    result is the unique full normal form.
    """
    emask = (1 << exp_bits) - 1
    sd = COMP_BITS + (nvars - 1) * exp_bits
    exps = np.empty(nvars, dtype=np.int64)
    idx = 0
    while idx < fk.shape[0]:
        if head_only and idx > 0:
            break
        key = int(fk[idx])
        comp = COMP_MASK - (key & COMP_MASK)
        deg = (key >> sd) & emask
        rest = 0
        for v in range(1, nvars):
            e = emask - ((key >> (COMP_BITS + (v - 1) * exp_bits)) & emask)
            exps[v] = e
            rest += e
        exps[0] = deg - rest
        cand = np.flatnonzero((glcomp == comp) & np.all(glexp <= exps, axis=1))
        if cand.size == 0:
            idx += 1
            continue
        g = int(cand[0])
        lo, hi = int(goff[g]), int(goff[g + 1])
        factor = int(fc[idx]) * int(glcinv[g]) % p
        shift = key - int(glkey[g])
        tk, tc = combine_terms(
            fk[idx + 1:], fc[idx + 1:], 1, 0,
            gk[lo + 1:hi], gc[lo + 1:hi], p - factor, shift, p,
        )
        fk = np.concatenate([fk[:idx], tk])
        fc = np.concatenate([fc[:idx], tc])
    return fk, fc


def rref_mod(a, p):
    """Reduced row echelon form of an int64 matrix mod p.

    Returns (rref, pivot_columns, rank).  Pivot is the first row with a
    nonzero entry in the leftmost unfinished column.
    """
    r = np.array(a, dtype=np.int64) % p
    rows, cols = r.shape
    piv = []
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(r[rank:, c])
        if nz.size == 0:
            continue
        i = rank + int(nz[0])
        if i != rank:
            tmp = r[rank].copy()
            r[rank] = r[i]
            r[i] = tmp
        inv = pow(int(r[rank, c]), p - 2, p)
        r[rank] = r[rank] * inv % p
        col = r[:, c].copy()
        col[rank] = 0
        r = (r - np.outer(col, r[rank])) % p
        piv.append(c)
        rank += 1
    return r, np.array(piv, dtype=np.int64), rank
