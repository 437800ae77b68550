"""Numba JIT implementations of the hot kernels.

Selected by default when numba imports; CMREG_BACKEND=numpy bypasses.
Semantics are pinned to cmreg._backend.numpy_impl bit for bit.
"""

import numpy as np
from numba import njit

from .common import COMP_BITS, COMP_MASK

NAME = "numba"


@njit(cache=True)
def _pow_mod(a, e, p):
    r = 1
    b = a % p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def combine_terms(ak, ac, sa, da, bk, bc, sb, db, p):
    na = ak.shape[0]
    nb = bk.shape[0]
    ok = np.empty(na + nb, np.int64)
    oc = np.empty(na + nb, np.int64)
    i = 0
    j = 0
    k = 0
    while i < na and j < nb:
        ka = ak[i] + da
        kb = bk[j] + db
        if ka > kb:
            c = ac[i] * sa % p
            if c != 0:
                ok[k] = ka
                oc[k] = c
                k += 1
            i += 1
        elif kb > ka:
            c = bc[j] * sb % p
            if c != 0:
                ok[k] = kb
                oc[k] = c
                k += 1
            j += 1
        else:
            c = (ac[i] * sa + bc[j] * sb) % p
            if c != 0:
                ok[k] = ka
                oc[k] = c
                k += 1
            i += 1
            j += 1
    while i < na:
        c = ac[i] * sa % p
        if c != 0:
            ok[k] = ak[i] + da
            oc[k] = c
            k += 1
        i += 1
    while j < nb:
        c = bc[j] * sb % p
        if c != 0:
            ok[k] = bk[j] + db
            oc[k] = c
            k += 1
        j += 1
    return ok[:k].copy(), oc[:k].copy()


@njit(cache=True)
def reduce_full(fk, fc, gk, gc, goff, glkey, glcomp, glexp, glcinv, p, nvars,
                exp_bits, head_only=0):
    emask = (np.int64(1) << exp_bits) - 1
    sd = COMP_BITS + (nvars - 1) * exp_bits
    m = glcomp.shape[0]
    exps = np.empty(nvars, np.int64)
    nf = fk.shape[0]
    idx = 0
    while idx < nf:
        if head_only and idx > 0:
            break
        key = fk[idx]
        comp = COMP_MASK - (key & COMP_MASK)
        deg = (key >> sd) & emask
        rest = 0
        for v in range(1, nvars):
            e = emask - ((key >> (COMP_BITS + (v - 1) * exp_bits)) & emask)
            exps[v] = e
            rest += e
        exps[0] = deg - rest
        gsel = -1
        for g in range(m):
            if glcomp[g] != comp:
                continue
            ok = True
            for v in range(nvars):
                if glexp[g, v] > exps[v]:
                    ok = False
                    break
            if ok:
                gsel = g
                break
        if gsel < 0:
            idx += 1
            continue
        lo = goff[gsel]
        hi = goff[gsel + 1]
        factor = fc[idx] * glcinv[gsel] % p
        shift = key - glkey[gsel]
        scale = p - factor
        na = nf - idx - 1
        nb = hi - lo - 1
        ok_ = np.empty(idx + na + nb, np.int64)
        oc_ = np.empty(idx + na + nb, np.int64)
        for t in range(idx):
            ok_[t] = fk[t]
            oc_[t] = fc[t]
        i = idx + 1
        j = lo + 1
        k = idx
        while i < nf and j < hi:
            ka = fk[i]
            kb = gk[j] + shift
            if ka > kb:
                ok_[k] = ka
                oc_[k] = fc[i]
                k += 1
                i += 1
            elif kb > ka:
                c = gc[j] * scale % p
                if c != 0:
                    ok_[k] = kb
                    oc_[k] = c
                    k += 1
                j += 1
            else:
                c = (fc[i] + gc[j] * scale) % p
                if c != 0:
                    ok_[k] = ka
                    oc_[k] = c
                    k += 1
                i += 1
                j += 1
        while i < nf:
            ok_[k] = fk[i]
            oc_[k] = fc[i]
            k += 1
            i += 1
        while j < hi:
            c = gc[j] * scale % p
            if c != 0:
                ok_[k] = gk[j] + shift
                oc_[k] = c
                k += 1
            j += 1
        fk = ok_[:k]
        fc = oc_[:k]
        nf = k
    return fk.copy(), fc.copy()


@njit(cache=True)
def rref_mod(a, p):
    r = a % p
    rows, cols = r.shape
    piv = np.empty(min(rows, cols), np.int64)
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        sel = -1
        for i in range(rank, rows):
            if r[i, c] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != rank:
            for t in range(cols):
                tmp = r[rank, t]
                r[rank, t] = r[sel, t]
                r[sel, t] = tmp
        inv = _pow_mod(r[rank, c], p - 2, p)
        for t in range(cols):
            r[rank, t] = r[rank, t] * inv % p
        for i in range(rows):
            if i == rank or r[i, c] == 0:
                continue
            f = r[i, c]
            for t in range(cols):
                r[i, t] = (r[i, t] - f * r[rank, t]) % p
        piv[rank] = c
        rank += 1
    return r, piv[:rank].copy(), rank
