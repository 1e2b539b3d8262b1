# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled decoding kernels; see _pykernels for the reference semantics."""

import numpy as np
from libc.stdint cimport int64_t
from libc.math cimport INFINITY


cdef inline double _trans(const double[::1] ctx_default, const int64_t[::1] row_ptr,
                          const int64_t[::1] cols, const double[::1] vals,
                          Py_ssize_t S, Py_ssize_t t1, Py_ssize_t t2, Py_ssize_t t3) noexcept nogil:
    cdef Py_ssize_t c = t1 * S + t2
    cdef Py_ssize_t lo = row_ptr[c], hi = row_ptr[c + 1], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cols[mid] < t3:
            lo = mid + 1
        else:
            hi = mid
    if lo < row_ptr[c + 1] and cols[lo] == t3:
        return vals[lo]
    return ctx_default[c]


def viterbi(offsets, tags, log_emit, table):
    cdef const int64_t[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef const int64_t[::1] tg = np.ascontiguousarray(tags, dtype=np.int64)
    cdef const double[::1] em = np.ascontiguousarray(log_emit, dtype=np.float64)
    cdef const double[::1] ctx_default = table.ctx_default
    cdef const int64_t[::1] row_ptr = table.row_ptr
    cdef const int64_t[::1] cols = table.cols
    cdef const double[::1] vals = table.vals
    cdef Py_ssize_t S = table.n_states
    cdef int64_t B = table.boundary
    cdef Py_ssize_t n = off.shape[0] - 1
    cdef Py_ssize_t i, uk, vk, wk, su, sv, sw, arg, bu = 0, bv = 0
    cdef Py_ssize_t total_states = 0
    cdef int64_t u, v, w
    cdef double best, s
    cdef long long ops = 0

    # state blocks: position i holds |C(i-1)| x |C(i)| scores and backpointers
    state_off = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] st = state_off
    for i in range(n):
        su = 1 if i == 0 else off[i] - off[i - 1]
        st[i + 1] = st[i] + su * (off[i + 1] - off[i])
    total_states = st[n]
    delta_arr = np.empty(total_states, dtype=np.float64)
    bp_arr = np.zeros(total_states, dtype=np.int64)
    cdef double[::1] delta = delta_arr
    cdef int64_t[::1] bp = bp_arr

    with nogil:
        sv = off[1] - off[0]
        for vk in range(sv):
            v = tg[off[0] + vk]
            delta[vk] = _trans(ctx_default, row_ptr, cols, vals, S, B, B, v) + em[off[0] + vk]
        for i in range(1, n):
            sw = 1 if i < 2 else off[i - 1] - off[i - 2]
            su = off[i] - off[i - 1]
            sv = off[i + 1] - off[i]
            for uk in range(su):
                u = tg[off[i - 1] + uk]
                for vk in range(sv):
                    v = tg[off[i] + vk]
                    best = -INFINITY
                    arg = 0
                    for wk in range(sw):
                        w = B if i < 2 else tg[off[i - 2] + wk]
                        s = delta[st[i - 1] + wk * su + uk] + _trans(
                            ctx_default, row_ptr, cols, vals, S, w, u, v)
                        if s > best:
                            best = s
                            arg = wk
                    delta[st[i] + uk * sv + vk] = best + em[off[i] + vk]
                    bp[st[i] + uk * sv + vk] = arg
            ops += sw * su * sv
        su = 1 if n < 2 else off[n - 1] - off[n - 2]
        sv = off[n] - off[n - 1]
        best = -INFINITY
        for vk in range(sv):
            v = tg[off[n - 1] + vk]
            for uk in range(su):
                u = B if n < 2 else tg[off[n - 2] + uk]
                s = delta[st[n - 1] + uk * sv + vk] + _trans(
                    ctx_default, row_ptr, cols, vals, S, u, v, B)
                if s > best:
                    best = s
                    bu = uk
                    bv = vk
        ops += su * sv

    path = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] p = path
    p[n - 1] = bv
    if n >= 2:
        p[n - 2] = bu
    uk = bu
    vk = bv
    for i in range(n - 1, 1, -1):
        sv = off[i + 1] - off[i]
        wk = bp[st[i] + uk * sv + vk]
        p[i - 2] = wk
        vk = uk
        uk = wk
    for i in range(n):
        p[i] += off[i]
    return path.tolist(), best, ops


def combine_pass(offsets, tags, probs, lexical, tables, bint use_context):
    cdef const int64_t[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef const int64_t[::1] tg = np.ascontiguousarray(tags, dtype=np.int64)
    cdef const double[::1] pr = np.ascontiguousarray(probs, dtype=np.float64)
    cdef const double[::1] lex = np.ascontiguousarray(lexical, dtype=np.float64)
    cdef const double[::1] prior = tables.prior
    cdef const int64_t[::1] ctx_index = tables.ctx_index
    cdef const double[:, ::1] tri = tables.tri_rows
    cdef const double[:, ::1] bl = tables.big_left
    cdef const double[:, ::1] br = tables.big_right
    cdef int64_t B = tables.boundary
    cdef Py_ssize_t S = tables.n_states
    cdef Py_ssize_t n = off.shape[0] - 1
    cdef Py_ssize_t i, k, a, b, llo, lhi, rlo, rhi, bad = -1
    cdef int64_t t, lt, rt, ci
    cdef double lp, rp, w, wsum, ctx, p, score, total
    out_arr = np.empty(tg.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr

    with nogil:
        for i in range(n):
            # neighbour ranges; -1 marks the sentence boundary
            if i > 0:
                llo = off[i - 1]
                lhi = off[i]
            else:
                llo = -1
                lhi = 0
            if i < n - 1:
                rlo = off[i + 1]
                rhi = off[i + 2]
            else:
                rlo = -1
                rhi = 0
            total = 0.0
            for k in range(off[i], off[i + 1]):
                t = tg[k]
                if use_context:
                    ctx = 0.0
                    wsum = 0.0
                    for a in range(llo, lhi):
                        if a < 0:
                            lt = B
                            lp = 1.0
                        else:
                            lt = tg[a]
                            lp = pr[a]
                        for b in range(rlo, rhi):
                            if b < 0:
                                rt = B
                                rp = 1.0
                            else:
                                rt = tg[b]
                                rp = pr[b]
                            w = lp * rp
                            wsum += w
                            ci = ctx_index[lt * S + rt]
                            if ci >= 0:
                                p = tri[ci, t]
                            else:
                                p = (bl[lt, t] + br[rt, t]) * 0.5
                            ctx += w * p
                    ctx = ctx / wsum
                else:
                    ctx = prior[t]
                score = lex[k] * ctx / prior[t]
                out[k] = score
                total += score
            if not total > 0.0:
                bad = i
                break
            for k in range(off[i], off[i + 1]):
                out[k] = out[k] / total
    if bad >= 0:
        raise ZeroDivisionError(f"all candidate scores are zero at position {bad}")
    return out_arr
