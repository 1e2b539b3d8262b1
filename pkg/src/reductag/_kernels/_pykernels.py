"""Pure-Python versions of the decoding kernels.

These are the reference implementations; the Cython module mirrors them
loop for loop so both produce bit-identical floating point results.
"""

import math

NEG_INF = -math.inf


def viterbi(offsets, tags, log_emit, table):
    """Best path through a candidate lattice under a trigram transition table.

    ``offsets``/``tags``/``log_emit`` hold the candidates of each position
    (tag ids ascending within a position). Returns ``(best, score, ops)``
    where ``best[i]`` is an index into ``tags``.
    """
    off = [int(x) for x in offsets]
    tg = [int(x) for x in tags]
    em = [float(x) for x in log_emit]
    n = len(off) - 1
    B = table.boundary
    logp = table.lookup

    def cands(i):
        if i < 0:
            return [B]
        return tg[off[i]:off[i + 1]]

    ops = 0
    # position 0: history is (B, B)
    c0 = cands(0)
    delta = [[logp(B, B, v) + em[off[0] + vk] for vk, v in enumerate(c0)]]
    backptrs = [None]
    for i in range(1, n):
        cw, cu, cv = cands(i - 2), cands(i - 1), cands(i)
        base = off[i]
        new = []
        bp = []
        for uk, u in enumerate(cu):
            row = []
            brow = []
            new.append(row)
            bp.append(brow)
            for vk, v in enumerate(cv):
                best = NEG_INF
                arg = 0
                for wk, w in enumerate(cw):
                    s = delta[wk][uk] + logp(w, u, v)
                    if s > best:
                        best = s
                        arg = wk
                row.append(best + em[base + vk])
                brow.append(arg)
        ops += len(cw) * len(cu) * len(cv)
        delta = new
        backptrs.append(bp)
    cu, cv = cands(n - 2), cands(n - 1)
    best = NEG_INF
    bu = bv = 0
    for vk, v in enumerate(cv):
        for uk, u in enumerate(cu):
            s = delta[uk][vk] + logp(u, v, B)
            if s > best:
                best, bu, bv = s, uk, vk
    ops += len(cu) * len(cv)
    path = [0] * n
    path[n - 1] = bv
    if n >= 2:
        path[n - 2] = bu
    uk, vk = bu, bv
    for i in range(n - 1, 1, -1):
        wk = backptrs[i][uk][vk]
        path[i - 2] = wk
        uk, vk = wk, uk
    return [off[i] + path[i] for i in range(n)], best, ops


def combine_pass(offsets, tags, probs, lexical, tables, use_context):
    """Combined lexical x contextual / prior scores for every candidate.

    Scores are normalized per position. Raises ``ZeroDivisionError`` when a
    position's scores are all zero.
    """
    off = [int(x) for x in offsets]
    tg = [int(x) for x in tags]
    pr = [float(x) for x in probs]
    lex = [float(x) for x in lexical]
    prior = tables.prior_list
    n = len(off) - 1
    B = tables.boundary
    S = tables.n_states
    ctx_index = tables.ctx_index_list
    tri = tables.tri_rows_list
    bl = tables.big_left_list
    br = tables.big_right_list
    out = [0.0] * len(tg)
    for i in range(n):
        if i > 0:
            left = list(zip(tg[off[i - 1]:off[i]], pr[off[i - 1]:off[i]]))
        else:
            left = [(B, 1.0)]
        if i < n - 1:
            right = list(zip(tg[off[i + 1]:off[i + 2]], pr[off[i + 1]:off[i + 2]]))
        else:
            right = [(B, 1.0)]
        total = 0.0
        for k in range(off[i], off[i + 1]):
            t = tg[k]
            if use_context:
                ctx = 0.0
                wsum = 0.0
                for lt, lp in left:
                    for rt, rp in right:
                        w = lp * rp
                        wsum += w
                        ci = ctx_index[lt * S + rt]
                        if ci >= 0:
                            p = tri[ci][t]
                        else:
                            p = (bl[lt][t] + br[rt][t]) * 0.5
                        ctx += w * p
                ctx = ctx / wsum
            else:
                ctx = prior[t]
            score = lex[k] * ctx / prior[t]
            out[k] = score
            total += score
        if not total > 0.0:
            raise ZeroDivisionError(f"all candidate scores are zero at position {i}")
        for k in range(off[i], off[i + 1]):
            out[k] = out[k] / total
    return out
