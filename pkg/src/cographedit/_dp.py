"""Jitted subset dynamic program and branch-and-bound inner minimization.

Pair sums ``sum_{v in S} w(u, v)`` are answered in O(1) from two lookup
tables per vertex, one for the low half of the vertex range and one for
the high half.  Three sums are tabulated: edge weight, total weight and
edge count; pair counts come from a popcount table.

Variant codes: 0 editing, 1 deletion, 2 completion.  Node types: 0
parallel, 1 series.
"""

import heapq

import numpy as np
from numba import njit

EDITING, DELETION, COMPLETION = 0, 1, 2
PAR, SER = 0, 1


def build_tables(adj, w):
    """Split-half lookup tables for crossing sums (numpy, run once)."""
    n = adj.shape[0]
    half = (n + 1) // 2
    nh = n - half
    ew = np.where(adj.astype(bool), w, 0.0)
    np.fill_diagonal(ew, 0.0)
    tw = np.array(w, dtype=np.float64)
    np.fill_diagonal(tw, 0.0)
    ec = adj.astype(np.float64)
    np.fill_diagonal(ec, 0.0)

    def tab(mat, lo, size):
        out = np.zeros((n, 1 << size))
        for b in range(size):
            step = 1 << b
            # subsets whose highest member is bit b extend those below it
            out[:, step:2 * step] = out[:, :step] + mat[:, lo + b][:, None]
        return out

    lo = np.stack([tab(ew, 0, half), tab(tw, 0, half), tab(ec, 0, half)])
    hi = np.stack([tab(ew, half, nh), tab(tw, half, nh), tab(ec, half, nh)])
    pc_lo = np.array([bin(s).count("1") for s in range(1 << half)], np.int64)
    pc_hi = np.array([bin(s).count("1") for s in range(1 << nh)], np.int64)
    rows = np.zeros(n, np.int64)
    for u in range(n):
        for v in range(n):
            if adj[u, v] and u != v:
                rows[u] |= 1 << v
    return lo, hi, pc_lo, pc_hi, half, rows


@njit(inline="always")
def _sum(lo, hi, kind, u, s, half, lomask):
    return lo[kind, u, s & lomask] + hi[kind, u, s >> half]


@njit(inline="always")
def _pc(pc_lo, pc_hi, s, half, lomask):
    return pc_lo[s & lomask] + pc_hi[s >> half]


@njit(inline="always")
def _highest(x, n):
    v = n - 1
    while not (x >> v) & 1:
        v -= 1
    return v


@njit(cache=True)
def crossing(lo, hi, pc_lo, pc_hi, half, a, b):
    """(edge weight, non-edge weight, edge count, non-edge count) between masks."""
    lomask = (1 << half) - 1
    ew = 0.0
    tw = 0.0
    ec = 0.0
    pairs = 0
    nb = _pc(pc_lo, pc_hi, b, half, lomask)
    x = a
    while x:
        low = x & -x
        u = 0
        while (low >> u) != 1:
            u += 1
        ew += _sum(lo, hi, 0, u, b, half, lomask)
        tw += _sum(lo, hi, 1, u, b, half, lomask)
        ec += _sum(lo, hi, 2, u, b, half, lomask)
        pairs += nb
        x ^= low
    return ew, tw - ew, ec, pairs - ec


@njit(inline="always")
def _typed_cost(par, ser, pe, sn, variant, sent):
    """min over node types of the (guarded) crossing cost; ties -> parallel."""
    cp = par
    cs = ser
    if variant == DELETION:
        cs = 0.0 if sn == 0 else sent
    elif variant == COMPLETION:
        cp = 0.0 if pe == 0 else sent
    if cp <= cs:
        return cp, PAR
    return cs, SER


@njit(inline="always")
def _lam_cost(par, ser, pe, sn, lam, variant, sent):
    if lam == PAR:
        if variant == COMPLETION:
            return 0.0 if pe == 0 else sent
        return par
    if variant == DELETION:
        return 0.0 if sn == 0 else sent
    return ser


@njit(inline="always")
def _gray_move(lo, hi, pc_lo, pc_hi, half, lomask, u, a, b, par, ser, pe, sn):
    """Crossing sums after moving ``u`` to the other side of (a | b).

    Returns the updated (a, b, par, ser, pe, sn).
    """
    bit = 1 << u
    ea = _sum(lo, hi, 0, u, a, half, lomask)
    eb = _sum(lo, hi, 0, u, b, half, lomask)
    wa = _sum(lo, hi, 1, u, a, half, lomask)
    wb = _sum(lo, hi, 1, u, b, half, lomask)
    ca = _sum(lo, hi, 2, u, a, half, lomask)
    cb = _sum(lo, hi, 2, u, b, half, lomask)
    if a & bit:
        na = _pc(pc_lo, pc_hi, a, half, lomask) - 1
        nb = _pc(pc_lo, pc_hi, b, half, lomask)
        par += ea - eb
        ser += (wa - ea) - (wb - eb)
        pe += ca - cb
        sn += (na - ca) - (nb - cb)
        a ^= bit
        b |= bit
    else:
        na = _pc(pc_lo, pc_hi, a, half, lomask)
        nb = _pc(pc_lo, pc_hi, b, half, lomask) - 1
        par += eb - ea
        ser += (wb - eb) - (wa - ea)
        pe += cb - ca
        sn += (nb - cb) - (na - ca)
        b ^= bit
        a |= bit
    return a, b, par, ser, pe, sn


@njit(cache=True)
def gray_trace(lo, hi, pc_lo, pc_hi, half, n, x):
    """Every Gray-order split of ``x`` with its incrementally kept sums.

    Rows: (y, moved vertex or -1, par, ser, edge count, non-edge count).
    """
    lomask = (1 << half) - 1
    vx = _highest(x, n)
    rest = x ^ (1 << vx)
    mem = np.empty(n, np.int64)
    k = 0
    for v in range(n):
        if (rest >> v) & 1:
            mem[k] = v
            k += 1
    a = x
    b = np.int64(0)
    par = 0.0
    ser = 0.0
    pe = 0.0
    sn = 0.0
    total = (1 << k) - 1
    out_y = np.empty(total, np.int64)
    out_m = np.empty(total, np.int64)
    out_s = np.empty((total, 4))
    j = 0
    for i in range(1, 1 << k):
        t = 0
        while not (i >> t) & 1:
            t += 1
        u = mem[t]
        a, b, par, ser, pe, sn = _gray_move(lo, hi, pc_lo, pc_hi, half, lomask,
                                            u, a, b, par, ser, pe, sn)
        out_y[j] = a
        out_m[j] = u
        out_s[j, 0] = par
        out_s[j, 1] = ser
        out_s[j, 2] = pe
        out_s[j, 3] = sn
        j += 1
    return out_y[:j], out_m[:j], out_s[:j]


@njit(cache=True)
def _gray_subset(lo, hi, pc_lo, pc_hi, half, n, x, f, variant, sent, mem):
    """Inner minimum of the recurrence over all Gray-order splits of ``x``.

    Returns (value, y, type, evaluations); the first minimum wins.
    """
    lomask = (1 << half) - 1
    vx = _highest(x, n)
    rest = x ^ (1 << vx)
    k = 0
    for v in range(n):
        if (rest >> v) & 1:
            mem[k] = v
            k += 1
    a = x
    b = np.int64(0)
    par = 0.0
    ser = 0.0
    pe = 0.0
    sn = 0.0
    best = np.inf
    by = a
    bt = PAR
    evals = 0
    for i in range(1, 1 << k):
        t = 0
        while not (i >> t) & 1:
            t += 1
        a, b, par, ser, pe, sn = _gray_move(lo, hi, pc_lo, pc_hi, half, lomask,
                                            mem[t], a, b, par, ser, pe, sn)
        evals += 1
        c, ty = _typed_cost(par, ser, pe, sn, variant, sent)
        val = f[a] + f[b] + c
        if val < best:
            best = val
            by = a
            bt = ty
    return best, by, bt, evals


@njit(cache=True)
def _split_value(lo, hi, pc_lo, pc_hi, half, x, y, f, lam, variant, sent):
    par, ser, pe, sn = crossing(lo, hi, pc_lo, pc_hi, half, y, x ^ y)
    if lam < 0:
        c, ty = _typed_cost(par, ser, pe, sn, variant, sent)
        return f[y] + f[x ^ y] + c, ty
    return f[y] + f[x ^ y] + _lam_cost(par, ser, pe, sn, lam, variant, sent), lam


@njit(cache=True)
def greedy_split(rows, pc_lo, pc_hi, half, n, x):
    """Split ``x`` by the closed neighbourhood of its highest-degree vertex."""
    lomask = (1 << half) - 1
    h = -1
    hd = -1
    for v in range(n):
        if (x >> v) & 1:
            d = _pc(pc_lo, pc_hi, rows[v] & x, half, lomask)
            if d > hd:
                hd = d
                h = v
    y0 = (rows[h] & x) | (np.int64(1) << h)
    if y0 == x:
        y0 = np.int64(1) << h
    vx = _highest(x, n)
    if (y0 >> vx) & 1:
        return y0
    return x ^ y0


@njit(cache=True)
def new_pool(n, cap):
    act = np.zeros((cap, n), np.int64)
    nact = np.zeros(cap, np.int64)
    oppa = np.zeros((cap, n // 2 + 1), np.int64)
    oppb = np.zeros((cap, n // 2 + 1), np.int64)
    nopp = np.zeros(cap, np.int64)
    lam = np.zeros(cap, np.int64)
    bnd = np.zeros(cap)
    return act, nact, oppa, oppb, nopp, lam, bnd


@njit(cache=True)
def _grow(pool):
    act, nact, oppa, oppb, nopp, lam, bnd = pool
    cap = act.shape[0]
    n = act.shape[1]
    new = new_pool(n, 2 * cap)
    new[0][:cap] = act
    new[1][:cap] = nact
    new[2][:cap] = oppa
    new[3][:cap] = oppb
    new[4][:cap] = nopp
    new[5][:cap] = lam
    new[6][:cap] = bnd
    return new


@njit(cache=True)
def _leaf_enumerate(lo, hi, pc_lo, pc_hi, half, n, x, f, variant, sent,
                    act, na, oppa, oppb, no, lam, best, by, bt, seen):
    """Evaluate every split consistent with one leaf subproblem's constraints.

    Components are the active groups (in order) followed by the opposite
    pairs; the component holding the pinned vertex is fixed on the ``y``
    side and bit ``j`` of the pattern puts the next component's group (or
    the pair's first group) on the ``y`` side.

    A split is skipped without computing crossing sums when the table
    lookups plus the frozen pairs' cost already reach ``best``, or when
    ``seen`` shows it was fully evaluated earlier for this ``x``.
    """
    vbit = np.int64(1) << _highest(x, n)
    ybase = np.int64(0)
    fixed = -1
    for j in range(na):
        if act[j] & vbit:
            ybase = act[j]
            fixed = j
    for j in range(no):
        if oppa[j] & vbit:
            ybase = oppa[j]
            fixed = na + j
        elif oppb[j] & vbit:
            ybase = oppb[j]
            fixed = na + j
    ncomp = na + no - 1
    evals = 0
    screened = 0
    # every consistent split pays at least the frozen pairs' crossing cost
    osum = 0.0
    for j in range(no):
        par, ser, pe, sn = crossing(lo, hi, pc_lo, pc_hi, half, oppa[j], oppb[j])
        osum += _lam_cost(par, ser, pe, sn, lam, variant, sent)
    for p in range(1 << ncomp):
        y = ybase
        bit = 0
        for j in range(na + no):
            if j == fixed:
                continue
            on = (p >> bit) & 1
            bit += 1
            if j < na:
                if on:
                    y |= act[j]
            elif on:
                y |= oppa[j - na]
            else:
                y |= oppb[j - na]
        if y == x:
            continue
        if f[y] + f[x ^ y] + osum >= best:
            screened += 1
            continue
        # a full evaluation covers both node types, so the other label's
        # tree never needs to revisit this split
        if seen[y] == x:
            continue
        seen[y] = x
        evals += 1
        val, ty = _split_value(lo, hi, pc_lo, pc_hi, half, x, y, f, -1, variant, sent)
        if val < best:
            best = val
            by = y
            bt = ty
    return best, by, bt, evals, screened


@njit(cache=True)
def pair_increments(lo, hi, pc_lo, pc_hi, half, f, x, a, b, lam, variant, sent):
    """(same-constraint increment, opp-constraint increment) for groups a, b.

    Merging the last two groups of ``x`` leaves no split at all, so that
    child gets the sentinel.
    """
    if a | b == x:
        inc_same = sent
    else:
        inc_same = f[a | b] - f[a] - f[b]
    par, ser, pe, sn = crossing(lo, hi, pc_lo, pc_hi, half, a, b)
    inc_opp = _lam_cost(par, ser, pe, sn, lam, variant, sent)
    return inc_same, inc_opp


@njit(cache=True)
def select_pair(lo, hi, pc_lo, pc_hi, half, f, x, act, na, lam, bound, variant, sent):
    """Pair of active groups with the best worst-case child bound.

    Returns (i, j, same-child bound, opp-child bound).
    """
    bi = -1
    bj = -1
    blo = -1.0
    bhi = -1.0
    bs = 0.0
    bo = 0.0
    for i in range(na):
        for j in range(i + 1, na):
            s, o = pair_increments(lo, hi, pc_lo, pc_hi, half, f, x, act[i], act[j],
                                   lam, variant, sent)
            cs = min(bound + s, sent)
            co = min(bound + o, sent)
            lo_ = min(cs, co)
            hi_ = max(cs, co)
            if lo_ > blo or (lo_ == blo and hi_ > bhi):
                blo = lo_
                bhi = hi_
                bi = i
                bj = j
                bs = cs
                bo = co
    return bi, bj, bs, bo


@njit(cache=True)
def bb_subset(lo, hi, pc_lo, pc_hi, half, rows, n, x, f, variant, sent,
              threshold, best_first, pool, stats, mem, seen):
    """Branch-and-bound version of the inner minimum for subset ``x``.

    ``stats`` accumulates [expanded, evaluated, pruned, screened].  Returns
    (value, y, type, pool) -- the pool may have been reallocated.
    """
    k = _pc(pc_lo, pc_hi, x, half, (1 << half) - 1)
    if k <= threshold:
        val, y, ty, ev = _gray_subset(lo, hi, pc_lo, pc_hi, half, n, x, f, variant, sent, mem)
        stats[1] += ev
        return val, y, ty, pool
    y0 = greedy_split(rows, pc_lo, pc_hi, half, n, x)
    best, bt = _split_value(lo, hi, pc_lo, pc_hi, half, x, y0, f, -1, variant, sent)
    by = y0
    stats[1] += 1
    seen[y0] = x

    top = 0
    free = np.empty(64, np.int64)
    nfree = 0
    for s in range(2):
        if top >= pool[0].shape[0]:
            pool = _grow(pool)
        slot = top
        top += 1
        act, nact, oppa, oppb, nopp, lam, bnd = pool
        j = 0
        for v in range(n):
            if (x >> v) & 1:
                act[slot, j] = np.int64(1) << v
                j += 1
        nact[slot] = j
        nopp[slot] = 0
        lam[slot] = SER if s == 0 else PAR
        bnd[slot] = 0.0
    heap = [(0.0, np.int64(0), np.int64(0))]
    heap.pop()
    stack = np.empty(64, np.int64)
    sp = 0
    seq = 0
    if best_first:
        heapq.heappush(heap, (0.0, np.int64(0), np.int64(0)))
        heapq.heappush(heap, (0.0, np.int64(1), np.int64(1)))
    else:
        stack[0] = 1
        stack[1] = 0
        sp = 2
    seq = 2

    while True:
        if best_first:
            if len(heap) == 0:
                break
            item = heapq.heappop(heap)
            slot = item[2]
        else:
            if sp == 0:
                break
            sp -= 1
            slot = stack[sp]
        act, nact, oppa, oppb, nopp, lam, bnd = pool
        if bnd[slot] >= best:
            stats[2] += 1
            if nfree == free.shape[0]:
                free = np.concatenate((free, np.empty(free.shape[0], np.int64)))
            free[nfree] = slot
            nfree += 1
            continue
        stats[0] += 1
        na = nact[slot]
        if na <= threshold or na < 2:
            best, by, bt, ev, sc = _leaf_enumerate(
                lo, hi, pc_lo, pc_hi, half, n, x, f, variant, sent,
                act[slot], na, oppa[slot], oppb[slot], nopp[slot], lam[slot],
                best, by, bt, seen)
            stats[1] += ev
            stats[3] += sc
            if nfree == free.shape[0]:
                free = np.concatenate((free, np.empty(free.shape[0], np.int64)))
            free[nfree] = slot
            nfree += 1
            continue
        i, j, bs, bo = select_pair(lo, hi, pc_lo, pc_hi, half, f, x, act[slot], na,
                                   lam[slot], bnd[slot], variant, sent)
        # same child reuses the parent's slot; opp child takes a new one
        if nfree > 0:
            nfree -= 1
            oslot = free[nfree]
        else:
            if top >= pool[0].shape[0]:
                pool = _grow(pool)
                act, nact, oppa, oppb, nopp, lam, bnd = pool
            oslot = top
            top += 1
        a = act[slot, i]
        b = act[slot, j]
        q = 0
        for r in range(na):
            if r != i and r != j:
                act[oslot, q] = act[slot, r]
                q += 1
        nact[oslot] = q
        no = nopp[slot]
        oppa[oslot, :no] = oppa[slot, :no]
        oppb[oslot, :no] = oppb[slot, :no]
        oppa[oslot, no] = a
        oppb[oslot, no] = b
        nopp[oslot] = no + 1
        lam[oslot] = lam[slot]
        bnd[oslot] = bo

        act[slot, i] = a | b
        for r in range(j, na - 1):
            act[slot, r] = act[slot, r + 1]
        nact[slot] = na - 1
        bnd[slot] = bs

        keep_same = bs < best
        keep_opp = bo < best
        if not keep_same:
            stats[2] += 1
        if not keep_opp:
            stats[2] += 1
        if best_first:
            if keep_same:
                heapq.heappush(heap, (bs, np.int64(seq), slot))
            seq += 1
            if keep_opp:
                heapq.heappush(heap, (bo, np.int64(seq), oslot))
            seq += 1
        else:
            if sp + 2 > stack.shape[0]:
                stack = np.concatenate((stack, np.empty(stack.shape[0], np.int64)))
            if keep_opp:
                stack[sp] = oslot
                sp += 1
            if keep_same:
                stack[sp] = slot
                sp += 1
        if not keep_same:
            if nfree == free.shape[0]:
                free = np.concatenate((free, np.empty(free.shape[0], np.int64)))
            free[nfree] = slot
            nfree += 1
        if not keep_opp:
            if nfree == free.shape[0]:
                free = np.concatenate((free, np.empty(free.shape[0], np.int64)))
            free[nfree] = oslot
            nfree += 1
    return best, by, bt, pool


@njit(cache=True)
def fill_table(lo, hi, pc_lo, pc_hi, half, rows, n, variant, sent, inner,
               threshold, best_first, f, choice, ctype, stats):
    """Fill ``f`` over all subsets in increasing mask order.

    A mask's proper subsets are numerically smaller, so this order meets
    the recurrence's dependencies.  ``inner`` 0 = Gray enumeration, 1 =
    branch and bound.  ``stats`` = [expanded, evaluated, pruned, screened].
    """
    lomask = (1 << half) - 1
    mem = np.empty(n, np.int64)
    pool = new_pool(n, 256)
    seen = np.zeros(1 << n if inner == 1 else 1, np.int32)
    for x in range(1, 1 << n):
        if _pc(pc_lo, pc_hi, x, half, lomask) < 4:
            f[x] = 0.0
            choice[x] = 0
            ctype[x] = -1
            continue
        if inner == 0:
            val, y, ty, ev = _gray_subset(lo, hi, pc_lo, pc_hi, half, n, x, f,
                                          variant, sent, mem)
            stats[1] += ev
        else:
            val, y, ty, pool = bb_subset(lo, hi, pc_lo, pc_hi, half, rows, n, x, f,
                                         variant, sent, threshold, best_first,
                                         pool, stats, mem, seen)
        f[x] = val
        choice[x] = y
        ctype[x] = ty
