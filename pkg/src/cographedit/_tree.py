"""Array-backed working cotree and the vertex-insertion step.

The working tree is kept in canonical (alternating) form.  All node
fields live in one ``int32`` array ``nodes[field, node]`` so a whole state
is cheap to copy (beam search) and to pass into jitted code.

Inserting vertex ``x`` with neighbourhood ``N`` amounts to choosing an
internal node ``t`` where ``x`` is attached.  Every child of ``t`` is then
either fully adjacent to ``x`` or fully non-adjacent, and for each proper
ancestor ``a`` of ``t`` the children off the path are fully adjacent when
``a`` is series and fully non-adjacent when ``a`` is parallel.  With only
insertions allowed, the cheapest such position yields a minimum, hence
inclusion-minimal, fill.  The deletion side is the same computation on
the complement: node labels flipped and counts replaced by
``size - count``.
"""

import numpy as np
from numba import njit

PARALLEL = 0
SERIES = 1
LEAF = 2

F_LAB, F_PAR, F_FC, F_LC, F_NS, F_PS, F_NCH, F_SIZE, F_VTX = range(9)
N_FIELDS = 9

INF = 1 << 40


@njit(cache=True)
def new_tree(n):
    cap = 3 * n + 3
    nodes = np.full((N_FIELDS, cap), -1, np.int32)
    leafmap = np.full(n, -1, np.int32)
    meta = np.zeros(2, np.int32)  # root, nodes used
    meta[0] = -1
    return nodes, leafmap, meta


@njit(cache=True)
def _alloc(nodes, meta, label):
    i = meta[1]
    meta[1] += 1
    nodes[F_LAB, i] = label
    nodes[F_PAR, i] = -1
    nodes[F_FC, i] = -1
    nodes[F_LC, i] = -1
    nodes[F_NS, i] = -1
    nodes[F_PS, i] = -1
    nodes[F_NCH, i] = 0
    nodes[F_SIZE, i] = 0
    nodes[F_VTX, i] = -1
    return i


@njit(cache=True)
def _append(nodes, p, c):
    nodes[F_PAR, c] = p
    nodes[F_NS, c] = -1
    last = nodes[F_LC, p]
    nodes[F_PS, c] = last
    if last == -1:
        nodes[F_FC, p] = c
    else:
        nodes[F_NS, last] = c
    nodes[F_LC, p] = c
    nodes[F_NCH, p] += 1


@njit(cache=True)
def _detach(nodes, c):
    p = nodes[F_PAR, c]
    a = nodes[F_PS, c]
    b = nodes[F_NS, c]
    if a == -1:
        nodes[F_FC, p] = b
    else:
        nodes[F_NS, a] = b
    if b == -1:
        nodes[F_LC, p] = a
    else:
        nodes[F_PS, b] = a
    nodes[F_NCH, p] -= 1
    nodes[F_PAR, c] = -1
    nodes[F_PS, c] = -1
    nodes[F_NS, c] = -1


@njit(cache=True)
def _bump(nodes, v):
    while v != -1:
        nodes[F_SIZE, v] += 1
        v = nodes[F_PAR, v]


@njit(cache=True)
def preorder(nodes, meta, order):
    root = meta[0]
    if root == -1:
        return 0
    stack = np.empty(nodes.shape[1], np.int32)
    stack[0] = root
    sp = 1
    k = 0
    while sp > 0:
        sp -= 1
        v = stack[sp]
        order[k] = v
        k += 1
        c = nodes[F_LC, v]
        while c != -1:
            stack[sp] = c
            sp += 1
            c = nodes[F_PS, c]
    return k


@njit(cache=True)
def leaf_counts(nodes, order, k, flags, m):
    """m[node] = number of leaves below node whose vertex is flagged."""
    for i in range(k):
        m[order[i]] = 0
    for i in range(k - 1, -1, -1):
        v = order[i]
        if nodes[F_LAB, v] == LEAF:
            m[v] = flags[nodes[F_VTX, v]]
        p = nodes[F_PAR, v]
        if p != -1:
            m[p] += m[v]


@njit(cache=True)
def shift_path(nodes, leafmap, m, u, delta):
    v = leafmap[u]
    while v != -1:
        m[v] += delta
        v = nodes[F_PAR, v]


@njit(cache=True)
def best_position(nodes, order, k, m, side, acc, accinf):
    """Cheapest attachment node for one side; returns (fill size, node).

    ``side`` 0 fills edges into ``N``; side 1 fills edges of the complement,
    i.e. deletes edges.  Ties go to the last node in preorder, which keeps
    the attachment as deep as possible.
    """
    if k == 0:
        return 0, -1
    root = order[0]
    if nodes[F_LAB, root] == LEAF:
        return 0, root
    acc[root] = 0
    accinf[root] = False
    best = INF
    bt = -1
    for i in range(k):
        a = order[i]
        if nodes[F_LAB, a] == LEAF:
            continue
        eff_series = (nodes[F_LAB, a] ^ side) == SERIES
        gfin = 0
        ginf = 0
        h = 0
        c = nodes[F_FC, a]
        while c != -1:
            s = nodes[F_SIZE, c]
            mm = m[c] if side == 0 else s - m[c]
            if eff_series:
                gfin += s - mm
            elif mm > 0:
                ginf += 1
            if mm > 0:
                h += s - mm
            c = nodes[F_NS, c]
        if not accinf[a]:
            cost = acc[a] + h
            if cost <= best:
                best = cost
                bt = a
        c = nodes[F_FC, a]
        while c != -1:
            s = nodes[F_SIZE, c]
            mm = m[c] if side == 0 else s - m[c]
            if eff_series:
                acc[c] = acc[a] + gfin - (s - mm)
                accinf[c] = accinf[a] or ginf > 0
            else:
                acc[c] = acc[a] + gfin
                accinf[c] = accinf[a] or (ginf - (1 if mm > 0 else 0)) > 0
            c = nodes[F_NS, c]
    return best, bt


@njit(cache=True)
def _mark_leaves(nodes, c, out, stack):
    stack[0] = c
    sp = 1
    while sp > 0:
        sp -= 1
        v = stack[sp]
        if nodes[F_LAB, v] == LEAF:
            out[nodes[F_VTX, v]] = 1
        else:
            ch = nodes[F_FC, v]
            while ch != -1:
                stack[sp] = ch
                sp += 1
                ch = nodes[F_NS, ch]


@njit(cache=True)
def realized_neighborhood(nodes, t, m, side, inserted, out):
    """Neighbourhood of the new vertex when attached at ``t`` on ``side``."""
    out[:] = 0
    if t == -1:
        return
    stack = np.empty(nodes.shape[1], np.int32)
    if nodes[F_LAB, t] == LEAF:
        mm = m[t] if side == 0 else 1 - m[t]
        if mm > 0:
            out[nodes[F_VTX, t]] = 1
    else:
        c = nodes[F_FC, t]
        while c != -1:
            s = nodes[F_SIZE, c]
            mm = m[c] if side == 0 else s - m[c]
            if mm > 0:
                _mark_leaves(nodes, c, out, stack)
            c = nodes[F_NS, c]
        p = t
        a = nodes[F_PAR, t]
        while a != -1:
            if (nodes[F_LAB, a] ^ side) == SERIES:
                c = nodes[F_FC, a]
                while c != -1:
                    if c != p:
                        _mark_leaves(nodes, c, out, stack)
                    c = nodes[F_NS, c]
            p = a
            a = nodes[F_PAR, a]
    if side == 1:
        for u in range(out.shape[0]):
            out[u] = 1 - out[u] if inserted[u] else 0


@njit(cache=True)
def _rep_leaf_vertex(nodes, c):
    while nodes[F_LAB, c] != LEAF:
        c = nodes[F_FC, c]
    return nodes[F_VTX, c]


@njit(cache=True)
def attach(nodes, leafmap, meta, x, t, nbr):
    """Insert leaf ``x`` at node ``t``; ``nbr`` must be realizable there."""
    xl = _alloc(nodes, meta, LEAF)
    nodes[F_VTX, xl] = x
    nodes[F_SIZE, xl] = 1
    leafmap[x] = xl
    root = meta[0]
    if root == -1:
        meta[0] = xl
        return
    if nodes[F_LAB, t] == LEAF:
        y = nodes[F_VTX, t]
        q = _alloc(nodes, meta, SERIES if nbr[y] else PARALLEL)
        _append(nodes, q, t)
        _append(nodes, q, xl)
        nodes[F_SIZE, q] = 2
        meta[0] = q
        return
    lab = nodes[F_LAB, t]
    # children that must be split off from t: non-adjacent ones under a
    # series node, adjacent ones under a parallel node
    want_adj = lab == PARALLEL
    nsplit = 0
    total = 0
    first_split = -1
    c = nodes[F_FC, t]
    while c != -1:
        total += 1
        is_adj = nbr[_rep_leaf_vertex(nodes, c)] == 1
        if is_adj == want_adj:
            nsplit += 1
            if first_split == -1:
                first_split = c
        c = nodes[F_NS, c]
    if nsplit == 0:
        _append(nodes, t, xl)
        _bump(nodes, t)
    elif nsplit == total:
        p = nodes[F_PAR, t]
        if p != -1:
            _append(nodes, p, xl)
            _bump(nodes, p)
        else:
            q = _alloc(nodes, meta, 1 - lab)
            _append(nodes, q, t)
            _append(nodes, q, xl)
            nodes[F_SIZE, q] = nodes[F_SIZE, t] + 1
            meta[0] = q
    elif nsplit == 1:
        c = first_split
        if nodes[F_LAB, c] == LEAF:
            _detach(nodes, c)
            q = _alloc(nodes, meta, 1 - lab)
            _append(nodes, q, c)
            _append(nodes, q, xl)
            nodes[F_SIZE, q] = 2
            _append(nodes, t, q)
            _bump(nodes, t)
        else:
            _append(nodes, c, xl)
            _bump(nodes, c)
    else:
        r = _alloc(nodes, meta, lab)
        c = nodes[F_FC, t]
        while c != -1:
            nxt = nodes[F_NS, c]
            is_adj = nbr[_rep_leaf_vertex(nodes, c)] == 1
            if is_adj == want_adj:
                _detach(nodes, c)
                _append(nodes, r, c)
                nodes[F_SIZE, r] += nodes[F_SIZE, c]
            c = nxt
        q = _alloc(nodes, meta, 1 - lab)
        _append(nodes, q, r)
        _append(nodes, q, xl)
        nodes[F_SIZE, q] = nodes[F_SIZE, r] + 1
        _append(nodes, t, q)
        _bump(nodes, t)


@njit(cache=True)
def _scratch(n):
    cap = 3 * n + 3
    order = np.empty(cap, np.int32)
    m = np.zeros(cap, np.int64)
    m2 = np.zeros(cap, np.int64)
    acc = np.zeros(cap, np.int64)
    accinf = np.zeros(cap, np.bool_)
    return order, m, m2, acc, accinf


@njit(cache=True)
def choose_step(nodes, leafmap, meta, nb, inserted, modify, order, m, m2, acc, accinf):
    """Best way to insert a vertex with neighbour flags ``nb``.

    Returns (edit count, side, node, toggled vertex or -1).  Options are
    tried in a fixed order and replaced only on strict improvement, so a
    tie between the two plain sides goes to insertion.
    """
    k = preorder(nodes, meta, order)
    leaf_counts(nodes, order, k, nb, m)
    c0, t0 = best_position(nodes, order, k, m, 0, acc, accinf)
    c1, t1 = best_position(nodes, order, k, m, 1, acc, accinf)
    if c0 <= c1:
        best, side, bt = c0, 0, t0
    else:
        best, side, bt = c1, 1, t1
    bu = -1
    if modify and k > 0:
        n = nb.shape[0]
        for s in range(2):
            for u in range(n):
                if not inserted[u]:
                    continue
                # side 0 drops an existing edge, side 1 adds a missing one
                if (s == 0 and nb[u] == 0) or (s == 1 and nb[u] == 1):
                    continue
                if best <= 1:
                    break
                for i in range(k):
                    m2[order[i]] = m[order[i]]
                shift_path(nodes, leafmap, m2, u, -1 if s == 0 else 1)
                c, t = best_position(nodes, order, k, m2, s, acc, accinf)
                if c + 1 < best:
                    best, side, bt, bu = c + 1, s, t, u
    return best, side, bt, bu


@njit(cache=True)
def apply_step(nodes, leafmap, meta, nb, inserted, x, side, t, u, out, order, m):
    """Attach ``x`` per a chosen option; ``out`` receives its final neighbours."""
    k = preorder(nodes, meta, order)
    if u >= 0:
        nb[u] = 1 - nb[u]
    leaf_counts(nodes, order, k, nb, m)
    if u >= 0:
        nb[u] = 1 - nb[u]
    realized_neighborhood(nodes, t, m, side, inserted, out)
    attach(nodes, leafmap, meta, x, t, out)


@njit(cache=True)
def insert_vertex(nodes, leafmap, meta, adj_g, adj_h, inserted, x, modify):
    """One heuristic step for vertex ``x``; returns the number of edits."""
    n = adj_g.shape[0]
    order, m, m2, acc, accinf = _scratch(n)
    nb = np.zeros(n, np.uint8)
    for u in range(n):
        if inserted[u] and adj_g[x, u]:
            nb[u] = 1
    cost, side, t, u = choose_step(nodes, leafmap, meta, nb, inserted, modify,
                                   order, m, m2, acc, accinf)
    out = np.zeros(n, np.uint8)
    apply_step(nodes, leafmap, meta, nb, inserted, x, side, t, u, out, order, m)
    edits = 0
    for v in range(n):
        if inserted[v]:
            adj_h[x, v] = out[v]
            adj_h[v, x] = out[v]
            if out[v] != nb[v]:
                edits += 1
    inserted[x] = 1
    return edits


@njit(cache=True)
def run_order(adj_g, order_in, modify):
    """Insert vertices in the given order; returns (realized adjacency, cost)."""
    n = adj_g.shape[0]
    nodes, leafmap, meta = new_tree(n)
    adj_h = np.zeros((n, n), np.uint8)
    inserted = np.zeros(n, np.uint8)
    total = 0
    for i in range(order_in.shape[0]):
        total += insert_vertex(nodes, leafmap, meta, adj_g, adj_h, inserted, order_in[i], modify)
    return adj_h, total, nodes, leafmap, meta


@njit(cache=True)
def candidate_costs(nodes, leafmap, meta, adj_g, inserted, cands):
    """Plain (non-modify) step cost of each candidate vertex on one state."""
    n = adj_g.shape[0]
    order, m, m2, acc, accinf = _scratch(n)
    k = preorder(nodes, meta, order)
    nb = np.zeros(n, np.uint8)
    out = np.empty(cands.shape[0], np.int64)
    for j in range(cands.shape[0]):
        x = cands[j]
        for u in range(n):
            nb[u] = 1 if (inserted[u] and adj_g[x, u]) else 0
        leaf_counts(nodes, order, k, nb, m)
        c0, _ = best_position(nodes, order, k, m, 0, acc, accinf)
        c1, _ = best_position(nodes, order, k, m, 1, acc, accinf)
        out[j] = min(c0, c1)
    return out


@njit(cache=True)
def recognize(adj):
    """Incremental recognition; returns (tree..., index of first failing vertex or -1)."""
    n = adj.shape[0]
    nodes, leafmap, meta = new_tree(n)
    order, m, m2, acc, accinf = _scratch(n)
    inserted = np.zeros(n, np.uint8)
    nb = np.zeros(n, np.uint8)
    out = np.zeros(n, np.uint8)
    for x in range(n):
        for u in range(n):
            nb[u] = 1 if (inserted[u] and adj[x, u]) else 0
        k = preorder(nodes, meta, order)
        leaf_counts(nodes, order, k, nb, m)
        c, t = best_position(nodes, order, k, m, 0, acc, accinf)
        if c > 0:
            return nodes, leafmap, meta, x
        realized_neighborhood(nodes, t, m, 0, inserted, out)
        attach(nodes, leafmap, meta, x, t, out)
        inserted[x] = 1
    return nodes, leafmap, meta, -1


@njit(cache=True)
def tree_fill(nodes, leafmap, meta, nb, inserted):
    """Minimum insertion-only fill for a new vertex; returns final neighbour flags."""
    n = nb.shape[0]
    order, m, m2, acc, accinf = _scratch(n)
    k = preorder(nodes, meta, order)
    leaf_counts(nodes, order, k, nb, m)
    c, t = best_position(nodes, order, k, m, 0, acc, accinf)
    out = np.zeros(n, np.uint8)
    realized_neighborhood(nodes, t, m, 0, inserted, out)
    return c, out


@njit(cache=True)
def side_costs(nodes, leafmap, meta, nb):
    n = nb.shape[0]
    order, m, m2, acc, accinf = _scratch(n)
    k = preorder(nodes, meta, order)
    leaf_counts(nodes, order, k, nb, m)
    c0, _ = best_position(nodes, order, k, m, 0, acc, accinf)
    c1, _ = best_position(nodes, order, k, m, 1, acc, accinf)
    return c0, c1
