"""Exact balanced-transportation solver: primal network simplex.

Classic spanning-tree simplex on the bipartite transportation graph plus an
artificial root node, with block pricing and Cunningham's strongly feasible
tree rule for the leaving arc (anti-cycling). Supplies and flows are int64
throughout, so feasibility, degeneracy and termination are exact; only arc
costs and node potentials are floating point.

Preconditions: sum(supply) == sum(demand) exactly, and the bipartite graph is
complete, so a feasible artificial-free flow always exists. The artificial
cost only has to dominate max cost / 2 for the optimum to be artificial-free;
keeping it small keeps potentials small and pricing noise far below EPS.
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_OPTIMAL = 0
STATUS_INFEASIBLE = 1
STATUS_ITER_LIMIT = 2

# Pricing tolerance. Tree arcs carry exactly zero reduced cost by
# construction; potentials stay O(10 * max cost), so noise is ~1e-15.
EPS = 1e-11


@njit(cache=True)
def _remove_edge(s, t, parent, parent_edge, size, nxt, prv, last):
    # Detach subtree rooted at t (child of s). Its thread becomes circular.
    size_t = size[t]
    prev_t = prv[t]
    last_t = last[t]
    next_last_t = nxt[last_t]
    parent[t] = -1
    parent_edge[t] = -1
    prv[next_last_t] = prev_t
    nxt[prev_t] = next_last_t
    nxt[last_t] = t
    prv[t] = last_t
    w = s
    while w != -1:
        size[w] -= size_t
        if last[w] == last_t:
            last[w] = prev_t
        w = parent[w]


@njit(cache=True)
def _make_root(q, parent, parent_edge, size, nxt, prv, last, anc):
    # Re-root the detached (circular-thread) component at q by flipping the
    # parent pointers along q's ancestor chain, top down.
    k = 0
    v = q
    while v != -1:
        anc[k] = v
        k += 1
        v = parent[v]
    idx = k - 1
    while idx > 0:
        p = anc[idx]
        qq = anc[idx - 1]
        size_p = size[p]
        last_p = last[p]
        parent[p] = qq
        parent_edge[p] = parent_edge[qq]
        parent[qq] = -1
        parent_edge[qq] = -1
        size[p] = size_p - size[qq]
        size[qq] = size_p
        last_q = last[qq]
        prev_q = prv[qq]
        next_last_q = nxt[last_q]
        # splice qq's block out of the circular thread
        nxt[prev_q] = next_last_q
        prv[next_last_q] = prev_q
        if last_p == last_q:
            last[p] = prev_q
            last_p = prev_q
        # new preorder: qq's block, then p's remaining block
        nxt[last_q] = p
        prv[p] = last_q
        nxt[last_p] = qq
        prv[qq] = last_p
        last[qq] = last_p
        idx -= 1


@njit(cache=True)
def _add_edge(i, p, q, parent, parent_edge, size, nxt, prv, last):
    # Attach the detached subtree rooted at q as a child of p via arc i.
    last_p = last[p]
    next_last_p = nxt[last_p]
    size_q = size[q]
    last_q = last[q]
    parent[q] = p
    parent_edge[q] = i
    nxt[last_p] = q
    prv[q] = last_p
    nxt[last_q] = next_last_p
    prv[next_last_p] = last_q
    w = p
    while w != -1:
        size[w] += size_q
        if last[w] == last_p:
            last[w] = last_q
        w = parent[w]


@njit(cache=True)
def _update_potentials(i, p, q, S, T, C, pi, nxt, last):
    # Restore zero reduced cost on arc i, shifting the whole subtree of q.
    if q == T[i]:
        d = pi[p] - C[i] - pi[q]
    else:
        d = pi[p] + C[i] - pi[q]
    lq = last[q]
    v = q
    while True:
        pi[v] += d
        if v == lq:
            break
        v = nxt[v]


@njit(cache=True)
def _simplex_core(tail, head, cost, cap, demand, eps):
    n = demand.shape[0]
    e = tail.shape[0]
    root = n
    n_tot = n + 1
    e_tot = e + n

    S = np.empty(e_tot, np.int64)
    T = np.empty(e_tot, np.int64)
    C = np.empty(e_tot, np.float64)
    U = np.empty(e_tot, np.int64)
    x = np.zeros(e_tot, np.int64)
    S[:e] = tail
    T[:e] = head
    C[:e] = cost
    U[:e] = cap

    max_cost = 0.0
    for a in range(e):
        ca = abs(cost[a])
        if ca > max_cost:
            max_cost = ca
    faux = 4.0 * (max_cost + 1.0)

    total = np.int64(0)
    balance = np.int64(0)
    for v in range(n):
        d = demand[v]
        balance += d
        total += d if d > 0 else -d
    if balance != 0:
        return x[:e], np.zeros(n_tot, np.float64), STATUS_INFEASIBLE
    if total == 0:
        total = 1

    # Initial strongly feasible star: every node hangs off the root by its
    # artificial arc, oriented so positive flow points toward the demand.
    for v in range(n):
        a = e + v
        if demand[v] > 0:
            S[a] = root
            T[a] = v
            x[a] = demand[v]
        else:
            S[a] = v
            T[a] = root
            x[a] = -demand[v]
        C[a] = faux
        U[a] = total

    parent = np.empty(n_tot, np.int64)
    parent_edge = np.empty(n_tot, np.int64)
    size = np.empty(n_tot, np.int64)
    nxt = np.empty(n_tot, np.int64)
    prv = np.empty(n_tot, np.int64)
    last = np.empty(n_tot, np.int64)
    pi = np.empty(n_tot, np.float64)
    for v in range(n):
        parent[v] = root
        parent_edge[v] = e + v
        size[v] = 1
        nxt[v] = v + 1 if v < n - 1 else root
        prv[v] = v - 1 if v > 0 else root
        last[v] = v
        pi[v] = faux if demand[v] <= 0 else -faux
    parent[root] = -1
    parent_edge[root] = -1
    size[root] = n + 1
    nxt[root] = 0
    prv[root] = n - 1
    last[root] = n - 1
    pi[root] = 0.0

    cyc_nodes = np.empty(2 * n_tot + 1, np.int64)
    cyc_edges = np.empty(2 * n_tot + 1, np.int64)
    anc = np.empty(n_tot, np.int64)

    block = int(np.ceil(np.sqrt(e_tot)))
    n_blocks = (e_tot + block - 1) // block
    max_pivots = 50 * e_tot + 2_000_000

    f = 0
    scanned = 0
    pivots = 0
    while scanned < n_blocks:
        best = -1
        best_rc = -eps
        for off in range(block):
            a = f + off
            if a >= e_tot:
                a -= e_tot
            if x[a] == 0:
                rc = C[a] - pi[S[a]] + pi[T[a]]
            else:
                rc = pi[S[a]] - C[a] - pi[T[a]]
            if rc < best_rc:
                best_rc = rc
                best = a
        f += block
        if f >= e_tot:
            f -= e_tot
        if best < 0:
            scanned += 1
            continue
        scanned = 0
        pivots += 1
        if pivots > max_pivots:
            return x[:e], pi, STATUS_ITER_LIMIT

        i = best
        if x[i] == 0:
            p = S[i]
            q = T[i]
        else:
            p = T[i]
            q = S[i]

        pa = p
        qa = q
        sp = size[pa]
        sq = size[qa]
        while True:
            while sp < sq:
                pa = parent[pa]
                sp = size[pa]
            while sp > sq:
                qa = parent[qa]
                sq = size[qa]
            if sp == sq:
                if pa != qa:
                    pa = parent[pa]
                    sp = size[pa]
                    qa = parent[qa]
                    sq = size[qa]
                else:
                    break
        apex = pa

        # Cycle node/arc lists, oriented p -> q through the entering arc;
        # cyc_edges[t] is traversed leaving cyc_nodes[t].
        k1 = 0
        v = p
        while v != apex:
            k1 += 1
            v = parent[v]
        v = p
        t = k1
        cyc_nodes[t] = v
        while v != apex:
            ev = parent_edge[v]
            v = parent[v]
            t -= 1
            cyc_nodes[t] = v
            cyc_edges[t] = ev
        cyc_edges[k1] = i
        t = k1 + 1
        v = q
        while v != apex:
            cyc_nodes[t] = v
            cyc_edges[t] = parent_edge[v]
            t += 1
            v = parent[v]
        length = t

        # Leaving arc: minimum residual, scanning the cycle backwards so that
        # ties pick the last blocking arc (keeps the tree strongly feasible).
        min_res = np.int64(0)
        j_leave = -1
        s_leave = -1
        pos_leave = -1
        t = length - 1
        while t >= 0:
            ed = cyc_edges[t]
            nd = cyc_nodes[t]
            if S[ed] == nd:
                res = U[ed] - x[ed]
            else:
                res = x[ed]
            if j_leave < 0 or res < min_res:
                min_res = res
                j_leave = ed
                s_leave = nd
                pos_leave = t
            t -= 1
        t_leave = T[j_leave] if S[j_leave] == s_leave else S[j_leave]

        if min_res > 0:
            for t in range(length):
                ed = cyc_edges[t]
                if S[ed] == cyc_nodes[t]:
                    x[ed] += min_res
                else:
                    x[ed] -= min_res

        if j_leave != i:
            if parent[t_leave] != s_leave:
                tmp = s_leave
                s_leave = t_leave
                t_leave = tmp
            if pos_leave < k1:
                pp = q
                qq = p
            else:
                pp = p
                qq = q
            _remove_edge(s_leave, t_leave, parent, parent_edge, size, nxt, prv, last)
            _make_root(qq, parent, parent_edge, size, nxt, prv, last, anc)
            _add_edge(i, pp, qq, parent, parent_edge, size, nxt, prv, last)
            _update_potentials(i, pp, qq, S, T, C, pi, nxt, last)
        # else: the entering arc itself is blocking and flips bound in place.

    for v in range(n):
        if x[e + v] != 0:
            return x[:e], pi, STATUS_INFEASIBLE
    return x[:e], pi, STATUS_OPTIMAL


def solve_transportation(supply, demand, cost):
    """Exact optimum of the balanced transportation problem.

    supply: int64 (m,), demand: int64 (n,) with equal sums; cost: float64
    (m, n). Returns (flow int64 (m, n), u (m,), v (n,)) where (u, v) are
    optimal dual potentials satisfying u_i + v_j <= c_ij and exact
    complementary slackness on the support of the flow.
    """
    supply = np.ascontiguousarray(supply, dtype=np.int64)
    demand = np.ascontiguousarray(demand, dtype=np.int64)
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    m, n = cost.shape
    if supply.shape[0] != m or demand.shape[0] != n:
        raise ValueError("cost shape does not match supply/demand lengths")
    if supply.sum() != demand.sum():
        raise ValueError("unbalanced problem: supply and demand sums differ")
    if np.any(supply < 0) or np.any(demand < 0):
        raise ValueError("negative supplies or demands")

    node_demand = np.concatenate([-supply, demand])
    total = np.int64(supply.sum())
    tails = np.repeat(np.arange(m, dtype=np.int64), n)
    heads = m + np.tile(np.arange(n, dtype=np.int64), m)
    caps = np.full(m * n, max(total, 1), dtype=np.int64)

    flows, pi, status = _simplex_core(tails, heads, cost.ravel(), caps, node_demand, EPS)
    if status == STATUS_INFEASIBLE:
        raise RuntimeError("transportation problem reported infeasible")
    if status == STATUS_ITER_LIMIT:
        raise RuntimeError("network simplex hit the pivot safety limit")
    flow = flows.reshape(m, n)
    u = pi[:m].copy()
    v = -pi[m : m + n]
    return flow, u, v
