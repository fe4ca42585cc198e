"""Compiled decode loop.

Mirrors `scheduling.decode_reference` operation for operation (same float
accumulation order, same tie handling, same candidate-selection order) so
the two paths produce identical hard decisions, group traces, and
scheduling-event logs. Any change here must keep that equivalence; the test
suite checks it on toy and full-size codes.
"""

from __future__ import annotations

import numpy as np
from numba import njit

PHI_FLOOR = 1e-12
PHI_CEIL = 30.0


@njit(cache=True, inline="always")
def _phi(x):
    if x < PHI_FLOOR:
        x = PHI_FLOOR
    elif x > PHI_CEIL:
        x = PHI_CEIL
    return np.log1p(2.0 / np.expm1(x))


@njit(cache=True, inline="always")
def _sgn(x, tie):
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 1.0 if tie == 0 else -1.0


@njit(cache=True, inline="always")
def _sbit(x, tie):
    if x > 0.0:
        return np.int64(0)
    if x < 0.0:
        return np.int64(1)
    return np.int64(tie)


@njit(cache=True, inline="always")
def _splitmix(state):
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return state, z ^ (z >> np.uint64(31))


@njit(cache=True)
def _thin(chk_ptr, chk_var, var_ptr, var_edge, edge_check,
          pool, npool, pool_mask, cap, select_mode, sm_state, group_buf):
    """Greedy check-disjoint selection from an ascending candidate pool.

    pool_mask[pool[i]] must be 1 on entry; it is fully cleared on exit.
    Returns (group size, advanced splitmix state).
    """
    gsize = 0
    alive = npool
    scan = 0
    while alive > 0 and (cap == 0 or gsize < cap):
        if select_mode == 0:
            while pool_mask[pool[scan]] == 0:
                scan += 1
            pick = pool[scan]
        else:
            sm_state, z = _splitmix(sm_state)
            k = np.int64(z % np.uint64(alive))
            pick = np.int64(-1)
            for i in range(npool):
                if pool_mask[pool[i]] == 1:
                    if k == 0:
                        pick = pool[i]
                        break
                    k -= 1
        group_buf[gsize] = pick
        gsize += 1
        for kk in range(var_ptr[pick], var_ptr[pick + 1]):
            m = edge_check[var_edge[kk]]
            for e2 in range(chk_ptr[m], chk_ptr[m + 1]):
                n2 = chk_var[e2]
                if pool_mask[n2] == 1:
                    pool_mask[n2] = 0
                    alive -= 1
        if pool_mask[pick] == 1:
            pool_mask[pick] = 0
            alive -= 1
    for i in range(npool):
        pool_mask[pool[i]] = 0
    return gsize, sm_state


@njit(cache=True)
def decode_kernel(chk_ptr, chk_var, var_ptr, var_edge, edge_check,
                  chk_deg, var_deg, dv_max, scale_ptr, scale_flat,
                  lam, tie_vn, tie_edge,
                  variant, kern, group_ptr, group_idx,
                  eta, delta, max_iter, cap, select_mode, sm_seed,
                  want_trace, want_events):
    N = lam.size
    M = chk_ptr.size - 1
    E = chk_var.size

    # message state: init c2v = 0, v2c = channel LLR
    # phi_edge / sgn_edge cache the transform and resolved sign of each v2c
    # entry, refreshed whenever v2c is written
    v2c = np.empty(E, np.float64)
    c2v = np.zeros(E, np.float64)
    phi_edge = np.zeros(E, np.float64)
    sgn_edge = np.empty(E, np.float64)
    total = lam.copy()
    hard = np.empty(N, np.uint8)
    synd = np.empty(M, np.uint8)
    for e in range(E):
        v2c[e] = lam[chk_var[e]]
        sgn_edge[e] = _sgn(v2c[e], tie_edge[e])
        if kern == 0:
            phi_edge[e] = _phi(abs(v2c[e]))
    for n in range(N):
        x = total[n]
        hard[n] = 0 if x > 0.0 else (1 if x < 0.0 else tie_vn[n])
    for m in range(M):
        x = np.uint8(0)
        for e in range(chk_ptr[m], chk_ptr[m + 1]):
            x ^= hard[chk_var[e]]
        synd[m] = x

    # unsatisfied-check count per variable, maintained incrementally as
    # syndromes flip; equals a fresh recomputation at every use
    ucn_cnt = np.zeros(N, np.int64)
    for m in range(M):
        if synd[m]:
            for e in range(chk_ptr[m], chk_ptr[m + 1]):
                ucn_cnt[chk_var[e]] += 1

    updated = np.zeros(N, np.uint8)

    # per-check aggregate scratch (valid only for stamped checks)
    agg_a = np.zeros(M, np.float64)    # BP: phi-sum   MS: min1
    agg_b = np.zeros(M, np.float64)    # MS: min2
    agg_e = np.zeros(M, np.int64)      # MS: argmin edge
    agg_p = np.zeros(M, np.float64)    # sign product
    chk_list = np.empty(M, np.int64)
    chk_stamp = np.zeros(M, np.int64)
    chk_ctr = np.int64(0)

    # metric scratch
    e_val = np.zeros(N, np.int64)
    f_val = np.zeros(N, np.int64)
    a_val = np.zeros(N, np.int64)
    t_chk = np.zeros(M, np.int64)
    t_stamp = np.zeros(M, np.int64)
    t_ctr = np.int64(0)
    s_buf = np.empty(N, np.int64)
    pool = np.empty(N, np.int64)
    pool_mask = np.zeros(N, np.uint8)
    group_buf = np.empty(N, np.int64)

    cap_entries = max_iter * N
    if want_trace:
        tr_members = np.empty(cap_entries, np.int32)
        tr_ptr = np.empty(cap_entries + 1, np.int64)
        tr_iter = np.empty(cap_entries, np.int32)
        tr_branch = np.empty(cap_entries, np.int8)
    else:
        tr_members = np.empty(0, np.int32)
        tr_ptr = np.empty(1, np.int64)
        tr_iter = np.empty(0, np.int32)
        tr_branch = np.empty(0, np.int8)
    tr_ptr[0] = 0
    n_tr = 0
    tr_fill = 0

    if want_events:
        events = np.empty((cap_entries, 8), np.int64)
    else:
        events = np.empty((0, 8), np.int64)
    n_ev = 0

    sm_state = sm_seed
    adaptive = variant >= 2
    method = np.int64(1) if variant == 2 else np.int64(2)

    converged = False
    it = np.int64(0)
    while it < max_iter and not converged:
        it += 1
        for n in range(N):
            updated[n] = 0
        vc_count = np.int64(N)
        g_cursor = 0
        while vc_count > 0:
            branch = np.int64(0)
            gsize = np.int64(0)

            # ---- Step 2: form the next group ----
            if not adaptive:
                for i in range(group_ptr[g_cursor], group_ptr[g_cursor + 1]):
                    group_buf[gsize] = group_idx[i]
                    gsize += 1
                g_cursor += 1
            else:
                add_e = np.int64(0)
                cmp_q = np.int64(0)
                s_size = np.int64(0)
                add_a = np.int64(0)
                for m in range(M):
                    if synd[m]:
                        add_e += chk_deg[m]
                for n in range(N):
                    e_val[n] = scale_flat[scale_ptr[n] + ucn_cnt[n]]

                if method == 2:
                    estar = np.int64(-1)
                    for n in range(N):
                        if updated[n] == 0 and e_val[n] > estar:
                            estar = e_val[n]
                    if estar < delta:
                        branch = 1
                        for n in range(N):
                            if updated[n] == 0:
                                group_buf[gsize] = n
                                gsize += 1
                                if cap > 0 and gsize == cap:
                                    break
                    else:
                        branch = 2
                        npool = np.int64(0)
                        for n in range(N):
                            if updated[n] == 0 and e_val[n] == estar:
                                pool[npool] = n
                                pool_mask[n] = 1
                                npool += 1
                        gsize, sm_state = _thin(
                            chk_ptr, chk_var, var_ptr, var_edge, edge_check,
                            pool, npool, pool_mask, cap, select_mode, sm_state,
                            group_buf)
                else:
                    # vote metric over the unsatisfied checks
                    for n in range(N):
                        f_val[n] = 0
                    for m in range(M):
                        if synd[m]:
                            cmp_q += chk_deg[m] - 1
                            emax = np.int64(-1)
                            for e in range(chk_ptr[m], chk_ptr[m + 1]):
                                ev = e_val[chk_var[e]]
                                if ev > emax:
                                    emax = ev
                            for e in range(chk_ptr[m], chk_ptr[m + 1]):
                                n2 = chk_var[e]
                                if e_val[n2] == emax and e_val[n2] >= eta:
                                    f_val[n2] += 1
                    fstar = np.int64(0)
                    for n in range(N):
                        if updated[n] == 0 and f_val[n] > fstar:
                            fstar = f_val[n]
                    if fstar == 0:
                        branch = 1
                        for n in range(N):
                            if updated[n] == 0:
                                group_buf[gsize] = n
                                gsize += 1
                                if cap > 0 and gsize == cap:
                                    break
                    else:
                        branch = 2
                        for n in range(N):
                            if updated[n] == 0 and f_val[n] == fstar:
                                s_buf[s_size] = n
                                s_size += 1
                                add_a += var_deg[n] - 1
                        # flip pressure over the vote maximizers
                        t_ctr += 1
                        astar = np.int64(-1)
                        for i in range(s_size):
                            n = s_buf[i]
                            sb_l = _sbit(total[n], tie_vn[n])
                            cnt = np.int64(0)
                            for k in range(var_ptr[n], var_ptr[n + 1]):
                                e = var_edge[k]
                                m = edge_check[e]
                                if t_stamp[m] != t_ctr:
                                    t_stamp[m] = t_ctr
                                    tx = np.int64(0)
                                    for e2 in range(chk_ptr[m], chk_ptr[m + 1]):
                                        tx ^= np.int64(0) if sgn_edge[e2] > 0.0 else np.int64(1)
                                    t_chk[m] = tx
                                pred = t_chk[m] ^ (np.int64(0) if sgn_edge[e] > 0.0 else np.int64(1))
                                cnt += pred ^ sb_l
                            a_val[n] = scale_flat[scale_ptr[n] + cnt]
                            if a_val[n] > astar:
                                astar = a_val[n]
                        npool = np.int64(0)
                        for i in range(s_size):
                            n = s_buf[i]
                            if a_val[n] == astar:
                                pool[npool] = n
                                pool_mask[n] = 1
                                npool += 1
                        gsize, sm_state = _thin(
                            chk_ptr, chk_var, var_ptr, var_edge, edge_check,
                            pool, npool, pool_mask, cap, select_mode, sm_state,
                            group_buf)

                if want_events:
                    events[n_ev, 0] = it
                    events[n_ev, 1] = method
                    events[n_ev, 2] = add_e
                    events[n_ev, 3] = cmp_q
                    events[n_ev, 4] = vc_count
                    events[n_ev, 5] = s_size
                    events[n_ev, 6] = add_a
                    events[n_ev, 7] = branch
                    n_ev += 1

            if want_trace:
                tr_iter[n_tr] = np.int32(it)
                tr_branch[n_tr] = np.int8(branch)
                for i in range(gsize):
                    tr_members[tr_fill + i] = np.int32(group_buf[i])
                tr_fill += gsize
                tr_ptr[n_tr + 1] = tr_fill
                n_tr += 1

            # ---- Step 3: update the group ----
            # aggregate pass over adjacent checks, snapshot of current v2c
            n_chk = np.int64(0)
            chk_ctr += 1
            for i in range(gsize):
                n = group_buf[i]
                for k in range(var_ptr[n], var_ptr[n + 1]):
                    e = var_edge[k]
                    m = edge_check[e]
                    if chk_stamp[m] == chk_ctr:
                        continue
                    chk_stamp[m] = chk_ctr
                    chk_list[n_chk] = m
                    n_chk += 1
                    sign = 1.0
                    if kern == 0:
                        acc = 0.0
                        for e2 in range(chk_ptr[m], chk_ptr[m + 1]):
                            sign *= sgn_edge[e2]
                            acc += phi_edge[e2]
                        agg_a[m] = acc
                    else:
                        min1 = np.inf
                        min2 = np.inf
                        amin = np.int64(-1)
                        for e2 in range(chk_ptr[m], chk_ptr[m + 1]):
                            sign *= sgn_edge[e2]
                            a = abs(v2c[e2])
                            if a < min1:
                                min2 = min1
                                min1 = a
                                amin = e2
                            elif a < min2:
                                min2 = a
                        agg_a[m] = min1
                        agg_b[m] = min2
                        agg_e[m] = amin
                    agg_p[m] = sign

            # member pass: c2v, total, decision, outgoing v2c
            for i in range(gsize):
                n = group_buf[i]
                acc = lam[n]
                for k in range(var_ptr[n], var_ptr[n + 1]):
                    e = var_edge[k]
                    m = edge_check[e]
                    sign = agg_p[m] * sgn_edge[e]
                    if kern == 0:
                        mag = _phi(agg_a[m] - phi_edge[e])
                    else:
                        mag = agg_b[m] if e == agg_e[m] else agg_a[m]
                    c2v[e] = sign * mag
                    acc += c2v[e]
                total[n] = acc
                hard[n] = 0 if acc > 0.0 else (1 if acc < 0.0 else tie_vn[n])
                for k in range(var_ptr[n], var_ptr[n + 1]):
                    e = var_edge[k]
                    v2c[e] = acc - c2v[e]
                    sgn_edge[e] = _sgn(v2c[e], tie_edge[e])
                    if kern == 0:
                        phi_edge[e] = _phi(abs(v2c[e]))
                updated[n] = 1

            # syndrome refresh on every touched check
            for j in range(n_chk):
                m = chk_list[j]
                x = np.uint8(0)
                for e in range(chk_ptr[m], chk_ptr[m + 1]):
                    x ^= hard[chk_var[e]]
                if x != synd[m]:
                    synd[m] = x
                    d = np.int64(1) if x else np.int64(-1)
                    for e in range(chk_ptr[m], chk_ptr[m + 1]):
                        ucn_cnt[chk_var[e]] += d

            vc_count -= gsize

        converged = True
        for m in range(M):
            if synd[m]:
                converged = False
                break

    return (hard, np.uint8(1) if converged else np.uint8(0), it,
            tr_members, tr_ptr[:n_tr + 1], tr_iter, tr_branch, n_tr,
            events, n_ev)
