"""Adaptive variable-node grouping and the group-shuffled decode drivers.

Each decoding iteration partitions the variable nodes on the fly: integer
metrics rank the not-yet-updated VNs by how suspect their tentative decision
is (count of unsatisfied neighbor checks, normalized across degrees) and how
likely an update is to flip it (predicted sign disagreements of the incoming
messages). The highest-ranked VNs form the next group, thinned so that no
two members share a check; everything else waits for a later sub-iteration
with refreshed metrics.

`decode` runs the compiled kernel; `decode_reference` is a slow mirror built
from the definitional operations in `decoder`, kept for validation and for
stepping through small examples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .codes import ParityCheckCode, conventional_groups
from .decoder import DecoderState, init_state, tie_bits, update_group

VARIANTS = ("flooding", "gs-static", "ags-method1", "ags-method2")
KERNELS = ("bp", "ms")
SELECT_MODES = ("lowest", "seeded-uniform")

_VARIANT_CODE = {v: i for i, v in enumerate(VARIANTS)}
_KERNEL_CODE = {k: i for i, k in enumerate(KERNELS)}
_SELECT_CODE = {s: i for i, s in enumerate(SELECT_MODES)}

BRANCH_NAMES = {0: "static", 1: "rest", 2: "argmax"}

# integer thresholds tuned for the bundled benchmark codes, keyed by
# (n_vars, n_checks) -> {(kernel, method): value}
_THRESHOLDS = {
    (1008, 504): {("bp", 1): 1, ("bp", 2): 1, ("ms", 1): 1, ("ms", 2): 2},
    (816, 544): {("bp", 1): 1, ("bp", 2): 2, ("ms", 1): 2, ("ms", 2): 2},
    (1944, 972): {("bp", 1): 1, ("bp", 2): 4, ("ms", 1): 6, ("ms", 2): 6},
}


def default_threshold(n_vars: int, n_checks: int, kernel: str, method: int) -> int:
    """Tuned eta (method 1) or delta (method 2) for a bundled code; 1 otherwise."""
    return _THRESHOLDS.get((n_vars, n_checks), {}).get((kernel, method), 1)


@dataclass(frozen=True)
class SchedulerParams:
    """Which schedule to run and its knobs.

    max_group_size == 0 means unlimited. `seed` drives the zero-LLR sign
    coins and (in seeded-uniform mode) the candidate picks, making decode a
    pure function of (code, observation, params).
    """

    variant: str = "ags-method2"
    kernel: str = "bp"
    group_count: int = 1
    eta: int = 1
    delta: int = 1
    max_iter: int = 25
    max_group_size: int = 0
    seed: int = 0
    select: str = "lowest"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant {self.variant!r} not in {VARIANTS}")
        if self.kernel not in KERNELS:
            raise ValueError(f"kernel {self.kernel!r} not in {KERNELS}")
        if self.select not in SELECT_MODES:
            raise ValueError(f"select {self.select!r} not in {SELECT_MODES}")
        if self.eta < 0 or self.delta < 0:
            raise ValueError("thresholds must be non-negative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.max_group_size < 0:
            raise ValueError("max_group_size must be >= 0 (0 = unlimited)")
        if self.group_count < 1:
            raise ValueError("group_count must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class DecodeResult:
    hard: np.ndarray
    converged: bool
    iterations: int
    # per iteration: list of (branch name, member indices); None unless traced
    trace: Optional[list] = None
    # raw scheduling events for opcount.count_adaptive; None unless counted
    events: Optional[np.ndarray] = None


@dataclass
class MetricScratch:
    """Reusable integer metric buffers for one code."""

    e_val: np.ndarray
    f_val: np.ndarray
    a_val: np.ndarray
    check_sign_xor: np.ndarray
    omega_table: list[np.ndarray]

    @classmethod
    def for_code(cls, code: ParityCheckCode) -> "MetricScratch":
        tables = [
            np.array([(x * code.max_var_deg) // int(d) for x in range(int(d) + 1)],
                     dtype=np.int64)
            for d in code.var_deg
        ]
        return cls(
            e_val=np.zeros(code.n_vars, dtype=np.int64),
            f_val=np.zeros(code.n_vars, dtype=np.int64),
            a_val=np.zeros(code.n_vars, dtype=np.int64),
            check_sign_xor=np.zeros(code.n_checks, dtype=np.uint8),
            omega_table=tables,
        )


def bsgn(x: float, tie: int = 0) -> int:
    """Sign bit: 0 for positive, 1 for negative, the coin for exact zero."""
    if x > 0:
        return 0
    if x < 0:
        return 1
    return int(tie)


def omega(code: ParityCheckCode, n: int, x: int) -> int:
    """Scale a count of x out of d(n) events onto the 0..d_max range."""
    d = int(code.var_deg[n])
    if not 0 <= x <= d:
        raise ValueError(f"count {x} outside [0, {d}] for variable {n}")
    return (x * code.max_var_deg) // d


def _bsgn_vec(x: np.ndarray, ties: np.ndarray) -> np.ndarray:
    out = (x < 0).astype(np.uint8)
    z = x == 0
    if z.any():
        out[z] = ties[z]
    return out


def compute_E(code: ParityCheckCode, synd: np.ndarray) -> np.ndarray:
    """Unreliability per VN: degree-scaled count of unsatisfied neighbor
    checks. On a regular code this is the plain unsatisfied-check count."""
    fl = code.flat()
    s = np.asarray(synd, dtype=np.int64)
    counts = np.add.reduceat(s[fl.edge_check[fl.var_edge]], fl.var_ptr[:-1])
    counts[code.var_deg == 0] = 0
    return (counts * code.max_var_deg) // np.maximum(code.var_deg, 1)


def compute_F(code: ParityCheckCode, e_vals: np.ndarray, synd: np.ndarray,
              eta: int) -> np.ndarray:
    """Votes per VN: how many unsatisfied checks see this VN as their most
    unreliable neighbor (ties all vote), subject to e >= eta. e_vals must
    cover every VN, updated or not."""
    fl = code.flat()
    e_edge = np.asarray(e_vals, dtype=np.int64)[fl.chk_var]
    chk_max = np.maximum.reduceat(e_edge, fl.chk_ptr[:-1])
    s_edge = np.asarray(synd, dtype=np.uint8)[fl.edge_check]
    votes = (s_edge == 1) & (e_edge == chk_max[fl.edge_check]) & (e_edge >= eta)
    return np.bincount(fl.chk_var[votes], minlength=code.n_vars).astype(np.int64)


def compute_A(state: DecoderState, sign_source: str = "v2c") -> np.ndarray:
    """Flip pressure per VN: degree-scaled count of predicted incoming
    message signs that disagree with the VN's total LLR sign.

    sign_source "v2c" predicts each future check message sign from the
    current variable-to-check signs; "total_llr" substitutes the senders'
    total-LLR signs, which collapses the metric onto compute_E exactly.
    """
    code = state.code
    fl = code.flat()
    sb_llr = _bsgn_vec(state.total_llr, state.tie_vn)
    if sign_source == "v2c":
        sb_edge = _bsgn_vec(state.v2c, state.tie_edge)
    elif sign_source == "total_llr":
        sb_edge = sb_llr[fl.chk_var]
    else:
        raise ValueError(f"unknown sign source {sign_source!r}")
    t_chk = np.bitwise_and(
        np.add.reduceat(sb_edge.astype(np.int64), fl.chk_ptr[:-1]), 1
    ).astype(np.uint8)
    # predicted incoming sign on edge (m, n) excludes n's own contribution
    pred = t_chk[fl.edge_check] ^ sb_edge
    disagree = (pred ^ sb_llr[fl.chk_var]).astype(np.int64)
    counts = np.add.reduceat(disagree[fl.var_edge], fl.var_ptr[:-1])
    counts[code.var_deg == 0] = 0
    return (counts * code.max_var_deg) // np.maximum(code.var_deg, 1)


class _SplitMix:
    """64-bit splitmix stream; mirrored bit-for-bit inside the compiled kernel."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)


def _thin_candidates(code: ParityCheckCode, cand: np.ndarray, cap: int,
                     select: str, picker: Optional[_SplitMix]) -> np.ndarray:
    """Greedy selection: pick a candidate, drop every candidate sharing a
    check with it, repeat until the pool is empty or the cap is reached."""
    alive = {int(n): True for n in np.sort(np.asarray(cand, dtype=np.int64))}
    group: list[int] = []
    while alive and (cap == 0 or len(group) < cap):
        keys = list(alive)
        if select == "lowest":
            n_star = keys[0]
        else:
            n_star = keys[picker.next() % len(keys)]
        group.append(n_star)
        for m in code.var_adj[n_star]:
            for v in code.check_adj[int(m)]:
                alive.pop(int(v), None)
        alive.pop(n_star, None)
    return np.asarray(group, dtype=np.int64)


def _rest_group(updated: np.ndarray, cap: int) -> np.ndarray:
    rest = np.flatnonzero(~updated).astype(np.int64)
    if cap and rest.size > cap:
        rest = rest[:cap]
    return rest


def group_method_1(state: DecoderState, eta: int, cap: int = 0,
                   select: str = "lowest", picker: Optional[_SplitMix] = None
                   ) -> tuple[np.ndarray, int, Optional[np.ndarray]]:
    """Vote-driven grouping.

    If no un-updated VN collects a vote, the whole remainder decodes as one
    group (subject to the cap). Otherwise the top-vote VNs are ranked by
    flip pressure and thinned to a check-disjoint set.

    Returns (group, branch, vote-maximizer set); branch 1 is the whole-rest
    shortcut, branch 2 the ranked selection.
    """
    code = state.code
    cand_mask = ~state.updated
    if not cand_mask.any():
        raise ValueError("no un-updated variables left to group")
    e_vals = compute_E(code, state.syndrome)
    f_vals = compute_F(code, e_vals, state.syndrome, eta)
    f_star = int(f_vals[cand_mask].max())
    if f_star == 0:
        return _rest_group(state.updated, cap), 1, None
    s_set = np.flatnonzero(cand_mask & (f_vals == f_star)).astype(np.int64)
    a_vals = compute_A(state, sign_source="v2c")
    a_star = int(a_vals[s_set].max())
    pool = s_set[a_vals[s_set] == a_star]
    return _thin_candidates(code, pool, cap, select, picker), 2, s_set


def group_method_2(state: DecoderState, delta: int, cap: int = 0,
                   select: str = "lowest", picker: Optional[_SplitMix] = None
                   ) -> tuple[np.ndarray, int, Optional[np.ndarray]]:
    """Unreliability-driven grouping (the cheaper method).

    When the worst unreliability among un-updated VNs is below delta the
    whole remainder decodes as one group; otherwise the most unreliable VNs
    are thinned to a check-disjoint set.
    """
    code = state.code
    cand_mask = ~state.updated
    if not cand_mask.any():
        raise ValueError("no un-updated variables left to group")
    e_vals = compute_E(code, state.syndrome)
    e_star = int(e_vals[cand_mask].max())
    if e_star < delta:
        return _rest_group(state.updated, cap), 1, None
    pool = np.flatnonzero(cand_mask & (e_vals == e_star)).astype(np.int64)
    return _thin_candidates(code, pool, cap, select, picker), 2, None


def _check_inputs(code: ParityCheckCode, channel_llr: np.ndarray,
                  params: SchedulerParams) -> None:
    if channel_llr.size != code.n_vars:
        raise ValueError(
            f"observation length {channel_llr.size} != code length {code.n_vars}")
    if params.variant == "gs-static" and params.group_count > code.n_vars:
        raise ValueError("group_count exceeds code length")
    if params.max_group_size > code.n_vars:
        raise ValueError("max_group_size exceeds code length")


def _static_partition(code: ParityCheckCode, params: SchedulerParams):
    if params.variant == "flooding":
        return [np.arange(code.n_vars, dtype=np.int64)]
    return list(conventional_groups(code, params.group_count).groups)


def decode_reference(code: ParityCheckCode, observation, params: SchedulerParams,
                     record_trace: bool = False, count_ops: bool = False
                     ) -> DecodeResult:
    """Pure-Python decode driver assembled from the definitional operations.

    Produces bit-identical hard decisions, traces, and scheduling events to
    `decode`; orders of magnitude slower. Intended for tests and small demos.
    """
    lam = np.ascontiguousarray(observation.channel_llr, dtype=np.float64)
    _check_inputs(code, lam, params)
    tie_vn, tie_edge = tie_bits(code, params.seed)
    state = init_state(code, lam, tie_vn=tie_vn, tie_edge=tie_edge)
    picker = _SplitMix(params.seed) if params.select == "seeded-uniform" else None
    static = _static_partition(code, params) if params.variant in ("flooding", "gs-static") else None
    method = 1 if params.variant == "ags-method1" else 2
    cap = params.max_group_size

    trace = [] if record_trace else None
    events: list[tuple] = [] if count_ops else None
    converged = False
    it = 0
    while it < params.max_iter and not converged:
        it += 1
        state.iteration = it
        state.updated[:] = False
        iter_trace = [] if record_trace else None
        if static is not None:
            for grp in static:
                update_group(state, grp, params.kernel)
                if record_trace:
                    iter_trace.append(("static", grp.copy()))
        else:
            while not state.updated.all():
                vc_size = int(code.n_vars - state.updated.sum())
                ucn = state.syndrome == 1
                add_e = int(code.check_deg[ucn].sum())
                if method == 1:
                    cmp_q = int((code.check_deg[ucn] - 1).sum())
                    group, branch, s_set = group_method_1(
                        state, params.eta, cap, params.select, picker)
                    s_size = 0 if s_set is None else int(s_set.size)
                    add_a = 0 if s_set is None else int((code.var_deg[s_set] - 1).sum())
                else:
                    cmp_q, s_size, add_a = 0, 0, 0
                    group, branch, _ = group_method_2(
                        state, params.delta, cap, params.select, picker)
                update_group(state, group, params.kernel)
                if count_ops:
                    events.append((it, method, add_e, cmp_q, vc_size, s_size, add_a, branch))
                if record_trace:
                    iter_trace.append((BRANCH_NAMES[branch], group))
        if record_trace:
            trace.append(iter_trace)
        converged = not state.syndrome.any()

    return DecodeResult(
        hard=state.hard.copy(),
        converged=converged,
        iterations=it,
        trace=trace,
        events=np.asarray(events, dtype=np.int64).reshape(-1, 8) if count_ops else None,
    )


def decode(code: ParityCheckCode, observation, params: SchedulerParams,
           record_trace: bool = False, count_ops: bool = False) -> DecodeResult:
    """Decode one frame with the configured schedule (compiled kernel).

    Deterministic given (code, observation, params): repeat calls give
    identical hard decisions, group traces, and scheduling events.
    """
    from . import _kernels

    lam = np.ascontiguousarray(observation.channel_llr, dtype=np.float64)
    _check_inputs(code, lam, params)
    tie_vn, tie_edge = tie_bits(code, params.seed)
    fl = code.flat()

    if params.variant in ("flooding", "gs-static"):
        static = _static_partition(code, params)
        group_ptr = np.zeros(len(static) + 1, dtype=np.int64)
        group_ptr[1:] = np.cumsum([g.size for g in static])
        group_idx = np.concatenate(static).astype(np.int64)
    else:
        group_ptr = np.zeros(1, dtype=np.int64)
        group_idx = np.zeros(0, dtype=np.int64)

    (hard, converged, iters, tr_members, tr_ptr, tr_iter, tr_branch, n_tr,
     events, n_ev) = _kernels.decode_kernel(
        fl.chk_ptr, fl.chk_var, fl.var_ptr, fl.var_edge, fl.edge_check,
        fl.check_deg, fl.var_deg, np.int64(fl.dv_max), fl.scale_ptr, fl.scale_flat,
        lam, tie_vn, tie_edge,
        np.int64(_VARIANT_CODE[params.variant]),
        np.int64(_KERNEL_CODE[params.kernel]),
        group_ptr, group_idx,
        np.int64(params.eta), np.int64(params.delta),
        np.int64(params.max_iter), np.int64(params.max_group_size),
        np.int64(_SELECT_CODE[params.select]),
        np.uint64(params.seed & ((1 << 64) - 1)),
        record_trace, count_ops,
    )

    trace = None
    if record_trace:
        trace = [[] for _ in range(iters)]
        for i in range(n_tr):
            members = tr_members[tr_ptr[i]:tr_ptr[i + 1]].astype(np.int64)
            trace[tr_iter[i] - 1].append((BRANCH_NAMES[int(tr_branch[i])], members))
    return DecodeResult(
        hard=hard,
        converged=bool(converged),
        iterations=int(iters),
        trace=trace,
        events=events[:n_ev].copy() if count_ops else None,
    )
