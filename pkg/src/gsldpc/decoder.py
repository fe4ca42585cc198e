"""Log-domain message-passing primitives shared by all decoding schedules.

Messages live on Tanner-graph edges in check-side CSR order (see
codes.FlatGraph). `update_group` applies one group-shuffled sub-iteration:
check-to-variable messages for every member are formed from the
variable-to-check state as of group entry, so members update in logical
parallel regardless of the internal loop order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import ParityCheckCode

PHI_FLOOR = 1e-12
PHI_CEIL = 30.0


def phi(x):
    """Self-inverse check-node transform -log(tanh(x/2)).

    Inputs are clamped to [PHI_FLOOR, PHI_CEIL] so extreme magnitudes map to
    finite values instead of 0/inf. Evaluated as log1p(2/expm1(x)), which
    keeps phi(phi(x)) = x to ~1e-14 relative over the whole clamp range.
    """
    x = np.clip(x, PHI_FLOOR, PHI_CEIL)
    return np.log1p(2.0 / np.expm1(x))


def _phi_s(x: float) -> float:
    # scalar twin of phi(); math.* so results match the compiled kernels bitwise
    if x < PHI_FLOOR:
        x = PHI_FLOOR
    elif x > PHI_CEIL:
        x = PHI_CEIL
    return math.log1p(2.0 / math.expm1(x))


def _sgn(x: float, tie: int) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 1.0 if tie == 0 else -1.0


@dataclass
class DecoderState:
    """Mutable per-frame decoding state (one frame, one thread)."""

    code: ParityCheckCode
    channel_llr: np.ndarray  # lambda_n = 2 r_n / sigma^2
    v2c: np.ndarray          # variable-to-check message per edge
    c2v: np.ndarray          # check-to-variable message per edge
    total_llr: np.ndarray
    hard: np.ndarray         # uint8 tentative decisions
    syndrome: np.ndarray     # uint8 per check
    updated: np.ndarray      # bool: membership in the already-updated set
    iteration: int
    tie_vn: np.ndarray       # uint8 sign coins for zero LLRs, per variable
    tie_edge: np.ndarray     # uint8 sign coins per edge


def tie_bits(code: ParityCheckCode, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-variable and per-edge sign coins for exact-zero LLRs, derived from
    the decode seed so reruns resolve ties identically."""
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0x71E)))
    tie_vn = rng.integers(0, 2, code.n_vars, dtype=np.uint8)
    tie_edge = rng.integers(0, 2, code.n_edges, dtype=np.uint8)
    return tie_vn, tie_edge


def init_state(code: ParityCheckCode, channel_llr: np.ndarray, seed: int = 0,
               tie_vn: np.ndarray | None = None,
               tie_edge: np.ndarray | None = None) -> DecoderState:
    """Fresh state: c2v = 0, v2c = channel LLR, total = channel LLR."""
    lam = np.ascontiguousarray(channel_llr, dtype=np.float64)
    if lam.size != code.n_vars:
        raise ValueError(f"LLR length {lam.size} != code length {code.n_vars}")
    fl = code.flat()
    if tie_vn is None or tie_edge is None:
        tie_vn, tie_edge = tie_bits(code, seed)
    v2c = lam[fl.chk_var].astype(np.float64)
    total = lam.copy()
    hard = hard_decision(total, tie_vn)
    state = DecoderState(
        code=code,
        channel_llr=lam,
        v2c=v2c,
        c2v=np.zeros(code.n_edges),
        total_llr=total,
        hard=hard,
        syndrome=syndrome(hard, code),
        updated=np.zeros(code.n_vars, dtype=bool),
        iteration=0,
        tie_vn=np.asarray(tie_vn, dtype=np.uint8),
        tie_edge=np.asarray(tie_edge, dtype=np.uint8),
    )
    return state


def hard_decision(llr: np.ndarray, tie_bits: np.ndarray | None = None) -> np.ndarray:
    """Bit 0 for positive LLR, 1 for negative; exact zeros fall back to the
    per-variable coin so repeated runs stay reproducible."""
    llr = np.asarray(llr)
    out = (llr < 0).astype(np.uint8)
    zeros = llr == 0
    if zeros.any():
        if tie_bits is None:
            raise ValueError("zero LLR encountered and no tie bits supplied")
        out[zeros] = tie_bits[zeros]
    return out


def syndrome(hard: np.ndarray, code: ParityCheckCode) -> np.ndarray:
    """s_m = XOR of the tentative bits on check m."""
    hard = np.asarray(hard, dtype=np.uint8)
    if hard.size != code.n_vars:
        raise ValueError("hard-decision length mismatch")
    fl = code.flat()
    sums = np.add.reduceat(hard[fl.chk_var].astype(np.int64), fl.chk_ptr[:-1])
    return (sums & 1).astype(np.uint8)


def _edge_of(code: ParityCheckCode, m: int, n: int) -> int:
    fl = code.flat()
    lo, hi = fl.chk_ptr[m], fl.chk_ptr[m + 1]
    k = lo + np.searchsorted(fl.chk_var[lo:hi], n)
    if k >= hi or fl.chk_var[k] != n:
        raise ValueError(f"variable {n} is not connected to check {m}")
    return int(k)


def c2v_bp(state: DecoderState, m: int, n: int) -> float:
    """Exact check update: product of the other input signs times
    phi(sum of phi(|other inputs|))."""
    fl = state.code.flat()
    target = _edge_of(state.code, m, n)
    sign = 1.0
    acc = 0.0
    for e in range(fl.chk_ptr[m], fl.chk_ptr[m + 1]):
        if e == target:
            continue
        v = state.v2c[e]
        sign *= _sgn(v, state.tie_edge[e])
        acc += _phi_s(abs(v))
    return sign * _phi_s(acc)


def c2v_ms(state: DecoderState, m: int, n: int) -> float:
    """Min-sum check update: product of the other input signs times the
    minimum of their magnitudes (no scaling or offset)."""
    fl = state.code.flat()
    target = _edge_of(state.code, m, n)
    sign = 1.0
    best = math.inf
    for e in range(fl.chk_ptr[m], fl.chk_ptr[m + 1]):
        if e == target:
            continue
        v = state.v2c[e]
        sign *= _sgn(v, state.tie_edge[e])
        if abs(v) < best:
            best = abs(v)
    return sign * best


def v2c(state: DecoderState, n: int, m: int) -> float:
    """Variable update: channel LLR plus the other incoming check messages."""
    fl = state.code.flat()
    acc = state.channel_llr[n]
    for k in range(fl.var_ptr[n], fl.var_ptr[n + 1]):
        e = fl.var_edge[k]
        if fl.edge_check[e] != m:
            acc += state.c2v[e]
    return float(acc)


def total_llr(state: DecoderState, n: int) -> float:
    """Channel LLR plus all incoming check messages."""
    fl = state.code.flat()
    acc = state.channel_llr[n]
    for k in range(fl.var_ptr[n], fl.var_ptr[n + 1]):
        acc += state.c2v[fl.var_edge[k]]
    return float(acc)


def update_group(state: DecoderState, group: np.ndarray, kernel: str = "bp") -> None:
    """One sub-iteration: refresh c2v into the group, then totals, decisions,
    outgoing v2c, and the syndromes of every adjacent check.

    All c2v values are formed from the v2c state as of entry (per-check
    aggregates are precomputed), so the result is independent of the member
    order. Raises if a member was already updated in this iteration.
    """
    if kernel not in ("bp", "ms"):
        raise ValueError(f"unknown kernel {kernel!r}")
    group = np.asarray(group, dtype=np.int64)
    if group.size == 0:
        return
    if state.updated[group].any():
        dup = int(group[state.updated[group]][0])
        raise ValueError(f"variable {dup} was already updated in this iteration")
    fl = state.code.flat()
    lam = state.channel_llr

    # aggregate pass: snapshot per adjacent check, reading current v2c
    checks: list[int] = []
    seen: set[int] = set()
    agg_sum: dict[int, float] = {}
    agg_sign: dict[int, float] = {}
    agg_min: dict[int, tuple[float, float, int]] = {}
    phi_edge: dict[int, float] = {}
    for n in group:
        for k in range(fl.var_ptr[n], fl.var_ptr[n + 1]):
            m = int(fl.edge_check[fl.var_edge[k]])
            if m in seen:
                continue
            seen.add(m)
            checks.append(m)
            sign = 1.0
            if kernel == "bp":
                acc = 0.0
                for e in range(fl.chk_ptr[m], fl.chk_ptr[m + 1]):
                    v = state.v2c[e]
                    sign *= _sgn(v, state.tie_edge[e])
                    p = _phi_s(abs(v))
                    phi_edge[e] = p
                    acc += p
                agg_sum[m] = acc
            else:
                min1, min2, amin = math.inf, math.inf, -1
                for e in range(fl.chk_ptr[m], fl.chk_ptr[m + 1]):
                    v = state.v2c[e]
                    sign *= _sgn(v, state.tie_edge[e])
                    a = abs(v)
                    if a < min1:
                        min1, min2, amin = a, min1, e
                    elif a < min2:
                        min2 = a
                agg_min[m] = (min1, min2, amin)
            agg_sign[m] = sign

    # member pass: each member reads only the aggregates and its own edges
    for n in group:
        acc = lam[n]
        for k in range(fl.var_ptr[n], fl.var_ptr[n + 1]):
            e = int(fl.var_edge[k])
            m = int(fl.edge_check[e])
            sign = agg_sign[m] * _sgn(state.v2c[e], state.tie_edge[e])
            if kernel == "bp":
                mag = _phi_s(agg_sum[m] - phi_edge[e])
            else:
                min1, min2, amin = agg_min[m]
                mag = min2 if e == amin else min1
            state.c2v[e] = sign * mag
            acc += state.c2v[e]
        state.total_llr[n] = acc
        state.hard[n] = 0 if acc > 0 else (1 if acc < 0 else state.tie_vn[n])
        for k in range(fl.var_ptr[n], fl.var_ptr[n + 1]):
            e = int(fl.var_edge[k])
            state.v2c[e] = acc - state.c2v[e]
        state.updated[n] = True

    # syndrome refresh for every touched check
    for m in checks:
        x = 0
        for e in range(fl.chk_ptr[m], fl.chk_ptr[m + 1]):
            x ^= int(state.hard[fl.chk_var[e]])
        state.syndrome[m] = x
