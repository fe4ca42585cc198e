"""Arithmetic-operation accounting.

Counts follow fixed conventions evaluated on events, not instrumented
hardware: the baseline message-passing cost depends only on the degree
profile, while the adaptive-grouping overhead is accumulated from the
scheduling events a counted decode emits. Binary XOR/checksum work is
treated as free throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import ParityCheckCode


@dataclass
class OpCounters:
    """Real-arithmetic counts for the message kernels plus integer counts
    for the adaptive grouping machinery."""

    real_add: int = 0
    real_cmp: int = 0
    phi_eval: int = 0
    int_add: int = 0
    int_cmp: int = 0

    def __add__(self, other: "OpCounters") -> "OpCounters":
        return OpCounters(
            self.real_add + other.real_add,
            self.real_cmp + other.real_cmp,
            self.phi_eval + other.phi_eval,
            self.int_add + other.int_add,
            self.int_cmp + other.int_cmp,
        )


def count_basic(code: ParityCheckCode, kernel: str) -> OpCounters:
    """Per-iteration real-arithmetic cost of one full decoding iteration.

    Convention per check-to-variable message: the exact kernel pays
    (d_c - 2) additions for the excluded magnitude-transform sum and d_c phi
    evaluations ((d_c - 1) inputs plus the output); min-sum pays (d_c - 2)
    comparisons for the excluded minimum. Each variable pays d_v additions
    for its total LLR and one subtraction per edge for the outgoing
    messages.
    """
    if kernel not in ("bp", "ms"):
        raise ValueError(f"unknown kernel {kernel!r}")
    dc = code.check_deg.astype(np.int64)
    dv = code.var_deg.astype(np.int64)
    per_msg_excl = np.maximum(dc - 2, 0)
    vn_adds = int(2 * dv.sum())
    if kernel == "bp":
        return OpCounters(
            real_add=int((dc * per_msg_excl).sum()) + vn_adds,
            real_cmp=0,
            phi_eval=int((dc * dc).sum()),
        )
    return OpCounters(
        real_add=vn_adds,
        real_cmp=int((dc * per_msg_excl).sum()),
        phi_eval=0,
    )


# scheduling-event columns produced by a counted decode
EV_ITER, EV_METHOD, EV_ADD_E, EV_CMP_Q, EV_VC, EV_S, EV_ADD_A, EV_BRANCH = range(8)


def count_adaptive(events: np.ndarray, n_iterations: int) -> np.ndarray:
    """Integer-op cost of the adaptive grouping, per decoding iteration.

    Per scheduling entry, the unreliability accumulation costs one integer
    add per edge of each unsatisfied check. Method 2 adds |remaining| - 1
    comparisons for its maximum search. Method 1 instead adds the
    per-unsatisfied-check maxima ((d_c - 1) comparisons each), a second
    edge-triggered accumulation for the votes, |remaining| - 1 comparisons
    for the vote maximum, and, when a ranked selection happens, (d_v - 1)
    additions per vote maximizer plus |maximizers| - 1 comparisons for the
    flip-pressure maximum.

    Returns an (n_iterations, 2) array of [int_add, int_cmp]; rows past the
    last executed iteration stay zero.
    """
    out = np.zeros((n_iterations, 2), dtype=np.int64)
    if events is None or len(events) == 0:
        return out
    ev = np.asarray(events, dtype=np.int64)
    for row in ev:
        it = row[EV_ITER] - 1
        if row[EV_METHOD] == 2:
            add = row[EV_ADD_E]
            cmp_ = row[EV_VC] - 1
        else:
            add = 2 * row[EV_ADD_E] + row[EV_ADD_A]
            cmp_ = row[EV_CMP_Q] + (row[EV_VC] - 1)
            if row[EV_S] > 0:
                cmp_ += row[EV_S] - 1
        out[it, 0] += add
        out[it, 1] += cmp_
    return out
