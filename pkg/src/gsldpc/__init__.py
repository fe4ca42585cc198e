"""Group-shuffled LDPC decoding with adaptive variable-node grouping.

Subpackages split along the processing chain: `codes` (parity-check model
and grouping), `channel` (BPSK + AWGN + LLRs), `decoder` (message-passing
kernels and per-frame state), `scheduling` (adaptive grouping and the decode
drivers), `opcount` (arithmetic-operation accounting), `sim` (Monte-Carlo
FER sweeps), `cli` (command-line front end).
"""

from .codes import (
    CodeFormatError,
    GroupPartition,
    ParityCheckCode,
    bundled_code,
    conventional_groups,
    dump_alist,
    expand_qc,
    parse_alist,
    parse_qc_base,
    random_regular_code,
    validate,
)
from .channel import ChannelObservation, awgn, frame_rng, make_observation, modulate_bpsk, snr_to_sigma2
from .decoder import DecoderState, c2v_bp, c2v_ms, hard_decision, init_state, phi, syndrome, total_llr, update_group, v2c
from .scheduling import (
    DecodeResult,
    SchedulerParams,
    bsgn,
    compute_A,
    compute_E,
    compute_F,
    decode,
    decode_reference,
    default_threshold,
    group_method_1,
    group_method_2,
    omega,
)
from .opcount import OpCounters, count_adaptive, count_basic
from .sim import PointResult, SimConfig, run_point, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
