"""Seeded Monte-Carlo frame-error-rate sweeps.

Every frame draws its noise and decode seed from a substream keyed by
(master seed, frame index), so results are bit-identical no matter how many
worker processes run or in which order frames finish. The all-zero codeword
is transmitted; sign symmetry of the channel and of both message kernels
makes this representative, and it lets a wrong-but-valid output be detected
as any nonzero decision vector.
"""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .channel import awgn, frame_rng, make_observation, modulate_bpsk, snr_to_sigma2
from .codes import ParityCheckCode
from .opcount import count_adaptive
from .scheduling import SchedulerParams, decode

CSV_COLUMNS = ("snr_db", "sigma2", "frames", "frame_errors", "fer", "bit_errors",
               "ber", "mean_iters", "mean_int_add", "mean_int_cmp", "seed")


@dataclass
class SimConfig:
    code: ParityCheckCode
    params: SchedulerParams
    snr_db: tuple[float, ...] = ()
    sigma2: tuple[float, ...] = ()
    frames: int = 10_000_000
    max_errors: int = 200          # 0 disables the early stop
    master_seed: int = 1
    count_ops: bool = False
    n_jobs: int = 1
    out_path: Optional[str] = None
    trace_path: Optional[str] = None

    def __post_init__(self):
        if self.frames < 1:
            raise ValueError("frames must be >= 1")
        if not self.snr_db and not self.sigma2:
            raise ValueError("need at least one SNR or sigma^2 point")
        if self.snr_db and self.sigma2:
            raise ValueError("give either SNR points or sigma^2 points, not both")
        if self.max_errors < 0 or self.n_jobs < 1:
            raise ValueError("max_errors and n_jobs must be non-negative/positive")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")

    def points(self) -> list[tuple[float, float]]:
        """(snr_db, sigma2) pairs; the missing coordinate is derived."""
        if self.snr_db:
            return [(s, snr_to_sigma2(s, self.code.rate)) for s in self.snr_db]
        return [(10.0 * np.log10(1.0 / (2.0 * self.code.rate * v)), v)
                for v in self.sigma2]


@dataclass
class PointResult:
    snr_db: float
    sigma2: float
    frames: int
    frame_errors: int
    fer: float
    bit_errors: int
    ber: float
    mean_iters: float
    mean_int_add: float
    mean_int_cmp: float
    seed: int
    # per-iteration aggregates, filled when count_ops is on
    iter_alive: Optional[np.ndarray] = field(default=None, repr=False)
    iter_int_add: Optional[np.ndarray] = field(default=None, repr=False)
    iter_int_cmp: Optional[np.ndarray] = field(default=None, repr=False)


def _simulate_chunk(code: ParityCheckCode, params: SchedulerParams, sigma2: float,
                    master_seed: int, start: int, stop: int, count_ops: bool):
    """Decode frames [start, stop); returns per-frame arrays in frame order."""
    n = stop - start
    err = np.zeros(n, dtype=np.uint8)
    biterr = np.zeros(n, dtype=np.int64)
    iters = np.zeros(n, dtype=np.int64)
    adds = np.zeros((n, params.max_iter), dtype=np.int64) if count_ops else None
    cmps = np.zeros((n, params.max_iter), dtype=np.int64) if count_ops else None
    clean = modulate_bpsk(np.zeros(code.n_vars, dtype=np.uint8))
    for i, k in enumerate(range(start, stop)):
        rng = frame_rng(master_seed, k)
        received = awgn(clean, sigma2, rng)
        dseed = int(rng.integers(0, 2 ** 63, dtype=np.int64))
        obs = make_observation(received, sigma2)
        res = decode(code, obs, replace(params, seed=dseed), count_ops=count_ops)
        err[i] = 1 if (not res.converged or res.hard.any()) else 0
        biterr[i] = int(res.hard.sum())
        iters[i] = res.iterations
        if count_ops:
            per_iter = count_adaptive(res.events, params.max_iter)
            adds[i] = per_iter[:, 0]
            cmps[i] = per_iter[:, 1]
    return err, biterr, iters, adds, cmps


def run_point(config: SimConfig, snr_db: Optional[float] = None,
              sigma2: Optional[float] = None) -> PointResult:
    """Simulate one operating point until the frame budget or the error
    budget is exhausted, whichever comes first."""
    code, params = config.code, config.params
    if sigma2 is None:
        if snr_db is None:
            raise ValueError("give snr_db or sigma2")
        sigma2 = snr_to_sigma2(snr_db, code.rate)
    elif snr_db is None:
        snr_db = 10.0 * np.log10(1.0 / (2.0 * code.rate * sigma2))

    max_iter = params.max_iter
    frames_run = 0
    frame_errors = 0
    bit_errors = 0
    total_iters = 0
    alive = np.zeros(max_iter, dtype=np.int64)
    i_add = np.zeros(max_iter, dtype=np.int64)
    i_cmp = np.zeros(max_iter, dtype=np.int64)

    trace_file = open(config.trace_path, "a") if config.trace_path else None
    chunk = 256 if config.n_jobs > 1 else min(256, config.frames)

    def consume(res_tuple) -> bool:
        """Fold one chunk in frame order; True means stop early."""
        nonlocal frames_run, frame_errors, bit_errors, total_iters
        err, biterr, iters, adds, cmps = res_tuple
        for i in range(err.size):
            frames_run += 1
            frame_errors += int(err[i])
            bit_errors += int(biterr[i])
            total_iters += int(iters[i])
            alive[:iters[i]] += 1
            if config.count_ops:
                i_add[:] += adds[i]
                i_cmp[:] += cmps[i]
            if config.max_errors and frame_errors >= config.max_errors:
                return True
        return False

    stopped = False
    if trace_file is not None:
        # traced runs decode serially so the trace stays in frame order
        for k in range(config.frames):
            rng = frame_rng(config.master_seed, k)
            received = awgn(modulate_bpsk(np.zeros(code.n_vars, dtype=np.uint8)),
                            sigma2, rng)
            dseed = int(rng.integers(0, 2 ** 63, dtype=np.int64))
            res = decode(code, make_observation(received, sigma2),
                         replace(params, seed=dseed),
                         record_trace=True, count_ops=config.count_ops)
            trace_file.write(f"# frame {k}\n")
            for it_idx, groups in enumerate(res.trace, start=1):
                for sub, (_, members) in enumerate(groups):
                    idx = " ".join(str(int(v)) for v in members)
                    trace_file.write(f"{it_idx} {sub} {members.size} {idx}\n")
            per_iter = count_adaptive(res.events, max_iter) if config.count_ops else None
            tup = (np.array([1 if (not res.converged or res.hard.any()) else 0], np.uint8),
                   np.array([int(res.hard.sum())], np.int64),
                   np.array([res.iterations], np.int64),
                   per_iter[None, :, 0] if config.count_ops else None,
                   per_iter[None, :, 1] if config.count_ops else None)
            if consume(tup):
                break
        trace_file.close()
    elif config.n_jobs == 1:
        for start in range(0, config.frames, chunk):
            stop = min(start + chunk, config.frames)
            tup = _simulate_chunk(code, params, sigma2, config.master_seed,
                                  start, stop, config.count_ops)
            if consume(tup):
                stopped = True
                break
    else:
        with ProcessPoolExecutor(max_workers=config.n_jobs) as pool:
            pending = {}
            next_submit = 0
            next_consume = 0
            inflight = 2 * config.n_jobs
            while next_consume < config.frames and not stopped:
                while (next_submit < config.frames and len(pending) < inflight
                       and not stopped):
                    stop = min(next_submit + chunk, config.frames)
                    pending[next_submit] = pool.submit(
                        _simulate_chunk, code, params, sigma2,
                        config.master_seed, next_submit, stop, config.count_ops)
                    next_submit = stop
                fut = pending.pop(next_consume)
                tup = fut.result()
                next_consume = min(next_consume + chunk, config.frames)
                if consume(tup):
                    stopped = True
                    for f in pending.values():
                        f.cancel()
                    break

    return PointResult(
        snr_db=float(snr_db),
        sigma2=float(sigma2),
        frames=frames_run,
        frame_errors=frame_errors,
        fer=frame_errors / frames_run,
        bit_errors=bit_errors,
        ber=bit_errors / (frames_run * code.n_vars),
        mean_iters=total_iters / frames_run,
        mean_int_add=(i_add.sum() / total_iters) if config.count_ops else 0.0,
        mean_int_cmp=(i_cmp.sum() / total_iters) if config.count_ops else 0.0,
        seed=config.master_seed,
        iter_alive=alive if config.count_ops else None,
        iter_int_add=i_add if config.count_ops else None,
        iter_int_cmp=i_cmp if config.count_ops else None,
    )


def run_sweep(config: SimConfig) -> list[PointResult]:
    """One run_point per configured operating point; optionally persist CSV."""
    results = [run_point(config, snr_db=s, sigma2=v) for s, v in config.points()]
    if config.out_path:
        write_csv(config.out_path, results)
    return results


def write_csv(path: str, results: list[PointResult]) -> None:
    """Write results atomically (temp file + rename) with stable formatting."""
    rows = [",".join(CSV_COLUMNS)]
    for r in results:
        rows.append(",".join([
            "%.10g" % r.snr_db, "%.10g" % r.sigma2, str(r.frames),
            str(r.frame_errors), "%.10g" % r.fer, str(r.bit_errors),
            "%.10g" % r.ber, "%.10g" % r.mean_iters, "%.10g" % r.mean_int_add,
            "%.10g" % r.mean_int_cmp, str(r.seed),
        ]))
    text = "\n".join(rows) + "\n"
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".csv-tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
