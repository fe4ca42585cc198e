"""Command-line front end for FER sweeps.

Example:
    gsldpc-sim --code mycode.alist --decoder agsbp2 --snr 2.0,2.25,2.5 \
        --frames 20000 --max-errors 200 --seed 7 --out fer.csv
"""

from __future__ import annotations

import argparse
import sys

from .codes import expand_qc, parse_alist, parse_qc_base
from .scheduling import SchedulerParams, default_threshold
from .sim import SimConfig, run_sweep

DECODERS = {
    # name -> (variant, kernel)
    "flooding": ("flooding", "bp"),
    "gsbp": ("gs-static", "bp"),
    "gsms": ("gs-static", "ms"),
    "agsbp1": ("ags-method1", "bp"),
    "agsbp2": ("ags-method2", "bp"),
    "agsms1": ("ags-method1", "ms"),
    "agsms2": ("ags-method2", "ms"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gsldpc-sim",
        description="Monte-Carlo FER simulation of group-shuffled LDPC decoding")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--code", metavar="ALIST", help="parity-check code in alist format")
    src.add_argument("--qc", metavar="BASE", help="quasi-cyclic base-matrix file")
    p.add_argument("--z", type=int, help="lifting size override for --qc")
    p.add_argument("--decoder", required=True, choices=sorted(DECODERS))
    p.add_argument("--groups", type=int, help="group count G (gsbp/gsms)")
    p.add_argument("--eta", type=int, help="vote threshold (method-1 decoders); "
                                           "defaults to the tuned value for bundled codes")
    p.add_argument("--delta", type=int, help="unreliability threshold (method-2 decoders)")
    p.add_argument("--max-iter", type=int, default=25)
    p.add_argument("--max-group-size", type=int, default=0,
                   help="cap on adaptive group size (0 = unlimited)")
    pt = p.add_mutually_exclusive_group(required=True)
    pt.add_argument("--snr", help="comma-separated Eb/N0 points in dB")
    pt.add_argument("--sigma2", help="comma-separated noise variances")
    p.add_argument("--frames", type=int, default=10_000_000)
    p.add_argument("--max-errors", type=int, default=200,
                   help="stop a point after this many frame errors (0 = never)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--count-ops", action="store_true",
                   help="accumulate integer-op counts of the adaptive grouping")
    p.add_argument("--trace", metavar="PATH",
                   help="write per-group trace lines 'iter sub_iter size members...' "
                        "(forces serial decoding; keep --frames small)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return p


def load_code(args):
    if args.code:
        with open(args.code) as f:
            return parse_alist(f.read())
    with open(args.qc) as f:
        base, z = parse_qc_base(f.read())
    return expand_qc(base, args.z if args.z else z)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code = load_code(args)
    variant, kernel = DECODERS[args.decoder]

    if variant == "gs-static" and not args.groups:
        print("error: --groups is required for gsbp/gsms", file=sys.stderr)
        return 2
    eta = args.eta if args.eta is not None else default_threshold(
        code.n_vars, code.n_checks, kernel, 1)
    delta = args.delta if args.delta is not None else default_threshold(
        code.n_vars, code.n_checks, kernel, 2)

    params = SchedulerParams(
        variant=variant,
        kernel=kernel,
        group_count=args.groups or 1,
        eta=eta,
        delta=delta,
        max_iter=args.max_iter,
        max_group_size=args.max_group_size,
        seed=args.seed,
    )
    snr = tuple(float(t) for t in args.snr.split(",")) if args.snr else ()
    sig = tuple(float(t) for t in args.sigma2.split(",")) if args.sigma2 else ()
    config = SimConfig(
        code=code,
        params=params,
        snr_db=snr,
        sigma2=sig,
        frames=args.frames,
        max_errors=args.max_errors,
        master_seed=args.seed,
        count_ops=args.count_ops,
        n_jobs=args.jobs,
        out_path=args.out,
        trace_path=args.trace,
    )
    results = run_sweep(config)
    hdr = f"{'snr_db':>8} {'sigma2':>9} {'frames':>9} {'errors':>7} {'fer':>10} " \
          f"{'ber':>10} {'iters':>7}"
    print(hdr)
    for r in results:
        print(f"{r.snr_db:8.3f} {r.sigma2:9.5f} {r.frames:9d} {r.frame_errors:7d} "
              f"{r.fer:10.3e} {r.ber:10.3e} {r.mean_iters:7.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
