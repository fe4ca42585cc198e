"""A small seeded FER sweep written to CSV.

Compares a static group-shuffled decoder against the adaptive vote-driven
one over a short Eb/N0 range. Frame counts are kept small so this finishes
in about a minute; push them up for publication-grade curves.
"""

import os
import tempfile

from gsldpc import SchedulerParams, SimConfig, bundled_code, default_threshold, run_sweep

code = bundled_code("regular-1008-504")
snrs = (1.75, 2.0, 2.25, 2.5)
frames = 3000

out_dir = tempfile.mkdtemp(prefix="gsldpc-demo-")
results = {}
for label, variant, G in (("gsbp-G8", "gs-static", 8), ("agsbp1", "ags-method1", 1)):
    params = SchedulerParams(
        variant=variant, kernel="bp", group_count=G,
        eta=default_threshold(1008, 504, "bp", 1),
        delta=default_threshold(1008, 504, "bp", 2),
        max_iter=25)
    cfg = SimConfig(code=code, params=params, snr_db=snrs, frames=frames,
                    max_errors=400, master_seed=55, n_jobs=2,
                    out_path=os.path.join(out_dir, f"{label}.csv"))
    results[label] = run_sweep(cfg)
    print(f"{label}: wrote {cfg.out_path}")

print(f"\n{'Eb/N0':>6}  {'gsbp-G8':>12} {'agsbp1':>12}   (FER, " + f"{frames} frames/point)")
for i, snr in enumerate(snrs):
    a = results["gsbp-G8"][i]
    b = results["agsbp1"][i]
    print(f"{snr:6.2f}  {a.fer:12.3e} {b.fer:12.3e}")

print("\nCSV columns:", open(os.path.join(out_dir, "agsbp1.csv")).readline().strip())
print("Equivalent command line:")
print("  gsldpc-sim --code <alist> --decoder agsbp1 --snr 1.75,2.0,2.25,2.5 \\")
print(f"      --frames {frames} --max-errors 400 --seed 55 --jobs 2 --out fer.csv")
