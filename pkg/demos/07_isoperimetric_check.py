# The lower bound at fixed measure over a zoo of shapes. A coarse grid keeps
# this quick; the acceptance suite repeats it at h = 1/128.
import math
from collections import defaultdict

from spectral_mu.closed_form import alpha_critical
from spectral_mu.config import ExperimentConfig
from spectral_mu.experiments import run_crosscheck, run_verify_theorem

cfg = ExperimentConfig(h=1 / 64, alpha_max=2 * alpha_critical(2), alpha_steps=11, slack=0.04)
run = run_verify_theorem(cfg)
worst = defaultdict(lambda: math.inf)
for r in run.rows:
    worst[r["domain_id"]] = min(worst[r["domain_id"]], r["margin"])
for sid, m in worst.items():
    print(f"{sid:18s} min margin {m:+.3%}")
print("all rows ok:", run.passed)

# %% disk (below the threshold) and equal disks (above) sit on the bound
for r in run.rows:
    if r["equality_case"] and r["alpha"] in (0.0, cfg.alphas[-1]):
        print(r["domain_id"], round(r["alpha"], 3), f"{r['margin']:+.3%}")

# %% independent paths agree on small masks
print("crosscheck passed:", run_crosscheck().passed)
