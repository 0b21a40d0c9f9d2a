"""
Capacity per terminal and its upper bound
=========================================

Per-terminal sum-capacity versus the Hadamard bound (the capacity the same
channel norms would give under exact orthogonality), M=100, K=10, rho=1.
"""

import numpy as np

from favprop import ChannelModelSpec, EnsembleConfig, run_ensemble

M, K, rho = 100, 10, 1.0
for model in ("rayleigh", "urlos"):
    res = run_ensemble(EnsembleConfig(ChannelModelSpec(model), M, K, rho=rho, trials=2000,
                                      seed=0, collect={"capacity", "delta_c"}))
    cap = res.samples["capacity"] / K
    bound = res.samples["hadamard"] / K
    print(f"{model:8s} median C/K {np.median(cap):.3f}  median bound/K {np.median(bound):.3f}  "
          f"median delta_C {np.median(res.samples['delta_c']):.4f}  "
          f"P(delta_C > 0.05) {np.mean(res.samples['delta_c'] > 0.05):.3f}")
