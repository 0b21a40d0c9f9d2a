"""
Dropping terminals in line-of-sight channels
============================================

Two terminals whose direction sines differ by 1/M never become orthogonal.
The urns-and-balls model counts how many terminals must be dropped so that
every orthogonal beam serves at most one terminal.
"""

import numpy as np

from favprop import ChannelModelSpec, assign_and_drop, critical_pair, drop_pmf, generate, simulate_drop
from favprop.channels import substream
from favprop.metrics import distance_from_fp, pairwise_inner_products

for M in (10, 100, 1000):
    v = pairwise_inner_products(critical_pair(M), "per-antenna")[0]
    print(f"M={M:5d}  |(1/M) g1^H g2| = {abs(v):.5f}   (2/pi = {2 / np.pi:.5f})")

for M, K in [(100, 10), (200, 20)]:
    dist = drop_pmf(M, K)
    mc = simulate_drop(M, K, 200_000, seed=0)
    print(f"\nM={M}, K={K}: mean dropped {dist.mean_float:.4f}")
    for n in range(5):
        print(f"  P(N_drop={n}) exact {float(dist.pmf[n]):.6f}   simulated {mc[n]:.6f}")

# Map a UR-LoS realization onto the beam grid and drop colliding terminals.
M, K = 100, 10
spec = ChannelModelSpec("urlos")
for t in range(5):
    G, angles = generate(spec, M, K, substream(11, t))
    dropped = sorted(assign_and_drop(np.sin(angles), M))
    keep = [k for k in range(K) if k not in dropped]
    print(f"trial {t}: drop {dropped}, delta_C {distance_from_fp(G, 1.0):.4f} -> "
          f"{distance_from_fp(G[:, keep], 1.0):.4f}")
