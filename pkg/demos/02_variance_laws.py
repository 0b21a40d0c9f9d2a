"""
How fast inner products vanish
==============================

Sample variances of g_i^H g_j / M and |g_i^H g_j|^2 / M^2 over independent
channel pairs, next to their closed forms, for Rayleigh fading and
uniform-random line of sight.
"""

from favprop import variance_study

trials = 20_000  # 10^5 gives the tighter agreement used in the test suite

for model in ("rayleigh", "urlos"):
    print(model)
    print(f"{'M':>5} {'var ip':>11} {'predicted':>11} {'var |ip|^2':>11} {'predicted':>11}")
    for row in variance_study(model, [16, 64, 256], trials, seed=1):
        print(f"{row.M:5d} {row.var_ip_sample:11.3e} {row.var_ip_predicted:11.3e} "
              f"{row.var_ipsq_sample:11.3e} {row.var_ipsq_predicted:11.3e}")

# Both models shrink var(ip) like 1/M, but var(|ip|^2) decays like 1/M^2
# under Rayleigh fading and only like 2/(3M) under UR-LoS.
