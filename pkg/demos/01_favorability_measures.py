"""
Measuring how favorable a channel is
====================================

Capacity, its two upper bounds, the distance from favorable propagation and
the condition number on a few hand-made channels.
"""

import numpy as np

from favprop import (
    condition_number,
    distance_from_fp,
    hadamard_bound,
    jensen_bound,
    sum_capacity,
)

rho = 1.0

# Orthogonal columns with equal norms: every bound is tight and the
# condition number is 1.
G_orth = np.array([[1, 1], [1, -1]], dtype=complex)

# Orthogonal columns with different norms: still favorable (delta_C = 0),
# but the condition number says otherwise.
G_unequal = np.array([[1, 0], [0, 3]], dtype=complex)

# Two nearly aligned terminals.
G_aligned = np.array([[1, 0.95], [0, 0.3]], dtype=complex)

print(f"{'channel':<10} {'C':>8} {'Hadamard':>9} {'Jensen':>8} {'delta_C':>9} {'cond':>8}")
for name, G in [("orth", G_orth), ("unequal", G_unequal), ("aligned", G_aligned)]:
    print(f"{name:<10} {sum_capacity(G, rho):8.4f} {hadamard_bound(G, rho):9.4f} "
          f"{jensen_bound(G, rho):8.4f} {distance_from_fp(G, rho):9.4f} "
          f"{condition_number(G):8.2f}")

# The "unequal" row shows why the condition number is a poor proxy when
# channel norms differ: cond = 9 although the channel is exactly favorable.
