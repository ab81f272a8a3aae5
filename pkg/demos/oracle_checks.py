"""
Checking the beamforming results independently
==============================================

Closed-form ergodic SNRs against Monte Carlo, and closed-form designs against
exhaustive search.
"""

import numpy as np

from hrnsim.channel import complex_normal
from hrnsim.oracle import (brute_force_bound, brute_force_icsi, square_correlation,
                           run_checks, scsi_optimality_check)
from hrnsim.rbd import gain_hop_icsi

for r in run_checks():
    print(r.line())

# A fixed diagonal configuration mu*I is optimal on average: no random set of
# phases does better in trace terms.
R = square_correlation(16)
rng = np.random.default_rng(0)
print("\nbest random trace:", scsi_optimality_check(R, 0.9, 2000, rng))
print("mu^2 tr(R^2):     ", 0.81 * np.trace(R @ R))

# Co-phasing every reflected path with the direct one is optimal per draw.
d, a, b = complex_normal(rng), complex_normal(rng, 3), complex_normal(rng, 3)
print("\nclosed form:", gain_hop_icsi(d, a, b, 0.9))
print("16^3 grid:  ", brute_force_icsi(d, a, b, 0.9, 16),
      " (slack", brute_force_bound(d, a, b, 0.9, 16), ")")
