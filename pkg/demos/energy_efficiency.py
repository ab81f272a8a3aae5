"""
Energy efficiency versus target rate
====================================

M = 144 unit cells, tau_c = 1e4. EE is the target rate times the bandwidth
over the mean consumed power.
"""

import sys

import numpy as np

from hrnsim import preset_config, run_sweep
from hrnsim.linkbudget import ALL_SERIES

n = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000
res = run_sweep(preset_config("fig2c", realizations=n), workers=4)
rates = res.sweep_values
ee = np.array([res.column(c, "energy_efficiency") for c in ALL_SERIES])

print(f"{'R_th':>5}" + "".join(f"{c.label[:15]:>17}" for c in ALL_SERIES) + "   best")
for i, r in enumerate(rates):
    best = ALL_SERIES[int(np.argmax(ee[:, i]))].label
    print(f"{r:5.1f}" + "".join(f"{x:17.3g}" for x in ee[:, i]) + f"   {best}")

# Low rates: the relay's small hardware budget wins. Around the middle of the
# sweep a fixed (sCSI) IRS next to the source can lead, since it skips the
# dynamic power of reconfiguring every cell; how wide that window is depends
# on the tail of its power distribution (see heavy_tails.py). High rates: the
# iCSI designs, whose hardware cost no longer dominates the transmit power.
