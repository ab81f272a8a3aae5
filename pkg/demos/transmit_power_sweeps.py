"""
Required transmit power versus IRS size
=======================================

Slow fading (tau_c = 1e4) and fast fading (tau_c = 1e3), target 3 bit/s/Hz.
Pass a realization count as the first argument for a quicker run::

    python demos/transmit_power_sweeps.py 2000
"""

import sys

import numpy as np

from hrnsim import preset_config, run_sweep
from hrnsim.linkbudget import ALL_SERIES

n = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000


def show(result, title):
    print(f"\n{title}  (mean required power, dBm)")
    m = result.sweep_values
    print(f"{'series':<24}" + "".join(f"{v:>8}" for v in m))
    for cfg in ALL_SERIES:
        dbm = result.column(cfg, "mean_tx_power_dbm")
        print(f"{cfg.label:<24}" + "".join(f"{x:8.1f}" for x in dbm))


slow = run_sweep(preset_config("fig2a", realizations=n), workers=4)
show(slow, "tau_c = 1e4")

# With plenty of samples per frame the hybrid link with instantaneous CSI
# needs the least power at every size.
fast = run_sweep(preset_config("fig2b", realizations=n), workers=4)
show(fast, "tau_c = 1e3")

# In fast fading the iCSI overhead grows with M and eventually outweighs the
# beamforming gain; the sCSI designs keep improving.
hrn = fast.column(ALL_SERIES[5], "mean_tx_power")
scsi = np.min([fast.column(c, "mean_tx_power") for c in ALL_SERIES if c.csi_label == "scsi"],
              axis=0)
for m, a, b in zip(fast.sweep_values, hrn, scsi):
    print(f"M={m:<4} HRN-iCSI / best sCSI = {a / b:10.3g}")
