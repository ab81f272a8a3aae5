"""
Pilot overhead and the hardware power budget
============================================

How much of each coherence interval is left for data, and what every scheme
burns before it transmits a single bit.
"""

from hrnsim.linkbudget import (ALL_SERIES, FrameParams, InfeasibleFrameError, SystemParams,
                               overhead_fraction, total_power)

# Data fraction eta for each series, slow (1e4) and fast (1e3) fading.
# iCSI designs pay M pilots plus an M-sample guard; sCSI pays one pilot.
for tau_c in (10_000, 1_000):
    frame = FrameParams(tau_c)
    print(f"\ntau_c = {tau_c}")
    print(f"{'series':<24}" + "".join(f"{'M=' + str(m):>9}" for m in (16, 64, 144, 256, 400)))
    for cfg in ALL_SERIES:
        cells = []
        for m in (16, 64, 144, 256, 400):
            try:
                cells.append(f"{overhead_fraction(cfg, frame, m):9.4f}")
            except InfeasibleFrameError:
                cells.append(f"{'--':>9}")
        print(f"{cfg.label:<24}" + "".join(cells))

# At tau_c = 1000 and M = 256 the IRS keeps about half the frame, the hybrid
# link about a quarter (half-duplex halves it again).
frame = FrameParams(1000)
print("\nIRS iCSI, M=256:", overhead_fraction(ALL_SERIES[1], frame, 256))
print("HRN iCSI, M=256:", overhead_fraction(ALL_SERIES[5], frame, 256))

# Consumed power with zero transmit power: only the hardware terms remain.
sys_ = SystemParams()
print("\nhardware-only consumption at M = 144 (W)")
for cfg in ALL_SERIES:
    print(f"  {cfg.label:<24}{total_power(cfg, 0.0, 144, sys_):.3f}")
