"""Monte Carlo link budgets for relay, IRS and hybrid relay+IRS networks.

Typical use::

    from hrnsim import preset_config, run_sweep
    result = run_sweep(preset_config("fig2a", realizations=2000))
"""

from .channel import (ChannelRealization, CorrelatedChannelModel, ModelInconsistencyError,
                      build_correlation, draw_realization, psd_sqrt, realization_rng)
from .config import ConfigError, dump_config, load_config, loads_config, preset_config
from .geometry import (GeometryParams, IrsScenario, NodeLayout, PathLossModel, UcGrid,
                       build_uc_grid, channel_variance, scenario_variances)
from .linkbudget import (ALL_SERIES, Csi, FrameParams, InfeasibleFrameError, PowerReport,
                         Scheme, SchemeConfig, SystemParams, achievable_rate,
                         energy_efficiency, overhead_fraction, required_power, total_power)
from .montecarlo import (ExperimentConfig, SweepResult, evaluate_realization, run_sweep,
                         summarize)
from .rbd import (EffectiveGains, ReflectionConfig, gain_hop_icsi, gain_hop_scsi,
                  gain_irs_icsi, gain_irs_scsi, icsi_phases_cascade)

__version__ = "0.1.0"
