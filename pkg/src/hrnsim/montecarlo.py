"""Paired Monte Carlo evaluation of every scheme and parameter sweeps over M or R_th.

Realization ``i`` is drawn from a generator seeded by ``(seed, i)`` alone, so
results do not depend on how realizations are spread over worker threads.
Each realization is drawn once with unit large-scale gains and rescaled for
each IRS placement, so all series see the same small-scale fading.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .channel import ChannelRealization, CorrelatedChannelModel, draw_batch, wavelength
from .geometry import (GeometryParams, IrsScenario, LinkVariances, PathLossModel,
                       build_uc_grid, scenario_variances)
from .linkbudget import (ALL_SERIES, Csi, FrameParams, InfeasibleFrameError, PowerReport,
                         Scheme, SchemeConfig, SystemParams, energy_efficiency,
                         overhead_fraction, power_report, required_power, total_power,
                         watts_to_dbm)
from .rbd import (EffectiveGains, gain_hop_icsi, gain_hop_scsi, gain_irs_icsi,
                  gain_irs_scsi)

SWEEP_M = "m"
SWEEP_RATE = "rate"


def is_square(n) -> bool:
    return n >= 1 and int(n) == n and math.isqrt(int(n)) ** 2 == int(n)


@dataclass(frozen=True)
class ExperimentConfig:
    geometry: GeometryParams = field(default_factory=GeometryParams)
    pathloss: PathLossModel = field(default_factory=PathLossModel)
    system: SystemParams = field(default_factory=SystemParams)
    frame: FrameParams = field(default_factory=lambda: FrameParams(10_000))
    carrier_frequency: float = 1.9e9
    series: tuple[SchemeConfig, ...] = ALL_SERIES
    sweep_variable: str = SWEEP_M
    sweep_values: tuple[float, ...] = (16, 36, 64, 100, 144, 196, 256)
    rate_threshold: float = 3.0
    n_elements: int = 144
    realizations: int = 10_000
    seed: int = 1

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))
        object.__setattr__(self, "sweep_values", tuple(self.sweep_values))
        if not self.series:
            raise ValueError("at least one scheme series is required")
        if len(set(self.series)) != len(self.series):
            raise ValueError("duplicate scheme series")
        if self.sweep_variable not in (SWEEP_M, SWEEP_RATE):
            raise ValueError(f"sweep variable must be 'm' or 'rate', got {self.sweep_variable!r}")
        vals = self.sweep_values
        if not vals:
            raise ValueError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.sweep_variable == SWEEP_M:
            if not all(is_square(v) for v in vals):
                raise ValueError("swept M values must be perfect squares (square IRS)")
            object.__setattr__(self, "sweep_values", tuple(int(v) for v in vals))
        elif not all(v > 0 for v in vals):
            raise ValueError("swept rate thresholds must be positive")
        if not is_square(self.n_elements):
            raise ValueError("n_elements must be a perfect square")
        object.__setattr__(self, "n_elements", int(self.n_elements))
        if not self.rate_threshold > 0:
            raise ValueError("rate_threshold must be positive")
        if not self.carrier_frequency > 0:
            raise ValueError("carrier_frequency must be positive")
        if int(self.realizations) != self.realizations or self.realizations < 1:
            raise ValueError("realizations must be a positive integer")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def wavelength(self) -> float:
        return wavelength(self.carrier_frequency)

    def points(self) -> list[tuple[int, tuple[float, ...]]]:
        """``(M, rate thresholds)`` pairs to evaluate, in sweep order."""
        if self.sweep_variable == SWEEP_M:
            return [(m, (self.rate_threshold,)) for m in self.sweep_values]
        return [(self.n_elements, self.sweep_values)]

    def variances(self) -> dict[IrsScenario, LinkVariances]:
        return {s: scenario_variances(self.geometry.layout(s), self.pathloss)
                for s in IrsScenario}

    def channel_model(self, n_elements: int) -> CorrelatedChannelModel:
        lam = self.wavelength
        grid = build_uc_grid(math.isqrt(n_elements), self.geometry.spacing_wavelengths * lam,
                             center=self.geometry.irs_near_relay,
                             normal=self.geometry.plane_normal)
        return CorrelatedChannelModel.from_grid(grid, lam)


CHUNK = 256  # realizations per work item; fixed so results never depend on `workers`


def scheme_gains(realization, cfg: SchemeConfig, amplitude: float) -> EffectiveGains:
    """Effective gains for ``cfg`` on an already-scaled realization or batch."""
    r = realization
    if cfg.scheme is Scheme.RELAY:
        return EffectiveGains(np.abs(r.h_sr) ** 2, np.abs(r.h_rd) ** 2)
    icsi = cfg.csi is Csi.INSTANTANEOUS
    if cfg.scheme is Scheme.IRS:
        gain = gain_irs_icsi if icsi else gain_irs_scsi
        return EffectiveGains(gain(r.h_id, r.h_si, amplitude))
    gain = gain_hop_icsi if icsi else gain_hop_scsi
    return EffectiveGains(gain(r.h_sr, r.h_ir, r.h_si, amplitude),
                          gain(r.h_rd, r.h_id, r.h_ri, amplitude))


def _scaled_views(realization, series, variances):
    if variances is None:
        return {s: realization for s in IrsScenario}
    needed = {cfg.irs_scenario for cfg in series}
    return {s: realization.scaled(variances[s]) for s in needed}


def realization_gains(realization, series: Sequence[SchemeConfig], amplitude: float,
                      variances: Mapping[IrsScenario, LinkVariances] | None = None) -> np.ndarray:
    """Gains for every series, shape ``(len(series), 2)`` (``(n, len(series), 2)`` for a batch).

    With ``variances`` the realization is taken as unit-variance and rescaled
    per IRS placement. Single-phase series have NaN in the second column.
    """
    views = _scaled_views(realization, series, variances)
    lead = np.shape(realization.h_sr)
    out = np.full(lead + (len(series), 2), np.nan)
    for k, cfg in enumerate(series):
        g = scheme_gains(views[cfg.irs_scenario], cfg, amplitude)
        out[..., k, 0] = g.first_hop
        if g.second_hop is not None:
            out[..., k, 1] = g.second_hop
    return out


def evaluate_realization(realization: ChannelRealization, series: Sequence[SchemeConfig],
                         rate_threshold: float, frame: FrameParams, system: SystemParams,
                         variances: Mapping[IrsScenario, LinkVariances] | None = None,
                         ) -> dict[SchemeConfig, PowerReport]:
    gains = realization_gains(realization, series, system.amplitude, variances)
    m = realization.n_elements
    return {cfg: power_report(cfg, frame, _gains_row(gains[k], cfg), m, rate_threshold, system)
            for k, cfg in enumerate(series)}


def _gains_row(row, cfg: SchemeConfig) -> EffectiveGains:
    return EffectiveGains(row[..., 0], row[..., 1] if cfg.two_phase else None)


def paired_gains(config: ExperimentConfig, n_elements: int, workers: int = 1,
                 model: CorrelatedChannelModel | None = None) -> np.ndarray:
    """Per-realization gains, shape ``(realizations, len(series), 2)``."""
    if model is None:
        model = config.channel_model(n_elements)
    variances = config.variances()
    n = config.realizations
    out = np.empty((n, len(config.series), 2))

    def work(start):
        idx = range(start, min(start + CHUNK, n))
        batch = draw_batch(model, config.seed, idx)
        out[idx.start:idx.stop] = realization_gains(batch, config.series,
                                                    config.system.amplitude, variances)

    starts = range(0, n, CHUNK)
    if workers <= 1:
        for s in starts:
            work(s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, starts))
    return out


@dataclass(frozen=True)
class Summary:
    mean: float
    std_err: float
    n_feasible: int
    n_infeasible: int

    @property
    def mean_dbm(self) -> float:
        return float(watts_to_dbm(self.mean)) if self.n_feasible else math.nan

    @property
    def flagged(self) -> bool:
        return self.n_feasible == 0


def summarize(values) -> Summary:
    """Mean and standard error of the finite entries; the rest count as infeasible.

    A single sample has standard error 0. With no finite samples the result is
    flagged and the statistics are NaN.
    """
    v = np.asarray(values, dtype=float).ravel()
    ok = v[np.isfinite(v)]
    n = ok.size
    if n == 0:
        return Summary(math.nan, math.nan, 0, v.size)
    se = float(np.std(ok, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return Summary(float(np.mean(ok)), se, n, v.size - n)


@dataclass(frozen=True)
class SweepRow:
    series: SchemeConfig
    sweep_variable: str
    sweep_value: float
    n_elements: int
    rate_threshold: float
    mean_tx_power: float
    mean_tx_power_dbm: float
    mean_total_power: float
    energy_efficiency: float
    std_err: float
    infeasible_count: int
    n_realizations: int
    seed: int


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    rows: tuple[SweepRow, ...]

    def series_rows(self, series: SchemeConfig) -> list[SweepRow]:
        return [r for r in self.rows if r.series == series]

    def column(self, series: SchemeConfig, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.series_rows(series)])

    @property
    def sweep_values(self) -> tuple[float, ...]:
        return self.config.sweep_values


def _sweep_rows(config, n_elements, rates, gains) -> list[SweepRow]:
    system = config.system
    rows = []
    for k, cfg in enumerate(config.series):
        g = _gains_row(gains[:, k, :], cfg)
        try:
            eta = overhead_fraction(cfg, config.frame, n_elements)
        except InfeasibleFrameError:
            eta = None
        for rate in rates:
            if eta is None:
                p = np.full(config.realizations, np.inf)
            else:
                p = required_power(cfg, eta, g, rate, system.noise_power)
            tx = summarize(p)
            feasible = np.isfinite(p)
            tot = summarize(np.where(feasible, total_power(cfg, np.where(feasible, p, 0.0),
                                                           n_elements, system), np.inf))
            ee = (energy_efficiency(rate, tot.mean, system.bandwidth)
                  if tot.n_feasible else math.nan)
            value = n_elements if config.sweep_variable == SWEEP_M else rate
            rows.append(SweepRow(
                series=cfg, sweep_variable=config.sweep_variable, sweep_value=value,
                n_elements=n_elements, rate_threshold=rate,
                mean_tx_power=tx.mean, mean_tx_power_dbm=tx.mean_dbm,
                mean_total_power=tot.mean, energy_efficiency=ee, std_err=tx.std_err,
                infeasible_count=tx.n_infeasible, n_realizations=config.realizations,
                seed=config.seed))
    return rows


def run_sweep(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Evaluate every series at every sweep point.

    Rows are ordered by series, then sweep value. Powers are averaged in Watts
    over feasible realizations; EE uses the mean total power.
    """
    by_point = []
    for m, rates in config.points():
        gains = paired_gains(config, m, workers=workers)
        by_point.append(_sweep_rows(config, m, rates, gains))
    n_series = len(config.series)
    rows = []
    for k in range(n_series):
        for point_rows in by_point:
            per_series = len(point_rows) // n_series
            rows.extend(point_rows[k * per_series:(k + 1) * per_series])
    return SweepResult(config=config, rows=tuple(rows))
