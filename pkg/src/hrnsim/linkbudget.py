"""Overhead fractions, rates, required transmit power, power consumption and EE.

Power and gain arguments may be scalars or numpy arrays; everything broadcasts.
Zero gains give infinite required power rather than raising, so that a bad
draw inside a sweep is counted instead of aborting it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry import IrsScenario
from .rbd import EffectiveGains

LN2 = math.log(2.0)


class Scheme(enum.Enum):
    RELAY = "relay"
    IRS = "irs"
    HYBRID = "hybrid"

    @classmethod
    def parse(cls, text: str) -> "Scheme":
        key = text.strip().lower()
        aliases = {"relay": cls.RELAY, "irs": cls.IRS, "hybrid": cls.HYBRID, "hrn": cls.HYBRID}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown scheme {text!r}") from None


class Csi(enum.Enum):
    INSTANTANEOUS = "icsi"
    STATISTICAL = "scsi"

    @classmethod
    def parse(cls, text: str) -> "Csi":
        key = text.strip().lower()
        aliases = {"icsi": cls.INSTANTANEOUS, "instantaneous": cls.INSTANTANEOUS,
                   "scsi": cls.STATISTICAL, "statistical": cls.STATISTICAL}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown CSI mode {text!r}") from None


@dataclass(frozen=True)
class SchemeConfig:
    """One evaluated series. The relay scheme ignores ``csi`` and ``irs_scenario``,
    and the hybrid scheme always uses the IRS next to the relay."""

    scheme: Scheme
    csi: Csi = Csi.INSTANTANEOUS
    irs_scenario: IrsScenario = IrsScenario.NEAR_RELAY

    def __post_init__(self):
        if self.scheme is Scheme.RELAY:
            object.__setattr__(self, "csi", Csi.INSTANTANEOUS)
        if self.scheme is not Scheme.IRS:
            object.__setattr__(self, "irs_scenario", IrsScenario.NEAR_RELAY)

    @property
    def two_phase(self) -> bool:
        return self.scheme is not Scheme.IRS

    @property
    def uses_irs(self) -> bool:
        return self.scheme is not Scheme.RELAY

    @property
    def scheme_label(self) -> str:
        if self.scheme is Scheme.IRS:
            return f"irs_{self.irs_scenario.value}"
        return self.scheme.value

    @property
    def csi_label(self) -> str:
        return "none" if self.scheme is Scheme.RELAY else self.csi.value

    @property
    def label(self) -> str:
        if self.scheme is Scheme.RELAY:
            return "relay"
        return f"{self.scheme_label}/{self.csi.value}"


RELAY = SchemeConfig(Scheme.RELAY)
IRS_NEAR_RELAY_ICSI = SchemeConfig(Scheme.IRS, Csi.INSTANTANEOUS, IrsScenario.NEAR_RELAY)
IRS_NEAR_RELAY_SCSI = SchemeConfig(Scheme.IRS, Csi.STATISTICAL, IrsScenario.NEAR_RELAY)
IRS_NEAR_SOURCE_ICSI = SchemeConfig(Scheme.IRS, Csi.INSTANTANEOUS, IrsScenario.NEAR_SOURCE)
IRS_NEAR_SOURCE_SCSI = SchemeConfig(Scheme.IRS, Csi.STATISTICAL, IrsScenario.NEAR_SOURCE)
HYBRID_ICSI = SchemeConfig(Scheme.HYBRID, Csi.INSTANTANEOUS)
HYBRID_SCSI = SchemeConfig(Scheme.HYBRID, Csi.STATISTICAL)

ALL_SERIES = (RELAY, IRS_NEAR_RELAY_ICSI, IRS_NEAR_RELAY_SCSI, IRS_NEAR_SOURCE_ICSI,
              IRS_NEAR_SOURCE_SCSI, HYBRID_ICSI, HYBRID_SCSI)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(watts, dtype=float) * 1000.0)


@dataclass(frozen=True)
class SystemParams:
    """Noise, bandwidth, amplifier and hardware power figures (SI units)."""

    noise_power: float = dbm_to_watts(-107.0)
    bandwidth: float = 10e6
    amplifier_efficiency: float = 0.5
    p_source: float = 0.1
    p_relay: float = 0.1
    p_destination: float = 0.1
    p_static: float = 1e-3
    p_dynamic: float = 5e-3
    amplitude: float = 0.9

    def __post_init__(self):
        if not self.noise_power > 0.0:
            raise ValueError("noise_power must be positive")
        if not self.bandwidth > 0.0:
            raise ValueError("bandwidth must be positive")
        if not 0.0 < self.amplifier_efficiency <= 1.0:
            raise ValueError("amplifier_efficiency must lie in (0, 1]")
        for name in ("p_source", "p_relay", "p_destination", "p_static", "p_dynamic"):
            if not getattr(self, name) >= 0.0:
                raise ValueError(f"{name} must be non-negative")
        if not 0.0 <= self.amplitude <= 1.0:
            raise ValueError("amplitude must lie in [0, 1]")


@dataclass(frozen=True)
class FrameParams:
    """Coherence-interval bookkeeping, all in samples.

    ``guard=None`` means the guard interval equals the number of unit cells,
    the default for instantaneous-CSI designs.
    """

    coherence: int
    pilots: int = 1
    guard: int | None = None

    def __post_init__(self):
        if not self.coherence > 0:
            raise ValueError("coherence must be positive")
        if not self.pilots >= 1:
            raise ValueError("pilots per link must be at least 1")
        if self.guard is not None and not self.guard >= 0:
            raise ValueError("guard must be non-negative")

    def guard_for(self, n_elements: int) -> int:
        return n_elements if self.guard is None else self.guard


class InfeasibleFrameError(ValueError):
    """Pilots and guard leave no data samples in the coherence interval."""


def links_to_estimate(cfg: SchemeConfig, n_elements: int) -> int:
    """Channel links estimated per transmission phase."""
    if cfg.scheme is Scheme.RELAY or cfg.csi is Csi.STATISTICAL:
        return 1
    if cfg.scheme is Scheme.IRS:
        return n_elements
    return n_elements + 1


def overhead_fraction(cfg: SchemeConfig, frame: FrameParams, n_elements: int) -> float:
    """Fraction of the coherence interval that carries data, halved for two-phase schemes."""
    tau_c = frame.coherence
    pilot_samples = frame.pilots * links_to_estimate(cfg, n_elements)
    guard = 0
    if cfg.uses_irs and cfg.csi is Csi.INSTANTANEOUS:
        guard = frame.guard_for(n_elements)
    data = tau_c - pilot_samples - guard
    eta = data / (2 * tau_c) if cfg.two_phase else data / tau_c
    if eta <= 0.0:
        raise InfeasibleFrameError(
            f"{cfg.label}: {pilot_samples} pilot + {guard} guard samples exhaust "
            f"a coherence interval of {tau_c}")
    return eta


def _split(gains: EffectiveGains):
    b1 = np.asarray(gains.first_hop, dtype=float)
    if gains.second_hop is None:
        return b1, None
    return b1, np.asarray(gains.second_hop, dtype=float)


def effective_snr_gain(gains: EffectiveGains):
    """Gain ``g`` such that the (optimally split) end-to-end SNR is ``P * g / noise``.

    For two-phase links this is ``2*b1*b2 / (b1 + b2)``; zero if either hop is dead.
    """
    b1, b2 = _split(gains)
    if b2 is None:
        return b1
    with np.errstate(divide="ignore", invalid="ignore"):
        g = 2.0 * b1 * b2 / (b1 + b2)
    return np.where((b1 > 0.0) & (b2 > 0.0), g, 0.0)


def achievable_rate(cfg: SchemeConfig, eta: float, gains: EffectiveGains, power, noise_power: float):
    """Rate in bit/s/Hz at transmit power ``power`` with the equal-SNR power split."""
    if cfg.two_phase != gains.two_phase:
        raise ValueError(f"{cfg.label} expects {'two' if cfg.two_phase else 'one'} hop gain(s)")
    snr = np.asarray(power, dtype=float) * effective_snr_gain(gains) / noise_power
    out = eta * np.log1p(snr) / LN2
    return float(out) if np.ndim(out) == 0 else out


def required_power(cfg: SchemeConfig, eta: float, gains: EffectiveGains, rate_threshold, noise_power: float):
    """Minimum transmit power (W) reaching ``rate_threshold``; ``inf`` if a gain is zero.

    For two-phase schemes this is the average ``(P1 + P2) / 2``.
    """
    if cfg.two_phase != gains.two_phase:
        raise ValueError(f"{cfg.label} expects {'two' if cfg.two_phase else 'one'} hop gain(s)")
    if not eta > 0.0:
        raise InfeasibleFrameError(f"non-positive overhead fraction {eta!r}")
    g = effective_snr_gain(gains)
    with np.errstate(over="ignore"):
        # overflow means an unreachable target, i.e. infinite power
        snr_needed = np.expm1(np.asarray(rate_threshold, dtype=float) / eta * LN2)
    with np.errstate(divide="ignore", over="ignore"):
        p = np.where(g > 0.0, snr_needed * noise_power / np.where(g > 0.0, g, 1.0), np.inf)
    return float(p) if np.ndim(p) == 0 else p


def power_split(gains: EffectiveGains, power):
    """Per-phase powers ``(P1, P2)`` that equalise the two hop SNRs at average ``power``."""
    b1, b2 = _split(gains)
    if b2 is None:
        raise ValueError("power split needs two hop gains")
    total = b1 + b2
    return 2.0 * power * b2 / total, 2.0 * power * b1 / total


def total_power(cfg: SchemeConfig, tx_power, n_elements: int, system: SystemParams):
    """Consumed power (W): amplifier draw plus hardware dissipation.

    Source and destination are active half the time in two-phase schemes;
    unit cells are not reconfigured, so draw no dynamic power, under sCSI.
    """
    p = np.asarray(tx_power, dtype=float) / system.amplifier_efficiency
    if cfg.two_phase:
        p = p + 0.5 * system.p_source + 0.5 * system.p_destination + system.p_relay
    else:
        p = p + system.p_source + system.p_destination
    if cfg.uses_irs:
        dynamic = system.p_dynamic if cfg.csi is Csi.INSTANTANEOUS else 0.0
        p = p + n_elements * (system.p_static + dynamic)
    return float(p) if np.ndim(p) == 0 else p


def energy_efficiency(rate_threshold, total, bandwidth: float):
    """Bits per Joule, ``rate_threshold * bandwidth / total``."""
    total = np.asarray(total, dtype=float)
    if np.any(total <= 0.0):
        raise ValueError("total power must be positive")
    ee = np.asarray(rate_threshold, dtype=float) * bandwidth / total
    return float(ee) if np.ndim(ee) == 0 else ee


@dataclass(frozen=True)
class PowerReport:
    rate_threshold: float
    required_tx_power: float
    total_power: float
    energy_efficiency: float
    feasible: bool = True

    @classmethod
    def infeasible(cls, rate_threshold: float) -> "PowerReport":
        return cls(rate_threshold, math.inf, math.inf, 0.0, feasible=False)


def power_report(cfg: SchemeConfig, frame: FrameParams, gains: EffectiveGains,
                 n_elements: int, rate_threshold: float, system: SystemParams) -> PowerReport:
    try:
        eta = overhead_fraction(cfg, frame, n_elements)
    except InfeasibleFrameError:
        return PowerReport.infeasible(rate_threshold)
    p = required_power(cfg, eta, gains, rate_threshold, system.noise_power)
    if not math.isfinite(p):
        return PowerReport.infeasible(rate_threshold)
    total = total_power(cfg, p, n_elements, system)
    return PowerReport(rate_threshold, p, total,
                       energy_efficiency(rate_threshold, total, system.bandwidth))
