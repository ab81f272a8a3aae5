"""Reflective beamforming designs and the effective channel gains they produce.

All IRS products use the plain transpose, ``h_out^T Theta h_in``, never the
Hermitian form. Gain functions broadcast over leading axes so that a stack of
realizations (last axis = unit cells) can be evaluated in one call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


def _check_pair(h_out, h_in):
    h_out = np.asarray(h_out)
    h_in = np.asarray(h_in)
    if h_out.shape[-1:] != h_in.shape[-1:]:
        raise ValueError(
            f"channel vectors differ in length: {h_out.shape[-1:]} vs {h_in.shape[-1:]}")
    return h_out, h_in


@dataclass(frozen=True, eq=False)
class ReflectionConfig:
    """Per-unit-cell reflection amplitudes in [0, 1] and phases in [0, 2*pi)."""

    amplitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=float)
        ph = np.mod(np.asarray(self.phases, dtype=float), TWO_PI)
        # mod can return exactly 2*pi for tiny negative inputs
        ph = np.where(ph >= TWO_PI, 0.0, ph)
        if amp.shape != ph.shape or amp.ndim != 1:
            raise ValueError("amplitudes and phases must be 1-D arrays of equal length")
        if np.any(amp < 0.0) or np.any(amp > 1.0):
            raise ValueError("reflection amplitudes must lie in [0, 1]")
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "phases", ph)

    @classmethod
    def uniform(cls, n_elements: int, amplitude: float, phases=None) -> "ReflectionConfig":
        if phases is None:
            phases = np.zeros(n_elements)
        return cls(np.full(n_elements, float(amplitude)), phases)

    @property
    def coefficients(self) -> np.ndarray:
        return self.amplitudes * np.exp(1j * self.phases)

    def matrix(self) -> np.ndarray:
        return np.diag(self.coefficients)


def icsi_phases_cascade(h_out, h_in, direct=None, amplitude: float = 1.0) -> ReflectionConfig:
    """Phases that co-phase every reflected path (and the direct path, if given).

    Without a direct link, ``theta_m = -angle(h_out[m] * h_in[m])``; with one,
    ``theta_m = angle(direct) - angle(h_out[m] * h_in[m])``.
    """
    h_out, h_in = _check_pair(h_out, h_in)
    phases = -np.angle(h_out * h_in)
    if direct is not None:
        phases = phases + np.angle(direct)
    return ReflectionConfig.uniform(h_out.shape[-1], amplitude, phases)


def scsi_reflection(n_elements: int, amplitude: float) -> ReflectionConfig:
    """Statistical-CSI design ``Theta = amplitude * I`` (common phase fixed to zero)."""
    return ReflectionConfig.uniform(n_elements, amplitude)


def composite_channel(direct, h_out, h_in, config: ReflectionConfig) -> complex:
    """``direct + h_out^T diag(config) h_in``."""
    h_out, h_in = _check_pair(h_out, h_in)
    if config.coefficients.shape != h_out.shape[-1:]:
        raise ValueError("reflection config does not match channel length")
    return direct + np.sum(h_out * config.coefficients * h_in, axis=-1)


def gain_irs_icsi(h_id, h_si, amplitude: float):
    h_id, h_si = _check_pair(h_id, h_si)
    return (amplitude * np.sum(np.abs(h_id * h_si), axis=-1)) ** 2


def gain_irs_scsi(h_id, h_si, amplitude: float):
    h_id, h_si = _check_pair(h_id, h_si)
    return np.abs(amplitude * np.sum(h_id * h_si, axis=-1)) ** 2


def gain_hop_icsi(direct, h_out, h_in, amplitude: float):
    h_out, h_in = _check_pair(h_out, h_in)
    return (np.abs(direct) + amplitude * np.sum(np.abs(h_out * h_in), axis=-1)) ** 2


def gain_hop_scsi(direct, h_out, h_in, amplitude: float):
    h_out, h_in = _check_pair(h_out, h_in)
    return np.abs(direct + amplitude * np.sum(h_out * h_in, axis=-1)) ** 2


@dataclass(frozen=True)
class EffectiveGains:
    """Linear power gains; ``second_hop`` is ``None`` for the single-phase IRS link."""

    first_hop: float
    second_hop: float | None = None

    @property
    def two_phase(self) -> bool:
        return self.second_hop is not None
