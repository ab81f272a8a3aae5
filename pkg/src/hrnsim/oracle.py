"""Independent checks for the beamforming and power-allocation results.

Closed-form ergodic SNRs (trace formulas) are compared with Monte Carlo
means; exhaustive and random searches bound the closed-form designs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import (build_correlation, complex_normal, psd_sqrt, sample_vector_channels,
                      sinc_correlation, wavelength)
from .geometry import PathLossModel, build_uc_grid, default_layout, scenario_variances
from .rbd import ReflectionConfig, gain_hop_icsi, gain_hop_scsi, gain_irs_scsi

MAX_BRUTE_ELEMENTS = 4
MAX_BRUTE_GRID = 16


def _theta(config: ReflectionConfig | np.ndarray, n: int) -> np.ndarray:
    coeffs = config.coefficients if isinstance(config, ReflectionConfig) else np.asarray(config)
    if coeffs.shape != (n,):
        raise ValueError(f"reflection config has {coeffs.shape} entries, expected ({n},)")
    return np.diag(coeffs)


def correlation_trace(R, config) -> float:
    """``tr(R Theta R Theta^H)``; real and non-negative for PSD ``R``."""
    R = np.asarray(R, dtype=float)
    T = _theta(config, R.shape[0])
    t = np.trace(R @ T @ R @ T.conj().T)
    if abs(t.imag) > 1e-9 * max(1.0, abs(t.real)):
        raise ArithmeticError(f"trace has non-negligible imaginary part {t.imag}")
    return float(t.real)


def ergodic_snr_irs(power, noise_power, rho_id, rho_si, R, config) -> float:
    return power / noise_power * rho_id * rho_si * correlation_trace(R, config)


def ergodic_snr_hrn_hop(power, noise_power, rho_direct, rho_out, rho_in, R, config) -> float:
    return power / noise_power * (rho_direct + rho_out * rho_in * correlation_trace(R, config))


def scsi_optimality_check(R, amplitude: float, trials: int, rng: np.random.Generator) -> float:
    """Largest ``tr(R Theta R Theta^H)`` over ``trials`` random uniform-amplitude designs."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(trials, n))
    c = amplitude * np.exp(1j * phases)
    # tr(R diag(c) R diag(c)^H) = c^H (R * R) c for real symmetric R
    vals = np.einsum("ti,ij,tj->t", c.conj(), R * R, c).real
    return float(vals.max())


def brute_force_icsi(direct, h_out, h_in, amplitude: float, grid_size: int) -> float:
    """Best ``|direct + amplitude * sum_m h_out[m] h_in[m] e^{j theta_m}|^2`` on a phase grid.

    Every unit cell takes one of ``grid_size`` equally spaced phases; all
    ``grid_size**M`` combinations are tried.
    """
    h_out = np.asarray(h_out)
    h_in = np.asarray(h_in)
    m = h_out.shape[-1]
    if m > MAX_BRUTE_ELEMENTS or grid_size > MAX_BRUTE_GRID:
        raise ValueError(f"brute force limited to M <= {MAX_BRUTE_ELEMENTS}, "
                         f"K <= {MAX_BRUTE_GRID}; got M={m}, K={grid_size}")
    if grid_size < 1:
        raise ValueError("grid_size must be positive")
    steps = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    prod = amplitude * h_out * h_in
    combos = np.array(list(itertools.product(steps, repeat=m)))
    return float(np.max(np.abs(direct + combos @ prod) ** 2))


def brute_force_bound(direct, h_out, h_in, amplitude: float, grid_size: int) -> float:
    """Slack allowed between the continuous optimum and the grid best."""
    return 2.0 * amplitude * float(np.sum(np.abs(h_out * h_in))) * math.pi / grid_size


def power_split_oracle(beta1: float, beta2: float, power: float, grid_size: int,
                       noise_power: float = 1.0) -> tuple[float, float]:
    """Grid search for the first-phase power maximizing ``min(P1*b1, P2*b2)/noise``.

    ``P2 = 2*power - P1``. Returns ``(best_snr, best_p1)``.
    """
    if not (beta1 > 0 and beta2 > 0):
        raise ValueError("hop gains must be positive")
    p1 = np.linspace(0.0, 2.0 * power, grid_size)
    snr = np.minimum(p1 * beta1, (2.0 * power - p1) * beta2) / noise_power
    k = int(np.argmax(snr))
    return float(snr[k]), float(p1[k])


def power_split_bound(beta1, beta2, power, grid_size, noise_power: float = 1.0) -> float:
    step = 2.0 * power / max(grid_size - 1, 1)
    return step * max(beta1, beta2) / noise_power


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: measured {self.measured:.4g} (tolerance {self.tolerance:.3g}) {self.detail}".rstrip()


def square_correlation(n_elements: int, carrier_frequency: float = 1.9e9,
                       spacing_wavelengths: float = 0.125) -> np.ndarray:
    lam = wavelength(carrier_frequency)
    grid = build_uc_grid(math.isqrt(n_elements), spacing_wavelengths * lam)
    if grid.n_elements != n_elements:
        raise ValueError("n_elements must be a perfect square")
    return build_correlation(grid, lam)


def patch_correlation(rows: int, cols: int, carrier_frequency: float = 1.9e9,
                       spacing_wavelengths: float = 0.125) -> np.ndarray:
    """Correlation of a ``rows x cols`` rectangular patch, for element counts
    that are not perfect squares (e.g. 2 x 4 = 8)."""
    lam = wavelength(carrier_frequency)
    s = spacing_wavelengths * lam
    r, c = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    pos = np.stack([c.ravel() * s, np.zeros(rows * cols), r.ravel() * s], axis=1)
    return sinc_correlation(pos, lam)


def monte_carlo_irs_snr(R, rho_id, rho_si, amplitude, snr_scale, n, rng, batch=20_000):
    """Mean of ``snr_scale * |amplitude * h_id^T h_si|^2`` over ``n`` draws."""
    root = psd_sqrt(R)
    total = 0.0
    done = 0
    while done < n:
        k = min(batch, n - done)
        h_id = sample_vector_channels(root, rho_id, rng, k)
        h_si = sample_vector_channels(root, rho_si, rng, k)
        total += float(np.sum(gain_irs_scsi(h_id, h_si, amplitude)))
        done += k
    return snr_scale * total / n


def monte_carlo_hop_snr(R, rho_direct, rho_out, rho_in, amplitude, snr_scale, n, rng,
                        batch=20_000):
    """Mean of ``snr_scale * |h_direct + amplitude * h_out^T h_in|^2`` over ``n`` draws."""
    root = psd_sqrt(R)
    total = 0.0
    done = 0
    while done < n:
        k = min(batch, n - done)
        direct = np.sqrt(rho_direct) * complex_normal(rng, k)
        h_out = sample_vector_channels(root, rho_out, rng, k)
        h_in = sample_vector_channels(root, rho_in, rng, k)
        total += float(np.sum(gain_hop_scsi(direct, h_out, h_in, amplitude)))
        done += k
    return snr_scale * total / n


def run_checks(n_elements: int = 64, realizations: int = 100_000, trials: int = 1000,
               seed: int = 2024, amplitude: float = 0.9) -> list[CheckResult]:
    """The oracle suite behind ``hrnsim verify``."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if realizations < 1:
        raise ValueError("realizations must be at least 1")
    rng = np.random.default_rng(seed)
    R = square_correlation(n_elements)
    v = scenario_variances(default_layout(), PathLossModel())
    # P/sigma^2 chosen so that the SNR scale is O(1); the relative error does not depend on it
    snr_scale = 1.0 / (v.id * v.si)
    design = ReflectionConfig.uniform(n_elements, amplitude)
    results = []

    expected = ergodic_snr_irs(snr_scale, 1.0, v.id, v.si, R, design)
    measured = monte_carlo_irs_snr(R, v.id, v.si, amplitude, snr_scale, realizations, rng)
    err = abs(measured - expected) / expected
    results.append(CheckResult("IRS ergodic SNR, trace vs Monte Carlo", err < 0.02, err, 0.02,
                               f"(M={n_elements}, N={realizations})"))

    scale = 1.0 / v.sr
    expected = ergodic_snr_hrn_hop(scale, 1.0, v.sr, v.ir, v.si, R, design)
    measured = monte_carlo_hop_snr(R, v.sr, v.ir, v.si, amplitude, scale, realizations, rng)
    err = abs(measured - expected) / expected
    results.append(CheckResult("HRN first-hop ergodic SNR, trace vs Monte Carlo", err < 0.02,
                               err, 0.02, f"(M={n_elements}, N={realizations})"))

    best = scsi_optimality_check(R, amplitude, trials, rng)
    ref = amplitude ** 2 * float(np.trace(R @ R))
    results.append(CheckResult("sCSI design beats random phases", best <= ref + 1e-9,
                               best - ref, 1e-9, f"({trials} random designs)"))

    worst = -math.inf
    for m in (1, 2, 3):
        for _ in range(100):
            d, h_out, h_in = complex_normal(rng), complex_normal(rng, m), complex_normal(rng, m)
            closed = float(gain_hop_icsi(d, h_out, h_in, amplitude))
            grid = brute_force_icsi(d, h_out, h_in, amplitude, MAX_BRUTE_GRID)
            slack = brute_force_bound(d, h_out, h_in, amplitude, MAX_BRUTE_GRID)
            worst = max(worst, grid - slack - closed)
    results.append(CheckResult("iCSI phases vs exhaustive K=16 grid", worst <= 1e-12, worst,
                               1e-12, "(max of grid - bound - closed form)"))

    worst = -math.inf
    for _ in range(100):
        b1, b2 = rng.exponential(size=2)
        p = rng.uniform(0.1, 10.0)
        closed = 2.0 * p * b1 * b2 / (b1 + b2)
        grid, _ = power_split_oracle(b1, b2, p, 1000)
        worst = max(worst, grid - power_split_bound(b1, b2, p, 1000) - closed)
    results.append(CheckResult("equal-SNR power split vs 1000-point grid", worst <= 1e-12,
                               worst, 1e-12, "(max of grid - bound - closed form)"))
    return results
