"""Spatially correlated Rayleigh fading at the IRS.

Vector channels follow ``h = sqrt(rho) * R^{1/2} g`` with ``g ~ CN(0, I)``
and ``R[n, k] = sinc(2 * |u_n - u_k| / wavelength)`` (normalized sinc).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import LinkVariances, UcGrid

SPEED_OF_LIGHT = 299_792_458.0


class ModelInconsistencyError(ValueError):
    """The correlation kernel is not positive semidefinite at this geometry."""


def wavelength(carrier_frequency: float) -> float:
    if not carrier_frequency > 0.0:
        raise ValueError("carrier frequency must be positive")
    return SPEED_OF_LIGHT / carrier_frequency


def sinc_correlation(positions, wavelength: float) -> np.ndarray:
    """``sinc(2 |u_n - u_k| / wavelength)`` for arbitrary element positions (rows)."""
    if not wavelength > 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength!r}")
    pos = np.asarray(positions, dtype=float)
    dist = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)
    R = np.sinc(2.0 * dist / wavelength)
    # exact symmetry and unit diagonal regardless of rounding in the distances
    R = 0.5 * (R + R.T)
    np.fill_diagonal(R, 1.0)
    return R


def build_correlation(grid: UcGrid, wavelength: float) -> np.ndarray:
    """Correlation matrix of the unit cells in ``grid`` at carrier ``wavelength``."""
    return sinc_correlation(grid.positions, wavelength)


def psd_tolerance(n: int) -> float:
    return 1e-8 * n


def psd_sqrt(R: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition.

    Eigenvalues in ``[-1e-8 * M, 0)`` are treated as rounding noise and
    clamped to zero; anything more negative raises
    :class:`ModelInconsistencyError`.
    """
    R = np.asarray(R, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {R.shape}")
    w, V = np.linalg.eigh(R)
    if w.min() < -psd_tolerance(R.shape[0]):
        raise ModelInconsistencyError(
            f"correlation matrix has eigenvalue {w.min():.3e} "
            f"below -{psd_tolerance(R.shape[0]):.1e}")
    root = (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T
    return 0.5 * (root + root.T)


def complex_normal(rng: np.random.Generator, size=None) -> np.ndarray | complex:
    """Circularly-symmetric CN(0, 1) samples, ``(a + jb) / sqrt(2)``."""
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return z / np.sqrt(2.0)


def sample_scalar_channel(variance: float, rng: np.random.Generator) -> complex:
    if variance < 0.0:
        raise ValueError("variance must be non-negative")
    return complex(np.sqrt(variance) * complex_normal(rng))


def sample_vector_channel(root: np.ndarray, variance: float,
                          rng: np.random.Generator) -> np.ndarray:
    if variance < 0.0:
        raise ValueError("variance must be non-negative")
    g = complex_normal(rng, root.shape[0])
    return np.sqrt(variance) * (root @ g)


def sample_vector_channels(root: np.ndarray, variance: float,
                           rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` independent draws stacked as rows, shape ``(count, M)``."""
    if variance < 0.0:
        raise ValueError("variance must be non-negative")
    g = complex_normal(rng, (count, root.shape[0]))
    # root is symmetric, so (root @ g.T).T == g @ root
    return np.sqrt(variance) * (g @ root)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """All links for one coherence interval."""

    h_sr: complex
    h_rd: complex
    h_si: np.ndarray
    h_ir: np.ndarray
    h_ri: np.ndarray
    h_id: np.ndarray

    def __post_init__(self):
        m = len(self.h_si)
        for name in ("h_ir", "h_ri", "h_id"):
            if len(getattr(self, name)) != m:
                raise ValueError("all IRS channel vectors must have the same length")

    @property
    def n_elements(self) -> int:
        return len(self.h_si)

    def scaled(self, variances: LinkVariances) -> "ChannelRealization":
        """Apply large-scale gains to a unit-variance realization."""
        return ChannelRealization(
            h_sr=np.sqrt(variances.sr) * self.h_sr,
            h_rd=np.sqrt(variances.rd) * self.h_rd,
            h_si=np.sqrt(variances.si) * self.h_si,
            h_ir=np.sqrt(variances.ir) * self.h_ir,
            h_ri=np.sqrt(variances.ri) * self.h_ri,
            h_id=np.sqrt(variances.id) * self.h_id,
        )

    def equals(self, other: "ChannelRealization") -> bool:
        return (self.h_sr == other.h_sr and self.h_rd == other.h_rd
                and all(np.array_equal(getattr(self, k), getattr(other, k))
                        for k in ("h_si", "h_ir", "h_ri", "h_id")))


UNIT_VARIANCES = LinkVariances(sr=1.0, rd=1.0, si=1.0, ir=1.0, ri=1.0, id=1.0)


@dataclass(frozen=True, eq=False)
class CorrelatedChannelModel:
    correlation: np.ndarray = field(repr=False)
    root: np.ndarray = field(repr=False)
    variances: LinkVariances = UNIT_VARIANCES

    @classmethod
    def from_grid(cls, grid: UcGrid, wavelength: float,
                  variances: LinkVariances = UNIT_VARIANCES) -> "CorrelatedChannelModel":
        R = build_correlation(grid, wavelength)
        return cls(correlation=R, root=psd_sqrt(R), variances=variances)

    @property
    def n_elements(self) -> int:
        return self.root.shape[0]

    def with_variances(self, variances: LinkVariances) -> "CorrelatedChannelModel":
        return replace(self, variances=variances)


def _unit_block(rng: np.random.Generator, n_elements: int) -> np.ndarray:
    """One realization's worth of CN(0, 1) samples: 2 scalars then 4 vectors."""
    z = rng.standard_normal((2, 2 + 4 * n_elements))
    return (z[0] + 1j * z[1]) / np.sqrt(2.0)


def draw_realization(model: CorrelatedChannelModel,
                     rng: np.random.Generator) -> ChannelRealization:
    """Draw every link independently from a single block of normals.

    Layout of the block (part of the seeding contract): ``g_sr, g_rd``, then
    ``g_si, g_ir, g_ri, g_id`` with ``M`` entries each.
    """
    m = model.n_elements
    c = _unit_block(rng, m)
    v = model.variances
    vec = [model.root @ c[2 + k * m:2 + (k + 1) * m] for k in range(4)]
    return ChannelRealization(
        h_sr=complex(np.sqrt(v.sr) * c[0]),
        h_rd=complex(np.sqrt(v.rd) * c[1]),
        h_si=np.sqrt(v.si) * vec[0],
        h_ir=np.sqrt(v.ir) * vec[1],
        h_ri=np.sqrt(v.ri) * vec[2],
        h_id=np.sqrt(v.id) * vec[3],
    )


@dataclass(frozen=True, eq=False)
class RealizationBatch:
    """Unit-variance realizations stacked along axis 0 (vectors are ``(n, M)``)."""

    h_sr: np.ndarray
    h_rd: np.ndarray
    h_si: np.ndarray
    h_ir: np.ndarray
    h_ri: np.ndarray
    h_id: np.ndarray

    def __len__(self) -> int:
        return len(self.h_sr)

    def scaled(self, variances: LinkVariances) -> "RealizationBatch":
        return RealizationBatch(
            h_sr=np.sqrt(variances.sr) * self.h_sr,
            h_rd=np.sqrt(variances.rd) * self.h_rd,
            h_si=np.sqrt(variances.si) * self.h_si,
            h_ir=np.sqrt(variances.ir) * self.h_ir,
            h_ri=np.sqrt(variances.ri) * self.h_ri,
            h_id=np.sqrt(variances.id) * self.h_id,
        )

    def __getitem__(self, i: int) -> ChannelRealization:
        return ChannelRealization(complex(self.h_sr[i]), complex(self.h_rd[i]),
                                  self.h_si[i], self.h_ir[i], self.h_ri[i], self.h_id[i])


def draw_batch(model: CorrelatedChannelModel, master_seed: int, indices) -> RealizationBatch:
    """Unit-variance realizations for ``indices`` under counter-based seeding.

    Entry ``j`` uses the same normals as
    ``draw_realization(model, realization_rng(master_seed, indices[j]))``; the
    correlation is applied as one matrix product, so results agree with the
    single draw to rounding. Identical ``indices`` always give identical bits.
    """
    m = model.n_elements
    blocks = np.stack([_unit_block(realization_rng(master_seed, int(i)), m) for i in indices])
    vec = blocks[:, 2:].reshape(len(blocks), 4, m) @ model.root
    return RealizationBatch(h_sr=blocks[:, 0], h_rd=blocks[:, 1], h_si=vec[:, 0],
                            h_ir=vec[:, 1], h_ri=vec[:, 2], h_id=vec[:, 3])


def realization_rng(master_seed: int, index: int) -> np.random.Generator:
    """Generator for realization ``index``; depends only on ``(master_seed, index)``."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))
