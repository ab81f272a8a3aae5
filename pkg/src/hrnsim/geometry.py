"""Node placement, IRS unit-cell lattice and distance-based channel variances."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

Point = tuple[float, float, float]


class IrsScenario(enum.Enum):
    """Where the IRS sits for the IRS-only scheme."""

    NEAR_RELAY = "near_relay"
    NEAR_SOURCE = "near_source"

    @classmethod
    def parse(cls, text: str) -> "IrsScenario":
        key = text.strip().lower().replace("-", "_")
        aliases = {
            "near_relay": cls.NEAR_RELAY,
            "nearrelay": cls.NEAR_RELAY,
            "scenario1": cls.NEAR_RELAY,
            "1": cls.NEAR_RELAY,
            "near_source": cls.NEAR_SOURCE,
            "nearsource": cls.NEAR_SOURCE,
            "scenario2": cls.NEAR_SOURCE,
            "2": cls.NEAR_SOURCE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown IRS scenario {text!r}") from None


def _point(p) -> Point:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3D coordinate, got {p!r}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"coordinate {p!r} is not finite")
    return (float(arr[0]), float(arr[1]), float(arr[2]))


def distance(a, b) -> float:
    return math.dist(a, b)


@dataclass(frozen=True)
class NodeLayout:
    """Coordinates (metres) of source, relay, destination and IRS centre."""

    source: Point = (0.0, 0.0, 0.0)
    relay: Point = (100.0, 0.0, 0.0)
    destination: Point = (200.0, 0.0, 0.0)
    irs_center: Point = (100.0, 2.0, 8.0)

    def __post_init__(self):
        for name in ("source", "relay", "destination", "irs_center"):
            object.__setattr__(self, name, _point(getattr(self, name)))
        nodes = [self.source, self.relay, self.destination, self.irs_center]
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if distance(nodes[i], nodes[j]) <= 0.0:
                    raise ValueError("node positions must be pairwise distinct")

    def with_irs(self, center) -> "NodeLayout":
        return replace(self, irs_center=_point(center))

    def translated(self, offset) -> "NodeLayout":
        o = np.asarray(_point(offset))
        return NodeLayout(
            *(tuple(np.asarray(p) + o) for p in
              (self.source, self.relay, self.destination, self.irs_center))
        )


IRS_NEAR_RELAY: Point = (100.0, 2.0, 8.0)
IRS_NEAR_SOURCE: Point = (0.0, 2.0, 8.0)


def default_layout(scenario: IrsScenario = IrsScenario.NEAR_RELAY) -> NodeLayout:
    center = IRS_NEAR_RELAY if scenario is IrsScenario.NEAR_RELAY else IRS_NEAR_SOURCE
    return NodeLayout(irs_center=center)


@dataclass(frozen=True, eq=False)
class UcGrid:
    """Square ``m_d x m_d`` lattice of unit-cell positions.

    ``positions`` has shape ``(m_d**2, 3)``, row-major over the two in-plane axes.
    """

    m_d: int
    spacing: float
    positions: np.ndarray = field(repr=False)

    @property
    def n_elements(self) -> int:
        return self.m_d * self.m_d


def _plane_axes(normal) -> tuple[np.ndarray, np.ndarray]:
    n = np.asarray(normal, dtype=float)
    norm = np.linalg.norm(n)
    if n.shape != (3,) or not np.isfinite(norm) or norm == 0.0:
        raise ValueError(f"invalid plane normal {normal!r}")
    n = n / norm
    # vertical in-plane axis unless the surface is (nearly) horizontal
    seed = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    v = seed - n * (seed @ n)
    v /= np.linalg.norm(v)
    u = np.cross(v, n)
    return u, v


def build_uc_grid(m_d: int, spacing: float, center=(0.0, 0.0, 0.0),
                  normal=(0.0, 1.0, 0.0)) -> UcGrid:
    """Lay out ``m_d**2`` unit cells centred on ``center`` in the plane with ``normal``.

    The default normal (the y axis) gives a vertical surface facing the
    source-destination line.
    """
    if int(m_d) != m_d or m_d < 1:
        raise ValueError(f"m_d must be a positive integer, got {m_d!r}")
    if not spacing > 0.0 or not math.isfinite(spacing):
        raise ValueError(f"spacing must be positive, got {spacing!r}")
    m_d = int(m_d)
    u, v = _plane_axes(normal)
    offsets = (np.arange(m_d) - (m_d - 1) / 2.0) * spacing
    a, b = np.meshgrid(offsets, offsets, indexing="ij")
    positions = (np.asarray(_point(center))
                 + a.reshape(-1, 1) * u + b.reshape(-1, 1) * v)
    return UcGrid(m_d=m_d, spacing=float(spacing), positions=positions)


@dataclass(frozen=True)
class PathLossModel:
    reference_distance: float = 1.0
    offset_db: float = -20.0
    alpha_irs: float = 3.0
    alpha_relay: float = 3.7

    def __post_init__(self):
        if not self.reference_distance > 0.0:
            raise ValueError("reference_distance must be positive")
        if not (self.alpha_irs > 0.0 and self.alpha_relay > 0.0):
            raise ValueError("path-loss exponents must be positive")
        if not math.isfinite(self.offset_db):
            raise ValueError("offset_db must be finite")


def channel_variance_db(d: float, model: PathLossModel, alpha: float) -> float:
    if not d > 0.0:
        raise ValueError(f"distance must be positive, got {d!r}")
    return -10.0 * alpha * math.log10(d / model.reference_distance) + model.offset_db


def channel_variance(d: float, model: PathLossModel, alpha: float) -> float:
    """Large-scale power gain ``10**((-10*alpha*log10(d/d0) + offset_db)/10)``."""
    return 10.0 ** (channel_variance_db(d, model, alpha) / 10.0)


@dataclass(frozen=True)
class LinkVariances:
    sr: float
    rd: float
    si: float
    ir: float
    ri: float
    id: float

    def as_dict(self) -> dict[str, float]:
        return {"sr": self.sr, "rd": self.rd, "si": self.si,
                "ir": self.ir, "ri": self.ri, "id": self.id}


def scenario_variances(layout: NodeLayout, model: PathLossModel) -> LinkVariances:
    """Per-link variances; the IRS counts as a single point at its centre."""
    irs = layout.irs_center
    ir = channel_variance(distance(irs, layout.relay), model, model.alpha_irs)
    return LinkVariances(
        sr=channel_variance(distance(layout.source, layout.relay), model, model.alpha_relay),
        rd=channel_variance(distance(layout.relay, layout.destination), model, model.alpha_relay),
        si=channel_variance(distance(layout.source, irs), model, model.alpha_irs),
        ir=ir,
        ri=ir,
        id=channel_variance(distance(irs, layout.destination), model, model.alpha_irs),
    )


@dataclass(frozen=True)
class GeometryParams:
    """Deployment description: fixed nodes, both IRS placements and the lattice."""

    source: Point = (0.0, 0.0, 0.0)
    relay: Point = (100.0, 0.0, 0.0)
    destination: Point = (200.0, 0.0, 0.0)
    irs_near_relay: Point = IRS_NEAR_RELAY
    irs_near_source: Point = IRS_NEAR_SOURCE
    spacing_wavelengths: float = 0.125
    plane_normal: Point = (0.0, 1.0, 0.0)

    def __post_init__(self):
        for name in ("source", "relay", "destination", "irs_near_relay",
                     "irs_near_source", "plane_normal"):
            object.__setattr__(self, name, _point(getattr(self, name)))
        if not self.spacing_wavelengths > 0.0:
            raise ValueError("spacing_wavelengths must be positive")
        _plane_axes(self.plane_normal)
        for scenario in IrsScenario:
            self.layout(scenario)

    def layout(self, scenario: IrsScenario) -> NodeLayout:
        irs = self.irs_near_relay if scenario is IrsScenario.NEAR_RELAY else self.irs_near_source
        return NodeLayout(self.source, self.relay, self.destination, irs)
