"""INI-style experiment files and the built-in figure presets.

Every key is optional; omitted keys keep the value of the base config (the
reference deployment unless a preset is given). Unknown sections or keys are
errors. :func:`dump_config` writes the fully resolved config in SI units, and
loading that text gives back an identical :class:`ExperimentConfig`.
"""

from __future__ import annotations

import configparser
import dataclasses
import re
from pathlib import Path

import numpy as np

from .geometry import IrsScenario
from .linkbudget import ALL_SERIES, Csi, FrameParams, Scheme, SchemeConfig, dbm_to_watts
from .montecarlo import SWEEP_M, SWEEP_RATE, ExperimentConfig


class ConfigError(ValueError):
    pass


PRESETS = {
    "fig2a": dict(frame=FrameParams(10_000), sweep_variable=SWEEP_M,
                  sweep_values=tuple(m * m for m in range(4, 17, 2)), rate_threshold=3.0),
    "fig2b": dict(frame=FrameParams(1_000), sweep_variable=SWEEP_M,
                  sweep_values=tuple(m * m for m in range(4, 21, 2)), rate_threshold=3.0),
    "fig2c": dict(frame=FrameParams(10_000), sweep_variable=SWEEP_RATE,
                  sweep_values=tuple(float(r) for r in np.arange(1.0, 10.01, 0.5)),
                  n_elements=144),
}


def preset_config(name: str, **overrides) -> ExperimentConfig:
    try:
        fields = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return ExperimentConfig(**{**fields, **overrides})


_GEOMETRY = ("source", "relay", "destination", "irs_near_relay", "irs_near_source",
             "spacing_wavelengths", "plane_normal")
_PATHLOSS = ("reference_distance", "offset_db", "alpha_irs", "alpha_relay")
_SYSTEM_W = ("noise_power", "p_source", "p_relay", "p_destination", "p_static", "p_dynamic")
_SYSTEM_KEYS = {"carrier_frequency_hz", "bandwidth_hz", "amplifier_efficiency", "amplitude",
                "noise_power_dbm", "noise_power_w",
                *(f"{k}_mw" for k in _SYSTEM_W[1:]), *(f"{k}_w" for k in _SYSTEM_W[1:])}
_FRAME_KEYS = {"coherence", "pilots", "guard"}
_EXPERIMENT_KEYS = {"series", "schemes", "csi", "irs_scenarios", "sweep", "values",
                    "rate_threshold", "elements", "realizations", "seed"}
SECTIONS = {
    "geometry": set(_GEOMETRY),
    "pathloss": set(_PATHLOSS),
    "system": _SYSTEM_KEYS,
    "frame": _FRAME_KEYS,
    "experiment": _EXPERIMENT_KEYS,
}


class _Reader:
    """Typed access to one parsed file with line-referenced errors."""

    def __init__(self, text: str, source: str):
        self.source = source
        self.lines = text.splitlines()
        self.parser = configparser.ConfigParser(
            interpolation=None, inline_comment_prefixes=("#", ";"), empty_lines_in_values=False)
        self.parser.optionxform = str
        try:
            self.parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: malformed config: {exc}") from None

    def line_of(self, section: str, key: str | None = None) -> int | None:
        current = None
        for no, raw in enumerate(self.lines, start=1):
            line = raw.strip()
            m = re.match(r"\[([^\]]+)\]", line)
            if m:
                current = m.group(1).strip()
                if key is None and current == section:
                    return no
                continue
            if current == section and key is not None and re.match(
                    rf"{re.escape(key)}\s*[=:]", line):
                return no
        return None

    def error(self, section, key, message) -> ConfigError:
        no = self.line_of(section, key)
        where = f"{self.source}:{no}" if no else self.source
        what = f"[{section}] {key}" if key else f"[{section}]"
        return ConfigError(f"{where}: {what}: {message}")

    def check_keys(self):
        for section in self.parser.sections():
            if section not in SECTIONS:
                raise self.error(section, None, "unknown section")
            for key in self.parser[section]:
                if key not in SECTIONS[section]:
                    raise self.error(section, key, "unknown key")

    def has(self, section, key) -> bool:
        return self.parser.has_option(section, key)

    def get(self, section, key, convert):
        raw = self.parser.get(section, key)
        try:
            return convert(raw)
        except (ValueError, TypeError) as exc:
            raise self.error(section, key, f"invalid value {raw!r}: {exc}") from None


def _float(text: str) -> float:
    return float(text.strip())


def _int(text: str) -> int:
    text = text.strip()
    try:
        return int(text)  # exact, also for 64-bit seeds
    except ValueError:
        pass
    value = float(text)  # accept forms like 1e4
    if not value.is_integer():
        raise ValueError("expected an integer")
    return int(value)


def _floats(text: str) -> tuple[float, ...]:
    items = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    if not items:
        raise ValueError("expected a list of numbers")
    return tuple(float(t) for t in items)


def _point(text: str) -> tuple[float, float, float]:
    vals = _floats(text)
    if len(vals) != 3:
        raise ValueError("expected three coordinates")
    return vals


def _words(text: str) -> list[str]:
    return [t for t in re.split(r"[,\s]+", text.strip()) if t]


def _guard(text: str) -> int | None:
    if text.strip().upper() == "M":
        return None
    return _int(text)


def parse_series(label: str) -> SchemeConfig:
    """Inverse of :attr:`SchemeConfig.label` (``relay``, ``irs_near_source/scsi``, ...)."""
    head, _, csi = label.strip().partition("/")
    if head == "relay" and not csi:
        return SchemeConfig(Scheme.RELAY)
    if not csi:
        raise ValueError(f"series {label!r} needs a CSI mode, e.g. {head}/icsi")
    if head.startswith("irs_"):
        return SchemeConfig(Scheme.IRS, Csi.parse(csi), IrsScenario.parse(head[4:]))
    return SchemeConfig(Scheme.parse(head), Csi.parse(csi))


def _product_series(schemes, csis, scenarios) -> tuple[SchemeConfig, ...]:
    wanted = set()
    for scheme in schemes:
        if scheme is Scheme.RELAY:
            wanted.add(SchemeConfig(Scheme.RELAY))
            continue
        for csi in csis:
            for sc in (scenarios if scheme is Scheme.IRS else [IrsScenario.NEAR_RELAY]):
                wanted.add(SchemeConfig(scheme, csi, sc))
    return tuple(s for s in ALL_SERIES if s in wanted)


def _resolve(r: _Reader, base: ExperimentConfig) -> ExperimentConfig:
    r.check_keys()
    sec = "geometry"
    geo = {}
    for key in _GEOMETRY:
        if r.has(sec, key):
            conv = _float if key == "spacing_wavelengths" else _point
            geo[key] = r.get(sec, key, conv)
    sec = "pathloss"
    pl = {k: r.get(sec, k, _float) for k in _PATHLOSS if r.has(sec, k)}

    sec = "system"
    sysp = {}
    carrier = base.carrier_frequency
    if r.has(sec, "carrier_frequency_hz"):
        carrier = r.get(sec, "carrier_frequency_hz", _float)
    for key, field in (("bandwidth_hz", "bandwidth"),
                       ("amplifier_efficiency", "amplifier_efficiency"),
                       ("amplitude", "amplitude")):
        if r.has(sec, key):
            sysp[field] = r.get(sec, key, _float)
    if r.has(sec, "noise_power_dbm") and r.has(sec, "noise_power_w"):
        raise r.error(sec, "noise_power_w", "give noise power in dBm or W, not both")
    if r.has(sec, "noise_power_dbm"):
        sysp["noise_power"] = dbm_to_watts(r.get(sec, "noise_power_dbm", _float))
    if r.has(sec, "noise_power_w"):
        sysp["noise_power"] = r.get(sec, "noise_power_w", _float)
    for name in _SYSTEM_W[1:]:
        if r.has(sec, f"{name}_mw") and r.has(sec, f"{name}_w"):
            raise r.error(sec, f"{name}_w", f"give {name} in mW or W, not both")
        if r.has(sec, f"{name}_mw"):
            sysp[name] = r.get(sec, f"{name}_mw", _float) / 1000.0
        if r.has(sec, f"{name}_w"):
            sysp[name] = r.get(sec, f"{name}_w", _float)

    sec = "frame"
    fr = {}
    for key, conv in (("coherence", _int), ("pilots", _int), ("guard", _guard)):
        if r.has(sec, key):
            fr[key] = r.get(sec, key, conv)

    sec = "experiment"
    exp = {}
    product_keys = [k for k in ("schemes", "csi", "irs_scenarios") if r.has(sec, k)]
    if r.has(sec, "series"):
        if product_keys:
            raise r.error(sec, product_keys[0], "use either 'series' or schemes/csi/irs_scenarios")
        exp["series"] = r.get(sec, "series", lambda t: tuple(parse_series(w) for w in _words(t)))
    elif product_keys:
        schemes = (r.get(sec, "schemes", lambda t: [Scheme.parse(w) for w in _words(t)])
                   if r.has(sec, "schemes") else list(Scheme))
        csis = (r.get(sec, "csi", lambda t: [Csi.parse(w) for w in _words(t)])
                if r.has(sec, "csi") else list(Csi))
        scenarios = (r.get(sec, "irs_scenarios",
                           lambda t: [IrsScenario.parse(w) for w in _words(t)])
                     if r.has(sec, "irs_scenarios") else list(IrsScenario))
        exp["series"] = _product_series(schemes, csis, scenarios)
    if r.has(sec, "sweep"):
        def sweep(t):
            t = t.strip().lower()
            aliases = {"m": SWEEP_M, "elements": SWEEP_M, "rate": SWEEP_RATE,
                       "r_th": SWEEP_RATE, "rate_threshold": SWEEP_RATE}
            if t not in aliases:
                raise ValueError("expected 'm' or 'rate'")
            return aliases[t]
        exp["sweep_variable"] = r.get(sec, "sweep", sweep)
    if r.has(sec, "values"):
        exp["sweep_values"] = r.get(sec, "values", _floats)
    for key, field, conv in (("rate_threshold", "rate_threshold", _float),
                             ("elements", "n_elements", _int),
                             ("realizations", "realizations", _int),
                             ("seed", "seed", _int)):
        if r.has(sec, key):
            exp[field] = r.get(sec, key, conv)
    if "sweep_variable" in exp and "sweep_values" not in exp \
            and exp["sweep_variable"] != base.sweep_variable:
        raise r.error(sec, "sweep", "changing the sweep variable requires 'values'")

    # build block by block so a bad value is reported against its section
    def build(section, make):
        try:
            return make()
        except ValueError as exc:
            # messages start with the offending field name; point at its key if present
            field = str(exc).split()[0]
            keys = [k for k in (r.parser[section] if r.parser.has_section(section) else ())
                    if k.startswith(field)]
            raise r.error(section, keys[0] if keys else None, str(exc)) from None

    geometry = build("geometry", lambda: dataclasses.replace(base.geometry, **geo))
    pathloss = build("pathloss", lambda: dataclasses.replace(base.pathloss, **pl))
    system = build("system", lambda: dataclasses.replace(base.system, **sysp))
    frame = build("frame", lambda: dataclasses.replace(base.frame, **fr))
    return build("experiment", lambda: dataclasses.replace(
        base, geometry=geometry, pathloss=pathloss, system=system, frame=frame,
        carrier_frequency=carrier, **exp))


def loads_config(text: str, base: ExperimentConfig | None = None,
                 source: str = "<string>") -> ExperimentConfig:
    return _resolve(_Reader(text, source), base or ExperimentConfig())


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Read an experiment file; missing keys fall back to ``base`` (reference defaults)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    return loads_config(text, base, source=str(path))


def _fmt(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(_fmt(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(config: ExperimentConfig) -> str:
    """Fully resolved config text (SI units, full float precision)."""
    g, p, s, f = config.geometry, config.pathloss, config.system, config.frame
    sections = {
        "geometry": {k: getattr(g, k) for k in _GEOMETRY},
        "pathloss": {k: getattr(p, k) for k in _PATHLOSS},
        "system": {
            "carrier_frequency_hz": float(config.carrier_frequency),
            "noise_power_w": s.noise_power,
            "bandwidth_hz": float(s.bandwidth),
            "amplifier_efficiency": float(s.amplifier_efficiency),
            **{f"{k}_w": float(getattr(s, k)) for k in _SYSTEM_W[1:]},
            "amplitude": float(s.amplitude),
        },
        "frame": {"coherence": f.coherence, "pilots": f.pilots,
                  "guard": "M" if f.guard is None else f.guard},
        "experiment": {
            "series": ", ".join(c.label for c in config.series),
            "sweep": config.sweep_variable,
            "values": tuple(config.sweep_values),
            "rate_threshold": float(config.rate_threshold),
            "elements": config.n_elements,
            "realizations": config.realizations,
            "seed": config.seed,
        },
    }
    out = []
    for name, items in sections.items():
        out.append(f"[{name}]")
        out.extend(f"{k} = {_fmt(v)}" for k, v in items.items())
        out.append("")
    return "\n".join(out)
