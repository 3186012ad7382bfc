"""Scenario configuration: presets, ``key = value`` parsing and resolution.

All lengths are in meters.  Preset geometry is representative, not taken
from a published apparatus; every resolved configuration says so.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Optional

from .errors import ConfigurationError

SCENARIOS = (
    "fig1-coincidence",
    "fig3a-far-slits",
    "fig3b-near-slits",
    "fig3c-erase",
    "fig4-delayed-choice",
    "qubit-eraser",
)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "fig3c-erase"
    # grids
    n_s: int = 1024
    n_i: int = 1024
    dx_s: float = 25e-6
    dx_i: float = 25e-6
    # wavelengths (degenerate down-conversion of a 351 nm pump)
    lambda_s: float = 702e-9
    lambda_i: float = 702e-9
    # source
    source_profile: str = "tophat"
    source_width: float = 2e-3
    sigma_c: Optional[float] = None  # defaults to twice the coarser grid pitch
    # signal arm
    slit_width: float = 1e-4
    slit_separation: float = 5e-4
    z1: float = 0.02
    z2: float = 0.9
    # idler arm
    idler_distance: float = 0.5
    idler_lens: str = "off"
    idler_focal: Optional[float] = None  # defaults to the idler grid's critical distance
    # idler detection
    pinhole_x0: float = 0.0
    pinhole_ladder: tuple = (-3e-4, -2e-4, -1e-4, 0.0, 1e-4, 2e-4, 3e-4)
    bucket_width: float = 3e-4
    bucket_ladder: tuple = (25e-6, 1.5e-4, 3e-4, 5e-4)
    q0: float = 0.0
    # analysis
    fit_periods: float = 3.0
    # marker eraser
    theta: float = 0.0

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigurationError(
                f"unknown scenario {self.scenario!r}; choose one of {', '.join(SCENARIOS)}"
            )
        for f in fields(self):
            _validate(f.name, getattr(self, f.name))

    @property
    def resolved_sigma_c(self) -> float:
        if self.sigma_c is not None:
            return self.sigma_c
        return 2 * max(self.dx_s, self.dx_i)

    @property
    def resolved_idler_focal(self) -> float:
        if self.idler_focal is not None:
            return self.idler_focal
        return self.n_i * self.dx_i ** 2 / self.lambda_i

    @property
    def fringe_period(self) -> float:
        return self.lambda_s * self.z2 / self.slit_separation

    def resolved(self) -> dict:
        """Plain dict with every default made explicit."""
        d = asdict(self)
        d["sigma_c"] = self.resolved_sigma_c
        d["idler_focal"] = self.resolved_idler_focal
        d["pinhole_ladder"] = list(self.pinhole_ladder)
        d["bucket_ladder"] = list(self.bucket_ladder)
        d["representative_geometry"] = True
        return d


# Per-key kinds: "length" > 0, "position" any finite real, "int" even >= 16
# checked later by the grid, "count" > 0, "choice" from a fixed set, "lengths"
# / "positions" comma-separated lists.
_KINDS = {
    "n_s": "int",
    "n_i": "int",
    "dx_s": "length",
    "dx_i": "length",
    "lambda_s": "length",
    "lambda_i": "length",
    "source_profile": ("tophat", "gaussian"),
    "source_width": "length",
    "sigma_c": "length",
    "slit_width": "length",
    "slit_separation": "length",
    "z1": "length",
    "z2": "length",
    "idler_distance": "length",
    "idler_lens": ("on", "off"),
    "idler_focal": "position",
    "pinhole_x0": "position",
    "pinhole_ladder": "positions",
    "bucket_width": "length",
    "bucket_ladder": "lengths",
    "q0": "position",
    "fit_periods": "count",
    "theta": "angle",
}

_PRESETS = {
    "fig3a-far-slits": dict(z1=0.8, source_width=2e-4),
    "fig3b-near-slits": dict(z1=0.02, source_width=2e-3),
    "fig3c-erase": dict(z1=0.02, source_width=2e-3),
    "fig1-coincidence": dict(z1=0.02, source_width=2e-3),
    "fig4-delayed-choice": dict(z1=0.02, source_width=2e-3),
    "qubit-eraser": dict(),
}


def _validate(key, value):
    kind = _KINDS.get(key)
    if kind is None or value is None:
        return
    if isinstance(kind, tuple):
        if value not in kind:
            raise ConfigurationError(f"{key}: expected one of {', '.join(kind)}, got {value!r}")
        return
    if kind in ("lengths", "positions"):
        if len(value) == 0:
            raise ConfigurationError(f"{key}: list must not be empty")
        for v in value:
            _validate_scalar(key, "length" if kind == "lengths" else "position", v)
        return
    _validate_scalar(key, kind, value)


def _validate_scalar(key, kind, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigurationError(f"{key}: expected a finite number, got {value!r}")
    if kind == "int" and int(value) != value:
        raise ConfigurationError(f"{key}: expected an integer, got {value!r}")
    if kind in ("length", "count", "int") and not value > 0:
        raise ConfigurationError(f"{key}: must be positive, got {value!r}")
    if kind == "angle" and not 0 <= value < math.pi:
        raise ConfigurationError(f"{key}: angle must lie in [0, pi), got {value!r}")


def _convert(key: str, raw: str, where: str):
    kind = _KINDS.get(key)
    if kind is None:
        raise ConfigurationError(f"{where}unknown key {key!r}")
    raw = raw.strip()
    if isinstance(kind, tuple):
        return raw
    try:
        if kind in ("lengths", "positions"):
            return tuple(float(v) for v in raw.split(",") if v.strip())
        value = float(raw)
    except ValueError:
        raise ConfigurationError(f"{where}{key}: non-numeric value {raw!r}") from None
    if kind == "int":
        if not value.is_integer():
            raise ConfigurationError(f"{where}{key}: expected an integer, got {raw!r}")
        return int(value)
    return value


def parse_assignment(text: str, where: str = "") -> tuple[str, object]:
    if "=" not in text:
        raise ConfigurationError(f"{where}syntax error: expected 'key = value', got {text!r}")
    key, raw = text.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigurationError(f"{where}syntax error: missing key")
    value = _convert(key, raw, where)
    _validate(key, value)
    return key, value


def parse_overrides(text: str) -> dict:
    """Parse flat ``key = value`` lines into validated overrides.

    Blank lines and ``#`` comments are ignored.  List-valued keys take
    comma-separated numbers.
    """
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = parse_assignment(line, where=f"line {lineno}: ")
        out[key] = value
    return out


def resolve(scenario: str, overrides: Optional[dict] = None) -> ScenarioConfig:
    """Preset for ``scenario`` with ``overrides`` applied."""
    if scenario not in SCENARIOS:
        raise ConfigurationError(
            f"unknown scenario {scenario!r}; choose one of {', '.join(SCENARIOS)}"
        )
    params = dict(_PRESETS[scenario])
    params.update(overrides or {})
    unknown = set(params) - set(_KINDS)
    if unknown:
        raise ConfigurationError(f"unknown key {sorted(unknown)[0]!r}")
    return ScenarioConfig(scenario=scenario, **params)


def parse_config(text: str, scenario: str) -> ScenarioConfig:
    """Parse configuration text and resolve it against ``scenario``'s preset."""
    return resolve(scenario, parse_overrides(text))


def with_value(cfg: ScenarioConfig, key: str, value) -> ScenarioConfig:
    if key not in _KINDS:
        raise ConfigurationError(f"unknown key {key!r}")
    _validate(key, value)
    return replace(cfg, **{key: value})
