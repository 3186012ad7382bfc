"""Hard-edged transmission masks and down-conversion source profiles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigurationError, NumericalGuardError
from .grid import Field1D, Grid1D, normalize
from .propagation import register_arm_operation

MIN_FEATURE_SAMPLES = 4
MIN_SOURCE_SAMPLES = 8

# Boundaries that land exactly on a sample count as open; the slack keeps
# that decision immune to rounding in x_k = (k - n/2) dx.
_EDGE_SLACK = 1e-9


@dataclass(frozen=True)
class DoubleSlit:
    width: float
    separation: float

    def __post_init__(self):
        if not (self.separation > self.width > 0):
            raise ConfigurationError(
                f"double slit needs separation > width > 0, got "
                f"width={self.width}, separation={self.separation}"
            )


@dataclass(frozen=True)
class RectAperture:
    width: float
    center: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise ConfigurationError(f"aperture width must be positive, got {self.width}")


@dataclass(frozen=True)
class NoMask:
    pass


Mask = Union[DoubleSlit, RectAperture, NoMask]


def _inside(offset: np.ndarray, half_width: float, dx: float) -> np.ndarray:
    return np.abs(offset) <= half_width + _EDGE_SLACK * dx


def _require_resolved(count: int, what: str, size: float, dx: float) -> None:
    if count < MIN_FEATURE_SAMPLES:
        raise NumericalGuardError(
            f"{what} of {size:g} m spans {count} samples at dx = {dx:g} m; "
            f"at least {MIN_FEATURE_SAMPLES} are required"
        )


def sample_mask(m: Mask, g: Grid1D) -> np.ndarray:
    """Binary transmission of ``m`` on ``g``.

    The double slit is built from ``|x|`` so it is exactly even on the
    symmetric grid.
    """
    x = g.x
    if isinstance(m, NoMask):
        return np.ones(g.n)
    if isinstance(m, DoubleSlit):
        t = _inside(np.abs(x) - m.separation / 2, m.width / 2, g.dx)
        _require_resolved(int(np.count_nonzero(t & (x > 0))), "slit width", m.width, g.dx)
        return t.astype(float)
    if isinstance(m, RectAperture):
        t = _inside(x - m.center, m.width / 2, g.dx)
        _require_resolved(int(np.count_nonzero(t)), "aperture width", m.width, g.dx)
        return t.astype(float)
    raise ConfigurationError(f"unknown mask type {type(m).__name__}")


def single_slit_masks(m: DoubleSlit, g: Grid1D) -> tuple[np.ndarray, np.ndarray]:
    """Transmissions of slit 1 (x > 0) and slit 2 (x < 0) separately."""
    t = sample_mask(m, g)
    x = g.x
    return t * (x > 0), t * (x < 0)


def open_width(m: Mask, g: Grid1D) -> float:
    """Width actually passed by one opening once sampled (samples * dx)."""
    t = sample_mask(m, g)
    if isinstance(m, DoubleSlit):
        t = t * (g.x > 0)
    return float(np.count_nonzero(t) * g.dx)


def apply_mask(f: Field1D, m: Mask) -> Field1D:
    return f.with_amp(f.amp * sample_mask(m, f.grid))


def _mask_axis(amp, grid, axis, m):
    t = sample_mask(m, grid)
    return amp * (t[:, None] if axis == 0 else t[None, :])


register_arm_operation(apply_mask, _mask_axis)


@dataclass(frozen=True)
class SourceSpec:
    """Pump footprint on the crystal plus the signal-idler correlation scale.

    ``width`` is the intensity standard deviation for ``profile="gaussian"``
    and the full width for ``profile="tophat"``.
    """

    profile: str = "tophat"
    width: float = 2e-3
    corr_width: float = 50e-6
    lam_s: float = 702e-9
    lam_i: float = 702e-9

    def __post_init__(self):
        if self.profile not in ("gaussian", "tophat"):
            raise ConfigurationError(f"unknown source profile {self.profile!r}")
        for name in ("width", "corr_width", "lam_s", "lam_i"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigurationError(f"source {name} must be positive, got {value}")

    @property
    def extent(self) -> float:
        """Full width used for the resolution and window checks."""
        return self.width if self.profile == "tophat" else 4 * self.width


def source_amplitude(s: SourceSpec, x: np.ndarray) -> np.ndarray:
    """Un-normalized pump amplitude evaluated at arbitrary positions."""
    if s.profile == "gaussian":
        return np.exp(-(x ** 2) / (4 * s.width ** 2))
    return (np.abs(x) <= s.width / 2 * (1 + _EDGE_SLACK)).astype(float)


def check_source_on_grid(s: SourceSpec, g: Grid1D) -> None:
    if s.extent < MIN_SOURCE_SAMPLES * g.dx * (1 - _EDGE_SLACK):
        raise NumericalGuardError(
            f"source extent {s.extent:g} m is resolved by fewer than "
            f"{MIN_SOURCE_SAMPLES} samples at dx = {g.dx:g} m"
        )
    reach = s.extent if s.profile == "tophat" else 2 * s.extent
    if reach > g.width / 2:
        raise NumericalGuardError(
            f"source extent {s.extent:g} m does not fit in half the "
            f"{g.width:g} m grid window"
        )


def source_profile(s: SourceSpec, g: Grid1D) -> Field1D:
    """Normalized pump amplitude on ``g``.

    Gaussian: ``exp(-x^2 / (4 sigma^2))`` so the intensity has standard
    deviation ``sigma``.  Top hat: constant on ``|x| <= s/2``.
    """
    check_source_on_grid(s, g)
    return normalize(Field1D(g, source_amplitude(s, g.x)))
