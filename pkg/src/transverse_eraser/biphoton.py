"""Two-photon transverse state, idler-side detection and coincidence rates.

The state is stored as ``amp[j, k] = psi(x_s[j], x_i[k])``.  Detecting the
idler at a definite position selects a column; a finite detector sums the
selected columns' probabilities, because distinct idler positions are
orthogonal outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .elements import SourceSpec, check_source_on_grid, source_amplitude
from .errors import ConfigurationError, NumericalGuardError
from .grid import BiphotonField, Field1D, Grid1D, normalize


@dataclass(frozen=True)
class PointDetector:
    x0: float = 0.0


@dataclass(frozen=True)
class BucketDetector:
    width: float
    center: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise ConfigurationError(f"bucket width must be positive, got {self.width}")


@dataclass(frozen=True)
class FourierDetector:
    q0: float = 0.0


DetectionSpec = Union[PointDetector, BucketDetector, FourierDetector]


@dataclass(frozen=True, eq=False)
class FringeProfile:
    """Non-negative rate sampled along the signal detector axis."""

    grid: Grid1D
    value: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.value, dtype=float)
        if v.shape != (self.grid.n,):
            raise ConfigurationError("profile length does not match its grid")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise NumericalGuardError("profile values must be finite and non-negative")
        v.flags.writeable = False
        object.__setattr__(self, "value", v)

    def scaled(self, factor: float) -> "FringeProfile":
        return FringeProfile(self.grid, self.value * factor)

    def total(self) -> float:
        return float(np.sum(self.value) * self.grid.dx)


def make_spdc_state(src: SourceSpec, grid_s: Grid1D, grid_i: Grid1D) -> BiphotonField:
    """Normalized ``psi = E((x_s + x_i) / 2) * g(x_s - x_i)``.

    ``E`` is the pump amplitude and ``g`` a Gaussian whose squared modulus
    has standard deviation ``src.corr_width``: photons of a pair are born at
    the same point up to that scale.
    """
    check_source_on_grid(src, grid_s)
    check_source_on_grid(src, grid_i)
    pitch = max(grid_s.dx, grid_i.dx)
    if src.corr_width < pitch * (1 - 1e-9):
        raise NumericalGuardError(
            f"correlation width {src.corr_width:g} m is narrower than the grid "
            f"pitch {pitch:g} m"
        )
    xs = grid_s.x[:, None]
    xi = grid_i.x[None, :]
    amp = source_amplitude(src, (xs + xi) / 2) * np.exp(
        -((xs - xi) ** 2) / (4 * src.corr_width ** 2)
    )
    return normalize(BiphotonField(grid_s, grid_i, amp))


def product_state(f: Field1D, g: Field1D) -> BiphotonField:
    """Separable state ``f(x_s) g(x_i)``."""
    return BiphotonField(f.grid, g.grid, np.outer(f.amp, g.amp))


def signal_singles(b: BiphotonField) -> FringeProfile:
    """Idler-blind signal rate: the partial trace over the idler."""
    return FringeProfile(b.grid_s, np.sum(np.abs(b.amp) ** 2, axis=1) * b.grid_i.dx)


def conditional_signal(b: BiphotonField, det: PointDetector | float) -> Field1D:
    """Un-normalized signal amplitude given an idler click at ``x0``.

    The nearest idler sample is used.  Its squared norm times ``dx_i`` is
    the probability density of that idler outcome.
    """
    x0 = det.x0 if isinstance(det, PointDetector) else float(det)
    k = b.grid_i.index_of(x0)
    return Field1D(b.grid_s, b.amp[:, k])


def bucket_indices(grid: Grid1D, det: BucketDetector) -> np.ndarray:
    lo, hi = det.center - det.width / 2, det.center + det.width / 2
    x = grid.x
    if hi < x[0] - grid.dx / 2 or lo > x[-1] + grid.dx / 2:
        raise ConfigurationError(
            f"bucket [{lo:g}, {hi:g}] m lies outside the idler window"
        )
    slack = 1e-9 * grid.dx
    idx = np.flatnonzero((x >= lo - slack) & (x <= hi + slack))
    if idx.size == 0:
        raise ConfigurationError(
            f"bucket of width {det.width:g} m at {det.center:g} m contains no idler samples"
        )
    return idx


def coincidence_bucket(b: BiphotonField, det: BucketDetector) -> FringeProfile:
    """Coincidences with an idler detector integrating over an aperture."""
    idx = bucket_indices(b.grid_i, det)
    rate = np.sum(np.abs(b.amp[:, idx]) ** 2, axis=1) * b.grid_i.dx
    return FringeProfile(b.grid_s, rate)


def idler_fourier_project(b: BiphotonField, q0: float) -> Field1D:
    """Project the idler onto the plane-wave mode ``exp(i q0 x)``.

    ``q0`` is an angular spatial frequency [rad/m].
    """
    if abs(q0) > b.grid_i.nyquist:
        raise ConfigurationError(
            f"|q0| = {abs(q0):g} rad/m exceeds the idler Nyquist frequency "
            f"{b.grid_i.nyquist:g} rad/m"
        )
    phase = np.exp(-1j * q0 * b.grid_i.x)
    return Field1D(b.grid_s, (b.amp @ phase) * b.grid_i.dx)


def far_zone_wavevector(x0: float, distance: float, lam: float) -> float:
    """Transverse wavevector that lands at ``x0`` in a far-zone or focal plane."""
    return 2 * np.pi * x0 / (lam * distance)


def coincidence(b: BiphotonField, det: DetectionSpec) -> FringeProfile:
    """Coincidence profile for any detector geometry."""
    if isinstance(det, BucketDetector):
        return coincidence_bucket(b, det)
    if isinstance(det, PointDetector):
        cond = conditional_signal(b, det)
        return FringeProfile(b.grid_s, np.abs(cond.amp) ** 2 * b.grid_i.dx)
    if isinstance(det, FourierDetector):
        return FringeProfile(b.grid_s, np.abs(idler_fourier_project(b, det.q0).amp) ** 2)
    raise ConfigurationError(f"unknown detector type {type(det).__name__}")
