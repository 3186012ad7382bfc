"""Uniform transverse grids and complex scalar fields sampled on them.

Amplitudes follow a probability-amplitude convention: a 1-D field carries
units of m^(-1/2) so that ``sum(|amp|**2) * dx`` is a dimensionless
probability, and a two-photon field carries m^(-1) with the analogous
double sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, NumericalGuardError

MIN_SAMPLES = 16


@dataclass(frozen=True)
class Grid1D:
    """Centered uniform grid, ``x_k = (k - n/2) * dx``.

    The optical axis sits on sample ``n // 2``.
    """

    n: int
    dx: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < MIN_SAMPLES or self.n % 2:
            raise ConfigurationError(
                f"grid size must be an even integer >= {MIN_SAMPLES}, got {self.n}"
            )
        if not (self.dx > 0 and np.isfinite(self.dx)):
            raise ConfigurationError(f"grid pitch must be positive, got {self.dx}")

    @property
    def width(self) -> float:
        return self.n * self.dx

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    @property
    def nyquist(self) -> float:
        """Largest representable angular spatial frequency (rad/m)."""
        return np.pi / self.dx

    def index_of(self, x0: float) -> int:
        """Nearest-sample index of ``x0``; raises if outside the window."""
        half = self.n // 2
        if not (-half * self.dx - 0.5 * self.dx <= x0 <= (half - 1) * self.dx + 0.5 * self.dx):
            raise ConfigurationError(
                f"position {x0:g} m lies outside the grid window "
                f"[{-half * self.dx:g}, {(half - 1) * self.dx:g}] m"
            )
        k = int(np.floor(x0 / self.dx + 0.5)) + half
        return min(max(k, 0), self.n - 1)


def make_grid(n: int, width: float) -> Grid1D:
    """Build a centered grid of ``n`` samples spanning ``width`` meters."""
    if int(n) != n:
        raise ConfigurationError(f"grid size must be an integer, got {n}")
    if n < MIN_SAMPLES or n % 2:
        raise ConfigurationError(f"grid size must be an even integer >= {MIN_SAMPLES}, got {n}")
    if not width > 0:
        raise ConfigurationError(f"grid width must be positive, got {width}")
    return Grid1D(int(n), width / n)


def _check_finite(amp: np.ndarray) -> None:
    if not np.all(np.isfinite(amp)):
        raise NumericalGuardError("field contains non-finite values")


@dataclass(frozen=True, eq=False)
class Field1D:
    grid: Grid1D
    amp: np.ndarray = field(repr=False)

    def __post_init__(self):
        amp = np.array(self.amp, dtype=complex)
        if amp.shape != (self.grid.n,):
            raise ConfigurationError(
                f"amplitude shape {amp.shape} does not match grid size {self.grid.n}"
            )
        _check_finite(amp)
        amp.flags.writeable = False
        object.__setattr__(self, "amp", amp)

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.amp) ** 2

    def with_amp(self, amp: np.ndarray) -> "Field1D":
        return Field1D(self.grid, amp)


@dataclass(frozen=True, eq=False)
class BiphotonField:
    """Two-photon amplitude ``amp[signal_index, idler_index]``."""

    grid_s: Grid1D
    grid_i: Grid1D
    amp: np.ndarray = field(repr=False)

    def __post_init__(self):
        amp = np.array(self.amp, dtype=complex)
        if amp.shape != (self.grid_s.n, self.grid_i.n):
            raise ConfigurationError(
                f"amplitude shape {amp.shape} does not match grids "
                f"({self.grid_s.n}, {self.grid_i.n})"
            )
        _check_finite(amp)
        amp.flags.writeable = False
        object.__setattr__(self, "amp", amp)

    def with_amp(self, amp: np.ndarray) -> "BiphotonField":
        return BiphotonField(self.grid_s, self.grid_i, amp)


def norm2(f) -> float:
    """Squared norm: ``sum |amp|^2 dx`` (or ``dx_s * dx_i`` for a biphoton)."""
    if isinstance(f, BiphotonField):
        return float(np.sum(np.abs(f.amp) ** 2) * f.grid_s.dx * f.grid_i.dx)
    return float(np.sum(np.abs(f.amp) ** 2) * f.grid.dx)


def normalize(f):
    """Return ``f`` rescaled by a positive real factor to unit norm."""
    n2 = norm2(f)
    if not n2 > 0:
        raise NumericalGuardError("cannot normalize a zero-norm field")
    return f.with_amp(f.amp / np.sqrt(n2))
