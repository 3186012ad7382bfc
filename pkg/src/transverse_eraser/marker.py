"""Two-path photon with a polarization marker: the textbook eraser in 4 dimensions.

Basis order is ``(path1 L, path1 R, path2 L, path2 R)``.  A linear
polarizer at angle ``theta`` projects the marker onto
``(|L> + exp(2i theta) |R>) / sqrt(2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .biphoton import FringeProfile
from .errors import ConfigurationError
from .grid import Grid1D

_NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MarkerState:
    c: np.ndarray = field(repr=True)

    def __post_init__(self):
        c = np.array(self.c, dtype=complex).reshape(-1)
        if c.shape != (4,):
            raise ConfigurationError("a marker state has exactly 4 coefficients")
        if abs(np.sum(np.abs(c) ** 2) - 1) > _NORM_TOL:
            raise ConfigurationError("marker state coefficients must be normalized")
        c.flags.writeable = False
        object.__setattr__(self, "c", c)

    @property
    def by_path(self) -> np.ndarray:
        """Coefficients as ``[[1L, 1R], [2L, 2R]]``."""
        return self.c.reshape(2, 2)

    def path_density(self) -> np.ndarray:
        """Reduced 2x2 path density matrix (polarization traced out)."""
        m = self.by_path
        return m @ m.conj().T


def make_plain_state() -> MarkerState:
    """Equal superposition of both paths with a common polarization."""
    return MarkerState(np.full(4, 0.5))


def make_marked_state() -> MarkerState:
    """Path 1 tagged L, path 2 tagged R."""
    return MarkerState([1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)])


def _check_theta(theta):
    if not 0 <= theta < np.pi:
        raise ConfigurationError(f"polarizer angle must lie in [0, pi), got {theta}")


def polarizer_state(theta: float) -> np.ndarray:
    _check_theta(theta)
    return np.array([1.0, np.exp(2j * theta)]) / np.sqrt(2)


def project_polarizer(s: MarkerState, theta: float) -> tuple[np.ndarray, float]:
    """Path amplitudes after the polarizer and the probability of passing it."""
    amps = s.by_path @ polarizer_state(theta).conj()
    return amps, float(np.sum(np.abs(amps) ** 2))


def _phases(d, lam, z, xs: Grid1D):
    if not (d > 0 and lam > 0 and z > 0):
        raise ConfigurationError("slit separation, wavelength and distance must be positive")
    arg = np.pi * d * xs.x / (lam * z)
    return np.exp(1j * arg), np.exp(-1j * arg)


def fringe_pattern(amps, d: float, lam: float, z: float, xs: Grid1D) -> FringeProfile:
    """Two-point-source pattern ``|a1 e^{+i pi d x/(lam z)} + a2 e^{-i pi d x/(lam z)}|^2``.

    No diffraction envelope; the period is ``lam z / d``.
    """
    a1, a2 = np.asarray(amps, dtype=complex)
    e_plus, e_minus = _phases(d, lam, z, xs)
    return FringeProfile(xs, np.abs(a1 * e_plus + a2 * e_minus) ** 2)


def polarization_blind_pattern(s: MarkerState, d: float, lam: float, z: float, xs: Grid1D) -> FringeProfile:
    """Pattern seen without a polarizer: each marker component adds in intensity."""
    e_plus, e_minus = _phases(d, lam, z, xs)
    m = s.by_path
    total = sum(np.abs(m[0, p] * e_plus + m[1, p] * e_minus) ** 2 for p in range(2))
    return FringeProfile(xs, total)


def amplitude_visibility(amps) -> float:
    a1, a2 = np.asarray(amps, dtype=complex)
    total = abs(a1) ** 2 + abs(a2) ** 2
    return float(2 * abs(a1 * np.conj(a2)) / total) if total > 0 else 0.0


def blind_visibility(s: MarkerState) -> float:
    rho = s.path_density()
    return float(2 * abs(rho[0, 1]) / np.real(rho[0, 0] + rho[1, 1]))
