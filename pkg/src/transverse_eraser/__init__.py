"""Twin-photon double-slit quantum eraser in the transverse degrees of freedom.

A down-converted photon pair is described by its transverse amplitude
``psi(x_s, x_i)``.  The signal photon crosses a double slit; how the idler
is detected decides whether coincidence fringes appear.
"""

from .biphoton import (
    BucketDetector,
    FourierDetector,
    FringeProfile,
    PointDetector,
    coincidence,
    coincidence_bucket,
    conditional_signal,
    far_zone_wavevector,
    idler_fourier_project,
    make_spdc_state,
    product_state,
    signal_singles,
)
from .config import SCENARIOS, ScenarioConfig, parse_config, resolve
from .elements import DoubleSlit, NoMask, RectAperture, SourceSpec, apply_mask, sample_mask, source_profile
from .errors import ConfigurationError, EraserError, NumericalGuardError
from .fringes import FringeStats, SweepTable, extract_fringes, source_overlap
from .grid import BiphotonField, Field1D, Grid1D, make_grid, norm2, normalize
from .marker import MarkerState, fringe_pattern, make_marked_state, make_plain_state, project_polarizer
from .propagation import (
    Arm,
    apply_arm,
    apply_lens,
    propagate_angular_spectrum,
    propagate_fresnel_direct,
)
from .scenarios import run_scenario, sweep

__version__ = "0.1.0"
