import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transverse_eraser import (
    ConfigurationError,
    DoubleSlit,
    Field1D,
    NoMask,
    NumericalGuardError,
    RectAperture,
    SourceSpec,
    apply_mask,
    make_grid,
    norm2,
    sample_mask,
    source_profile,
)
from transverse_eraser.elements import open_width, single_slit_masks


def value_at(t, g, x0):
    return t[g.index_of(x0)]


def test_double_slit_geometry():
    g = make_grid(1024, 1024 * 10e-6)
    t = sample_mask(DoubleSlit(1e-4, 5e-4), g)
    assert value_at(t, g, 0.0) == 0
    assert value_at(t, g, 0.25e-3) == 1
    assert value_at(t, g, -0.25e-3) == 1
    assert set(np.unique(t)) == {0.0, 1.0}


def test_rect_aperture_geometry():
    g = make_grid(1024, 1024 * 10e-6)
    t = sample_mask(RectAperture(2e-4), g)
    for x0, expected in [(0.09e-3, 1), (-0.09e-3, 1), (0.11e-3, 0), (-0.11e-3, 0)]:
        assert value_at(t, g, x0) == expected


def test_rect_aperture_off_center():
    g = make_grid(256, 256 * 10e-6)
    t = sample_mask(RectAperture(1e-4, center=3e-4), g)
    assert value_at(t, g, 3e-4) == 1 and value_at(t, g, 0.0) == 0


def test_under_resolved_slit_rejected():
    g = make_grid(256, 256 * 50e-6)
    with pytest.raises(NumericalGuardError, match="at least 4"):
        sample_mask(DoubleSlit(1e-4, 5e-4), g)


def test_under_resolved_aperture_rejected():
    g = make_grid(256, 256 * 50e-6)
    with pytest.raises(NumericalGuardError):
        sample_mask(RectAperture(1e-4), g)


@pytest.mark.parametrize("w,d", [(1e-4, 1e-4), (2e-4, 1e-4), (0.0, 1e-4), (-1e-4, 5e-4)])
def test_double_slit_requires_disjoint_slits(w, d):
    with pytest.raises(ConfigurationError):
        DoubleSlit(w, d)


def test_rect_aperture_requires_positive_width():
    with pytest.raises(ConfigurationError):
        RectAperture(0.0)


def test_no_mask_is_identity(grid, rng):
    f = Field1D(grid, rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))
    assert np.array_equal(apply_mask(f, NoMask()).amp, f.amp)


def test_open_fraction():
    # Edges fall between samples here, so each slit passes exactly w / dx samples.
    g = make_grid(1024, 1024 * 20e-6)
    w = 1e-4
    f = Field1D(g, np.ones(g.n))
    ratio = norm2(apply_mask(f, DoubleSlit(w, 4.8e-4))) / norm2(f)
    assert ratio == pytest.approx(2 * w / (g.n * g.dx), abs=1e-12)


def test_inclusive_edges_widen_sampled_slit(grid):
    # With edges landing on samples, both edge samples are open.
    assert open_width(DoubleSlit(1e-4, 5e-4), grid) == pytest.approx(1.25e-4)


def test_field_between_slits_is_blocked(grid):
    amp = (np.abs(grid.x) < 1e-4).astype(complex)
    assert norm2(apply_mask(Field1D(grid, amp), DoubleSlit(1e-4, 5e-4))) == 0.0


def test_single_slit_masks_partition(grid):
    m = DoubleSlit(1e-4, 5e-4)
    t1, t2 = single_slit_masks(m, grid)
    assert np.array_equal(t1 + t2, sample_mask(m, grid))
    assert np.all(t1[grid.x < 0] == 0) and np.all(t2[grid.x > 0] == 0)


@settings(max_examples=40, deadline=None)
@given(
    w=st.floats(1e-4, 4e-4),
    gap=st.floats(1e-5, 1e-3),
    seed=st.integers(0, 2**32 - 1),
)
def test_masks_never_amplify_and_are_even(w, gap, seed):
    g = make_grid(512, 512 * 10e-6)
    m = DoubleSlit(w, w + gap)
    t = sample_mask(m, g)
    assert np.array_equal(t[1:], t[1:][::-1])
    r = np.random.default_rng(seed)
    f = Field1D(g, r.normal(size=g.n) + 1j * r.normal(size=g.n))
    assert norm2(apply_mask(f, m)) <= norm2(f)
    # depends on geometry alone
    assert np.array_equal(sample_mask(m, g), t)


def test_tophat_width():
    g = make_grid(1024, 1024 * 10e-6)
    s = 2e-3
    p = source_profile(SourceSpec("tophat", s), g)
    lit = g.x[p.intensity > 0]
    assert abs((lit[-1] - lit[0]) - s) <= g.dx
    assert norm2(p) == pytest.approx(1.0, abs=1e-12)


def test_gaussian_second_moment():
    g = make_grid(1024, 1024 * 10e-6)
    sigma = 0.3e-3
    p = source_profile(SourceSpec("gaussian", sigma), g)
    # Independent quadrature of the analytic intensity on a much finer mesh.
    x = np.linspace(-10 * sigma, 10 * sigma, 200001)
    inten = np.exp(-(x**2) / (2 * sigma**2))
    oracle = np.sum(x**2 * inten) / np.sum(inten)
    second = np.sum(g.x**2 * p.intensity) * g.dx
    assert second == pytest.approx(oracle, rel=1e-2)
    assert norm2(p) == pytest.approx(1.0, abs=1e-12)


def test_source_resolution_and_window_guards():
    g = make_grid(256, 256 * 25e-6)
    with pytest.raises(NumericalGuardError):
        source_profile(SourceSpec("tophat", 1e-4), g)
    with pytest.raises(NumericalGuardError):
        source_profile(SourceSpec("tophat", 4e-3), g)
    with pytest.raises(NumericalGuardError):
        source_profile(SourceSpec("gaussian", 0.5e-3), g)


@pytest.mark.parametrize(
    "kwargs",
    [dict(profile="lorentzian"), dict(width=0.0), dict(corr_width=-1.0), dict(lam_s=0.0)],
)
def test_source_spec_validation(kwargs):
    with pytest.raises(ConfigurationError):
        SourceSpec(**kwargs)
