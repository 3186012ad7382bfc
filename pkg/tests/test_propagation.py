import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transverse_eraser import (
    Arm,
    BiphotonField,
    ConfigurationError,
    DoubleSlit,
    Field1D,
    NumericalGuardError,
    apply_arm,
    apply_lens,
    apply_mask,
    make_grid,
    norm2,
    normalize,
    product_state,
    propagate_angular_spectrum,
    propagate_fresnel_direct,
)
from transverse_eraser.propagation import (
    critical_distance,
    max_angular_spectrum_distance,
    min_direct_distance,
)

LAM = 702e-9


def gaussian(g, w0, x0=0.0):
    return normalize(Field1D(g, np.exp(-((g.x - x0) ** 2) / w0**2)))


def test_zero_distance_is_identity(grid, rng):
    f = Field1D(grid, rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))
    out = propagate_angular_spectrum(f, 0.0, LAM)
    assert np.max(np.abs(out.amp - f.amp)) < 1e-12


def test_gaussian_beam_width(grid):
    w0, z = 0.2e-3, 0.25
    out = propagate_angular_spectrum(gaussian(grid, w0), z, LAM)
    inten = out.intensity
    # 1/e^2 intensity radius is twice the intensity standard deviation
    w = 2 * np.sqrt(np.sum(grid.x**2 * inten) / np.sum(inten))
    expected = w0 * np.sqrt(1 + (LAM * z / (np.pi * w0**2)) ** 2)
    assert w == pytest.approx(expected, rel=5e-3)


def test_asm_unitary_on_random_fields(grid, rng):
    zmax = max_angular_spectrum_distance(grid, LAM)
    for _ in range(100):
        f = Field1D(grid, rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))
        z = rng.uniform(0, zmax)
        assert norm2(propagate_angular_spectrum(f, z, LAM)) == pytest.approx(norm2(f), rel=1e-10)


def test_direct_and_lens_unitary(rng):
    g = make_grid(256, 256 * 25e-6)
    f = normalize(Field1D(g, rng.normal(size=g.n) + 1j * rng.normal(size=g.n)))
    # At the critical distance the quadrature kernel is an exact unitary DFT.
    z = critical_distance(g, LAM)
    assert norm2(propagate_fresnel_direct(f, z, LAM)) == pytest.approx(1.0, abs=1e-10)
    assert norm2(apply_lens(f, 0.3, LAM)) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(a=st.floats(0.0, 0.45), b=st.floats(0.0, 0.45), seed=st.integers(0, 2**32 - 1))
def test_composition(a, b, seed):
    g = make_grid(256, 256 * 50e-6)
    r = np.random.default_rng(seed)
    f = normalize(Field1D(g, r.normal(size=g.n) + 1j * r.normal(size=g.n)))
    zmax = max_angular_spectrum_distance(g, LAM)
    z1, z2 = a * zmax, b * zmax
    two = propagate_angular_spectrum(propagate_angular_spectrum(f, z1, LAM), z2, LAM)
    one = propagate_angular_spectrum(f, z1 + z2, LAM)
    assert np.max(np.abs(two.amp - one.amp)) < 1e-8 * np.max(np.abs(f.amp)) * np.sqrt(g.n)


def test_aliasing_guard_names_safe_distance(grid):
    f = gaussian(grid, 1e-3)
    zmax = max_angular_spectrum_distance(grid, LAM)
    with pytest.raises(NumericalGuardError, match="0.91"):
        propagate_angular_spectrum(f, 1.0, LAM)
    assert zmax == pytest.approx(0.9126, abs=1e-4)


def test_negative_distance_rejected(grid):
    with pytest.raises(ConfigurationError):
        propagate_angular_spectrum(gaussian(grid, 1e-3), -0.1, LAM)


@pytest.mark.parametrize("which", ["critical", "low", "high"])
def test_direct_matches_asm_on_gaussian(which):
    g = make_grid(512, 512 * 25e-6)
    z = {
        "critical": critical_distance(g, LAM),
        "low": min_direct_distance(g, LAM),
        "high": max_angular_spectrum_distance(g, LAM),
    }[which]
    f = gaussian(g, 0.5e-3, x0=0.3e-3)
    a = propagate_angular_spectrum(f, z, LAM).amp
    d = propagate_fresnel_direct(f, z, LAM).amp
    assert np.max(np.abs(a - d)) < 1e-6 * np.max(np.abs(a))


def test_direct_matches_asm_on_double_slit(grid):
    z = critical_distance(grid, LAM)
    f = apply_mask(Field1D(grid, np.ones(grid.n)), DoubleSlit(1e-4, 5e-4))
    a = propagate_angular_spectrum(f, z, LAM).amp
    d = propagate_fresnel_direct(f, z, LAM).amp
    assert np.max(np.abs(a - d)) < 1e-6 * np.max(np.abs(a))


def test_direct_zero_distance_rejected(grid):
    with pytest.raises(ConfigurationError):
        propagate_fresnel_direct(gaussian(grid, 1e-3), 0.0, LAM)


def test_direct_guard(grid):
    with pytest.raises(NumericalGuardError):
        propagate_fresnel_direct(gaussian(grid, 1e-3), 0.1, LAM)


def test_point_source_spreads_uniformly(grid):
    amp = np.zeros(grid.n, complex)
    amp[grid.n // 2 + 7] = 1.0
    out = propagate_fresnel_direct(Field1D(grid, amp), 0.912, LAM)
    mag = np.abs(out.amp)
    assert np.ptp(mag) <= 1e-9 * mag.mean()


def test_lens_is_phase_only(grid, rng):
    f = Field1D(grid, rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))
    out = apply_lens(f, 0.25, LAM)
    assert np.allclose(np.abs(out.amp), np.abs(f.amp), rtol=1e-14, atol=0)


def test_zero_focal_rejected(grid):
    with pytest.raises(ConfigurationError):
        apply_lens(gaussian(grid, 1e-3), 0.0, LAM)


def test_two_f_imaging_mirrors_source(grid):
    focal = 0.2
    amp = np.exp(-((grid.x - 0.6e-3) ** 2) / (0.3e-3) ** 2) + 0.5 * np.exp(
        -((grid.x + 1.2e-3) ** 2) / (0.4e-3) ** 2
    )
    f = normalize(Field1D(grid, amp))
    out = propagate_angular_spectrum(f, 2 * focal, LAM)
    out = apply_lens(out, focal, LAM)
    out = propagate_angular_spectrum(out, 2 * focal, LAM)
    inten = f.intensity
    mirrored = np.empty_like(inten)
    mirrored[0] = inten[0]
    mirrored[1:] = inten[1:][::-1]
    rms = np.sqrt(np.mean((out.intensity - mirrored) ** 2))
    assert rms < 0.01 * np.sqrt(np.mean(mirrored**2))


def random_biphoton(rng, n_s=64, n_i=96):
    gs, gi = make_grid(n_s, n_s * 25e-6), make_grid(n_i, n_i * 20e-6)
    amp = rng.normal(size=(n_s, n_i)) + 1j * rng.normal(size=(n_s, n_i))
    return normalize(BiphotonField(gs, gi, amp))


@pytest.mark.parametrize("arm", ["signal", "idler", Arm.SIGNAL, Arm.IDLER])
def test_apply_arm_zero_distance_identity(rng, arm):
    b = random_biphoton(rng)
    out = apply_arm(b, arm, propagate_angular_spectrum, 0.0, LAM)
    assert np.max(np.abs(out.amp - b.amp)) < 1e-12


def test_apply_arm_rejects_unknown_arm(rng):
    with pytest.raises(ValueError):
        apply_arm(random_biphoton(rng), "pump", apply_lens, 0.1, LAM)


def test_apply_arm_separable(rng):
    gs, gi = make_grid(128, 128 * 25e-6), make_grid(64, 64 * 25e-6)
    f = normalize(Field1D(gs, rng.normal(size=gs.n) + 1j * rng.normal(size=gs.n)))
    h = normalize(Field1D(gi, rng.normal(size=gi.n) + 1j * rng.normal(size=gi.n)))
    b = product_state(f, h)
    out = apply_arm(b, Arm.SIGNAL, propagate_angular_spectrum, 0.05, LAM)
    pf = propagate_angular_spectrum(f, 0.05, LAM)
    assert np.max(np.abs(out.amp - np.outer(pf.amp, h.amp))) < 1e-10
    out = apply_arm(b, Arm.IDLER, apply_lens, 0.3, LAM)
    assert np.max(np.abs(out.amp - np.outer(f.amp, apply_lens(h, 0.3, LAM).amp))) < 1e-10


def test_apply_arm_generic_fallback_matches_fast_path(rng):
    b = random_biphoton(rng)

    def wrapped(f, z, lam):
        return propagate_angular_spectrum(f, z, lam)

    fast = apply_arm(b, "idler", propagate_angular_spectrum, 0.01, LAM)
    slow = apply_arm(b, "idler", wrapped, 0.01, LAM)
    assert np.max(np.abs(fast.amp - slow.amp)) < 1e-13


@pytest.mark.parametrize("op,arg", [(propagate_angular_spectrum, 0.02), (apply_lens, 0.4)])
def test_apply_arm_preserves_norm(rng, op, arg):
    b = random_biphoton(rng)
    for arm in Arm:
        assert norm2(apply_arm(b, arm, op, arg, LAM)) == pytest.approx(1.0, abs=1e-10)


def test_apply_arm_commutes(rng):
    b = random_biphoton(rng)
    si = apply_arm(apply_arm(b, "signal", propagate_angular_spectrum, 0.01, LAM), "idler", apply_lens, 0.3, LAM)
    is_ = apply_arm(apply_arm(b, "idler", apply_lens, 0.3, LAM), "signal", propagate_angular_spectrum, 0.01, LAM)
    # Disjoint axes; only floating-point rounding of the products can differ.
    assert np.max(np.abs(si.amp - is_.amp)) <= 1e-12 * np.max(np.abs(si.amp))
    pp = apply_arm(apply_arm(b, "signal", apply_lens, 0.2, LAM), "idler", apply_lens, 0.3, LAM)
    qq = apply_arm(apply_arm(b, "idler", apply_lens, 0.3, LAM), "signal", apply_lens, 0.2, LAM)
    assert np.max(np.abs(pp.amp - qq.amp)) <= 1e-14 * np.max(np.abs(pp.amp))
