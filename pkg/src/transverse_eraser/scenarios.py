"""Preset experiment pipelines and their file outputs."""

from __future__ import annotations

import contextlib
import json
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import biphoton as bp
from .config import ScenarioConfig, with_value
from .elements import DoubleSlit, SourceSpec, apply_mask
from .errors import ConfigurationError, EraserError
from .fringes import FringeStats, SweepTable, extract_fringes, source_overlap
from .grid import BiphotonField, Grid1D
from .marker import (
    amplitude_visibility,
    blind_visibility,
    fringe_pattern,
    make_marked_state,
    make_plain_state,
    polarization_blind_pattern,
    project_polarizer,
)
from .propagation import apply_arm, apply_lens, propagate_angular_spectrum

# Profile whose fringes a sweep reports unless told otherwise.
DESIGNATED_PROFILE = {
    "fig3a-far-slits": "singles",
    "fig3b-near-slits": "singles",
    "fig3c-erase": "coincidence_bucket",
    "fig1-coincidence": "coincidence_bucket",
    "fig4-delayed-choice": "d_small",
    "qubit-eraser": "polarizer_theta",
}


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    profiles: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "scenario": self.config.scenario,
            "config": self.config.resolved(),
            "fringes": {k: v.as_dict() for k, v in self.stats.items()},
            "diagnostics": self.diagnostics,
        }


@contextlib.contextmanager
def stage(name: str):
    """Prefix any package error raised inside with the pipeline stage name."""
    try:
        yield
    except EraserError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc


def _grids(cfg: ScenarioConfig) -> tuple[Grid1D, Grid1D]:
    return Grid1D(cfg.n_s, cfg.dx_s), Grid1D(cfg.n_i, cfg.dx_i)


def _source(cfg: ScenarioConfig) -> SourceSpec:
    return SourceSpec(
        cfg.source_profile, cfg.source_width, cfg.resolved_sigma_c, cfg.lambda_s, cfg.lambda_i
    )


def _slit(cfg: ScenarioConfig) -> DoubleSlit:
    return DoubleSlit(cfg.slit_width, cfg.slit_separation)


def _fit(cfg: ScenarioConfig, profile: bp.FringeProfile) -> FringeStats:
    period = cfg.fringe_period
    return extract_fringes(profile, period, cfg.fit_periods * period)


def signal_train(b: BiphotonField, cfg: ScenarioConfig) -> BiphotonField:
    """Crystal -> z1 -> double slit -> z2 on the signal arm."""
    with stage("signal: crystal to slits"):
        b = apply_arm(b, "signal", propagate_angular_spectrum, cfg.z1, cfg.lambda_s)
    with stage("signal: double slit"):
        b = apply_arm(b, "signal", apply_mask, _slit(cfg))
    with stage("signal: slits to detector"):
        b = apply_arm(b, "signal", propagate_angular_spectrum, cfg.z2, cfg.lambda_s)
    return b


def idler_train(b: BiphotonField, cfg: ScenarioConfig) -> BiphotonField:
    """Idler to its detection plane: bare free space, or a lens with the detector at its focus."""
    lam = cfg.lambda_i
    if cfg.idler_lens == "on":
        f = cfg.resolved_idler_focal
        with stage("idler: lens train"):
            b = apply_arm(b, "idler", propagate_angular_spectrum, f, lam)
            b = apply_arm(b, "idler", apply_lens, f, lam)
            b = apply_arm(b, "idler", propagate_angular_spectrum, f, lam)
        return b
    with stage("idler: free space"):
        return apply_arm(b, "idler", propagate_angular_spectrum, cfg.idler_distance, lam)


def prepare_state(cfg: ScenarioConfig) -> BiphotonField:
    grid_s, grid_i = _grids(cfg)
    with stage("source"):
        return bp.make_spdc_state(_source(cfg), grid_s, grid_i)


def split_idler(b: BiphotonField) -> tuple[BiphotonField, BiphotonField]:
    """50/50 beam splitter on the idler; the two output ports never recombine."""
    t = 1 / np.sqrt(2)
    return b.with_amp(b.amp * t), b.with_amp(b.amp * (1j * t))


def _run_slits(cfg, result, with_overlap):
    b = signal_train(prepare_state(cfg), cfg)
    result.profiles["singles"] = bp.signal_singles(b)
    if with_overlap:
        grid_s, _ = _grids(cfg)
        with stage("source overlap"):
            result.diagnostics["source_overlap"] = source_overlap(
                _source(cfg), grid_s, _slit(cfg), cfg.z1
            )
    return b


def _run_erase(cfg, result):
    b = idler_train(_run_slits(cfg, result, with_overlap=True), cfg)
    full = bp.BucketDetector(b.grid_i.width)
    with stage("idler detection"):
        result.profiles["coincidence_pinhole"] = bp.coincidence(b, bp.PointDetector(cfg.pinhole_x0))
        result.profiles["coincidence_bucket"] = bp.coincidence(b, bp.BucketDetector(cfg.bucket_width))
        for k, a in enumerate(cfg.bucket_ladder):
            result.profiles[f"ladder_{k}"] = bp.coincidence(b, bp.BucketDetector(a))
        result.profiles[f"ladder_{len(cfg.bucket_ladder)}"] = bp.coincidence(b, full)
        for k, x0 in enumerate(cfg.pinhole_ladder):
            result.profiles[f"pinhole_{k}"] = bp.coincidence(b, bp.PointDetector(x0))
        result.profiles["fourier_projection"] = bp.coincidence(b, bp.FourierDetector(cfg.q0))
    result.diagnostics["bucket_ladder_widths"] = [float(a) for a in cfg.bucket_ladder] + [
        float(b.grid_i.width)
    ]
    result.diagnostics["pinhole_ladder_positions"] = [float(x) for x in cfg.pinhole_ladder]
    result.diagnostics["trace_identity_max_error"] = float(
        np.max(np.abs(result.profiles[f"ladder_{len(cfg.bucket_ladder)}"].value
                      - result.profiles["singles"].value))
    )
    return b


def _run_delayed_choice(cfg, result):
    b = idler_train(_run_slits(cfg, result, with_overlap=True), cfg)
    small_port, large_port = split_idler(b)
    pinhole = bp.PointDetector(cfg.pinhole_x0)
    full = bp.BucketDetector(b.grid_i.width)
    with stage("idler detection"):
        d_small = bp.coincidence(small_port, pinhole)
        d_large = bp.coincidence(large_port, full)
        unsplit_pinhole = bp.coincidence(b, pinhole)
        unsplit_full = bp.coincidence(b, full)
        # Both ports read out with the same full-window aperture must recover the unsplit rate.
        matched = bp.coincidence(small_port, full).value + d_large.value
    result.profiles["d_small"] = d_small
    result.profiles["d_large"] = d_large
    result.profiles["unsplit_pinhole"] = unsplit_pinhole
    result.diagnostics["branch_probability_small"] = d_small.total()
    result.diagnostics["branch_probability_large"] = d_large.total()
    result.diagnostics["bookkeeping_small_max_error"] = float(
        np.max(np.abs(d_small.value - 0.5 * unsplit_pinhole.value))
    )
    result.diagnostics["bookkeeping_large_max_error"] = float(
        np.max(np.abs(d_large.value - 0.5 * unsplit_full.value))
    )
    result.diagnostics["bookkeeping_matched_max_error"] = float(
        np.max(np.abs(matched - unsplit_full.value))
    )


def _run_qubit(cfg, result):
    xs = Grid1D(cfg.n_s, cfg.dx_s)
    args = (cfg.slit_separation, cfg.lambda_s, cfg.z2, xs)
    plain, marked = make_plain_state(), make_marked_state()
    result.profiles["plain"] = polarization_blind_pattern(plain, *args)
    result.profiles["marked_blind"] = polarization_blind_pattern(marked, *args)
    diag = {
        "plain_visibility": blind_visibility(plain),
        "marked_blind_visibility": blind_visibility(marked),
    }
    angles = {"theta0": 0.0, "theta_pi4": np.pi / 4, "theta_pi2": np.pi / 2}
    angles["theta"] = cfg.theta
    for label, theta in angles.items():
        amps, p_pass = project_polarizer(marked, theta)
        result.profiles[f"polarizer_{label}"] = fringe_pattern(amps, *args)
        diag[f"pass_probability_{label}"] = p_pass
        diag[f"projected_visibility_{label}"] = amplitude_visibility(amps)
    result.diagnostics.update(diag)


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    """Run the pipeline for ``cfg.scenario`` and fit fringes to every profile."""
    result = ScenarioResult(cfg)
    sid = cfg.scenario
    if sid == "fig3a-far-slits":
        _run_slits(cfg, result, with_overlap=True)
    elif sid == "fig3b-near-slits":
        _run_slits(cfg, result, with_overlap=True)
    elif sid in ("fig3c-erase", "fig1-coincidence"):
        _run_erase(cfg, result)
    elif sid == "fig4-delayed-choice":
        _run_delayed_choice(cfg, result)
    elif sid == "qubit-eraser":
        _run_qubit(cfg, result)
    else:  # pragma: no cover - ScenarioConfig validates the id
        raise ConfigurationError(f"unknown scenario {sid!r}")
    with stage("fringe analysis"):
        for name, profile in result.profiles.items():
            result.stats[name] = _fit(cfg, profile)
    return result


def _csv_lines(profile: bp.FringeProfile) -> str:
    rows = ["x_m,value"]
    rows.extend(f"{x:.12g},{v:.12g}" for x, v in zip(profile.grid.x, profile.value))
    return "\n".join(rows) + "\n"


def write_result(result: ScenarioResult, out_dir) -> list[Path]:
    """Write one CSV per profile and ``summary.json`` under ``out_dir/<scenario>/``."""
    target = Path(out_dir) / result.config.scenario
    target.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        for name, profile in result.profiles.items():
            path = target / f"{name}.csv"
            path.write_text(_csv_lines(profile))
            written.append(path)
        path = target / "summary.json"
        path.write_text(json.dumps(result.summary(), indent=2, sort_keys=True) + "\n")
        written.append(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def run_and_write(cfg: ScenarioConfig, out_dir) -> list[Path]:
    """Run a scenario and emit its files; nothing is left behind on failure."""
    target = Path(out_dir) / cfg.scenario
    existed = target.exists()
    try:
        return write_result(run_scenario(cfg), out_dir)
    except BaseException:
        if not existed and target.exists():
            shutil.rmtree(target, ignore_errors=True)
        raise


def sweep(
    cfg: ScenarioConfig, parameter: str, values, profile: Optional[str] = None
) -> SweepTable:
    """Re-run ``cfg.scenario`` for each value of ``parameter``.

    Rows keep input order.  A failing value aborts the sweep with the value
    named in the error.
    """
    values = list(values)
    if len(values) < 2:
        raise ConfigurationError("a sweep needs at least two values")
    name = profile or DESIGNATED_PROFILE[cfg.scenario]
    rows = []
    for v in values:
        try:
            result = run_scenario(with_value(cfg, parameter, v))
        except EraserError as exc:
            raise type(exc)(f"sweep {parameter} = {v!r}: {exc}") from exc
        if name not in result.stats:
            raise ConfigurationError(f"scenario {cfg.scenario} emits no profile {name!r}")
        rows.append((v, result.stats[name]))
    return SweepTable(parameter, rows)


def sweep_csv(table: SweepTable) -> str:
    lines = [f"{table.parameter},visibility,phase,period,fit_residual,raw_visibility"]
    for v, s in table.rows:
        lines.append(
            f"{v:.12g},{s.visibility:.12g},{s.phase:.12g},{s.period:.12g},"
            f"{s.fit_residual:.12g},{s.raw_visibility:.12g}"
        )
    return "\n".join(lines) + "\n"
