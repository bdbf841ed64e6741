"""Command-line front end: simulate scenarios, emit figure data, verify.

Exit codes: 0 success, 1 verification failure, 2 configuration problem,
3 numerical failure (degenerate durations, singular superposition, or a
non-physical integration).  Output files use the dimensionless units
t/tau_ref and kappa_ref*Z, with tau_ref the first general soliton's duration.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from .darboux import SolitonKind
from .errors import (
    ConfigError,
    DegenerateSpectralParamsError,
    LambdaSolitonError,
    NonPhysicalStateError,
    SingularMatrixError,
    UnknownPresetError,
)
from .mbsolver import Grid, residual_norms
from .observables import areas_by_slice, locate_imprints, predict_location
from .scenarios import ScenarioConfig, dump_toml, load_config, preset, preset_swapped_order
from .superposition import OrderedSolution, grid_fields, grid_state
from .verify import run_verification

_NUMERIC_ERRORS = (DegenerateSpectralParamsError, SingularMatrixError, NonPhysicalStateError)


def _apply_thread_cap() -> None:
    cap = os.environ.get("LAMBDA_SOLITON_THREADS")
    if not cap:
        return
    try:
        n = max(1, int(cap))
    except ValueError:
        raise ConfigError(
            f"LAMBDA_SOLITON_THREADS={cap!r} is not an integer",
            field="LAMBDA_SOLITON_THREADS",
        ) from None
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(n))
    try:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    except Exception:
        pass


def _write_csv(path: Path, header: str, columns: list[np.ndarray]) -> None:
    data = np.column_stack(columns)
    np.savetxt(path, data, fmt="%.12e", delimiter=",", header=header, comments="")


def _fields_csv(path: Path, cfg: ScenarioConfig, sol: OrderedSolution) -> None:
    t = cfg.grid.t[:: cfg.stride_t]
    z = cfg.grid.z[:: cfg.stride_z]
    om13, om23 = grid_fields(sol, t, z)
    tt = np.tile(t, z.size) / cfg.tau_ref
    zz = np.repeat(z, t.size) * cfg.kappa_ref
    _write_csv(
        path,
        "T,Z,abs_omega13,arg_omega13,abs_omega23,arg_omega23",
        [tt, zz,
         np.abs(om13).ravel(), np.angle(om13).ravel(),
         np.abs(om23).ravel(), np.angle(om23).ravel()],
    )


def _density_csv(path: Path, cfg: ScenarioConfig, sol: OrderedSolution) -> None:
    t = cfg.grid.t[:: cfg.stride_t]
    z = cfg.grid.z[:: cfg.stride_z]
    rho = grid_state(sol, t, z).rho
    tt = np.tile(t, z.size) / cfg.tau_ref
    zz = np.repeat(z, t.size) * cfg.kappa_ref
    cols = [tt, zz,
            rho[..., 0, 0].real.ravel(), rho[..., 1, 1].real.ravel(),
            rho[..., 2, 2].real.ravel(),
            rho[..., 0, 1].real.ravel(), rho[..., 0, 1].imag.ravel(),
            rho[..., 0, 2].real.ravel(), rho[..., 0, 2].imag.ravel(),
            rho[..., 1, 2].real.ravel(), rho[..., 1, 2].imag.ravel()]
    _write_csv(
        path,
        "T,Z,rho11,rho22,rho33,re_rho12,im_rho12,re_rho13,im_rho13,re_rho23,im_rho23",
        cols,
    )


def _areas_csv(path: Path, cfg: ScenarioConfig, sol: OrderedSolution) -> dict:
    t = cfg.grid.t
    z = cfg.grid.z[:: cfg.stride_z]
    om13, om23 = grid_fields(sol, t, z)
    records = areas_by_slice(om13, om23, t, z)
    _write_csv(
        path,
        "Z,theta13,theta23,theta_tot",
        [np.array([r.z for r in records]) * cfg.kappa_ref,
         np.array([r.theta13 for r in records]),
         np.array([r.theta23 for r in records]),
         np.array([r.theta_tot for r in records])],
    )
    tots = np.array([r.theta_tot for r in records])
    return {
        "slices": len(records),
        "theta_tot_min": float(tots.min()),
        "theta_tot_max": float(tots.max()),
        "note": "theta_tot of the combined fields; constant 2*pi for a single "
                "general soliton, additive per pulse otherwise",
    }


def measure_imprints(cfg: ScenarioConfig, t_snapshot: float, n_active: int) -> list[dict]:
    """Locate imprints at one snapshot against the closed-form predictions."""
    specs = cfg.solitons[:n_active] if n_active else cfg.solitons
    sol = OrderedSolution(specs, cfg.system)
    z = cfg.grid.z
    st = sol.state(np.full(z.shape, t_snapshot), z)
    rho22 = st.rho[..., 1, 1].real
    rho12 = st.rho[..., 0, 1]
    owners = [i for i, s in enumerate(specs) if s.kind is SolitonKind.TYPE1]
    preds = [predict_location(specs, i, cfg.system) for i in owners]
    reports = locate_imprints(
        z, rho22, rho12,
        kappas=[specs[i].kappa(cfg.system) for i in owners],
        coherence_phases=[specs[i].phase(1, 2) for i in owners],
        predictions=[p.location for p in preds],
    )
    out = []
    for rep in reports:
        pred = preds[rep.which_soliton]
        out.append({
            "time": t_snapshot,
            "active_solitons": len(specs),
            "soliton": owners[rep.which_soliton],
            "location_measured": rep.location_measured,
            "location_predicted": rep.location_predicted,
            "location_error": rep.location_measured - rep.location_predicted,
            "rho22_peak": rep.rho22_peak,
            "phase_sign_measured": rep.phase_sign,
            "phase_sign_predicted": pred.phase_sign,
            "width_kappa": rep.width_kappa,
        })
    return out


def run_scenario(cfg: ScenarioConfig, out_dir: Path, notes: dict | None = None) -> dict:
    """Evaluate a scenario and write the selected outputs; returns annotations."""
    out_dir.mkdir(parents=True, exist_ok=True)
    sol = OrderedSolution(cfg.solitons, cfg.system)
    annotations: dict = {
        "scenario": cfg.name,
        "tau_ref": cfg.tau_ref,
        "kappa_ref": cfg.kappa_ref,
        "grid": {"nt": cfg.grid.nt, "nz": cfg.grid.nz,
                 "t": [cfg.grid.t_min, cfg.grid.t_max],
                 "z": [cfg.grid.z_min, cfg.grid.z_max],
                 "stride_t": cfg.stride_t, "stride_z": cfg.stride_z},
        "snapshot_times": list(cfg.snapshot_times),
    }
    if notes:
        annotations["notes"] = notes

    written = []
    if "fields" in cfg.outputs:
        _fields_csv(out_dir / "fields.csv", cfg, sol)
        written.append("fields.csv")
    if "density" in cfg.outputs:
        _density_csv(out_dir / "density.csv", cfg, sol)
        written.append("density.csv")
    if "areas" in cfg.outputs:
        annotations["areas"] = _areas_csv(out_dir / "areas.csv", cfg, sol)
        written.append("areas.csv")
    if "imprints" in cfg.outputs and cfg.snapshot_times:
        stages = cfg.snapshot_stages or tuple(len(cfg.solitons) for _ in cfg.snapshot_times)
        measurements = []
        for ts, stage in zip(cfg.snapshot_times, stages):
            measurements.extend(measure_imprints(cfg, ts, stage))
        annotations["imprints"] = measurements
    if "residuals" in cfg.outputs:
        annotations["residuals"] = residual_norms(
            lambda t, z: grid_state(sol, t, z),
            Grid(cfg.grid.t_min, cfg.grid.t_max, cfg.verify.residual_nt,
                 cfg.grid.z_min, cfg.grid.z_max, cfg.verify.residual_nz),
            cfg.system,
        )

    annotations["files"] = written
    (out_dir / "annotations.json").write_text(json.dumps(annotations, indent=2))
    return annotations


@click.group()
def main():
    """Soliton storage and manipulation in a three-level medium."""
    try:
        _apply_thread_cap()
    except ConfigError as exc:
        _fail_config(exc)


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Scenario TOML file.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".",
              help="Output directory for CSV/JSON data.")
@click.option("--dump-config", "dump_path", type=click.Path(dir_okay=False),
              default=None, help="Write the normalized config here and exit.")
def simulate(config_path, out_dir, dump_path):
    """Evaluate the analytic solution of a configured scenario."""
    try:
        cfg = load_config(config_path)
        if dump_path:
            Path(dump_path).write_text(dump_toml(cfg))
            click.echo(f"normalized config written to {dump_path}")
            return
        annotations = run_scenario(cfg, Path(out_dir))
    except ConfigError as exc:
        _fail_config(exc)
    except _NUMERIC_ERRORS as exc:
        _fail_numeric(exc)
    click.echo(f"scenario {annotations['scenario']!r}: wrote {annotations['files']} to {out_dir}")


@main.command()
@click.argument("preset_name", metavar="PRESET")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".")
@click.option("--dump-config", "dump_path", type=click.Path(dir_okay=False),
              default=None, help="Write the preset's config here and exit.")
def figure(preset_name, out_dir, dump_path):
    """Emit the data behind a named reference-figure preset.

    Presets: type3, type1, pulse1/den1, pulse2/den2, pulse3/den3.
    """
    try:
        cfg, notes = preset(preset_name)
        if dump_path:
            Path(dump_path).write_text(dump_toml(cfg))
            click.echo(f"preset config written to {dump_path}")
            return
        out = Path(out_dir)
        annotations = run_scenario(cfg, out, notes)
        if preset_name in ("pulse2", "den2"):
            _figure_order_swap(cfg, out, annotations)
    except UnknownPresetError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except ConfigError as exc:
        _fail_config(exc)
    except _NUMERIC_ERRORS as exc:
        _fail_numeric(exc)
    click.echo(f"preset {preset_name!r}: wrote {annotations['files']} to {out_dir}")


def _figure_order_swap(cfg: ScenarioConfig, out: Path, annotations: dict) -> None:
    """Swapped-arrival-order companion run; the stored pattern must agree."""
    swapped_cfg, _ = preset_swapped_order("pulse2")
    sol = OrderedSolution(swapped_cfg.solitons, swapped_cfg.system)
    _density_csv(out / "density_swapped.csv", swapped_cfg, sol)

    t_late = cfg.snapshot_times[-1]
    z = cfg.grid.z
    rho_a = OrderedSolution(cfg.solitons, cfg.system).state(
        np.full(z.shape, t_late), z).rho
    rho_b = sol.state(np.full(z.shape, t_late), z).rho
    diff = float(np.abs(rho_a - rho_b).max())
    annotations["order_swap_density_diff"] = diff
    annotations["files"].append("density_swapped.csv")
    (out / "annotations.json").write_text(json.dumps(annotations, indent=2))


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--level", type=click.Choice(["fast", "full"]), default="fast")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".")
@click.option("--dump-config", "dump_path", type=click.Path(dir_okay=False), default=None)
def verify(config_path, level, out_dir, dump_path):
    """Run the verification checks for a scenario; exit 0 only if all pass."""
    try:
        cfg = load_config(config_path)
        if dump_path:
            Path(dump_path).write_text(dump_toml(cfg))
            click.echo(f"normalized config written to {dump_path}")
            return
        report = run_verification(cfg, level)
    except ConfigError as exc:
        _fail_config(exc)
    except _NUMERIC_ERRORS as exc:
        _fail_numeric(exc)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json())
    for c in report.checks:
        click.echo(
            f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: "
            f"{c.value:.3e} (tolerance {c.tolerance:.3e})"
        )
    if not report.passed:
        click.echo(f"verification failed at check {report.first_failure!r}", err=True)
        sys.exit(1)
    click.echo(f"all {len(report.checks)} checks passed; report.json in {out_dir}")


def _fail_config(exc: ConfigError) -> None:
    loc = f" (field: {exc.field})" if exc.field else ""
    click.echo(f"config error: {exc}{loc}", err=True)
    sys.exit(2)


def _fail_numeric(exc: LambdaSolitonError) -> None:
    click.echo(f"numerical failure: {type(exc).__name__}: {exc}", err=True)
    sys.exit(3)


if __name__ == "__main__":
    main()
