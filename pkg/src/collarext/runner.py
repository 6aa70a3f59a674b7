"""Scenario execution: build the model, run the verification, emit CSVs.

All floating point output uses 17 significant digits and grid points are
written in row-major order, so a rerun with the same config and seed
produces byte-identical files.  Wall-clock time lives only in the run
report, never in a CSV.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass

import numpy as np

from . import models
from .comparison import svarc_milnor_check
from .completeness import radial_length, stage_partials
from .errors import ConfigError, SearchFailureError
from .extensions import convexify_extension, negative_sect_extension
from .groups import ball_count, entropy_estimate, free_ball_recursion, growth_order_fit
from .lohkamp import lohkamp_lower, lohkamp_lower_scalar, ratio_values
from .reports import grid_curvature_report
from .scenario import ScenarioConfig
from .util import worker_count


@dataclass(frozen=True)
class VerdictLine:
    """One verification outcome, tagged with the op that produced it."""

    source: str
    message: str
    ok: bool

    def render(self) -> str:
        return f"{self.source}: {self.message}"


@dataclass(frozen=True)
class RunReport:
    config: ScenarioConfig
    verdicts: tuple
    csv_paths: tuple
    duration: float

    @property
    def failed(self) -> bool:
        return any(not v.ok for v in self.verdicts)


def _fmt_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_csv(path: str, header, rows) -> str:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt_value(v) for v in row) + "\n")
    return path


def _output_dir(config: ScenarioConfig) -> str:
    """Output directory, relative paths resolved against the config file."""
    if config.source:
        base = os.path.dirname(os.path.abspath(config.source))
    else:
        base = os.getcwd()
    out = config.output_dir
    if not os.path.isabs(out):
        out = os.path.join(base, out)
    os.makedirs(out, exist_ok=True)
    return out


def _build(builder, name, params):
    try:
        return builder(name, **params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"model {name!r}: {exc}", field="name") from None


def _run_curvature(config: ScenarioConfig, out_dir: str):
    metric = _build(models.build_metric, config.model, config.model_params)
    opt = config.options
    rep = grid_curvature_report(
        metric,
        list(opt["bound_specs"]),
        resolution=opt["resolution"],
        plane_samples=opt["plane_samples"],
        seed=config.seed,
        fd_step=opt["fd_step"],
        margin=opt["margin"],
        workers=worker_count(),
    )
    s = rep.samples
    header = [f"x{i}" for i in range(metric.dim)] + [
        "sect_min",
        "sect_max",
        "ric_min",
        "ric_max",
        "scalar",
    ]
    table = np.column_stack(
        [s.points, s.sect_lo, s.sect_hi, s.ric_lo, s.ric_hi, s.scal]
    )
    path = _write_csv(
        os.path.join(out_dir, "curvature_samples.csv"), header, table
    )
    verdicts = [
        VerdictLine("reports.grid_curvature_report", v.describe(), v.holds)
        for v in rep.bound_verdicts
    ]
    return verdicts, [path]


def _run_convexify(config: ScenarioConfig, out_dir: str):
    profile = _build(models.build_profile, config.model, config.model_params)
    collar = profile.as_collar()
    opt = config.options
    trace_path = os.path.join(out_dir, "convexify_trace.csv")
    try:
        ext = convexify_extension(
            collar,
            k_start=opt["k_start"],
            s_resolution=opt["s_resolution"],
            x_resolution=opt["x_resolution"],
        )
    except SearchFailureError as exc:
        _write_csv(trace_path, ["k", "worst_shape_eigenvalue"], exc.trace)
        line = VerdictLine(
            "extensions.convexify_extension", f"search failed: {exc}", False
        )
        return [line], [trace_path]
    _write_csv(trace_path, ["k", "worst_shape_eigenvalue"], ext.trace)
    line = VerdictLine(
        "extensions.convexify_extension",
        f"strictly convex level sets out to s = {3.0 * ext.S:g} at "
        f"k = {ext.k:g}; {ext.verdict.describe()}",
        True,
    )
    return [line], [trace_path]


def _run_negative_sect(config: ScenarioConfig, out_dir: str):
    collar = _build(models.build_collar, config.model, config.model_params)
    opt = config.options
    try:
        ext = negative_sect_extension(
            collar,
            s_star=opt["s_star"],
            check_base=opt["check_base"],
            seed=config.seed,
        )
    except ValueError as exc:
        line = VerdictLine(
            "extensions.negative_sect_extension",
            f"precondition failed: {exc}",
            False,
        )
        return [line], []
    rep = ext.verify(
        n_points=opt["n_points"], n_planes=opt["n_planes"], seed=config.seed
    )
    state = "holds" if rep.all_negative else "fails"
    lines = [
        VerdictLine(
            "extensions.negative_sect_extension",
            f"Sect_{{g'}} < 0: {state} (worst {rep.worst_sect:.6g} over "
            f"{rep.n_samples} samples)",
            rep.all_negative,
        ),
        VerdictLine(
            "completeness.radial_length",
            f"radial length: {rep.divergence.verdict} "
            f"(evidence {rep.divergence.evidence:.6g})",
            rep.divergence.verdict == "diverges",
        ),
    ]
    cutoffs, partials, _ = stage_partials(ext.phi_of_s, ext.s_star)
    rows = [
        (k + 1, cutoffs[k], partials[k]) for k in range(len(cutoffs))
    ]
    stage_path = _write_csv(
        os.path.join(out_dir, "radial_length_stages.csv"),
        ["stage", "cutoff", "partial_length"],
        rows,
    )
    s_grid = np.linspace(1e-6 * ext.s_star, 0.93 * ext.s_star, 129)
    phi_vals = np.asarray(ext.phi_of_s(s_grid), dtype=float)
    phi_path = _write_csv(
        os.path.join(out_dir, "conformal_factor.csv"),
        ["s", "phi"],
        np.column_stack([s_grid, phi_vals]),
    )
    return lines, [stage_path, phi_path]


def _run_lohkamp(config: ScenarioConfig, out_dir: str):
    metric = _build(models.build_metric, config.model, config.model_params)
    opt = config.options
    mode = opt["mode"]
    search = lohkamp_lower if mode == "ricci" else lohkamp_lower_scalar
    quantity = "Ricci eigen-ratios" if mode == "ricci" else "scalar curvature"
    source = (
        "lohkamp.lohkamp_lower" if mode == "ricci" else "lohkamp.lohkamp_lower_scalar"
    )
    try:
        res = search(
            metric, opt["target"], annulus=(opt["annulus_lo"], opt["annulus_hi"])
        )
    except SearchFailureError as exc:
        line = VerdictLine(source, f"search failed: {exc}", False)
        return [line], []
    ok = res.worst_ratio < opt["target"]
    state = "holds" if ok else "fails"
    line = VerdictLine(
        source,
        f"{quantity} < {opt['target']:g} on the annulus: {state} "
        f"(worst {res.worst_ratio:.6g}, {len(res.bumps)} bumps, "
        f"d = {res.d:g}, s_amp = {res.s_amp:g})",
        ok,
    )
    P = res.annulus_points
    vals = ratio_values(metric, res.bumps, P, mode)
    radii = np.linalg.norm(P, axis=1)
    header = [f"x{i}" for i in range(metric.dim)] + ["radius", "ratio"]
    sample_path = _write_csv(
        os.path.join(out_dir, "lohkamp_samples.csv"),
        header,
        np.column_stack([P, radii, vals]),
    )
    trace_rows = [
        (i + 1, r.d, r.s_amp, r.worst_before, r.worst_after, r.violations_after)
        for i, r in enumerate(res.trace)
    ]
    trace_path = _write_csv(
        os.path.join(out_dir, "lohkamp_trace.csv"),
        ["round", "d", "s_amp", "worst_before", "worst_after", "violations_after"],
        trace_rows,
    )
    return [line], [sample_path, trace_path]


def _phi_family(opt):
    s_star = opt["s_star"]
    a = opt["amplitude"]
    p = opt["exponent"]
    kind = opt["phi"]
    if kind == "log_barrier":

        def phi(t):
            u = np.clip(1.0 - np.asarray(t, dtype=float) / s_star, 1e-300, None)
            return -a * np.log(u)

    elif kind == "linear":

        def phi(t):
            return a * np.asarray(t, dtype=float) / s_star

    else:  # inverse_power

        def phi(t):
            u = np.clip(1.0 - np.asarray(t, dtype=float) / s_star, 1e-12, None)
            return a * u ** (-p)

    return phi


def _run_completeness(config: ScenarioConfig, out_dir: str):
    opt = config.options
    phi = _phi_family(opt)
    verdict = radial_length(phi, opt["s_star"])
    cutoffs, partials, _ = stage_partials(phi, opt["s_star"])
    rows = [(k + 1, cutoffs[k], partials[k]) for k in range(len(cutoffs))]
    path = _write_csv(
        os.path.join(out_dir, "radial_length_stages.csv"),
        ["stage", "cutoff", "partial_length"],
        rows,
    )
    line = VerdictLine("completeness.radial_length", verdict.describe(), True)
    return [line], [path]


def _run_obstruction(config: ScenarioConfig, out_dir: str):
    group = _build(models.build_group, config.model, config.model_params)
    opt = config.options
    if group.kind == "free":
        # The closed-form recursion equals the enumeration (tested) and
        # scales to radii whose balls cannot be held in memory.
        data = free_ball_recursion(group.rank, opt["r_max"])
        source = "groups.free_ball_recursion"
    else:
        data = ball_count(group, opt["r_max"])
        source = "groups.ball_count"
    note = " (partial: element budget reached)" if data.partial else ""
    verdicts = [
        VerdictLine(
            source,
            f"{group.describe()}: |B_{data.r_max}| = {data.counts[-1]}{note}",
            not data.partial,
        )
    ]
    if opt["fit"]:
        fit = growth_order_fit(data)
        verdicts.append(
            VerdictLine("groups.growth_order_fit", fit.describe(), True)
        )
    if opt["entropy"]:
        est = entropy_estimate(data)
        verdicts.append(
            VerdictLine(
                "groups.entropy_estimate",
                f"log|B_R|/R = {est.value:.6g} at R = {data.r_max}",
                True,
            )
        )
    if opt["svarc_alpha"] is not None:
        dim = opt["svarc_dim"]
        beta = opt["svarc_beta"]
        # Euclidean-growth comparison volumes (beta R)^dim; the radius-0
        # entry is a point mass so it does not fail vacuously.
        volumes = [1.0] + [
            (beta * r) ** dim for r in range(1, data.r_max + 1)
        ]
        rep = svarc_milnor_check(data, volumes, opt["svarc_alpha"], beta)
        verdicts.append(
            VerdictLine("comparison.svarc_milnor_check", rep.describe(), True)
        )
    rows = []
    for r, count in enumerate(data.counts):
        quot = math.log(count) / r if r > 0 else float("nan")
        rows.append((r, count, quot))
    path = _write_csv(
        os.path.join(out_dir, "growth_counts.csv"),
        ["R", "count", "log_count_over_R"],
        rows,
    )
    return verdicts, [path]


_RUNNERS = {
    "curvature": _run_curvature,
    "extend_convexify": _run_convexify,
    "extend_negative_sect": _run_negative_sect,
    "extend_lohkamp": _run_lohkamp,
    "completeness": _run_completeness,
    "obstruction": _run_obstruction,
}


def run_scenario(config: ScenarioConfig) -> RunReport:
    """Execute a validated scenario; deterministic given (config, seed)."""
    t0 = time.perf_counter()
    out_dir = _output_dir(config)
    verdicts, paths = _RUNNERS[config.kind](config, out_dir)
    return RunReport(
        config=config,
        verdicts=tuple(verdicts),
        csv_paths=tuple(paths),
        duration=time.perf_counter() - t0,
    )


def check_scenario(config: ScenarioConfig) -> None:
    """Validate beyond the schema: the referenced model must build."""
    if config.kind in ("curvature", "extend_lohkamp"):
        _build(models.build_metric, config.model, config.model_params)
    elif config.kind == "extend_convexify":
        _build(models.build_profile, config.model, config.model_params)
    elif config.kind == "extend_negative_sect":
        _build(models.build_collar, config.model, config.model_params)
    elif config.kind == "obstruction":
        _build(models.build_group, config.model, config.model_params)
