// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use spinflop_core::analysis::{
    critical_scaling, figure_data_with, fit_power_law, run_sweep_with, zero_field_scaling, Axis, Figure, FitSide,
    FitWindow, ScalingReport, Spacing, SweepParam, SweepSpec, SweepTable,
};
use spinflop_core::phase::{gp_for_params_with, gp_oracle_for_params, phase_distance, DEFAULT_ORACLE_STEPS};
use spinflop_core::{BathParams, Execution, GpResult, InitialState, Tolerances};

use crate::config::{ParamSection, RunConfig};
use crate::error::{CliError, CliResult};
use crate::{Format, Method, NumericArgs, ParamArgs, Regime};

const DEFAULT_MJ: f64 = 40.0;
const DEFAULT_J0_OVER_J: f64 = 2.5;
const DEFAULT_THETA0: f64 = 1.3;

/// Flag values win over file values.
fn merged(flags: &ParamArgs, file: &ParamSection) -> ParamSection {
    ParamSection {
        m: flags.m.or(file.m),
        s: flags.s.or(file.s),
        mj: flags.mj.or(file.mj),
        j: flags.j.or(file.j),
        ba: flags.ba.or(file.ba),
        b: flags.b.or(file.b),
        t: flags.t.or(file.t),
        j0: flags.j0.or(file.j0),
        theta0: flags.theta0.or(file.theta0),
    }
}

fn any_param_set(p: &ParamSection) -> bool {
    [p.s, p.mj, p.j, p.ba, p.b, p.t, p.j0, p.theta0].iter().any(Option::is_some) || p.m.is_some()
}

fn resolve_params(flags: &ParamArgs, config: &RunConfig) -> CliResult<(BathParams, InitialState)> {
    let p = merged(flags, &config.params);
    if p.mj.is_some() && p.j.is_some() {
        return Err(CliError::invalid("give either mj or j, not both"));
    }
    let defaults = BathParams::builder().build()?;
    let m = p.m.unwrap_or(defaults.coordination_m());
    if m == 0 {
        return Err(CliError::invalid("invalid parameter `coordination_m`: must be positive"));
    }
    let j = p.j.unwrap_or(p.mj.unwrap_or(DEFAULT_MJ) / m as f64);
    let params = BathParams::builder()
        .coordination_m(m)
        .spin_s(p.s.unwrap_or(defaults.spin_s()))
        .exchange_j(j)
        .anisotropy_ba(p.ba.unwrap_or(defaults.anisotropy_ba()))
        .field_b(p.b.unwrap_or(defaults.field_b()))
        .temperature_t(p.t.unwrap_or(defaults.temperature_t()))
        .coupling_j0(p.j0.unwrap_or(DEFAULT_J0_OVER_J * j))
        .build()?;
    let init = InitialState::new(p.theta0.unwrap_or(DEFAULT_THETA0))?;
    Ok((params, init))
}

fn resolve_tolerances(flags: &NumericArgs, config: &RunConfig) -> CliResult<Tolerances> {
    let defaults = Tolerances::default();
    let tol = Tolerances {
        eta_rel: flags.eta_rel_tol.or(config.numerics.eta_rel_tol).unwrap_or(defaults.eta_rel),
        phase_abs: flags.phase_abs_tol.or(config.numerics.phase_abs_tol).unwrap_or(defaults.phase_abs),
    };
    for (name, v) in [("eta_rel_tol", tol.eta_rel), ("phase_abs_tol", tol.phase_abs)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::invalid(format!("{name} must be positive and finite, got {v}")));
        }
    }
    Ok(tol)
}

fn warn(params: &BathParams) {
    for w in params.warnings() {
        eprintln!("warning: {w}");
    }
}

/// `x` rounded to `digits` significant digits.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn critical_field(config: &RunConfig, flags: &ParamArgs) -> CliResult<String> {
    let (params, _) = resolve_params(flags, config)?;
    let mut out = String::new();
    writeln!(out, "{} T", significant(params.critical_field(), 6)).unwrap();
    Ok(out)
}

fn print_result(out: &mut String, r: &GpResult) {
    writeln!(out, "method        {}", r.method).unwrap();
    writeln!(out, "phase         {} rad", r.phase).unwrap();
    writeln!(out, "phase/pi      {:.6}", r.phase_over_pi()).unwrap();
    writeln!(out, "tau0          {} 1/T", r.tau0).unwrap();
    writeln!(out, "tau           {} 1/T", r.tau).unwrap();
    writeln!(out, "quad_error    {:e} rad", r.quadrature_error).unwrap();
}

pub fn gp(
    config: &RunConfig,
    flags: &ParamArgs,
    numerics: &NumericArgs,
    method: Method,
    clamp: bool,
    oracle_steps: Option<usize>,
) -> CliResult<String> {
    let (mut params, init) = resolve_params(flags, config)?;
    let tol = resolve_tolerances(numerics, config)?;
    let steps = oracle_steps.or(config.numerics.oracle_steps).unwrap_or(DEFAULT_ORACLE_STEPS);
    if params.field_b() > 0.0 && params.coupling_j0() > 0.0 {
        if let Some(clamped) = params.clamped_below_critical() {
            if !clamp {
                params.ensure_below_critical()?;
            }
            eprintln!(
                "warning: B = {} T clamped to {} T below B_c = {} T",
                params.field_b(),
                clamped.field_b(),
                params.critical_field()
            );
            params = clamped;
        }
    }
    warn(&params);

    let closed = || gp_for_params_with(&params, &init, tol);
    let oracle = || gp_oracle_for_params(&params, &init, steps);
    let mut out = String::new();
    match method {
        Method::Closed => print_result(&mut out, &closed()?),
        Method::Oracle => print_result(&mut out, &oracle()?),
        Method::Both => {
            let (a, b) = (closed()?, oracle()?);
            print_result(&mut out, &a);
            out.push('\n');
            print_result(&mut out, &b);
            out.push('\n');
            writeln!(out, "difference    {:e} rad", phase_distance(a.phase, b.phase)).unwrap();
        }
    }
    Ok(out)
}

pub struct SweepRequest {
    pub params: ParamArgs,
    pub numerics: NumericArgs,
    pub figure: Option<String>,
    pub resolution: Option<usize>,
    pub axis1: Option<String>,
    pub axis2: Option<String>,
    pub clamp: bool,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub plot_script: bool,
}

/// Parses `NAME:START:STOP:COUNT[:log|:linear]`.
pub fn parse_axis(spec: &str) -> CliResult<Axis> {
    let parts: Vec<&str> = spec.split(':').collect();
    if !(4..=5).contains(&parts.len()) {
        return Err(CliError::invalid(format!(
            "axis `{spec}`: expected NAME:START:STOP:COUNT[:log]"
        )));
    }
    let param: SweepParam = parts[0].parse()?;
    let number = |s: &str| -> CliResult<f64> {
        s.parse()
            .map_err(|_| CliError::invalid(format!("axis `{spec}`: `{s}` is not a number")))
    };
    let count: usize = parts[3]
        .parse()
        .map_err(|_| CliError::invalid(format!("axis `{spec}`: `{}` is not a count", parts[3])))?;
    let spacing: Spacing = match parts.get(4) {
        Some(s) => s.parse()?,
        None => Spacing::Linear,
    };
    let axis = Axis {
        param,
        start: number(parts[1])?,
        stop: number(parts[2])?,
        count,
        spacing,
    };
    axis.validate()?;
    Ok(axis)
}

enum Plan {
    Figure(Figure, Option<usize>),
    Sweep(SweepSpec),
}

fn source_date_epoch() -> CliResult<u64> {
    match std::env::var("SOURCE_DATE_EPOCH") {
        Err(_) => Ok(0),
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::invalid(format!("SOURCE_DATE_EPOCH must be unix seconds, got `{raw}`"))),
    }
}

fn ensure_parent_dir(path: &Path) -> CliResult<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if parent.is_dir() {
        Ok(())
    } else {
        Err(CliError::io(
            format!("cannot write {}", path.display()),
            std::io::Error::new(std::io::ErrorKind::NotFound, "directory does not exist"),
        ))
    }
}

pub fn sweep(config: &RunConfig, req: SweepRequest) -> CliResult<String> {
    let file = &config.sweep;
    let figure = req.figure.or_else(|| file.figure.clone());
    let axis1 = req.axis1.or_else(|| file.axis1.clone());
    let axis2 = req.axis2.or_else(|| file.axis2.clone());
    let clamp = req.clamp || file.clamp.unwrap_or(false);
    let tol = resolve_tolerances(&req.numerics, config)?;

    let plan = match (figure, axis1) {
        (Some(_), Some(_)) => return Err(CliError::invalid("give either a figure or axes, not both")),
        (None, None) => return Err(CliError::invalid("nothing to sweep: give a figure or axis1")),
        (Some(name), None) => {
            if axis2.is_some() {
                return Err(CliError::invalid("give either a figure or axes, not both"));
            }
            if any_param_set(&merged(&req.params, &config.params)) {
                return Err(CliError::invalid("physical parameters are fixed by the figure preset"));
            }
            let resolution = req.resolution.or(file.resolution);
            if resolution.is_some_and(|n| n < 2) {
                return Err(CliError::invalid("resolution must be at least 2"));
            }
            Plan::Figure(name.parse()?, resolution)
        }
        (None, Some(axis1)) => {
            if req.resolution.is_some() || file.resolution.is_some() {
                return Err(CliError::invalid("resolution applies to figure presets only"));
            }
            let (params, init) = resolve_params(&req.params, config)?;
            warn(&params);
            let mut spec = SweepSpec::new(params, init, parse_axis(&axis1)?);
            spec.axis2 = axis2.as_deref().map(parse_axis).transpose()?;
            spec.clamp_to_critical = clamp;
            spec.tolerances = tol;
            spec.validate()?;
            Plan::Sweep(spec)
        }
    };

    let out = &config.output;
    let path = req
        .output
        .or_else(|| out.path.clone())
        .ok_or_else(|| CliError::invalid("an output path is required (-o)"))?;
    let format = match (req.format, out.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some("csv")) => Format::Csv,
        (None, Some("json")) => Format::Json,
        (None, Some(other)) => return Err(CliError::invalid(format!("format must be csv or json, got `{other}`"))),
        (None, None) if path.extension().is_some_and(|e| e == "json") => Format::Json,
        (None, None) => Format::Csv,
    };
    let plot_script = req.plot_script || out.emit_plot_script.unwrap_or(false);
    if plot_script && format == Format::Json {
        return Err(CliError::invalid("a plot script needs CSV output"));
    }
    let timestamp = source_date_epoch()?;
    ensure_parent_dir(&path)?;

    let mut table: SweepTable = match plan {
        Plan::Figure(figure, resolution) => figure_data_with(figure, resolution, tol, Execution::default()),
        Plan::Sweep(spec) => run_sweep_with(&spec, Execution::default())?,
    };
    table.metadata.timestamp = timestamp;

    let bytes = match format {
        Format::Csv => table.to_csv_string().into_bytes(),
        Format::Json => {
            let mut buf = Vec::new();
            table
                .write_json(&mut buf)
                .map_err(|e| CliError::io("cannot serialize table", e))?;
            buf
        }
    };
    std::fs::write(&path, bytes).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))?;
    if plot_script {
        let script_path = path.with_extension("gp");
        let data_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        std::fs::write(&script_path, table.gnuplot_script(&data_name))
            .map_err(|e| CliError::io(format!("cannot write {}", script_path.display()), e))?;
    }

    let failed = table.status().iter().filter(|s| matches!(s, spinflop_core::analysis::RowStatus::Error(_))).count();
    let mut out = String::new();
    writeln!(out, "wrote {} rows to {}", table.len(), path.display()).unwrap();
    if failed > 0 {
        eprintln!("warning: {failed} cells could not be evaluated; see the status column");
    }
    Ok(out)
}

pub struct ScalingRequest {
    pub regime: Option<Regime>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub points: Option<usize>,
    pub selftest: bool,
}

const SELFTEST_EXPONENT: f64 = 0.25;
const SELFTEST_TOLERANCE: f64 = 1e-10;

fn selftest() -> CliResult<String> {
    let pivot = 2.830194;
    let pts: Vec<(f64, f64)> = FitWindow::CRITICAL
        .distances()?
        .into_iter()
        .map(|d| (pivot - d, 1.7 * d.powf(SELFTEST_EXPONENT)))
        .collect();
    let fit = fit_power_law(&pts, pivot, FitSide::BelowCritical)?;
    let err = (fit.exponent - SELFTEST_EXPONENT).abs();
    let mut out = String::new();
    writeln!(out, "planted exponent    {SELFTEST_EXPONENT}").unwrap();
    writeln!(out, "fitted exponent     {}", fit.exponent).unwrap();
    writeln!(out, "exponent error      {err:e}").unwrap();
    if err < SELFTEST_TOLERANCE {
        Ok(out)
    } else {
        Err(CliError::numerical(format!(
            "self-test exponent error {err:e} exceeds {SELFTEST_TOLERANCE:e}"
        )))
    }
}

pub fn scaling(config: &RunConfig, flags: &ParamArgs, numerics: &NumericArgs, req: ScalingRequest) -> CliResult<String> {
    if req.selftest {
        return selftest();
    }
    let file = &config.fit;
    let regime = match (req.regime, file.regime.as_deref()) {
        (Some(r), _) => r,
        (None, Some("zero-field")) => Regime::ZeroField,
        (None, Some("critical")) => Regime::Critical,
        (None, Some(other)) => {
            return Err(CliError::invalid(format!("regime must be zero-field or critical, got `{other}`")))
        }
        (None, None) => return Err(CliError::invalid("a regime is required (--regime zero-field|critical)")),
    };
    let (params, init) = resolve_params(flags, config)?;
    let tol = resolve_tolerances(numerics, config)?;
    warn(&params);
    let default = match regime {
        Regime::ZeroField => FitWindow::ZERO_FIELD,
        Regime::Critical => FitWindow::CRITICAL,
    };
    let window = FitWindow {
        lo: req.lo.or(file.lo).unwrap_or(default.lo),
        hi: req.hi.or(file.hi).unwrap_or(default.hi),
        count: req.points.or(file.points).unwrap_or(default.count),
    };
    window.distances()?;

    let run = match regime {
        Regime::ZeroField => zero_field_scaling(&params, &init, window, tol, Execution::default()),
        Regime::Critical => critical_scaling(&params, &init, window, tol, Execution::default()),
    };
    let report: ScalingReport = run?;
    let fit = report.fit;
    let (name, pivot) = match regime {
        Regime::ZeroField => ("zero-field", "B".to_string()),
        Regime::Critical => ("critical", format!("B_c - B, B_c = {} T", significant(params.critical_field(), 6))),
    };
    let mut out = String::new();
    writeln!(out, "regime        {name}").unwrap();
    writeln!(out, "exponent      {:.6}", fit.exponent).unwrap();
    writeln!(out, "prefactor     {:.6e} rad/T^k", fit.prefactor).unwrap();
    writeln!(out, "r_squared     {:.8}", fit.r_squared).unwrap();
    writeln!(out, "window        [{:e}, {:e}] T in {pivot}", window.lo, window.hi).unwrap();
    writeln!(out, "points        {}", fit.points).unwrap();
    Ok(out)
}
