// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde_json::json;

use super::table::{RowStatus, SweepTable};
use crate::bath::BathParams;
use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::phase::{gp_for_params_with, GpResult, Tolerances};
use crate::qubit::InitialState;

/// Columns appended after the swept parameters.
pub const RESULT_COLUMNS: [&str; 5] = ["tau0", "tau", "phase", "phase_over_pi", "quadrature_error"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    FieldB,
    TemperatureT,
    Theta0,
    AnisotropyBa,
    CouplingJ0,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [
        SweepParam::FieldB,
        SweepParam::TemperatureT,
        SweepParam::Theta0,
        SweepParam::AnisotropyBa,
        SweepParam::CouplingJ0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::FieldB => "field_b",
            SweepParam::TemperatureT => "temperature_t",
            SweepParam::Theta0 => "theta0",
            SweepParam::AnisotropyBa => "anisotropy_ba",
            SweepParam::CouplingJ0 => "coupling_j0",
        }
    }

    pub fn value(self, params: &BathParams, init: &InitialState) -> f64 {
        match self {
            SweepParam::FieldB => params.field_b(),
            SweepParam::TemperatureT => params.temperature_t(),
            SweepParam::Theta0 => init.theta0(),
            SweepParam::AnisotropyBa => params.anisotropy_ba(),
            SweepParam::CouplingJ0 => params.coupling_j0(),
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid("axis", format!("unknown sweep parameter `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            other => Err(Error::invalid("spacing", format!("expected linear or log, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn linear(param: SweepParam, start: f64, stop: f64, count: usize) -> Self {
        Axis {
            param,
            start,
            stop,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(param: SweepParam, start: f64, stop: f64, count: usize) -> Self {
        Axis {
            spacing: Spacing::Log,
            ..Axis::linear(param, start, stop, count)
        }
    }

    /// A zero-width range (`start == stop`) is allowed and repeats the point.
    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::invalid("count", format!("axis `{}` needs at least 2 points", self.param)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start > self.stop {
            return Err(Error::invalid(
                "start",
                format!("axis `{}` needs finite start <= stop", self.param),
            ));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(Error::invalid("start", format!("log axis `{}` needs start > 0", self.param)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.stop;
                }
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub params: BathParams,
    pub init: InitialState,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub clamp_to_critical: bool,
    pub tolerances: Tolerances,
}

impl SweepSpec {
    pub fn new(params: BathParams, init: InitialState, axis1: Axis) -> Self {
        SweepSpec {
            params,
            init,
            axis1,
            axis2: None,
            clamp_to_critical: false,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.axis1.validate()?;
        if let Some(axis2) = &self.axis2 {
            axis2.validate()?;
            if axis2.param == self.axis1.param {
                return Err(Error::invalid("axis2", "swept parameters must be distinct"));
            }
        }
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.axis1.count * self.axis2.map_or(1, |a| a.count)
    }
}

/// Applies `assignments` to the base state. Invalid values surface as errors.
pub(crate) fn assign(
    params: &BathParams,
    init: &InitialState,
    assignments: &[(SweepParam, f64)],
) -> Result<(BathParams, InitialState)> {
    let mut builder = params.to_builder();
    let mut theta = init.theta0();
    for &(param, v) in assignments {
        builder = match param {
            SweepParam::FieldB => builder.field_b(v),
            SweepParam::TemperatureT => builder.temperature_t(v),
            SweepParam::AnisotropyBa => builder.anisotropy_ba(v),
            SweepParam::CouplingJ0 => builder.coupling_j0(v),
            SweepParam::Theta0 => {
                theta = v;
                builder
            }
        };
    }
    Ok((builder.build()?, InitialState::new(theta)?))
}

/// Evaluates one grid point, clamping over-critical fields if requested.
pub fn evaluate_point(
    params: &BathParams,
    init: &InitialState,
    clamp_to_critical: bool,
    tol: Tolerances,
) -> (Option<GpResult>, RowStatus) {
    let mut status = RowStatus::Ok;
    let mut effective = *params;
    if params.coupling_j0() > 0.0 {
        if let Some(clamped) = params.clamped_below_critical() {
            if !clamp_to_critical {
                let err = Error::BeyondCriticalField {
                    field: params.field_b(),
                    critical: params.critical_field(),
                };
                return (None, RowStatus::Error(err.code()));
            }
            effective = clamped;
            status = RowStatus::Clamped;
        }
    }
    match gp_for_params_with(&effective, init, tol) {
        Ok(r) => (Some(r), status),
        Err(e) => (None, RowStatus::Error(e.code())),
    }
}

pub(crate) fn result_values(result: Option<&GpResult>) -> [f64; 5] {
    match result {
        Some(r) => [r.tau0, r.tau, r.phase, r.phase_over_pi(), r.quadrature_error],
        None => [f64::NAN; 5],
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    run_sweep_with(spec, Execution::default())
}

/// One row per grid point, axis 1 outermost. Per-cell failures are recorded
/// in the status column and never abort the sweep.
pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<SweepTable> {
    spec.validate()?;
    let mut grid: Vec<Vec<(SweepParam, f64)>> = Vec::with_capacity(spec.row_count());
    for v1 in spec.axis1.values() {
        match &spec.axis2 {
            Some(axis2) => {
                for v2 in axis2.values() {
                    grid.push(vec![(spec.axis1.param, v1), (axis2.param, v2)]);
                }
            }
            None => grid.push(vec![(spec.axis1.param, v1)]),
        }
    }

    let cells = parallel::map_ordered(&grid, exec, |assignments| {
        match assign(&spec.params, &spec.init, assignments) {
            Ok((params, init)) => evaluate_point(&params, &init, spec.clamp_to_critical, spec.tolerances),
            Err(e) => (None, RowStatus::Error(e.code())),
        }
    });

    let mut axes = vec![spec.axis1.param.name().to_string()];
    if let Some(axis2) = &spec.axis2 {
        axes.push(axis2.param.name().to_string());
    }
    let mut columns = axes.clone();
    columns.extend(RESULT_COLUMNS.iter().map(|c| c.to_string()));

    let mut table = SweepTable::new(columns, axes);
    table.metadata.params = base_metadata(&spec.params, &spec.init, spec.clamp_to_critical, spec.tolerances);
    for (assignments, (result, status)) in grid.iter().zip(cells) {
        let mut row: Vec<f64> = assignments.iter().map(|&(_, v)| v).collect();
        row.extend(result_values(result.as_ref()));
        table.push_row(row, status);
    }
    Ok(table)
}

pub(crate) fn base_metadata(
    params: &BathParams,
    init: &InitialState,
    clamp: bool,
    tol: Tolerances,
) -> std::collections::BTreeMap<String, serde_json::Value> {
    let mut map = std::collections::BTreeMap::new();
    if let Ok(serde_json::Value::Object(obj)) = serde_json::to_value(params) {
        map.extend(obj);
    }
    map.insert("theta0".into(), json!(init.theta0()));
    map.insert("clamp_to_critical".into(), json!(clamp));
    map.insert("eta_rel_tol".into(), json!(tol.eta_rel));
    map.insert("phase_abs_tol".into(), json!(tol.phase_abs));
    map
}
