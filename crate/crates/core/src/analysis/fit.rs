// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

//! Log–log power-law fits for the small-field and near-critical regimes.

use serde::Serialize;

use crate::bath::BathParams;
use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::phase::{gp_for_params_with, Tolerances};
use crate::qubit::InitialState;

pub const MIN_FIT_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitSide {
    /// Abscissa is `b` itself; pivot is 0.
    AboveZero,
    /// Abscissa is `pivot - b`, all `b < pivot`.
    BelowCritical,
}

/// `phase ≈ prefactor · |b − pivot|^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub pivot: f64,
    pub points: usize,
}

/// Ordinary least squares on `(ln|b − pivot|, ln phase)`.
pub fn fit_power_law(points: &[(f64, f64)], pivot: f64, side: FitSide) -> Result<PowerLawFit> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "need at least {MIN_FIT_POINTS} points, got {}",
            points.len()
        )));
    }
    let mut logs = Vec::with_capacity(points.len());
    for &(b, phase) in points {
        let dist = match side {
            FitSide::AboveZero if b > 0.0 => b,
            FitSide::BelowCritical if b < pivot => pivot - b,
            FitSide::AboveZero => return Err(Error::Fit(format!("abscissa {b} is not > 0"))),
            FitSide::BelowCritical => {
                return Err(Error::Fit(format!("abscissa {b} is not below pivot {pivot}")))
            }
        };
        if !(phase > 0.0 && phase.is_finite()) {
            return Err(Error::Fit(format!("phase {phase} is not positive")));
        }
        logs.push((dist.ln(), phase.ln()));
    }

    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("abscissas are degenerate".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(PowerLawFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
        pivot: match side {
            FitSide::AboveZero => 0.0,
            FitSide::BelowCritical => pivot,
        },
        points: points.len(),
    })
}

/// Log-spaced distances from the pivot, in Tesla.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitWindow {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl FitWindow {
    pub const ZERO_FIELD: FitWindow = FitWindow {
        lo: 1e-3,
        hi: 2e-2,
        count: 20,
    };

    pub const CRITICAL: FitWindow = FitWindow {
        lo: 1e-3,
        hi: 0.1,
        count: 20,
    };

    pub fn distances(&self) -> Result<Vec<f64>> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.hi.is_finite()) {
            return Err(Error::invalid("window", format!("need 0 < lo < hi, got [{}, {}]", self.lo, self.hi)));
        }
        if self.count < MIN_FIT_POINTS {
            return Err(Error::invalid("window", format!("need at least {MIN_FIT_POINTS} points")));
        }
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let n = self.count - 1;
        Ok((0..=n)
            .map(|i| (a + (b - a) * i as f64 / n as f64).exp())
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub fit: PowerLawFit,
    pub window: FitWindow,
    /// `(field_b, phase)` pairs that entered the fit.
    pub samples: Vec<(f64, f64)>,
}

fn sample_phases(
    params: &BathParams,
    init: &InitialState,
    fields: &[f64],
    tol: Tolerances,
    exec: Execution,
) -> Result<Vec<(f64, f64)>> {
    parallel::map_ordered(fields, exec, |&b| {
        let p = params.to_builder().field_b(b).build()?;
        gp_for_params_with(&p, init, tol).map(|r| (b, r.phase))
    })
    .into_iter()
    .collect()
}

/// Fits Φ ∝ B^k over the window above zero field.
pub fn zero_field_scaling(
    params: &BathParams,
    init: &InitialState,
    window: FitWindow,
    tol: Tolerances,
    exec: Execution,
) -> Result<ScalingReport> {
    let fields = window.distances()?;
    let samples = sample_phases(params, init, &fields, tol, exec)?;
    let fit = fit_power_law(&samples, 0.0, FitSide::AboveZero)?;
    Ok(ScalingReport { fit, window, samples })
}

/// Fits Φ ∝ (B_c − B)^k over the window below the critical field.
pub fn critical_scaling(
    params: &BathParams,
    init: &InitialState,
    window: FitWindow,
    tol: Tolerances,
    exec: Execution,
) -> Result<ScalingReport> {
    let critical = params.critical_field();
    if window.hi >= critical {
        return Err(Error::invalid("window", "upper distance must be below B_c"));
    }
    let fields: Vec<f64> = window.distances()?.iter().map(|d| critical - d).collect();
    let samples = sample_phases(params, init, &fields, tol, exec)?;
    let fit = fit_power_law(&samples, critical, FitSide::BelowCritical)?;
    Ok(ScalingReport { fit, window, samples })
}
