// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

//! Geometric phase acquired by the dephasing qubit over one quasiperiod
//! τ = 2π/B.
//!
//! Two independent routes are provided: a closed-form time integral that
//! depends only on the upper eigenbranch, and a trajectory oracle that
//! evaluates the gauge-invariant mixed-state phase from sampled density
//! matrices by discrete parallel transport.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::bath::{self, BathParams, DEFAULT_ETA_REL_TOL};
use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};
use crate::qubit::{self, inner, DensityMatrix2, InitialState, Ket};

pub const DEFAULT_PHASE_ABS_TOL: f64 = 1e-9;
pub const DEFAULT_ORACLE_STEPS: usize = 4096;
pub const MIN_ORACLE_STEPS: usize = 16;

/// Overlap magnitudes closer than this make branch matching ambiguous.
const MATCH_AMBIGUITY: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GpMethod {
    ClosedForm,
    TrajectoryOracle,
    IsolatedAnalytic,
}

impl fmt::Display for GpMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GpMethod::ClosedForm => "closed_form",
            GpMethod::TrajectoryOracle => "trajectory_oracle",
            GpMethod::IsolatedAnalytic => "isolated_analytic",
        })
    }
}

/// A geometric phase in `[0, 2π)` with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GpResult {
    pub phase: f64,
    /// Quasiperiod 2π/B. NaN for [`gp_isolated`], which has no field.
    pub tau: f64,
    pub tau0: f64,
    pub quadrature_error: f64,
    pub method: GpMethod,
}

impl GpResult {
    pub fn phase_over_pi(&self) -> f64 {
        self.phase / PI
    }
}

/// Numerical tolerances for the bath integrals and the phase integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eta_rel: f64,
    pub phase_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eta_rel: DEFAULT_ETA_REL_TOL,
            phase_abs: DEFAULT_PHASE_ABS_TOL,
        }
    }
}

impl Tolerances {
    pub fn halved(self) -> Self {
        Tolerances {
            eta_rel: 0.5 * self.eta_rel,
            phase_abs: 0.5 * self.phase_abs,
        }
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn reduce_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Phase of a precessing pure state: π(1 − cos θ0).
pub fn gp_isolated(init: &InitialState) -> GpResult {
    GpResult {
        phase: reduce_phase(PI * (1.0 - init.cos_theta())),
        tau: f64::NAN,
        tau0: f64::INFINITY,
        quadrature_error: 0.0,
        method: GpMethod::IsolatedAnalytic,
    }
}

fn quasiperiod(b: f64) -> Result<f64> {
    if b.is_nan() || b <= 0.0 {
        return Err(Error::ZeroField { field: b });
    }
    Ok(TAU / b)
}

fn check_tau0(tau0: f64) -> Result<()> {
    if tau0.is_nan() || tau0 <= 0.0 {
        return Err(Error::invalid("tau0", format!("must be > 0 or infinite, got {tau0}")));
    }
    Ok(())
}

/// Instantaneous phase rate of the upper eigenbranch at time `t`.
fn phase_rate(init: &InitialState, b: f64, tau0: f64, t: f64) -> f64 {
    let (s, c) = (init.sin_theta(), init.cos_theta());
    if s == 0.0 {
        return 0.0;
    }
    if c == 0.0 {
        return 0.5 * b;
    }
    let u = t / tau0;
    let decay = (-2.0 * u * u).exp();
    if c > 0.0 {
        let w = qubit::upper_branch_weight(init, decay);
        b * s * s * decay / (s * s * decay + w * w)
    } else {
        let r = (c * c + decay * s * s).sqrt();
        let q = s / (r - c);
        b / (1.0 + decay * q * q)
    }
}

/// Closed-form phase at the default tolerance.
pub fn gp_closed_form(init: &InitialState, b: f64, tau0: f64) -> Result<GpResult> {
    gp_closed_form_with(init, b, tau0, DEFAULT_PHASE_ABS_TOL)
}

/// Closed-form phase: the time integral over one quasiperiod of the upper
/// eigenbranch's transport rate.
pub fn gp_closed_form_with(init: &InitialState, b: f64, tau0: f64, abs_tol: f64) -> Result<GpResult> {
    let tau = quasiperiod(b)?;
    check_tau0(tau0)?;
    if !(abs_tol > 0.0) {
        return Err(Error::invalid("abs_tol", "must be > 0"));
    }

    let mut points = vec![0.0];
    points.extend(
        [0.5, 1.0, 2.0, 3.0]
            .iter()
            .map(|k| k * tau0)
            .filter(|&t| t < tau),
    );
    points.push(tau);

    let est = quadrature::integrate(|t| phase_rate(init, b, tau0, t), &points, Tolerance::absolute(abs_tol))?;
    Ok(GpResult {
        phase: reduce_phase(est.value),
        tau,
        tau0,
        quadrature_error: est.error,
        method: GpMethod::ClosedForm,
    })
}

type Sampler = dyn Fn(f64) -> DensityMatrix2 + Send + Sync;

/// A sampled density-matrix path over `[0, tau]`.
pub struct Trajectory {
    sampler: Box<Sampler>,
    tau: f64,
    tau0: f64,
    n_steps: usize,
}

impl fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Trajectory")
            .field("tau", &self.tau)
            .field("tau0", &self.tau0)
            .field("n_steps", &self.n_steps)
            .finish_non_exhaustive()
    }
}

impl Trajectory {
    /// `n_steps` must be even and at least [`MIN_ORACLE_STEPS`]; the oracle
    /// also evaluates at `n_steps / 2` for its error estimate.
    pub fn new<F>(sampler: F, tau: f64, n_steps: usize) -> Result<Self>
    where
        F: Fn(f64) -> DensityMatrix2 + Send + Sync + 'static,
    {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::invalid("tau", format!("must be finite and > 0, got {tau}")));
        }
        if n_steps < MIN_ORACLE_STEPS || !n_steps.is_multiple_of(2) {
            return Err(Error::invalid(
                "n_steps",
                format!("must be even and >= {MIN_ORACLE_STEPS}, got {n_steps}"),
            ));
        }
        Ok(Trajectory {
            sampler: Box::new(sampler),
            tau,
            tau0: f64::NAN,
            n_steps,
        })
    }

    /// The dephasing qubit over one quasiperiod at field `b`.
    pub fn dephasing(init: InitialState, b: f64, tau0: f64) -> Result<Self> {
        let tau = quasiperiod(b)?;
        check_tau0(tau0)?;
        let mut traj = Trajectory::new(
            move |t| qubit::reduced_density_matrix(&init, b, tau0, t),
            tau,
            DEFAULT_ORACLE_STEPS,
        )?;
        traj.tau0 = tau0;
        Ok(traj)
    }

    pub fn with_steps(self, n_steps: usize) -> Result<Self> {
        let tau0 = self.tau0;
        let Trajectory { sampler, tau, .. } = self;
        let mut traj = Trajectory::new(sampler, tau, n_steps)?;
        traj.tau0 = tau0;
        Ok(traj)
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn sample(&self, t: f64) -> DensityMatrix2 {
        (self.sampler)(t)
    }
}

/// Gauge-invariant mixed-state phase of a sampled trajectory.
///
/// Each eigenbranch is followed by maximum overlap; its parallel-transport
/// factor is the product of normalized overlaps between consecutive samples.
/// The reported error is the change from a run at half the step count.
pub fn gp_trajectory_oracle(traj: &Trajectory) -> Result<GpResult> {
    let fine = pancharatnam_phase(traj, traj.n_steps)?;
    let coarse = pancharatnam_phase(traj, traj.n_steps / 2)?;
    let error = phase_distance(fine, coarse).max(64.0 * f64::EPSILON * TAU);
    Ok(GpResult {
        phase: fine,
        tau: traj.tau,
        tau0: traj.tau0,
        quadrature_error: error,
        method: GpMethod::TrajectoryOracle,
    })
}

fn pancharatnam_phase(traj: &Trajectory, n: usize) -> Result<f64> {
    let start = traj.sample(0.0).eigen_decompose();
    let initial: [Ket; 2] = [start.v_plus, start.v_minus];
    let initial_eps = [start.eps_plus, start.eps_minus];

    let mut current = initial;
    let mut current_eps = initial_eps;
    let mut transport = [Complex64::new(1.0, 0.0); 2];

    for step in 1..=n {
        let t = traj.tau * step as f64 / n as f64;
        let es = traj.sample(t).eigen_decompose();
        let candidates = [(es.v_plus, es.eps_plus), (es.v_minus, es.eps_minus)];

        let o0 = inner(&current[0], &candidates[0].0).norm();
        let o1 = inner(&current[0], &candidates[1].0).norm();
        if (o0 - o1).abs() < MATCH_AMBIGUITY {
            return Err(Error::Degenerate { step });
        }
        let order = if o0 > o1 { [0, 1] } else { [1, 0] };

        for (branch, &pick) in order.iter().enumerate() {
            let (next, eps) = candidates[pick];
            let overlap = inner(&current[branch], &next);
            let norm = overlap.norm();
            if norm == 0.0 {
                return Err(Error::Degenerate { step });
            }
            transport[branch] *= overlap / norm;
            current[branch] = next;
            current_eps[branch] = eps;
        }
    }

    let mut total = Complex64::new(0.0, 0.0);
    for branch in 0..2 {
        let weight = (initial_eps[branch].max(0.0) * current_eps[branch].max(0.0)).sqrt();
        total += weight * inner(&initial[branch], &current[branch]) * transport[branch].conj();
    }
    if total.norm() < 1e-14 {
        return Err(Error::UndefinedPhase);
    }
    Ok(reduce_phase(total.arg()))
}

/// Phase for a full parameter set at default tolerances.
pub fn gp_for_params(params: &BathParams, init: &InitialState) -> Result<GpResult> {
    gp_for_params_with(params, init, Tolerances::default())
}

/// Decoherence time from the bath followed by the closed-form phase.
///
/// The reported error includes the effect of the bath-integral error on τ0.
pub fn gp_for_params_with(params: &BathParams, init: &InitialState, tol: Tolerances) -> Result<GpResult> {
    quasiperiod(params.field_b())?;
    let tau0 = bath::decoherence_time_estimate(params, tol.eta_rel)?;
    let mut result = gp_closed_form_with(init, params.field_b(), tau0.value, tol.phase_abs)?;
    if tau0.value.is_finite() {
        result.quadrature_error += 2.0 * TAU * tau0.error / tau0.value;
    }
    Ok(result)
}

/// Trajectory-oracle phase for a full parameter set.
pub fn gp_oracle_for_params(params: &BathParams, init: &InitialState, n_steps: usize) -> Result<GpResult> {
    let tau0 = bath::decoherence_time(params)?;
    let traj = Trajectory::dephasing(*init, params.field_b(), tau0)?.with_steps(n_steps)?;
    gp_trajectory_oracle(&traj)
}
