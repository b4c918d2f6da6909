// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

//! Antiferromagnetic magnon environment in the spin-wave approximation.
//!
//! Units: g·μB = k_B = ħ = 1. Fields, temperatures and energies are in
//! Tesla; times are in inverse Tesla.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{self, Estimate, Tolerance};

/// Temperature (Tesla-equivalent) above which spin-wave results are flagged.
pub const TEMPERATURE_VALIDITY_LIMIT: f64 = 2.5;

/// Distance below `B_c` used when a sweep clamps an over-critical field.
pub const CLAMP_GUARD: f64 = 1e-6;

pub const DEFAULT_ETA_REL_TOL: f64 = 1e-10;

/// `ω(x_max) = ω(0) + TRUNCATION_EXPONENT · T` bounds the thermal integrals.
const TRUNCATION_EXPONENT: f64 = 45.0;

/// Physical parameters of the central qubit and its antiferromagnetic bath.
///
/// Immutable once built; use [`BathParams::to_builder`] to derive variants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathParams {
    coordination_m: u32,
    spin_s: f64,
    exchange_j: f64,
    anisotropy_ba: f64,
    field_b: f64,
    temperature_t: f64,
    coupling_j0: f64,
}

/// Builder for [`BathParams`].
///
/// Unset fields default to M = 6, S = 1/2, MJ = 40 T, B_A = 0.10 T,
/// B = 0.5 T, T = 0.8 T and J0 = 2.5 J.
#[derive(Debug, Clone, Copy, Default)]
pub struct BathParamsBuilder {
    coordination_m: Option<u32>,
    spin_s: Option<f64>,
    exchange_j: Option<f64>,
    anisotropy_ba: Option<f64>,
    field_b: Option<f64>,
    temperature_t: Option<f64>,
    coupling_j0: Option<f64>,
}

impl BathParamsBuilder {
    pub fn coordination_m(mut self, m: u32) -> Self {
        self.coordination_m = Some(m);
        self
    }

    pub fn spin_s(mut self, s: f64) -> Self {
        self.spin_s = Some(s);
        self
    }

    pub fn exchange_j(mut self, j: f64) -> Self {
        self.exchange_j = Some(j);
        self
    }

    pub fn anisotropy_ba(mut self, ba: f64) -> Self {
        self.anisotropy_ba = Some(ba);
        self
    }

    pub fn field_b(mut self, b: f64) -> Self {
        self.field_b = Some(b);
        self
    }

    pub fn temperature_t(mut self, t: f64) -> Self {
        self.temperature_t = Some(t);
        self
    }

    pub fn coupling_j0(mut self, j0: f64) -> Self {
        self.coupling_j0 = Some(j0);
        self
    }

    pub fn build(self) -> Result<BathParams> {
        let coordination_m = self.coordination_m.unwrap_or(6);
        let exchange_j = self
            .exchange_j
            .unwrap_or(40.0 / f64::from(coordination_m.max(1)));
        let params = BathParams {
            coordination_m,
            spin_s: self.spin_s.unwrap_or(0.5),
            exchange_j,
            anisotropy_ba: self.anisotropy_ba.unwrap_or(0.10),
            field_b: self.field_b.unwrap_or(0.5),
            temperature_t: self.temperature_t.unwrap_or(0.8),
            coupling_j0: self.coupling_j0.unwrap_or(2.5 * exchange_j),
        };
        params.validate()?;
        Ok(params)
    }
}

impl BathParams {
    pub fn builder() -> BathParamsBuilder {
        BathParamsBuilder::default()
    }

    pub fn to_builder(&self) -> BathParamsBuilder {
        BathParamsBuilder {
            coordination_m: Some(self.coordination_m),
            spin_s: Some(self.spin_s),
            exchange_j: Some(self.exchange_j),
            anisotropy_ba: Some(self.anisotropy_ba),
            field_b: Some(self.field_b),
            temperature_t: Some(self.temperature_t),
            coupling_j0: Some(self.coupling_j0),
        }
    }

    fn validate(&self) -> Result<()> {
        let finite_pos = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        let finite_nonneg = |name, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")))
            }
        };
        if self.coordination_m == 0 {
            return Err(Error::invalid("coordination_m", "must be a positive integer"));
        }
        finite_pos("spin_s", self.spin_s)?;
        if (2.0 * self.spin_s).fract() != 0.0 {
            return Err(Error::invalid(
                "spin_s",
                format!("must be a positive half-integer, got {}", self.spin_s),
            ));
        }
        finite_pos("exchange_j", self.exchange_j)?;
        finite_pos("anisotropy_ba", self.anisotropy_ba)?;
        finite_nonneg("field_b", self.field_b)?;
        finite_pos("temperature_t", self.temperature_t)?;
        finite_nonneg("coupling_j0", self.coupling_j0)
    }

    pub fn coordination_m(&self) -> u32 {
        self.coordination_m
    }

    pub fn spin_s(&self) -> f64 {
        self.spin_s
    }

    pub fn exchange_j(&self) -> f64 {
        self.exchange_j
    }

    pub fn anisotropy_ba(&self) -> f64 {
        self.anisotropy_ba
    }

    pub fn field_b(&self) -> f64 {
        self.field_b
    }

    pub fn temperature_t(&self) -> f64 {
        self.temperature_t
    }

    pub fn coupling_j0(&self) -> f64 {
        self.coupling_j0
    }

    /// Exchange energy scale 2MSJ.
    pub fn exchange_scale(&self) -> f64 {
        2.0 * f64::from(self.coordination_m) * self.spin_s * self.exchange_j
    }

    // (1 + B_A/2MSJ)^2 - 1, written without cancellation.
    fn gap_parameter(&self) -> f64 {
        let r = self.anisotropy_ba / self.exchange_scale();
        r * (2.0 + r)
    }

    /// Spin-flop critical field: the field at which the minus-branch gap
    /// closes at zero wave vector.
    pub fn critical_field(&self) -> f64 {
        self.exchange_scale() * self.gap_parameter().sqrt()
    }

    /// Dispersion above the gap, `ω(x) - ω(0)`, identical for both branches.
    fn dispersion_rise(&self, x: f64) -> f64 {
        let g = self.gap_parameter();
        let u = 2.0 * x * x / f64::from(self.coordination_m);
        self.exchange_scale() * u / ((g + u).sqrt() + g.sqrt())
    }

    /// Inverse of [`Self::dispersion_rise`].
    fn wavevector_for_rise(&self, rise: f64) -> f64 {
        let q = rise / self.exchange_scale();
        let u = q * (q + 2.0 * self.gap_parameter().sqrt());
        (0.5 * f64::from(self.coordination_m) * u).sqrt()
    }

    fn zero_wavevector_energy(&self, branch: MagnonBranch) -> f64 {
        match branch {
            MagnonBranch::Plus => self.critical_field() + self.field_b,
            MagnonBranch::Minus => self.critical_field() - self.field_b,
        }
    }

    /// Human-readable validity warnings that do not prevent evaluation.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.temperature_t > TEMPERATURE_VALIDITY_LIMIT {
            out.push(format!(
                "temperature T = {} T exceeds the spin-wave validity limit of {} T",
                self.temperature_t, TEMPERATURE_VALIDITY_LIMIT
            ));
        }
        out
    }

    pub fn ensure_below_critical(&self) -> Result<()> {
        let critical = self.critical_field();
        if self.field_b < critical {
            Ok(())
        } else {
            Err(Error::BeyondCriticalField {
                field: self.field_b,
                critical,
            })
        }
    }

    /// Returns a copy with the field pulled down to `B_c - CLAMP_GUARD` when
    /// it is at or beyond the critical field, or `None` if no clamp is needed.
    pub fn clamped_below_critical(&self) -> Option<BathParams> {
        let critical = self.critical_field();
        (self.field_b >= critical).then(|| BathParams {
            field_b: (critical - CLAMP_GUARD).max(0.0),
            ..*self
        })
    }
}

/// The two magnon branches ω^(+) and ω^(−).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MagnonBranch {
    Plus,
    Minus,
}

impl MagnonBranch {
    pub const BOTH: [MagnonBranch; 2] = [MagnonBranch::Plus, MagnonBranch::Minus];
}

/// Spin-flop critical field `2MSJ·√((1 + B_A/2MSJ)² − 1)`; ignores `field_b`.
pub fn critical_field(params: &BathParams) -> f64 {
    params.critical_field()
}

/// Small-k magnon dispersion at dimensionless wave number `x = k·l`.
pub fn magnon_frequency(params: &BathParams, branch: MagnonBranch, x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::invalid("x", format!("must be finite and >= 0, got {x}")));
    }
    let omega = params.zero_wavevector_energy(branch) + params.dispersion_rise(x);
    if omega < 0.0 {
        return Err(Error::BeyondCriticalField {
            field: params.field_b,
            critical: params.critical_field(),
        });
    }
    Ok(omega)
}

/// Thermal magnon integral η^(±) at the default relative tolerance.
pub fn eta(params: &BathParams, branch: MagnonBranch) -> Result<f64> {
    eta_estimate(params, branch, DEFAULT_ETA_REL_TOL).map(|e| e.value)
}

/// η^(±) = ½ ∫₀^∞ e^{−ω/T} / (1 − e^{−ω/T})² x² dx, with its error estimate.
pub fn eta_estimate(params: &BathParams, branch: MagnonBranch, rel_tol: f64) -> Result<Estimate> {
    if !(rel_tol > 0.0) {
        return Err(Error::invalid("rel_tol", "must be > 0"));
    }
    params.ensure_below_critical()?;

    let t = params.temperature_t;
    let gap = params.zero_wavevector_energy(branch);
    // e^{-w}/(1-e^{-w})^2 = 1/(4 sinh^2(w/2))
    let integrand = |x: f64| {
        let w = (gap + params.dispersion_rise(x)) / t;
        let s = (0.5 * w).sinh();
        0.125 * x * x / (s * s)
    };

    // The peak sits below x*, where ω(x*) = 2ω(0); split geometrically from
    // there so that near-critical spikes are resolved from the start.
    let x_max = params.wavevector_for_rise(TRUNCATION_EXPONENT * t);
    let x_star = params.wavevector_for_rise(gap);
    let mut points = vec![0.0];
    let mut x = x_star;
    while x < x_max {
        points.push(x);
        x *= 2.0;
    }
    points.push(x_max);

    quadrature::integrate(integrand, &points, Tolerance::relative(rel_tol))
}

/// Gaussian decoherence time τ0 = √2·π / (J0·√(η⁺ + η⁻)).
///
/// Returns `f64::INFINITY` for an uncoupled qubit (J0 = 0) without touching
/// the bath, so the isolated limit is valid at any field.
pub fn decoherence_time(params: &BathParams) -> Result<f64> {
    decoherence_time_estimate(params, DEFAULT_ETA_REL_TOL).map(|e| e.value)
}

pub fn decoherence_time_estimate(params: &BathParams, eta_rel_tol: f64) -> Result<Estimate> {
    let infinite = Estimate {
        value: f64::INFINITY,
        error: 0.0,
    };
    if params.coupling_j0 == 0.0 {
        return Ok(infinite);
    }
    let plus = eta_estimate(params, MagnonBranch::Plus, eta_rel_tol)?;
    let minus = eta_estimate(params, MagnonBranch::Minus, eta_rel_tol)?;
    let total = plus.value + minus.value;
    if total == 0.0 {
        return Ok(infinite);
    }
    let tau0 = std::f64::consts::SQRT_2 * std::f64::consts::PI / (params.coupling_j0 * total.sqrt());
    let rel = 0.5 * (plus.error + minus.error) / total;
    Ok(Estimate {
        value: tau0,
        error: tau0 * rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig2(b: f64, t: f64) -> BathParams {
        BathParams::builder()
            .field_b(b)
            .temperature_t(t)
            .build()
            .unwrap()
    }

    #[test]
    fn defaults_match_reference_material() {
        let p = BathParams::builder().build().unwrap();
        assert_eq!(p.coordination_m(), 6);
        assert_relative_eq!(p.exchange_j() * 6.0, 40.0, max_relative = 1e-15);
        assert_relative_eq!(p.coupling_j0(), 2.5 * 40.0 / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn gap_at_zero_field() {
        let p = fig2(0.0, 0.8);
        let direct = 40.0 * ((1.0f64 + 0.1 / 40.0).powi(2) - 1.0).sqrt();
        for branch in MagnonBranch::BOTH {
            let w = magnon_frequency(&p, branch, 0.0).unwrap();
            assert_relative_eq!(w, direct, max_relative = 1e-12);
            assert!((w - 2.8302).abs() < 1e-4);
        }
    }

    #[test]
    fn gap_vanishes_with_anisotropy() {
        let mut last = f64::INFINITY;
        for ba in [1e-2, 1e-6, 1e-10, 1e-14] {
            let p = BathParams::builder().anisotropy_ba(ba).field_b(0.0).build().unwrap();
            let w = magnon_frequency(&p, MagnonBranch::Plus, 0.0).unwrap();
            assert!(w < last);
            assert_relative_eq!(w, p.critical_field(), max_relative = 1e-14);
            last = w;
        }
        assert!(last < 1e-5);
    }

    #[test]
    fn minus_gap_closes_at_critical_field() {
        let base = BathParams::builder().build().unwrap();
        let bc = base.critical_field();
        let p = base.to_builder().field_b(bc).build().unwrap();
        let w = magnon_frequency(&p, MagnonBranch::Minus, 0.0).unwrap();
        assert!(w.abs() <= 1e-12 * p.exchange_scale());
    }

    #[test]
    fn critical_field_values() {
        let bc = |ba| {
            BathParams::builder()
                .anisotropy_ba(ba)
                .build()
                .unwrap()
                .critical_field()
        };
        assert!((bc(0.10) - 2.83).abs() < 0.01);
        assert!((bc(0.15) - 3.47).abs() < 0.01);
    }

    #[test]
    fn over_critical_minus_branch_is_an_error() {
        let p = fig2(3.0, 0.8);
        assert!(matches!(
            magnon_frequency(&p, MagnonBranch::Minus, 0.0),
            Err(Error::BeyondCriticalField { .. })
        ));
        assert!(magnon_frequency(&p, MagnonBranch::Plus, 0.0).is_ok());
        assert!(matches!(
            eta(&p, MagnonBranch::Plus),
            Err(Error::BeyondCriticalField { .. })
        ));
    }

    #[test]
    fn negative_wavenumber_rejected() {
        let p = fig2(0.5, 0.8);
        assert!(matches!(
            magnon_frequency(&p, MagnonBranch::Plus, -1.0),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(BathParams::builder().anisotropy_ba(0.0).build().is_err());
        assert!(BathParams::builder().temperature_t(0.0).build().is_err());
        assert!(BathParams::builder().exchange_j(-1.0).build().is_err());
        assert!(BathParams::builder().spin_s(0.3).build().is_err());
        assert!(BathParams::builder().coordination_m(0).build().is_err());
        assert!(BathParams::builder().field_b(-0.1).build().is_err());
        assert!(BathParams::builder().coupling_j0(f64::NAN).build().is_err());
        assert!(BathParams::builder().spin_s(1.5).build().is_ok());
    }

    #[test]
    fn high_temperature_warns() {
        assert!(fig2(0.5, 2.5).warnings().is_empty());
        assert_eq!(fig2(0.5, 2.6).warnings().len(), 1);
    }

    #[test]
    fn eta_vanishes_at_low_temperature() {
        let p = fig2(0.5, 1e-3);
        assert!(eta(&p, MagnonBranch::Minus).unwrap() < 1e-300);
        let p = fig2(0.5, 0.02);
        assert!(eta(&p, MagnonBranch::Minus).unwrap() < 1e-40);
    }

    #[test]
    fn minus_branch_dominates() {
        for b in [0.1, 0.5, 1.5, 2.8] {
            let p = fig2(b, 0.8);
            assert!(eta(&p, MagnonBranch::Minus).unwrap() > eta(&p, MagnonBranch::Plus).unwrap());
        }
    }

    #[test]
    fn uncoupled_qubit_has_infinite_decoherence_time() {
        let p = BathParams::builder().coupling_j0(0.0).field_b(5.0).build().unwrap();
        assert_eq!(decoherence_time(&p).unwrap(), f64::INFINITY);
    }

    #[test]
    fn decoherence_time_inverse_in_coupling() {
        let p = fig2(0.5, 0.8);
        let q = p.to_builder().coupling_j0(2.0 * p.coupling_j0()).build().unwrap();
        let a = decoherence_time(&p).unwrap();
        let b = decoherence_time(&q).unwrap();
        assert_relative_eq!(b, a / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn decoherence_time_collapses_toward_critical_field() {
        let far = decoherence_time(&fig2(0.5, 0.8)).unwrap();
        let near = decoherence_time(&fig2(2.82, 0.8)).unwrap();
        assert!(near > 0.0 && near * 10.0 < far, "near {near}, far {far}");
    }

    #[test]
    fn clamping() {
        let p = fig2(3.0, 0.8);
        let c = p.clamped_below_critical().unwrap();
        assert_relative_eq!(c.field_b(), p.critical_field() - CLAMP_GUARD, max_relative = 1e-15);
        assert!(fig2(1.0, 0.8).clamped_below_critical().is_none());
        assert!(eta(&c, MagnonBranch::Minus).is_ok());
    }
}
