// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use spinflop_core::bath::{self, decoherence_time, eta, eta_estimate, magnon_frequency};
use spinflop_core::{BathParams, MagnonBranch};

fn params(b: f64, t: f64) -> BathParams {
    BathParams::builder().field_b(b).temperature_t(t).build().unwrap()
}

/// Brute-force trapezoid rule on a uniform grid, using the dispersion
/// written directly as 2MSJ·√((1 + B_A/2MSJ)² + 2x²/M − 1) − B.
fn eta_minus_trapezoid(b: f64, t: f64, n: usize) -> f64 {
    let (a, m, ba) = (40.0f64, 6.0f64, 0.1f64);
    let omega = |x: f64| a * ((1.0 + ba / a).powi(2) + 2.0 * x * x / m - 1.0).sqrt() - b;
    let w0 = omega(0.0);
    // bisection for ω(x_max) = ω(0) + 45 T
    let (mut lo, mut hi) = (0.0, 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if omega(mid) < w0 + 45.0 * t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x_max = 0.5 * (lo + hi);
    let f = |x: f64| {
        let e = (-omega(x) / t).exp();
        0.5 * e / (1.0 - e).powi(2) * x * x
    };
    let h = x_max / n as f64;
    let inner: f64 = (1..n).map(|i| f(i as f64 * h)).sum();
    h * (0.5 * f(0.0) + inner + 0.5 * f(x_max))
}

// Regression pin, from the trapezoid oracle above with 4·10⁶ intervals.
const ETA_MINUS_FIG2_B05_T08: f64 = 1.545_609_040_004e-5;

#[test]
fn eta_matches_trapezoid_oracle() {
    let oracle = eta_minus_trapezoid(0.5, 0.8, 1_000_000);
    let value = eta(&params(0.5, 0.8), MagnonBranch::Minus).unwrap();
    assert!((value / oracle - 1.0).abs() < 1e-9, "{value} vs {oracle}");
    assert!((value / ETA_MINUS_FIG2_B05_T08 - 1.0).abs() < 1e-10);
}

#[test]
fn eta_increases_with_temperature_and_field() {
    let temps = [0.2, 0.5, 0.8, 1.2, 1.8, 2.5];
    let fields = [0.05, 0.5, 1.0, 2.0, 2.7, 2.82];
    for &b in &fields {
        for branch in MagnonBranch::BOTH {
            let vals: Vec<f64> = temps.iter().map(|&t| eta(&params(b, t), branch).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]), "b={b} {branch:?}: {vals:?}");
        }
    }
    for &t in &temps {
        let vals: Vec<f64> = fields
            .iter()
            .map(|&b| eta(&params(b, t), MagnonBranch::Minus).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]), "t={t}: {vals:?}");
    }
}

#[test]
fn decoherence_time_decreases_with_temperature() {
    let taus: Vec<f64> = [0.3, 0.8, 1.5, 2.5]
        .iter()
        .map(|&t| decoherence_time(&params(0.5, t)).unwrap())
        .collect();
    assert!(taus.windows(2).all(|w| w[1] < w[0]), "{taus:?}");
}

#[test]
fn decoherence_time_critical_slope() {
    let base = params(0.5, 0.8);
    let bc = base.critical_field();
    let n = 20;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let d = (1e-3f64.ln() + (0.1f64.ln() - 1e-3f64.ln()) * i as f64 / (n - 1) as f64).exp();
            let b = bc - d;
            let tau0 = decoherence_time(&base.to_builder().field_b(b).build().unwrap()).unwrap();
            ((bc - b).ln(), tau0.ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope - 0.25).abs() < 0.03, "slope {slope}");
}

#[test]
fn halving_tolerance_stays_within_estimate() {
    for (b, t) in [(0.5, 0.8), (2.82, 1.5), (2.83, 0.3), (0.01, 2.5)] {
        let p = params(b, t);
        for branch in MagnonBranch::BOTH {
            let coarse = eta_estimate(&p, branch, 1e-10).unwrap();
            let fine = eta_estimate(&p, branch, 5e-11).unwrap();
            assert!(
                (fine.value - coarse.value).abs() <= coarse.error,
                "b={b} t={t} {branch:?}: {} vs {} (err {})",
                fine.value,
                coarse.value,
                coarse.error
            );
        }
    }
}

#[test]
fn near_critical_eta_resolves_the_spike() {
    // Minus-branch integral grows like (B_c − B)^(−1/2) at small distance.
    let base = params(0.5, 0.8);
    let bc = base.critical_field();
    let at = |d: f64| eta(&base.to_builder().field_b(bc - d).build().unwrap(), MagnonBranch::Minus).unwrap();
    let ratio = at(1e-12) / at(1e-10);
    assert!((ratio - 10.0).abs() < 0.05, "ratio {ratio}");
}

proptest! {
    #[test]
    fn branch_splitting_is_twice_the_field(
        b in 0.0f64..2.8, x in 0.0f64..10.0, ba in 0.01f64..0.5,
    ) {
        let p = BathParams::builder().anisotropy_ba(ba).field_b(b.min(0.9 * bath::critical_field(
            &BathParams::builder().anisotropy_ba(ba).build().unwrap()))).build().unwrap();
        let plus = magnon_frequency(&p, MagnonBranch::Plus, x).unwrap();
        let minus = magnon_frequency(&p, MagnonBranch::Minus, x).unwrap();
        prop_assert!((plus - minus - 2.0 * p.field_b()).abs() <= 1e-12 * plus.max(1.0));
    }

    #[test]
    fn dispersion_increases_with_wavenumber(x in 1e-6f64..10.0, dx in 1e-6f64..1.0, b in 0.0f64..2.8) {
        let p = params(b, 0.8);
        for branch in MagnonBranch::BOTH {
            prop_assert!(magnon_frequency(&p, branch, x + dx).unwrap() > magnon_frequency(&p, branch, x).unwrap());
        }
    }

    #[test]
    fn critical_field_closes_minus_gap(ba in 1e-4f64..1.0, mj in 5.0f64..200.0) {
        let base = BathParams::builder().anisotropy_ba(ba).exchange_j(mj / 6.0).build().unwrap();
        let bc = base.critical_field();
        prop_assert!(bc > 0.0);
        let at = base.to_builder().field_b(bc).build().unwrap();
        let w = magnon_frequency(&at, MagnonBranch::Minus, 0.0).unwrap();
        prop_assert!(w.abs() <= 1e-12 * at.exchange_scale());
    }

    #[test]
    fn decoherence_time_scales_inversely_with_coupling(j0 in 0.1f64..50.0, k in 1.1f64..8.0) {
        let p = BathParams::builder().coupling_j0(j0).build().unwrap();
        let q = p.to_builder().coupling_j0(k * j0).build().unwrap();
        let (a, b) = (decoherence_time(&p).unwrap(), decoherence_time(&q).unwrap());
        prop_assert!((b * k / a - 1.0).abs() < 1e-13);
    }
}
