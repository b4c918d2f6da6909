// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

//! Reduced dynamics of the central qubit under pure Gaussian dephasing.
//!
//! States are written in the ordered basis (|e⟩, |g⟩).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Two-component state vector, `[⟨e|ψ⟩, ⟨g|ψ⟩]`.
pub type Ket = [Complex64; 2];

/// Eigenvalue splitting below which a state is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Pure initial state sin(θ0/2)|e⟩ + cos(θ0/2)|g⟩ on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialState {
    theta0: f64,
}

impl InitialState {
    pub fn new(theta0: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta0) {
            return Err(Error::invalid(
                "theta0",
                format!("must lie in [0, pi], got {theta0}"),
            ));
        }
        Ok(InitialState { theta0 })
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// sin θ0, exactly zero at both poles.
    pub fn sin_theta(&self) -> f64 {
        if self.theta0 > std::f64::consts::FRAC_PI_2 {
            (std::f64::consts::PI - self.theta0).sin()
        } else {
            self.theta0.sin()
        }
    }

    /// cos θ0, exactly zero at θ0 = π/2.
    pub fn cos_theta(&self) -> f64 {
        (std::f64::consts::FRAC_PI_2 - self.theta0).sin()
    }

    /// Excited-state population sin²(θ0/2).
    pub fn excited_population(&self) -> f64 {
        let (s, c) = (self.sin_theta(), self.cos_theta());
        if c >= 0.0 {
            0.5 * s * s / (1.0 + c)
        } else {
            0.5 * (1.0 - c)
        }
    }

    /// Ground-state population cos²(θ0/2).
    pub fn ground_population(&self) -> f64 {
        let (s, c) = (self.sin_theta(), self.cos_theta());
        if c >= 0.0 {
            0.5 * (1.0 + c)
        } else {
            0.5 * s * s / (1.0 - c)
        }
    }
}

/// A 2×2 qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    pub ee: Complex64,
    pub eg: Complex64,
    pub ge: Complex64,
    pub gg: Complex64,
}

impl DensityMatrix2 {
    pub fn trace(&self) -> Complex64 {
        self.ee + self.gg
    }

    /// tr(ρ²).
    pub fn purity(&self) -> f64 {
        (self.ee * self.ee + self.eg * self.ge + self.ge * self.eg + self.gg * self.gg).re
    }

    pub fn apply(&self, v: &Ket) -> Ket {
        [
            self.ee * v[0] + self.eg * v[1],
            self.ge * v[0] + self.gg * v[1],
        ]
    }

    /// Bloch vector r with ρ = (tr ρ · I + r·σ)/2.
    pub fn bloch_vector(&self) -> [f64; 3] {
        [2.0 * self.eg.re, -2.0 * self.eg.im, (self.ee - self.gg).re]
    }

    /// Checks hermiticity, unit trace and positivity at the given tolerance.
    pub fn is_physical(&self, tol: f64) -> bool {
        let hermitian = (self.ge - self.eg.conj()).norm() <= tol
            && self.ee.im.abs() <= tol
            && self.gg.im.abs() <= tol;
        let trace = (self.trace() - 1.0).norm() <= tol;
        hermitian && trace && self.eigen_decompose().eps_minus >= -tol
    }

    /// Generic Hermitian eigen-decomposition via the Bloch vector.
    ///
    /// Does not use any knowledge of how the state was produced; eigenvector
    /// gauge follows [`EigenSystem2`].
    pub fn eigen_decompose(&self) -> EigenSystem2 {
        let [rx, ry, rz] = self.bloch_vector();
        let r = (rx * rx + ry * ry + rz * rz).sqrt();
        let half_trace = 0.5 * self.trace().re;
        if r <= DEGENERACY_TOL {
            return canonical_basis(self.ee.re, self.gg.re, half_trace + 0.5 * r, half_trace - 0.5 * r);
        }
        let plus: Ket = if rz >= 0.0 {
            [Complex64::new(r + rz, 0.0), Complex64::new(rx, ry)]
        } else {
            [Complex64::new(rx, -ry), Complex64::new(r - rz, 0.0)]
        };
        let minus: Ket = [-plus[1].conj(), plus[0].conj()];
        EigenSystem2 {
            eps_plus: half_trace + 0.5 * r,
            eps_minus: half_trace - 0.5 * r,
            v_plus: fix_gauge(plus),
            v_minus: fix_gauge(minus),
        }
    }
}

/// Eigenvalues (descending) and matching orthonormal eigenvectors of a
/// qubit density matrix.
///
/// Gauge: each vector's |g⟩ component is real and nonnegative; if that
/// component vanishes, the |e⟩ component is made real and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem2 {
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub v_plus: Ket,
    pub v_minus: Ket,
}

fn canonical_basis(ee: f64, gg: f64, eps_plus: f64, eps_minus: f64) -> EigenSystem2 {
    let e: Ket = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let g: Ket = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let (v_plus, v_minus) = if ee >= gg { (e, g) } else { (g, e) };
    EigenSystem2 {
        eps_plus,
        eps_minus,
        v_plus,
        v_minus,
    }
}

fn fix_gauge(v: Ket) -> Ket {
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let pivot = if v[1].norm() > 0.0 { v[1] } else { v[0] };
    let phase = pivot.conj() / pivot.norm();
    [v[0] * phase / norm, v[1] * phase / norm]
}

pub fn inner(a: &Ket, b: &Ket) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// Coherence envelope e^{−(t/τ0)²}; identically 1 for τ0 = ∞.
fn envelope(tau0: f64, t: f64) -> f64 {
    let u = t / tau0;
    (-u * u).exp()
}

/// ρ(t) for Gaussian dephasing with precession at field `b`.
pub fn reduced_density_matrix(init: &InitialState, b: f64, tau0: f64, t: f64) -> DensityMatrix2 {
    let coherence = Complex64::from_polar(0.5 * init.sin_theta() * envelope(tau0, t), -b * t);
    DensityMatrix2 {
        ee: Complex64::new(init.excited_population(), 0.0),
        eg: coherence,
        ge: coherence.conj(),
        gg: Complex64::new(init.ground_population(), 0.0),
    }
}

/// Closed-form eigenvalues ε±(t) = ½ ± ½·√(cos²θ0 + e^{−2t²/τ0²} sin²θ0).
pub fn eigenvalues(init: &InitialState, tau0: f64, t: f64) -> (f64, f64) {
    let r = bloch_length(init, envelope(tau0, t).powi(2));
    (0.5 + 0.5 * r, 0.5 - 0.5 * r)
}

fn bloch_length(init: &InitialState, decay: f64) -> f64 {
    let (s, c) = (init.sin_theta(), init.cos_theta());
    (c * c + decay * s * s).sqrt()
}

/// 2(ε₊ − sin²(θ0/2)) evaluated without cancellation, given e^{−2t²/τ0²}.
pub(crate) fn upper_branch_weight(init: &InitialState, decay: f64) -> f64 {
    let (s, c) = (init.sin_theta(), init.cos_theta());
    let r = bloch_length(init, decay);
    if c >= 0.0 {
        c + r
    } else {
        decay * s * s / (r - c)
    }
}

/// Closed-form spectral decomposition of [`reduced_density_matrix`].
pub fn eigensystem(init: &InitialState, tau0: f64, b: f64, t: f64) -> EigenSystem2 {
    let env = envelope(tau0, t);
    let decay = env * env;
    let (eps_plus, eps_minus) = eigenvalues(init, tau0, t);
    if init.sin_theta() == 0.0 || eps_plus - eps_minus < DEGENERACY_TOL {
        return canonical_basis(
            init.excited_population(),
            init.ground_population(),
            eps_plus,
            eps_minus,
        );
    }
    // Components (sinθ0·env·e^{−iBt}, 2(ε − sin²(θ0/2))). For the branch whose
    // |g⟩ weight is O(env²) both components are divided by env so strongly
    // dephased states do not underflow to a zero vector.
    let (s, c) = (init.sin_theta(), init.cos_theta());
    let r = (c * c + decay * s * s).sqrt();
    let vector = |e_mag: f64, g_weight: f64| {
        fix_gauge([
            Complex64::from_polar(e_mag, -b * t),
            Complex64::new(g_weight, 0.0),
        ])
    };
    let v_plus = if c >= 0.0 {
        vector(s * env, c + r)
    } else {
        vector(s, env * s * s / (r - c))
    };
    let v_minus = if c <= 0.0 {
        vector(s * env, c - r)
    } else {
        vector(s, -env * s * s / (r + c))
    };
    EigenSystem2 {
        eps_plus,
        eps_minus,
        v_plus,
        v_minus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn state(theta: f64) -> InitialState {
        InitialState::new(theta).unwrap()
    }

    #[test]
    fn theta_range_enforced() {
        assert!(InitialState::new(-0.1).is_err());
        assert!(InitialState::new(PI + 1e-9).is_err());
        assert!(InitialState::new(f64::NAN).is_err());
        assert!(InitialState::new(PI).is_ok());
        assert_eq!(state(PI).sin_theta(), 0.0);
        assert_eq!(state(0.0).sin_theta(), 0.0);
    }

    #[test]
    fn equal_superposition_at_start() {
        let rho = reduced_density_matrix(&state(FRAC_PI_2), 0.7, f64::INFINITY, 0.0);
        for z in [rho.ee, rho.eg, rho.ge, rho.gg] {
            assert_relative_eq!(z.re, 0.5, max_relative = 1e-15);
            assert!(z.im.abs() < 1e-16);
        }
    }

    #[test]
    fn ground_state_has_no_coherence() {
        for t in [0.0, 1.0, 50.0] {
            let rho = reduced_density_matrix(&state(0.0), 0.5, 2.0, t);
            assert_eq!(rho.ee.re, 0.0);
            assert_eq!(rho.gg.re, 1.0);
            assert_eq!(rho.eg.norm(), 0.0);
        }
    }

    #[test]
    fn coherence_magnitude() {
        let rho = reduced_density_matrix(&state(FRAC_PI_2), 1.0, 1.0, 1.0);
        assert_relative_eq!(rho.eg.norm(), (-1.0f64).exp() / 2.0, max_relative = 1e-14);
        assert!((rho.eg.norm() - 0.18394).abs() < 1e-5);
    }

    #[test]
    fn pure_at_start() {
        for theta in [0.0, 0.4, 1.3, FRAC_PI_2, 2.5, PI] {
            let es = eigensystem(&state(theta), 2.0, 0.5, 0.0);
            assert_relative_eq!(es.eps_plus, 1.0, max_relative = 1e-15);
            assert!(es.eps_minus.abs() < 1e-15);
        }
    }

    #[test]
    fn fully_dephased_is_maximally_mixed() {
        let es = eigensystem(&state(FRAC_PI_2), 1.0, 0.5, 40.0);
        assert_eq!(es.eps_plus, 0.5);
        assert_eq!(es.eps_minus, 0.5);
        // degenerate: canonical basis, |e⟩ first on equal populations
        assert_eq!(es.v_plus[0].re, 1.0);
    }

    #[test]
    fn pole_states_use_canonical_basis() {
        let es = eigensystem(&state(PI), 1.0, 0.5, 0.3);
        assert_eq!(es.v_plus, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let es = eigensystem(&state(0.0), 1.0, 0.5, 0.3);
        assert_eq!(es.v_plus, [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn closed_form_matches_numeric_decomposition() {
        let init = state(1.3);
        let (tau0, b, t) = (2.0, 0.5, 1.0);
        let rho = reduced_density_matrix(&init, b, tau0, t);
        let closed = eigensystem(&init, tau0, b, t);
        let numeric = rho.eigen_decompose();
        assert_relative_eq!(closed.eps_plus, numeric.eps_plus, epsilon = 1e-14);
        assert_relative_eq!(closed.eps_minus, numeric.eps_minus, epsilon = 1e-14);
        for (u, v) in [(closed.v_plus, numeric.v_plus), (closed.v_minus, numeric.v_minus)] {
            assert!((u[0] - v[0]).norm() < 1e-12 && (u[1] - v[1]).norm() < 1e-12);
        }
        for (eps, v) in [(closed.eps_plus, closed.v_plus), (closed.eps_minus, closed.v_minus)] {
            let w = rho.apply(&v);
            assert!((w[0] - eps * v[0]).norm() < 1e-12 && (w[1] - eps * v[1]).norm() < 1e-12);
        }
    }

    #[test]
    fn physical_state() {
        let rho = reduced_density_matrix(&state(2.0), 1.2, 0.9, 0.4);
        assert!(rho.is_physical(1e-12));
        let bad = DensityMatrix2 {
            ee: Complex64::new(1.5, 0.0),
            gg: Complex64::new(-0.5, 0.0),
            ..rho
        };
        assert!(!bad.is_physical(1e-12));
    }
}
