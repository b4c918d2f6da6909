// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("beyond spin-flop critical field: B = {field} T >= B_c = {critical} T")]
    BeyondCriticalField { field: f64, critical: f64 },

    #[error("quasiperiod undefined at zero field (B = {field} T)")]
    ZeroField { field: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tolerance:e} after {intervals} intervals")]
    QuadratureNotConverged {
        estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error("eigenbranch matching is ambiguous at time step {step}")]
    Degenerate { step: usize },

    #[error("undefined phase: weighted overlap sum has zero magnitude")]
    UndefinedPhase,

    #[error("power-law fit failed: {0}")]
    Fit(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short machine-readable code used in sweep status columns.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid",
            Error::BeyondCriticalField { .. } => "beyond_critical",
            Error::ZeroField { .. } => "zero_field",
            Error::QuadratureNotConverged { .. } => "quadrature",
            Error::Degenerate { .. } => "degenerate",
            Error::UndefinedPhase => "undefined_phase",
            Error::Fit(_) => "fit",
        }
    }
}
