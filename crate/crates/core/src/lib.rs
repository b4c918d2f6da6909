// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

//! Geometric phase of a central spin qubit coupled through an Ising
//! interaction to an antiferromagnetic magnon bath in a uniform field.
//!
//! Layers, bottom up:
//!
//! * [`quadrature`]: adaptive Gauss–Kronrod integration.
//! * [`bath`]: magnon dispersion, thermal integrals, decoherence time and
//!   the spin-flop critical field.
//! * [`qubit`]: reduced density matrix of the qubit and its eigensystem.
//! * [`phase`]: closed-form geometric phase and a trajectory oracle.
//! * [`analysis`]: sweeps, figure grids and scaling fits.
//!
//! Units throughout: g·μB = k_B = ħ = 1, fields and temperatures in Tesla,
//! times in inverse Tesla.

pub mod analysis;
pub mod bath;
pub mod error;
pub mod parallel;
pub mod phase;
pub mod quadrature;
pub mod qubit;

pub use bath::{BathParams, MagnonBranch};
pub use error::{Error, Result};
pub use parallel::Execution;
pub use phase::{GpMethod, GpResult, Tolerances, Trajectory};
pub use qubit::{DensityMatrix2, EigenSystem2, InitialState};
