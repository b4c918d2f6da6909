// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps, reference-figure grids and power-law scaling fits.

pub mod figures;
pub mod fit;
pub mod sweep;
pub mod table;

pub use figures::{figure_data, figure_data_with, Figure};
pub use fit::{critical_scaling, fit_power_law, zero_field_scaling, FitSide, FitWindow, PowerLawFit, ScalingReport};
pub use sweep::{evaluate_point, run_sweep, run_sweep_with, Axis, Spacing, SweepParam, SweepSpec};
pub use table::{RowStatus, SweepTable, TableMetadata};
