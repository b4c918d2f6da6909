// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

//! Parameter grids and curve families for the reference figures.
//!
//! All figures share M = 6, S = 1/2 and MJ = 40 T; coupled curves use
//! J0 = 2.5 J.

use std::fmt;
use std::str::FromStr;

use serde_json::json;

use super::sweep::{base_metadata, evaluate_point, result_values, SweepParam, RESULT_COLUMNS};
use super::table::{RowStatus, SweepTable};
use crate::bath::BathParams;
use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::phase::Tolerances;
use crate::qubit::InitialState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    /// Phase against θ0 at B = 0.5 T.
    Fig1,
    /// Phase against B at θ0 = 1.3.
    Fig2,
    /// (B, T) surface at B_A = 0.10 T.
    Fig3,
    /// (B, T) surface at B_A = 0.15 T.
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    /// Points per axis used when no resolution is given.
    pub fn default_resolution(self) -> usize {
        match self {
            Figure::Fig1 | Figure::Fig2 => 200,
            Figure::Fig3 | Figure::Fig4 => 80,
        }
    }

    pub fn anisotropy(self) -> f64 {
        match self {
            Figure::Fig4 => 0.15,
            _ => 0.10,
        }
    }

    /// `(J0 / J, T)` for each curve.
    pub fn curves(self) -> Vec<(f64, f64)> {
        match self {
            Figure::Fig1 => vec![(0.0, 0.8), (2.5, 0.8), (2.5, 1.2)],
            Figure::Fig2 => vec![(0.0, 0.8), (2.5, 0.8), (2.5, 1.5)],
            Figure::Fig3 | Figure::Fig4 => vec![(2.5, f64::NAN)],
        }
    }

    pub fn base_params(self) -> BathParams {
        BathParams::builder()
            .coordination_m(6)
            .spin_s(0.5)
            .exchange_j(40.0 / 6.0)
            .anisotropy_ba(self.anisotropy())
            .field_b(0.5)
            .temperature_t(0.8)
            .build()
            .expect("reference parameters are valid")
    }

    pub fn base_state(self) -> InitialState {
        InitialState::new(1.3).expect("reference angle is valid")
    }

    pub fn axes(self) -> Vec<SweepParam> {
        match self {
            Figure::Fig1 => vec![SweepParam::Theta0],
            Figure::Fig2 => vec![SweepParam::FieldB],
            Figure::Fig3 | Figure::Fig4 => vec![SweepParam::FieldB, SweepParam::TemperatureT],
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid("figure", format!("expected fig1..fig4, got `{s}`")))
    }
}

/// `n` points on `(0, stop]`.
fn open_grid(stop: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| stop * i as f64 / n as f64).collect()
}

fn closed_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                stop
            } else {
                start + (stop - start) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

pub fn figure_data(figure: Figure) -> SweepTable {
    figure_data_with(figure, None, Tolerances::default(), Execution::default())
}

/// Table columns: `curve`, the five sweepable parameters, then the result
/// columns. Over-critical cells are clamped below `B_c`.
pub fn figure_data_with(
    figure: Figure,
    resolution: Option<usize>,
    tol: Tolerances,
    exec: Execution,
) -> SweepTable {
    let n = resolution.unwrap_or_else(|| figure.default_resolution()).max(2);
    let base = figure.base_params();
    let init = figure.base_state();
    let j = base.exchange_j();

    let mut cells: Vec<(usize, Result<(BathParams, InitialState)>)> = Vec::new();
    for (curve, (ratio, temperature)) in figure.curves().into_iter().enumerate() {
        let with = |b: f64, t: f64, theta: f64| -> Result<(BathParams, InitialState)> {
            let p = base
                .to_builder()
                .coupling_j0(ratio * j)
                .field_b(b)
                .temperature_t(t)
                .build()?;
            Ok((p, InitialState::new(theta)?))
        };
        match figure {
            Figure::Fig1 => {
                for theta in closed_grid(0.0, std::f64::consts::PI, n) {
                    cells.push((curve, with(0.5, temperature, theta)));
                }
            }
            Figure::Fig2 => {
                for b in open_grid(3.0, n) {
                    cells.push((curve, with(b, temperature, init.theta0())));
                }
            }
            Figure::Fig3 | Figure::Fig4 => {
                for b in open_grid(3.0, n) {
                    for t in open_grid(2.5, n) {
                        cells.push((curve, with(b, t, init.theta0())));
                    }
                }
            }
        }
    }

    let results = parallel::map_ordered(&cells, exec, |(_, cell)| match cell {
        Ok((p, i)) => evaluate_point(p, i, true, tol),
        Err(e) => (None, RowStatus::Error(e.code())),
    });

    let mut columns = vec!["curve".to_string()];
    columns.extend(SweepParam::ALL.iter().map(|p| p.name().to_string()));
    columns.extend(RESULT_COLUMNS.iter().map(|c| c.to_string()));
    let axes = figure.axes().iter().map(|p| p.name().to_string()).collect();
    let mut table = SweepTable::new(columns, axes);
    table.metadata.params = base_metadata(&base, &init, true, tol);
    table.metadata.params.insert("figure".into(), json!(figure.name()));
    table.metadata.params.insert("curves_j0_over_j_and_t".into(), json!(figure
        .curves()
        .iter()
        .map(|(r, t)| vec![json!(r), if t.is_finite() { json!(t) } else { json!(null) }])
        .collect::<Vec<_>>()));

    for ((curve, cell), (result, status)) in cells.iter().zip(results) {
        let mut row = vec![*curve as f64];
        match cell {
            Ok((p, i)) => row.extend(SweepParam::ALL.iter().map(|sp| sp.value(p, i))),
            Err(_) => row.extend([f64::NAN; 5]),
        }
        row.extend(result_values(result.as_ref()));
        table.push_row(row, status);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!("fig5".parse::<Figure>().is_err());
    }

    #[test]
    fn grid_shapes() {
        let t = figure_data_with(Figure::Fig2, Some(10), Tolerances::default(), Execution::default());
        assert_eq!(t.len(), 30);
        let t = figure_data_with(Figure::Fig3, Some(6), Tolerances::default(), Execution::default());
        assert_eq!(t.len(), 36);
        assert!(t.status().iter().all(|s| *s != RowStatus::Error("beyond_critical")));
        assert!(t.status().contains(&RowStatus::Clamped));
    }

    #[test]
    fn critical_fields_of_the_surfaces() {
        assert!((Figure::Fig3.base_params().critical_field() - 2.83).abs() < 0.01);
        assert!((Figure::Fig4.base_params().critical_field() - 3.47).abs() < 0.01);
    }
}
