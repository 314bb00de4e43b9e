//! Grid search over the free geometry of 4D-64PRS.

use alloc::vec::Vec;

use crate::constellation::{build_4d64prs, build_6b4d_2a8psk, PrsParams};
use crate::demapper::{awgn_gmi_reference, AwgnMethod};
use crate::{Error, Result};

/// Inclusive search ranges; `steps == 1` evaluates only the lower end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrsGrid {
    pub rho: (f64, f64),
    pub theta: (f64, f64),
    pub rho_steps: usize,
    pub theta_steps: usize,
}

/// Es/N0 in dB at which 4D-64PRS with its default geometry reaches about
/// 4.55 bit/4D-sym. The shipped defaults are optimal here.
pub const DESIGN_SNR_DB: f64 = 9.86;

/// Quadrature used to derive the shipped defaults.
pub const DESIGN_METHOD: AwgnMethod = AwgnMethod::Quadrature { nodes: 8 };

/// Candidate ring ratios for 6b4D-2A8PSK: 1.1 to 2.0 in steps of 0.1.
pub fn default_ring_ratios() -> Vec<f64> {
    (11..=20).map(|k| k as f64 / 10.0).collect()
}

impl Default for PrsGrid {
    fn default() -> Self {
        PrsGrid {
            rho: (0.3, 0.8),
            theta: (0.25, 0.55),
            rho_steps: 11,
            theta_steps: 13,
        }
    }
}

fn linspace(range: (f64, f64), steps: usize) -> impl Iterator<Item = f64> {
    let (lo, hi) = range;
    let div = (steps.max(2) - 1) as f64;
    (0..steps).map(move |i| if steps == 1 { lo } else { lo + (hi - lo) * i as f64 / div })
}

impl PrsGrid {
    /// Grid points in search order: `rho` ascending, then `theta` ascending.
    pub fn points(&self) -> Vec<PrsParams> {
        linspace(self.rho, self.rho_steps)
            .flat_map(|rho| linspace(self.theta, self.theta_steps).map(move |theta| PrsParams { rho, theta }))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrsOptimum {
    pub params: PrsParams,
    pub gmi: f64,
}

/// AWGN GMI of every non-degenerate grid point.
pub fn evaluate_prs_grid(snr_db: f64, grid: &PrsGrid, method: AwgnMethod) -> Result<Vec<PrsOptimum>> {
    let mut out = Vec::new();
    for params in grid.points() {
        if params.validate().is_err() {
            continue;
        }
        let c = match build_4d64prs(params) {
            Ok(c) => c,
            Err(Error::DegenerateGeometry { .. }) => continue,
            Err(e) => return Err(e),
        };
        out.push(PrsOptimum {
            params,
            gmi: awgn_gmi_reference(&c, snr_db, method)?,
        });
    }
    Ok(out)
}

/// Grid point with the largest AWGN GMI at `snr_db`. Ties go to the
/// smaller `rho`, then the smaller `theta`.
pub fn optimize_prs_params(snr_db: f64, grid: &PrsGrid, method: AwgnMethod) -> Result<PrsOptimum> {
    pick_best(evaluate_prs_grid(snr_db, grid, method)?)
}

fn pick_best(mut candidates: Vec<PrsOptimum>) -> Result<PrsOptimum> {
    candidates.sort_by(|a, b| {
        b.gmi
            .total_cmp(&a.gmi)
            .then(a.params.rho.total_cmp(&b.params.rho))
            .then(a.params.theta.total_cmp(&b.params.theta))
    });
    candidates.first().copied().ok_or(Error::EmptyGrid)
}

/// Ring ratio of 6b4D-2A8PSK with the largest AWGN GMI; ties go to the
/// smaller ratio.
pub fn optimize_ring_ratio(snr_db: f64, ratios: &[f64], method: AwgnMethod) -> Result<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for &r in ratios {
        let g = awgn_gmi_reference(&build_6b4d_2a8psk(r)?, snr_db, method)?;
        best = match best {
            Some((br, bg)) if bg > g || (bg == g && br <= r) => Some((br, bg)),
            _ => Some((r, g)),
        };
    }
    best.ok_or(Error::EmptyGrid)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FAST: AwgnMethod = AwgnMethod::Quadrature { nodes: 5 };

    #[test]
    fn single_point_grid_returns_that_point() {
        let grid = PrsGrid {
            rho: (1.4, 1.4),
            theta: (0.3, 0.3),
            rho_steps: 1,
            theta_steps: 1,
        };
        let best = optimize_prs_params(8.0, &grid, FAST).unwrap();
        assert_eq!(best.params, PrsParams { rho: 1.4, theta: 0.3 });
    }

    #[test]
    fn all_degenerate_grid_is_an_error() {
        let grid = PrsGrid {
            rho: (1.0, 2.0),
            theta: (0.0, 0.0),
            rho_steps: 3,
            theta_steps: 1,
        };
        assert_eq!(optimize_prs_params(8.0, &grid, FAST), Err(Error::EmptyGrid));
    }

    #[test]
    fn ties_prefer_smaller_rho_then_theta() {
        let p = |rho, theta| PrsOptimum {
            params: PrsParams { rho, theta },
            gmi: 4.0,
        };
        let best = pick_best(std::vec![p(2.0, 0.1), p(1.5, 0.4), p(1.5, 0.2)]).unwrap();
        assert_eq!(best.params, PrsParams { rho: 1.5, theta: 0.2 });
    }

    #[test]
    fn optimum_dominates_every_grid_point() {
        let grid = PrsGrid {
            rho: (1.0, 2.2),
            theta: (0.1, 0.7),
            rho_steps: 4,
            theta_steps: 4,
        };
        let best = optimize_prs_params(9.0, &grid, FAST).unwrap();
        for p in grid.points() {
            if let Ok(c) = build_4d64prs(p) {
                let g = awgn_gmi_reference(&c, 9.0, FAST).unwrap();
                assert!(best.gmi >= g);
            }
        }
    }
}
