//! Data-aided ("genie") receiver corrections: common phase per polarization
//! and a real amplitude scale, both estimated against the transmitted
//! symbols.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;
use crate::{Error, Point4, Result};

/// Window over which one common phase per polarization is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseWindow {
    /// One phase for the whole burst.
    Burst,
    Symbols(usize),
}

impl PhaseWindow {
    fn len(self, total: usize) -> usize {
        match self {
            PhaseWindow::Burst => total.max(1),
            PhaseWindow::Symbols(w) => w.max(1),
        }
    }
}

#[inline]
fn pol(p: &Point4, k: usize) -> Complex64 {
    Complex64::new(p[2 * k], p[2 * k + 1])
}

/// Least-squares common phase `arg Σ rx·conj(tx)` for each window and
/// polarization. Windows with zero correlation report `None`.
pub fn estimate_phases(
    rx: &[Point4],
    tx: &[Point4],
    window: PhaseWindow,
) -> Result<Vec<[Option<f64>; 2]>> {
    if rx.len() != tx.len() {
        return Err(Error::LengthMismatch {
            expected: tx.len(),
            actual: rx.len(),
        });
    }
    let w = window.len(rx.len());
    Ok(rx
        .chunks(w)
        .zip(tx.chunks(w))
        .map(|(r, t)| {
            let mut out = [None; 2];
            for (k, slot) in out.iter_mut().enumerate() {
                let acc: Complex64 = r.iter().zip(t).map(|(a, b)| pol(a, k) * pol(b, k).conj()).sum();
                if acc.norm_sqr() > 0.0 {
                    *slot = Some(math::atan2(acc.im, acc.re));
                }
            }
            out
        })
        .collect())
}

/// Rotates each polarization of `rx` by the negative of its windowed
/// least-squares phase. Per-symbol magnitudes are untouched.
pub fn compensate_phase(rx: &[Point4], tx: &[Point4], window: PhaseWindow) -> Result<Vec<Point4>> {
    let phases = estimate_phases(rx, tx, window)?;
    let w = window.len(rx.len());
    let mut out = Vec::with_capacity(rx.len());
    for (chunk, ph) in rx.chunks(w).zip(&phases) {
        let rot = ph.map(|p| p.map(|phi| Complex64::new(math::cos(phi), -math::sin(phi))));
        for p in chunk {
            let mut q = *p;
            for (k, r) in rot.iter().enumerate() {
                if let Some(r) = r {
                    let z = pol(p, k) * r;
                    q[2 * k] = z.re;
                    q[2 * k + 1] = z.im;
                }
            }
            out.push(q);
        }
    }
    Ok(out)
}

/// How the real amplitude scale is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleEstimator {
    /// Fit `rx ≈ g·tx` and return `1/g`; the scaled received symbols are
    /// centred on the constellation points.
    #[default]
    ChannelGain,
    /// Minimize `Σ‖a·rx − tx‖²`; shrinks noisy symbols toward the origin.
    Lmmse,
}

/// Real scale `a` to apply to `rx` so it lives on the constellation scale.
pub fn fit_scale(rx: &[Point4], tx: &[Point4], estimator: ScaleEstimator) -> Result<f64> {
    if rx.len() != tx.len() {
        return Err(Error::LengthMismatch {
            expected: tx.len(),
            actual: rx.len(),
        });
    }
    let mut cross = 0.0;
    let mut rx_energy = 0.0;
    let mut tx_energy = 0.0;
    for (r, t) in rx.iter().zip(tx) {
        for k in 0..4 {
            cross += r[k] * t[k];
            rx_energy += r[k] * r[k];
            tx_energy += t[k] * t[k];
        }
    }
    if rx_energy == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    match estimator {
        ScaleEstimator::Lmmse => Ok(cross / rx_energy),
        ScaleEstimator::ChannelGain if cross == 0.0 => Err(Error::ZeroEnergy),
        ScaleEstimator::ChannelGain => Ok(tx_energy / cross),
    }
}

pub fn apply_scale(rx: &[Point4], tx: &[Point4], estimator: ScaleEstimator) -> Result<Vec<Point4>> {
    let a = fit_scale(rx, tx, estimator)?;
    Ok(rx.iter().map(|p| p.map(|v| v * a)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    use std::vec::Vec;

    fn random_points(n: usize, seed: u64) -> Vec<Point4> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| core::array::from_fn(|_| StandardNormal.sample(&mut rng)))
            .collect()
    }

    fn rotate(p: &Point4, phi: [f64; 2]) -> Point4 {
        let mut q = *p;
        for k in 0..2 {
            let z = pol(p, k) * Complex64::from_polar(1.0, phi[k]);
            q[2 * k] = z.re;
            q[2 * k + 1] = z.im;
        }
        q
    }

    #[test]
    fn recovers_constant_rotation() {
        let tx = random_points(500, 1);
        let rx: Vec<Point4> = tx.iter().map(|p| rotate(p, [0.3, 0.3])).collect();
        let ph = estimate_phases(&rx, &tx, PhaseWindow::Burst).unwrap();
        assert!((ph[0][0].unwrap() - 0.3).abs() < 1e-12);
        assert!((ph[0][1].unwrap() - 0.3).abs() < 1e-12);
        let out = compensate_phase(&rx, &tx, PhaseWindow::Burst).unwrap();
        for (a, b) in out.iter().zip(&tx) {
            assert!(math::dist_sqr(a, b) < 1e-24);
        }
    }

    #[test]
    fn identity_when_unrotated() {
        let tx = random_points(100, 2);
        let out = compensate_phase(&tx, &tx, PhaseWindow::Symbols(16)).unwrap();
        for (a, b) in out.iter().zip(&tx) {
            assert!(math::dist_sqr(a, b) < 1e-28);
        }
    }

    #[test]
    fn zero_energy_window_is_skipped() {
        let tx = random_points(8, 3);
        let mut rx = tx.clone();
        for p in &mut rx[..4] {
            *p = [0.0; 4];
        }
        let ph = estimate_phases(&rx, &tx, PhaseWindow::Symbols(4)).unwrap();
        assert_eq!(ph[0], [None, None]);
        assert!(ph[1][0].is_some());
        let out = compensate_phase(&rx, &tx, PhaseWindow::Symbols(4)).unwrap();
        assert_eq!(out[0], [0.0; 4]);
    }

    #[test]
    fn windowed_tracking_beats_burst_on_drifting_phase() {
        let n = 4096;
        let tx = random_points(n, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut walk = 0.0;
        let truth: Vec<f64> = (0..n)
            .map(|_| {
                let step: f64 = StandardNormal.sample(&mut rng);
                walk += 0.01 * step;
                walk
            })
            .collect();
        let rx: Vec<Point4> = tx
            .iter()
            .zip(&truth)
            .map(|(p, &phi)| rotate(p, [phi, phi]))
            .collect();
        let residual = |w: PhaseWindow| {
            let ph = estimate_phases(&rx, &tx, w).unwrap();
            let len = w.len(n);
            truth
                .iter()
                .enumerate()
                .map(|(i, phi)| (phi - ph[i / len][0].unwrap()).powi(2))
                .sum::<f64>()
                / n as f64
        };
        assert!(residual(PhaseWindow::Symbols(64)) < residual(PhaseWindow::Burst));
    }

    #[test]
    fn magnitudes_are_preserved() {
        let tx = random_points(256, 6);
        let rx = random_points(256, 7);
        let out = compensate_phase(&rx, &tx, PhaseWindow::Symbols(32)).unwrap();
        for (a, b) in out.iter().zip(&rx) {
            for k in 0..2 {
                assert!((pol(a, k).norm() - pol(b, k).norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scale_of_doubled_block() {
        let tx = random_points(64, 8);
        let rx: Vec<Point4> = tx.iter().map(|p| p.map(|v| 2.0 * v)).collect();
        for est in [ScaleEstimator::ChannelGain, ScaleEstimator::Lmmse] {
            assert!((fit_scale(&rx, &tx, est).unwrap() - 0.5).abs() < 1e-15);
            assert!((fit_scale(&tx, &tx, est).unwrap() - 1.0).abs() < 1e-15);
            let out = apply_scale(&rx, &tx, est).unwrap();
            for (a, b) in out.iter().zip(&tx) {
                assert!(math::dist_sqr(a, b) < 1e-26);
            }
        }
    }

    #[test]
    fn all_zero_rx_is_an_error() {
        let tx = random_points(4, 9);
        assert_eq!(
            fit_scale(&[[0.0; 4]; 4], &tx, ScaleEstimator::ChannelGain),
            Err(Error::ZeroEnergy)
        );
    }

    /// Bisection on the sign of a monotone gradient.
    fn bisect_root(grad: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if grad(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn scale_matches_iterative_least_squares() {
        let tx = random_points(2000, 10);
        let noise = random_points(2000, 11);
        let rx: Vec<Point4> = tx
            .iter()
            .zip(&noise)
            .map(|(t, n)| core::array::from_fn(|k| 1.7 * t[k] + 0.3 * n[k]))
            .collect();
        // d/da Σ‖a·rx − tx‖² and d/dg Σ‖rx − g·tx‖², summed sample by sample
        let lmmse = bisect_root(
            |a| {
                rx.iter()
                    .zip(&tx)
                    .map(|(r, t)| (0..4).map(|k| (a * r[k] - t[k]) * r[k]).sum::<f64>())
                    .sum()
            },
            0.0,
            2.0,
        );
        let gain = bisect_root(
            |g| {
                rx.iter()
                    .zip(&tx)
                    .map(|(r, t)| (0..4).map(|k| (g * t[k] - r[k]) * t[k]).sum::<f64>())
                    .sum()
            },
            0.0,
            4.0,
        );
        assert!((fit_scale(&rx, &tx, ScaleEstimator::Lmmse).unwrap() - lmmse).abs() < 1e-12);
        assert!((fit_scale(&rx, &tx, ScaleEstimator::ChannelGain).unwrap() - 1.0 / gain).abs() < 1e-12);
    }
}
