use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use super::gmi::gmi_from_llrs;
use super::llr::compute_llrs;
use super::noise::NoiseModel;
use super::quadrature::gauss_hermite;
use crate::math::{self, LN_2, PI};
use crate::{Constellation4D, Point4, Result, SymbolBatch};

/// How [`awgn_gmi_reference`] evaluates the expectation over the noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AwgnMethod {
    /// Tensor-product Gauss–Hermite rule with `nodes` points per dimension.
    Quadrature { nodes: usize },
    /// End-to-end simulation through the IID demapper.
    MonteCarlo { symbols: usize, seed: u64 },
}

impl Default for AwgnMethod {
    fn default() -> Self {
        AwgnMethod::Quadrature { nodes: 10 }
    }
}

/// Per-dimension noise variance at `snr_db` = Es/N0 with `Es = 1` per 4D
/// symbol and `N0 = 2σ²` per complex dimension.
pub fn sigma2_for_snr_db(snr_db: f64) -> f64 {
    0.5 / math::db_to_linear(snr_db)
}

pub fn snr_db_for_sigma2(sigma2: f64) -> f64 {
    math::linear_to_db(0.5 / sigma2)
}

/// GMI of `c` over the 4D AWGN channel with a matched IID demapper.
pub fn awgn_gmi_reference(c: &Constellation4D, snr_db: f64, method: AwgnMethod) -> Result<f64> {
    let sigma2 = sigma2_for_snr_db(snr_db) * c.mean_energy();
    match method {
        AwgnMethod::Quadrature { nodes } => quadrature_gmi(c, sigma2, nodes),
        AwgnMethod::MonteCarlo { symbols, seed } => monte_carlo_gmi(c, sigma2, symbols, seed),
    }
}

fn quadrature_gmi(c: &Constellation4D, sigma2: f64, nodes: usize) -> Result<f64> {
    let (x, w) = gauss_hermite(nodes)?;
    let scale = math::sqrt(2.0 * sigma2);
    let norm = 1.0 / (PI * PI);
    let mut grid: Vec<(Point4, f64)> = Vec::with_capacity(nodes.pow(4));
    for a in 0..nodes {
        for b in 0..nodes {
            for d in 0..nodes {
                for e in 0..nodes {
                    let weight = w[a] * w[b] * w[d] * w[e] * norm;
                    grid.push(([x[a] * scale, x[b] * scale, x[d] * scale, x[e] * scale], weight));
                }
            }
        }
    }
    let m = c.bits_per_symbol() as usize;
    let size = c.size();
    let pts = c.points();
    let bit_of: Vec<u8> = (0..size)
        .flat_map(|row| (0..m as u32).map(move |k| c.bit(row, k)))
        .collect();
    let inv = 0.5 / sigma2;
    let mut expo = vec![0.0; size];
    let mut penalty = 0.0;
    for (i, s) in pts.iter().enumerate() {
        let diffs: Vec<Point4> = pts.iter().map(|p| core::array::from_fn(|k| s[k] - p[k])).collect();
        let mut acc = 0.0;
        for (z, weight) in &grid {
            let mut max = f64::NEG_INFINITY;
            for (j, d) in diffs.iter().enumerate() {
                let mut r2 = 0.0;
                for k in 0..4 {
                    let v = d[k] + z[k];
                    r2 += v * v;
                }
                let v = -r2 * inv;
                expo[j] = v;
                max = max.max(v);
            }
            let mut total = 0.0;
            let mut same = [0.0f64; 8];
            for (j, v) in expo.iter().enumerate() {
                let e = math::exp(v - max);
                total += e;
                for k in 0..m {
                    if bit_of[j * m + k] == bit_of[i * m + k] {
                        same[k] += e;
                    }
                }
            }
            let bits: f64 = same[..m].iter().map(|&s| math::ln(total / s)).sum();
            acc += weight * bits;
        }
        penalty += acc;
    }
    Ok(m as f64 - penalty / (size as f64 * LN_2))
}

fn monte_carlo_gmi(c: &Constellation4D, sigma2: f64, symbols: usize, seed: u64) -> Result<f64> {
    let m = c.bits_per_symbol() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = math::sqrt(sigma2);
    let mut idx = Vec::with_capacity(symbols);
    let mut tx = Vec::with_capacity(symbols);
    let mut rx = Vec::with_capacity(symbols);
    let mut bits = Vec::with_capacity(symbols * m);
    for _ in 0..symbols {
        let i = (rng.next_u64() % c.size() as u64) as usize;
        let s = c.points()[i];
        let y: Point4 = core::array::from_fn(|k| {
            let n: f64 = StandardNormal.sample(&mut rng);
            s[k] + sd * n
        });
        idx.push(i);
        tx.push(s);
        rx.push(y);
        bits.extend((0..m as u32).map(|k| c.bit(i, k)));
    }
    let batch = SymbolBatch::new(bits, idx, tx, rx)?;
    let llrs = compute_llrs(&batch, c, &NoiseModel::iid(sigma2)?)?;
    gmi_from_llrs(&llrs, m)
}
