use alloc::vec;
use alloc::vec::Vec;

use super::noise::NoiseModel;
use crate::linalg::Cholesky;
use crate::math::{self, PI};
use crate::{Constellation4D, Error, Result, SymbolBatch, DIMS};

/// LLR magnitude clamp in nats.
pub const DEFAULT_LLR_CLAMP: f64 = 50.0;

/// Per-bit LLRs for a block of symbols, row-major `Ns × m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrBatch {
    pub llrs: Vec<f64>,
    pub bits: Vec<u8>,
    pub bits_per_symbol: usize,
}

impl LlrBatch {
    pub fn new(llrs: Vec<f64>, bits: Vec<u8>, bits_per_symbol: usize) -> Result<Self> {
        if llrs.len() != bits.len() {
            return Err(Error::LengthMismatch {
                expected: bits.len(),
                actual: llrs.len(),
            });
        }
        if bits_per_symbol == 0 || !llrs.len().is_multiple_of(bits_per_symbol) {
            return Err(Error::BitCount {
                len: llrs.len(),
                bits_per_symbol: bits_per_symbol as u32,
            });
        }
        Ok(Self {
            llrs,
            bits,
            bits_per_symbol,
        })
    }

    pub fn symbols(&self) -> usize {
        self.llrs.len() / self.bits_per_symbol
    }
}

/// `ln N(y; s, Σ)` through a Cholesky factorization of `Σ`.
pub fn gaussian_logpdf<const N: usize>(
    y: &[f64; N],
    s: &[f64; N],
    cov: &[[f64; N]; N],
) -> Result<f64> {
    let chol = Cholesky::new(cov)?;
    let d: [f64; N] = core::array::from_fn(|k| y[k] - s[k]);
    Ok(-0.5 * (N as f64 * math::ln(2.0 * PI) + chol.log_det() + chol.quad_form(&d)))
}

/// Per-point log-density evaluator with the factorizations done once.
enum Law {
    Iid { inv_two_sigma2: f64, norm: f64 },
    Correlated { factors: Vec<(Cholesky<DIMS>, f64)> },
}

impl Law {
    fn new(model: &NoiseModel, size: usize) -> Result<Self> {
        match model {
            NoiseModel::Iid { sigma2 } => {
                if !(*sigma2 > 0.0) {
                    return Err(Error::ZeroVariance);
                }
                Ok(Law::Iid {
                    inv_two_sigma2: 0.5 / sigma2,
                    norm: -0.5 * DIMS as f64 * math::ln(2.0 * PI * sigma2),
                })
            }
            NoiseModel::Correlated { covariances } => {
                if covariances.len() != size {
                    return Err(Error::LengthMismatch {
                        expected: size,
                        actual: covariances.len(),
                    });
                }
                let factors = covariances
                    .iter()
                    .map(|c| {
                        let ch = Cholesky::new(c)?;
                        let norm = -0.5 * (DIMS as f64 * math::ln(2.0 * PI) + ch.log_det());
                        Ok((ch, norm))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Law::Correlated { factors })
            }
        }
    }

    #[inline]
    fn log_density(&self, y: &[f64; DIMS], s: &[f64; DIMS], row: usize) -> f64 {
        match self {
            Law::Iid {
                inv_two_sigma2,
                norm,
            } => norm - math::dist_sqr(y, s) * inv_two_sigma2,
            Law::Correlated { factors } => {
                let (ch, norm) = &factors[row];
                let d: [f64; DIMS] = core::array::from_fn(|k| y[k] - s[k]);
                norm - 0.5 * ch.quad_form(&d)
            }
        }
    }
}

/// LLRs of every bit of every received symbol, clamped to
/// [`DEFAULT_LLR_CLAMP`].
pub fn compute_llrs(batch: &SymbolBatch, c: &Constellation4D, model: &NoiseModel) -> Result<LlrBatch> {
    compute_llrs_clamped(batch, c, model, DEFAULT_LLR_CLAMP)
}

pub fn compute_llrs_clamped(
    batch: &SymbolBatch,
    c: &Constellation4D,
    model: &NoiseModel,
    clamp: f64,
) -> Result<LlrBatch> {
    let m = c.bits_per_symbol() as usize;
    if batch.tx_bits.len() != batch.len() * m {
        return Err(Error::LengthMismatch {
            expected: batch.len() * m,
            actual: batch.tx_bits.len(),
        });
    }
    let law = Law::new(model, c.size())?;
    let points = c.points();
    let bit_of: Vec<u8> = (0..c.size())
        .flat_map(|row| (0..m as u32).map(move |k| c.bit(row, k)))
        .collect();

    let mut logf = vec![0.0; c.size()];
    let mut llrs = Vec::with_capacity(batch.len() * m);
    let mut set_sums = vec![[0.0f64; 2]; m];
    for y in &batch.rx_points {
        let mut max = f64::NEG_INFINITY;
        for (row, s) in points.iter().enumerate() {
            let v = law.log_density(y, s, row);
            logf[row] = v;
            max = max.max(v);
        }
        set_sums.iter_mut().for_each(|s| *s = [0.0; 2]);
        for (row, &v) in logf.iter().enumerate() {
            let e = math::exp(v - max);
            for (k, sums) in set_sums.iter_mut().enumerate() {
                sums[bit_of[row * m + k] as usize] += e;
            }
        }
        for sums in &set_sums {
            let l = math::ln(sums[0]) - math::ln(sums[1]);
            llrs.push(if l.is_nan() { 0.0 } else { l.clamp(-clamp, clamp) });
        }
    }
    LlrBatch::new(llrs, batch.tx_bits.clone(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Point4;

    #[test]
    fn standard_normal_at_mean() {
        let id = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        let v = gaussian_logpdf(&[0.3; 4], &[0.3; 4], &id).unwrap();
        assert!((v - (-2.0 * (2.0 * PI).ln())).abs() < 1e-14);
        assert!((v + 3.675754132818691).abs() < 1e-12);
    }

    #[test]
    fn scaled_identity_reduces_to_iid_form() {
        let s2 = 0.07;
        let cov = core::array::from_fn(|i| core::array::from_fn(|j| if i == j { s2 } else { 0.0 }));
        let y = [0.1, -0.4, 0.25, 0.9];
        let s = [0.0, 0.2, -0.1, 0.5];
        let d2: f64 = (0..4).map(|k| (y[k] - s[k]) * (y[k] - s[k])).sum();
        let expected = -2.0 * (2.0 * PI * s2).ln() - d2 / (2.0 * s2);
        assert!((gaussian_logpdf(&y, &s, &cov).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn non_pd_covariance_errors() {
        let cov = [[1.0, 2.0], [2.0, 1.0]];
        assert_eq!(
            gaussian_logpdf(&[0.0; 2], &[0.0; 2], &cov),
            Err(Error::NotPositiveDefinite)
        );
    }

    fn two_point() -> Constellation4D {
        Constellation4D::new("bpsk", std::vec![[1.0, 0.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0]], std::vec![0, 1])
            .unwrap()
    }

    #[test]
    fn binary_llr_is_linear() {
        let c = two_point();
        let sigma2 = 0.4;
        let ys = [-1.3, -0.2, 0.0, 0.45, 2.0];
        let rx: Vec<Point4> = ys.iter().map(|&y| [y, 0.0, 0.0, 0.0]).collect();
        let n = rx.len();
        let b = SymbolBatch::new(std::vec![0; n], std::vec![0; n], std::vec![[1.0, 0.0, 0.0, 0.0]; n], rx).unwrap();
        let out = compute_llrs(&b, &c, &NoiseModel::iid(sigma2).unwrap()).unwrap();
        for (l, y) in out.llrs.iter().zip(ys) {
            assert!((l - 2.0 * y / sigma2).abs() < 1e-10);
        }
    }

    #[test]
    fn equidistant_observation_has_zero_llr() {
        let c = two_point();
        let b = SymbolBatch::new(std::vec![0], std::vec![0], std::vec![[1.0, 0.0, 0.0, 0.0]], std::vec![[0.0, 0.7, -0.2, 0.1]]).unwrap();
        let out = compute_llrs(&b, &c, &NoiseModel::iid(0.1).unwrap()).unwrap();
        assert_eq!(out.llrs, [0.0]);
    }

    #[test]
    fn far_observation_is_clamped() {
        let c = two_point();
        let b = SymbolBatch::new(std::vec![0], std::vec![0], std::vec![[1.0, 0.0, 0.0, 0.0]], std::vec![[40.0, 0.0, 0.0, 0.0]]).unwrap();
        let out = compute_llrs(&b, &c, &NoiseModel::iid(0.01).unwrap()).unwrap();
        assert_eq!(out.llrs, [DEFAULT_LLR_CLAMP]);
    }

    #[test]
    fn model_size_must_match() {
        let c = two_point();
        let b = SymbolBatch::new(std::vec![0], std::vec![0], std::vec![[1.0, 0.0, 0.0, 0.0]], std::vec![[0.0; 4]]).unwrap();
        let id = core::array::from_fn(|i| core::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }));
        let model = NoiseModel::correlated(std::vec![id]).unwrap();
        assert!(compute_llrs(&b, &c, &model).is_err());
        assert_eq!(
            compute_llrs(&b, &c, &NoiseModel::Iid { sigma2: 0.0 }),
            Err(Error::ZeroVariance)
        );
    }
}
