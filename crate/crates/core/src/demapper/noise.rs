use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::linalg::Cholesky;
use crate::{Error, Result, SymbolBatch, DIMS};

pub const MIN_SYMBOLS_FOR_VARIANCE: usize = 100;
pub const DEFAULT_MIN_OCCURRENCES: usize = 30;

pub type Covariance = [[f64; DIMS]; DIMS];

/// Channel law assumed by the demapper.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    /// 4D-iidG: `σ²·I` shared by every constellation point.
    Iid { sigma2: f64 },
    /// 4D-CG: one full covariance per constellation point (row order).
    Correlated { covariances: Vec<Covariance> },
}

impl NoiseModel {
    pub fn iid(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::ZeroVariance);
        }
        Ok(NoiseModel::Iid { sigma2 })
    }

    pub fn correlated(covariances: Vec<Covariance>) -> Result<Self> {
        for c in &covariances {
            for i in 0..DIMS {
                for j in 0..i {
                    if c[i][j] != c[j][i] {
                        return Err(Error::NotPositiveDefinite);
                    }
                }
            }
            Cholesky::new(c)?;
        }
        Ok(NoiseModel::Correlated { covariances })
    }

    pub fn kind(&self) -> DemapperKind {
        match self {
            NoiseModel::Iid { .. } => DemapperKind::Iid,
            NoiseModel::Correlated { .. } => DemapperKind::Cg,
        }
    }

    /// Mean per-dimension variance (trace / N averaged over points).
    pub fn mean_variance(&self) -> f64 {
        match self {
            NoiseModel::Iid { sigma2 } => *sigma2,
            NoiseModel::Correlated { covariances } => {
                let total: f64 = covariances
                    .iter()
                    .map(|c| (0..DIMS).map(|k| c[k][k]).sum::<f64>())
                    .sum();
                total / (DIMS * covariances.len()) as f64
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DemapperKind {
    Iid,
    Cg,
}

impl DemapperKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DemapperKind::Iid => "iid",
            DemapperKind::Cg => "cg",
        }
    }
}

impl fmt::Display for DemapperKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DemapperKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iid" => Ok(DemapperKind::Iid),
            "cg" => Ok(DemapperKind::Cg),
            _ => Err(Error::InvalidParameter {
                name: "demapper",
                reason: "expected iid or cg",
            }),
        }
    }
}

/// Per-dimension noise variance estimate. `noiseless` is set when the
/// received block equals the transmitted one, in which case no IID model
/// can be built from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseVariance {
    pub sigma2: f64,
    pub noiseless: bool,
}

/// `σ² = Σ‖rx − tx‖² / (N·Ns)`.
pub fn estimate_iid_sigma2(batch: &SymbolBatch) -> Result<NoiseVariance> {
    if batch.len() < MIN_SYMBOLS_FOR_VARIANCE {
        return Err(Error::TooFewSymbols {
            required: MIN_SYMBOLS_FOR_VARIANCE,
            actual: batch.len(),
        });
    }
    let total: f64 = batch
        .rx_points
        .iter()
        .zip(&batch.tx_points)
        .map(|(r, t)| crate::math::dist_sqr(r, t))
        .sum();
    let sigma2 = total / (DIMS * batch.len()) as f64;
    Ok(NoiseVariance {
        sigma2,
        noiseless: sigma2 == 0.0,
    })
}

/// Second moment of `rx − s_i` over the occurrences of each transmitted
/// point `i` (the noise is modelled as zero-mean around `s_i`), plus
/// `epsilon·I`.
pub fn estimate_point_covariances(
    batch: &SymbolBatch,
    size: usize,
    epsilon: f64,
    min_occurrences: usize,
) -> Result<Vec<Covariance>> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: "must be non-negative",
        });
    }
    let mut sums = vec![[[0.0; DIMS]; DIMS]; size];
    let mut counts = vec![0usize; size];
    for ((&i, r), t) in batch
        .tx_indices
        .iter()
        .zip(&batch.rx_points)
        .zip(&batch.tx_points)
    {
        if i >= size {
            return Err(Error::LengthMismatch {
                expected: size,
                actual: i + 1,
            });
        }
        let d: [f64; DIMS] = core::array::from_fn(|k| r[k] - t[k]);
        let acc = &mut sums[i];
        for a in 0..DIMS {
            for b in 0..=a {
                acc[a][b] += d[a] * d[b];
            }
        }
        counts[i] += 1;
    }
    let required = min_occurrences.max(1);
    sums.iter()
        .zip(&counts)
        .enumerate()
        .map(|(index, (s, &count))| {
            if count < required {
                return Err(Error::UndersampledPoint {
                    index,
                    count,
                    required,
                });
            }
            let mut c = [[0.0; DIMS]; DIMS];
            for a in 0..DIMS {
                for b in 0..=a {
                    let v = s[a][b] / count as f64;
                    c[a][b] = v;
                    c[b][a] = v;
                }
                c[a][a] += epsilon;
            }
            Ok(c)
        })
        .collect()
}
