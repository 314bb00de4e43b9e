//! Small fixed-size dense linear algebra.

use crate::math;
use crate::{Error, Result};

/// Lower-triangular Cholesky factor of an `N × N` SPD matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cholesky<const N: usize> {
    lower: [[f64; N]; N],
}

impl<const N: usize> Cholesky<N> {
    pub fn new(a: &[[f64; N]; N]) -> Result<Self> {
        let mut l = [[0.0; N]; N];
        for i in 0..N {
            for j in 0..=i {
                let mut s = a[i][j];
                for k in 0..j {
                    s -= l[i][k] * l[j][k];
                }
                if i == j {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite);
                    }
                    l[i][i] = math::sqrt(s);
                } else {
                    l[i][j] = s / l[j][j];
                }
            }
        }
        Ok(Self { lower: l })
    }

    pub fn lower(&self) -> &[[f64; N]; N] {
        &self.lower
    }

    /// `ln |A|`.
    pub fn log_det(&self) -> f64 {
        2.0 * (0..N).map(|i| math::ln(self.lower[i][i])).sum::<f64>()
    }

    /// `vᵀ A⁻¹ v` through a forward solve of `L w = v`.
    #[inline]
    pub fn quad_form(&self, v: &[f64; N]) -> f64 {
        let mut w = [0.0; N];
        let mut acc = 0.0;
        for i in 0..N {
            let mut s = v[i];
            for k in 0..i {
                s -= self.lower[i][k] * w[k];
            }
            w[i] = s / self.lower[i][i];
            acc += w[i] * w[i];
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorizes_known_matrix() {
        let a = [[4.0, 2.0], [2.0, 3.0]];
        let c = Cholesky::new(&a).unwrap();
        assert_eq!(c.lower()[0], [2.0, 0.0]);
        assert!((c.lower()[1][0] - 1.0).abs() < 1e-15);
        assert!((c.lower()[1][1] - 2f64.sqrt()).abs() < 1e-15);
        assert!((c.log_det() - 8f64.ln()).abs() < 1e-14);
        // A^-1 = [[3,-2],[-2,4]]/8, v = [1,1] -> 3/8
        assert!((c.quad_form(&[1.0, 1.0]) - 3.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_indefinite() {
        assert_eq!(
            Cholesky::new(&[[1.0, 2.0], [2.0, 1.0]]),
            Err(Error::NotPositiveDefinite)
        );
    }
}
