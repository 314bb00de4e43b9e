//! Gauss–Hermite rules for `∫ e^{-x²} f(x) dx`.

use alloc::vec::Vec;

use crate::math::{self, PI};
use crate::{Error, Result};

/// Nodes and weights of the `n`-point rule, nodes ascending.
///
/// Roots of the Hermite polynomial are found by Newton iteration on the
/// orthonormal three-term recurrence, seeded with the usual asymptotic
/// guesses for the largest roots and extrapolation for the rest.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "nodes",
            reason: "need at least one node",
        });
    }
    let pim4 = 1.0 / math::sqrt(math::sqrt(PI));
    let nf = n as f64;
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let half = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..half {
        z = match i {
            0 => math::sqrt(2.0 * nf + 1.0) - 1.85575 * libm::pow(2.0 * nf + 1.0, -1.0 / 6.0),
            1 => z - 1.14 * libm::pow(nf, 0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p1, p2) = orthonormal_hermite(n, z, pim4);
            pp = math::sqrt(2.0 * nf) * p2;
            let step = p1 / pp;
            z -= step;
            if math::abs(step) <= 1e-15 * math::abs(z).max(1.0) {
                break;
            }
        }
        let (_, p2) = orthonormal_hermite(n, z, pim4);
        pp = if pp == 0.0 { 1.0 } else { math::sqrt(2.0 * nf) * p2 };
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    Ok((x, w))
}

/// Values of the orthonormal Hermite functions of degree `n` and `n-1`.
fn orthonormal_hermite(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * math::sqrt(2.0 / jf) * p2 - math::sqrt((jf - 1.0) / jf) * p3;
    }
    (p1, p2)
}
