use alloc::vec::Vec;

use super::Constellation4D;
use crate::math::{self, PI};
use crate::{Error, Point4, Result};

/// Free geometry of 4D-64PRS.
///
/// `rho` is the ring ratio `R2 / R1` and `theta` the phase of the `R2`
/// ring points (fixed at `π/4`) minus the phase of the `R1` ring points.
/// The radii follow from `R1² + R2² = 1`, so every point has unit energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrsParams {
    pub rho: f64,
    pub theta: f64,
}

impl PrsParams {
    /// AWGN-GMI maximizer over the default search grid at
    /// [`crate::optimize::DESIGN_SNR_DB`], where it reaches about 4.55 bit/4D-sym.
    pub const DEFAULT: PrsParams = PrsParams {
        rho: 0.5,
        theta: 0.4,
    };

    pub fn new(rho: f64, theta: f64) -> Result<Self> {
        let p = PrsParams { rho, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rho",
                reason: "ring ratio must be positive",
            });
        }
        if !(self.theta > 0.0 && self.theta < PI / 4.0) {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: "relative phase must lie in (0, pi/4)",
            });
        }
        Ok(())
    }

    /// Inner radius `R1` and outer radius `R2`.
    pub fn radii(&self) -> (f64, f64) {
        let r1 = 1.0 / math::sqrt(1.0 + self.rho * self.rho);
        (r1, self.rho * r1)
    }

    /// The three coordinate magnitudes `(ν1, ν2, ν3)`.
    pub fn amplitudes(&self) -> (f64, f64, f64) {
        let (r1, r2) = self.radii();
        let phi2 = PI / 4.0 - self.theta;
        (r1 * math::cos(phi2), r2 / math::sqrt(2.0), r1 * math::sin(phi2))
    }
}

impl Default for PrsParams {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Builds 4D-64PRS.
///
/// Label bits `[b3, b6]` pick one of four sign-free base points (which
/// polarization sits on the `R1` ring, and the order of `ν1, ν3` on it).
/// Orthant bits flip coordinate signs: `b2` the first coordinate, `b1` the
/// second, `b4` the third and `b5` the fourth.
///
/// `theta` may be anywhere in `[0, π/4]`; the end points collapse pairs of
/// points and are reported as [`Error::DegenerateGeometry`].
pub fn build_4d64prs(params: PrsParams) -> Result<Constellation4D> {
    if !(params.rho.is_finite() && params.rho > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rho",
            reason: "ring ratio must be positive",
        });
    }
    if !(params.theta >= 0.0 && params.theta <= PI / 4.0) {
        return Err(Error::InvalidParameter {
            name: "theta",
            reason: "relative phase must lie in [0, pi/4]",
        });
    }
    let (n1, n2, n3) = params.amplitudes();
    let base: [Point4; 4] = [
        [n1, n3, n2, n2],
        [n3, n1, n2, n2],
        [n2, n2, n1, n3],
        [n2, n2, n3, n1],
    ];
    let points: Vec<Point4> = (0..64u32)
        .map(|label| {
            let bit = |k: u32| (label >> (6 - k)) & 1;
            let family = (2 * bit(3) + bit(6)) as usize;
            let flips = [bit(2), bit(1), bit(4), bit(5)];
            let mut p = base[family];
            for (v, &f) in p.iter_mut().zip(&flips) {
                if f == 1 {
                    *v = -*v;
                }
            }
            p
        })
        .collect();
    Constellation4D::new("4d64prs", points, (0..64).collect())
}
