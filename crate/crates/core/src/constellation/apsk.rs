use alloc::vec::Vec;

use super::Constellation4D;
use crate::math::{self, PI};
use crate::{Error, Point4, Result};

/// Outer/inner ring ratio maximizing AWGN GMI over
/// [`crate::optimize::default_ring_ratios`] at [`crate::optimize::DESIGN_SNR_DB`].
pub const DEFAULT_2A8PSK_RING_RATIO: f64 = 1.3;

/// Decides which polarization sits on the inner ring of 6b4D-2A8PSK.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingRule {
    /// X is on the outer ring iff the XOR of the label bits selected by
    /// `mask` is 1. Bit 5 of the mask is `b1`, bit 0 is `b6`.
    Parity { mask: u32 },
}

impl Default for RingRule {
    fn default() -> Self {
        RingRule::Parity { mask: 0b11_1111 }
    }
}

impl RingRule {
    fn x_on_outer(self, label: u32) -> bool {
        match self {
            RingRule::Parity { mask } => (label & mask).count_ones() % 2 == 1,
        }
    }
}

fn gray_to_index(g: u32) -> u32 {
    g ^ (g >> 1) ^ (g >> 2)
}

/// 6b4D-2A8PSK with the default ring rule.
pub fn build_6b4d_2a8psk(ring_ratio: f64) -> Result<Constellation4D> {
    build_6b4d_2a8psk_with(ring_ratio, RingRule::default())
}

/// 6b4D-2A8PSK: Gray-labelled 8PSK phase per polarization (`b1..b3` for X,
/// `b4..b6` for Y) on two rings of radius ratio `ring_ratio`, with the ring
/// assignment complementary across polarizations so every point has the
/// same 4D norm.
pub fn build_6b4d_2a8psk_with(ring_ratio: f64, rule: RingRule) -> Result<Constellation4D> {
    if !(ring_ratio.is_finite() && ring_ratio > 0.0) {
        return Err(Error::InvalidParameter {
            name: "ring_ratio",
            reason: "must be positive",
        });
    }
    let inner = 1.0 / math::sqrt(1.0 + ring_ratio * ring_ratio);
    let outer = ring_ratio * inner;
    let points: Vec<Point4> = (0..64u32)
        .map(|label| {
            let phase_x = gray_to_index(label >> 3) as f64 * PI / 4.0;
            let phase_y = gray_to_index(label & 7) as f64 * PI / 4.0;
            let (rx, ry) = if rule.x_on_outer(label) {
                (outer, inner)
            } else {
                (inner, outer)
            };
            [
                rx * math::cos(phase_x),
                rx * math::sin(phase_x),
                ry * math::cos(phase_y),
                ry * math::sin(phase_y),
            ]
        })
        .collect();
    Constellation4D::new("6b4d_2a8psk", points, (0..64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    #[test]
    fn constant_modulus() {
        let c = build_6b4d_2a8psk(1.6).unwrap();
        for p in c.points() {
            assert!((math::norm_sqr(p) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn each_polarization_uses_two_rings_of_eight_phases() {
        let c = build_6b4d_2a8psk(1.6).unwrap();
        for pol in 0..2 {
            let mut seen: Vec<(i64, i64)> = c
                .points()
                .iter()
                .map(|p| {
                    let (re, im) = (p[2 * pol], p[2 * pol + 1]);
                    let r2 = ((re * re + im * im) * 1e9).round() as i64;
                    let ph = (math::atan2(im, re) / (PI / 4.0)).round().rem_euclid(8.0) as i64;
                    (r2, ph)
                })
                .collect();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), 16);
            let mut rings: Vec<i64> = seen.iter().map(|s| s.0).collect();
            rings.dedup();
            assert_eq!(rings.len(), 2);
        }
    }

    #[test]
    fn unit_ring_ratio_still_distinct() {
        // constructor performs the pairwise scan
        let c = build_6b4d_2a8psk(1.0).unwrap();
        assert!(c.min_distance() > 0.1);
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        for g in 0..8u32 {
            for h in 0..8u32 {
                let step = (gray_to_index(g) + 8 - gray_to_index(h)) % 8;
                if step == 1 || step == 7 {
                    assert_eq!((g ^ h).count_ones(), 1);
                }
            }
        }
    }
}
