//! 4D constellations with their binary labelings.
//!
//! Rows are stored in label order for the shipped constructors: row `i`
//! carries label `i`, with bit `b1` as the most significant bit of the
//! `m`-bit word. Coordinates are `[Re X, Im X, Re Y, Im Y]`.

mod apsk;
mod prs;
mod star;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::math;
use crate::{Error, Point4, Result};

pub use apsk::{build_6b4d_2a8psk, build_6b4d_2a8psk_with, RingRule, DEFAULT_2A8PSK_RING_RATIO};
pub use prs::{build_4d64prs, PrsParams};
pub use star::{build_pm8qam, star_8qam};

/// Minimum squared distance below which two points count as coincident.
const COINCIDENCE_TOL: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation4D {
    name: String,
    points: Vec<Point4>,
    labels: Vec<u32>,
    bits: u32,
    row_of_label: Vec<usize>,
}

impl Constellation4D {
    /// Builds a constellation from rows and their labels.
    ///
    /// The number of rows must be a power of two and `labels` must be a
    /// permutation of `0..M`. Coincident rows are rejected.
    pub fn new(name: impl Into<String>, points: Vec<Point4>, labels: Vec<u32>) -> Result<Self> {
        let size = points.len();
        if size < 2 || !size.is_power_of_two() {
            return Err(Error::InvalidParameter {
                name: "points",
                reason: "cardinality must be a power of two >= 2",
            });
        }
        if labels.len() != size {
            return Err(Error::LengthMismatch {
                expected: size,
                actual: labels.len(),
            });
        }
        let bits = size.trailing_zeros();
        let mut row_of_label = vec![usize::MAX; size];
        for (row, &label) in labels.iter().enumerate() {
            let slot = row_of_label
                .get_mut(label as usize)
                .ok_or(Error::InvalidLabeling(bits))?;
            if *slot != usize::MAX {
                return Err(Error::InvalidLabeling(bits));
            }
            *slot = row;
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "points",
                reason: "coordinates must be finite",
            });
        }
        check_distinct(&points)?;
        Ok(Self {
            name: name.into(),
            points,
            labels,
            bits,
            row_of_label,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[Point4] {
        &self.points
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Bits per 4D symbol, `m`.
    pub fn bits_per_symbol(&self) -> u32 {
        self.bits
    }

    /// Cardinality, `M = 2^m`.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn row_of_label(&self, label: u32) -> usize {
        self.row_of_label[label as usize]
    }

    /// Bit `k` (0-based, `k = 0` is `b1`) of the label of `row`.
    #[inline]
    pub fn bit(&self, row: usize, k: u32) -> u8 {
        ((self.labels[row] >> (self.bits - 1 - k)) & 1) as u8
    }

    /// Mean squared row norm.
    pub fn mean_energy(&self) -> f64 {
        self.points.iter().map(math::norm_sqr).sum::<f64>() / self.size() as f64
    }

    pub fn centroid(&self) -> Point4 {
        let mut c = [0.0; 4];
        for p in &self.points {
            for k in 0..4 {
                c[k] += p[k];
            }
        }
        c.map(|v| v / self.size() as f64)
    }

    /// Smallest pairwise Euclidean distance.
    pub fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                best = best.min(math::dist_sqr(a, b));
            }
        }
        math::sqrt(best)
    }

    /// Rescales to unit mean 4D energy.
    pub fn normalized(mut self) -> Self {
        let scale = 1.0 / math::sqrt(self.mean_energy());
        for p in &mut self.points {
            for v in p.iter_mut() {
                *v *= scale;
            }
        }
        self
    }
}

fn check_distinct(points: &[Point4]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate().skip(i + 1) {
            if math::dist_sqr(a, b) <= COINCIDENCE_TOL {
                return Err(Error::DegenerateGeometry {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok(())
}

/// The three modulation formats compared in the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Format {
    Pm8qam,
    TwoA8psk,
    Prs64,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Pm8qam, Format::TwoA8psk, Format::Prs64];

    pub fn as_str(self) -> &'static str {
        match self {
            Format::Pm8qam => "pm8qam",
            Format::TwoA8psk => "6b4d_2a8psk",
            Format::Prs64 => "4d64prs",
        }
    }

    /// Builds the format with the given geometry knobs. `prs` is only used
    /// by 4D-64PRS and `ring_ratio` only by 6b4D-2A8PSK.
    pub fn build(self, prs: PrsParams, ring_ratio: f64) -> Result<Constellation4D> {
        match self {
            Format::Pm8qam => Ok(build_pm8qam()),
            Format::TwoA8psk => build_6b4d_2a8psk(ring_ratio),
            Format::Prs64 => build_4d64prs(prs),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pm8qam" | "pm-8qam" => Ok(Format::Pm8qam),
            "6b4d_2a8psk" | "6b4d-2a8psk" => Ok(Format::TwoA8psk),
            "4d64prs" | "4d-64prs" => Ok(Format::Prs64),
            _ => Err(Error::InvalidParameter {
                name: "format",
                reason: "expected pm8qam, 6b4d_2a8psk or 4d64prs",
            }),
        }
    }
}
