use alloc::vec::Vec;

use super::Constellation4D;
use crate::math;
use crate::Point4;

/// Outer-ring radius of the max-min-distance star 8QAM whose inner points
/// sit at `(±1, ±1)`.
const OUTER: f64 = 2.732_050_807_568_877; // 1 + √3

fn star_geometry() -> [[f64; 2]; 8] {
    [
        [1.0, 1.0],
        [-1.0, 1.0],
        [-1.0, -1.0],
        [1.0, -1.0],
        [OUTER, 0.0],
        [0.0, OUTER],
        [-OUTER, 0.0],
        [0.0, -OUTER],
    ]
}

/// Star 8QAM per polarization, scaled to unit mean energy, with labels
/// from [`search_labels`]. Entry `i` carries label `i`.
pub fn star_8qam() -> [[f64; 2]; 8] {
    let geom = star_geometry();
    let energy = geom.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum::<f64>() / 8.0;
    let scale = 1.0 / math::sqrt(energy);
    let perm = search_labels(&geom);
    let mut out = [[0.0; 2]; 8];
    for (row, &label) in perm.iter().enumerate() {
        out[label as usize] = [geom[row][0] * scale, geom[row][1] * scale];
    }
    out
}

/// PM-8QAM as the Cartesian product of two star 8QAM polarizations.
///
/// Label bits `b1..b3` select the X symbol and `b4..b6` the Y symbol.
pub fn build_pm8qam() -> Constellation4D {
    let pol = star_8qam();
    let half = core::f64::consts::FRAC_1_SQRT_2;
    let points: Vec<Point4> = (0..64usize)
        .map(|label| {
            let x = pol[label >> 3];
            let y = pol[label & 7];
            [x[0] * half, x[1] * half, y[0] * half, y[1] * half]
        })
        .collect();
    Constellation4D::new("pm8qam", points, (0..64).collect())
        .expect("star 8QAM product is a valid constellation")
}

/// Pairwise cost of a labeling: Hamming distance summed over
/// nearest-neighbour pairs, then a distance-weighted sum over all pairs.
fn label_cost(geom: &[[f64; 2]; 8], labels: &[u32; 8], d2min: f64) -> (u32, f64) {
    let mut nearest = 0;
    let mut weighted = 0.0;
    for i in 0..8 {
        for j in i + 1..8 {
            let dx = geom[i][0] - geom[j][0];
            let dy = geom[i][1] - geom[j][1];
            let d2 = dx * dx + dy * dy;
            let ham = (labels[i] ^ labels[j]).count_ones();
            if d2 <= d2min * (1.0 + 1e-9) {
                nearest += ham;
            }
            weighted += ham as f64 * math::exp(-d2 / d2min);
        }
    }
    (nearest, weighted)
}

/// Exhaustive search over all 8! labelings; the first labeling in Heap's
/// enumeration order wins ties, so the result is deterministic.
fn search_labels(geom: &[[f64; 2]; 8]) -> [u32; 8] {
    let mut d2min = f64::INFINITY;
    for i in 0..8 {
        for j in i + 1..8 {
            let dx = geom[i][0] - geom[j][0];
            let dy = geom[i][1] - geom[j][1];
            d2min = d2min.min(dx * dx + dy * dy);
        }
    }
    let mut perm = [0u32, 1, 2, 3, 4, 5, 6, 7];
    let mut best = perm;
    let mut best_cost = label_cost(geom, &perm, d2min);
    let mut stack = [0usize; 8];
    let mut i = 1;
    while i < 8 {
        if stack[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(stack[i], i);
            }
            let cost = label_cost(geom, &perm, d2min);
            if cost.0 < best_cost.0 || (cost.0 == best_cost.0 && cost.1 < best_cost.1 - 1e-12) {
                best = perm;
                best_cost = cost;
            }
            stack[i] += 1;
            i = 1;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    best
}
