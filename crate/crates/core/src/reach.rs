//! Post-processing of sweep curves: reach at a GMI target and the optimum of
//! a power sweep.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Distance at which a GMI-versus-distance curve first drops through
/// `target`, linearly interpolated between the bracketing records.
///
/// `records` are `(distance, gmi)` pairs in any order.
pub fn find_reach(records: &[(f64, f64)], target: f64) -> Result<f64> {
    let mut sorted: Vec<(f64, f64)> = records.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in sorted.windows(2) {
        let (d0, g0) = pair[0];
        let (d1, g1) = pair[1];
        if g0 >= target && g1 <= target {
            if g0 == g1 {
                return Ok(d0);
            }
            return Ok(d0 + (g0 - target) / (g0 - g1) * (d1 - d0));
        }
    }
    Err(Error::NotBracketed(target))
}

/// Location and value of the maximum of a sampled curve, refined by a
/// parabola through the grid maximum and its two neighbours.
///
/// Falls back to the grid maximum when it sits on the edge of the grid or
/// the three points are not concave.
pub fn quadratic_peak(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut sorted: Vec<(f64, f64)> = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k = sorted
        .iter()
        .enumerate()
        .fold(0, |best, (i, p)| if p.1 > sorted[best].1 { i } else { best });
    if k == 0 || k + 1 == sorted.len() {
        return Ok(sorted[k]);
    }
    let (x0, y0) = sorted[k - 1];
    let (x1, y1) = sorted[k];
    let (x2, y2) = sorted[k + 1];
    // divided differences of the interpolating parabola
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if !(curvature < 0.0) {
        return Ok(sorted[k]);
    }
    let slope = d01 - curvature * (x0 + x1);
    let x_opt = -slope / (2.0 * curvature);
    let y_opt = y0 + d01 * (x_opt - x0) + curvature * (x_opt - x0) * (x_opt - x1);
    Ok((x_opt, y_opt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_between_bracketing_records() {
        let r = [(1000.0, 5.0), (2000.0, 4.0)];
        assert_eq!(find_reach(&r, 4.5).unwrap(), 1500.0);
    }

    #[test]
    fn target_above_curve_is_not_bracketed() {
        let r = [(1000.0, 5.0), (2000.0, 4.0)];
        assert_eq!(find_reach(&r, 5.5), Err(Error::NotBracketed(5.5)));
        assert!(find_reach(&r, 3.0).is_err());
    }

    #[test]
    fn record_order_does_not_matter() {
        let r = [(800.0, 5.2), (2400.0, 4.1), (1600.0, 4.6), (3200.0, 3.5)];
        let mut rev = r;
        rev.reverse();
        assert_eq!(find_reach(&r, 4.55).unwrap(), find_reach(&rev, 4.55).unwrap());
        let expected = 1600.0 + (4.6 - 4.55) / (4.6 - 4.1) * 800.0;
        assert!((find_reach(&r, 4.55).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn parabola_vertex_is_recovered() {
        let f = |x: f64| 5.0 - 0.3 * (x - 0.7) * (x - 0.7);
        let pts: std::vec::Vec<(f64, f64)> = (-4..=6).map(|i| (i as f64, f(i as f64))).collect();
        let (x, y) = quadratic_peak(&pts).unwrap();
        assert!((x - 0.7).abs() < 1e-12);
        assert!((y - 5.0).abs() < 1e-12);
    }

    #[test]
    fn edge_maximum_is_returned_as_is() {
        let pts = [(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)];
        assert_eq!(quadratic_peak(&pts).unwrap(), (2.0, 3.0));
        assert!(quadratic_peak(&[]).is_err());
    }
}
