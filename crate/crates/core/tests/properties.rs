use prs4d_core::constellation::{build_4d64prs, build_pm8qam, PrsParams};
use prs4d_core::demapper::{
    compute_llrs, compute_llrs_clamped, estimate_point_covariances, gmi_from_llrs, LlrBatch, NoiseModel,
};
use prs4d_core::mapping::{generate_bits, map_bits_to_symbols};
use prs4d_core::{Constellation4D, SymbolBatch};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn valid_params() -> impl Strategy<Value = PrsParams> {
    (0.05f64..4.0, 0.01f64..0.77).prop_map(|(rho, theta)| PrsParams { rho, theta })
}

fn noisy_batch(c: &Constellation4D, ns: usize, sigma: f64, seed: u64) -> SymbolBatch {
    let bits = generate_bits(seed, ns * c.bits_per_symbol() as usize).unwrap();
    let mapped = map_bits_to_symbols(&bits, c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let rx = mapped
        .points
        .iter()
        .map(|p| std::array::from_fn(|k| p[k] + sigma * rng.sample::<f64, _>(StandardNormal)))
        .collect();
    SymbolBatch::new(bits, mapped.indices, mapped.points.clone(), rx).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prs_points_share_one_norm_and_cancel(p in valid_params()) {
        let c = build_4d64prs(p).unwrap();
        let norms: Vec<f64> = c.points().iter().map(|q| q.iter().map(|v| v * v).sum()).collect();
        for n in &norms {
            prop_assert!((n - norms[0]).abs() < 1e-12);
            prop_assert!((n - 1.0).abs() < 1e-12);
        }
        for v in c.centroid() {
            prop_assert!(v.abs() < 1e-12);
        }
        let mut labels = c.labels().to_vec();
        labels.sort_unstable();
        prop_assert_eq!(labels, (0..64).collect::<Vec<u32>>());
    }

    #[test]
    fn prs_sign_bits_flip_one_coordinate(p in valid_params(), row in 0usize..64, which in 0usize..4) {
        let c = build_4d64prs(p).unwrap();
        // b1, b2, b4, b5 as label masks with b1 the MSB of six bits.
        let mask = [1u32 << 5, 1 << 4, 1 << 2, 1 << 1][which];
        let a = c.points()[row];
        let b = c.points()[c.row_of_label(c.labels()[row] ^ mask)];
        let mut flipped = 0;
        for k in 0..4 {
            if a[k] == -b[k] && a[k] != 0.0 {
                flipped += 1;
            } else {
                prop_assert_eq!(a[k], b[k]);
            }
        }
        prop_assert_eq!(flipped, 1);
    }

    #[test]
    fn prs_build_is_bit_exact(p in valid_params()) {
        prop_assert_eq!(build_4d64prs(p).unwrap(), build_4d64prs(p).unwrap());
    }

    #[test]
    fn clamping_barely_moves_gmi(seed in 0u64..1000, sigma in 0.03f64..0.3) {
        let c = build_pm8qam();
        let batch = noisy_batch(&c, 400, sigma, seed);
        let model = NoiseModel::iid(sigma * sigma).unwrap();
        let clamped = gmi_from_llrs(&compute_llrs(&batch, &c, &model).unwrap(), 6).unwrap();
        let free = gmi_from_llrs(&compute_llrs_clamped(&batch, &c, &model, f64::INFINITY).unwrap(), 6).unwrap();
        prop_assert!((clamped - free).abs() < 1e-6);
    }

    #[test]
    fn gmi_ignores_symbol_order(seed in 0u64..1000, perm_seed in any::<u64>()) {
        let c = build_pm8qam();
        let batch = noisy_batch(&c, 200, 0.15, seed);
        let llrs = compute_llrs(&batch, &c, &NoiseModel::iid(0.0225).unwrap()).unwrap();
        let mut order: Vec<usize> = (0..llrs.symbols()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let shuffled = LlrBatch::new(
            order.iter().flat_map(|&i| llrs.llrs[i * 6..i * 6 + 6].to_vec()).collect(),
            order.iter().flat_map(|&i| llrs.bits[i * 6..i * 6 + 6].to_vec()).collect(),
            6,
        )
        .unwrap();
        let a = gmi_from_llrs(&llrs, 6).unwrap();
        let b = gmi_from_llrs(&shuffled, 6).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn covariance_mismatch_does_not_help() {
    // Correlated noise: same realization for X and Y real parts.
    let c = build_pm8qam();
    let ns = 1 << 15;
    let bits = generate_bits(77, ns * 6).unwrap();
    let mapped = map_bits_to_symbols(&bits, &c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let rx: Vec<[f64; 4]> = mapped
        .points
        .iter()
        .map(|p| {
            let n: [f64; 4] = std::array::from_fn(|_| 0.15 * rng.sample::<f64, _>(StandardNormal));
            [p[0] + n[0], p[1] + n[1], p[2] + 0.9 * n[0] + 0.3 * n[2], p[3] + n[3]]
        })
        .collect();
    let batch = SymbolBatch::new(bits, mapped.indices, mapped.points.clone(), rx).unwrap();
    let covs = estimate_point_covariances(&batch, c.size(), 1e-9, 30).unwrap();

    let penalties = |model: &NoiseModel| -> (f64, f64) {
        let llrs = compute_llrs(&batch, &c, model).unwrap();
        let per_symbol: Vec<f64> = llrs
            .llrs
            .chunks(6)
            .zip(llrs.bits.chunks(6))
            .map(|(l, b)| 6.0 - l.iter().zip(b).map(|(&l, &b)| prs4d_core::demapper::bit_penalty(b, l)).sum::<f64>())
            .collect();
        let mean = per_symbol.iter().sum::<f64>() / ns as f64;
        let var = per_symbol.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (ns - 1) as f64;
        (mean, (var / ns as f64).sqrt())
    };

    let (matched, se) = penalties(&NoiseModel::correlated(covs.clone()).unwrap());
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        let blended: Vec<[[f64; 4]; 4]> = covs
            .iter()
            .map(|s| {
                let tr = (0..4).map(|k| s[k][k]).sum::<f64>() / 4.0;
                std::array::from_fn(|i| {
                    std::array::from_fn(|j| (1.0 - alpha) * s[i][j] + if i == j { alpha * tr } else { 0.0 })
                })
            })
            .collect();
        let (g, _) = penalties(&NoiseModel::correlated(blended).unwrap());
        assert!(g <= matched + 3.0 * se, "alpha {alpha}: {g} > {matched} + 3·{se}");
    }
}
