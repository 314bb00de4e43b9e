use num_complex::Complex64;
use prs4d::channel::{
    ase_power, edfa, propagate_link, ssfm_span, EdfaParams, FiberParams, LinkConfig, MANAKOV_FACTOR,
};
use prs4d::txdsp::{transmit, TxParams};
use prs4d::SampledSignal;
use prs4d_core::constellation::{build_4d64prs, PrsParams};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

fn wdm_signal(launch_dbm: f64) -> SampledSignal {
    let c = build_4d64prs(PrsParams::DEFAULT).unwrap();
    let p = TxParams {
        n_channels: 3,
        n_symbols: 1024,
        baud_hz: 45e9,
        rolloff: 0.1,
        spacing_hz: 50e9,
        rrc_span: 64,
        sps: 4,
        launch_dbm,
        seed: 9,
    };
    transmit(&c, &p).unwrap().1
}

fn rel_err(a: &SampledSignal, b: &SampledSignal) -> f64 {
    let num: f64 = a.x.iter().zip(&b.x).chain(a.y.iter().zip(&b.y)).map(|(p, q)| (p - q).norm_sqr()).sum();
    let den: f64 = b.x.iter().chain(&b.y).map(|p| p.norm_sqr()).sum();
    (num / den).sqrt()
}

fn link(n_spans: usize) -> LinkConfig {
    LinkConfig {
        span: FiberParams::default(),
        n_spans,
        step_km: 1.0,
        edfa_nf_db: 5.0,
        inline_cdc: true,
        ase_enabled: true,
        exact_nsp: false,
        seed: 4,
    }
}

#[test]
fn ase_power_matches_formula() {
    let n = 1 << 20;
    let zero = Complex64::new(0.0, 0.0);
    let mut s = SampledSignal::new(vec![zero; n], vec![zero; n], 180e9).unwrap();
    let p = EdfaParams {
        gain_db: 17.52,
        nf_db: 5.0,
        wavelength_nm: 1550.0,
        ase_enabled: true,
        exact_nsp: false,
    };
    edfa(&mut s, &p, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let expected = ase_power(5.0, 17.52, 1550.0, 180e9, false);
    for pol in [&s.x, &s.y] {
        let measured = pol.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        assert!((measured / expected - 1.0).abs() < 0.01, "{measured} vs {expected}");
    }
}

#[test]
fn transparent_link_is_identity() {
    let orig = wdm_signal(0.0);
    let mut s = orig.clone();
    let mut l = link(3);
    l.span.gamma_w_km = 0.0;
    l.ase_enabled = false;
    propagate_link(&mut s, &l).unwrap();
    assert!(rel_err(&s, &orig) < 1e-9, "{}", rel_err(&s, &orig));
}

#[test]
fn same_seed_same_output() {
    let mut a = wdm_signal(0.0);
    let mut b = a.clone();
    propagate_link(&mut a, &link(2)).unwrap();
    propagate_link(&mut b, &link(2)).unwrap();
    assert_eq!(a, b);
    let mut c = wdm_signal(0.0);
    let mut other = link(2);
    other.seed = 5;
    propagate_link(&mut c, &other).unwrap();
    assert_ne!(a, c);
}

#[test]
fn lossless_span_conserves_power() {
    let mut s = wdm_signal(4.0);
    let fiber = FiberParams {
        alpha_db_km: 0.0,
        ..FiberParams::default()
    };
    let before = s.power();
    ssfm_span(&mut s, &fiber, 0.5).unwrap();
    assert!((s.power() / before - 1.0).abs() < 1e-9);
}

fn cw(power_w: f64) -> SampledSignal {
    let a = Complex64::new((power_w / 2.0).sqrt(), 0.0);
    SampledSignal::new(vec![a; 64], vec![a; 64], 180e9).unwrap()
}

#[test]
fn cw_self_phase_modulation() {
    let p = 1e-2;
    let fiber = FiberParams {
        alpha_db_km: 0.0,
        disp_ps_nm_km: 0.0,
        ..FiberParams::default()
    };
    let mut s = cw(p);
    ssfm_span(&mut s, &fiber, 0.1).unwrap();
    let expected = MANAKOV_FACTOR * fiber.gamma_w_km * p * fiber.length_km;
    let phase = s.x[10].arg();
    let wrapped = (phase - expected + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
    assert!(wrapped.abs() < 1e-6, "{phase} vs {expected}");
}

#[test]
fn cw_self_phase_modulation_with_loss() {
    let p = 1e-2;
    let fiber = FiberParams {
        disp_ps_nm_km: 0.0,
        ..FiberParams::default()
    };
    let mut s = cw(p);
    ssfm_span(&mut s, &fiber, 0.5).unwrap();
    let a = fiber.alpha_per_km();
    let l_eff = (1.0 - (-a * fiber.length_km).exp()) / a;
    let expected = MANAKOV_FACTOR * fiber.gamma_w_km * p * l_eff;
    assert!((s.x[0].arg() - expected).abs() < 1e-9, "{} vs {expected}", s.x[0].arg());
    let loss = (-a * fiber.length_km).exp();
    assert!((s.power() / (p * loss) - 1.0).abs() < 1e-12);
}
