use pmr_core::waveform::{
    apply_noise, dibit_response, snr_db, snr_to_sigma, step_derivative, step_response, synthesize_by_transitions,
    synthesize_noiseless, synthesize_symbols, taylor_step, truncation_tail_bound, BipolarFrame, NoiseConfig,
    StepParams, DEFAULT_SPAN,
};
use proptest::prelude::*;

fn params() -> StepParams {
    StepParams::default()
}

fn frame(bits: &[u8]) -> BipolarFrame {
    BipolarFrame::new(Vec::new(), bits.to_vec())
}

#[test]
fn jitter_taylor_error_is_small() {
    let p = params();
    for i in 0..=400 {
        let t = -10.0 + i as f64 * 0.05;
        for delta in [-0.1, -0.05, -0.013, 0.02, 0.07, 0.1] {
            let exact = step_response(t + delta, &p);
            let approx = taylor_step(t, delta, 6, &p);
            assert!((exact - approx).abs() < 1e-6, "t={t} δ={delta}: {}", exact - approx);
        }
    }
}

#[test]
fn higher_derivatives_match_finite_differences() {
    let p = params();
    let h = 1e-4;
    for order in 1..6 {
        for t in [-1.3, -0.4, 0.0, 0.25, 0.9, 2.2] {
            let up = step_derivative(t + h, order, 6, &p).unwrap();
            let down = step_derivative(t - h, order, 6, &p).unwrap();
            let fd = (up - down) / (2.0 * h);
            let exact = step_derivative(t, order + 1, 6, &p).unwrap();
            assert!((fd - exact).abs() < 1e-5 * (1.0 + exact.abs()), "order {} at {t}", order + 1);
        }
    }
}

#[test]
fn electronic_noise_variance() {
    let bits: Vec<u8> = (0..1_000_000u64).map(|i| ((i * 7919) % 3 == 0) as u8).collect();
    let signal = synthesize_noiseless(&frame(&bits), &params(), DEFAULT_SPAN).unwrap();
    let cfg = NoiseConfig {
        sigma_e: 0.1,
        seed: 5,
        ..NoiseConfig::default()
    };
    let rb = apply_noise(&signal, &cfg, &params()).unwrap();
    let n = rb.electronic_noise.len() as f64;
    let mean = rb.electronic_noise.iter().sum::<f64>() / n;
    let var = rb.electronic_noise.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n;
    assert!((var - 0.01).abs() < 1e-4, "{var}");
}

#[test]
fn noise_is_reproducible_and_seed_dependent() {
    let bits: Vec<u8> = (0..500).map(|i| (i % 5 < 2) as u8).collect();
    let signal = synthesize_noiseless(&frame(&bits), &params(), DEFAULT_SPAN).unwrap();
    let cfg = NoiseConfig {
        sigma_e: 0.2,
        sigma_m: 0.3,
        jitter_max: 0.05,
        seed: 11,
        ..NoiseConfig::default()
    };
    let a = apply_noise(&signal, &cfg, &params()).unwrap();
    let b = apply_noise(&signal, &cfg, &params()).unwrap();
    assert_eq!(a, b);
    let c = apply_noise(&signal, &NoiseConfig { seed: 12, ..cfg }, &params()).unwrap();
    assert_ne!(a.samples, c.samples);
    for i in 0..a.len() {
        let sum = a.noiseless[i] + a.media_noise[i] + a.jitter_noise[i] + a.electronic_noise[i];
        assert_eq!(a.samples[i], sum);
    }
}

#[test]
fn jitter_noise_matches_shifted_sampling() {
    // With only jitter, each sample equals the noiseless waveform sampled at
    // j + δ_j up to the Taylor remainder; check against the exact transition
    // form for a constant shift reconstructed from the noise itself.
    let bits: Vec<u8> = (0..64).map(|i| ((i * 13) % 7 < 3) as u8).collect();
    let p = params();
    let signal = synthesize_noiseless(&frame(&bits), &p, DEFAULT_SPAN).unwrap();
    let cfg = NoiseConfig {
        jitter_max: 0.1,
        seed: 3,
        ..NoiseConfig::default()
    };
    let rb = apply_noise(&signal, &cfg, &p).unwrap();
    let max = rb.jitter_noise.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // |x'| ≤ 2·A·ln3/PW50 bounds the first-order term.
    assert!(max > 0.0 && max <= 0.1 * 2.0 * 3f64.ln() / 1.4 + 1e-6, "{max}");
    assert!(rb.media_noise.iter().all(|&v| v == 0.0));
    assert!(rb.electronic_noise.iter().all(|&v| v == 0.0));
}

#[test]
fn snr_definition_round_trips() {
    for snr in [-3.0, 0.0, 7.5, 12.0, 25.0] {
        for fraction in [0.0, 0.3, 0.8, 1.0] {
            let (se, sm) = snr_to_sigma(snr, fraction).unwrap();
            assert!((snr_db(se, sm) - snr).abs() < 1e-12);
            let total = se * se + sm * sm;
            if total > 0.0 {
                assert!((sm * sm / total - fraction).abs() < 1e-12);
            }
        }
    }
    assert!(snr_to_sigma(10.0, 1.2).is_err());
}

#[test]
fn media_noise_vanishes_where_signal_saturates() {
    let bits = vec![1u8; 60];
    let signal = synthesize_noiseless(&frame(&bits), &params(), DEFAULT_SPAN).unwrap();
    let cfg = NoiseConfig {
        sigma_m: 0.5,
        seed: 1,
        ..NoiseConfig::default()
    };
    let rb = apply_noise(&signal, &cfg, &params()).unwrap();
    let mid = rb.pad + 30;
    assert!(rb.noiseless[mid].abs() > 1.0 - 1e-9);
    assert!(rb.media_noise[mid].abs() < 1e-3);
}

proptest! {
    #[test]
    fn dibit_and_transition_forms_agree(bits in prop::collection::vec(0u8..2, 1..80)) {
        let p = params();
        let f = frame(&bits);
        let symbols = f.padded_symbols(DEFAULT_SPAN);
        let dibit = synthesize_symbols(&symbols, &p, DEFAULT_SPAN).unwrap();
        let exact = synthesize_by_transitions(&symbols, &p).unwrap();
        let bound = truncation_tail_bound(&p, DEFAULT_SPAN);
        for (a, b) in dibit.iter().zip(&exact) {
            prop_assert!((a - b).abs() <= 10.0 * bound + 1e-12, "{} vs {}", a, b);
        }
    }

    #[test]
    fn signal_is_odd_in_the_symbols(bits in prop::collection::vec(0u8..2, 1..40)) {
        let p = params();
        let f = frame(&bits);
        let symbols = f.padded_symbols(DEFAULT_SPAN);
        let neg: Vec<f64> = symbols.iter().map(|s| -s).collect();
        let a = synthesize_symbols(&symbols, &p, DEFAULT_SPAN).unwrap();
        let b = synthesize_symbols(&neg, &p, DEFAULT_SPAN).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(*x, -*y);
        }
    }

    #[test]
    fn step_is_odd_and_bounded(t in -50.0f64..50.0, a in 0.1f64..3.0, pw50 in 0.5f64..3.0) {
        let p = StepParams::new(a, pw50).unwrap();
        let s = step_response(t, &p);
        prop_assert_eq!(s, -step_response(-t, &p));
        prop_assert!(s.abs() <= a);
        prop_assert!((dibit_response(t, &p) - (s - step_response(t - 1.0, &p))).abs() < 1e-15);
    }
}
