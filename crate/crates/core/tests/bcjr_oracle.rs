mod common;

use pmr_core::equalize::PrTarget;
use pmr_core::rvcm::reconstruct;
use pmr_core::trellis::{bcjr, build_trellis, build_trellis_with_pad, DetectorConfig, Recursion};
use pmr_core::{LlrVector, Sign, PAD_SYMBOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Case {
    z: Vec<f64>,
    priors: Vec<f64>,
    sigma2: f64,
}

fn random_case(rng: &mut ChaCha8Rng, target: &PrTarget) -> Case {
    let n = rng.random_range(1..=10);
    let bits: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
    let sigma2: f64 = rng.random_range(0.3..4.0);
    let clean = reconstruct(&bits, target, PAD_SYMBOL);
    let z = clean
        .iter()
        .map(|x| x + sigma2.sqrt() * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let priors = (0..n)
        .map(|_| if rng.random_bool(0.3) { 0.0 } else { rng.random_range(-4.0..4.0) })
        .collect();
    Case { z, priors, sigma2 }
}

#[test]
fn exact_mode_matches_enumeration() {
    let target = PrTarget::default();
    let trellis = build_trellis(&target).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let case = random_case(&mut rng, &target);
        let cfg = DetectorConfig::new(case.sigma2);
        let out = bcjr(&trellis, &case.z, &LlrVector::from_vec(case.priors.clone()), &cfg).unwrap();
        let oracle = common::enumerate_app(&target, &case.z, &case.priors, case.sigma2, PAD_SYMBOL, false);
        for j in 0..case.priors.len() {
            assert!((out.app[j] - oracle[j]).abs() < 1e-6, "j={j}: {} vs {}", out.app[j], oracle[j]);
            assert!((out.extrinsic[j] - (out.app[j] - case.priors[j])).abs() < 1e-9);
        }
    }
}

#[test]
fn max_star_mode_matches_max_log_enumeration() {
    let target = PrTarget::default();
    let trellis = build_trellis(&target).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let case = random_case(&mut rng, &target);
        let cfg = DetectorConfig {
            recursion: Recursion::MaxStar,
            ..DetectorConfig::new(case.sigma2)
        };
        let out = bcjr(&trellis, &case.z, &LlrVector::from_vec(case.priors.clone()), &cfg).unwrap();
        let oracle = common::enumerate_app(&target, &case.z, &case.priors, case.sigma2, PAD_SYMBOL, true);
        for j in 0..case.priors.len() {
            assert!((out.app[j] - oracle[j]).abs() < 1e-9, "j={j}: {} vs {}", out.app[j], oracle[j]);
        }
    }
}

#[test]
fn other_targets_and_pads_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for coefficients in [vec![1.0, 1.0], vec![1.0, 2.0, 1.0], vec![2.0], vec![3.0, -1.0, 0.5, 0.0, 1.0]] {
        let target = PrTarget::new(coefficients).unwrap();
        for pad in [-1.0, 1.0] {
            let trellis = build_trellis_with_pad(&target, pad).unwrap();
            for _ in 0..10 {
                let case = random_case(&mut rng, &target);
                let z: Vec<f64> = {
                    // Re-derive z for this pad so the observation is consistent.
                    let n = case.priors.len();
                    let bits: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
                    reconstruct(&bits, &target, pad)
                        .iter()
                        .map(|x| x + 0.7 * rng.sample::<f64, _>(StandardNormal))
                        .collect()
                };
                let cfg = DetectorConfig::new(case.sigma2);
                let out = bcjr(&trellis, &z, &LlrVector::from_vec(case.priors.clone()), &cfg).unwrap();
                let oracle = common::enumerate_app(&target, &z, &case.priors, case.sigma2, pad, false);
                for j in 0..case.priors.len() {
                    assert!((out.app[j] - oracle[j]).abs() < 1e-6);
                }
            }
        }
    }
}

#[test]
fn saturated_prior_is_a_hard_constraint() {
    let target = PrTarget::default();
    let trellis = build_trellis(&target).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..30 {
        let case = random_case(&mut rng, &target);
        let n = case.priors.len();
        let pinned = rng.random_range(0..n);
        let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let mut priors = LlrVector::from_vec(case.priors.clone());
        priors.saturate(pinned, sign);
        let out = bcjr(&trellis, &case.z, &priors, &DetectorConfig::new(case.sigma2)).unwrap();
        assert_eq!(out.app[pinned], sign.infinity());
        assert_eq!(out.extrinsic[pinned], sign.infinity());
        assert!(out.app.values().iter().all(|v| !v.is_nan()));

        // Conditioning the enumeration on the pinned bit gives the other APPs.
        let mut big = case.priors.clone();
        big[pinned] = sign.infinity().signum() * 600.0;
        let oracle = common::enumerate_app(&target, &case.z, &big, case.sigma2, PAD_SYMBOL, false);
        for j in (0..n).filter(|&j| j != pinned) {
            assert!((out.app[j] - oracle[j]).abs() < 1e-6, "j={j}: {} vs {}", out.app[j], oracle[j]);
        }
    }
}

#[test]
fn length_checks() {
    let trellis = build_trellis(&PrTarget::default()).unwrap();
    let cfg = DetectorConfig::new(1.0);
    assert!(bcjr(&trellis, &[0.0; 5], &LlrVector::zeros(5), &cfg).is_err());
    assert!(bcjr(&trellis, &[0.0, 0.0, 0.0, f64::NAN, 0.0, 0.0, 0.0, 0.0], &LlrVector::zeros(5), &cfg).is_err());
}
