mod common;

use pmr_core::harness::{frame_seed, generate_frame, ExperimentConfig, PointContext};
use pmr_core::rvcm::{rvcm_decode, IMax, Origin, RestartMode, RvcmConfig, SelectionSource, Selected};
use pmr_core::turboeq::{self, LoopConfig};
use pmr_core::Sign;

fn setup(code: &str, snr: f64) -> (ExperimentConfig, PointContext, LoopConfig) {
    let mut cfg = ExperimentConfig::default();
    cfg.set("channel", "awgn").unwrap();
    cfg.set("code", code).unwrap();
    let ctx = PointContext::prepare(&cfg, snr).unwrap();
    let lc = ctx.loop_config(&cfg, 0.0);
    (cfg, ctx, lc)
}

fn searching(i_max: IMax) -> RvcmConfig {
    RvcmConfig {
        i_max,
        early_exit: false,
        ..RvcmConfig::default()
    }
}

#[test]
fn selection_picks_the_ml_codeword_whenever_it_is_listed() {
    let (cfg, ctx, lc) = setup("cyclic-15-7", 0.0);
    let t = &ctx.trellis;
    let mut listed = 0;
    for idx in 0..300 {
        let f = generate_frame(&cfg, &ctx, frame_seed(&cfg, 0.0, 0.0, idx)).unwrap();
        let out = rvcm_decode(&f.z, &ctx.code, t, &lc, &searching(IMax::All)).unwrap();
        let (ml, ml_metric) = common::ml_codeword(&ctx.code, &f.z, &t.target, t.pad_symbol);
        let set = &out.candidates;
        let all = std::iter::once(&set.baseline).chain(&set.entries);
        if all.clone().any(|c| c.decode.hard_bits == ml) {
            listed += 1;
            let chosen = set.selected();
            assert!(chosen.is_codeword());
            assert!((chosen.metric - ml_metric).abs() < 1e-9, "frame {idx}");
        }
        for c in all {
            let d = pmr_core::rvcm::euclidean_metric(&c.decode.hard_bits, &f.z, &t.target, t.pad_symbol).unwrap();
            assert_eq!(c.metric, d);
        }
    }
    assert!(listed > 250, "{listed}");
}

#[test]
fn smaller_i_max_lists_are_prefixes() {
    let (cfg, ctx, lc) = setup("cyclic-15-7", -1.0);
    for idx in 0..60 {
        let f = generate_frame(&cfg, &ctx, frame_seed(&cfg, -1.0, 0.0, idx)).unwrap();
        let full = rvcm_decode(&f.z, &ctx.code, &ctx.trellis, &lc, &searching(IMax::All)).unwrap();
        assert_eq!(full.candidates.len(), 31);
        let mut previous = f64::INFINITY;
        for k in [1, 2, 4, 8] {
            let out = rvcm_decode(&f.z, &ctx.code, &ctx.trellis, &lc, &searching(IMax::Count(k))).unwrap();
            assert_eq!(out.candidates.positions[..], full.candidates.positions[..k]);
            assert_eq!(out.candidates.entries[..], full.candidates.entries[..2 * k]);
            let m = out.candidates.selected().metric;
            assert!(m <= previous || !out.candidates.selected().is_codeword());
            previous = m;
        }
    }
}

#[test]
fn candidates_follow_the_pinning_order() {
    let (cfg, ctx, lc) = setup("cyclic-127-84", 1.0);
    let f = generate_frame(&cfg, &ctx, frame_seed(&cfg, 1.0, 0.0, 3)).unwrap();
    let out = rvcm_decode(&f.z, &ctx.code, &ctx.trellis, &lc, &searching(IMax::Count(10))).unwrap();
    let set = &out.candidates;
    // The reliability sequence is the baseline detector APP, restored once.
    assert_eq!(set.reliability, out.baseline_loop.detector_app);
    assert_eq!(set.entries.len(), 20);
    for (i, c) in set.entries.iter().enumerate() {
        let Origin::Pinned(pin) = c.origin else { panic!("entry {i} is not pinned") };
        assert_eq!(pin.position, set.positions[i / 2]);
        assert_eq!(pin.sign, if i % 2 == 0 { Sign::Minus } else { Sign::Plus });
        assert_eq!(c.decode.hard_bits[pin.position], (pin.sign == Sign::Plus) as u8);
    }
    let magnitudes: Vec<f64> = set.positions.iter().map(|&p| set.reliability[p].abs()).collect();
    assert!(magnitudes.windows(2).all(|w| w[0] <= w[1]));
    let cutoff = magnitudes[9];
    let below = set.reliability.values().iter().filter(|v| v.abs() < cutoff).count();
    assert!(below < 10);
}

#[test]
fn early_exit_skips_the_search_on_a_codeword() {
    let (cfg, ctx, lc) = setup("cyclic-127-84", 6.0);
    let f = generate_frame(&cfg, &ctx, frame_seed(&cfg, 6.0, 0.0, 0)).unwrap();
    let out = rvcm_decode(&f.z, &ctx.code, &ctx.trellis, &lc, &RvcmConfig::default()).unwrap();
    assert!(out.candidates.early_exit);
    assert!(out.candidates.entries.is_empty());
    assert_eq!(out.candidates.selected, Selected::Baseline);
    assert_eq!(out.best.hard_bits, f.codeword);
    let full = rvcm_decode(&f.z, &ctx.code, &ctx.trellis, &lc, &searching(IMax::Count(3))).unwrap();
    assert!(!full.candidates.early_exit);
    assert_eq!(full.candidates.len(), 7);
}

#[test]
fn selected_candidate_is_sound() {
    let (cfg, ctx, lc) = setup("cyclic-127-84", 0.5);
    for (source, restart) in [
        (SelectionSource::DetectorApp, RestartMode::FullLoop),
        (SelectionSource::BpPosterior, RestartMode::BpOnly),
    ] {
        let rc = RvcmConfig {
            selection_source: source,
            restart,
            ..searching(IMax::Count(6))
        };
        for idx in 0..20 {
            let f = generate_frame(&cfg, &ctx, frame_seed(&cfg, 0.5, 0.0, idx)).unwrap();
            let out = rvcm_decode(&f.z, &ctx.code, &ctx.trellis, &lc, &rc).unwrap();
            let set = &out.candidates;
            let chosen = set.selected();
            assert_eq!(out.best, chosen.decode);
            if chosen.is_codeword() {
                assert_eq!(ctx.code.syndrome_weight(&chosen.decode.hard_bits), 0);
            } else {
                assert!(!set.baseline.is_codeword() && set.entries.iter().all(|c| !c.is_codeword()));
            }
            for c in std::iter::once(&set.baseline).chain(&set.entries) {
                assert!(c.is_codeword() <= chosen.is_codeword());
                if c.is_codeword() == chosen.is_codeword() {
                    assert!(chosen.metric <= c.metric);
                }
            }
            if source == SelectionSource::BpPosterior {
                assert_eq!(set.reliability, out.baseline_loop.decode.soft_llr);
            }
        }
    }
}

#[test]
fn bp_only_restart_reuses_the_stored_decoder_input() {
    let (cfg, ctx, lc) = setup("cyclic-127-84", 0.5);
    let rc = RvcmConfig {
        restart: RestartMode::BpOnly,
        ..searching(IMax::Count(2))
    };
    let f = generate_frame(&cfg, &ctx, frame_seed(&cfg, 0.5, 0.0, 1)).unwrap();
    let out = rvcm_decode(&f.z, &ctx.code, &ctx.trellis, &lc, &rc).unwrap();
    for c in &out.candidates.entries {
        let Origin::Pinned(pin) = c.origin else { unreachable!() };
        let again = turboeq::decode_pinned(&ctx.code, &out.baseline_loop.decoder_input, &lc.bp, &[pin]).unwrap();
        assert_eq!(c.decode, again);
    }
}

#[test]
fn thread_count_does_not_change_the_result() {
    let (cfg, ctx, lc) = setup("cyclic-127-84", 1.0);
    let run = || {
        (0..8)
            .map(|idx| {
                let f = generate_frame(&cfg, &ctx, frame_seed(&cfg, 1.0, 0.0, idx)).unwrap();
                rvcm_decode(&f.z, &ctx.code, &ctx.trellis, &lc, &searching(IMax::Count(10))).unwrap()
            })
            .collect::<Vec<_>>()
    };
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
    assert_eq!(serial, wide);
}
