use proptest::prelude::*;
use romkit::analysis::{
    aggregate, angle_series, channel_rom, compare_profiles, median_filter, resample_cycle, rom_summary, segment_cycles,
    smooth, AngleSeries, Channel, CycleSource, MovementCycle, Segmentation, LABEL_CONTROL, LABEL_ORTHOSIS,
    LABEL_PATIENT,
};
use romkit::geometry::FlexJoint;
use romkit::skeleton::Finger;
use romkit::synth::{generate_synthetic, Drive, SynthParams};

fn ring_pip() -> Channel {
    Channel::default_segmentation()
}

fn opt_vec() -> impl Strategy<Value = Vec<Option<f64>>> {
    prop::collection::vec(prop::option::weighted(0.8, -180.0..180.0f64), 1..80)
}

proptest! {
    #[test]
    fn median_stays_within_window_envelope(values in opt_vec(), half in 0usize..4) {
        let w = 2 * half + 1;
        let out = median_filter(&values, w);
        prop_assert_eq!(out.len(), values.len());
        for (i, v) in out.iter().enumerate() {
            prop_assert_eq!(v.is_some(), values[i].is_some());
            if let Some(v) = v {
                let lo = i.saturating_sub(half);
                let hi = (i + half).min(values.len() - 1);
                let near: Vec<f64> = values[lo..=hi].iter().flatten().copied().collect();
                let min = near.iter().copied().fold(f64::INFINITY, f64::min);
                let max = near.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(*v >= min && *v <= max);
            }
        }
    }

    #[test]
    fn window_one_is_identity(values in opt_vec()) {
        prop_assert_eq!(median_filter(&values, 1), values);
    }

    #[test]
    fn constant_signal_is_fixed_point(c in -90.0..90.0f64, n in 1usize..50, half in 0usize..4) {
        let v = vec![Some(c); n];
        prop_assert_eq!(median_filter(&v, 2 * half + 1), v);
    }

    #[test]
    fn resampling_is_exact_on_affine_channels(a in -50.0..50.0f64, b in -2.0..2.0f64, start in 0usize..20, len in 1usize..60, n in 2usize..200) {
        let end = start + len;
        let values = (0..=end + 3).map(|i| Some(a + b * i as f64)).collect();
        let s = AngleSeries::single_channel("a", 30.0, ring_pip(), values);
        let c = MovementCycle { channel: ring_pip(), start_frame: start, peak_frame: start, end_frame: end, source: CycleSource::Landmark };
        let r = resample_cycle(&s, ring_pip(), &c, n).unwrap();
        for (i, v) in r.iter().enumerate() {
            let t = start as f64 + len as f64 * i as f64 / (n - 1) as f64;
            prop_assert!((v - (a + b * t)).abs() < 1e-9);
        }
    }

    #[test]
    fn rom_matches_brute_force(values in opt_vec()) {
        let present: Vec<f64> = values.iter().flatten().copied().collect();
        match channel_rom(&values) {
            None => prop_assert!(present.is_empty()),
            Some(e) => {
                prop_assert!(present.iter().all(|v| *v >= e.min && *v <= e.max));
                prop_assert!(present.contains(&e.min) && present.contains(&e.max));
            }
        }
    }
}

fn detected(k: usize, sigma: f64, seed: u64) -> usize {
    let params = SynthParams { n_cycles: k, noise_sigma: sigma, seed, ..SynthParams::default() };
    let seq = generate_synthetic(&params).unwrap();
    let series = smooth(&angle_series("s", &seq), 5).unwrap();
    segment_cycles(&series, ring_pip(), &Segmentation::Auto { prominence: 10.0 }).unwrap().len()
}

#[test]
fn detects_every_synthetic_cycle() {
    for k in 1..=10 {
        for seed in 0..5 {
            assert_eq!(detected(k, 2.0, seed), k, "k={k} seed={seed}");
        }
        assert_eq!(detected(k, 0.0, 0), k);
    }
}

#[test]
fn auto_cycles_are_ordered_and_touch_only_at_boundaries() {
    let params = SynthParams { n_cycles: 6, noise_sigma: 1.0, seed: 3, ..SynthParams::default() };
    let series = smooth(&angle_series("s", &generate_synthetic(&params).unwrap()), 5).unwrap();
    let cycles = segment_cycles(&series, ring_pip(), &Segmentation::Auto { prominence: 10.0 }).unwrap();
    for c in &cycles {
        assert!(c.start_frame < c.peak_frame && c.peak_frame < c.end_frame);
    }
    for w in cycles.windows(2) {
        assert!(w[1].start_frame >= w[0].end_frame);
    }
}

fn profile_of(params: &SynthParams, channel: Channel) -> romkit::analysis::CycleProfile {
    let series = angle_series("s", &generate_synthetic(params).unwrap());
    let cycles = segment_cycles(&series, channel, &Segmentation::Landmarks(params.cycle_bounds())).unwrap();
    let curves: Vec<Vec<f64>> = cycles.iter().map(|c| resample_cycle(&series, channel, c, 100).unwrap()).collect();
    aggregate(channel, &curves).unwrap()
}

#[test]
fn noisy_mean_recovers_clean_curve() {
    let sigma = 2.0;
    let params = SynthParams { n_cycles: 50, noise_sigma: sigma, seed: 11, ..SynthParams::default() };
    let p = profile_of(&params, ring_pip());
    let fpc = params.frames_per_cycle as f64;
    for i in 0..100 {
        let clean = params.expected(fpc * i as f64 / 99.0)[FlexJoint::Pip as usize];
        assert!((p.mean[i] - clean).abs() < 1.0, "sample {i}: {} vs {clean}", p.mean[i]);
        assert!(p.std[i] > 0.0 && p.std[i] <= 3.0 * sigma, "sample {i}: std {}", p.std[i]);
    }
}

#[test]
fn single_cycle_has_zero_std() {
    let params = SynthParams { n_cycles: 1, noise_sigma: 1.5, ..SynthParams::default() };
    let p = profile_of(&params, ring_pip());
    assert_eq!(p.n_cycles, 1);
    assert!(p.std.iter().all(|s| *s == 0.0));
}

#[test]
fn rom_of_clean_sinusoid() {
    let params = SynthParams {
        flexion: [Drive::new(40.0, 30.0), Drive::new(45.0, 40.0), Drive::new(30.0, 20.0)],
        ..SynthParams::default()
    };
    let rom = rom_summary(&angle_series("s", &generate_synthetic(&params).unwrap()));
    for f in Finger::ALL {
        let e = rom.get(Channel::Flexion(f, FlexJoint::Pip)).unwrap();
        assert!((e.min - 5.0).abs() < 0.2 && (e.max - 85.0).abs() < 0.2, "{f}: {e:?}");
    }
}

#[test]
fn comparison_orders_groups_by_peak() {
    let group = |amp: f64, sigma: f64, seed: u64| {
        let params = SynthParams {
            n_cycles: 10,
            noise_sigma: sigma,
            seed,
            flexion: [Drive::new(40.0, 30.0), Drive::new(10.0 + amp, amp), Drive::new(30.0, 20.0)],
            ..SynthParams::default()
        };
        profile_of(&params, ring_pip())
    };
    let cmp = compare_profiles(vec![
        (LABEL_CONTROL.to_string(), group(40.0, 1.0, 1)),
        (LABEL_PATIENT.to_string(), group(20.0, 2.0, 2)),
        (LABEL_ORTHOSIS.to_string(), group(30.0, 1.0, 3)),
    ])
    .unwrap();
    assert_eq!(cmp.labels_by_peak(), vec![LABEL_CONTROL, LABEL_ORTHOSIS, LABEL_PATIENT]);
    let obs = cmp.orthosis.clone().unwrap();
    assert!(obs.lower_with_orthosis());
    let diff = cmp.mean_difference(LABEL_CONTROL, LABEL_PATIENT).unwrap();
    assert!(diff.iter().all(|d| *d >= -1.0));
}

#[test]
fn smooth_filters_each_channel_independently() {
    let params = SynthParams { noise_sigma: 2.0, seed: 5, ..SynthParams::default() };
    let raw = angle_series("s", &generate_synthetic(&params).unwrap());
    let s = smooth(&raw, 5).unwrap();
    for ch in Channel::all() {
        assert_eq!(s.channel(ch), median_filter(raw.channel(ch), 5).as_slice());
    }
}
