mod common;

use bicmb::convcode::CodeSpec;
use bicmb::interleaver::InterleaverSpec;
use bicmb::mimo_phy::ConstellationName;
use bicmb::simulator::{estimate_diversity, run_frame, sweep_snr, ChannelModel, SimConfig, SimError, SnrDb};
use common::{bpsk_ber, q_function, reference_viterbi, shift_register_encode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn uncoded(constellation: ConstellationName, streams: usize, channel: ChannelModel, snr: f64) -> SimConfig {
    let b = match constellation {
        ConstellationName::Bpsk => 1,
        ConstellationName::Qpsk => 2,
        ConstellationName::Qam16 => 4,
    };
    SimConfig {
        code: None,
        interleaver: InterleaverSpec::round_robin(streams, b, streams * b).unwrap(),
        constellation,
        num_tx: streams,
        num_rx: streams,
        num_streams: streams,
        channel,
        snr_db: vec![SnrDb(snr)],
        info_bits_per_frame: 1024,
        max_frames: 1_000_000,
        target_bit_errors: 1000,
        master_seed: 11,
    }
}

/// `|measured - expected|` within `k` binomial standard deviations.
fn within_binomial(errors: u64, trials: u64, p: f64, k: f64) -> bool {
    let measured = errors as f64 / trials as f64;
    (measured - p).abs() <= k * (p * (1.0 - p) / trials as f64).sqrt()
}

#[test]
fn uncoded_bpsk_awgn_matches_q_function() {
    for snr in [0.0, 4.0, 6.0] {
        let curve = sweep_snr::<f64>(&uncoded(ConstellationName::Bpsk, 1, ChannelModel::Bypass, snr), 2).unwrap();
        let p = &curve.points[0];
        assert!(p.bit_errors >= 1000);
        assert!(
            within_binomial(p.bit_errors, p.bits, bpsk_ber(snr), 3.0),
            "{snr} dB: {} vs {}",
            p.ber,
            bpsk_ber(snr)
        );
    }
}

#[test]
fn uncoded_qpsk_two_streams_splits_power() {
    // SNR counts total power over S streams: each QPSK stream sees Es/N0 = snr / 2.
    let snr = 6.0;
    let curve = sweep_snr::<f64>(&uncoded(ConstellationName::Qpsk, 2, ChannelModel::Bypass, snr), 2).unwrap();
    let p = &curve.points[0];
    let expected = q_function((10f64.powf(snr / 10.0) / 2.0).sqrt());
    assert!(
        within_binomial(p.bit_errors, p.bits, expected, 3.0),
        "{} vs {expected}",
        p.ber
    );
}

#[test]
fn uncoded_16qam_symbol_energy() {
    // Gray 16-QAM at high SNR: BER ~ (3/4) Q(sqrt(Es / (5 N0))).
    let snr = 16.0;
    let curve = sweep_snr::<f64>(&uncoded(ConstellationName::Qam16, 1, ChannelModel::Bypass, snr), 1).unwrap();
    let p = &curve.points[0];
    let es_n0 = 10f64.powf(snr / 10.0);
    let expected = 0.75 * q_function((es_n0 / 5.0).sqrt());
    assert!((p.ber / expected - 1.0).abs() < 0.15, "{} vs {expected}", p.ber);
}

#[test]
fn uncoded_rayleigh_1x1_matches_closed_form() {
    let snr = 10.0;
    let mut cfg = uncoded(ConstellationName::Bpsk, 1, ChannelModel::Rayleigh, snr);
    cfg.info_bits_per_frame = 8;
    cfg.max_frames = 40_000;
    cfg.target_bit_errors = u64::MAX;
    let p = sweep_snr::<f64>(&cfg, 2).unwrap().points[0].clone();
    let g = 10f64.powf(snr / 10.0);
    let expected = 0.5 * (1.0 - (g / (1.0 + g)).sqrt());
    // One fade per frame: bound the spread by the per-frame variance, at most p / 2.
    let sd = (expected * 0.5 / p.frames as f64).sqrt();
    assert!((p.ber - expected).abs() <= 4.0 * sd, "{} vs {expected}", p.ber);
}

/// Frame error count of a BICM chain built only from the test oracles.
fn reference_bicm_frames(snr_db: f64, frames: u64, info_bits: usize, seed: u64) -> u64 {
    let gens = [5u32, 7];
    let n0 = 1.0 / 10f64.powf(snr_db / 10.0);
    let sd = (n0 / 2.0).sqrt();
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = 0;
    for _ in 0..frames {
        let info: Vec<u8> = (0..info_bits).map(|_| rng.random_range(0..2)).collect();
        let mut padded = info.clone();
        padded.extend([0, 0]);
        let coded = shift_register_encode(3, &gens, &padded);
        let mut costs = Vec::with_capacity(coded.len());
        for pair in coded.chunks(2) {
            for &bit in pair {
                let sent = a * (1.0 - 2.0 * f64::from(bit));
                let noise: f64 = rng.sample(StandardNormal);
                let y = sent + sd * noise;
                costs.push([(y - a).powi(2), (y + a).powi(2)]);
            }
        }
        let decoded = reference_viterbi(3, &gens, &costs);
        errors += u64::from(decoded != info);
    }
    errors
}

#[test]
fn bicm_awgn_agrees_with_reference_chain() {
    let snr = 1.0;
    let frames = 4000;
    let cfg = SimConfig {
        code: Some(CodeSpec::new(3, vec![5, 7]).unwrap()),
        interleaver: InterleaverSpec::round_robin(1, 2, 2).unwrap(),
        constellation: ConstellationName::Qpsk,
        num_tx: 1,
        num_rx: 1,
        num_streams: 1,
        channel: ChannelModel::Bypass,
        snr_db: vec![SnrDb(snr)],
        info_bits_per_frame: 64,
        max_frames: frames,
        target_bit_errors: u64::MAX,
        master_seed: 3,
    };
    let lib = sweep_snr::<f64>(&cfg, 2).unwrap().points[0].clone();
    assert_eq!(lib.frames, frames);
    let reference = reference_bicm_frames(snr, frames, 64, 77);
    let (p1, p2) = (
        lib.frame_errors as f64 / frames as f64,
        reference as f64 / frames as f64,
    );
    let pooled = (p1 + p2) / 2.0;
    let sd = (pooled * (1.0 - pooled) * 2.0 / frames as f64).sqrt();
    assert!(pooled > 0.05 && pooled < 0.95, "operating point off: {pooled}");
    assert!((p1 - p2).abs() <= 4.0 * sd, "library FER {p1} vs reference {p2}");
}

#[test]
fn noiseless_sentinel_gives_zero_ber() {
    let mut cfg = uncoded(ConstellationName::Qam16, 2, ChannelModel::Rayleigh, 0.0);
    cfg.code = Some(CodeSpec::industry_standard());
    cfg.interleaver = InterleaverSpec::round_robin(2, 4, 8).unwrap();
    cfg.info_bits_per_frame = 122;
    cfg.snr_db = vec![SnrDb::NOISELESS];
    cfg.max_frames = 50;
    let curve = sweep_snr::<f64>(&cfg, 1).unwrap();
    assert_eq!(curve.points[0].bit_errors, 0);
    let curve32 = sweep_snr::<f32>(&cfg, 1).unwrap();
    assert_eq!(curve32.points[0].bit_errors, 0);
}

#[test]
fn frames_depend_only_on_seed_snr_and_index() {
    let mut cfg = uncoded(ConstellationName::Qpsk, 2, ChannelModel::Rayleigh, 3.0);
    cfg.code = Some(CodeSpec::industry_standard());
    cfg.interleaver = InterleaverSpec::round_robin(2, 2, 4).unwrap();
    cfg.info_bits_per_frame = 122;
    let a: Vec<_> = (0..30)
        .map(|f| run_frame::<f64>(&cfg, SnrDb(3.0), f).unwrap())
        .collect();
    let b: Vec<_> = (0..30)
        .rev()
        .map(|f| run_frame::<f64>(&cfg, SnrDb(3.0), f).unwrap())
        .collect();
    assert_eq!(a, b.into_iter().rev().collect::<Vec<_>>());
    cfg.snr_db = vec![SnrDb(3.0)];
    cfg.max_frames = 150;
    cfg.target_bit_errors = 400;
    let one = sweep_snr::<f64>(&cfg, 1).unwrap();
    let many = sweep_snr::<f64>(&cfg, 5).unwrap();
    assert_eq!(one.to_csv(), many.to_csv());
}

#[test]
fn invalid_configs_rejected() {
    let base = || {
        let mut c = uncoded(ConstellationName::Qpsk, 2, ChannelModel::Rayleigh, 3.0);
        c.code = Some(CodeSpec::industry_standard());
        c.interleaver = InterleaverSpec::round_robin(2, 2, 4).unwrap();
        c.info_bits_per_frame = 122;
        c
    };
    let mut c = base();
    c.num_tx = 1;
    assert!(matches!(c.validate(), Err(SimError::Config(_))));
    let mut c = base();
    c.info_bits_per_frame = 123;
    assert!(matches!(c.validate(), Err(SimError::Config(_))));
    let mut c = base();
    c.interleaver = InterleaverSpec::round_robin(2, 1, 4).unwrap();
    assert!(matches!(c.validate(), Err(SimError::Config(_))));
    let mut c = base();
    c.snr_db = vec![SnrDb(4.0), SnrDb(2.0)];
    assert!(matches!(c.validate(), Err(SimError::Config(_))));
    let mut c = base();
    c.max_frames = 0;
    assert!(matches!(c.validate(), Err(SimError::Config(_))));
    assert!(base().validate().is_ok());
}

#[test]
fn diversity_of_uncoded_rayleigh_is_one() {
    let mut cfg = uncoded(ConstellationName::Bpsk, 1, ChannelModel::Rayleigh, 0.0);
    cfg.info_bits_per_frame = 4;
    cfg.snr_db = [10.0, 15.0, 20.0, 25.0].map(SnrDb).to_vec();
    cfg.max_frames = 200_000;
    cfg.target_bit_errors = 2000;
    let curve = sweep_snr::<f64>(&cfg, 2).unwrap();
    let d = estimate_diversity(&curve, (10.0, 25.0), 100).unwrap();
    assert!((d.order - 1.0).abs() < 0.15, "{d:?}");
}
