mod common;

use bicmb::convcode::{
    build_trellis, check_catastrophic, default_bounds, encode, enumerate_error_events, enumerate_error_events_capped,
    free_distance, viterbi_decode, viterbi_decode_with_cost, CodeError, CodeSpec,
};
use common::{
    brute_force_events, codeword_cost, exhaustive_min_cost, free_distance_oracle, shift_register_encode, SMALL_CODES,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn code(k: u32, gens: &[u32]) -> CodeSpec {
    CodeSpec::new(k, gens.to_vec()).unwrap()
}

#[test]
fn enumeration_matches_brute_force_for_small_codes() {
    for &(k, gens) in SMALL_CODES {
        let spec = code(k, gens);
        let got = enumerate_error_events(&build_trellis(&spec), 8, 10).unwrap();
        let expected = brute_force_events(k, gens, 8, 10);
        assert_eq!(got.events.len(), expected.len(), "{spec}");
        for (e, o) in got.events.iter().zip(&expected) {
            assert_eq!(
                (e.weight, e.length, &e.coded_bits, &e.input_bits),
                (o.weight, o.length, &o.coded, &o.input),
                "{spec}"
            );
        }
    }
}

#[test]
fn free_distance_matches_bellman_ford_oracle() {
    for &(k, gens) in SMALL_CODES.iter().chain(&[
        (7, &[0o133, 0o171][..]),
        (5, &[0o23, 0o35][..]),
        (7, &[0o133, 0o145, 0o175][..]),
    ]) {
        let spec = code(k, gens);
        assert_eq!(
            free_distance(&build_trellis(&spec)).unwrap(),
            free_distance_oracle(k, gens),
            "{spec}"
        );
    }
}

#[test]
fn known_free_distances() {
    assert_eq!(free_distance_oracle(3, &[5, 7]), 5);
    assert_eq!(free_distance_oracle(7, &[0o133, 0o171]), 10);
    assert_eq!(
        free_distance(&build_trellis(&CodeSpec::industry_standard())).unwrap(),
        10
    );
}

#[test]
fn spectrum_of_5_7() {
    let events = enumerate_error_events(&build_trellis(&code(3, &[5, 7])), 9, 40).unwrap();
    let counts: Vec<usize> = (5..=9).map(|d| events.count_at_weight(d)).collect();
    assert_eq!(counts, vec![1, 2, 4, 8, 16]);
    let first = &events.events[0];
    assert_eq!(first.coded_bits, vec![1, 1, 0, 1, 1, 1]);
    assert_eq!(first.input_bits, vec![1, 0, 0]);
}

#[test]
fn spectrum_of_133_171() {
    let trellis = build_trellis(&CodeSpec::industry_standard());
    let bounds = default_bounds(&trellis).unwrap();
    assert_eq!(bounds.max_weight, 14);
    let events = enumerate_error_events(&trellis, bounds.max_weight, bounds.max_length).unwrap();
    assert_eq!(events.complete_to_weight, 14);
    assert_eq!(
        (
            events.count_at_weight(10),
            events.count_at_weight(12),
            events.count_at_weight(14)
        ),
        (11, 38, 193)
    );
    assert_eq!(events.events.len(), 242);
    assert_eq!(events.longest(), Some(28));
}

#[test]
fn enumerated_events_are_codewords() {
    let spec = CodeSpec::industry_standard();
    let events = enumerate_error_events(&build_trellis(&spec), 12, 30).unwrap();
    for e in &events.events {
        assert_eq!(e.coded_bits, shift_register_encode(7, &[0o133, 0o171], &e.input_bits));
        assert_eq!(encode(&spec, &e.input_bits, false).unwrap(), e.coded_bits);
        assert_eq!(e.weight, e.coded_bits.iter().map(|&b| u32::from(b)).sum::<u32>());
        assert_eq!(e.coded_bits.len(), 2 * e.length);
    }
    let keys: Vec<_> = events
        .events
        .iter()
        .map(|e| (e.weight, e.length, e.coded_bits.clone()))
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn catastrophic_code_rejected() {
    let trellis = build_trellis(&code(3, &[6, 5]));
    assert!(matches!(
        check_catastrophic(&trellis),
        Err(CodeError::Catastrophic { .. })
    ));
    assert!(matches!(free_distance(&trellis), Err(CodeError::Catastrophic { .. })));
}

#[test]
fn event_cap_is_reported() {
    let trellis = build_trellis(&CodeSpec::industry_standard());
    assert_eq!(
        enumerate_error_events_capped(&trellis, 14, 40, 5).unwrap_err(),
        CodeError::TooManyEvents { cap: 5 }
    );
}

#[test]
fn viterbi_cost_equals_exhaustive_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cases = [
        (3u32, &[5u32, 7][..]),
        (4, &[0o13, 0o17][..]),
        (3, &[5, 7, 7][..]),
        (2, &[3, 1][..]),
    ];
    for instance in 0..1000 {
        let (k, gens) = cases[instance % cases.len()];
        let spec = code(k, gens);
        let info_len = rng.random_range(1..=7);
        let coded_len = (info_len + k as usize - 1) * gens.len();
        let metrics: Vec<[i64; 2]> = (0..coded_len)
            .map(|_| [rng.random_range(0..16), rng.random_range(0..16)])
            .collect();
        let (decoded, cost) = viterbi_decode_with_cost(&build_trellis(&spec), &metrics).unwrap();
        assert_eq!(
            cost,
            exhaustive_min_cost(k, gens, info_len, &metrics),
            "instance {instance}"
        );
        assert_eq!(decoded.len(), info_len);
        let recoded = encode(&spec, &decoded, true).unwrap();
        assert_eq!(codeword_cost(&recoded, &metrics), cost);
    }
}

#[test]
fn viterbi_rejects_bad_metrics() {
    let trellis = build_trellis(&code(3, &[5, 7]));
    assert_eq!(
        viterbi_decode::<f64>(&trellis, &[[0.0, 1.0]; 5]).unwrap_err(),
        CodeError::MetricLength { len: 5, n_out: 2 }
    );
    let mut metrics = vec![[0.0, 1.0]; 8];
    metrics[3][1] = f64::NAN;
    assert_eq!(
        viterbi_decode(&trellis, &metrics).unwrap_err(),
        CodeError::NonFiniteMetric { index: 3 }
    );
}

fn small_code() -> impl Strategy<Value = CodeSpec> {
    (2u32..=7, 2usize..=3).prop_flat_map(|(k, n)| {
        let top = 1u32 << (k - 1);
        proptest::collection::vec(1u32..(1 << k), n).prop_map(move |mut gens| {
            gens[0] |= top;
            CodeSpec::new(k, gens).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn encoder_is_linear(spec in small_code(), a in proptest::collection::vec(0u8..2, 1..40), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<u8> = a.iter().map(|_| rng.random_range(0..2)).collect();
        let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ea = encode(&spec, &a, true).unwrap();
        let eb = encode(&spec, &b, true).unwrap();
        let es = encode(&spec, &sum, true).unwrap();
        let xor: Vec<u8> = ea.iter().zip(&eb).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(es, xor);
    }

    #[test]
    fn encoder_matches_shift_register(spec in small_code(), info in proptest::collection::vec(0u8..2, 1..40)) {
        let mut padded = info.clone();
        padded.extend(std::iter::repeat_n(0, spec.tail_len()));
        prop_assert_eq!(
            encode(&spec, &info, true).unwrap(),
            shift_register_encode(spec.constraint_length(), spec.generators(), &padded)
        );
    }

    #[test]
    fn noiseless_decoding_recovers_input(spec in small_code(), info in proptest::collection::vec(0u8..2, 1..60)) {
        let coded = encode(&spec, &info, true).unwrap();
        let metrics: Vec<[u32; 2]> = coded.iter().map(|&b| if b == 0 { [0, 1] } else { [1, 0] }).collect();
        let (decoded, cost) = viterbi_decode_with_cost(&build_trellis(&spec), &metrics).unwrap();
        prop_assert_eq!(decoded, info);
        prop_assert_eq!(cost, 0);
    }

    #[test]
    fn enumeration_grows_with_bounds(spec in small_code(), dh in 3u32..8, len in 3usize..9) {
        let trellis = build_trellis(&spec);
        prop_assume!(check_catastrophic(&trellis).is_ok());
        let small = enumerate_error_events(&trellis, dh, len).unwrap();
        let large = enumerate_error_events(&trellis, dh + 1, len + 1).unwrap();
        for e in &small.events {
            prop_assert!(large.events.contains(e));
        }
    }

    #[test]
    fn text_form_round_trips(spec in small_code()) {
        let parsed: CodeSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &spec);
        let json = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(serde_json::from_str::<CodeSpec>(&json).unwrap(), spec);
    }
}
