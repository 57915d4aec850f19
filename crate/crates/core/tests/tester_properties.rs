use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_stab::tester::{
    classify_wraparound, classify_wraparound_materialized, rectangulate, rectangulated_read, run_tester, verify_report,
    Decision, Parity, QueryOracle, TesterParams,
};
use torus_stab::torus::{apply_rule, find_period, Cell, Rule, TorusConfig};

/// Noisy configurations with planted alternating rows and columns, so that
/// both flagged and unflagged cells are common.
fn planted(m: usize, n: usize, seed: u64) -> TorusConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = TorusConfig::zeros(m, n).unwrap();
    let transpose = rng.random_bool(0.3);
    let (pm, pn) = if transpose { (n, m) } else { (m, n) };
    let mut t = TorusConfig::zeros(pm, pn).unwrap();
    for _ in 0..rng.random_range(1..4) {
        let r = rng.random_range(0..pm);
        let p = if rng.random_bool(0.5) { Parity::Even } else { Parity::Odd };
        for j in 0..pn {
            t.set(Cell::new(r, j), p.ones_at(j));
        }
    }
    let noise = [0.0, 0.01, 0.03, 0.1][rng.random_range(0..4)];
    for c in t.clone().cells() {
        if rng.random_bool(noise) {
            t.set(c, !t.get(c));
        }
    }
    if rng.random_bool(0.3) {
        let (i, j) = (rng.random_range(0..pm), rng.random_range(0..pn));
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            t.set(Cell::new((i + a) % pm, (j + b) % pn), (a + b) % 2 == 0);
        }
    }
    for c in s.clone().cells() {
        let v = if transpose { t.get(Cell::new(c.col, c.row)) } else { t.get(c) };
        s.set(c, v);
    }
    s
}

const DIMS: [(usize, usize); 6] = [(10, 12), (12, 12), (14, 16), (12, 10), (6, 8), (16, 20)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn classification_matches_materialised_definition(seed in any::<u64>(), d in 0..DIMS.len()) {
        let (m, n) = DIMS[d];
        let s = planted(m, n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..50 {
            let c = Cell::new(rng.random_range(0..m), rng.random_range(0..n));
            let fast = classify_wraparound(&mut &s, c);
            let slow = classify_wraparound_materialized(&s, c);
            prop_assert_eq!(fast, slow, "cell {} of\n{}", c, s.to_rows().join("\n"));
        }
    }

    #[test]
    fn lazy_rectangulation_matches_materialised(seed in any::<u64>(), k in 4usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n) = (rng.random_range(8..30), rng.random_range(8..30));
        let density = rng.random_range(0.05..0.6);
        let s = TorusConfig::from_fn(m, n, |_| rng.random_bool(density)).unwrap();
        let full = rectangulate(&s, k, None);
        for c in s.cells() {
            prop_assert_eq!(rectangulated_read(&mut &s, k, c), full.get(c));
        }
    }
}

/// A stable configuration reached by iterating Threshold-2 from random noise.
fn limit_config(m: usize, n: usize, density: f64, seed: u64) -> TorusConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = TorusConfig::from_fn(m, n, |_| rng.random_bool(density)).unwrap();
    let p = find_period(&s, Rule::THR2, 8 * m * n).unwrap();
    for _ in 0..p.preperiod {
        s = apply_rule(&s, Rule::THR2);
    }
    s
}

/// Small tile constants force the sampling path on moderate tori.
fn sampling_params(eps: f64, seed: u64) -> TesterParams {
    TesterParams { c1: 2.0, a_rows: 2, a_cells: 2, a_s: 4, a_box: 4, ..TesterParams::new(eps, seed).unwrap() }
}

#[test]
fn sampling_path_never_rejects_limit_configurations() {
    let mut runs = 0;
    for (i, &(m, n)) in [(32, 32), (40, 48), (48, 36), (64, 64)].iter().enumerate() {
        for t in 0..40u64 {
            let density = [0.05, 0.15, 0.3, 0.5][t as usize % 4];
            let s = limit_config(m, n, density, 1000 * i as u64 + t);
            for eps in [0.25, 0.2] {
                let mut o = QueryOracle::new(&s);
                let out = run_tester(&mut o, &sampling_params(eps, t)).unwrap();
                assert!(!out.fallback);
                assert!(out.decision.is_accept(), "{m}x{n} seed {t}: {:?}\n{}", out.decision, s.to_rows().join("\n"));
                runs += 1;
            }
        }
    }
    assert_eq!(runs, 320);
}

#[test]
fn sampling_path_rejections_verify() {
    let mut rejected = 0;
    for t in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(t);
        let mut s = limit_config(48, 48, 0.3, t);
        for _ in 0..rng.random_range(1..40) {
            let c = Cell::new(rng.random_range(0..48), rng.random_range(0..48));
            s.set(c, !s.get(c));
        }
        let mut o = QueryOracle::new(&s);
        let params = sampling_params(0.2, t);
        let out = run_tester(&mut o, &params).unwrap();
        assert!(out.queries <= params.query_cap());
        if let Decision::Reject(r) = out.decision {
            assert!(verify_report(&s, Rule::THR2, &r), "{r:?}");
            rejected += 1;
        }
    }
    assert!(rejected > 0);
}

#[test]
fn planted_configurations_exercise_both_outcomes() {
    let (mut flagged, mut total) = (0, 0);
    for seed in 0..400u64 {
        let (m, n) = DIMS[seed as usize % DIMS.len()];
        let s = planted(m, n, seed);
        for c in s.cells() {
            let f = classify_wraparound(&mut &s, c);
            assert_eq!(f, classify_wraparound_materialized(&s, c));
            flagged += !f.is_empty() as usize;
            total += 1;
        }
    }
    assert!(flagged * 50 > total && flagged * 2 < total, "{flagged}/{total}");
}

#[test]
fn sampling_path_never_rejects_generated_stable_configurations() {
    use torus_stab::generators::{gen_stable_thr2, GenSpec};
    for seed in 0..150u64 {
        let (m, n) = [(48, 48), (64, 64), (50, 64)][seed as usize % 3];
        let spec = GenSpec {
            rects: (4, 20),
            sides: (1, 12),
            wraparound_rows: (seed % 3) as usize,
            ..GenSpec::new(m, n, Rule::THR2, seed)
        };
        let s = gen_stable_thr2(&spec).unwrap();
        for (eps, c1) in [(0.25, 2.0), (0.5, 3.0)] {
            let params = TesterParams { c1, ..TesterParams::new(eps, seed).unwrap() };
            let out = run_tester(&mut QueryOracle::new(&s), &params).unwrap();
            assert!(!out.fallback);
            assert!(out.decision.is_accept(), "seed {seed}: {:?}\n{}", out.decision, s.to_rows().join("\n"));
        }
    }
}
