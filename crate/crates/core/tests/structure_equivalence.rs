use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_stab::structure::{majority_structure_check, thr2_structure_check};
use torus_stab::torus::{is_stable, Rule, TorusConfig};

fn mismatches(configs: impl Iterator<Item = TorusConfig>) -> (Vec<TorusConfig>, Vec<TorusConfig>) {
    let (mut t, mut maj) = (Vec::new(), Vec::new());
    for s in configs {
        if thr2_structure_check(&s).is_ok() != is_stable(&s, Rule::THR2) && t.len() < 3 {
            t.push(s.clone());
        }
        if majority_structure_check(&s) != is_stable(&s, Rule::MAJORITY) && maj.len() < 3 {
            maj.push(s);
        }
    }
    (t, maj)
}

#[test]
fn exhaustive_4x4() {
    let (t, maj) = mismatches((0u64..1 << 16).map(|b| TorusConfig::from_bits(4, 4, b).unwrap()));
    assert!(t.is_empty(), "thr2 mismatches: {t:?}");
    assert!(maj.is_empty(), "majority mismatches: {maj:?}");
}

#[test]
fn random_small_tori() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (m, n) in [(5, 5), (6, 6), (4, 6), (8, 8)] {
        let configs: Vec<_> = (0..2000)
            .map(|_| {
                let p: f64 = rng.random_range(0.05..0.95);
                TorusConfig::from_fn(m, n, |_| rng.random_bool(p)).unwrap()
            })
            .collect();
        let (t, maj) = mismatches(configs.into_iter());
        assert!(t.is_empty(), "thr2 mismatches on {m}x{n}: {t:?}");
        assert!(maj.is_empty(), "majority mismatches on {m}x{n}: {maj:?}");
    }
}

/// Limit configurations of random starts are stable by construction, which
/// exercises the "stable implies structured" direction at sizes beyond 4×4.
#[test]
fn limit_configurations_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (m, n) in [(5, 5), (6, 6), (4, 6), (8, 8), (6, 10), (12, 12)] {
        for rule in [Rule::THR2, Rule::MAJORITY] {
            for _ in 0..400 {
                let p: f64 = rng.random_range(0.1..0.9);
                let mut s = TorusConfig::from_fn(m, n, |_| rng.random_bool(p)).unwrap();
                while !is_stable(&s, rule) {
                    s = torus_stab::torus::apply_rule(&s, rule);
                }
                if rule == Rule::THR2 {
                    assert!(thr2_structure_check(&s).is_ok(), "{s:?}");
                } else {
                    assert!(majority_structure_check(&s), "{s:?}");
                }
            }
        }
    }
}
