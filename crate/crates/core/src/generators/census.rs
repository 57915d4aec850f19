use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::torus::{apply_rule, is_stable, Rule, TorusConfig};

/// Largest torus the exhaustive distance search accepts.
pub const EXACT_LIMIT: usize = 20;

/// Flips `flips` distinct uniformly chosen cells.
pub fn perturb(sigma: &TorusConfig, flips: usize, rng: &mut impl Rng) -> TorusConfig {
    let mut out = sigma.clone();
    for i in sample(rng, sigma.len(), flips.min(sigma.len())) {
        let c = sigma.cell_at(i);
        out.set(c, !out.get(c));
    }
    out
}

/// Number of cells `ℓ` with `σ''(ℓ) ≠ σ(ℓ)`.
pub fn count_unstable(sigma: &TorusConfig, rule: Rule) -> usize {
    sigma.hamming(&apply_rule(&apply_rule(sigma, rule), rule))
}

fn to_bits(sigma: &TorusConfig) -> u64 {
    sigma.cells().enumerate().filter(|&(_, c)| sigma.get(c)).fold(0, |acc, (i, _)| acc | 1 << i)
}

type StableTable = Arc<Vec<u64>>;

fn stable_table(m: usize, n: usize, rule: Rule) -> StableTable {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, u8), StableTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache lock").get(&(m, n, rule.threshold())) {
        return t.clone();
    }
    let table: Vec<u64> = (0u64..1 << (m * n))
        .filter(|&b| is_stable(&TorusConfig::from_bits(m, n, b).expect("valid dimensions"), rule))
        .collect();
    let table = Arc::new(table);
    cache.lock().expect("cache lock").insert((m, n, rule.threshold()), table.clone());
    table
}

/// Minimum Hamming distance from `σ` to a stable configuration, by
/// enumerating every configuration of the torus.
pub fn exact_distance_to_stable(sigma: &TorusConfig, rule: Rule) -> Result<usize> {
    let (m, n) = (sigma.m(), sigma.n());
    if m * n > EXACT_LIMIT {
        return Err(Error::TooLarge { limit: EXACT_LIMIT, got: m * n });
    }
    let bits = to_bits(sigma);
    let table = stable_table(m, n, rule);
    Ok(table.iter().map(|&b| (b ^ bits).count_ones() as usize).min().unwrap_or(m * n))
}
