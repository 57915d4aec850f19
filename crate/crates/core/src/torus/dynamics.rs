use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::{neighbors_in, Cell, TorusConfig};
use crate::error::{Error, Result};

/// A threshold rule `Thr_b`: a cell becomes 1 iff its closed neighbourhood holds at least `b` ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule(u8);

impl Rule {
    pub const THR1: Rule = Rule(1);
    pub const THR2: Rule = Rule(2);
    pub const MAJORITY: Rule = Rule(3);
    pub const THR4: Rule = Rule(4);
    pub const THR5: Rule = Rule(5);
    pub const ALL: [Rule; 5] = [Rule(1), Rule(2), Rule(3), Rule(4), Rule(5)];

    pub fn new(b: u8) -> Result<Self> {
        if (1..=5).contains(&b) {
            Ok(Rule(b))
        } else {
            Err(Error::BadThreshold(b))
        }
    }

    #[inline]
    pub fn threshold(self) -> u8 {
        self.0
    }

    /// `Thr_{6-b}`, the rule conjugate to this one under complementation.
    pub fn dual(self) -> Rule {
        Rule(6 - self.0)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 3 {
            write!(f, "maj")
        } else {
            write!(f, "thr{}", self.0)
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maj" | "majority" => Ok(Rule::MAJORITY),
            _ => s
                .strip_prefix("thr")
                .and_then(|d| d.parse::<u8>().ok())
                .map_or_else(|| Err(Error::InvalidParam(format!("unknown rule {s:?}"))), Rule::new),
        }
    }
}

/// Per-cell classification under two synchronous steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellClass {
    Fixed,
    Toggling,
    Unstable,
}

/// `σ'(c)` computed through an arbitrary reader of `σ`.
#[inline]
pub fn next_state_with(m: usize, n: usize, rule: Rule, c: Cell, read: &mut impl FnMut(Cell) -> bool) -> bool {
    let mut count = read(c) as u8;
    for x in neighbors_in(m, n, c) {
        count += read(x) as u8;
    }
    count >= rule.0
}

/// `(σ'(c), σ''(c))` through a reader; only cells of `Γ≤2(c)` are read.
pub fn two_steps_with(m: usize, n: usize, rule: Rule, c: Cell, read: &mut impl FnMut(Cell) -> bool) -> (bool, bool) {
    let first = next_state_with(m, n, rule, c, read);
    let mut count = first as u8;
    for x in neighbors_in(m, n, c) {
        count += next_state_with(m, n, rule, x, read) as u8;
    }
    (first, count >= rule.0)
}

/// Applies `Thr_b` once to every cell.
pub fn apply_rule(sigma: &TorusConfig, rule: Rule) -> TorusConfig {
    let (m, n) = (sigma.m(), sigma.n());
    let mut out = TorusConfig::zeros(m, n).expect("dimensions already validated");
    if m >= 3 && n >= 3 {
        for i in 0..m {
            let up = (i + m - 1) % m;
            let dn = (i + 1) % m;
            for j in 0..n {
                let l = (j + n - 1) % n;
                let r = (j + 1) % n;
                let count = sigma.get(Cell::new(i, j)) as u8
                    + sigma.get(Cell::new(up, j)) as u8
                    + sigma.get(Cell::new(dn, j)) as u8
                    + sigma.get(Cell::new(i, l)) as u8
                    + sigma.get(Cell::new(i, r)) as u8;
                if count >= rule.0 {
                    out.set(Cell::new(i, j), true);
                }
            }
        }
    } else {
        for c in sigma.cells() {
            if next_state_with(m, n, rule, c, &mut |x| sigma.get(x)) {
                out.set(c, true);
            }
        }
    }
    out
}

/// Whether `σ''(c) = σ(c)`, reading only `Γ≤2(c)`.
pub fn is_cell_stable(sigma: &TorusConfig, rule: Rule, c: Cell) -> bool {
    let (_, second) = two_steps_with(sigma.m(), sigma.n(), rule, c, &mut |x| sigma.get(x));
    second == sigma.get(c)
}

/// Whether `Thr_b²(σ) = σ`.
pub fn is_stable(sigma: &TorusConfig, rule: Rule) -> bool {
    let s1 = apply_rule(sigma, rule);
    apply_rule(&s1, rule) == *sigma
}

pub fn classify_cell(sigma: &TorusConfig, rule: Rule, c: Cell) -> CellClass {
    let (first, second) = two_steps_with(sigma.m(), sigma.n(), rule, c, &mut |x| sigma.get(x));
    let s = sigma.get(c);
    match (first == s, second == s) {
        (true, true) => CellClass::Fixed,
        (false, true) => CellClass::Toggling,
        _ => CellClass::Unstable,
    }
}

/// Classifies every cell at once (row-major order).
pub fn classify_all(sigma: &TorusConfig, rule: Rule) -> Vec<CellClass> {
    let s1 = apply_rule(sigma, rule);
    let s2 = apply_rule(&s1, rule);
    sigma
        .cells()
        .map(|c| {
            let s = sigma.get(c);
            match (s1.get(c) == s, s2.get(c) == s) {
                (true, true) => CellClass::Fixed,
                (false, true) => CellClass::Toggling,
                _ => CellClass::Unstable,
            }
        })
        .collect()
}

/// Transient length and cycle length of the orbit of `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub preperiod: usize,
    pub period: usize,
}

/// Iterates until `σ_{t+1} = σ_t` or `σ_{t+1} = σ_{t-1}`.
///
/// Only periods 1 and 2 are detected; the rules considered here never
/// produce longer cycles, so running out of `max_steps` signals a bug.
pub fn find_period(sigma: &TorusConfig, rule: Rule, max_steps: usize) -> Result<Period> {
    let mut prev: Option<TorusConfig> = None;
    let mut cur = sigma.clone();
    for t in 0..max_steps {
        let next = apply_rule(&cur, rule);
        if next == cur {
            return Ok(Period { preperiod: t, period: 1 });
        }
        if prev.as_ref() == Some(&next) {
            return Ok(Period { preperiod: t - 1, period: 2 });
        }
        prev = Some(std::mem::replace(&mut cur, next));
    }
    Err(Error::BudgetExhausted(max_steps))
}

/// Bitwise complement of a configuration.
pub fn complement(sigma: &TorusConfig) -> TorusConfig {
    sigma.complement()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chessboard(m: usize, n: usize) -> TorusConfig {
        TorusConfig::from_fn(m, n, |c| (c.row + c.col) % 2 == 0).unwrap()
    }

    fn single(m: usize, n: usize) -> TorusConfig {
        let mut t = TorusConfig::zeros(m, n).unwrap();
        t.set(Cell::new(0, 0), true);
        t
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("thr2".parse::<Rule>().unwrap(), Rule::THR2);
        assert_eq!("maj".parse::<Rule>().unwrap(), Rule::MAJORITY);
        assert!("thr6".parse::<Rule>().is_err());
        assert_eq!(Rule::THR2.dual(), Rule::THR4);
    }

    #[test]
    fn apply_rule_examples() {
        let z = TorusConfig::zeros(4, 4).unwrap();
        assert_eq!(apply_rule(&z, Rule::THR2), z);
        let o = TorusConfig::ones(5, 5).unwrap();
        assert_eq!(apply_rule(&o, Rule::MAJORITY), o);
        assert_eq!(apply_rule(&single(4, 4), Rule::THR2), z);
        let cb = chessboard(4, 4);
        assert_eq!(apply_rule(&cb, Rule::THR2), cb.complement());
    }

    #[test]
    fn stability_examples() {
        let s = single(5, 5);
        assert!(!is_cell_stable(&s, Rule::THR2, Cell::new(0, 0)));
        assert!(is_cell_stable(&chessboard(4, 4), Rule::MAJORITY, Cell::new(1, 2)));
        assert!(is_stable(&chessboard(4, 4), Rule::THR2));
        assert!(!is_stable(&single(4, 4), Rule::THR2));
        assert_eq!(classify_cell(&TorusConfig::ones(4, 4).unwrap(), Rule::THR2, Cell::new(2, 2)), CellClass::Fixed);
        assert_eq!(classify_cell(&chessboard(4, 4), Rule::MAJORITY, Cell::new(0, 0)), CellClass::Toggling);
        assert_eq!(classify_cell(&single(4, 4), Rule::THR2, Cell::new(0, 0)), CellClass::Unstable);
    }

    #[test]
    fn period_examples() {
        let z = TorusConfig::zeros(4, 4).unwrap();
        assert_eq!(find_period(&z, Rule::THR2, 4).unwrap(), Period { preperiod: 0, period: 1 });
        assert_eq!(find_period(&chessboard(4, 4), Rule::THR2, 4).unwrap(), Period { preperiod: 0, period: 2 });
        assert_eq!(find_period(&single(4, 4), Rule::THR2, 4).unwrap(), Period { preperiod: 1, period: 1 });
    }

    #[test]
    fn degenerate_rule_counts_distinct_neighbors_once() {
        // On a 1x4 ring each cell has two distinct neighbours; Thr2 keeps "0110".
        let t = TorusConfig::from_rows(&["0110"]).unwrap();
        assert_eq!(apply_rule(&t, Rule::THR2), t);
        // On a 2x2 torus every cell has exactly two neighbours.
        let t = TorusConfig::from_rows(&["10", "00"]).unwrap();
        assert_eq!(apply_rule(&t, Rule::THR2), TorusConfig::zeros(2, 2).unwrap());
    }
}
