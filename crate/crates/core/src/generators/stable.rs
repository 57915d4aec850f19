use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{Interval, Rect};
use crate::tester::Parity;
use crate::torus::{cyclic_distance, is_stable, Cell, Rule, TorusConfig};

/// Knobs for the stable-configuration generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub m: usize,
    pub n: usize,
    pub rule: Rule,
    /// Inclusive range for the number of rectangles placed.
    pub rects: (usize, usize),
    /// Inclusive range for rectangle sides.
    pub sides: (usize, usize),
    /// Number of chessboard wraparound rows to place (Threshold-2).
    pub wraparound_rows: usize,
    /// Use a zebra layout (Majority).
    pub zebras: bool,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(m: usize, n: usize, rule: Rule, seed: u64) -> Self {
        GenSpec { m, n, rule, rects: (0, 0), sides: (1, 6), wraparound_rows: 0, zebras: false, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::EmptyTorus { m: self.m, n: self.n });
        }
        if self.rects.0 > self.rects.1 || self.sides.0 > self.sides.1 || self.sides.0 == 0 {
            return Err(Error::InfeasibleSpec(format!("empty range in {:?} / {:?}", self.rects, self.sides)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
enum Placed {
    Mono(Rect),
    Chess(Rect),
    Row(usize),
}

fn paint(s: &mut TorusConfig, p: &Placed, phase: bool) {
    match *p {
        Placed::Mono(r) => r.cells().collect::<Vec<_>>().into_iter().for_each(|c| s.set(c, true)),
        Placed::Chess(r) => {
            let cells: Vec<Cell> = r.cells().collect();
            for c in cells {
                let o = r.rows.offset_of(c.row).unwrap_or(0) + r.cols.offset_of(c.col).unwrap_or(0);
                s.set(c, (o % 2 == 0) ^ phase);
            }
        }
        Placed::Row(_) => {}
    }
}

const ATTEMPTS: usize = 400;

/// A random Threshold-2 stable configuration of separated rectangles and
/// optional chessboard wraparound rows.
///
/// Every placement is checked against the simulation oracle before it is
/// kept, so the returned configuration is stable by construction.
pub fn gen_stable_thr2(spec: &GenSpec) -> Result<TorusConfig> {
    spec.validate()?;
    let (m, n) = (spec.m, spec.n);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut s = TorusConfig::zeros(m, n)?;
    let mut placed: Vec<Placed> = Vec::new();

    if spec.wraparound_rows > 0 && (n % 2 == 1 || n < 4 || m < 3) {
        return Err(Error::InfeasibleSpec("wraparound rows need an even row length of at least 4".into()));
    }
    for _ in 0..spec.wraparound_rows {
        let mut ok = false;
        for _ in 0..ATTEMPTS {
            let r = rng.random_range(0..m);
            let p = if rng.random_bool(0.5) { Parity::Even } else { Parity::Odd };
            if placed.iter().any(|q| matches!(q, Placed::Row(x) if cyclic_distance(*x, r, m) < 2)) {
                continue;
            }
            let mut t = s.clone();
            for j in 0..n {
                t.set(Cell::new(r, j), p.ones_at(j));
            }
            if is_stable(&t, Rule::THR2) {
                s = t;
                placed.push(Placed::Row(r));
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::InfeasibleSpec(format!("could not place {} wraparound rows", spec.wraparound_rows)));
        }
    }

    let want = rng.random_range(spec.rects.0..=spec.rects.1);
    let (lo, hi) = spec.sides;
    for placed_count in 0..want {
        let mut ok = false;
        for _ in 0..ATTEMPTS {
            let mono = rng.random_bool(0.5);
            let min_side = if mono { lo } else { lo.max(2) };
            if min_side > hi {
                continue;
            }
            let (mut h, mut w) = (rng.random_range(min_side..=hi), rng.random_range(min_side..=hi));
            if mono && h * w < 2 {
                w = 2;
            }
            if h + 1 >= m || w + 1 >= n {
                h = h.min(m.saturating_sub(2));
                w = w.min(n.saturating_sub(2));
                if h == 0 || w == 0 || (mono && h * w < 2) || (!mono && (h < 2 || w < 2)) {
                    continue;
                }
            }
            let r = Rect::at(m, n, rng.random_range(0..m), rng.random_range(0..n), h, w);
            let candidate = if mono { Placed::Mono(r) } else { Placed::Chess(r) };
            let separated = placed.iter().all(|q| match (*q, candidate) {
                (Placed::Row(x), Placed::Mono(r)) => Interval::new(x, 1, m).gap(&r.rows) >= 3,
                (Placed::Row(x), _) => Interval::new(x, 1, m).gap(&r.rows) >= 2,
                (Placed::Mono(a), _) => a.gap(&r) >= 3,
                (Placed::Chess(a), Placed::Mono(_)) => a.gap(&r) >= 3,
                (Placed::Chess(a), _) => a.gap(&r) >= 2,
            });
            if !separated {
                continue;
            }
            let mut t = s.clone();
            paint(&mut t, &candidate, rng.random_bool(0.5));
            if is_stable(&t, Rule::THR2) {
                s = t;
                placed.push(candidate);
                ok = true;
                break;
            }
        }
        if !ok {
            if placed_count < spec.rects.0 {
                return Err(Error::InfeasibleSpec(format!("placed only {placed_count} of {} rectangles", spec.rects.0)));
            }
            break;
        }
    }
    debug_assert!(is_stable(&s, Rule::THR2));
    Ok(s)
}

/// A random Majority stable configuration.
///
/// With `zebras` set the layout is a stack of width-2 zebra bands; with a
/// positive rectangle range it is a set of separated one-blocks of side at
/// least 2; otherwise it is one of all-zero, all-one, stripes of height at
/// least 2, or a full chessboard.
pub fn gen_stable_majority(spec: &GenSpec) -> Result<TorusConfig> {
    spec.validate()?;
    let (m, n) = (spec.m, spec.n);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let s = if spec.zebras {
        if m % 2 == 1 || n % 4 != 0 {
            return Err(Error::InfeasibleSpec("zebra bands need m even and n divisible by 4".into()));
        }
        let phase = rng.random_bool(0.5);
        TorusConfig::from_fn(m, n, |c| ((c.row + c.col / 2) % 2 == 0) ^ phase)?
    } else if spec.rects.1 > 0 {
        majority_blocks(spec, &mut rng)?
    } else {
        let mut kinds = vec![0, 1];
        if m >= 4 || n >= 4 {
            kinds.push(2);
        }
        if m % 2 == 0 && n % 2 == 0 {
            kinds.push(3);
        }
        match kinds[rng.random_range(0..kinds.len())] {
            0 => TorusConfig::zeros(m, n)?,
            1 => TorusConfig::ones(m, n)?,
            2 => stripes(m, n, &mut rng)?,
            _ => TorusConfig::from_fn(m, n, |c| (c.row + c.col) % 2 == 0)?,
        }
    };
    if !is_stable(&s, Rule::MAJORITY) {
        return Err(Error::InfeasibleSpec("layout failed the stability oracle".into()));
    }
    Ok(s)
}

fn stripes(m: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<TorusConfig> {
    let horizontal = m >= 4 && (n < 4 || rng.random_bool(0.5));
    let len = if horizontal { m } else { n };
    // Bands of height at least 2, alternating states, an even number of them.
    let mut cuts = vec![0];
    while len - cuts.last().unwrap() >= 4 && (cuts.len() < 2 || rng.random_bool(0.7)) {
        let at = cuts.last().unwrap() + rng.random_range(2..=(len - cuts.last().unwrap() - 2));
        cuts.push(at);
    }
    if cuts.len() % 2 == 1 {
        cuts.pop();
    }
    let state = |x: usize| cuts.iter().filter(|&&c| c <= x).count() % 2 == 1;
    TorusConfig::from_fn(m, n, |c| state(if horizontal { c.row } else { c.col }))
}

fn majority_blocks(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<TorusConfig> {
    let (m, n) = (spec.m, spec.n);
    let lo = spec.sides.0.max(2);
    let hi = spec.sides.1.min(m.saturating_sub(3)).min(n.saturating_sub(3));
    if lo > hi {
        return Err(Error::InfeasibleSpec("blocks need sides of at least 2 and room for a margin".into()));
    }
    let want = rng.random_range(spec.rects.0..=spec.rects.1);
    let mut rects: Vec<Rect> = Vec::new();
    for _ in 0..want * ATTEMPTS {
        if rects.len() == want {
            break;
        }
        let r = Rect::at(m, n, rng.random_range(0..m), rng.random_range(0..n), rng.random_range(lo..=hi), rng.random_range(lo..=hi));
        if rects.iter().all(|q| q.gap(&r) >= 2) {
            rects.push(r);
        }
    }
    if rects.len() < spec.rects.0 {
        return Err(Error::InfeasibleSpec(format!("placed only {} of {} blocks", rects.len(), spec.rects.0)));
    }
    let mut s = TorusConfig::zeros(m, n)?;
    for r in &rects {
        paint(&mut s, &Placed::Mono(*r), false);
    }
    Ok(s)
}
