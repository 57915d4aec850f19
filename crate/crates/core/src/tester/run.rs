use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::boxes::{
    cross_region, find_boundary_violation, find_perimeter_violation, interior_violation, perimeter_violation, BoundingBox,
};
use super::oracle::{CellSource, QueryOracle};
use super::rectangulation::{rectangulate, SharpView, Tiling};
use super::wraparound::{classify_wraparound, is_violating_pair, Orientation, Parity, WraparoundFlags};
use crate::error::{Error, Result};
use crate::torus::{is_cell_stable, two_steps_with, Cell, Rule, TorusConfig};

/// Cells in `Γ≤3(ℓ)`, the read budget of one classification.
const GAMMA3: u64 = 25;

/// Accuracy, tile constant, sample multipliers and seed of one tester run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TesterParams {
    pub eps: f64,
    pub c1: f64,
    pub a_rows: usize,
    pub a_cells: usize,
    pub a_s: usize,
    pub a_box: usize,
    pub seed: u64,
}

impl TesterParams {
    pub const DEFAULT_C1: f64 = 48.0;
    pub const DEFAULT_MULTIPLIER: usize = 8;

    pub fn new(eps: f64, seed: u64) -> Result<Self> {
        let p = TesterParams {
            eps,
            c1: Self::DEFAULT_C1,
            a_rows: Self::DEFAULT_MULTIPLIER,
            a_cells: Self::DEFAULT_MULTIPLIER,
            a_s: Self::DEFAULT_MULTIPLIER,
            a_box: Self::DEFAULT_MULTIPLIER,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::InvalidEpsilon(self.eps));
        }
        if !(self.c1 > 0.0) || self.k() < 4 {
            return Err(Error::InvalidParam(format!("tile side ceil(c1/eps) must be at least 4 (c1 = {})", self.c1)));
        }
        if [self.a_rows, self.a_cells, self.a_s, self.a_box].contains(&0) {
            return Err(Error::InvalidParam("sample multipliers must be at least 1".into()));
        }
        Ok(())
    }

    /// Tile side `k = ceil(c1/ε)`.
    pub fn k(&self) -> usize {
        ceil_ratio(self.c1, self.eps)
    }

    /// `ceil(1/ε)`.
    pub fn inv_eps(&self) -> usize {
        ceil_ratio(1.0, self.eps)
    }

    /// Upper bound on distinct reads of the sampling path, independent of
    /// the torus size.
    ///
    /// Step 1 reads `Γ≤3` around each sampled cell of rows and columns.
    /// Each step-2 sample reads its `5×5` window, the `5`-wide strips along
    /// the cross arms, the ring of width 4 around the box that covers the
    /// perimeter and 1-boundary tests, and up to 9 cells per in-box sample.
    pub fn query_cap(&self) -> u64 {
        let c = self.inv_eps() as u64;
        let reach = 2 * self.k() as u64 - 1;
        let side = 2 * reach + 1;
        let step1 = 2 * (self.a_rows * self.a_cells) as u64 * c * c * GAMMA3;
        let per_sample = 25 + 10 * (2 * reach + 5) + 24 * side + 48 + 9 * self.a_box as u64 * c;
        step1 + self.a_s as u64 * c * per_sample
    }
}

fn ceil_ratio(a: f64, b: f64) -> usize {
    (a / b - 1e-9).ceil().max(1.0) as usize
}

/// What a rejection witnessed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    UnstableCell,
    WraparoundPair,
    Interior,
    Perimeter,
}

/// A rejection witness that can be re-checked from `σ` alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub kind: ViolationKind,
    pub cells: Vec<Cell>,
    /// 0 for the exhaustive fallback, otherwise the sampling step.
    pub step: u8,
    /// The box for interior and perimeter violations.
    pub bbox: Option<BoundingBox>,
    /// Tile side of the rectangulation the box was found in.
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Accept,
    Reject(ViolationReport),
}

impl Decision {
    pub fn is_accept(&self) -> bool {
        matches!(self, Decision::Accept)
    }

    pub fn label(&self) -> &'static str {
        if self.is_accept() {
            "accept"
        } else {
            "reject"
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TesterOutcome {
    pub decision: Decision,
    pub queries: u64,
    pub per_step: [u64; 3],
    /// The torus was too small for sampling and was read in full.
    pub fallback: bool,
}

fn unstable_through(oracle: &mut QueryOracle<'_>, rule: Rule, c: Cell) -> bool {
    let (m, n) = oracle.dims();
    let (_, second) = two_steps_with(m, n, rule, c, &mut |x| oracle.read(x));
    second != oracle.read(c)
}

fn reject(kind: ViolationKind, cells: Vec<Cell>, step: u8, bbox: Option<BoundingBox>, k: usize) -> Decision {
    Decision::Reject(ViolationReport { kind, cells, step, bbox, k })
}

/// The structural Threshold-2 tester.
///
/// Tori with `min(m, n) < 3k` are read in full and decided exactly.
pub fn run_tester(oracle: &mut QueryOracle<'_>, params: &TesterParams) -> Result<TesterOutcome> {
    params.validate()?;
    let (m, n) = oracle.dims();
    let k = params.k();
    let finish = |oracle: &QueryOracle<'_>, decision, fallback| TesterOutcome {
        decision,
        queries: oracle.queries(),
        per_step: oracle.per_step(),
        fallback,
    };
    if m.min(n) < 3 * k {
        oracle.set_step(0);
        let sigma = oracle.config();
        for c in sigma.cells() {
            oracle.read(c);
        }
        let decision = match sigma.cells().find(|&c| !is_cell_stable(sigma, Rule::THR2, c)) {
            Some(c) => reject(ViolationKind::UnstableCell, vec![c], 0, None, k),
            None => Decision::Accept,
        };
        return Ok(finish(oracle, decision, true));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let c = params.inv_eps();

    oracle.set_step(1);
    let mut sampled: Vec<(Cell, WraparoundFlags)> = Vec::new();
    for along_rows in [true, false] {
        for _ in 0..params.a_rows * c {
            let line = rng.random_range(0..if along_rows { m } else { n });
            for _ in 0..params.a_cells * c {
                let x = rng.random_range(0..if along_rows { n } else { m });
                let cell = if along_rows { Cell::new(line, x) } else { Cell::new(x, line) };
                if unstable_through(oracle, Rule::THR2, cell) {
                    return Ok(finish(oracle, reject(ViolationKind::UnstableCell, vec![cell], 1, None, k), false));
                }
                sampled.push((cell, classify_wraparound(oracle, cell)));
            }
        }
    }
    if let Some((a, b)) = find_violating_pair(&sampled) {
        debug_assert!(is_violating_pair(a, b));
        return Ok(finish(oracle, reject(ViolationKind::WraparoundPair, vec![a.0, b.0], 1, None, k), false));
    }

    oracle.set_step(2);
    let samples: Vec<Cell> =
        (0..params.a_s * c).map(|_| Cell::new(rng.random_range(0..m), rng.random_range(0..n))).collect();
    for &cell in &samples {
        if unstable_through(oracle, Rule::THR2, cell) {
            return Ok(finish(oracle, reject(ViolationKind::UnstableCell, vec![cell], 2, None, k), false));
        }
    }
    let reach = Tiling::new(m, n, k).max_side();
    for &anchor in &samples {
        let mut view = SharpView::new(oracle, k);
        let Some(bx) = cross_region(&mut view, anchor, reach) else { continue };
        if let Some(p) = find_perimeter_violation(&mut view, &bx) {
            return Ok(finish(oracle, reject(ViolationKind::Perimeter, vec![anchor, p], 2, Some(bx), k), false));
        }
        if let Some(p) = find_boundary_violation(&mut view, &bx) {
            return Ok(finish(oracle, reject(ViolationKind::Interior, vec![anchor, p], 2, Some(bx), k), false));
        }
        for _ in 0..params.a_box * c {
            let i = (bx.rect.rows.start + rng.random_range(0..bx.rect.height())) % m;
            let j = (bx.rect.cols.start + rng.random_range(0..bx.rect.width())) % n;
            let p = Cell::new(i, j);
            if interior_violation(&mut view, &bx, p)? {
                return Ok(finish(oracle, reject(ViolationKind::Interior, vec![anchor, p], 2, Some(bx), k), false));
            }
        }
    }
    Ok(finish(oracle, Decision::Accept, false))
}

type Flagged = (Cell, WraparoundFlags);

fn find_violating_pair(sampled: &[Flagged]) -> Option<(Flagged, Flagged)> {
    for o in [Orientation::Row, Orientation::Col] {
        let line_of = |c: Cell| if o == Orientation::Row { c.row } else { c.col };
        let mut seen: HashMap<usize, HashMap<Option<Parity>, Flagged>> = HashMap::new();
        for &s in sampled {
            let flag = s.1.get(o);
            let group = seen.entry(line_of(s.0)).or_default();
            if let Some((_, &other)) = group.iter().find(|(f, _)| **f != flag) {
                return Some((other, s));
            }
            group.entry(flag).or_insert(s);
        }
    }
    let rows: Vec<&Flagged> = sampled.iter().filter(|s| s.1.row().is_some()).collect();
    let cols: Vec<&Flagged> = sampled.iter().filter(|s| s.1.col().is_some()).collect();
    rows.iter().find_map(|&&a| cols.iter().find(|b| b.0 != a.0).map(|&&b| (a, b)))
}

/// Samples `sample_size` uniform cells and rejects iff one is unstable.
pub fn run_naive_tester(oracle: &mut QueryOracle<'_>, rule: Rule, sample_size: usize, rng: &mut impl Rng) -> Decision {
    let (m, n) = oracle.dims();
    for _ in 0..sample_size.max(1) {
        let c = Cell::new(rng.random_range(0..m), rng.random_range(0..n));
        if unstable_through(oracle, rule, c) {
            return reject(ViolationKind::UnstableCell, vec![c], 0, None, 0);
        }
    }
    Decision::Accept
}

/// Re-checks a witness directly on `σ`, without sampling.
pub fn verify_report(sigma: &TorusConfig, rule: Rule, report: &ViolationReport) -> bool {
    match report.kind {
        ViolationKind::UnstableCell => report.cells.first().is_some_and(|&c| !is_cell_stable(sigma, rule, c)),
        ViolationKind::WraparoundPair => {
            let [a, b] = report.cells[..] else { return false };
            let mut src = sigma;
            let fa = classify_wraparound(&mut src, a);
            let fb = classify_wraparound(&mut src, b);
            is_violating_pair((a, fa), (b, fb))
        }
        ViolationKind::Interior | ViolationKind::Perimeter => {
            let (Some(bx), [anchor, cell]) = (report.bbox, &report.cells[..]) else { return false };
            let sharp = rectangulate(sigma, report.k, None);
            let mut src = &sharp;
            if cross_region(&mut src, *anchor, bx.reach) != Some(bx) {
                return false;
            }
            if report.kind == ViolationKind::Interior {
                interior_violation(&mut src, &bx, *cell).unwrap_or(false)
            } else {
                perimeter_violation(&mut src, &bx, *cell).unwrap_or(false)
            }
        }
    }
}
