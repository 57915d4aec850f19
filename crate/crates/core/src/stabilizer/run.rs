use serde::{Deserialize, Serialize};

use super::boxes::{fix_box, fix_box_near_wraparound, select_boxes, touches_wraparound};
use super::lines::{all_flags, consistent_lines, fix_rows, select_lines};
use crate::error::{Error, Result};
use crate::tester::{BoundingBox, Orientation, Parity, Tiling};
use crate::torus::{cyclic_distance, Cell, CellSet, TorusConfig};

/// Accuracy and constants of the stabilizer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizerParams {
    pub eps: f64,
    /// Tile constant, shared with the tester.
    pub c1: f64,
    /// `α = ε / c2`.
    pub c2: f64,
}

impl StabilizerParams {
    pub const DEFAULT_C2: f64 = 68.0;

    pub fn new(eps: f64) -> Result<Self> {
        let p = StabilizerParams { eps, c1: crate::tester::TesterParams::DEFAULT_C1, c2: Self::DEFAULT_C2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::InvalidEpsilon(self.eps));
        }
        let a = self.alpha();
        if !(a > 0.0 && a < 0.5) || !(self.c1 > 0.0) {
            return Err(Error::InvalidParam(format!("alpha = eps/c2 must lie in (0, 1/2) (got {a})")));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.eps / self.c2
    }

    pub fn k(&self) -> usize {
        (self.c1 / self.eps - 1e-9).ceil().max(1.0) as usize
    }
}

/// Repair record of one kept box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRepair {
    pub bbox: BoundingBox,
    /// Interior violations before the repair.
    pub v_count: usize,
    /// Cells of the box within distance 2 of `W` changed by the line repair.
    pub d_count: usize,
    pub modified: usize,
    pub near_wraparound: bool,
}

impl BoxRepair {
    /// `modified ≤ 2(α|B| + d_count)`.
    pub fn within_bound(&self, alpha: f64) -> bool {
        self.modified as f64 <= 2.0 * (alpha * self.bbox.rect.area() as f64 + self.d_count as f64) + 1e-9
    }
}

/// Per-step accounting of one stabilization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub m: usize,
    pub n: usize,
    pub eps: f64,
    pub alpha: f64,
    pub k: usize,
    /// Whether rows or columns were repaired.
    pub orientation: Orientation,
    /// Rows and columns that were `α`-wraparound consistent.
    pub i_rows: Vec<usize>,
    pub j_cols: Vec<usize>,
    /// Lines fixed as wraparounds, forming `W`.
    pub w_lines: Vec<(usize, Parity)>,
    /// Consistent lines skipped because they clash with a fixed line.
    pub dropped_lines: Vec<usize>,
    pub boxes: Vec<BoxRepair>,
    pub dropped_boxes: usize,
    pub step1: usize,
    pub step2: usize,
    pub step3: usize,
    pub step4: usize,
}

impl StabilizationReport {
    pub fn total(&self) -> usize {
        self.step1 + self.step2 + self.step3 + self.step4
    }

    /// The cells of the fixed wraparound lines.
    pub fn w(&self) -> CellSet {
        let (m, n) = (self.m, self.n);
        let cells = self.w_lines.iter().flat_map(|&(l, _)| {
            (0..if self.orientation == Orientation::Row { n } else { m }).map(move |x| match self.orientation {
                Orientation::Row => Cell::new(l, x),
                Orientation::Col => Cell::new(x, l),
            })
        });
        CellSet::from_cells(m, n, cells)
    }

    pub fn step1_bound(&self) -> f64 {
        5.0 * self.alpha * (self.m * self.n) as f64
    }

    pub fn step2_bound(&self) -> f64 {
        12.0 * (self.m * self.n) as f64 / self.k as f64
    }

    /// Every per-step bound holds.
    pub fn bounds_hold(&self) -> bool {
        self.step1 as f64 <= self.step1_bound()
            && self.step2 as f64 <= self.step2_bound()
            && self.boxes.iter().all(|b| b.within_bound(self.alpha))
    }
}

fn transpose_box(b: &BoundingBox) -> BoundingBox {
    BoundingBox { rect: b.rect.transpose(), anchor: Cell::new(b.anchor.col, b.anchor.row), ..*b }
}

/// Moves `σ` to a nearby Threshold-2 stable configuration.
///
/// Wraparound-consistent rows (or columns, if there are more of them) are
/// fixed first; the rest is rectangulated with those lines exempt, every
/// kept `α`-good box is rewritten to its pattern, and all other cells are
/// cleared.
pub fn stabilize(sigma: &TorusConfig, params: &StabilizerParams) -> Result<(TorusConfig, StabilizationReport)> {
    params.validate()?;
    let (alpha, k) = (params.alpha(), params.k());
    let flags = all_flags(sigma);
    let rows = consistent_lines(sigma, &flags, alpha, Orientation::Row);
    let cols = consistent_lines(sigma, &flags, alpha, Orientation::Col);
    let orientation = if rows.len() >= cols.len() { Orientation::Row } else { Orientation::Col };
    let (original, lines) = match orientation {
        Orientation::Row => (sigma.clone(), &rows),
        Orientation::Col => (sigma.transpose(), &cols),
    };
    let (m, n) = (original.m(), original.n());

    let (w_lines, dropped_lines) = select_lines(lines, m);
    let mut sigma_wa = original.clone();
    let step1 = fix_rows(&mut sigma_wa, &w_lines);
    let w_rows: Vec<usize> = w_lines.iter().map(|&(r, _)| r).collect();
    let w = CellSet::from_cells(m, n, w_rows.iter().flat_map(|&r| (0..n).map(move |j| Cell::new(r, j))));

    let sharp = crate::tester::rectangulate(&sigma_wa, k, Some(&w));
    let step2 = sigma_wa.hamming(&sharp);

    let reach = Tiling::new(m, n, k).max_side();
    let selection = select_boxes(&sharp, reach, alpha);
    let mut out = sharp.clone();
    let mut in_box = vec![false; m * n];
    let mut repairs = Vec::with_capacity(selection.kept.len());
    for bx in &selection.kept {
        let v_count = bx.rect.cells().filter(|&c| sharp.get(c) != bx.expected(c)).count();
        let near_w = |c: Cell| w_rows.iter().any(|&r| cyclic_distance(r, c.row, m) <= 2);
        let d_count = bx.rect.cells().filter(|&c| near_w(c) && sigma_wa.get(c) != original.get(c)).count();
        let near_wraparound = touches_wraparound(bx, &w_rows);
        let modified =
            if near_wraparound { fix_box_near_wraparound(&mut out, bx, &w_rows, &sigma_wa) } else { fix_box(&mut out, bx) };
        for c in bx.rect.cells() {
            in_box[out.index(c)] = true;
        }
        repairs.push(BoxRepair { bbox: *bx, v_count, d_count, modified, near_wraparound });
    }
    let step3 = repairs.iter().map(|r| r.modified).sum();

    let mut step4 = 0;
    for c in original.cells() {
        let i = out.index(c);
        if !in_box[i] && !w.contains(c) && out.get(c) {
            out.set(c, false);
            step4 += 1;
        }
    }

    let (out, repairs) = match orientation {
        Orientation::Row => (out, repairs),
        Orientation::Col => (
            out.transpose(),
            repairs.into_iter().map(|r| BoxRepair { bbox: transpose_box(&r.bbox), ..r }).collect(),
        ),
    };
    let report = StabilizationReport {
        m: sigma.m(),
        n: sigma.n(),
        eps: params.eps,
        alpha,
        k,
        orientation,
        i_rows: rows.iter().map(|&(r, _)| r).collect(),
        j_cols: cols.iter().map(|&(c, _)| c).collect(),
        w_lines,
        dropped_lines,
        boxes: repairs,
        dropped_boxes: selection.dropped.len(),
        step1,
        step2,
        step3,
        step4,
    };
    Ok((out, report))
}
