use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::tester::{
    cell_kind, cross_region, find_boundary_violation, find_perimeter_violation, BoundingBox, BoxKind,
    CellSource,
};
use crate::torus::{cyclic_distance, Cell, TorusConfig};

/// Shapes the repair could not turn into a valid component: almost
/// wraparound boxes, chessboard boxes around an odd cycle, and chessboard
/// boxes one cell thick that do not wrap.
fn degenerate(bx: &BoundingBox) -> bool {
    let r = &bx.rect;
    if r.is_almost_wraparound() {
        return true;
    }
    bx.kind == BoxKind::Chessboard
        && ((r.rows.is_full() && r.rows.cycle % 2 == 1)
            || (r.cols.is_full() && r.cols.cycle % 2 == 1)
            || (r.height() == 1 && !r.cols.is_full())
            || (r.width() == 1 && !r.rows.is_full()))
}

/// Interior violations in the box, or `None` once more than `limit` are seen.
fn count_violations<S: CellSource>(src: &mut S, bx: &BoundingBox, limit: usize) -> Option<usize> {
    let mut count = 0;
    for c in bx.rect.cells() {
        if src.read(c) != bx.expected(c) {
            count += 1;
            if count > limit {
                return None;
            }
        }
    }
    Some(count)
}

fn is_good<S: CellSource>(src: &mut S, bx: &BoundingBox, alpha: f64) -> bool {
    !degenerate(bx)
        && find_perimeter_violation(src, bx).is_none()
        && find_boundary_violation(src, bx).is_none()
        && count_violations(src, bx, (alpha * bx.rect.area() as f64).floor() as usize).is_some()
}

/// The bounding box of `ℓ` if it is `α`-good: a clean perimeter, a clean
/// 1-boundary and at most an `α` fraction of interior violations.
pub fn alpha_good<S: CellSource>(sharp: &mut S, anchor: Cell, reach: usize, alpha: f64) -> Option<BoundingBox> {
    let bx = cross_region(sharp, anchor, reach)?;
    is_good(sharp, &bx, alpha).then_some(bx)
}

/// Distinct `α`-good boxes over every anchor of `σ#`.
pub fn good_boxes(sharp: &TorusConfig, reach: usize, alpha: f64) -> Vec<BoundingBox> {
    let mut src = sharp;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in sharp.cells() {
        if cell_kind(&mut src, c).is_none() {
            continue;
        }
        let Some(bx) = cross_region(&mut src, c, reach) else { continue };
        let top_left = Cell::new(bx.rect.rows.start, bx.rect.cols.start);
        if !seen.insert((bx.rect, bx.kind, bx.expected(top_left))) {
            continue;
        }
        if is_good(&mut src, &bx, alpha) {
            out.push(bx);
        }
    }
    out
}

/// Result of choosing the boxes to repair.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoxSelection {
    pub kept: Vec<BoundingBox>,
    /// Maximal good boxes dropped because they overlap or come too close to
    /// a larger kept box.
    pub dropped: Vec<BoundingBox>,
}

/// Gap (summed over both axes) that keeps every outside cell adjacent to at
/// most one box. Diagonally touching chessboards at gap 2 flip the cell
/// between them in the opposite phase.
const BOX_GAP: usize = 3;

/// Maximal `α`-good boxes, kept largest first while they stay at gap at
/// least 3 from every kept box.
pub fn select_boxes(sharp: &TorusConfig, reach: usize, alpha: f64) -> BoxSelection {
    let good = good_boxes(sharp, reach, alpha);
    let mut maximal: Vec<BoundingBox> = good
        .iter()
        .filter(|b| !good.iter().any(|o| o.rect != b.rect && o.rect.contains_rect(&b.rect)))
        .copied()
        .collect();
    maximal.sort_by_key(|b| (std::cmp::Reverse(b.rect.area()), b.anchor));
    let mut sel = BoxSelection::default();
    for b in maximal {
        if sel.kept.iter().all(|k| k.rect.gap(&b.rect) >= BOX_GAP) {
            sel.kept.push(b);
        } else {
            sel.dropped.push(b);
        }
    }
    sel
}

/// Maximal `α`-good boxes of `σ#` after separation.
pub fn maximal_good_boxes(sharp: &TorusConfig, reach: usize, alpha: f64) -> Vec<BoundingBox> {
    select_boxes(sharp, reach, alpha).kept
}

fn write(sigma: &mut TorusConfig, c: Cell, v: bool) -> usize {
    if sigma.get(c) == v {
        0
    } else {
        sigma.set(c, v);
        1
    }
}

/// Rewrites the box to its exact pattern; returns the number of changed cells.
pub fn fix_box(sigma: &mut TorusConfig, bx: &BoundingBox) -> usize {
    let cells: Vec<Cell> = bx.rect.cells().collect();
    cells.into_iter().map(|c| write(sigma, c, bx.expected(c))).sum()
}

/// Row distances from `i` to the fixed wraparound rows: the minimum and the
/// number of rows at distance exactly 2.
fn row_distance(w_rows: &[usize], i: usize, m: usize) -> (usize, usize) {
    let d = w_rows.iter().map(|&r| cyclic_distance(r, i, m)).min().unwrap_or(usize::MAX);
    (d, w_rows.iter().filter(|&&r| cyclic_distance(r, i, m) == 2).count())
}

/// Whether the box reaches within distance 2 of a fixed wraparound row.
pub fn touches_wraparound(bx: &BoundingBox, w_rows: &[usize]) -> bool {
    let m = bx.rect.rows.cycle;
    bx.rect.rows.iter().any(|i| row_distance(w_rows, i, m).0 <= 2)
}

/// Repairs a box that reaches within distance 2 of the fixed wraparound
/// rows `w_rows` of `σ_wa`.
///
/// Monochromatic boxes lose their cells in those rows and are filled with
/// ones elsewhere; a one left with no neighbour inside the box is cleared.
/// Chessboard boxes keep a one in a row two away from `W` only where the
/// wraparound cell in that column is zero, and the
/// row is erased when it lies between two wraparound rows or the box is one
/// row thick there. Pattern rows left without a pattern neighbour row are
/// cleared.
pub fn fix_box_near_wraparound(
    sigma: &mut TorusConfig,
    bx: &BoundingBox,
    w_rows: &[usize],
    sigma_wa: &TorusConfig,
) -> usize {
    let m = sigma.m();
    let rect = bx.rect;
    let before: Vec<bool> = rect.cells().map(|c| sigma.get(c)).collect();
    match bx.kind {
        BoxKind::Mono => {
            for i in rect.rows.iter() {
                let near = row_distance(w_rows, i, m).0 <= 2;
                for j in rect.cols.iter() {
                    sigma.set(Cell::new(i, j), !near);
                }
            }
            let lonely: Vec<Cell> = rect
                .cells()
                .filter(|&c| {
                    sigma.get(c)
                        && !sigma.neighbors(c).iter().any(|&x| rect.contains(x) && sigma.get(x))
                })
                .collect();
            for c in lonely {
                sigma.set(c, false);
            }
        }
        BoxKind::Chessboard => {
            for i in rect.rows.iter() {
                let (d, twos) = row_distance(w_rows, i, m);
                if d <= 1 {
                    rect.cols.iter().for_each(|j| sigma.set(Cell::new(i, j), false));
                } else if d == 2 {
                    let w = w_rows.iter().copied().find(|&r| cyclic_distance(r, i, m) == 2).expect("a row at distance 2");
                    let far = if (i + m - w) % m == 2 { (i + 1) % m } else { (i + m - 1) % m };
                    let erase = twos >= 2 || !rect.rows.contains(far);
                    for j in rect.cols.iter() {
                        let c = Cell::new(i, j);
                        let keep = !erase && bx.expected(c) && !sigma_wa.get(Cell::new(w, j));
                        sigma.set(c, keep);
                    }
                } else {
                    rect.cols.iter().for_each(|j| sigma.set(Cell::new(i, j), bx.expected(Cell::new(i, j))));
                }
            }
            let has_one = |s: &TorusConfig, i: usize| rect.cols.iter().any(|j| s.get(Cell::new(i, j)));
            let lonely: Vec<usize> = rect
                .rows
                .iter()
                .filter(|&i| {
                    let up = (i + m - 1) % m;
                    let down = (i + 1) % m;
                    has_one(sigma, i)
                        && !(rect.rows.contains(up) && has_one(sigma, up))
                        && !(rect.rows.contains(down) && has_one(sigma, down))
                })
                .collect();
            for i in lonely {
                rect.cols.iter().for_each(|j| sigma.set(Cell::new(i, j), false));
            }
        }
    }
    rect.cells().zip(before).filter(|&(c, b)| sigma.get(c) != b).count()
}
