use serde::{Deserialize, Serialize};

use super::oracle::CellSource;
use crate::error::{Error, Result};
use crate::structure::{Interval, Rect};
use crate::torus::{cyclic_distance, Cell};

/// Kind of a box anchor in `σ#`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxKind {
    Mono,
    Chessboard,
}

/// Bounding box of a cross-shaped region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundingBox {
    pub rect: Rect,
    pub anchor: Cell,
    pub anchor_state: bool,
    pub kind: BoxKind,
    /// Maximal arm length used when walking the cross.
    pub reach: usize,
}

impl BoundingBox {
    /// The state the box pattern assigns to `c`, for any `c` in the box.
    pub fn expected(&self, c: Cell) -> bool {
        match self.kind {
            BoxKind::Mono => true,
            BoxKind::Chessboard => self.anchor_state ^ self.parity(c),
        }
    }

    /// Path parity between the anchor and `c` inside the box.
    fn parity(&self, c: Cell) -> bool {
        let r = self.rect;
        let (oa, ob) = (r.rows.offset_of(self.anchor.row).unwrap_or(0), r.rows.offset_of(c.row).unwrap_or(0));
        let (pa, pb) = (r.cols.offset_of(self.anchor.col).unwrap_or(0), r.cols.offset_of(c.col).unwrap_or(0));
        (oa.abs_diff(ob) + pa.abs_diff(pb)) % 2 == 1
    }
}

#[inline]
fn shift(m: usize, n: usize, c: Cell, di: isize, dj: isize) -> Cell {
    Cell::new((c.row as isize + di).rem_euclid(m as isize) as usize, (c.col as isize + dj).rem_euclid(n as isize) as usize)
}

/// Whether `c` is a monochromatic cell: state 1 with a state-1 neighbour.
pub fn is_mono_cell<S: CellSource>(src: &mut S, c: Cell) -> bool {
    let (m, n) = src.dims();
    src.read(c) && [(0, 1), (0, -1), (1, 0), (-1, 0)].iter().any(|&(a, b)| src.read(shift(m, n, c, a, b)))
}

/// Kind of `c`: monochromatic if it is, else chessboard if `c` lies in an
/// alternating `2×2` block, else none.
pub fn cell_kind<S: CellSource>(src: &mut S, c: Cell) -> Option<BoxKind> {
    if is_mono_cell(src, c) {
        return Some(BoxKind::Mono);
    }
    let (m, n) = src.dims();
    for (di, dj) in [(0, 0), (0, -1), (-1, 0), (-1, -1)] {
        let a = shift(m, n, c, di, dj);
        let b = shift(m, n, a, 0, 1);
        let d = shift(m, n, a, 1, 0);
        let e = shift(m, n, a, 1, 1);
        let (va, vb, vd, ve) = (src.read(a), src.read(b), src.read(d), src.read(e));
        if va != vb && va != vd && va == ve && vb == vd {
            return Some(BoxKind::Chessboard);
        }
    }
    None
}

/// Walks the cross through `c` (right, left, down, up) while cells keep
/// the kind of `c`, up to `reach` steps per arm, and returns its bounding box.
pub fn cross_region<S: CellSource>(src: &mut S, c: Cell, reach: usize) -> Option<BoundingBox> {
    let kind = cell_kind(src, c)?;
    let (m, n) = src.dims();
    let arm = |limit: usize, di: isize, dj: isize, src: &mut S| {
        let mut len = 0;
        while len < limit {
            let step = len as isize + 1;
            if cell_kind(src, shift(m, n, c, di * step, dj * step)) != Some(kind) {
                break;
            }
            len += 1;
        }
        len
    };
    let right = arm(reach.min(n - 1), 0, 1, src);
    let left = arm(reach.min(n - 1 - right), 0, -1, src);
    let down = arm(reach.min(m - 1), 1, 0, src);
    let up = arm(reach.min(m - 1 - down), -1, 0, src);
    let rows = Interval::new((c.row + m - up) % m, up + down + 1, m);
    let cols = Interval::new((c.col + n - left) % n, left + right + 1, n);
    Some(BoundingBox { rect: Rect::new(rows, cols), anchor: c, anchor_state: src.read(c), kind, reach })
}

fn axis_distance(iv: &Interval, x: usize) -> usize {
    if iv.contains(x) {
        0
    } else {
        cyclic_distance(x, iv.start, iv.cycle).min(cyclic_distance(x, iv.last(), iv.cycle))
    }
}

/// Torus distance from `c` to the rectangle.
pub fn distance_to_rect(r: &Rect, c: Cell) -> usize {
    axis_distance(&r.rows, c.row) + axis_distance(&r.cols, c.col)
}

/// Box coordinates at minimal distance from `x` along one axis.
fn nearest_on_axis(iv: &Interval, x: usize) -> Vec<usize> {
    if iv.contains(x) {
        return vec![x];
    }
    let (ds, dl) = (cyclic_distance(x, iv.start, iv.cycle), cyclic_distance(x, iv.last(), iv.cycle));
    let mut v = Vec::with_capacity(2);
    if ds <= dl {
        v.push(iv.start);
    }
    if dl <= ds && iv.last() != iv.start {
        v.push(iv.last());
    }
    v
}

fn expand(iv: &Interval, by: usize) -> Vec<usize> {
    if iv.len + 2 * by >= iv.cycle {
        (0..iv.cycle).collect()
    } else {
        (0..iv.len + 2 * by).map(|o| (iv.start + iv.cycle - by + o) % iv.cycle).collect()
    }
}

/// Cells at distance `1..=upto` from the rectangle, with their distance.
pub fn ring_cells(r: &Rect, upto: usize) -> Vec<(Cell, usize)> {
    let rows = expand(&r.rows, upto);
    let cols = expand(&r.cols, upto);
    let mut out = Vec::new();
    for &i in &rows {
        let di = axis_distance(&r.rows, i);
        if di > upto {
            continue;
        }
        for &j in &cols {
            let d = di + axis_distance(&r.cols, j);
            if (1..=upto).contains(&d) {
                out.push((Cell::new(i, j), d));
            }
        }
    }
    out
}

/// Cells of the rectangle with a neighbour outside it.
pub fn boundary_cells(r: &Rect) -> Vec<Cell> {
    let mut out = Vec::new();
    let (h, w) = (r.height(), r.width());
    for (oi, i) in r.rows.iter().enumerate() {
        let edge_row = !r.rows.is_full() && (oi == 0 || oi + 1 == h);
        if edge_row {
            out.extend(r.cols.iter().map(|j| Cell::new(i, j)));
        } else if !r.cols.is_full() {
            out.push(Cell::new(i, r.cols.start));
            if w > 1 {
                out.push(Cell::new(i, r.cols.last()));
            }
        }
    }
    out
}

/// Whether `c ∈ box` disagrees with the box pattern.
pub fn interior_violation<S: CellSource>(src: &mut S, bx: &BoundingBox, c: Cell) -> Result<bool> {
    if !bx.rect.contains(c) {
        return Err(Error::CellNotInSet { row: c.row, col: c.col });
    }
    Ok(src.read(c) != bx.expected(c))
}

/// Whether `c` at distance 1 or 2 from the box violates its zero margin.
///
/// For chessboard boxes a one at distance 2 is a violation if the pattern
/// continued through the margin would put a one there, or if it is a
/// monochromatic cell.
pub fn perimeter_violation<S: CellSource>(src: &mut S, bx: &BoundingBox, c: Cell) -> Result<bool> {
    let d = distance_to_rect(&bx.rect, c);
    if d == 0 || d > 2 {
        return Err(Error::InvalidParam(format!("cell {c} is at distance {d} from the box")));
    }
    if !src.read(c) {
        return Ok(false);
    }
    if bx.kind == BoxKind::Mono || d == 1 {
        return Ok(true);
    }
    let predicted_one = nearest_on_axis(&bx.rect.rows, c.row)
        .into_iter()
        .flat_map(|i| nearest_on_axis(&bx.rect.cols, c.col).into_iter().map(move |j| Cell::new(i, j)))
        .any(|b| bx.expected(b));
    Ok(predicted_one || is_mono_cell(src, c))
}

/// First perimeter violation around the box, if any.
pub fn find_perimeter_violation<S: CellSource>(src: &mut S, bx: &BoundingBox) -> Option<Cell> {
    ring_cells(&bx.rect, 2).into_iter().map(|(c, _)| c).find(|&c| perimeter_violation(src, bx, c).unwrap_or(false))
}

/// First interior violation on the box's 1-boundary, if any.
pub fn find_boundary_violation<S: CellSource>(src: &mut S, bx: &BoundingBox) -> Option<Cell> {
    boundary_cells(&bx.rect).into_iter().find(|&c| interior_violation(src, bx, c).unwrap_or(false))
}
