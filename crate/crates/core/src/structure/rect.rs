use serde::{Deserialize, Serialize};

use crate::torus::{Cell, CellSet};

/// A cyclic coordinate interval `{start, start+1, …, start+len-1} mod cycle`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub len: usize,
    pub cycle: usize,
}

impl Interval {
    pub fn new(start: usize, len: usize, cycle: usize) -> Self {
        assert!(len >= 1 && len <= cycle && start < cycle);
        let start = if len == cycle { 0 } else { start };
        Interval { start, len, cycle }
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.len == self.cycle
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        (x + self.cycle - self.start) % self.cycle < self.len
    }

    /// Offset of `x` from the start, if contained.
    #[inline]
    pub fn offset_of(&self, x: usize) -> Option<usize> {
        let o = (x + self.cycle - self.start) % self.cycle;
        (o < self.len).then_some(o)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |o| (self.start + o) % self.cycle)
    }

    #[inline]
    pub fn last(&self) -> usize {
        (self.start + self.len - 1) % self.cycle
    }

    /// Recognises a sorted, deduplicated set of coordinates as a cyclic interval.
    pub fn from_sorted(points: &[usize], cycle: usize) -> Option<Interval> {
        if points.is_empty() {
            return None;
        }
        if points.len() == cycle {
            return Some(Interval::new(0, cycle, cycle));
        }
        let mut start = None;
        for (k, &p) in points.iter().enumerate() {
            let prev = (p + cycle - 1) % cycle;
            let has_prev = if k > 0 { points[k - 1] == prev } else { points.last() == Some(&prev) };
            if !has_prev {
                if start.is_some() {
                    return None;
                }
                start = Some(p);
            }
        }
        start.map(|s| Interval::new(s, points.len(), cycle))
    }

    /// Cyclic distance between the closest points of two intervals.
    pub fn gap(&self, other: &Interval) -> usize {
        if self.contains(other.start) || other.contains(self.start) {
            return 0;
        }
        let d = |a: usize, b: usize| {
            let x = a.abs_diff(b);
            x.min(self.cycle - x)
        };
        d(self.last(), other.start).min(d(other.last(), self.start))
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.is_full() || (other.len <= self.len && self.offset_of(other.start).is_some_and(|o| o + other.len <= self.len))
    }
}

/// A torus rectangle `I×J` of cyclic intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub rows: Interval,
    pub cols: Interval,
}

impl Rect {
    pub fn new(rows: Interval, cols: Interval) -> Self {
        Rect { rows, cols }
    }

    /// Rectangle from a top-left corner and a size on an `m×n` torus.
    pub fn at(m: usize, n: usize, top: usize, left: usize, height: usize, width: usize) -> Self {
        Rect { rows: Interval::new(top % m, height, m), cols: Interval::new(left % n, width, n) }
    }

    /// Recognises `set` as a rectangle: both projections are cyclic intervals
    /// and the size equals their product. A full projection is preferred as
    /// the wraparound interval.
    pub fn from_set(set: &CellSet) -> Option<Rect> {
        let (m, n) = set.dims();
        let rows = Interval::from_sorted(&set.row_projection(), m)?;
        let cols = Interval::from_sorted(&set.col_projection(), n)?;
        (rows.len * cols.len == set.len()).then_some(Rect { rows, cols })
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.rows.len
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.cols.len
    }

    #[inline]
    pub fn area(&self) -> usize {
        self.rows.len * self.cols.len
    }

    #[inline]
    pub fn contains(&self, c: Cell) -> bool {
        self.rows.contains(c.row) && self.cols.contains(c.col)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows.iter().flat_map(move |i| self.cols.iter().map(move |j| Cell::new(i, j)))
    }

    pub fn to_set(&self) -> CellSet {
        CellSet::from_cells(self.rows.cycle, self.cols.cycle, self.cells())
    }

    #[inline]
    pub fn full_row_wraparound(&self) -> bool {
        self.cols.is_full()
    }

    #[inline]
    pub fn full_col_wraparound(&self) -> bool {
        self.rows.is_full()
    }

    /// An interval spans its whole cycle except one coordinate.
    ///
    /// Either interval qualifies; when both do, a cell in the missing row and
    /// column still touches two cells of the rectangle, so the flag is set too.
    pub fn is_almost_wraparound(&self) -> bool {
        (self.rows.cycle >= 2 && self.rows.len == self.rows.cycle - 1)
            || (self.cols.cycle >= 2 && self.cols.len == self.cols.cycle - 1)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.rows.contains_interval(&other.rows) && self.cols.contains_interval(&other.cols)
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        let meet = |a: &Interval, b: &Interval| a.contains(b.start) || b.contains(a.start);
        meet(&self.rows, &other.rows) && meet(&self.cols, &other.cols)
    }

    /// Torus distance between the two rectangles; 0 if they intersect.
    pub fn gap(&self, other: &Rect) -> usize {
        self.rows.gap(&other.rows) + self.cols.gap(&other.cols)
    }

    /// The same rectangle on the transposed torus.
    pub fn transpose(&self) -> Rect {
        Rect { rows: self.cols, cols: self.rows }
    }

    /// Cells of the rectangle adjacent to a cell outside it.
    pub fn is_on_boundary(&self, c: Cell) -> bool {
        let (Some(oi), Some(oj)) = (self.rows.offset_of(c.row), self.cols.offset_of(c.col)) else {
            return false;
        };
        (!self.rows.is_full() && (oi == 0 || oi + 1 == self.rows.len))
            || (!self.cols.is_full() && (oj == 0 || oj + 1 == self.cols.len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_recognition() {
        assert_eq!(Interval::from_sorted(&[0, 1, 2], 5), Some(Interval::new(0, 3, 5)));
        assert_eq!(Interval::from_sorted(&[0, 1, 4], 5), Some(Interval::new(4, 3, 5)));
        assert_eq!(Interval::from_sorted(&[0, 2], 5), None);
        assert_eq!(Interval::from_sorted(&[0, 1, 2, 3, 4], 5), Some(Interval::new(0, 5, 5)));
        let w = Interval::new(4, 3, 5);
        assert!(w.contains(0) && w.contains(4) && !w.contains(2));
        assert_eq!(Interval::new(0, 2, 10).gap(&Interval::new(5, 2, 10)), 4);
        assert_eq!(Interval::new(0, 2, 10).gap(&Interval::new(7, 2, 10)), 2);
        assert_eq!(Interval::new(0, 2, 10).gap(&Interval::new(1, 4, 10)), 0);
    }

    #[test]
    fn rect_recognition_and_flags() {
        let set = CellSet::from_cells(6, 6, [Cell::new(5, 5), Cell::new(5, 0), Cell::new(0, 5), Cell::new(0, 0)]);
        let r = Rect::from_set(&set).unwrap();
        assert_eq!((r.height(), r.width()), (2, 2));
        assert!(!r.is_almost_wraparound());
        let l = CellSet::from_cells(6, 6, [Cell::new(0, 0), Cell::new(0, 1), Cell::new(1, 0)]);
        assert!(Rect::from_set(&l).is_none());
        let almost = CellSet::from_cells(6, 6, (0..5).map(|j| Cell::new(2, j)));
        assert!(Rect::from_set(&almost).unwrap().is_almost_wraparound());
        let full = CellSet::from_cells(6, 6, (0..6).map(|j| Cell::new(2, j)));
        let fr = Rect::from_set(&full).unwrap();
        assert!(fr.full_row_wraparound() && !fr.is_almost_wraparound());
    }
}
