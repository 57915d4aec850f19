use super::oracle::CellSource;
use crate::torus::{Cell, CellSet, TorusConfig};

/// Partition of the torus into `k×k` tiles; the last tile along an axis
/// absorbs the remainder, so tiles have sides in `[k, 2k)`.
///
/// When an axis is shorter than `2k` it holds a single tile, which has no
/// border along that axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tiling {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    rows_t: usize,
    cols_t: usize,
}

impl Tiling {
    pub fn new(m: usize, n: usize, k: usize) -> Self {
        let k = k.max(1);
        Tiling { m, n, k, rows_t: (m / k).max(1), cols_t: (n / k).max(1) }
    }

    fn axis_tile(&self, x: usize, len: usize, t: usize) -> (usize, usize) {
        let idx = (x / self.k).min(t - 1);
        let start = idx * self.k;
        let size = if idx + 1 == t { len - start } else { self.k };
        (start, size)
    }

    fn axis_depth(&self, x: usize, len: usize, t: usize) -> Option<usize> {
        if t == 1 {
            return None;
        }
        let (start, size) = self.axis_tile(x, len, t);
        Some((x - start).min(start + size - 1 - x))
    }

    /// Distance from `c` to the outside of its tile, minus one; `None` if the
    /// tile has no border in either axis.
    pub fn depth(&self, c: Cell) -> Option<usize> {
        let a = self.axis_depth(c.row, self.m, self.rows_t);
        let b = self.axis_depth(c.col, self.n, self.cols_t);
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    /// The tile containing `c` as `(top, left, height, width)`.
    pub fn tile_of(&self, c: Cell) -> (usize, usize, usize, usize) {
        let (top, h) = self.axis_tile(c.row, self.m, self.rows_t);
        let (left, w) = self.axis_tile(c.col, self.n, self.cols_t);
        (top, left, h, w)
    }

    /// Largest tile side, which bounds every cross-shaped region in `σ#`.
    pub fn max_side(&self) -> usize {
        let side = |len: usize, t: usize| if t == 1 { len } else { len - (t - 1) * self.k };
        side(self.m, self.rows_t).max(side(self.n, self.cols_t))
    }
}

fn offset(m: usize, n: usize, c: Cell, di: isize, dj: isize) -> Cell {
    Cell::new((c.row as isize + di).rem_euclid(m as isize) as usize, (c.col as isize + dj).rem_euclid(n as isize) as usize)
}

/// `σ#(ℓ)` computed through `read`; cells in `exempt` keep their state.
pub(crate) fn sharp_value(
    tiling: &Tiling,
    exempt: Option<&CellSet>,
    c: Cell,
    read: &mut impl FnMut(Cell) -> bool,
) -> bool {
    let is_exempt = |x: Cell| exempt.is_some_and(|w| w.contains(x));
    if is_exempt(c) {
        return read(c);
    }
    let d = tiling.depth(c);
    if d == Some(0) {
        return false;
    }
    let v = read(c);
    if !v || !d.is_some_and(|d| d <= 2) {
        return v;
    }
    let (m, n) = (tiling.m, tiling.n);
    let mut isolated = true;
    'outer: for di in -1..=1 {
        for dj in -1..=1 {
            let x = offset(m, n, c, di, dj);
            if x == c {
                continue;
            }
            let after_step2 = if is_exempt(x) { read(x) } else { tiling.depth(x) != Some(0) && read(x) };
            if after_step2 {
                isolated = false;
                break 'outer;
            }
        }
    }
    !isolated
}

/// Reads `σ#(ℓ)` for tile size `k`, charging the underlying `σ` reads.
pub fn rectangulated_read<S: CellSource>(src: &mut S, k: usize, c: Cell) -> bool {
    let (m, n) = src.dims();
    let tiling = Tiling::new(m, n, k);
    sharp_value(&tiling, None, c, &mut |x| src.read(x))
}

/// The rectangulation `σ#` materialised on the whole torus.
pub fn rectangulate(sigma: &TorusConfig, k: usize, exempt: Option<&CellSet>) -> TorusConfig {
    let tiling = Tiling::new(sigma.m(), sigma.n(), k);
    let mut out = sigma.clone();
    for c in sigma.cells() {
        if sigma.get(c) && !sharp_value(&tiling, exempt, c, &mut |x| sigma.get(x)) {
            out.set(c, false);
        }
    }
    out
}

/// `σ#` through any cell source, for a fixed tiling.
pub struct SharpView<'s, S: CellSource> {
    src: &'s mut S,
    tiling: Tiling,
}

impl<'s, S: CellSource> SharpView<'s, S> {
    pub fn new(src: &'s mut S, k: usize) -> Self {
        let (m, n) = src.dims();
        SharpView { src, tiling: Tiling::new(m, n, k) }
    }

    pub fn tiling(&self) -> &Tiling {
        &self.tiling
    }

    pub fn inner(&mut self) -> &mut S {
        self.src
    }
}

impl<S: CellSource> CellSource for SharpView<'_, S> {
    fn dims(&self) -> (usize, usize) {
        (self.tiling.m, self.tiling.n)
    }

    fn read(&mut self, c: Cell) -> bool {
        let src = &mut *self.src;
        sharp_value(&self.tiling, None, c, &mut |x| src.read(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ragged_tiles() {
        let t = Tiling::new(10, 13, 4);
        assert_eq!(t.tile_of(Cell::new(9, 12)), (4, 8, 6, 5));
        assert_eq!(t.depth(Cell::new(0, 6)), Some(0));
        assert_eq!(t.depth(Cell::new(6, 10)), Some(2));
        assert_eq!(t.depth(Cell::new(5, 9)), Some(1));
        let single = Tiling::new(10, 10, 16);
        assert_eq!(single.depth(Cell::new(0, 0)), None);
        assert_eq!(single.max_side(), 10);
    }

    #[test]
    fn borders_and_isolated_ones_are_cleared() {
        let mut s = TorusConfig::ones(16, 16).unwrap();
        let r = rectangulate(&s, 8, None);
        assert!(!r.get(Cell::new(0, 3)) && !r.get(Cell::new(8, 3)));
        assert!(r.get(Cell::new(2, 2)));
        s = TorusConfig::zeros(16, 16).unwrap();
        s.set(Cell::new(2, 3), true);
        s.set(Cell::new(0, 3), true);
        assert!(!rectangulate(&s, 8, None).get(Cell::new(2, 3)));
        s.set(Cell::new(4, 4), true);
        assert!(rectangulate(&s, 8, None).get(Cell::new(4, 4)));
    }

    #[test]
    fn lazy_read_matches_materialised() {
        let s = TorusConfig::from_fn(20, 18, |c| (c.row * 7 + c.col * 3) % 5 < 2).unwrap();
        let full = rectangulate(&s, 6, None);
        let mut src = &s;
        for c in s.cells() {
            assert_eq!(rectangulated_read(&mut src, 6, c), full.get(c), "{c}");
        }
    }
}
