use std::fmt;

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cell of the torus, stored by its canonical representative in `[0,m)×[0,n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Distinct von Neumann neighbours of a cell (never the cell itself).
pub type Neighbors = ArrayVec<Cell, 4>;

#[inline]
pub(crate) fn wrap(x: isize, len: usize) -> usize {
    x.rem_euclid(len as isize) as usize
}

/// Cyclic distance between two coordinates on a cycle of length `len`.
#[inline]
pub fn cyclic_distance(a: usize, b: usize, len: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(len - d)
}

/// An `m×n` binary configuration with wraparound addressing.
///
/// Rows are bit-packed into `u64` words; wraparound is handled by index
/// arithmetic rather than padding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TorusConfig {
    m: usize,
    n: usize,
    stride: usize,
    words: Vec<u64>,
}

impl TorusConfig {
    /// The all-zero configuration.
    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::EmptyTorus { m, n });
        }
        let stride = n.div_ceil(64);
        Ok(TorusConfig { m, n, stride, words: vec![0; m * stride] })
    }

    /// The all-one configuration.
    pub fn ones(m: usize, n: usize) -> Result<Self> {
        Self::from_fn(m, n, |_| true)
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(Cell) -> bool) -> Result<Self> {
        let mut c = Self::zeros(m, n)?;
        for i in 0..m {
            for j in 0..n {
                if f(Cell::new(i, j)) {
                    c.set(Cell::new(i, j), true);
                }
            }
        }
        Ok(c)
    }

    /// Builds a configuration from row-major states.
    pub fn from_states(m: usize, n: usize, states: &[bool]) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::EmptyTorus { m, n });
        }
        if states.len() != m * n {
            return Err(Error::StateCount { expected: m * n, got: states.len() });
        }
        Self::from_fn(m, n, |c| states[c.row * n + c.col])
    }

    /// Decodes the low `m*n` bits of `bits` (bit `i*n+j` is cell `(i,j)`).
    pub fn from_bits(m: usize, n: usize, bits: u64) -> Result<Self> {
        if m * n > 64 {
            return Err(Error::TooLarge { limit: 64, got: m * n });
        }
        Self::from_fn(m, n, |c| bits >> (c.row * n + c.col) & 1 == 1)
    }

    /// Parses rows given as strings of `'0'`/`'1'`.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut c = Self::zeros(m, n)?;
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::Parse { line: i + 1, msg: format!("expected {n} columns, found {}", r.len()) });
            }
            for (j, ch) in r.bytes().enumerate() {
                match ch {
                    b'0' => {}
                    b'1' => c.set(Cell::new(i, j), true),
                    _ => return Err(Error::Parse { line: i + 1, msg: format!("bad character {:?}", ch as char) }),
                }
            }
        }
        Ok(c)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cells, `m·n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.m * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, c: Cell) -> bool {
        debug_assert!(c.row < self.m && c.col < self.n);
        self.words[c.row * self.stride + c.col / 64] >> (c.col % 64) & 1 == 1
    }

    /// Reads `(i mod m, j mod n)`.
    #[inline]
    pub fn get_wrapped(&self, i: isize, j: isize) -> bool {
        self.get(self.cell(i, j))
    }

    #[inline]
    pub fn set(&mut self, c: Cell, v: bool) {
        let w = &mut self.words[c.row * self.stride + c.col / 64];
        let bit = 1u64 << (c.col % 64);
        if v {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    /// Canonical cell for arbitrary integer coordinates.
    #[inline]
    pub fn cell(&self, i: isize, j: isize) -> Cell {
        Cell::new(wrap(i, self.m), wrap(j, self.n))
    }

    #[inline]
    pub fn offset(&self, c: Cell, di: isize, dj: isize) -> Cell {
        self.cell(c.row as isize + di, c.col as isize + dj)
    }

    #[inline]
    pub fn index(&self, c: Cell) -> usize {
        c.row * self.n + c.col
    }

    #[inline]
    pub fn cell_at(&self, idx: usize) -> Cell {
        Cell::new(idx / self.n, idx % self.n)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let n = self.n;
        (0..self.len()).map(move |i| Cell::new(i / n, i % n))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming(&self, other: &TorusConfig) -> usize {
        assert_eq!((self.m, self.n), (other.m, other.n), "dimension mismatch");
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    /// Bitwise complement.
    pub fn complement(&self) -> TorusConfig {
        let mut c = self.clone();
        let tail = self.n % 64;
        for i in 0..self.m {
            for w in 0..self.stride {
                let x = &mut c.words[i * self.stride + w];
                *x = !*x;
                if w == self.stride - 1 && tail != 0 {
                    *x &= (1u64 << tail) - 1;
                }
            }
        }
        c
    }

    /// The `n×m` configuration with rows and columns swapped.
    pub fn transpose(&self) -> TorusConfig {
        TorusConfig::from_fn(self.n, self.m, |c| self.get(Cell::new(c.col, c.row))).expect("dimensions already validated")
    }

    /// Toroidal Manhattan distance.
    #[inline]
    pub fn distance(&self, a: Cell, b: Cell) -> usize {
        cyclic_distance(a.row, b.row, self.m) + cyclic_distance(a.col, b.col, self.n)
    }

    /// The distinct von Neumann neighbours of `c`, excluding `c` itself.
    ///
    /// On tori with a dimension of size 1 or 2 the four offsets collapse; the
    /// result is the deduplicated set.
    pub fn neighbors(&self, c: Cell) -> Neighbors {
        neighbors_in(self.m, self.n, c)
    }

    /// The Moore neighbourhood of `c` (itself plus the eight surrounding cells), deduplicated.
    pub fn moore(&self, c: Cell) -> Vec<Cell> {
        let mut out = Vec::with_capacity(9);
        for di in -1..=1 {
            for dj in -1..=1 {
                let x = self.offset(c, di, dj);
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Row `i` as a string of `'0'`/`'1'`.
    pub fn row_string(&self, i: usize) -> String {
        (0..self.n).map(|j| if self.get(Cell::new(i, j)) { '1' } else { '0' }).collect()
    }

    pub fn to_rows(&self) -> Vec<String> {
        (0..self.m).map(|i| self.row_string(i)).collect()
    }
}

pub(crate) fn neighbors_in(m: usize, n: usize, c: Cell) -> Neighbors {
    let mut out = Neighbors::new();
    let cand = [
        Cell::new(c.row, (c.col + 1) % n),
        Cell::new(c.row, (c.col + n - 1) % n),
        Cell::new((c.row + 1) % m, c.col),
        Cell::new((c.row + m - 1) % m, c.col),
    ];
    for x in cand {
        if x != c && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

impl fmt::Debug for TorusConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TorusConfig {}x{}", self.m, self.n)?;
        for i in 0..self.m {
            writeln!(f, "  {}", self.row_string(i))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    m: usize,
    n: usize,
    rows: Vec<String>,
}

impl Serialize for TorusConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridRepr { m: self.m, n: self.n, rows: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = GridRepr::deserialize(d)?;
        let c = TorusConfig::from_rows(&g.rows).map_err(serde::de::Error::custom)?;
        if (c.m, c.n) != (g.m, g.n) {
            return Err(serde::de::Error::custom("dimension mismatch"));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_on_regular_and_degenerate_tori() {
        let t = TorusConfig::zeros(4, 4).unwrap();
        let mut nb: Vec<_> = t.neighbors(Cell::new(0, 0)).into_iter().collect();
        nb.sort();
        assert_eq!(nb, vec![Cell::new(0, 1), Cell::new(0, 3), Cell::new(1, 0), Cell::new(3, 0)]);

        let t = TorusConfig::zeros(1, 4).unwrap();
        let mut nb: Vec<_> = t.neighbors(Cell::new(0, 0)).into_iter().collect();
        nb.sort();
        assert_eq!(nb, vec![Cell::new(0, 1), Cell::new(0, 3)]);

        let t = TorusConfig::zeros(3, 3).unwrap();
        let mut nb: Vec<_> = t.neighbors(Cell::new(1, 1)).into_iter().collect();
        nb.sort();
        assert_eq!(nb, vec![Cell::new(0, 1), Cell::new(1, 0), Cell::new(1, 2), Cell::new(2, 1)]);
    }

    #[test]
    fn moore_sizes() {
        let t = TorusConfig::zeros(5, 5).unwrap();
        assert_eq!(t.moore(Cell::new(2, 2)).len(), 9);
        let mut w = t.moore(Cell::new(0, 0));
        w.sort();
        let rows: std::collections::BTreeSet<_> = w.iter().map(|c| c.row).collect();
        assert_eq!(rows.into_iter().collect::<Vec<_>>(), vec![0, 1, 4]);
        let t = TorusConfig::zeros(2, 5).unwrap();
        assert_eq!(t.moore(Cell::new(0, 0)).len(), 6);
    }

    #[test]
    fn complement_masks_tail_bits() {
        let t = TorusConfig::zeros(3, 70).unwrap();
        let c = t.complement();
        assert_eq!(c.count_ones(), 210);
        assert_eq!(c.complement(), t);
    }

    #[test]
    fn from_rows_rejects_ragged_input() {
        assert!(TorusConfig::from_rows(&["010", "01"]).is_err());
        assert!(TorusConfig::from_rows(&["012"]).is_err());
    }
}
