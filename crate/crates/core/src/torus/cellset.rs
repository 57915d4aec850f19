use std::collections::VecDeque;
use std::sync::OnceLock;

use super::grid::{cyclic_distance, neighbors_in, Cell, TorusConfig};
use crate::error::{Error, Result};

/// Whether a neighbourhood is a ball (`Γ≤r`) or a sphere (`Γ=r`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    AtMost,
    Exactly,
}

/// A set of torus cells, stored as sorted row-major indices.
#[derive(Clone, Debug)]
pub struct CellSet {
    m: usize,
    n: usize,
    idx: Vec<usize>,
    connected: OnceLock<bool>,
}

impl PartialEq for CellSet {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.n == other.n && self.idx == other.idx
    }
}

impl Eq for CellSet {}

impl std::hash::Hash for CellSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.m, self.n, &self.idx).hash(state);
    }
}

impl CellSet {
    pub fn empty(m: usize, n: usize) -> Self {
        CellSet { m, n, idx: Vec::new(), connected: OnceLock::new() }
    }

    pub fn from_cells(m: usize, n: usize, cells: impl IntoIterator<Item = Cell>) -> Self {
        let mut idx: Vec<usize> = cells.into_iter().map(|c| (c.row % m) * n + c.col % n).collect();
        idx.sort_unstable();
        idx.dedup();
        CellSet { m, n, idx, connected: OnceLock::new() }
    }

    pub(crate) fn from_sorted_indices(m: usize, n: usize, idx: Vec<usize>) -> Self {
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        CellSet { m, n, idx, connected: OnceLock::new() }
    }

    /// Every cell of the torus.
    pub fn full(m: usize, n: usize) -> Self {
        Self::from_sorted_indices(m, n, (0..m * n).collect())
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.idx.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    #[inline]
    pub fn contains(&self, c: Cell) -> bool {
        c.row < self.m && c.col < self.n && self.idx.binary_search(&(c.row * self.n + c.col)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.idx.iter().map(move |&i| Cell::new(i / self.n, i % self.n))
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        let mut idx = self.idx.clone();
        idx.extend_from_slice(&other.idx);
        idx.sort_unstable();
        idx.dedup();
        Self::from_sorted_indices(self.m, self.n, idx)
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        let idx = self.idx.iter().copied().filter(|&i| other.idx.binary_search(&i).is_err()).collect();
        Self::from_sorted_indices(self.m, self.n, idx)
    }

    pub fn intersects(&self, other: &CellSet) -> bool {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.idx.iter().any(|i| big.idx.binary_search(i).is_ok())
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.idx.iter().all(|i| other.idx.binary_search(i).is_ok())
    }

    /// 4-connectivity on the torus; cached after the first call.
    pub fn is_connected(&self) -> bool {
        *self.connected.get_or_init(|| {
            let Some(&start) = self.idx.first() else { return true };
            let reached = self.bfs_layers(Cell::new(start / self.n, start % self.n));
            reached.iter().all(|d| d.is_some())
        })
    }

    /// BFS distances within the set from `from`, indexed like `self.indices()`.
    fn bfs_layers(&self, from: Cell) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.idx.len()];
        let pos = |c: Cell| self.idx.binary_search(&(c.row * self.n + c.col)).ok();
        let Some(p0) = pos(from) else { return dist };
        dist[p0] = Some(0);
        let mut q = VecDeque::from([from]);
        while let Some(c) = q.pop_front() {
            let d = dist[pos(c).unwrap()].unwrap();
            for x in neighbors_in(self.m, self.n, c) {
                if let Some(p) = pos(x) {
                    if dist[p].is_none() {
                        dist[p] = Some(d + 1);
                        q.push_back(x);
                    }
                }
            }
        }
        dist
    }

    /// Sorted distinct row indices present in the set.
    pub fn row_projection(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.idx.iter().map(|i| i / self.n).collect();
        r.dedup();
        r
    }

    /// Sorted distinct column indices present in the set.
    pub fn col_projection(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.idx.iter().map(|i| i % self.n).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Whether the set wraps around a cycle of odd length.
    ///
    /// A closed walk of odd length on the torus has to wind around an odd
    /// cycle, so the set must cover every column of an odd-length row or
    /// every row of an odd-length column.
    pub fn contains_odd_wraparound(&self) -> bool {
        (self.n % 2 == 1 && self.col_projection().len() == self.n)
            || (self.m % 2 == 1 && self.row_projection().len() == self.m)
    }

    /// Minimum toroidal Manhattan distance between two non-empty sets.
    pub fn distance_to(&self, other: &CellSet) -> Option<usize> {
        let mut best: Option<usize> = None;
        for a in self.iter() {
            for b in other.iter() {
                let d = cyclic_distance(a.row, b.row, self.m) + cyclic_distance(a.col, b.col, self.n);
                best = Some(best.map_or(d, |x| x.min(d)));
            }
        }
        best
    }
}

/// `Γ≤r(c)` or `Γ=r(c)` on an `m×n` torus.
pub fn neighborhood(m: usize, n: usize, c: Cell, r: usize, mode: Mode) -> CellSet {
    let ri = r as isize;
    let mut cells = Vec::new();
    for di in -ri..=ri {
        let rem = ri - di.abs();
        for dj in -rem..=rem {
            let x = Cell::new(
                (c.row as isize + di).rem_euclid(m as isize) as usize,
                (c.col as isize + dj).rem_euclid(n as isize) as usize,
            );
            let d = cyclic_distance(x.row, c.row, m) + cyclic_distance(x.col, c.col, n);
            let keep = match mode {
                Mode::AtMost => d <= r,
                Mode::Exactly => d == r,
            };
            if keep {
                cells.push(x);
            }
        }
    }
    CellSet::from_cells(m, n, cells)
}

/// `Γ≤r(C)` or `Γ=r(C) = Γ≤r(C) ∖ Γ≤r-1(C)` for a set, by multi-source BFS.
pub fn set_neighborhood(set: &CellSet, r: usize, mode: Mode) -> CellSet {
    let (m, n) = set.dims();
    let mut dist = vec![usize::MAX; m * n];
    let mut q = VecDeque::new();
    for c in set.iter() {
        dist[c.row * n + c.col] = 0;
        q.push_back(c);
    }
    while let Some(c) = q.pop_front() {
        let d = dist[c.row * n + c.col];
        if d == r {
            continue;
        }
        for x in neighbors_in(m, n, c) {
            let i = x.row * n + x.col;
            if dist[i] == usize::MAX {
                dist[i] = d + 1;
                q.push_back(x);
            }
        }
    }
    let idx = (0..m * n)
        .filter(|&i| match mode {
            Mode::AtMost => dist[i] <= r,
            Mode::Exactly => dist[i] == r,
        })
        .collect();
    CellSet::from_sorted_indices(m, n, idx)
}

/// Parity of the length of any path from `a` to `b` inside `set`.
pub fn path_parity(set: &CellSet, a: Cell, b: Cell) -> Result<bool> {
    for c in [a, b] {
        if !set.contains(c) {
            return Err(Error::CellNotInSet { row: c.row, col: c.col });
        }
    }
    if !set.is_connected() {
        return Err(Error::NotConnected);
    }
    if set.contains_odd_wraparound() {
        return Err(Error::ContainsOddWraparound);
    }
    let dist = set.bfs_layers(a);
    let pos = |c: Cell| set.idx.binary_search(&(c.row * set.n + c.col)).unwrap();
    // Defensive: a bipartite set never has an edge inside one BFS layer parity.
    for (p, c) in set.iter().enumerate() {
        for x in neighbors_in(set.m, set.n, c) {
            if set.contains(x) && dist[p].unwrap() % 2 == dist[pos(x)].unwrap() % 2 {
                return Err(Error::ContainsOddWraparound);
            }
        }
    }
    Ok(dist[pos(b)].unwrap() % 2 == 1)
}

/// Convenience: the set of cells of `sigma` with the given state.
pub fn cells_with_state(sigma: &TorusConfig, state: bool) -> CellSet {
    let idx = sigma.cells().filter(|&c| sigma.get(c) == state).map(|c| sigma.index(c)).collect();
    CellSet::from_sorted_indices(sigma.m(), sigma.n(), idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighborhood_examples() {
        let c = Cell::new(4, 4);
        assert_eq!(neighborhood(8, 8, c, 0, Mode::AtMost).iter().collect::<Vec<_>>(), vec![c]);
        assert_eq!(neighborhood(8, 8, c, 2, Mode::Exactly).len(), 8);
        let block = CellSet::from_cells(8, 8, [Cell::new(0, 0), Cell::new(0, 1), Cell::new(1, 0), Cell::new(1, 1)]);
        assert_eq!(set_neighborhood(&block, 1, Mode::Exactly).len(), 8);
    }

    #[test]
    fn path_parity_examples() {
        let seg = CellSet::from_cells(6, 6, (0..4).map(|j| Cell::new(2, j)));
        assert!(!path_parity(&seg, Cell::new(2, 1), Cell::new(2, 1)).unwrap());
        assert!(path_parity(&seg, Cell::new(2, 0), Cell::new(2, 3)).unwrap());
        let row = CellSet::from_cells(4, 5, (0..5).map(|j| Cell::new(0, j)));
        assert_eq!(path_parity(&row, Cell::new(0, 0), Cell::new(0, 2)), Err(Error::ContainsOddWraparound));
        let split = CellSet::from_cells(6, 6, [Cell::new(0, 0), Cell::new(3, 3)]);
        assert_eq!(path_parity(&split, Cell::new(0, 0), Cell::new(3, 3)), Err(Error::NotConnected));
        assert_eq!(
            path_parity(&seg, Cell::new(2, 0), Cell::new(5, 5)),
            Err(Error::CellNotInSet { row: 5, col: 5 })
        );
    }
}
