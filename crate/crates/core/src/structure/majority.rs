use serde::Serialize;

use super::components::{is_alternating, label_components};
use super::rect::{Interval, Rect};
use super::verdict::{Verdict, WitnessKind};
use crate::torus::{classify_all, neighbors_in, Cell, CellClass, CellSet, Rule, TorusConfig};

/// Width-`k` zebra wraparound rectangles: `m×k` bands whose rows are uniform
/// and whose columns alternate, or the transposed `k×n` bands.
pub fn detect_zebras(sigma: &TorusConfig, k: usize) -> Vec<Rect> {
    let (m, n) = (sigma.m(), sigma.n());
    let mut out: Vec<Rect> = Vec::new();
    if k == 0 {
        return out;
    }
    let alternates = |cells: &[Cell]| -> bool {
        if cells.len() < 2 {
            return false;
        }
        let set = CellSet::from_cells(m, n, cells.iter().copied());
        set.is_connected() && is_alternating(sigma, &set)
    };
    if k <= n {
        for j0 in 0..n {
            let r = Rect::new(Interval::new(0, m, m), Interval::new(j0, k, n));
            let rows_uniform = (0..m).all(|i| r.cols.iter().all(|j| sigma.get(Cell::new(i, j)) == sigma.get(Cell::new(i, j0))));
            let cols_alt = r.cols.iter().all(|j| alternates(&(0..m).map(|i| Cell::new(i, j)).collect::<Vec<_>>()));
            if rows_uniform && cols_alt && !out.contains(&r) {
                out.push(r);
            }
        }
    }
    if k <= m {
        for i0 in 0..m {
            let r = Rect::new(Interval::new(i0, k, m), Interval::new(0, n, n));
            let cols_uniform = (0..n).all(|j| r.rows.iter().all(|i| sigma.get(Cell::new(i, j)) == sigma.get(Cell::new(i0, j))));
            let rows_alt = r.rows.iter().all(|i| alternates(&(0..n).map(|j| Cell::new(i, j)).collect::<Vec<_>>()));
            if cols_uniform && rows_alt && !out.iter().any(|o| o.to_set() == r.to_set()) {
                out.push(r);
            }
        }
    }
    out
}

/// The four-part partition of a Majority-stable configuration.
#[derive(Clone, Debug, Serialize)]
pub struct MajorityPartition {
    #[serde(skip)]
    pub p0: Vec<CellSet>,
    #[serde(skip)]
    pub p1: Vec<CellSet>,
    #[serde(skip)]
    pub p2: Vec<CellSet>,
    pub p3: Vec<Rect>,
    /// `(part, index)` for every cell, row-major.
    #[serde(skip)]
    pub owner: Vec<(u8, u32)>,
}

impl MajorityPartition {
    pub fn counts(&self) -> [usize; 4] {
        [self.p0.len(), self.p1.len(), self.p2.len(), self.p3.len()]
    }
}

/// Builds the partition from the cell classes, or `None` if some cell is unstable.
///
/// `P0`/`P1` are the maximal connected fixed 0/1 sets, `P3` the toggling
/// width-2 zebras and `P2` the maximal connected toggling sets outside `P3`.
pub fn majority_partition(sigma: &TorusConfig) -> Option<MajorityPartition> {
    let (m, n) = (sigma.m(), sigma.n());
    let classes = classify_all(sigma, Rule::MAJORITY);
    if classes.contains(&CellClass::Unstable) {
        return None;
    }
    let toggling = |i: usize| classes[i] == CellClass::Toggling;
    let mut owner = vec![(u8::MAX, 0u32); m * n];

    let mut p3 = Vec::new();
    for z in detect_zebras(sigma, 2) {
        let ok = z.cells().all(|c| {
            let i = sigma.index(c);
            toggling(i) && owner[i].0 == u8::MAX
        });
        if ok {
            for c in z.cells() {
                owner[sigma.index(c)] = (3, p3.len() as u32);
            }
            p3.push(z);
        }
    }

    let mut parts: [Vec<CellSet>; 3] = Default::default();
    for (part, alive) in [
        (0u8, (0..m * n).map(|i| classes[i] == CellClass::Fixed && !sigma.get(sigma.cell_at(i))).collect::<Vec<_>>()),
        (1u8, (0..m * n).map(|i| classes[i] == CellClass::Fixed && sigma.get(sigma.cell_at(i))).collect()),
        (2u8, (0..m * n).map(|i| toggling(i) && owner[i].0 == u8::MAX).collect()),
    ] {
        for comp in label_components(m, n, &alive, |_, _| true) {
            let k = parts[part as usize].len() as u32;
            for &i in &comp {
                owner[i] = (part, k);
            }
            parts[part as usize].push(CellSet::from_sorted_indices(m, n, comp));
        }
    }
    let [p0, p1, p2] = parts;
    Some(MajorityPartition { p0, p1, p2, p3, owner })
}

/// Checks requirements 1–5 of the Majority characterisation on the constructed partition.
///
/// Requirement 5 takes the supporting set from `P2 ∪ P3`.
pub fn majority_structure_verdict(sigma: &TorusConfig) -> Verdict {
    let Some(p) = majority_partition(sigma) else {
        let classes = classify_all(sigma, Rule::MAJORITY);
        let bad = sigma.cells().filter(|&c| classes[sigma.index(c)] == CellClass::Unstable).take(1).collect();
        return Verdict::violation(WitnessKind::UnstableCell, bad);
    };
    let (m, n) = (sigma.m(), sigma.n());
    let own = |c: Cell| p.owner[sigma.index(c)];

    // Requirement 1: set types.
    for (beta, sets) in [(false, &p.p0), (true, &p.p1)] {
        for s in sets.iter() {
            if !s.is_connected() || s.iter().any(|c| sigma.get(c) != beta) {
                return Verdict::violation(WitnessKind::BadSetType, s.iter().collect());
            }
        }
    }
    for s in &p.p2 {
        if s.len() < 2 || !s.is_connected() || !is_alternating(sigma, s) {
            return Verdict::violation(WitnessKind::BadSetType, s.iter().collect());
        }
    }

    // Requirement 2: no two sets of the same class P0, P1 or P2 touch.
    for c in sigma.cells() {
        let (pa, ia) = own(c);
        if pa == 3 {
            continue;
        }
        for x in neighbors_in(m, n, c) {
            let (pb, ib) = own(x);
            if pa == pb && ia != ib {
                return Verdict::violation(WitnessKind::AdjacentSameClass, vec![c, x]);
            }
        }
    }

    for c in sigma.cells() {
        let (pa, ia) = own(c);
        let nbrs = neighbors_in(m, n, c);
        match pa {
            0 | 1 => {
                // Requirement 3.
                let outside: Vec<Cell> = nbrs.iter().copied().filter(|&x| own(x) != (pa, ia)).collect();
                let in_p2 = |want: bool| outside.iter().filter(|&&x| own(x).0 == 2 && sigma.get(x) == want).count();
                let ok = match outside.len() {
                    3 => in_p2(false) >= 1 && in_p2(true) >= 1,
                    4 => in_p2(false) == 2 && in_p2(true) == 2,
                    _ => true,
                };
                if !ok {
                    return Verdict::violation(WitnessKind::MonoNeighborhood, vec![c]);
                }
            }
            2 => {
                // Requirement 4.
                let count = |part: u8| nbrs.iter().filter(|&&x| own(x).0 == part).count();
                if count(0) > 1 || count(1) > 1 {
                    return Verdict::violation(WitnessKind::ChessNeighborhood, vec![c]);
                }
            }
            _ => {
                // Requirement 5, union reading.
                let supported = nbrs.iter().any(|&x| {
                    let (pb, ib) = own(x);
                    (pb == 2 || (pb == 3 && ib != ia)) && sigma.get(x) != sigma.get(c)
                });
                if !supported {
                    return Verdict::violation(WitnessKind::ZebraSupport, vec![c]);
                }
            }
        }
    }
    Verdict::StableStructured
}

pub fn majority_structure_check(sigma: &TorusConfig) -> bool {
    majority_structure_verdict(sigma).is_ok()
}
