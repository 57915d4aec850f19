use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::rect::Rect;
use crate::torus::{neighbors_in, Cell, CellSet, TorusConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    Mono(bool),
    Chessboard,
}

/// A labelled connected cell set with its rectangle, when it is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    pub cells: CellSet,
    pub rect: Option<Rect>,
}

impl Component {
    fn new(kind: ComponentKind, cells: CellSet) -> Self {
        let rect = Rect::from_set(&cells);
        Component { kind, cells, rect }
    }
}

/// Connected components of `alive` cells, where two alive cells are joined
/// when adjacent and `edge` accepts the pair.
pub(crate) fn label_components(
    m: usize,
    n: usize,
    alive: &[bool],
    mut edge: impl FnMut(Cell, Cell) -> bool,
) -> Vec<Vec<usize>> {
    let mut seen = vec![false; m * n];
    let mut out = Vec::new();
    for start in 0..m * n {
        if !alive[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut q = VecDeque::from([start]);
        while let Some(i) = q.pop_front() {
            let c = Cell::new(i / n, i % n);
            for x in neighbors_in(m, n, c) {
                let j = x.row * n + x.col;
                if alive[j] && !seen[j] && edge(c, x) {
                    seen[j] = true;
                    comp.push(j);
                    q.push_back(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Maximal connected state-`beta` sets with at least two cells.
pub fn mono_components(sigma: &TorusConfig, beta: bool) -> Vec<Component> {
    let (m, n) = (sigma.m(), sigma.n());
    let alive: Vec<bool> = sigma.cells().map(|c| sigma.get(c) == beta).collect();
    label_components(m, n, &alive, |_, _| true)
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|idx| Component::new(ComponentKind::Mono(beta), CellSet::from_sorted_indices(m, n, idx)))
        .collect()
}

/// Cells surviving iterated removal of cells with fewer than two
/// alternating neighbours: the 2-core of the alternation graph.
pub fn alternation_core(sigma: &TorusConfig) -> Vec<bool> {
    let (m, n) = (sigma.m(), sigma.n());
    let alt = |a: Cell, b: Cell| sigma.get(a) != sigma.get(b);
    let mut alive = vec![true; m * n];
    let mut deg: Vec<u8> = sigma
        .cells()
        .map(|c| neighbors_in(m, n, c).into_iter().filter(|&x| alt(c, x)).count() as u8)
        .collect();
    let mut q: VecDeque<usize> = (0..m * n).filter(|&i| deg[i] < 2).collect();
    for &i in &q {
        alive[i] = false;
    }
    while let Some(i) = q.pop_front() {
        let c = Cell::new(i / n, i % n);
        for x in neighbors_in(m, n, c) {
            let j = x.row * n + x.col;
            if alive[j] && alt(c, x) {
                deg[j] -= 1;
                if deg[j] < 2 {
                    alive[j] = false;
                    q.push_back(j);
                }
            }
        }
    }
    alive
}

/// Chessboard components: connected pieces of the alternation 2-core.
pub fn chess_components(sigma: &TorusConfig) -> Vec<Component> {
    let (m, n) = (sigma.m(), sigma.n());
    let core = alternation_core(sigma);
    label_components(m, n, &core, |a, b| sigma.get(a) != sigma.get(b))
        .into_iter()
        .map(|idx| Component::new(ComponentKind::Chessboard, CellSet::from_sorted_indices(m, n, idx)))
        .collect()
}

/// Whether every adjacent pair inside `set` has differing states.
pub fn is_alternating(sigma: &TorusConfig, set: &CellSet) -> bool {
    let (m, n) = set.dims();
    set.iter()
        .all(|c| neighbors_in(m, n, c).into_iter().all(|x| !set.contains(x) || sigma.get(x) != sigma.get(c)))
}

/// Whether `set` is a state-`beta` monochromatic component by definition
/// (connected, uniform, every cell has an in-set neighbour, maximal).
pub fn is_mono_component_by_definition(sigma: &TorusConfig, set: &CellSet, beta: bool) -> bool {
    let (m, n) = set.dims();
    if set.len() < 2 || !set.is_connected() || !set.iter().all(|c| sigma.get(c) == beta) {
        return false;
    }
    // Maximal iff no outside neighbour carries state beta.
    set.iter().all(|c| neighbors_in(m, n, c).into_iter().all(|x| set.contains(x) || sigma.get(x) != beta))
}

/// Requirements 1–3 of a chessboard component (everything but maximality).
pub fn is_chessboard_set_with_degree(sigma: &TorusConfig, set: &CellSet) -> bool {
    let (m, n) = set.dims();
    !set.is_empty()
        && set.is_connected()
        && is_alternating(sigma, set)
        && set.iter().all(|c| neighbors_in(m, n, c).into_iter().filter(|&x| set.contains(x)).count() >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mono_examples() {
        let z = TorusConfig::zeros(4, 4).unwrap();
        assert!(mono_components(&z, true).is_empty());
        let two = TorusConfig::from_rows(&["0000", "0110", "0000", "0000"]).unwrap();
        let comps = mono_components(&two, true);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].cells.len(), 2);
        let lone = TorusConfig::from_rows(&["0000", "0100", "0000", "0000"]).unwrap();
        assert!(mono_components(&lone, true).is_empty());
    }

    #[test]
    fn chess_examples() {
        let cb = TorusConfig::from_fn(4, 4, |c| (c.row + c.col) % 2 == 1).unwrap();
        let comps = chess_components(&cb);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].cells.len(), 16);
        let lone = TorusConfig::from_rows(&["00000", "00000", "00100", "00000", "00000"]).unwrap();
        assert!(chess_components(&lone).is_empty());
        let block = TorusConfig::from_rows(&["00000", "01000", "00100", "00000", "00000"]).unwrap();
        let comps = chess_components(&block);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].cells.len(), 4);
        assert!(comps[0].rect.is_some());
    }
}
