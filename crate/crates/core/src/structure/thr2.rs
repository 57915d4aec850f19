use super::components::{chess_components, is_alternating, mono_components, Component};
use super::verdict::{Verdict, WitnessKind};
use crate::torus::{Cell, TorusConfig};

const NONE: u32 = u32::MAX;

/// Checks the rectangle/distance characterisation of Threshold-2 stability.
///
/// With `X` the state-1 monochromatic components, `Y` the chessboard
/// components and `Z` every other cell:
/// 1. each set of `X ∪ Y` is a rectangle, and no set of `X` is almost-wraparound;
/// 2. every cell of `Z` is 0;
/// 3. distinct sets lie at distance ≥ 2, or ≥ 3 when either belongs to `X`;
/// 4. no cell of `Z` has two neighbours that are 1 in the same phase, counting
///    `X` cells in both phases and chessboard cells in the phase where they are 1.
///
/// Requirement 4 catches two chessboards at distance 2 whose cells next to the
/// shared zero are both 0: after one step they are both 1 and the zero flips.
pub fn thr2_structure_check(sigma: &TorusConfig) -> Verdict {
    let xs = mono_components(sigma, true);
    let ys = chess_components(sigma);
    thr2_check_with(sigma, &xs, &ys)
}

pub(crate) fn thr2_check_with(sigma: &TorusConfig, xs: &[Component], ys: &[Component]) -> Verdict {
    for c in xs {
        match c.rect {
            None => return Verdict::violation(WitnessKind::NotRectangle, c.cells.iter().collect()),
            Some(r) if r.is_almost_wraparound() => {
                return Verdict::violation(WitnessKind::AlmostWraparound, c.cells.iter().collect())
            }
            _ => {}
        }
    }
    for c in ys {
        if c.rect.is_none() {
            return Verdict::violation(WitnessKind::NotRectangle, c.cells.iter().collect());
        }
        if !is_alternating(sigma, &c.cells) {
            return Verdict::violation(WitnessKind::NotAlternating, c.cells.iter().collect());
        }
    }

    let (m, n) = (sigma.m(), sigma.n());
    let mut label = vec![NONE; m * n];
    let nx = xs.len() as u32;
    for (k, comp) in xs.iter().chain(ys).enumerate() {
        for &i in comp.cells.indices() {
            if label[i] != NONE {
                return Verdict::violation(WitnessKind::Overlap, vec![sigma.cell_at(i)]);
            }
            label[i] = k as u32;
        }
    }

    for c in sigma.cells() {
        if label[sigma.index(c)] == NONE && sigma.get(c) {
            return Verdict::violation(WitnessKind::StrayOne, vec![c]);
        }
    }

    for c in sigma.cells() {
        let a = label[sigma.index(c)];
        if a == NONE {
            continue;
        }
        for di in -2isize..=2 {
            let rem = 2 - di.abs();
            for dj in -rem..=rem {
                let x = sigma.offset(c, di, dj);
                let b = label[sigma.index(x)];
                if b == NONE || b == a {
                    continue;
                }
                let d = sigma.distance(c, x);
                let need = if a < nx || b < nx { 3 } else { 2 };
                if d < need {
                    return Verdict::violation(WitnessKind::TooClose, vec![c, x]);
                }
            }
        }
    }

    for c in sigma.cells() {
        if label[sigma.index(c)] != NONE {
            continue;
        }
        let (mut now, mut next) = (vec![c], vec![c]);
        for x in sigma.neighbors(c) {
            let b = label[sigma.index(x)];
            if b == NONE {
                continue;
            }
            if b < nx || sigma.get(x) {
                now.push(x);
            }
            if b < nx || !sigma.get(x) {
                next.push(x);
            }
        }
        for w in [now, next] {
            if w.len() > 2 {
                return Verdict::violation(WitnessKind::PhaseBridge, w);
            }
        }
    }
    Verdict::StableStructured
}

/// Cells of the witness as a convenience for callers that re-check witnesses.
pub fn witness_cells(v: &Verdict) -> Vec<Cell> {
    match v {
        Verdict::StableStructured => Vec::new(),
        Verdict::Violation(w) => w.cells.clone(),
    }
}
