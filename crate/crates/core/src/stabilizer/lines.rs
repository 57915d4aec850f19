use crate::error::{Error, Result};
use crate::tester::{classify_wraparound, is_mono_cell, Orientation, Parity, WraparoundFlags};
use crate::torus::{cyclic_distance, Cell, TorusConfig};

pub(crate) fn all_flags(sigma: &TorusConfig) -> Vec<WraparoundFlags> {
    let mut src = sigma;
    sigma.cells().map(|c| classify_wraparound(&mut src, c)).collect()
}

/// Lines where at least a `1-α` fraction of cells share one parity flag.
pub(crate) fn consistent_lines(
    sigma: &TorusConfig,
    flags: &[WraparoundFlags],
    alpha: f64,
    o: Orientation,
) -> Vec<(usize, Parity)> {
    let (m, n) = (sigma.m(), sigma.n());
    let (lines, len) = if o == Orientation::Row { (m, n) } else { (n, m) };
    let at = |line: usize, x: usize| if o == Orientation::Row { Cell::new(line, x) } else { Cell::new(x, line) };
    let need = (1.0 - alpha) * len as f64;
    let mut out = Vec::new();
    for line in 0..lines {
        let (mut even, mut odd) = (0usize, 0usize);
        for x in 0..len {
            match flags[sigma.index(at(line, x))].get(o) {
                Some(Parity::Even) => even += 1,
                Some(Parity::Odd) => odd += 1,
                None => {}
            }
        }
        if even as f64 >= need && even > 0 {
            out.push((line, Parity::Even));
        } else if odd as f64 >= need && odd > 0 {
            out.push((line, Parity::Odd));
        }
    }
    out
}

/// Rows and columns in which at least a `1-α` fraction of cells are
/// consistent with one wraparound parity.
pub fn alpha_wraparound_rows(sigma: &TorusConfig, alpha: f64) -> (Vec<usize>, Vec<usize>) {
    let flags = all_flags(sigma);
    let pick = |o| consistent_lines(sigma, &flags, alpha, o).into_iter().map(|(i, _)| i).collect();
    (pick(Orientation::Row), pick(Orientation::Col))
}

/// Keeps lines greedily in index order, dropping any line adjacent to a
/// kept one or two away from a kept line of the same parity; such pairs
/// cannot both be wraparounds.
pub(crate) fn select_lines(cands: &[(usize, Parity)], cycle: usize) -> (Vec<(usize, Parity)>, Vec<usize>) {
    let (mut kept, mut dropped): (Vec<(usize, Parity)>, Vec<usize>) = (Vec::new(), Vec::new());
    for &(r, p) in cands {
        let clash = kept.iter().any(|&(q, pq)| {
            let d = cyclic_distance(r, q, cycle);
            d <= 1 || (d == 2 && p == pq)
        });
        if clash {
            dropped.push(r);
        } else {
            kept.push((r, p));
        }
    }
    (kept, dropped)
}

/// Turns each listed row into a chessboard wraparound: the row gets its
/// pattern, the flanking rows are cleared, and in the rows two away the
/// cells in line with a one and all monochromatic cells are cleared.
/// Listed rows are never touched by another row's clean-up.
pub(crate) fn fix_rows(sigma: &mut TorusConfig, rows: &[(usize, Parity)]) -> usize {
    let (m, n) = (sigma.m(), sigma.n());
    let protected = |i: usize| rows.iter().any(|&(r, _)| r == i);
    let mut count = 0;
    let mut set = |s: &mut TorusConfig, c: Cell, v: bool, guard: bool| {
        if (!guard || !protected(c.row)) && s.get(c) != v {
            s.set(c, v);
            count += 1;
        }
    };
    for &(r, p) in rows {
        for j in 0..n {
            set(sigma, Cell::new(r, j), p.ones_at(j), false);
        }
    }
    for &(r, p) in rows {
        for i in [(r + 1) % m, (r + m - 1) % m] {
            for j in 0..n {
                set(sigma, Cell::new(i, j), false, true);
            }
        }
        let far = [(r + 2) % m, (r + m - 2) % m];
        for &i in &far {
            for j in (0..n).filter(|&j| p.ones_at(j)) {
                set(sigma, Cell::new(i, j), false, true);
            }
        }
        let mono: Vec<Cell> =
            far.iter().flat_map(|&i| (0..n).map(move |j| Cell::new(i, j))).filter(|&c| is_mono_cell(&mut &*sigma, c)).collect();
        for c in mono {
            set(sigma, c, false, true);
        }
    }
    count
}

/// Repairs row `r` towards the parity held by most of its consistent cells.
pub fn fix_wraparound_row(sigma: &mut TorusConfig, r: usize) -> Result<(Parity, usize)> {
    let mut src = &*sigma;
    let (mut even, mut odd) = (0, 0);
    for j in 0..sigma.n() {
        match classify_wraparound(&mut src, Cell::new(r, j)).row() {
            Some(Parity::Even) => even += 1,
            Some(Parity::Odd) => odd += 1,
            None => {}
        }
    }
    if even + odd == 0 {
        return Err(Error::NoMajorityClass(r));
    }
    let p = if even >= odd { Parity::Even } else { Parity::Odd };
    Ok((p, fix_rows(sigma, &[(r, p)])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tester::is_chessboard_wraparound_row;

    fn with_row(m: usize, n: usize, r: usize) -> TorusConfig {
        TorusConfig::from_fn(m, n, |c| c.row == r && c.col % 2 == 0).unwrap()
    }

    #[test]
    fn detection() {
        assert_eq!(alpha_wraparound_rows(&TorusConfig::zeros(8, 8).unwrap(), 0.2), (vec![], vec![]));
        let s = with_row(8, 8, 3);
        assert_eq!(alpha_wraparound_rows(&s, 0.2), (vec![3], vec![]));
        // A defect spoils the patch context of about seven cells.
        let mut t = with_row(8, 40, 3);
        t.set(Cell::new(3, 2), false);
        assert_eq!(alpha_wraparound_rows(&t, 0.2).0, vec![3]);
    }

    #[test]
    fn repair() {
        let mut s = with_row(12, 12, 5);
        assert_eq!(fix_wraparound_row(&mut s, 5).unwrap().1, 0);
        s.set(Cell::new(5, 4), false);
        s.set(Cell::new(6, 4), true);
        s.set(Cell::new(7, 8), true);
        s.set(Cell::new(9, 8), true);
        let before = s.clone();
        let (p, count) = fix_wraparound_row(&mut s, 5).unwrap();
        assert_eq!(p, Parity::Even);
        assert_eq!(count, 3);
        assert!(is_chessboard_wraparound_row(&s, 5, Parity::Even));
        assert!(s.cells().all(|c| s.get(c) == before.get(c) || cyclic_distance(c.row, 5, 12) <= 2));
        assert!(fix_wraparound_row(&mut TorusConfig::zeros(12, 12).unwrap(), 2).is_err());
    }

    #[test]
    fn same_parity_neighbours_are_not_both_kept() {
        let (kept, dropped) = select_lines(&[(2, Parity::Even), (4, Parity::Even), (7, Parity::Odd), (9, Parity::Even)], 16);
        assert_eq!(kept, vec![(2, Parity::Even), (7, Parity::Odd), (9, Parity::Even)]);
        assert_eq!(dropped, vec![4]);
    }
}
