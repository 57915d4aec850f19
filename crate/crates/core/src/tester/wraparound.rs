use serde::{Deserialize, Serialize};

use super::oracle::CellSource;
use crate::structure::{alternation_core, mono_components};
use crate::torus::{cyclic_distance, Cell, TorusConfig};

/// Which cells of a chessboard wraparound line carry state 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// Ones at even coordinates along the line.
    Even,
    /// Ones at odd coordinates along the line.
    Odd,
}

impl Parity {
    #[inline]
    pub fn ones_at(self, x: usize) -> bool {
        (x % 2 == 0) == (self == Parity::Even)
    }

    /// The parity under which coordinate `x` holds `state`.
    pub fn forced(x: usize, state: bool) -> Parity {
        if (x % 2 == 0) == state {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Orientation of a wraparound line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Row,
    Col,
}

/// Per-cell wraparound consistency.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WraparoundFlags {
    pub row_even: bool,
    pub row_odd: bool,
    pub col_even: bool,
    pub col_odd: bool,
}

impl WraparoundFlags {
    fn from_parts(row: Option<Parity>, col: Option<Parity>) -> Self {
        WraparoundFlags {
            row_even: row == Some(Parity::Even),
            row_odd: row == Some(Parity::Odd),
            col_even: col == Some(Parity::Even),
            col_odd: col == Some(Parity::Odd),
        }
    }

    pub fn row(&self) -> Option<Parity> {
        match (self.row_even, self.row_odd) {
            (true, _) => Some(Parity::Even),
            (_, true) => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn col(&self) -> Option<Parity> {
        match (self.col_even, self.col_odd) {
            (true, _) => Some(Parity::Even),
            (_, true) => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn get(&self, o: Orientation) -> Option<Parity> {
        match o {
            Orientation::Row => self.row(),
            Orientation::Col => self.col(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.row().is_none() && self.col().is_none()
    }
}

/// Coordinates of a cell seen along a line: `(perpendicular, along)`.
#[derive(Clone, Copy)]
struct LineFrame {
    o: Orientation,
    /// Perpendicular and along-line lengths.
    p_len: usize,
    l_len: usize,
    origin: Cell,
}

impl LineFrame {
    fn new(o: Orientation, m: usize, n: usize, origin: Cell) -> Self {
        match o {
            Orientation::Row => LineFrame { o, p_len: m, l_len: n, origin },
            Orientation::Col => LineFrame { o, p_len: n, l_len: m, origin },
        }
    }

    fn pos(&self) -> (usize, usize) {
        match self.o {
            Orientation::Row => (self.origin.row, self.origin.col),
            Orientation::Col => (self.origin.col, self.origin.row),
        }
    }

    /// Real cell at line coordinates `(i, j)`.
    fn cell(&self, i: usize, j: usize) -> Cell {
        match self.o {
            Orientation::Row => Cell::new(i, j),
            Orientation::Col => Cell::new(j, i),
        }
    }

    fn rel(&self, di: isize, dj: isize) -> Cell {
        let (p0, l0) = self.pos();
        let i = (p0 as isize + di).rem_euclid(self.p_len as isize) as usize;
        let j = (l0 as isize + dj).rem_euclid(self.l_len as isize) as usize;
        self.cell(i, j)
    }

    fn along(&self, dj: isize) -> usize {
        (self.pos().1 as isize + dj).rem_euclid(self.l_len as isize) as usize
    }
}

const PATCH_DI: isize = 4;
const PATCH_DJ: isize = 5;

/// Whether `ℓ` is consistent with its row (column) being an even or odd
/// chessboard wraparound.
///
/// The forced extension keeps `σ` on `Γ≤3(ℓ)`, continues the alternating
/// pattern along the rest of the line and is zero elsewhere. The cell is
/// consistent iff that extension has the line as a chessboard wraparound.
/// Only `Γ≤3(ℓ)` is read.
pub fn classify_wraparound<S: CellSource>(src: &mut S, c: Cell) -> WraparoundFlags {
    let row = line_flag(src, c, Orientation::Row, false);
    let col = line_flag(src, c, Orientation::Col, false);
    WraparoundFlags::from_parts(row, col)
}

/// Reference classification that materialises the extension on the whole
/// torus and checks the wraparound definition directly.
pub fn classify_wraparound_materialized(sigma: &TorusConfig, c: Cell) -> WraparoundFlags {
    let mut src = sigma;
    let row = line_flag(&mut src, c, Orientation::Row, true);
    let col = line_flag(&mut src, c, Orientation::Col, true);
    WraparoundFlags::from_parts(row, col)
}

fn line_flag<S: CellSource>(src: &mut S, c: Cell, o: Orientation, force_full: bool) -> Option<Parity> {
    let (m, n) = src.dims();
    let f = LineFrame::new(o, m, n, c);
    if f.l_len % 2 == 1 || f.l_len < 4 {
        return None;
    }
    let p = Parity::forced(f.pos().1, src.read(c));
    let pattern = |dj: isize| p.ones_at(f.along(dj));
    if !force_full && f.p_len >= 2 * PATCH_DI as usize + 2 && f.l_len >= 2 * PATCH_DJ as usize + 2 {
        patch_check(src, &f, pattern).then_some(p)
    } else {
        materialized_check(src, &f, p).then_some(p)
    }
}

fn patch_check<S: CellSource>(src: &mut S, f: &LineFrame, pattern: impl Fn(isize) -> bool) -> bool {
    const H: usize = 2 * PATCH_DI as usize + 1;
    const W: usize = 2 * PATCH_DJ as usize + 1;
    // Cheap window checks first: line cells follow the pattern, flanking cells are zero.
    for dj in -3..=3 {
        if src.read(f.rel(0, dj)) != pattern(dj) {
            return false;
        }
    }
    for di in [-1isize, 1] {
        for dj in -2..=2 {
            if src.read(f.rel(di, dj)) {
                return false;
            }
        }
    }
    let mut e = [[false; W]; H];
    for di in -PATCH_DI..=PATCH_DI {
        for dj in -PATCH_DJ..=PATCH_DJ {
            let v = if di.abs() + dj.abs() <= 3 {
                src.read(f.rel(di, dj))
            } else {
                di == 0 && pattern(dj)
            };
            e[(di + PATCH_DI) as usize][(dj + PATCH_DJ) as usize] = v;
        }
    }
    let at = |e: &[[bool; W]; H], di: isize, dj: isize| e[(di + PATCH_DI) as usize][(dj + PATCH_DJ) as usize];
    const STEPS: [(isize, isize); 4] = [(0, 1), (0, -1), (1, 0), (-1, 0)];

    // A one in the rows at distance 2 with a one neighbour is a monochromatic cell too close to the line.
    for di in [-2isize, 2] {
        for dj in -1..=1 {
            if at(&e, di, dj) && STEPS.iter().any(|&(a, b)| at(&e, di + a, dj + b)) {
                return false;
            }
        }
    }

    // Alternation 2-core on the patch; line cells outside it are permanently in the core.
    let mut core = [[true; W]; H];
    loop {
        let mut changed = false;
        for di in -PATCH_DI..=PATCH_DI {
            for dj in -PATCH_DJ..=PATCH_DJ {
                let (a, b) = ((di + PATCH_DI) as usize, (dj + PATCH_DJ) as usize);
                if !core[a][b] {
                    continue;
                }
                let v = e[a][b];
                let mut deg = 0;
                for (si, sj) in STEPS {
                    let (ni, nj) = (di + si, dj + sj);
                    let (nv, alive) = if ni.abs() <= PATCH_DI && nj.abs() <= PATCH_DJ {
                        let (x, y) = ((ni + PATCH_DI) as usize, (nj + PATCH_DJ) as usize);
                        (e[x][y], core[x][y])
                    } else if ni == 0 {
                        (pattern(nj), true)
                    } else {
                        (false, false)
                    };
                    if alive && nv != v {
                        deg += 1;
                    }
                }
                if deg < 2 {
                    core[a][b] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    !core[(PATCH_DI - 1) as usize].iter().chain(core[(PATCH_DI + 1) as usize].iter()).any(|&x| x)
}

fn materialized_check<S: CellSource>(src: &mut S, f: &LineFrame, p: Parity) -> bool {
    let (m, n) = src.dims();
    let (p0, _) = f.pos();
    let origin = f.origin;
    let dist = |x: Cell| cyclic_distance(x.row, origin.row, m) + cyclic_distance(x.col, origin.col, n);
    let mut vals = vec![false; f.p_len * f.l_len];
    for i in 0..f.p_len {
        for j in 0..f.l_len {
            let x = f.cell(i, j);
            vals[i * f.l_len + j] = if dist(x) <= 3 { src.read(x) } else { i == p0 && p.ones_at(j) };
        }
    }
    let ext = TorusConfig::from_states(f.p_len, f.l_len, &vals).expect("line frame dimensions are positive");
    is_chessboard_wraparound_row(&ext, p0, p)
}

/// Whether row `r` of `σ` is a chessboard wraparound with the given parity.
///
/// The row alternates with ones on `parity` columns, both flanking rows are
/// zero, the row is exactly one chessboard component, and no
/// monochromatic component of ones is within distance 2 of it.
pub fn is_chessboard_wraparound_row(sigma: &TorusConfig, r: usize, parity: Parity) -> bool {
    let (m, n) = (sigma.m(), sigma.n());
    if n % 2 == 1 || n < 4 || m < 3 {
        return false;
    }
    if (0..n).any(|j| sigma.get(Cell::new(r, j)) != parity.ones_at(j)) {
        return false;
    }
    for i in [(r + 1) % m, (r + m - 1) % m] {
        if (0..n).any(|j| sigma.get(Cell::new(i, j))) {
            return false;
        }
    }
    let core = alternation_core(sigma);
    // Flanking rows are zero, so the row's component grows only through them.
    let flank_in_core = [(r + 1) % m, (r + m - 1) % m].iter().any(|&i| (0..n).any(|j| core[i * n + j]));
    if flank_in_core || (0..n).any(|j| !core[r * n + j]) {
        return false;
    }
    !mono_components(sigma, true)
        .iter()
        .any(|comp| comp.cells.iter().any(|x| cyclic_distance(x.row, r, m) <= 2))
}

/// Column version of [`is_chessboard_wraparound_row`].
pub fn is_chessboard_wraparound_col(sigma: &TorusConfig, c: usize, parity: Parity) -> bool {
    is_chessboard_wraparound_row(&sigma.transpose(), c, parity)
}

/// Whether two classified cells form a wraparound violating pair.
pub fn is_violating_pair(a: (Cell, WraparoundFlags), b: (Cell, WraparoundFlags)) -> bool {
    if a.0 == b.0 {
        return false;
    }
    let (ra, rb, ca, cb) = (a.1.row(), b.1.row(), a.1.col(), b.1.col());
    (a.0.row == b.0.row && ra != rb)
        || (a.0.col == b.0.col && ca != cb)
        || (ra.is_some() && cb.is_some())
        || (ca.is_some() && rb.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wrap_row(m: usize, n: usize, r: usize, p: Parity) -> TorusConfig {
        TorusConfig::from_fn(m, n, |c| c.row == r && p.ones_at(c.col)).unwrap()
    }

    #[test]
    fn perfect_row_is_flagged() {
        for (m, n) in [(8, 8), (12, 16)] {
            let s = wrap_row(m, n, 3, Parity::Even);
            let mut src = &s;
            for j in 0..n {
                let f = classify_wraparound(&mut src, Cell::new(3, j));
                assert_eq!(f.row(), Some(Parity::Even));
                assert_eq!(f.col(), None);
            }
            assert!(is_chessboard_wraparound_row(&s, 3, Parity::Even));
        }
    }

    #[test]
    fn zero_window_and_odd_lines_have_no_flags() {
        let z = TorusConfig::zeros(12, 12).unwrap();
        assert!(classify_wraparound(&mut &z, Cell::new(4, 4)).is_empty());
        let odd = TorusConfig::from_fn(12, 13, |c| c.row == 2 && c.col % 2 == 0).unwrap();
        assert!(classify_wraparound(&mut &odd, Cell::new(2, 4)).row().is_none());
    }

    #[test]
    fn violating_pairs() {
        let even = WraparoundFlags { row_even: true, ..Default::default() };
        let none = WraparoundFlags::default();
        let col_odd = WraparoundFlags { col_odd: true, ..Default::default() };
        assert!(is_violating_pair((Cell::new(1, 1), even), (Cell::new(1, 5), none)));
        assert!(!is_violating_pair((Cell::new(1, 1), even), (Cell::new(1, 5), even)));
        assert!(is_violating_pair((Cell::new(1, 1), even), (Cell::new(7, 3), col_odd)));
        assert!(!is_violating_pair((Cell::new(1, 1), none), (Cell::new(2, 5), none)));
    }

    #[test]
    fn same_parity_rows_two_apart_are_not_wraparounds() {
        let s = TorusConfig::from_fn(12, 12, |c| (c.row == 2 || c.row == 4) && c.col % 2 == 0).unwrap();
        assert!(!is_chessboard_wraparound_row(&s, 2, Parity::Even));
        let t = TorusConfig::from_fn(12, 12, |c| (c.row == 2 && c.col % 2 == 0) || (c.row == 4 && c.col % 2 == 1)).unwrap();
        assert!(is_chessboard_wraparound_row(&t, 2, Parity::Even));
    }
}
