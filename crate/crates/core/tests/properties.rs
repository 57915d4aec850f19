use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_stab::generators::{gen_stable_thr2, perturb, GenSpec};
use torus_stab::stabilizer::good_boxes;
use torus_stab::structure::{chess_components, detect_zebras, is_chessboard_set_with_degree, mono_components, Rect};
use torus_stab::tester::{classify_wraparound, BoxKind};
use torus_stab::torus::{
    apply_rule, classify_all, complement, find_period, is_cell_stable, is_stable, path_parity, Cell, CellClass,
    CellSet, Rule, TorusConfig,
};

fn random(m: usize, n: usize, density: f64, rng: &mut impl Rng) -> TorusConfig {
    TorusConfig::from_fn(m, n, |_| rng.random_bool(density)).unwrap()
}

#[test]
fn duality_on_random_configs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        // Below three rows or columns cells have fewer than four distinct
        // neighbours and the identity does not apply.
        let (m, n) = (rng.random_range(3..12), rng.random_range(3..12));
        let d = rng.random_range(0.0..1.0);
        let s = random(m, n, d, &mut rng);
        for rule in Rule::ALL {
            let dual = complement(&apply_rule(&complement(&s), rule.dual()));
            assert_eq!(apply_rule(&s, rule), dual, "{rule:?} on {s:?}");
        }
    }
}

#[test]
fn every_run_reaches_period_one_or_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..10_000 {
        let (m, n) = (rng.random_range(1..=32), rng.random_range(1..=32));
        let d = rng.random_range(0.0..1.0);
        let s = random(m, n, d, &mut rng);
        let rule = Rule::ALL[i % Rule::ALL.len()];
        let p = find_period(&s, rule, 4 * m * n).unwrap();
        assert!(p.period == 1 || p.period == 2);
    }
}

#[test]
fn adjacent_ones_persist_under_thr2() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..2000 {
        let (m, n) = (rng.random_range(3..16), rng.random_range(3..16));
        let d = rng.random_range(0.1..0.6);
        let s = random(m, n, d, &mut rng);
        let pairs: Vec<(Cell, Cell)> = s
            .cells()
            .flat_map(|c| s.neighbors(c).iter().map(move |&x| (c, x)).collect::<Vec<_>>())
            .filter(|&(a, b)| s.get(a) && s.get(b))
            .collect();
        let mut cur = s.clone();
        for _ in 0..20 {
            cur = apply_rule(&cur, Rule::THR2);
            assert!(pairs.iter().all(|&(a, b)| cur.get(a) && cur.get(b)));
        }
    }
}

/// A random connected set drawn inside a `w×w` window with its top-left
/// corner at the origin, so the bounding box is the window hull.
fn grow(m: usize, n: usize, w: usize, size: usize, rng: &mut impl Rng) -> CellSet {
    let mut cells = vec![Cell::new(rng.random_range(0..w), rng.random_range(0..w))];
    while cells.len() < size {
        let c = cells[rng.random_range(0..cells.len())];
        let (di, dj) = [(0i64, 1i64), (0, -1), (1, 0), (-1, 0)][rng.random_range(0..4)];
        let (i, j) = (c.row as i64 + di, c.col as i64 + dj);
        if (0..w as i64).contains(&i) && (0..w as i64).contains(&j) {
            let x = Cell::new(i as usize, j as usize);
            if !cells.contains(&x) {
                cells.push(x);
            }
        }
    }
    CellSet::from_cells(m, n, cells)
}

#[test]
fn path_parity_composes() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..3000 {
        let set = grow(20, 20, 8, rng.random_range(2..30), &mut rng);
        let cells: Vec<Cell> = set.iter().collect();
        let pick = |r: &mut ChaCha8Rng| cells[r.random_range(0..cells.len())];
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let ab = path_parity(&set, a, b).unwrap();
        let bc = path_parity(&set, b, c).unwrap();
        assert_eq!(ab ^ bc, path_parity(&set, a, c).unwrap());
    }
    let ring = CellSet::from_cells(5, 5, (0..5).map(|j| Cell::new(0, j)));
    assert!(path_parity(&ring, Cell::new(0, 0), Cell::new(0, 2)).is_err());
}

fn closed_neighbourhood(s: &TorusConfig, c: Cell) -> Vec<Cell> {
    let mut v = vec![c];
    v.extend(s.neighbors(c).iter().copied());
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn outside_cells_touch_one_cell_of_a_rectangle(
        m in 3usize..14, n in 3usize..14, top in 0usize..14, left in 0usize..14, h in 1usize..14, w in 1usize..14,
    ) {
        let r = Rect::at(m, n, top, left, h.min(m), w.min(n));
        prop_assume!(!r.is_almost_wraparound());
        let s = TorusConfig::zeros(m, n).unwrap();
        for c in s.cells().filter(|&c| !r.contains(c)) {
            let hits = closed_neighbourhood(&s, c).into_iter().filter(|&x| r.contains(x)).count();
            prop_assert!(hits <= 1, "{c:?} touches {hits} cells of {r:?}");
        }
    }

    #[test]
    fn connected_non_rectangles_have_a_doubly_adjacent_hull_cell(seed in any::<u64>(), size in 2usize..25) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = grow(16, 16, 7, size, &mut rng);
        prop_assume!(Rect::from_set(&set).is_none());
        let rows = set.row_projection();
        let cols = set.col_projection();
        let (r0, r1) = (*rows.iter().min().unwrap(), *rows.iter().max().unwrap());
        let (c0, c1) = (*cols.iter().min().unwrap(), *cols.iter().max().unwrap());
        let s = TorusConfig::zeros(16, 16).unwrap();
        let found = (r0..=r1).flat_map(|i| (c0..=c1).map(move |j| Cell::new(i, j))).any(|c| {
            !set.contains(c) && s.neighbors(c).iter().filter(|&&x| set.contains(x)).count() >= 2
        });
        prop_assert!(found);
    }
}

/// Moore 1-isolated cells without a wraparound flag have an unstable cell
/// in their Moore neighbourhood. By translation symmetry the 5×5 check only
/// needs the centre cell isolated, leaving 16 free cells. No cell carries a
/// flag there since odd cycles admit no chessboard wraparound.
#[test]
fn moore_isolated_cells_exhaustive_5x5() {
    let centre = Cell::new(2, 2);
    let base = TorusConfig::zeros(5, 5).unwrap();
    let moore = base.moore(centre);
    let free: Vec<Cell> = base.cells().filter(|c| !moore.contains(c)).collect();
    assert_eq!(free.len(), 16);
    for bits in 0..1u32 << 16 {
        let mut s = base.clone();
        s.set(centre, true);
        for (k, &c) in free.iter().enumerate() {
            s.set(c, bits >> k & 1 == 1);
        }
        let mut src = &s;
        assert!(classify_wraparound(&mut src, centre).is_empty());
        assert!(moore.iter().any(|&c| !is_cell_stable(&s, Rule::THR2, c)), "{s:?}");
    }
}

fn moore_isolated(s: &TorusConfig, c: Cell) -> bool {
    s.get(c) && s.moore(c).into_iter().all(|x| x == c || !s.get(x))
}

#[test]
fn moore_isolated_cells_random_32x32() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut checked = 0;
    for i in 0..400 {
        let d = rng.random_range(0.05..0.35);
        let mut s = random(32, 32, d, &mut rng);
        if i % 4 == 0 {
            // A chessboard row gives flagged isolated cells.
            let r = rng.random_range(0..32);
            for j in 0..32 {
                s.set(Cell::new(r, j), j % 2 == 0);
            }
        }
        let mut src = &s;
        for c in s.cells().filter(|&c| moore_isolated(&s, c)) {
            if classify_wraparound(&mut src, c).is_empty() {
                checked += 1;
                assert!(s.moore(c).iter().any(|&x| !is_cell_stable(&s, Rule::THR2, x)), "{c:?} in {s:?}");
            }
        }
    }
    assert!(checked > 1000);
}

/// Good boxes are pairwise nested or disjoint. They need not be two apart:
/// diagonally touching chessboard boxes are both good (see the stabilizer
/// tests), so only the nesting half of the separation is asserted here.
#[test]
fn good_boxes_are_nested_or_disjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut pairs = 0;
    for seed in 0..1500u64 {
        let s = if seed % 2 == 0 {
            let d = rng.random_range(0.05..0.6);
            random(32, 32, d, &mut rng)
        } else {
            let spec = GenSpec { rects: (4, 10), ..GenSpec::new(32, 32, Rule::THR2, seed) };
            perturb(&gen_stable_thr2(&spec).unwrap(), rng.random_range(0..30), &mut rng)
        };
        let boxes = good_boxes(&s, 32, 0.05);
        for (i, a) in boxes.iter().enumerate() {
            for b in &boxes[i + 1..] {
                pairs += 1;
                let nested = a.rect.contains_rect(&b.rect) || b.rect.contains_rect(&a.rect);
                assert!(nested || !a.rect.intersects(&b.rect), "{a:?} / {b:?}");
                if a.kind == BoxKind::Mono && b.kind == BoxKind::Mono && !a.rect.intersects(&b.rect) {
                    assert!(a.rect.gap(&b.rect) >= 2);
                }
            }
        }
    }
    assert!(pairs > 1000);
}

#[test]
fn chessboard_and_mono_one_components_are_disjoint_when_stable() {
    let mut seen = 0;
    for bits in 0..1u64 << 16 {
        let s = TorusConfig::from_bits(4, 4, bits).unwrap();
        if !is_stable(&s, Rule::THR2) {
            continue;
        }
        seen += 1;
        let chess: Vec<CellSet> = chess_components(&s).into_iter().map(|c| c.cells).collect();
        for mono in mono_components(&s, true) {
            assert!(chess.iter().all(|c| !c.intersects(&mono.cells)), "{s:?}");
        }
    }
    assert!(seen > 0);
}

/// Only even tori: around an odd cycle the peeled core can hold two adjacent
/// cells of equal state.
#[test]
fn chessboard_components_are_valid_and_maximal() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..3000 {
        let (m, n) = (2 * rng.random_range(2..=3), 2 * rng.random_range(2..=3));
        let d = rng.random_range(0.2..0.8);
        let s = random(m, n, d, &mut rng);
        for comp in chess_components(&s) {
            assert!(is_chessboard_set_with_degree(&s, &comp.cells), "{s:?}");
            for c in comp.cells.iter() {
                for &x in s.neighbors(c).iter().filter(|&&x| !comp.cells.contains(x)) {
                    let bigger = comp.cells.union(&CellSet::from_cells(m, n, [x]));
                    assert!(!is_chessboard_set_with_degree(&s, &bigger), "{s:?} + {x:?}");
                }
            }
        }
    }
}

fn toggling_pairs_lie_in_zebras(m: usize, n: usize) -> usize {
    let mut stable = 0;
    for bits in 0..1u64 << (m * n) {
        let s = TorusConfig::from_bits(m, n, bits).unwrap();
        if !is_stable(&s, Rule::MAJORITY) {
            continue;
        }
        stable += 1;
        let class = classify_all(&s, Rule::MAJORITY);
        let zebras = detect_zebras(&s, 2);
        for c in s.cells() {
            for &x in s.neighbors(c).iter() {
                let toggling = |y: Cell| class[s.index(y)] == CellClass::Toggling;
                if toggling(c) && toggling(x) && s.get(c) == s.get(x) {
                    assert!(zebras.iter().any(|z| z.contains(c) && z.contains(x)), "{s:?}");
                }
            }
        }
    }
    stable
}

#[test]
fn toggling_pairs_lie_in_zebras_4x4() {
    assert!(toggling_pairs_lie_in_zebras(4, 4) > 0);
}

#[test]
fn toggling_pairs_lie_in_zebras_4x6() {
    assert!(toggling_pairs_lie_in_zebras(4, 6) > 0);
}
