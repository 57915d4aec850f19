use crate::error::{Error, Result};
use crate::torus::{Cell, TorusConfig};

/// Alternating row with its phase shifted on `(d1, d2]`: one pair of equal
/// neighbours at each end of the shifted segment.
fn defect_row(n: usize, d1: usize, d2: usize) -> Vec<bool> {
    (0..n).map(|j| (j + usize::from(d1 < j && j <= d2)) % 2 == 1).collect()
}

fn default_defects(n: usize) -> (usize, usize) {
    (n / 3, 2 * n / 3)
}

/// `n×n` Threshold-2 instance with exactly `2n` unstable cells that is far
/// from stable.
///
/// Even rows carry the defect row, negated on every other patterned row;
/// odd rows are zero.
pub fn gen_hard_thr2(n: usize) -> Result<TorusConfig> {
    if n < 12 || n % 4 != 0 {
        return Err(Error::BadN { n, reason: "needs n >= 12 and n divisible by 4" });
    }
    let (d1, d2) = default_defects(n);
    let x = defect_row(n, d1, d2);
    TorusConfig::from_fn(n, n, |c| c.row % 2 == 0 && (x[c.col] ^ ((c.row / 2) % 2 == 1)))
}

/// `n×n` Majority instance with fewer than `4n` unstable cells.
///
/// The torus is cut into 5-row units: a zero row, a defect chessboard row,
/// two copies of its negation forming an almost-zebra band, and a final
/// defect chessboard row. Each unit holds 16 unstable cells.
pub fn gen_hard_majority(n: usize) -> Result<TorusConfig> {
    if n < 20 || n % 10 != 0 {
        return Err(Error::BadN { n, reason: "needs n >= 20 and n divisible by 10" });
    }
    let (d1, d2) = default_defects(n);
    let x = defect_row(n, d1, d2);
    let mut s = TorusConfig::zeros(n, n)?;
    for u in 0..n / 5 {
        let a = 5 * u + 2;
        for (row, negate) in [(a - 1, true), (a, false), (a + 1, false), (a + 2, true)] {
            for (j, &v) in x.iter().enumerate() {
                s.set(Cell::new(row, j), v ^ negate);
            }
        }
    }
    Ok(s)
}

/// The Majority instance with its defects removed; stable.
pub fn gen_clean_majority(n: usize) -> Result<TorusConfig> {
    if n < 20 || n % 10 != 0 {
        return Err(Error::BadN { n, reason: "needs n >= 20 and n divisible by 10" });
    }
    let mut s = TorusConfig::zeros(n, n)?;
    for u in 0..n / 5 {
        let a = 5 * u + 2;
        for (row, negate) in [(a - 1, true), (a, false), (a + 1, false), (a + 2, true)] {
            for j in 0..n {
                s.set(Cell::new(row, j), (j % 2 == 1) ^ negate);
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::count_unstable;
    use crate::torus::{is_stable, Rule};

    #[test]
    fn thr2_census_per_row() {
        let s = gen_hard_thr2(16).unwrap();
        assert_eq!(count_unstable(&s, Rule::THR2), 32);
        assert!(gen_hard_thr2(18).is_err());
        assert!(gen_hard_thr2(8).is_err());
    }

    #[test]
    fn majority_census_and_clean_variant() {
        let s = gen_hard_majority(20).unwrap();
        assert_eq!(count_unstable(&s, Rule::MAJORITY), 16 * 4);
        assert!(is_stable(&gen_clean_majority(20).unwrap(), Rule::MAJORITY));
        assert!(gen_hard_majority(25).is_err());
    }
}
