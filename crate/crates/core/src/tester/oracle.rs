use crate::torus::{Cell, TorusConfig};

/// Anything that answers single-cell reads on an `m×n` torus.
///
/// Reads take `&mut self` so that counting sources can charge them.
pub trait CellSource {
    fn dims(&self) -> (usize, usize);
    fn read(&mut self, c: Cell) -> bool;
}

impl CellSource for &TorusConfig {
    fn dims(&self) -> (usize, usize) {
        (self.m(), self.n())
    }

    #[inline]
    fn read(&mut self, c: Cell) -> bool {
        self.get(c)
    }
}

/// Query-counted access to a configuration.
///
/// Each distinct cell is charged once per oracle; repeated reads are free.
/// Charges are also attributed to the currently active step.
pub struct QueryOracle<'a> {
    sigma: &'a TorusConfig,
    seen: Vec<u64>,
    queries: u64,
    step: usize,
    per_step: [u64; 3],
}

impl<'a> QueryOracle<'a> {
    pub fn new(sigma: &'a TorusConfig) -> Self {
        QueryOracle { sigma, seen: vec![0; sigma.len().div_ceil(64)], queries: 0, step: 0, per_step: [0; 3] }
    }

    pub fn config(&self) -> &'a TorusConfig {
        self.sigma
    }

    /// Distinct cells read so far.
    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// Charges attributed to step 0 (setup or fallback), 1 and 2.
    pub fn per_step(&self) -> [u64; 3] {
        self.per_step
    }

    pub fn set_step(&mut self, step: usize) {
        self.step = step.min(2);
    }
}

impl CellSource for QueryOracle<'_> {
    fn dims(&self) -> (usize, usize) {
        (self.sigma.m(), self.sigma.n())
    }

    #[inline]
    fn read(&mut self, c: Cell) -> bool {
        let i = self.sigma.index(c);
        let (w, b) = (i / 64, 1u64 << (i % 64));
        if self.seen[w] & b == 0 {
            self.seen[w] |= b;
            self.queries += 1;
            self.per_step[self.step] += 1;
        }
        self.sigma.get(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_reads_are_free() {
        let s = TorusConfig::zeros(5, 5).unwrap();
        let mut o = QueryOracle::new(&s);
        o.read(Cell::new(1, 1));
        o.read(Cell::new(1, 1));
        o.set_step(2);
        o.read(Cell::new(4, 4));
        assert_eq!(o.queries(), 2);
        assert_eq!(o.per_step(), [1, 0, 1]);
    }
}
