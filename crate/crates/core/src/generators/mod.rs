//! Instance construction: oracle-verified stable configurations for both
//! rules, hard instances with few unstable cells, perturbation, censuses,
//! and an exhaustive distance oracle for tiny tori.

mod census;
mod hard;
mod stable;

pub use census::{count_unstable, exact_distance_to_stable, perturb, EXACT_LIMIT};
pub use hard::{gen_clean_majority, gen_hard_majority, gen_hard_thr2};
pub use stable::{gen_stable_majority, gen_stable_thr2, GenSpec};
