//! Query-counted access, the rectangulated view, wraparound consistency,
//! cross-shaped bounding boxes and the sublinear Threshold-2 tester.
//!
//! Everything here reads the configuration through a [`CellSource`], so the
//! same code runs against a counting [`QueryOracle`], the lazy `σ#` view,
//! or a materialised configuration.

mod boxes;
mod oracle;
mod rectangulation;
mod run;
mod wraparound;

pub use boxes::{
    boundary_cells, cell_kind, cross_region, distance_to_rect, find_boundary_violation, find_perimeter_violation,
    interior_violation, is_mono_cell, perimeter_violation, ring_cells, BoundingBox, BoxKind,
};
pub use oracle::{CellSource, QueryOracle};
pub use rectangulation::{rectangulate, rectangulated_read, SharpView, Tiling};
pub use run::{
    run_naive_tester, run_tester, verify_report, Decision, TesterOutcome, TesterParams, ViolationKind, ViolationReport,
};
pub use wraparound::{
    classify_wraparound, classify_wraparound_materialized, is_chessboard_wraparound_col, is_chessboard_wraparound_row,
    is_violating_pair, Orientation, Parity, WraparoundFlags,
};
