//! Monochromatic and chessboard components, rectangles, and the structural
//! characterisations of Threshold-2 and Majority stable configurations.

mod components;
mod majority;
mod rect;
mod thr2;
mod verdict;

pub use components::{
    alternation_core, chess_components, is_alternating, is_chessboard_set_with_degree, is_mono_component_by_definition,
    mono_components, Component, ComponentKind,
};
pub use majority::{detect_zebras, majority_partition, majority_structure_check, majority_structure_verdict, MajorityPartition};
pub use rect::{Interval, Rect};
pub use thr2::{thr2_structure_check, witness_cells};
pub use verdict::{Verdict, VerdictRecord, Witness, WitnessKind};
