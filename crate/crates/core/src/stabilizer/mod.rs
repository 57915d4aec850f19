//! Moving a configuration to a nearby Threshold-2 stable configuration:
//! wraparound line repair, rectangulation, repair of `α`-good boxes, and
//! clearing of everything else, with per-step change counts.

mod boxes;
mod lines;
mod run;

pub use boxes::{
    alpha_good, fix_box, fix_box_near_wraparound, good_boxes, maximal_good_boxes, select_boxes, touches_wraparound,
    BoxSelection,
};
pub use lines::{alpha_wraparound_rows, fix_wraparound_row};
pub use run::{stabilize, BoxRepair, StabilizationReport, StabilizerParams};
