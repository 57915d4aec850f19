use serde::{Deserialize, Serialize};

use crate::torus::Cell;

/// What a structural witness demonstrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    NotRectangle,
    AlmostWraparound,
    NotAlternating,
    StrayOne,
    Overlap,
    TooClose,
    PhaseBridge,
    UnstableCell,
    BadSetType,
    AdjacentSameClass,
    MonoNeighborhood,
    ChessNeighborhood,
    ZebraSupport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub cells: Vec<Cell>,
}

/// Outcome of a structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    StableStructured,
    Violation(Witness),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::StableStructured)
    }

    pub(crate) fn violation(kind: WitnessKind, cells: Vec<Cell>) -> Self {
        Verdict::Violation(Witness { kind, cells })
    }

    /// One JSON-lines record `{check, result, witness_cells, witness_kind}`.
    pub fn to_record(&self, check: &str) -> VerdictRecord {
        match self {
            Verdict::StableStructured => VerdictRecord {
                check: check.to_string(),
                result: "ok".into(),
                witness_cells: Vec::new(),
                witness_kind: None,
            },
            Verdict::Violation(w) => VerdictRecord {
                check: check.to_string(),
                result: "violation".into(),
                witness_cells: w.cells.iter().map(|c| [c.row, c.col]).collect(),
                witness_kind: Some(w.kind),
            },
        }
    }
}

/// Serialized verdict line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub check: String,
    pub result: String,
    pub witness_cells: Vec<[usize; 2]>,
    pub witness_kind: Option<WitnessKind>,
}
