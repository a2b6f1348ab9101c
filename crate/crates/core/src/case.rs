use std::fmt;

use serde::{Deserialize, Serialize};

/// Which branch of the case taxonomy a (state, strategy) pair falls in.
///
/// Strip, two segments: `Case1`..`Case5`. Strip, three segments: `Case1`,
/// `Sub31`, `Sub32`, `Case5`. Disk: `DiskCase1`, `DiskCase2` (displayed as 1', 2').
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    /// Right shore reached during the first segment.
    Case1,
    /// Pivot, then left shore, heading forward.
    Case2,
    /// Pivot, then right shore.
    Case3,
    /// Pivot, then left shore, heading backward.
    Case4,
    /// Left shore reached during the first segment.
    Case5,
    /// Right shore reached during the second segment.
    Sub31,
    /// Right shore reached during the third segment.
    Sub32,
    DiskCase1,
    DiskCase2,
}

impl CaseLabel {
    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::Case1 => "1",
            CaseLabel::Case2 => "2",
            CaseLabel::Case3 => "3",
            CaseLabel::Case4 => "4",
            CaseLabel::Case5 => "5",
            CaseLabel::Sub31 => "3.1",
            CaseLabel::Sub32 => "3.2",
            CaseLabel::DiskCase1 => "1'",
            CaseLabel::DiskCase2 => "2'",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Case {}", self.name())
    }
}
