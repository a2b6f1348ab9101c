//! Shortest expected escape paths for a swimmer lost in a fog, for the
//! infinite strip of unit width and the unit disk.
//!
//! The analytic path lengths in [`strip`] and [`disk`] are fast paths; the
//! raycaster in [`oracle`] is the reference they are tested against.
//! [`objectives`] integrates them over uniformly random starts, and
//! [`montecarlo`] estimates the same quantities by simulation.

pub mod case;
pub mod disk;
pub mod error;
pub mod geom;
pub mod gevirtz;
pub mod montecarlo;
pub mod numerics;
pub mod objectives;
pub mod oracle;
pub mod paper_check;
pub mod plot;
pub mod solve;
pub mod strip;
pub mod zalgaller;

pub use case::CaseLabel;
pub use disk::{disk_classify, disk_path_length, DiskState, DiskStrategy};
pub use error::{EscapeError, Result};
pub use geom::{Heading, Point};
pub use montecarlo::{estimate_mean, estimate_median, McEstimate, Scenario};
pub use numerics::{OptimizationResult, QuadratureSpec};
pub use objectives::{disk_expected, strip2_expected, strip2_expected_quad, strip3_expected, ObjectiveValue, DISK_STRAIGHT_MEAN};
pub use oracle::{raycast, realize, EscapeRealization, PathStrategy, Region};
pub use strip::{classify_strip2, classify_strip3, strip2_path_length, strip3_path_length, StripState, Strategy2, Strategy3};
