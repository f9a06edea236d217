//! Subset sums, restricted k-fold sums and completeness checks in `Z_n`,
//! with exhaustive and sampled verification of the completeness threshold
//! and the inequalities behind it.

mod bits;
pub mod bounds;
pub mod error;
pub mod sums;
pub mod verify;
pub mod zn;

pub use bounds::{threshold, ThresholdKind, ThresholdResult};
pub use error::{Result, ZnError};
pub use sums::{is_complete, k_fold_sums, lambda, subset_sums, sumset, ClosurePair};
pub use verify::{AuditReport, Witness};
pub use zn::{Modulus, ResidueSet, ZnSet};
