//! Rook monoid posets under the Bruhat-Chevalley-Renner order, their
//! EL-labeling, and exhaustive verification of the labeling's properties.

pub mod cli;
pub mod error;
pub mod export;
pub mod instances;
pub mod mutation;
pub mod poset;
pub mod rook;
pub mod verify;

pub use error::{Error, Result};
pub use instances::{InstanceSpec, RookPoset};
pub use poset::{Chain, GradedPoset, Interval, Length2Shape, MobiusTable};
pub use rook::{CoverType, EdgeLabel, RookElement};
pub use verify::{CampaignConfig, Check, Scope, VerificationReport};
