//! Integer-part sums of decreasing convex functions.
//!
//! [`sample`] builds test functions, [`checks`] verifies each inequality on a
//! single function and [`campaign`] runs seeded randomised searches.

pub mod campaign;
pub mod checks;
pub mod sample;

pub use campaign::{run_campaign, CampaignConfig, CampaignRecord, CampaignSummary, TheoremSummary};
pub use checks::{
    bracket_sum, check, cut_points, oracle_bracket_sum, BracketSum, CheckOutcome, CutPoints,
    LemmaVerdict, Theorem, Weights,
};
pub use sample::{ConvexSample, SampleKind};

#[derive(Debug, thiserror::Error)]
pub enum LemmaError {
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("invalid campaign configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, LemmaError>;
