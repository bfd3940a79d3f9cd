//! Example games and harnesses that recover the analytic thresholds.

pub mod claims;
pub mod cutoffs;
pub mod games;
pub mod regions;

pub use games::{broadcaster_game, matching_game, perfect_info_game, signaling_game};
