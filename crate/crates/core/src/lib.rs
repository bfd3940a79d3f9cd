//! Cursed equilibrium solvers for multi-stage games with observed actions.

pub mod cse;
pub mod dsl;
pub mod error;
pub mod game;
pub mod lead;
pub mod one_stage;
pub mod partition;
pub mod perceived;
pub mod profile;
pub mod report;
pub mod scalar;
pub mod scenarios;
pub mod scramble;
pub mod sce;
pub mod tremble;
