//! Batch front end for the gain-bound library: JSON configuration, the
//! bode/srg/simulate/verify commands, and deterministic CSV/JSON emission.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;
