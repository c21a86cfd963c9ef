//! Case runs, exhaustive sweeps and verification protocols on top of
//! `hasse_core`.

pub mod digits;
pub mod engine;
pub mod sweep;
pub mod verify;

pub use engine::{cmd_case, CaseOptions, Engine, HasseReport};
pub use sweep::{cmd_sweep, write_sweep, SweepRecord};
pub use verify::{Check, Verifier};
