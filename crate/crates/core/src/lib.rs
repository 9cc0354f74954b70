//! Online normalized substring complexity: for every prefix `w` of a byte
//! stream, `delta(w) = max_k c_w[k] / k` where `c_w[k]` counts the distinct
//! length-`k` substrings of `w`.
//!
//! [`stream::DeltaStream`] is the entry point. [`count_oracle`] recomputes
//! everything from scratch for testing.

pub mod alpha_tracker;
pub mod cli;
pub mod count_oracle;
pub mod hull_engine;
pub mod rational;
pub mod stream;
pub mod textgen;
pub mod worstcase_engine;

pub use rational::Rational;
pub use stream::{DeltaReport, DeltaStream, EngineKind, HullSnapshot, PullbackStats, StepKind, StreamError};
