//! Exact centered and non-centered maximal averages on the integers and their variation.

pub mod cli;
pub mod error;
pub mod lemmas;
pub mod maximal;
pub mod peaks;
pub mod rational;
pub mod search;
pub mod sequence;
pub mod variation;

pub use error::{Error, Result};
pub use maximal::{build_profile, MaximalProfile, OperatorKind};
pub use rational::Rational;
pub use sequence::{FiniteSequence, Interval};
