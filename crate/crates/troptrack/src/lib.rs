//! Train tracks on punctured surfaces and tropical cluster coordinates.
//!
//! The crate models ideal triangulations of punctured surfaces, tropical
//! points of the cluster `A`- and `X`-varieties, the tropicalized potential
//! whose linearity domains are indexed by complete train tracks, and the
//! sign-stability analysis of mutation loops. All arithmetic is exact.

pub mod cone;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod potential;
pub mod rational;
pub mod stability;
pub mod surface;
pub mod tracks;
pub mod tropical;

pub use error::{Error, Result};
pub use rational::Q;
