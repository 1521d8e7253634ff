//! Two-population replicator dynamics of a moderated online community.
//!
//! Ordinary users play a prisoner's dilemma among themselves while
//! moderators play a coordination game; cross-population encounters are a
//! bimatrix game in which moderators punish (or, in the incentives
//! variant, reward) user behavior. The crate provides:
//!
//! - [`game`]: payoff matrices, population states, and every vector field
//!   (general bimatrix replicator, symmetric-game replicator, the coupled
//!   four-component system, and its two-variable reduction);
//! - [`analysis`]: closed-form equilibrium enumeration, Jacobian and
//!   eigenvalue stability classification, corner stability predicates,
//!   and the analytic basin split;
//! - [`integrate`]: fixed-step Runge-Kutta integration, omega-limit
//!   classification, basin maps, and vector-field sampling;
//! - [`extensions`]: the incentives payoff variant and the epidemic
//!   time-varying population split.

pub mod analysis;
pub mod error;
pub mod extensions;
pub mod game;
pub mod integrate;

pub use error::{Error, Result};
pub use game::{FullState, ModelParams, PayoffMatrix2, ReducedState};
