//! Minimum-cost flow solvers over exact rational arithmetic.
//!
//! Three solvers share one problem representation ([`Network`] plus
//! [`Balances`]):
//!
//! * [`ssp::solve_ssp`]: successive shortest paths,
//! * [`scaling::solve_scaling`]: capacity scaling,
//! * [`orlins::solve_orlins`]: Orlin's strongly polynomial algorithm on
//!   uncapacitated networks, combined with [`reduce`] for finite capacities.
//!
//! Every value (flow, balance, cost, capacity, threshold) is an
//! arbitrary-precision rational, so optimality and the solver invariants are
//! checked with exact equality. [`oracle`] provides brute-force ground truth
//! for small instances.

pub mod error;
pub mod flowtheory;
pub mod instance;
pub mod netcore;
pub mod num;
pub mod oracle;
pub mod orlins;
pub mod pathsel;
pub mod reduce;
pub mod scaling;
pub mod solve;
pub mod ssp;

pub use error::{FlowError, Result};
pub use netcore::{Balances, Edge, EdgeId, Flow, Network, ResidualEdge, VertexId};
pub use num::{ExtRational, Rational};
pub use solve::{SolveResult, SolveStats, SolveStatus};
