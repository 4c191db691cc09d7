//! Bayesian optimization with an epistemic nearest-neighbor surrogate.
//!
//! The surrogate ([`enn`]) predicts a mean and an uncalibrated epistemic
//! variance from the `K` nearest observations. Arms are drawn from the
//! Pareto front of `(mu, sigma)` ([`pareto`]) over candidates sampled inside a
//! TuRBO-style trust region ([`trust_region`]). [`optimizer`] ties these into
//! an ask/tell loop and [`harness`] runs replicated benchmark experiments
//! over the [`functions`] suite.

pub mod enn;
pub mod error;
pub mod functions;
pub mod harness;
pub mod lhs;
pub mod optimizer;
pub mod pareto;
pub mod rng;
pub mod trust_region;
pub mod types;

pub use enn::{enn_estimate, knn, query, EnnSurrogate, Neighbor, NeighborSet, DEFAULT_K};
pub use error::{Error, Result};
pub use functions::{function_by_name, function_names, Distortion, DistortionMode, TestFunction};
pub use harness::{run_experiment, Aggregation, Experiment, RunTrace, ScoreTable};
pub use optimizer::{Method, MethodKind, MethodSpec, Optimizer, Proposal};
pub use pareto::{dominates, select_arm_indices, select_arms, CandidatePool, ParetoPartition};
pub use rng::RngStream;
pub use trust_region::TrustRegionState;
pub use types::{squared_distance, Dataset, Design, Estimate, Observation};
