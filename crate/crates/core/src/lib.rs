//! Exact solver for the evacuation problem on dynamic flow networks whose
//! edges share one capacity and whose single sink has small in-degree.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is computed with
//! exact rationals; transit times are rescaled to integers internally so the
//! shortest-path machinery runs on `i64` costs.
//!
//! Pipeline:
//!
//! 1. [`sssp`]: successive shortest paths toward the sink, giving the
//!    piecewise-linear maximum outflow `o^T(A)` and the required time
//!    `theta(A)` of a source subset.
//! 2. [`horizon`]: the family of maximal admitting subsets and the minimum
//!    feasible horizon `T*` as the largest `theta` over that family.
//! 3. [`polytope`]: a facet walk that writes the supply vector as a convex
//!    combination of base-polytope vertices, each realised by a
//!    lexicographically maximal flow; their mixture is a quickest flow.
//! 4. [`oracle`]: a time-expanded brute force used to certify all of the above.
//! 5. [`grid`]: bidirected grid generator and the candidate-tuple filter for
//!    grid networks.

#![no_std]

extern crate alloc;

pub mod error;
pub mod grid;
pub mod horizon;
mod maxflow;
pub mod network;
pub mod oracle;
pub mod polytope;
pub mod rational;
pub mod solve;
pub mod sssp;

pub use error::Error;
pub use grid::{classify_areas, gen_grid, grid_family, AreaLabel, CandidateFilter, GridSpec};
pub use horizon::{
    check_admits, compute_a_hat, enumerate_a_hat, enumerate_a_hat_exhaustive, min_time_horizon, AHatEntry, AHatFamily,
    AdmitTuple, Horizon,
};
pub use network::{
    augment, shortest_path, validate_network, EdgeId, Network, NetworkDraft, NodeId, Path, ResidualArc, ResidualView,
    StaticFlow, SupplyFunction, ValidationReport, Violation,
};
pub use oracle::{
    build_time_expanded, default_step, oracle_feasible, oracle_max_outflow, oracle_outflow_profile, oracle_t_star,
    verify_dynamic_flow, FlowReport, FlowViolation, TimeExpandedFlow, TimeExpandedNet,
};
pub use polytope::{
    assemble_quickest_flow, decompose_supply, lexmax_flow, vertex_from_order, ConvexDecomposition, GroundVector,
    PolytopeVertex, TotalOrder,
};
pub use rational::Rational;
pub use solve::{solve, solve_with_family, solve_with_family_on, Solution};
pub use sssp::{max_outflow, min_required_time, successive_shortest_paths, SsspResult};

pub type Result<T, E = Error> = core::result::Result<T, E>;
