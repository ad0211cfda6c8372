//! Advective transport as a continuous-time Markov chain.
//!
//! States are the triangles followed by the boundary edge-elements, which
//! absorb. Solute leaves a triangle across an edge at a rate proportional to
//! the outward flux through it.

mod exit;
mod expm;
mod generator;
mod graph;
mod monte_carlo;

pub use exit::{
    exit_time_distribution, expected_exit_times, expected_exit_times_quadrature, stranded_states,
    ExitTimes,
};
pub use expm::{evolve_mass, expm_action, transition};
pub use generator::{edge_fluxes, generator, Generator, FLUX_NOISE_FLOOR};
pub use graph::{assert_forest, flow_graph, jump_chain, FlowGraph, ForestCheck, JumpChain};
pub use monte_carlo::{monte_carlo_exit, ExitEstimate};
