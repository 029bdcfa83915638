//! Solvers for the Generalized Traveling Salesman Problem.
//!
//! - [`instance`]: instance model, TSPLIB and clustered-file I/O, clustering
//! - [`construct`]: tours and the Nearest-Neighbor constructor
//! - [`exact`]: layered-network exact solver
//! - [`aco`]: Ant Colony System and Reinforcing Ant Colony System
//! - [`bench`]: experiment harness and result tables

pub mod aco;
pub mod bench;
pub mod construct;
pub mod exact;
pub mod generate;
pub mod instance;

pub use aco::{AcoParams, RunResult, Variant};
pub use construct::Tour;
pub use instance::{Cost, CostMatrix, GtspInstance, NodeCoords};
