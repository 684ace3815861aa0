//! Makespan scheduling with assignment restrictions, solved through structural parameters
//! of the primal, dual and incidence graphs.

pub mod decomp;
pub mod dp_basic;
pub mod dp_treewidth;
pub mod eps;
pub mod error;
pub mod graphs;
pub mod harness;
pub mod instance;
pub mod ptas;

pub use error::{Error, Result};
pub use instance::{
    load_instance, makespan, write_instance, Cost, Instance, LoadVector, Schedule, Solution, SubinstanceRef,
};
