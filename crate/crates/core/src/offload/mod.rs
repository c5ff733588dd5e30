//! Holder-allocation policies and optimizers for mobile data offloading.

mod blind;
mod evaluate;
mod policy;
mod qos;
mod temporal;

pub use blind::{run_popularity_blind, BlindInputs, BlindRun, TrajectoryPoint};
pub use evaluate::{evaluate_offloading, EvalVia, OffloadInputs};
pub use policy::{baseline_allocation, sqrt_allocation, AllocationPolicy, PolicyKind};
pub use qos::{qos_allocation, QosSolution};
pub use temporal::{temporal_offload_experiment, TemporalCell, TemporalSetup, MECHANISMS};
