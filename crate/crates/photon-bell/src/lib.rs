//! Photon-assisted Bell-pair creation between two distant three-level systems.
//!
//! A coherent field mode interacts in turn with systems A and B. An optimal
//! two-outcome measurement on the field then heralds `|Ψ⁺⟩`. The crate covers
//! the exact dynamics, the minimum-error measurement, a large-`n̄`
//! linearisation, photon loss between the interactions, and cavity-to-cavity
//! transfer through a discrete-mode fiber.

pub mod error;
pub mod execution;
pub mod fiber_transfer;
pub mod fock_core;
pub mod helstrom_povm;
pub mod linearized_oracle;
pub mod loss_channel;
pub mod ramsey_dynamics;
pub mod scenario_cli;

pub use error::{Error, Result};
