//! Simulation core for the six-state QKD protocol attacked by an eavesdropper
//! whose two-qubit ancilla ends up entangled.
//!
//! The crate is `no_std` (it needs `alloc`) and has no IO. It is organized
//! bottom-up:
//!
//! - [`qcore`]: dense complex linear algebra for at most four qubits.
//! - [`attack`]: ancilla states, the attack unitary and its constraint system.
//! - [`protocol`]: entangled-pair preparation, interception, reduced states,
//!   per-state disturbance, QBER Monte Carlo and the ancilla-form check.
//! - [`infotheory`]: entropies and the Alice–Bob / Alice–Eve mutual information.
//! - [`keyregion`]: the secret-key region over concurrence and disturbance.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod attack;
mod error;
pub mod infotheory;
pub mod keyregion;
pub mod protocol;
pub mod qcore;

pub use error::{Error, Result};
pub use num_complex::Complex64;
