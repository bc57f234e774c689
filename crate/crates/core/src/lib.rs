//! Stroboscopic simulation of ancilla-assisted discrete time crystals.
//!
//! Three models share one protocol: a faulty collective π rotation
//! `U_R(π − ε) = exp(i(π − ε)J_x)` on the spins, followed by evolution under
//! a model Hamiltonian for a fixed time, repeated `M` times.
//!
//! * [`central_spin`]: a driven qubit ancilla coupled to a spin bath.
//! * [`spin_mech`]: spins coupled to a mechanical mode, solved in closed form.
//! * [`remote`]: two central-spin systems with exchanging ancillas.
//!
//! [`spectral`] turns the recorded magnetization into power spectra and
//! subharmonic peak reports.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod central_spin;
pub mod collective;
pub mod error;
pub mod floquet;
pub mod linalg;
pub mod product;
pub mod remote;
pub mod spectral;
pub mod spin_mech;
pub mod state;

pub use error::{Error, Result};
/// Version of this crate, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use floquet::{FloquetResult, ModelConfig, ModelRun, PropagatorSign, Qubit};
