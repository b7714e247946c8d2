//! Decay of unstable quantum states from the resonance poles of their density
//! of states: survival amplitudes by three routes, the energy autocorrelation,
//! Hamiltonian moments and the critical times between decay regimes.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod autocorr;
pub mod cli;
pub mod config;
pub mod dos;
pub mod error;
pub mod exec;
pub mod moments;
pub mod quad;
pub mod regions;
pub mod special;
pub mod survival;

pub use error::{Error, Result};
