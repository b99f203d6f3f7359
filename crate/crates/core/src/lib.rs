//! Closed-form models for relay-aided cellular downlink.
//!
//! The crate computes, per user location, the probability that relaying is
//! chosen (REA), the expected RF energy (EEA), the energy radiated by relays
//! and the interference it causes in neighbouring cells (ICI), and the Ψ and Γ
//! deployment metrics built on top of them. A seeded Monte-Carlo sampler in
//! [`oracle`] provides ground truth for every closed form.
//!
//! The crate is `no_std` (with `alloc`) when built without default features.
//! The `parallel` feature (default) spreads grid work over a rayon pool.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
mod math;
mod par;

pub mod channel;
pub mod eea;
pub mod geometry;
pub mod ici;
pub mod model;
pub mod oracle;
pub mod planner;
pub mod rea;
pub mod schemes;
pub mod stats;

pub use error::ModelError;

pub type Result<T> = core::result::Result<T, ModelError>;
