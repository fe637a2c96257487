//! Simulation of a single photon in a four-rail linear-optical network
//! running the two-qubit Deutsch-Jozsa algorithm, with collective phase
//! noise and a parity-protected (decoherence-free) readout.
//!
//! Layers, bottom up:
//!
//! * [`optics`]: rail states and beam splitter / phase / swap unitaries.
//! * [`gates`]: logical two-qubit gates compiled to rails and checked
//!   against their textbook matrices.
//! * [`circuit`]: the interferometer stages, detector semantics and the
//!   error probability of a readout.
//! * [`noise`]: phase-noise models, samplers and closed-form calibration.
//! * [`dfs`]: decoherence-free subspace discovery for dephasing patterns.
//! * [`harness`]: seeded Monte Carlo campaigns, CSV/JSON reports.

pub mod circuit;
pub mod dfs;
pub mod error;
pub mod gates;
pub mod harness;
pub mod noise;
pub mod optics;

pub use error::{Error, Result};
