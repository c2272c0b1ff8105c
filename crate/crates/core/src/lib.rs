//! Finite Schrödinger models `H_n = P_n^α + V_n` over non-Archimedean local
//! fields, their spectra, and the structural identities they satisfy.

pub mod field;
pub mod model;
pub mod spectral;
pub mod harness;
