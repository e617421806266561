//! Information versus disturbance for binary measurements on a thermal qubit.
//!
//! The crate is organised bottom-up:
//!
//! - [`bloch`]: exact 2x2 Hermitian algebra in the Pauli basis (square roots,
//!   fidelity, relative entropy, quantum Fisher information of a Bloch curve).
//! - [`thermal`]: the thermal family `ρ_β = e^{-βH}/Z`, `H = δσz/2`.
//! - [`povm`]: binary POVMs in conical coordinates, Lüders back-action and the
//!   Fisher information they extract.
//! - [`disturbance`]: the four disturbance measures and their extremal curves.
//! - [`frontier`]: trade-off regions and numerically recovered efficient
//!   frontiers.
//! - [`oracle`]: brute-force validators (finite differences, dense matrices,
//!   grids, Monte Carlo) that every closed form is checked against.
//!
//! Units are `ħ = k_B = 1`; logarithms are natural.

#![forbid(unsafe_code)]

pub mod bloch;
pub mod disturbance;
pub mod error;
pub mod extended;
pub mod frontier;
pub mod optimize;
pub mod oracle;
pub mod povm;
pub mod thermal;

pub use bloch::{BlochHermitian, DensityMatrix};
pub use disturbance::{DisturbanceMeasure, Extremal, ExtremalQuery};
pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use frontier::{FrontierSolution, TradeoffPoint};
pub use povm::{BinaryPovm, MeasurementClass, Outcome};
pub use thermal::ThermalQubit;
