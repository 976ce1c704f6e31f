//! Simulation and verification toolkit for an rf-SQUID "inductor bus"
//! quantum computer: many flux qubits fixed-coupled to one superconducting
//! loop, with logical qubits encoded in interaction-free pairs.
//!
//! Every numerical type is generic over a [`Real`] scalar (`f32` or `f64`).
//! The aliases at the crate root fix the scalar to `f64`, which is what the
//! command-line tool and the design reproductions use.

pub mod bus;
pub mod circuit;
pub mod error;
pub mod evolution;
pub mod ifs;
pub mod linalg;
pub mod scalar;
pub mod spin;
pub mod squid;
pub mod units;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SquidParams = squid::SquidParams<f64>;
pub type FluxGrid = squid::FluxGrid<f64>;
pub type EigenSolution = squid::EigenSolution<f64>;
pub type TwoLevelParams = squid::TwoLevelParams<f64>;
pub type Complex64 = num_complex::Complex<f64>;
pub type BusParams = bus::BusParams<f64>;
pub type CurrentSolution = bus::CurrentSolution<f64>;
pub type SpinHamiltonianSpec = spin::SpinHamiltonianSpec<f64>;
pub type DenseOperator = spin::DenseOperator<f64>;
pub type QuantumState = evolution::QuantumState<f64>;
pub type PulseSegment = evolution::PulseSegment<f64>;
pub type PulseSchedule = evolution::PulseSchedule<f64>;
pub type GateCircuit = circuit::GateCircuit<f64>;
pub type LogicalGate = circuit::LogicalGate<f64>;
pub type ControlParams = ifs::ControlParams<f64>;
