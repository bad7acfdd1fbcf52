//! Initial qubit layout for OpenQASM 2.0 programs.
//!
//! The pipeline is parse ([`qasm`]) → pair trace and repeat detection
//! ([`trace`]) → placement ([`mapper`]) → remapped output ([`qasm::emit_qasm`])
//! with an optional greedy routing pass for scoring layouts ([`route`]).

pub mod circuit;
pub mod cli;
pub mod device;
pub mod exec;
pub mod layout;
pub mod mapper;
pub mod qasm;
pub mod route;
pub mod synth;
pub mod trace;

pub use circuit::Circuit;
pub use device::{Calibration, CouplingGraph};
pub use exec::Execution;
pub use layout::{LayoutMap, Method};
pub use mapper::{map, MapError};
pub use route::{compare, compute_metrics, route, Metrics, RoutedCircuit};
