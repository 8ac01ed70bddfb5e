//! Phase-space quantum mechanics of the singular oscillator
//! U(x) = ½(x² + g/x² − 2α): Wigner functions of eigenstates, quasi-Gaussian
//! and thermal states, Moyal-corrected currents, classical contours, purity
//! and the partition function.
//!
//! Everything is generic over the float type; the aliases below fix `f64`.
//!
//! ```
//! use isowigner::{EigenWigner, Oscillator};
//! use isowigner::wigner_states::{normalization, KernelState};
//!
//! # fn main() -> isowigner::Result<()> {
//! let s = EigenWigner::new(Oscillator::new(1.5)?, 2);
//! let w = s.wigner(1.3, 0.4, 1e-10)?;
//! assert!(w.abs() <= std::f64::consts::FRAC_1_PI);
//! assert!((normalization(&s, 1e-10)? - 1.0).abs() < 1e-10);
//! # Ok(())
//! # }
//! ```

pub mod eigensystem;
pub mod error;
pub mod flow;
pub mod quadrature;
pub mod scalar;
pub mod specfun;
pub mod thermal;
pub mod validation;
pub mod wigner_states;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Oscillator = eigensystem::OscillatorParams<f64>;
pub type Thermal = thermal::ThermalParams<f64>;
pub type QuasiGaussianSpec = wigner_states::QuasiGaussianParams<f64>;
pub type EigenWigner = wigner_states::Eigenstate<f64>;
pub type QuasiGaussianWigner = wigner_states::QuasiGaussian<f64>;
pub type ThermalWigner = thermal::ThermalState<f64>;
pub type Grid = wigner_states::GridSpec<f64>;
pub type WignerGrid = wigner_states::PhaseGrid<f64>;
pub type Flow = flow::FlowField<f64>;
pub type Orbit = flow::ClassicalOrbit<f64>;
