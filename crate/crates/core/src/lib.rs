//! Variational search for small quantum error-correcting codes.
//!
//! An encoder on the code block and a recovery on code block plus ancillas are
//! trained by parameter-shift gradient descent against one of two costs: the
//! infidelity with the all-zero state, or the expected number of ones (a lower
//! bound on the order-1 Wasserstein distance to the all-zero state).
//!
//! ```
//! use vqec::{cost::{CostHamiltonian, Pipeline}, noise::{NoiseKind, NoiseSpec}, qsim::QubitLayout};
//!
//! let layout = QubitLayout::three_qubit_code();
//! let noise = NoiseSpec::new(NoiseKind::PhaseFlip, 0.8, 3).unwrap();
//! let pipeline = Pipeline::with_layers(layout, 2, noise).unwrap();
//! let alpha = vec![0.0; pipeline.encoder().param_count];
//! let beta = vec![0.0; pipeline.recovery().param_count];
//! let f = pipeline.average_fidelity(&alpha, &beta).unwrap();
//! assert!((f - 0.822222).abs() < 1e-6);
//! ```

pub mod ansatz;
pub mod cost;
pub mod error;
pub mod experiment;
pub mod noise;
pub mod optim;
pub mod qsim;

pub use error::{Error, Result};
