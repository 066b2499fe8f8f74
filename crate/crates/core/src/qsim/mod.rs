//! Dense simulation of small qubit registers.

mod channel;
mod gate;
mod layout;
mod state;

pub use channel::{KrausChannel, COMPLETENESS_TOL};
pub use gate::{
    phase_distance, sequence_matrix, unitarity_error, Control, Mat2, Pauli, Polarity, Rotation,
    UnitaryGate, C64,
};
pub(crate) use gate::{adjoint_sequence, compile, Kernel};
pub use layout::QubitLayout;
pub use state::{pure_state, DensityMatrix, HERMITIAN_TOL, PSD_FLOOR, TRACE_TOL};
