use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Register split into logical qubits `Q`, code ancillas `A` and recovery ancillas `B`.
///
/// Indices run `Q = 0..k`, `A = k..n`, `B = n..n+r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitLayout {
    pub logical: usize,
    pub code_ancillas: usize,
    pub recovery_ancillas: usize,
}

impl QubitLayout {
    pub fn new(logical: usize, code_ancillas: usize, recovery_ancillas: usize) -> Result<Self> {
        if logical == 0 {
            return Err(Error::UnsupportedLayout("at least one logical qubit".into()));
        }
        Ok(QubitLayout {
            logical,
            code_ancillas,
            recovery_ancillas,
        })
    }

    /// One logical qubit, two code ancillas, two recovery ancillas.
    pub fn three_qubit_code() -> Self {
        QubitLayout {
            logical: 1,
            code_ancillas: 2,
            recovery_ancillas: 2,
        }
    }

    /// Size of the code block `QA`.
    pub fn code_len(&self) -> usize {
        self.logical + self.code_ancillas
    }

    pub fn total(&self) -> usize {
        self.code_len() + self.recovery_ancillas
    }

    pub fn logical_qubits(&self) -> std::ops::Range<usize> {
        0..self.logical
    }

    pub fn code_ancilla_qubits(&self) -> std::ops::Range<usize> {
        self.logical..self.code_len()
    }

    pub fn code_qubits(&self) -> std::ops::Range<usize> {
        0..self.code_len()
    }

    pub fn recovery_qubits(&self) -> std::ops::Range<usize> {
        self.code_len()..self.total()
    }
}
