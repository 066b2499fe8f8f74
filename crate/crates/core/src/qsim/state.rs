use nalgebra::DMatrix;

use super::channel::KrausChannel;
use super::gate::{UnitaryGate, C64};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_FLOOR: f64 = -1e-10;

/// Density matrix of an `m`-qubit register, qubit 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    data: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps `data` after checking Hermiticity, unit trace and positivity.
    pub fn new(data: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(data)?;
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(data: DMatrix<C64>) -> Result<Self> {
        let dim = data.nrows();
        if dim != data.ncols() || !dim.is_power_of_two() {
            return Err(Error::Dimension {
                expected: dim.next_power_of_two(),
                got: data.ncols(),
            });
        }
        Ok(DensityMatrix {
            num_qubits: dim.trailing_zeros() as usize,
            data,
        })
    }

    /// Projector onto the computational basis state `index`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Dimension {
                expected: dim,
                got: index,
            });
        }
        let mut data = DMatrix::zeros(dim, dim);
        data[(index, index)] = C64::new(1.0, 0.0);
        Ok(DensityMatrix { num_qubits, data })
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let norm = v.norm();
        if (norm - 1.0).abs() > TRACE_TOL.sqrt() {
            return Err(Error::InvalidState(format!("state norm {norm}")));
        }
        Self::from_matrix_unchecked(&v * v.adjoint())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    /// Population of basis state `index`.
    pub fn population(&self, index: usize) -> f64 {
        self.data[(index, index)].re
    }

    pub fn hermitian_error(&self) -> f64 {
        let d = &self.data - self.data.adjoint();
        d.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.data + self.data.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.hermitian_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "Hermitian deviation {herm:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < PSD_FLOOR {
            return Err(Error::InvalidState(format!("eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn apply_unitary(&self, gate: &UnitaryGate) -> Result<Self> {
        let kernel = gate.kernel(self.num_qubits)?;
        let mut m = self.data.clone();
        kernel.apply_columns(&mut m);
        let mut m = m.adjoint();
        kernel.apply_columns(&mut m);
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            data: m.adjoint(),
        })
    }

    /// `U rho U^dagger` for a full-register matrix.
    pub fn conjugate(&self, u: &DMatrix<C64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: u.nrows(),
            });
        }
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            data: u * &self.data * u.adjoint(),
        })
    }

    pub fn apply_channel(&self, channel: &KrausChannel) -> Result<Self> {
        if channel.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: channel.dim(),
            });
        }
        let mut out = DMatrix::<C64>::zeros(self.dim(), self.dim());
        for k in channel.operators() {
            out += k * &self.data * k.adjoint();
        }
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            data: out,
        })
    }

    /// `rho (x) |0..0><0..0|` on `m` new trailing qubits.
    pub fn extend_with_ancilla(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSubset("ancilla count must be at least 1".into()));
        }
        let dim = self.dim() << m;
        let mut data = DMatrix::<C64>::zeros(dim, dim);
        for c in 0..self.dim() {
            for r in 0..self.dim() {
                data[(r << m, c << m)] = self.data[(r, c)];
            }
        }
        Ok(DensityMatrix {
            num_qubits: self.num_qubits + m,
            data,
        })
    }

    /// Reduced state on `keep` (strictly increasing qubit indices).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        for w in keep.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidSubset(
                    "qubits to keep must be strictly increasing".into(),
                ));
            }
        }
        if let Some(&q) = keep.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                size: self.num_qubits,
            });
        }
        let n = self.num_qubits;
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let spread = |sub: usize, qubits: &[usize]| -> usize {
            let len = qubits.len();
            qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
                if sub & (1 << (len - 1 - pos)) != 0 {
                    acc | (1 << (n - 1 - q))
                } else {
                    acc
                }
            })
        };
        let kd = 1usize << keep.len();
        let td = 1usize << traced.len();
        let keep_idx: Vec<usize> = (0..kd).map(|i| spread(i, keep)).collect();
        let trace_idx: Vec<usize> = (0..td).map(|t| spread(t, &traced)).collect();
        let mut data = DMatrix::<C64>::zeros(kd, kd);
        for c in 0..kd {
            for r in 0..kd {
                let mut acc = C64::new(0.0, 0.0);
                for &t in &trace_idx {
                    acc += self.data[(keep_idx[r] | t, keep_idx[c] | t)];
                }
                data[(r, c)] = acc;
            }
        }
        Ok(DensityMatrix {
            num_qubits: keep.len(),
            data,
        })
    }

    /// `Tr[rho H]` for a diagonal observable given by its diagonal.
    pub fn expectation_diagonal(&self, diagonal: &[f64]) -> Result<f64> {
        if diagonal.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: diagonal.len(),
            });
        }
        Ok(diagonal
            .iter()
            .enumerate()
            .map(|(i, h)| h * self.data[(i, i)].re)
            .sum())
    }

    /// `Tr[rho H]` for a Hermitian matrix; fails if the imaginary part exceeds 1e-10.
    pub fn expectation(&self, h: &DMatrix<C64>) -> Result<f64> {
        if h.nrows() != self.dim() || h.ncols() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: h.nrows(),
            });
        }
        let v = (&self.data * h).trace();
        if v.im.abs() > 1e-10 {
            return Err(Error::NotHermitian(v.im.abs()));
        }
        Ok(v.re)
    }
}

/// Rank-1 projector onto the basis state spelled by `bits` (qubit 0 first).
pub fn pure_state(num_qubits: usize, bits: &[u8]) -> Result<DensityMatrix> {
    if bits.len() != num_qubits {
        return Err(Error::Dimension {
            expected: num_qubits,
            got: bits.len(),
        });
    }
    let mut index = 0usize;
    for &b in bits {
        if b > 1 {
            return Err(Error::InvalidState(format!("bit value {b}")));
        }
        index = (index << 1) | b as usize;
    }
    DensityMatrix::basis(num_qubits, index)
}
