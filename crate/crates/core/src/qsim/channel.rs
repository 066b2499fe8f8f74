use nalgebra::DMatrix;

use super::gate::C64;
use crate::error::{Error, Result};

pub const COMPLETENESS_TOL: f64 = 1e-12;

/// Completely positive trace-preserving map `rho -> sum_l K_l rho K_l^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<DMatrix<C64>>,
}

impl KrausChannel {
    /// Fails unless `sum_l K_l^dagger K_l = I` within 1e-12.
    pub fn new(operators: Vec<DMatrix<C64>>) -> Result<Self> {
        let dim = operators
            .first()
            .map(|k| k.nrows())
            .ok_or_else(|| Error::InvalidGate("channel needs at least one operator".into()))?;
        for k in &operators {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: k.ncols(),
                });
            }
        }
        let ch = KrausChannel { dim, operators };
        let err = ch.completeness_error();
        if err > COMPLETENESS_TOL {
            return Err(Error::Incomplete(err));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel {
            dim,
            operators: vec![DMatrix::identity(dim, dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[DMatrix<C64>] {
        &self.operators
    }

    /// Max-abs deviation of `sum_l K_l^dagger K_l` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let mut acc = DMatrix::<C64>::zeros(self.dim, self.dim);
        for k in &self.operators {
            acc += k.adjoint() * k;
        }
        acc -= DMatrix::<C64>::identity(self.dim, self.dim);
        acc.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incomplete_operators_are_rejected() {
        let k = DMatrix::<C64>::identity(2, 2) * C64::new(0.9, 0.0);
        assert!(matches!(KrausChannel::new(vec![k]), Err(Error::Incomplete(_))));
    }

    #[test]
    fn identity_channel_is_complete() {
        assert_eq!(KrausChannel::identity(4).completeness_error(), 0.0);
    }
}
