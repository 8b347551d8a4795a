//! Dense complex operators and states on a truncated Fock basis.
//!
//! An operator carries its cutoff N and acts on span{|0>, ..., |N-1>} with
//! row/column index equal to the occupation number. Truncation corrupts
//! matrix identities near the top of the basis, so identities are asserted
//! on an *interior block*: rows and columns 0..N-1-M for a margin M.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::tol;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// N x N complex matrix over the truncated Fock basis, tagged with its
/// cutoff. Binary operations require equal cutoffs; a mismatch is an error,
/// never a silent broadcast (arithmetic operators panic with the same
/// message the checked constructors return).
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    cutoff: usize,
    mat: CMatrix,
}

impl TruncatedOperator {
    pub const MIN_CUTOFF: usize = 2;

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() < Self::MIN_CUTOFF {
            return Err(Error::CutoffTooSmall {
                got: mat.nrows(),
                min: Self::MIN_CUTOFF,
            });
        }
        Ok(Self {
            cutoff: mat.nrows(),
            mat,
        })
    }

    pub fn from_fn(cutoff: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::from_matrix(CMatrix::from_fn(cutoff, cutoff, f))
    }

    pub fn zeros(cutoff: usize) -> Result<Self> {
        Self::from_matrix(CMatrix::zeros(cutoff, cutoff))
    }

    pub fn identity(cutoff: usize) -> Result<Self> {
        Self::from_matrix(CMatrix::identity(cutoff, cutoff))
    }

    /// Diagonal operator from real entries (index = occupation number).
    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    /// Conjugate transpose. Exact: entries are conjugated and moved, never
    /// recomputed.
    pub fn adjoint(&self) -> Self {
        Self {
            cutoff: self.cutoff,
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            cutoff: self.cutoff,
            mat: &self.mat * c,
        }
    }

    fn check_same_cutoff(&self, other: &Self) -> Result<()> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch {
                left: self.cutoff,
                right: other.cutoff,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_cutoff(other)?;
        Ok(Self {
            cutoff: self.cutoff,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_cutoff(other)?;
        Ok(Self {
            cutoff: self.cutoff,
            mat: &self.mat - &other.mat,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_cutoff(other)?;
        Ok(Self {
            cutoff: self.cutoff,
            mat: &self.mat * &other.mat,
        })
    }

    /// Kronecker product; indices fuse row-major, with the left factor as
    /// the most significant digit: (i1, i2) -> i1 * cutoff(B) + i2.
    pub fn tensor_product(&self, other: &Self) -> Self {
        Self {
            cutoff: self.cutoff * other.cutoff,
            mat: self.mat.kronecker(&other.mat),
        }
    }

    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        if self.cutoff != state.cutoff() {
            return Err(Error::CutoffMismatch {
                left: self.cutoff,
                right: state.cutoff(),
            });
        }
        Ok(FockState {
            amp: &self.mat * state.amplitudes(),
        })
    }

    /// <psi| A |psi> for the given (not necessarily normalized) state.
    pub fn expectation(&self, state: &FockState) -> Result<C64> {
        let applied = self.apply(state)?;
        Ok(state.amplitudes().dotc(applied.amplitudes()))
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.norm()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.mat - self.mat.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Interior block of the given margin as a plain matrix.
    pub fn interior(&self, margin: usize) -> Result<CMatrix> {
        InteriorBlock::new(margin).restrict(self)
    }

    /// Max-abs entry of the interior block; the workhorse for asserting
    /// operator identities away from the truncation edge.
    pub fn interior_max_abs(&self, margin: usize) -> Result<f64> {
        Ok(self
            .interior(margin)?
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

impl Add for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn add(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn sub(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn mul(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<C64> for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn mul(self, rhs: C64) -> TruncatedOperator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn mul(self, rhs: f64) -> TruncatedOperator {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Neg for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn neg(self) -> TruncatedOperator {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Restriction of an N x N operator to rows/columns 0..N-1-M, discarding the
/// M basis states nearest the truncation edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteriorBlock {
    margin: usize,
}

impl InteriorBlock {
    pub fn new(margin: usize) -> Self {
        Self { margin }
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn restrict(&self, op: &TruncatedOperator) -> Result<CMatrix> {
        if self.margin >= op.cutoff() {
            return Err(Error::MarginTooLarge {
                margin: self.margin,
                cutoff: op.cutoff(),
            });
        }
        let size = op.cutoff() - self.margin;
        Ok(op.matrix().view((0, 0), (size, size)).into_owned())
    }
}

/// Complex amplitude vector over occupations 0..N-1.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amp: CVector,
}

impl FockState {
    pub fn from_amplitudes(amp: Vec<C64>) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::CutoffTooSmall { got: 0, min: 1 });
        }
        Ok(Self {
            amp: CVector::from_vec(amp),
        })
    }

    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::number_state(cutoff, 0)
    }

    /// The occupation eigenstate |k>.
    pub fn number_state(cutoff: usize, k: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::CutoffTooSmall { got: 0, min: 1 });
        }
        if k >= cutoff {
            return Err(Error::DimensionMismatch(format!(
                "occupation {k} outside basis 0..{}",
                cutoff - 1
            )));
        }
        let mut amp = CVector::zeros(cutoff);
        amp[k] = C64::new(1.0, 0.0);
        Ok(Self { amp })
    }

    pub fn cutoff(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    /// <n> = sum_n n |c_n|^2 (meaningful for a normalized state).
    pub fn mean_occupation(&self) -> f64 {
        self.amp
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Inconsistency(
                "cannot normalize the zero state".into(),
            ));
        }
        Ok(Self {
            amp: &self.amp * C64::new(1.0 / n, 0.0),
        })
    }

    /// Error if the norm deviates from 1 beyond the constructor contract.
    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol::NORM_LIMIT {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.cutoff() != other.cutoff() {
            return Err(Error::CutoffMismatch {
                left: self.cutoff(),
                right: other.cutoff(),
            });
        }
        Ok(self.amp.dotc(&other.amp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cutoff_floor_is_enforced() {
        assert!(matches!(
            TruncatedOperator::zeros(1),
            Err(Error::CutoffTooSmall { .. })
        ));
        assert!(TruncatedOperator::zeros(2).is_ok());
    }

    #[test]
    fn mismatched_cutoffs_are_rejected_not_broadcast() {
        let a = TruncatedOperator::identity(3).unwrap();
        let b = TruncatedOperator::identity(4).unwrap();
        assert!(matches!(
            a.checked_mul(&b),
            Err(Error::CutoffMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    #[should_panic(expected = "cutoff mismatch")]
    fn operator_arithmetic_panics_on_mismatch() {
        let a = TruncatedOperator::identity(3).unwrap();
        let b = TruncatedOperator::identity(4).unwrap();
        let _ = &a + &b;
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let op = TruncatedOperator::from_fn(2, |i, j| c((i + 1) as f64, j as f64)).unwrap();
        let adj = op.adjoint();
        assert_eq!(adj.entry(0, 1), c(2.0, -0.0));
        assert_eq!(adj.entry(1, 0), c(1.0, -1.0));
        // involution is bit-exact
        assert_eq!(adj.adjoint(), op);
    }

    #[test]
    fn tensor_product_fuses_indices_with_left_factor_most_significant() {
        let a = TruncatedOperator::from_fn(2, |i, j| c((10 * i + j) as f64, 0.0)).unwrap();
        let b = TruncatedOperator::identity(3).unwrap();
        let t = a.tensor_product(&b);
        assert_eq!(t.cutoff(), 6);
        // (i1,i2),(j1,j2) = (1,2),(0,2) -> rows 1*3+2, cols 0*3+2
        assert_eq!(t.entry(5, 2), c(10.0, 0.0));
        assert_eq!(t.entry(5, 1), c(0.0, 0.0));
    }

    #[test]
    fn interior_block_margin_bounds() {
        let op = TruncatedOperator::identity(5).unwrap();
        assert_eq!(op.interior(2).unwrap().nrows(), 3);
        assert!(matches!(
            op.interior(5),
            Err(Error::MarginTooLarge { .. })
        ));
    }

    #[test]
    fn expectation_uses_conjugate_linear_first_slot() {
        let op = TruncatedOperator::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let st = FockState::from_amplitudes(vec![c(0.0, 0.6), c(0.8, 0.0)]).unwrap();
        let ex = op.expectation(&st).unwrap();
        assert!((ex - c(0.64, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn number_state_bounds_check() {
        assert!(FockState::number_state(3, 3).is_err());
        let st = FockState::number_state(3, 2).unwrap();
        assert_eq!(st.amplitudes()[2], c(1.0, 0.0));
    }

    #[test]
    fn normalization_contract() {
        let st = FockState::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(st.check_normalized().is_err());
        let n = st.normalized().unwrap();
        assert!(n.check_normalized().is_ok());
    }
}
