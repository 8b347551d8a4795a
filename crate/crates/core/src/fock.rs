//! Ladder and su(1,1) generators on the truncated basis.
//!
//! The Holstein-Primakoff construction realizes the su(1,1) relations
//!
//! ```text
//! [K3, K+-] = +-K+-,   [K-, K+] = 2 K3
//! ```
//!
//! on Fock space via K3 = n + kappa and K- = sqrt(n + 2 kappa) a, with
//! K+ the adjoint of K-. The Bargmann index kappa labels the positive
//! discrete-series representation (kappa = 1/2, 1, 3/2, ...) together with
//! the anomalous kappa = 1/4; the Casimir K3^2 - (K+K- + K-K+)/2 equals
//! kappa(kappa - 1) on each of these. At kappa = 1/2 the matrix elements
//! sqrt(n(n - 1 + 2 kappa)) collapse to integers, so K+^k |0> = k! |k>.
//!
//! Everything here is dense and exact up to f64 roundoff; identities are
//! asserted on interior blocks because the hard cutoff corrupts the last
//! row and column of every product.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::{CMatrix, InteriorBlock, TruncatedOperator};
use crate::tol;

/// The su(1,1) generator triple in a truncated positive discrete-series
/// representation. `k_minus` is the exact adjoint of `k_plus` by
/// construction (conjugate-transposed, never recomputed).
#[derive(Debug, Clone, PartialEq)]
pub struct SU11Generators {
    kappa: f64,
    cutoff: usize,
    k_plus: TruncatedOperator,
    k_minus: TruncatedOperator,
    k_three: TruncatedOperator,
}

impl SU11Generators {
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn k_plus(&self) -> &TruncatedOperator {
        &self.k_plus
    }

    pub fn k_minus(&self) -> &TruncatedOperator {
        &self.k_minus
    }

    pub fn k_three(&self) -> &TruncatedOperator {
        &self.k_three
    }
}

/// True iff kappa is 1/4 or a positive half-integer. Admissible values are
/// exactly representable in f64, so the comparison is exact.
pub fn is_admissible_kappa(kappa: f64) -> bool {
    if kappa == 0.25 {
        return true;
    }
    kappa > 0.0 && (2.0 * kappa).fract() == 0.0
}

/// Annihilation, creation, and number operators at the given cutoff:
/// a|n> = sqrt(n)|n-1>, a_dag = adjoint(a), number = a_dag * a.
pub fn make_ladder(
    cutoff: usize,
) -> Result<(TruncatedOperator, TruncatedOperator, TruncatedOperator)> {
    let a = TruncatedOperator::from_fn(cutoff, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })?;
    let a_dag = a.adjoint();
    let number = a_dag.checked_mul(&a)?;
    Ok((a, a_dag, number))
}

/// Holstein-Primakoff generators at Bargmann index kappa:
/// K3 = n + kappa, K- = sqrt(n + 2 kappa) a, K+ = adjoint(K-).
pub fn make_su11_hp(kappa: f64, cutoff: usize) -> Result<SU11Generators> {
    if !is_admissible_kappa(kappa) {
        return Err(Error::InvalidKappa(kappa));
    }
    // K- |n> = sqrt(n) sqrt(n - 1 + 2 kappa) |n-1>
    let k_minus = TruncatedOperator::from_fn(cutoff, |i, j| {
        if j == i + 1 {
            let n = j as f64;
            C64::new((n * (n - 1.0 + 2.0 * kappa)).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })?;
    let k_plus = k_minus.adjoint();
    let k_three =
        TruncatedOperator::from_fn(cutoff, |i, j| {
            if i == j {
                C64::new(i as f64 + kappa, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })?;
    Ok(SU11Generators {
        kappa,
        cutoff,
        k_plus,
        k_minus,
        k_three,
    })
}

/// AB - BA.
pub fn commutator(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<TruncatedOperator> {
    let ab = a.checked_mul(b)?;
    let ba = b.checked_mul(a)?;
    ab.checked_sub(&ba)
}

/// Quadratic invariant K3^2 - (K+K- + K-K+)/2; equals kappa(kappa-1) times
/// the identity on the interior of the representation.
pub fn casimir(g: &SU11Generators) -> Result<TruncatedOperator> {
    let k3sq = g.k_three().checked_mul(g.k_three())?;
    let pm = g.k_plus().checked_mul(g.k_minus())?;
    let mp = g.k_minus().checked_mul(g.k_plus())?;
    let sym = pm.checked_add(&mp)?.scale(C64::new(0.5, 0.0));
    k3sq.checked_sub(&sym)
}

/// exp(-iHt) for Hermitian H, via eigendecomposition so the result is
/// unitary up to roundoff. H is accepted when max|H - H^dag| <= 1e-10 and
/// symmetrized before decomposing.
pub fn evolve_unitary(h: &TruncatedOperator, t: f64) -> Result<TruncatedOperator> {
    let dev = h.hermiticity_deviation();
    if dev > tol::HERMITICITY_LIMIT {
        return Err(Error::NotHermitian {
            deviation: dev,
            limit: tol::HERMITICITY_LIMIT,
        });
    }
    let n = h.cutoff();
    let sym = (h.matrix() + h.matrix().adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    // U = V diag(exp(-i lambda t)) V^dag with real eigenvalues lambda.
    let phases: Vec<C64> = eig
        .eigenvalues
        .iter()
        .map(|&lam| (C64::new(0.0, -lam * t)).exp())
        .collect();
    let d = CMatrix::from_diagonal(&DVector::from_vec(phases));
    let u = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
    debug_assert_eq!(u.nrows(), n);
    TruncatedOperator::from_matrix(u)
}

/// Relative Frobenius distance from X to the complex-linear span of the
/// basis, all restricted to the interior block of the given margin:
/// ||X - P(X)||_F / ||X||_F with P the least-squares projector. Returns 0
/// when the restricted X vanishes. Scale-invariant in X by construction.
pub fn span_residual(
    x: &TruncatedOperator,
    basis: &[TruncatedOperator],
    margin: usize,
) -> Result<f64> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    for b in basis {
        if b.cutoff() != x.cutoff() {
            return Err(Error::CutoffMismatch {
                left: x.cutoff(),
                right: b.cutoff(),
            });
        }
    }
    let block = InteriorBlock::new(margin);
    let xr = block.restrict(x)?;
    let x_norm = xr.norm();
    if x_norm == 0.0 {
        return Ok(0.0);
    }
    let s2 = xr.len();
    let nb = basis.len();
    let mut a = CMatrix::zeros(s2, nb);
    for (col, b) in basis.iter().enumerate() {
        let br = block.restrict(b)?;
        for (row, v) in br.iter().enumerate() {
            a[(row, col)] = *v;
        }
    }
    let xv = DVector::from_iterator(s2, xr.iter().copied());
    // Normal equations with an eigenvalue-thresholded pseudo-inverse; the
    // Gram matrix is tiny (basis counts are single digits) and possibly
    // singular when basis elements are linearly dependent.
    let gram = a.adjoint() * &a;
    let rhs = a.adjoint() * &xv;
    let eig = SymmetricEigen::new(gram);
    let max_eig = eig
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max);
    let cut = max_eig * 1e-13;
    let mut coeffs = DVector::zeros(nb);
    for k in 0..nb {
        let lam = eig.eigenvalues[k];
        if lam.abs() > cut {
            let vk = eig.eigenvectors.column(k);
            let proj = vk.dotc(&rhs);
            coeffs += DVector::from_iterator(nb, vk.iter().map(|c| c * proj / lam));
        }
    }
    let resid = &xv - &a * coeffs;
    Ok(resid.norm() / x_norm)
}
