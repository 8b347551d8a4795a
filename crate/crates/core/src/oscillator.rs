//! Harmonic-oscillator structures inside su(1,1).
//!
//! Three constructions connect the canonical pair q = (a+ + a)/sqrt(2),
//! p = i(a+ - a)/sqrt(2) with the su(1,1) generators:
//!
//! - the Schwinger single-boson realization K1 = (p^2 - q^2)/4,
//!   K2 = (qp + pq)/4, K3 = (p^2 + q^2)/4, whose Casimir is -3/16 and whose
//!   K3 spectrum (n + 1/2)/2 splits into the even/odd parity sectors
//!   n' + 1/4 and n' + 3/4;
//! - linear observables Q = (K+ + K-)/sqrt(2), P = i(K+ - K-)/sqrt(2),
//!   H = K3 obeying the oscillator Heisenberg pair [H, Q] = -iP,
//!   [H, P] = iQ, with [Q, P] = 2iK3 and (P^2 + Q^2)/2 = K3^2 - kappa(kappa-1);
//! - the inverse Holstein-Primakoff ladder a = (K3 + kappa)^{-1/2} K-,
//!   which restores [Q, P] = i and H = a+a + 1/2 = K3 - kappa + 1/2.
//!
//! A related bracket identity holds for q = (K+ + K-)/2, p = i(K+ - K-)/2
//! and H = omega (K3 - kappa + 1/2): [q, p] = i(H/omega + (kappa - 1/2)),
//! independent of omega.
//!
//! Square roots and inverse square roots are taken entrywise on diagonals
//! (exact, since every such operator is diagonal in this basis), and all
//! identities are asserted on interior blocks with margins scaled to the
//! number of products involved.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{commutator, make_ladder, SU11Generators};
use crate::operator::TruncatedOperator;
use crate::tol;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Canonical pair q, p at the given cutoff, built from the ladder operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorPair {
    cutoff: usize,
    q: TruncatedOperator,
    p: TruncatedOperator,
}

impl OscillatorPair {
    /// q = (a+ + a)/sqrt(2), p = i(a+ - a)/sqrt(2).
    pub fn new(cutoff: usize) -> Result<Self> {
        let (a, a_dag, _) = make_ladder(cutoff)?;
        Ok(Self::from_ladder(&a, &a_dag))
    }

    fn from_ladder(a: &TruncatedOperator, a_dag: &TruncatedOperator) -> Self {
        let q = (a_dag + a).scale(C64::new(1.0 / SQRT_2, 0.0));
        let p = (a_dag - a).scale(C64::new(0.0, 1.0 / SQRT_2));
        Self {
            cutoff: a.cutoff(),
            q,
            p,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn q(&self) -> &TruncatedOperator {
        &self.q
    }

    pub fn p(&self) -> &TruncatedOperator {
        &self.p
    }
}

/// The Schwinger single-boson su(1,1) generators and their ladder
/// combinations K+- = K1 +- iK2.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwingerGenerators {
    cutoff: usize,
    k1: TruncatedOperator,
    k2: TruncatedOperator,
    k3: TruncatedOperator,
    k_plus: TruncatedOperator,
    k_minus: TruncatedOperator,
}

impl SchwingerGenerators {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }
    pub fn k1(&self) -> &TruncatedOperator {
        &self.k1
    }
    pub fn k2(&self) -> &TruncatedOperator {
        &self.k2
    }
    pub fn k3(&self) -> &TruncatedOperator {
        &self.k3
    }
    pub fn k_plus(&self) -> &TruncatedOperator {
        &self.k_plus
    }
    pub fn k_minus(&self) -> &TruncatedOperator {
        &self.k_minus
    }
}

/// K1 = (p^2 - q^2)/4, K2 = (qp + pq)/4, K3 = (p^2 + q^2)/4 from the
/// canonical pair; quadratic in the ladder operators, hence margin 4 on
/// identity checks.
pub fn schwinger_generators(cutoff: usize) -> Result<SchwingerGenerators> {
    if cutoff < 6 {
        return Err(Error::CutoffTooSmall {
            got: cutoff,
            min: 6,
        });
    }
    let pair = OscillatorPair::new(cutoff)?;
    let (q, p) = (pair.q(), pair.p());
    let q2 = q.checked_mul(q)?;
    let p2 = p.checked_mul(p)?;
    let quarter = C64::new(0.25, 0.0);
    let k1 = p2.checked_sub(&q2)?.scale(quarter);
    let k2 = q.checked_mul(p)?.checked_add(&p.checked_mul(q)?)?.scale(quarter);
    let k3 = p2.checked_add(&q2)?.scale(quarter);
    let k_plus = k1.checked_add(&k2.scale(C64::new(0.0, 1.0)))?;
    let k_minus = k1.checked_sub(&k2.scale(C64::new(0.0, 1.0)))?;
    Ok(SchwingerGenerators {
        cutoff,
        k1,
        k2,
        k3,
        k_plus,
        k_minus,
    })
}

/// Which construction produced an observable triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableSource {
    /// Q, P linear in K+-, H = K3.
    LinearInK,
    /// Q, P built from the inverse Holstein-Primakoff ladder.
    InverseHp,
}

/// Hermitian observable triple (Q, P, H) attached to an su(1,1)
/// representation of index kappa.
#[derive(Debug, Clone, PartialEq)]
pub struct SU11Observables {
    kappa: f64,
    source: ObservableSource,
    q: TruncatedOperator,
    p: TruncatedOperator,
    h: TruncatedOperator,
}

impl SU11Observables {
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn source(&self) -> ObservableSource {
        self.source
    }
    pub fn q(&self) -> &TruncatedOperator {
        &self.q
    }
    pub fn p(&self) -> &TruncatedOperator {
        &self.p
    }
    pub fn h(&self) -> &TruncatedOperator {
        &self.h
    }
}

/// Q = (K+ + K-)/sqrt(2), P = i(K+ - K-)/sqrt(2), H = K3.
pub fn su11_observables_linear(g: &SU11Generators) -> Result<SU11Observables> {
    let q = g
        .k_plus()
        .checked_add(g.k_minus())?
        .scale(C64::new(1.0 / SQRT_2, 0.0));
    let p = g
        .k_plus()
        .checked_sub(g.k_minus())?
        .scale(C64::new(0.0, 1.0 / SQRT_2));
    Ok(SU11Observables {
        kappa: g.kappa(),
        source: ObservableSource::LinearInK,
        q,
        p,
        h: g.k_three().clone(),
    })
}

/// Entrywise inverse square root of a strictly positive diagonal operator.
fn diagonal_inv_sqrt(op: &TruncatedOperator) -> Result<TruncatedOperator> {
    let n = op.cutoff();
    for i in 0..n {
        let d = op.entry(i, i);
        if d.im != 0.0 || d.re <= 0.0 {
            return Err(Error::NonPositive {
                name: "diagonal entry",
                got: d.re,
            });
        }
    }
    TruncatedOperator::from_fn(n, |i, j| {
        if i == j {
            C64::new(1.0 / op.entry(i, i).re.sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Inverse Holstein-Primakoff ladder a = (K3 + kappa)^{-1/2} K-, with the
/// canonical pair built from it and H = a+a + 1/2.
///
/// Cross-checks H = K3 - kappa + 1/2 on the interior (margin 2) before
/// returning; a violation is reported as an inconsistency.
pub fn inverse_hp_ladder(g: &SU11Generators) -> Result<(TruncatedOperator, SU11Observables)> {
    let n = g.cutoff();
    // K3 + kappa is diag(n + 2 kappa) > 0 for every admissible kappa
    let shifted = g
        .k_three()
        .checked_add(&TruncatedOperator::identity(n)?.scale(C64::new(g.kappa(), 0.0)))?;
    let inv_sqrt = diagonal_inv_sqrt(&shifted)?;
    let a = inv_sqrt.checked_mul(g.k_minus())?;
    let a_dag = a.adjoint();
    let pair = OscillatorPair::from_ladder(&a, &a_dag);
    let h = a_dag
        .checked_mul(&a)?
        .checked_add(&TruncatedOperator::identity(n)?.scale(C64::new(0.5, 0.0)))?;

    let want = g
        .k_three()
        .checked_sub(&TruncatedOperator::identity(n)?.scale(C64::new(g.kappa() - 0.5, 0.0)))?;
    let dev = h.checked_sub(&want)?.interior_max_abs(2)?;
    if dev > tol::TOL_PRODUCT {
        return Err(Error::Inconsistency(format!(
            "inverse ladder energy deviates from K3 - kappa + 1/2 by {dev:.3e}"
        )));
    }

    Ok((
        a,
        SU11Observables {
            kappa: g.kappa(),
            source: ObservableSource::InverseHp,
            q: pair.q().clone(),
            p: pair.p().clone(),
            h,
        },
    ))
}

/// Interior max-abs of [q, p] - i(H/omega + (kappa - 1/2)) for
/// q = (K+ + K-)/2, p = i(K+ - K-)/2, H = omega (K3 - kappa + 1/2).
/// The commutator equals iK3, so the residual is omega-independent.
pub fn generalized_bracket_check(g: &SU11Generators, omega: f64) -> Result<f64> {
    if omega <= 0.0 {
        return Err(Error::NonPositive {
            name: "omega",
            got: omega,
        });
    }
    let n = g.cutoff();
    let q = g.k_plus().checked_add(g.k_minus())?.scale(C64::new(0.5, 0.0));
    let p = g.k_plus().checked_sub(g.k_minus())?.scale(C64::new(0.0, 0.5));
    let ident = TruncatedOperator::identity(n)?;
    let h = g
        .k_three()
        .checked_sub(&ident.scale(C64::new(g.kappa() - 0.5, 0.0)))?
        .scale(C64::new(omega, 0.0));
    let bracket = commutator(&q, &p)?;
    let target = h
        .scale(C64::new(1.0 / omega, 0.0))
        .checked_add(&ident.scale(C64::new(g.kappa() - 0.5, 0.0)))?
        .scale(C64::new(0.0, 1.0));
    bracket.checked_sub(&target)?.interior_max_abs(2)
}

/// One row of the oscillator identity table: a named residual, the
/// representation it was measured in, and its pass/fail verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorCheck {
    pub identity: &'static str,
    pub kappa: Option<f64>,
    pub cutoff: usize,
    pub residual: f64,
    pub tolerance: f64,
}

impl OscillatorCheck {
    pub fn pass(&self) -> bool {
        self.residual < self.tolerance
    }
}

fn check(
    identity: &'static str,
    kappa: Option<f64>,
    cutoff: usize,
    residual: f64,
    tolerance: f64,
) -> OscillatorCheck {
    OscillatorCheck {
        identity,
        kappa,
        cutoff,
        residual,
        tolerance,
    }
}

/// Evaluate every oscillator identity at the given cutoff and return the
/// residual table (the CLI renders it as CSV). Linear-observable rows are
/// produced for kappa in {1/2, 1, 3/2}; inverse-ladder rows for
/// {1/2, 3/2}; Schwinger rows carry no kappa (the representation is
/// reducible, mixing the 1/4 and 3/4 sectors).
pub fn identity_table(cutoff: usize) -> Result<Vec<OscillatorCheck>> {
    let mut rows = Vec::new();
    let i_unit = C64::new(0.0, 1.0);

    // canonical pair
    let pair = OscillatorPair::new(cutoff)?;
    let ident = TruncatedOperator::identity(cutoff)?;
    let qp = commutator(pair.q(), pair.p())?;
    rows.push(check(
        "canonical-q-p-bracket",
        None,
        cutoff,
        qp.checked_sub(&ident.scale(i_unit))?.interior_max_abs(2)?,
        tol::TOL_PRODUCT,
    ));

    // Schwinger realization
    let s = schwinger_generators(cutoff)?;
    let margin = 4;
    let r = commutator(s.k1(), s.k2())?
        .checked_add(&s.k3().scale(i_unit))?
        .interior_max_abs(margin)?;
    rows.push(check("schwinger-k1-k2", None, cutoff, r, tol::TOL_PRODUCT));
    let r = commutator(s.k3(), s.k1())?
        .checked_sub(&s.k2().scale(i_unit))?
        .interior_max_abs(margin)?;
    rows.push(check("schwinger-k3-k1", None, cutoff, r, tol::TOL_PRODUCT));
    let r = commutator(s.k2(), s.k3())?
        .checked_sub(&s.k1().scale(i_unit))?
        .interior_max_abs(margin)?;
    rows.push(check("schwinger-k2-k3", None, cutoff, r, tol::TOL_PRODUCT));
    let cas = s
        .k3()
        .checked_mul(s.k3())?
        .checked_sub(&s.k1().checked_mul(s.k1())?)?
        .checked_sub(&s.k2().checked_mul(s.k2())?)?;
    let r = cas
        .checked_add(&ident.scale(C64::new(3.0 / 16.0, 0.0)))?
        .interior_max_abs(margin)?;
    rows.push(check("schwinger-casimir", None, cutoff, r, tol::TOL_PRODUCT));
    let mut diag_dev = 0.0f64;
    let mut parity_dev = 0.0f64;
    for n in 0..cutoff - 1 {
        let d = s.k3().entry(n, n);
        let want = (n as f64 + 0.5) / 2.0;
        diag_dev = diag_dev.max((d - C64::new(want, 0.0)).norm());
        let sector = if n % 2 == 0 {
            (n / 2) as f64 + 0.25
        } else {
            ((n - 1) / 2) as f64 + 0.75
        };
        parity_dev = parity_dev.max((d - C64::new(sector, 0.0)).norm());
    }
    rows.push(check(
        "schwinger-k3-diagonal",
        None,
        cutoff,
        diag_dev,
        tol::TOL_CONSTRUCTOR,
    ));
    rows.push(check(
        "schwinger-parity-sectors",
        None,
        cutoff,
        parity_dev,
        tol::TOL_CONSTRUCTOR,
    ));

    // linear observables per representation
    for kappa in [0.5, 1.0, 1.5] {
        let g = crate::fock::make_su11_hp(kappa, cutoff)?;
        let obs = su11_observables_linear(&g)?;
        let r = commutator(obs.h(), obs.q())?
            .checked_add(&obs.p().scale(i_unit))?
            .interior_max_abs(4)?;
        rows.push(check("heisenberg-h-q", Some(kappa), cutoff, r, tol::TOL_PRODUCT));
        let r = commutator(obs.h(), obs.p())?
            .checked_sub(&obs.q().scale(i_unit))?
            .interior_max_abs(4)?;
        rows.push(check("heisenberg-h-p", Some(kappa), cutoff, r, tol::TOL_PRODUCT));
        let r = commutator(obs.q(), obs.p())?
            .checked_sub(&g.k_three().scale(C64::new(0.0, 2.0)))?
            .interior_max_abs(4)?;
        rows.push(check("q-p-two-k3", Some(kappa), cutoff, r, tol::TOL_PRODUCT));
        let quad = obs
            .p()
            .checked_mul(obs.p())?
            .checked_add(&obs.q().checked_mul(obs.q())?)?
            .scale(C64::new(0.5, 0.0));
        let want = g
            .k_three()
            .checked_mul(g.k_three())?
            .checked_sub(&ident.scale(C64::new(kappa * (kappa - 1.0), 0.0)))?;
        let r = quad.checked_sub(&want)?.interior_max_abs(4)?;
        rows.push(check(
            "quadrature-energy",
            Some(kappa),
            cutoff,
            r,
            10.0 * tol::TOL_PRODUCT,
        ));
        if kappa == 0.5 {
            let mut dev = 0.0f64;
            for n in 0..cutoff {
                dev = dev.max((obs.h().entry(n, n) - C64::new(n as f64 + 0.5, 0.0)).norm());
            }
            rows.push(check(
                "fundamental-energy-spectrum",
                Some(kappa),
                cutoff,
                dev,
                tol::TOL_CONSTRUCTOR,
            ));
        }
    }

    // inverse Holstein-Primakoff ladder
    for kappa in [0.5, 1.5] {
        let g = crate::fock::make_su11_hp(kappa, cutoff)?;
        let (a, obs) = inverse_hp_ladder(&g)?;
        let r = commutator(obs.q(), obs.p())?
            .checked_sub(&ident.scale(i_unit))?
            .interior_max_abs(4)?;
        rows.push(check("inverse-hp-q-p", Some(kappa), cutoff, r, tol::TOL_PRODUCT));
        let want = g
            .k_three()
            .checked_sub(&ident.scale(C64::new(kappa - 0.5, 0.0)))?;
        let r = obs.h().checked_sub(&want)?.interior_max_abs(2)?;
        rows.push(check(
            "inverse-hp-energy",
            Some(kappa),
            cutoff,
            r,
            tol::TOL_PRODUCT,
        ));
        if kappa == 0.5 {
            let (plain, _, _) = make_ladder(cutoff)?;
            let r = a.checked_sub(&plain)?.interior_max_abs(2)?;
            rows.push(check(
                "inverse-hp-fundamental-ladder",
                Some(kappa),
                cutoff,
                r,
                tol::TOL_CONSTRUCTOR,
            ));
        }
    }

    // omega-independent bracket identity
    for (kappa, omega) in [(0.5, 1.0), (2.0, 3.0)] {
        let g = crate::fock::make_su11_hp(kappa, cutoff)?;
        let r = generalized_bracket_check(&g, omega)?;
        rows.push(check(
            "generalized-bracket",
            Some(kappa),
            cutoff,
            r,
            tol::TOL_PRODUCT,
        ));
    }

    Ok(rows)
}
