//! Boost identities and the internal-symmetry contrast between su(1,1)
//! and the boson ladder algebra.
//!
//! A boost of Lorentz factor gamma acts on a two-component mode pair as
//!
//! ```text
//! M(gamma) = [ gamma            i sqrt(gamma^2-1) ]
//!            [ -i sqrt(gamma^2-1)          gamma  ]
//! ```
//!
//! which is Hermitian and orthogonal (M M^T = 1) with det 1, but *not*
//! unitary for gamma > 1. It arises from the 2x2 fundamental su(1,1)
//! realization by the exponential map exp(i theta (k+ + k-)/2) with
//! gamma = cosh(theta/2): the chosen matrices
//!
//! ```text
//! k1 = [[0, 1/2], [-1/2, 0]],  k2 = [[0, -i/2], [-i/2, 0]],
//! k3 = diag(1/2, -1/2)
//! ```
//!
//! satisfy [k1, k2] = -i k3, [k3, k1] = i k2, [k2, k3] = i k1, and
//! i(k+ + k-) squares to +1, so the exponential closes on cosh/sinh.
//!
//! In the truncated Fock representations the same group element
//! U = exp(i theta K1) is an internal symmetry for su(1,1) — U K3 U+ stays
//! in span{K+, K-, K3, 1} up to a truncation floor that shrinks as the
//! interior margin grows — while the conjugated number operator acquires
//! components far outside span{1, a, a+, n}, with a residual bounded away
//! from zero. The module also evaluates a boosted-wavevector map and a
//! central-difference Poisson-bracket check for the polarization
//! coordinates (R_x, R_y, R_z) = (r cos phi, r sin phi, r), whose brackets
//! close like the generators above.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{evolve_unitary, make_ladder, make_su11_hp, span_residual};
use crate::operator::TruncatedOperator;
use crate::stats::Algebra;

pub type M2 = Matrix2<C64>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// 2x2 boost of Lorentz factor gamma: Hermitian, orthogonal, det 1, and
/// non-unitary for gamma > 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostMatrix {
    gamma: f64,
    entries: M2,
}

impl BoostMatrix {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> &M2 {
        &self.entries
    }

    pub fn det(&self) -> C64 {
        let m = &self.entries;
        m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        (self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Max-abs entry of M M^T - 1 (orthogonality defect; ~roundoff).
    pub fn orthogonality_deviation(&self) -> f64 {
        (self.entries * self.entries.transpose() - M2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Max-abs entry of M M^dag - 1; strictly positive for gamma > 1 and
    /// growing like 2 gamma sqrt(gamma^2 - 1).
    pub fn non_unitarity_witness(&self) -> f64 {
        (self.entries * self.entries.adjoint() - M2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// [[gamma, i sqrt(gamma^2-1)], [-i sqrt(gamma^2-1), gamma]].
pub fn boost_matrix(gamma: f64) -> Result<BoostMatrix> {
    // rejects NaN as well as gamma < 1
    if gamma < 1.0 || gamma.is_nan() {
        return Err(Error::InvalidGamma(gamma));
    }
    let s = (gamma * gamma - 1.0).sqrt();
    let entries = M2::new(c(gamma, 0.0), c(0.0, s), c(0.0, -s), c(gamma, 0.0));
    Ok(BoostMatrix { gamma, entries })
}

/// Fixed 2x2 realization of the su(1,1) generators (see module docs).
#[derive(Debug, Clone, PartialEq)]
pub struct Su11Fundamental {
    k1: M2,
    k2: M2,
    k3: M2,
}

impl Su11Fundamental {
    pub fn k1(&self) -> &M2 {
        &self.k1
    }
    pub fn k2(&self) -> &M2 {
        &self.k2
    }
    pub fn k3(&self) -> &M2 {
        &self.k3
    }

    pub fn k_plus(&self) -> M2 {
        self.k1 + self.k2 * c(0.0, 1.0)
    }

    pub fn k_minus(&self) -> M2 {
        self.k1 - self.k2 * c(0.0, 1.0)
    }

    /// Max-abs deviations of the three bracket relations
    /// [k1,k2]+ik3, [k3,k1]-ik2, [k2,k3]-ik1 (all zero up to roundoff).
    pub fn bracket_deviations(&self) -> [f64; 3] {
        let comm = |a: &M2, b: &M2| a * b - b * a;
        let max_abs =
            |m: M2| -> f64 { m.iter().map(|z| z.norm()).fold(0.0, f64::max) };
        [
            max_abs(comm(&self.k1, &self.k2) + self.k3 * c(0.0, 1.0)),
            max_abs(comm(&self.k3, &self.k1) - self.k2 * c(0.0, 1.0)),
            max_abs(comm(&self.k2, &self.k3) - self.k1 * c(0.0, 1.0)),
        ]
    }
}

/// The pinned fundamental matrices. k+ = k1 + i k2 = [[0,1],[0,0]] and
/// k- = [[0,0],[-1,0]], so i(k+ + k-) = [[0,i],[-i,0]] squares to +1.
pub fn su11_fundamental() -> Su11Fundamental {
    Su11Fundamental {
        k1: M2::new(c(0.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0)),
        k2: M2::new(c(0.0, 0.0), c(0.0, -0.5), c(0.0, -0.5), c(0.0, 0.0)),
        k3: M2::new(c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)),
    }
}

/// Plain scaling-and-squaring Taylor exponential of a 2x2 complex matrix.
/// Deliberately formula-free so it can serve as an independent route to
/// the cosh/sinh closed form.
fn expm2(a: &M2) -> M2 {
    let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * 2.0;
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * c(0.5f64.powi(s), 0.0); // a / 2^s
    let mut sum = M2::identity();
    let mut term = M2::identity();
    let mut k = 1.0f64;
    loop {
        term = term * scaled * c(1.0 / k, 0.0);
        sum += term;
        let t = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tot = sum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if t <= 1e-18 * tot || k >= 60.0 {
            break;
        }
        k += 1.0;
    }
    let mut result = sum;
    for _ in 0..s {
        result *= result;
    }
    result
}

/// exp(i theta (k+ + k-)/2) in the fundamental realization, by genuine
/// matrix exponentiation; equals boost_matrix(cosh(theta/2)) for
/// theta >= 0.
pub fn exp_boost(theta: f64) -> M2 {
    let f = su11_fundamental();
    let gen = (f.k_plus() + f.k_minus()) * c(0.0, 0.5 * theta);
    expm2(&gen)
}

/// Conjugated probe U g U+ with U = exp(i theta K1), K1 = (K+ + K-)/2 in
/// the Holstein-Primakoff representation (kappa, cutoff).
pub fn boost_conjugated(
    theta: f64,
    kappa: f64,
    cutoff: usize,
    probe: &TruncatedOperator,
) -> Result<TruncatedOperator> {
    let g = make_su11_hp(kappa, cutoff)?;
    let k1 = g
        .k_plus()
        .checked_add(g.k_minus())?
        .scale(c(0.5, 0.0));
    // exp(-i K1 (-theta)) = exp(i theta K1)
    let u = evolve_unitary(&k1, -theta)?;
    u.checked_mul(probe)?.checked_mul(&u.adjoint())
}

/// How far the boost-conjugated probe leaves its algebra's linear span,
/// measured on the interior block of the given margin.
///
/// su11: probe K3, basis {K+, K-, K3, 1}. weyl: probe n, basis
/// {1, a, a+, n}. The conjugating element is the same su(1,1) group
/// element in both cases; only the probe and span differ.
pub fn internal_symmetry_residual(
    theta: f64,
    algebra: Algebra,
    kappa: f64,
    cutoff: usize,
    margin: usize,
) -> Result<f64> {
    let probe = match algebra {
        Algebra::Su11 => make_su11_hp(kappa, cutoff)?.k_three().clone(),
        Algebra::Weyl => make_ladder(cutoff)?.2,
    };
    internal_symmetry_residual_with_probe(theta, algebra, kappa, cutoff, margin, &probe)
}

/// As [`internal_symmetry_residual`], with a caller-chosen Hermitian probe.
pub fn internal_symmetry_residual_with_probe(
    theta: f64,
    algebra: Algebra,
    kappa: f64,
    cutoff: usize,
    margin: usize,
    probe: &TruncatedOperator,
) -> Result<f64> {
    if cutoff < 40 {
        return Err(Error::CutoffTooSmall {
            got: cutoff,
            min: 40,
        });
    }
    if margin < 10 {
        return Err(Error::MarginTooSmall {
            got: margin,
            min: 10,
        });
    }
    let conjugated = boost_conjugated(theta, kappa, cutoff, probe)?;
    let basis: Vec<TruncatedOperator> = match algebra {
        Algebra::Su11 => {
            let g = make_su11_hp(kappa, cutoff)?;
            vec![
                g.k_plus().clone(),
                g.k_minus().clone(),
                g.k_three().clone(),
                TruncatedOperator::identity(cutoff)?,
            ]
        }
        Algebra::Weyl => {
            let (a, a_dag, number) = make_ladder(cutoff)?;
            vec![TruncatedOperator::identity(cutoff)?, a, a_dag, number]
        }
    };
    span_residual(&conjugated, &basis, margin)
}

/// Wavevector, boost velocity, and light speed for the boosted-wavevector
/// map. Validated at construction: c > 0 and |v| < c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    k: [f64; 3],
    v: [f64; 3],
    c: f64,
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl WaveVector {
    pub fn new(k: [f64; 3], v: [f64; 3], c: f64) -> Result<Self> {
        if c <= 0.0 {
            return Err(Error::NonPositive {
                name: "light speed",
                got: c,
            });
        }
        let speed = dot(&v, &v).sqrt();
        if speed >= c {
            return Err(Error::SuperluminalSpeed { speed, c });
        }
        Ok(Self { k, v, c })
    }

    pub fn k(&self) -> [f64; 3] {
        self.k
    }
    pub fn v(&self) -> [f64; 3] {
        self.v
    }
    pub fn light_speed(&self) -> f64 {
        self.c
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - dot(&self.v, &self.v) / (self.c * self.c)).sqrt()
    }
}

/// k' = k + ((gamma^2-1)/gamma) omega_k [1 + sqrt((gamma-1)/(gamma+1))
/// cos(k.v)] v / v^2, with omega_k = c|k|; v = 0 returns k unchanged.
/// Evaluated literally; the change k' - k is parallel to v by construction.
pub fn boosted_wavevector(w: &WaveVector) -> [f64; 3] {
    let v2 = dot(&w.v, &w.v);
    if v2 == 0.0 {
        return w.k;
    }
    let gamma = w.gamma();
    let omega = w.c * dot(&w.k, &w.k).sqrt();
    let bracket = 1.0 + ((gamma - 1.0) / (gamma + 1.0)).sqrt() * dot(&w.k, &w.v).cos();
    let scale = (gamma * gamma - 1.0) / gamma * omega * bracket / v2;
    [
        w.k[0] + scale * w.v[0],
        w.k[1] + scale * w.v[1],
        w.k[2] + scale * w.v[2],
    ]
}

/// Polarization coordinates on the (r, phi) chart.
fn pol_x(r: f64, phi: f64) -> f64 {
    r * phi.cos()
}
fn pol_y(r: f64, phi: f64) -> f64 {
    r * phi.sin()
}
fn pol_z(r: f64, _phi: f64) -> f64 {
    r
}

/// {f, g} = f_r g_phi - f_phi g_r by central differences of step h.
fn pb_central(
    f: impl Fn(f64, f64) -> f64,
    g: impl Fn(f64, f64) -> f64,
    r: f64,
    phi: f64,
    h: f64,
) -> f64 {
    let fr = (f(r + h, phi) - f(r - h, phi)) / (2.0 * h);
    let fphi = (f(r, phi + h) - f(r, phi - h)) / (2.0 * h);
    let gr = (g(r + h, phi) - g(r - h, phi)) / (2.0 * h);
    let gphi = (g(r, phi + h) - g(r, phi - h)) / (2.0 * h);
    fr * gphi - fphi * gr
}

/// Residuals of the three bracket identities {Rx,Ry} = Rz,
/// {Rz,Rx} = -Ry, {Rz,Ry} = Rx under the central-difference bracket;
/// each is O(h^2).
pub fn polarization_pb_residuals(r: f64, phi: f64, h: f64) -> Result<[f64; 3]> {
    if r <= 0.0 {
        return Err(Error::NonPositive { name: "r", got: r });
    }
    if h <= 0.0 {
        return Err(Error::NonPositive { name: "h", got: h });
    }
    Ok([
        (pb_central(pol_x, pol_y, r, phi, h) - pol_z(r, phi)).abs(),
        (pb_central(pol_z, pol_x, r, phi, h) + pol_y(r, phi)).abs(),
        (pb_central(pol_z, pol_y, r, phi, h) - pol_x(r, phi)).abs(),
    ])
}

/// Same residuals with analytic partial derivatives (the h-free path);
/// zero up to a couple of ulps.
pub fn polarization_pb_residuals_exact(r: f64, phi: f64) -> Result<[f64; 3]> {
    if r <= 0.0 {
        return Err(Error::NonPositive { name: "r", got: r });
    }
    let (sin, cos) = phi.sin_cos();
    // partials: Rx_r = cos, Rx_phi = -r sin; Ry_r = sin, Ry_phi = r cos;
    // Rz_r = 1, Rz_phi = 0
    let xy = cos * (r * cos) - (-r * sin) * sin;
    let zx = 1.0 * (-r * sin) - 0.0 * cos;
    let zy = 1.0 * (r * cos) - 0.0 * sin;
    Ok([
        (xy - r).abs(),
        (zx + r * sin).abs(),
        (zy - r * cos).abs(),
    ])
}
