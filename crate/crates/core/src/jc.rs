//! Two-level atom coupled to a single field mode: linear and
//! intensity-dependent variants, exact block dynamics, and closed forms.
//!
//! Both Hamiltonians act on Fock (x) {g, e} and share the diagonal part
//! omega n + omega0 S_z; they differ in the coupling:
//!
//! ```text
//! linear:  lambda  (a  S+ + a+ S-),   <n-1, e|H|n, g> = lambda sqrt(n)
//! su11:    lambda0 (K- S+ + K+ S-),   <n-1, e|H|n, g> = lambda0 n
//! ```
//!
//! with K- the su(1,1) lowering operator at kappa = 1/2, where
//! K- = sqrt(n+1) a and omega(K3 - 1/2) = omega n. Each excitation sector
//! {|n-1, e>, |n, g>} is a closed 2x2 block with Rabi frequency
//! R_n = sqrt(Delta^2 + 4 c_n^2), c_n the coupling element, so evolution is
//! exact and O(N) per time point. At resonance (Delta = 0) the inversion
//! for a coherent field admits closed forms:
//!
//! ```text
//! linear, Poisson field:   <S_z(t)> = -1/2 e^{-|a|^2} S_{1/2,1}(a)
//! su11,   Poisson field:   <S_z(t)> = -1/2 e^{|a|^2(cos 2 l0 t - 1)} cos(|a|^2 sin 2 l0 t)
//! su11,   K- eigenfield:   <S_z(t)> = -1/2 Re I0(2|eta| e^{i l0 t}) / I0(2|eta|)
//! ```
//!
//! where S_{tau,mu}(z) = sum_n |z|^{2n}/(n!)^mu cos(2 lambda n^tau t) and
//! I0 is the zeroth modified Bessel function. The su11 variant has the
//! exact revival period pi/lambda0 (all phases commensurate); the linear
//! variant's sqrt(n) spectrum admits no exact period.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{make_ladder, make_su11_hp};
use crate::operator::{FockState, TruncatedOperator};
use crate::stats::ln_factorial_table;
use crate::tol;

/// Coupling form of the atom-field interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JCVariant {
    /// a S+ + a+ S- with element lambda sqrt(n).
    Linear,
    /// K- S+ + K+ S- at kappa = 1/2 with element lambda0 n.
    Su11,
}

impl std::fmt::Display for JCVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JCVariant::Linear => write!(f, "linear"),
            JCVariant::Su11 => write!(f, "su11"),
        }
    }
}

impl std::str::FromStr for JCVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(JCVariant::Linear),
            "su11" => Ok(JCVariant::Su11),
            other => Err(format!(
                "unknown variant '{other}' (expected linear or su11)"
            )),
        }
    }
}

/// Model parameters: field frequency omega, transition frequency omega0,
/// real coupling, and the Fock cutoff. The detuning omega - omega0 is
/// derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JCModel {
    variant: JCVariant,
    omega: f64,
    omega0: f64,
    coupling: f64,
    cutoff: usize,
}

impl JCModel {
    pub fn new(
        variant: JCVariant,
        omega: f64,
        omega0: f64,
        coupling: f64,
        cutoff: usize,
    ) -> Result<Self> {
        if omega <= 0.0 {
            return Err(Error::NonPositive {
                name: "omega",
                got: omega,
            });
        }
        if omega0 <= 0.0 {
            return Err(Error::NonPositive {
                name: "omega0",
                got: omega0,
            });
        }
        if cutoff < 2 {
            return Err(Error::CutoffTooSmall {
                got: cutoff,
                min: 2,
            });
        }
        Ok(Self {
            variant,
            omega,
            omega0,
            coupling,
            cutoff,
        })
    }

    pub fn variant(&self) -> JCVariant {
        self.variant
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn coupling(&self) -> f64 {
        self.coupling
    }
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn detuning(&self) -> f64 {
        self.omega - self.omega0
    }

    /// Off-diagonal element <n-1, e|H|n, g> for n >= 1.
    pub fn coupling_element(&self, n: usize) -> f64 {
        match self.variant {
            JCVariant::Linear => self.coupling * (n as f64).sqrt(),
            JCVariant::Su11 => self.coupling * n as f64,
        }
    }

    /// Generalized Rabi frequency at continuous excitation number.
    pub fn rabi_frequency_at(&self, n_bar: f64) -> f64 {
        let delta = self.detuning();
        let c = match self.variant {
            JCVariant::Linear => self.coupling * self.coupling * n_bar,
            JCVariant::Su11 => self.coupling * self.coupling * n_bar * n_bar,
        };
        (delta * delta + 4.0 * c).sqrt()
    }
}

/// Joint atom-field amplitudes indexed by 2n + s with s = 0 for |g>,
/// s = 1 for |e>. Normalized within 1e-12 at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomFieldState {
    cutoff: usize,
    amplitudes: Vec<C64>,
}

impl AtomFieldState {
    pub fn new(cutoff: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != 2 * cutoff {
            return Err(Error::DimensionMismatch(format!(
                "expected {} amplitudes for cutoff {cutoff}, got {}",
                2 * cutoff,
                amplitudes.len()
            )));
        }
        let state = Self { cutoff, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > tol::NORM_LIMIT {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// |field> (x) |g>.
    pub fn ground_with_field(field: &FockState) -> Result<Self> {
        field.check_normalized()?;
        let n = field.cutoff();
        let mut amps = vec![C64::new(0.0, 0.0); 2 * n];
        for (k, c) in field.amplitudes().iter().enumerate() {
            amps[2 * k] = *c;
        }
        Self::new(n, amps)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude of |n> (x) |g or e> (s: 0 = g, 1 = e).
    pub fn amp(&self, n: usize, s: usize) -> C64 {
        self.amplitudes[2 * n + s]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// <S_z> = sum_n (|c_{n,e}|^2 - |c_{n,g}|^2)/2.
    pub fn sz_expectation(&self) -> f64 {
        let mut v = 0.0;
        for n in 0..self.cutoff {
            v += 0.5 * (self.amp(n, 1).norm_sqr() - self.amp(n, 0).norm_sqr());
        }
        v
    }

    /// <n + S_z>, the conserved excitation count.
    pub fn excitation_expectation(&self) -> f64 {
        let mut v = 0.0;
        for n in 0..self.cutoff {
            v += self.amp(n, 0).norm_sqr() * (n as f64 - 0.5);
            v += self.amp(n, 1).norm_sqr() * (n as f64 + 0.5);
        }
        v
    }

    /// Mean field occupation <n>.
    pub fn field_mean_occupation(&self) -> f64 {
        let mut v = 0.0;
        for n in 0..self.cutoff {
            v += (self.amp(n, 0).norm_sqr() + self.amp(n, 1).norm_sqr()) * n as f64;
        }
        v
    }
}

/// Which route produced an inversion time series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesLabel {
    Exact,
    ClosedForm,
    Series,
}

impl std::fmt::Display for SeriesLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeriesLabel::Exact => write!(f, "exact"),
            SeriesLabel::ClosedForm => write!(f, "closed-form"),
            SeriesLabel::Series => write!(f, "series"),
        }
    }
}

/// Ordered (t, <S_z(t)>) samples. Times are strictly increasing and every
/// value obeys |v| <= 1/2 (up to 1e-9 of roundoff headroom).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    label: SeriesLabel,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, label: SeriesLabel) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} times vs {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotoneTimes);
        }
        if let Some(v) = values.iter().find(|v| v.abs() > 0.5 + 1e-9) {
            return Err(Error::Inconsistency(format!(
                "inversion value {v} outside [-1/2, 1/2]"
            )));
        }
        Ok(Self {
            times,
            values,
            label,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn label(&self) -> SeriesLabel {
        self.label
    }
    pub fn len(&self) -> usize {
        self.times.len()
    }
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Full 2N x 2N Hermitian matrix, built from tensor products of the field
/// operators with the atom operators S_z = diag(-1/2, 1/2), S+ = |e><g|.
pub fn build_hamiltonian(m: &JCModel) -> Result<TruncatedOperator> {
    let ident_field = TruncatedOperator::identity(m.cutoff)?;
    let ident_atom = TruncatedOperator::identity(2)?;
    let s_z = TruncatedOperator::from_real_diagonal(&[-0.5, 0.5])?;
    let s_plus = TruncatedOperator::from_fn(2, |i, j| {
        if i == 1 && j == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })?;

    let (field_diag, lowering) = match m.variant {
        JCVariant::Linear => {
            let (a, _, number) = make_ladder(m.cutoff)?;
            (number, a)
        }
        JCVariant::Su11 => {
            let g = make_su11_hp(0.5, m.cutoff)?;
            let shifted = g
                .k_three()
                .checked_sub(&ident_field.scale(C64::new(0.5, 0.0)))?;
            (shifted, g.k_minus().clone())
        }
    };

    let field_part = field_diag
        .tensor_product(&ident_atom)
        .scale(C64::new(m.omega, 0.0));
    let atom_part = ident_field
        .tensor_product(&s_z)
        .scale(C64::new(m.omega0, 0.0));
    let coupling_part = lowering
        .tensor_product(&s_plus)
        .scale(C64::new(m.coupling, 0.0));
    let h = field_part
        .checked_add(&atom_part)?
        .checked_add(&coupling_part)?
        .checked_add(&coupling_part.adjoint())?;
    Ok(h)
}

/// Closed-form eigenvalue pair (E-, E+) of the n-th excitation block:
/// n omega - (Delta + omega0)/2 -+ R_n/2 with
/// R_n = sqrt(Delta^2 + 4 c_n^2). n = 0 is the decoupled ground level.
pub fn block_eigenvalues(m: &JCModel, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::GroundBlock);
    }
    let delta = m.detuning();
    let c = m.coupling_element(n);
    let r = (delta * delta + 4.0 * c * c).sqrt();
    let center = n as f64 * m.omega - 0.5 * (delta + m.omega0);
    Ok((center - 0.5 * r, center + 0.5 * r))
}

/// Poisson-weighted coherent field state: amplitudes proportional to
/// alpha^n / sqrt(n!), exactly renormalized after truncation.
///
/// Preconditions: 3|alpha|^2 < cutoff. Guard: truncated probability mass
/// below 1e-10.
pub fn glauber_state(alpha: C64, cutoff: usize) -> Result<FockState> {
    if cutoff < 2 {
        return Err(Error::CutoffTooSmall {
            got: cutoff,
            min: 2,
        });
    }
    let a2 = alpha.norm_sqr();
    if 3.0 * a2 >= cutoff as f64 {
        return Err(Error::CutoffTooSmall {
            got: cutoff,
            min: (3.0 * a2).floor() as usize + 1,
        });
    }
    if a2 == 0.0 {
        return FockState::number_state(cutoff, 0);
    }
    let lf = ln_factorial_table(cutoff - 1);
    let ln_a = alpha.norm().ln();
    let phase = alpha.arg();
    let mut kept = 0.0f64;
    let mut amps = Vec::with_capacity(cutoff);
    for (n, &lf_n) in lf.iter().enumerate() {
        let ln_p = 2.0 * n as f64 * ln_a - a2 - lf_n;
        kept += ln_p.exp();
        let mag = (n as f64 * ln_a - 0.5 * a2 - 0.5 * lf_n).exp();
        amps.push(C64::from_polar(mag, phase * n as f64));
    }
    let tail = 1.0 - kept;
    if tail > tol::TAIL_MASS_LIMIT {
        return Err(Error::TailMass {
            mass: tail,
            limit: tol::TAIL_MASS_LIMIT,
        });
    }
    let inv = C64::new(1.0 / kept.sqrt(), 0.0);
    for a in amps.iter_mut() {
        *a *= inv;
    }
    FockState::from_amplitudes(amps)
}

/// Lowering-eigenstate field: amplitudes proportional to eta^n / n!, with
/// full-space normalizer I0(2|eta|)^{-1/2}; exactly renormalized after
/// truncation. Same preconditions and tail guard as [`glauber_state`].
pub fn barut_girardello_state(eta: C64, cutoff: usize) -> Result<FockState> {
    if cutoff < 2 {
        return Err(Error::CutoffTooSmall {
            got: cutoff,
            min: 2,
        });
    }
    let e2 = eta.norm_sqr();
    if 3.0 * e2 >= cutoff as f64 {
        return Err(Error::CutoffTooSmall {
            got: cutoff,
            min: (3.0 * e2).floor() as usize + 1,
        });
    }
    if e2 == 0.0 {
        return FockState::number_state(cutoff, 0);
    }
    let norm_sq_full = bessel_i0(C64::new(2.0 * eta.norm(), 0.0))?.re;
    let lf = ln_factorial_table(cutoff - 1);
    let ln_e = eta.norm().ln();
    let phase = eta.arg();
    let mut kept = 0.0f64;
    let mut amps = Vec::with_capacity(cutoff);
    for (n, &lf_n) in lf.iter().enumerate() {
        let mag = (n as f64 * ln_e - lf_n).exp();
        kept += mag * mag;
        amps.push(C64::from_polar(mag, phase * n as f64));
    }
    let tail = 1.0 - kept / norm_sq_full;
    if tail > tol::TAIL_MASS_LIMIT {
        return Err(Error::TailMass {
            mass: tail,
            limit: tol::TAIL_MASS_LIMIT,
        });
    }
    let inv = C64::new(1.0 / kept.sqrt(), 0.0);
    for a in amps.iter_mut() {
        *a *= inv;
    }
    FockState::from_amplitudes(amps)
}

/// Modified Bessel function of the first kind, order zero, by power
/// series: sum_k (z/2)^{2k} / (k!)^2, summed to 1e-17 relative. Entire in
/// z and even, guarded at |z| < 700 against overflow of e^{|z|}.
pub fn bessel_i0(z: C64) -> Result<C64> {
    let az = z.norm();
    if az >= tol::BESSEL_ARG_LIMIT {
        return Err(Error::BesselOverflow(az));
    }
    let q = z * z * C64::new(0.25, 0.0);
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 1.0f64;
    loop {
        term = term * q * C64::new(1.0 / (k * k), 0.0);
        sum += term;
        if term.norm() < tol::BESSEL_SERIES_REL * sum.norm() || k > 1000.0 {
            break;
        }
        k += 1.0;
    }
    Ok(sum)
}

/// Guarded evaluation of S_{tau,mu}(zeta) =
/// sum_n |zeta|^{2n}/(n!)^mu cos(2 lambda n^tau t).
///
/// Terms are accumulated until the geometric majorant of the remaining
/// tail (cosine majorized by 1) drops below `tail_tol`, giving a
/// deterministic term count for fixed inputs. Requires mu >= 1 for
/// convergence and tail_tol > 0.
pub fn series_s(tau: f64, mu: f64, zeta: C64, lambda: f64, t: f64, tail_tol: f64) -> Result<f64> {
    if mu < 1.0 {
        return Err(Error::InvalidSeriesExponent(mu));
    }
    if tail_tol <= 0.0 {
        return Err(Error::NonPositive {
            name: "tail_tol",
            got: tail_tol,
        });
    }
    let z2 = zeta.norm_sqr();
    let mut weight = 1.0f64; // |zeta|^{2n}/(n!)^mu at n = 0
    let mut sum = 0.0f64;
    let mut n = 0usize;
    loop {
        sum += weight * (2.0 * lambda * (n as f64).powf(tau) * t).cos();
        let next = weight * z2 / ((n + 1) as f64).powf(mu);
        let ratio = z2 / ((n + 2) as f64).powf(mu);
        if ratio < 1.0 && next / (1.0 - ratio) < tail_tol {
            break;
        }
        if n > 1_000_000 {
            return Err(Error::Inconsistency(format!(
                "series did not meet tail bound {tail_tol:e} within 1e6 terms"
            )));
        }
        weight = next;
        n += 1;
    }
    Ok(sum)
}

/// State at time t under the block-diagonal evolution: each sector
/// {|n-1, e>, |n, g>} is rotated by the closed-form 2x2 unitary
/// e^{-i a_n t} [cos(R t/2) - i (2/R) sin(R t/2) (delta/2, c; c, -delta/2)],
/// and the two decoupled levels |0, g>, |N-1, e> pick up pure phases.
pub fn evolve_state(m: &JCModel, initial: &AtomFieldState, t: f64) -> Result<AtomFieldState> {
    if m.cutoff != initial.cutoff() {
        return Err(Error::CutoffMismatch {
            left: m.cutoff,
            right: initial.cutoff(),
        });
    }
    let n_cut = m.cutoff;
    let mut amps = vec![C64::new(0.0, 0.0); 2 * n_cut];

    let phase = |energy: f64| C64::new(0.0, -energy * t).exp();
    // decoupled levels
    amps[0] = initial.amp(0, 0) * phase(-0.5 * m.omega0);
    let top = n_cut - 1;
    amps[2 * top + 1] =
        initial.amp(top, 1) * phase(m.omega * top as f64 + 0.5 * m.omega0);

    for n in 1..n_cut {
        let c_e = initial.amp(n - 1, 1);
        let c_g = initial.amp(n, 0);
        let d_e = m.omega * (n as f64 - 1.0) + 0.5 * m.omega0;
        let d_g = m.omega * n as f64 - 0.5 * m.omega0;
        let center = 0.5 * (d_e + d_g);
        let delta = d_e - d_g;
        let c = m.coupling_element(n);
        let r = (delta * delta + 4.0 * c * c).sqrt();
        let global = phase(center);
        let (n_e, n_g) = if r == 0.0 {
            (c_e, c_g)
        } else {
            let cos = (0.5 * r * t).cos();
            let s2 = 2.0 * (0.5 * r * t).sin() / r;
            let u_ee = C64::new(cos, -0.5 * s2 * delta);
            let u_eg = C64::new(0.0, -s2 * c);
            let u_gg = C64::new(cos, 0.5 * s2 * delta);
            (u_ee * c_e + u_eg * c_g, u_eg * c_e + u_gg * c_g)
        };
        amps[2 * (n - 1) + 1] = global * n_e;
        amps[2 * n] = global * n_g;
    }
    AtomFieldState::new(n_cut, amps)
}

/// Inversion <S_z(t)> along a strictly increasing time grid, by per-block
/// analytic evolution of the initial state.
pub fn sz_exact(m: &JCModel, initial: &AtomFieldState, times: &[f64]) -> Result<TimeSeries> {
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        values.push(evolve_state(m, initial, t)?.sz_expectation());
    }
    TimeSeries::new(times.to_vec(), values, SeriesLabel::Exact)
}

/// Resonant inversion for the linear variant with a Poisson field:
/// -1/2 e^{-|alpha|^2} S_{1/2,1}(alpha), summed to a 1e-14 tail.
pub fn sz_closed_linear_glauber(alpha: C64, lambda: f64, t: f64) -> Result<f64> {
    let s = series_s(0.5, 1.0, alpha, lambda, t, 1e-14)?;
    Ok(-0.5 * (-alpha.norm_sqr()).exp() * s)
}

/// Resonant inversion for the su11 variant with a Poisson field, fully
/// summed: -1/2 e^{|alpha|^2 (cos 2 l0 t - 1)} cos(|alpha|^2 sin 2 l0 t).
pub fn sz_closed_su11_glauber(alpha: C64, lambda0: f64, t: f64) -> f64 {
    let a2 = alpha.norm_sqr();
    let (s, c) = (2.0 * lambda0 * t).sin_cos();
    -0.5 * (a2 * (c - 1.0)).exp() * (a2 * s).cos()
}

/// Resonant inversion for the su11 variant with a lowering-eigenstate
/// field: -1/2 Re I0(2|eta| e^{i l0 t}) / I0(2|eta|). The series route
/// S_{1,2}(eta)/I0(2|eta|) must agree (checked in tests and `verify`).
pub fn sz_closed_su11_bg(eta: C64, lambda0: f64, t: f64) -> Result<f64> {
    let ae = eta.norm();
    let rotated = C64::from_polar(2.0 * ae, lambda0 * t);
    let numer = bessel_i0(rotated)?.re;
    let denom = bessel_i0(C64::new(2.0 * ae, 0.0))?.re;
    Ok(-0.5 * numer / denom)
}

/// Exact recurrence time of the inversion: pi/lambda0 for the su11 variant
/// (phases 2 lambda0 n t are commensurate in n); none for the linear
/// variant (sqrt(n) frequencies are incommensurate) or for zero coupling.
pub fn revival_period(m: &JCModel) -> Option<f64> {
    match m.variant {
        JCVariant::Su11 if m.coupling != 0.0 => {
            Some(std::f64::consts::PI / m.coupling.abs())
        }
        _ => None,
    }
}

/// Fraction of the initial envelope below which the inversion counts as
/// collapsed.
pub const COLLAPSE_THRESHOLD: f64 = 0.1;

/// Trailing moving maximum of |values| over windows [t_i - window, t_i].
pub fn moving_max_envelope(times: &[f64], values: &[f64], window: f64) -> Vec<f64> {
    let n = times.len().min(values.len());
    let mut out = Vec::with_capacity(n);
    let mut start = 0usize;
    // monotone deque of indices with decreasing |value|
    let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    for i in 0..n {
        while start < i && times[start] < times[i] - window {
            start += 1;
        }
        while let Some(&front) = deque.front() {
            if front < start {
                deque.pop_front();
            } else {
                break;
            }
        }
        let v = values[i].abs();
        while let Some(&back) = deque.back() {
            if values[back].abs() <= v {
                deque.pop_back();
            } else {
                break;
            }
        }
        deque.push_back(i);
        out.push(values[*deque.front().unwrap()].abs());
    }
    out
}

/// First time the trailing envelope falls below COLLAPSE_THRESHOLD times
/// its initial value; None if it never does.
pub fn collapse_time(times: &[f64], values: &[f64], window: f64) -> Option<f64> {
    let env = moving_max_envelope(times, values, window);
    let threshold = COLLAPSE_THRESHOLD * env.first()?;
    env.iter()
        .zip(times.iter())
        .find(|(e, _)| **e < threshold)
        .map(|(_, t)| *t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(variant: JCVariant, omega: f64, omega0: f64, coupling: f64, n: usize) -> JCModel {
        JCModel::new(variant, omega, omega0, coupling, n).unwrap()
    }

    fn resonant(variant: JCVariant, coupling: f64, n: usize) -> JCModel {
        model(variant, 1.0, 1.0, coupling, n)
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            JCModel::new(JCVariant::Linear, 0.0, 1.0, 1.0, 10),
            Err(Error::NonPositive { .. })
        ));
        assert!(matches!(
            JCModel::new(JCVariant::Linear, 1.0, -1.0, 1.0, 10),
            Err(Error::NonPositive { .. })
        ));
        assert!(matches!(
            JCModel::new(JCVariant::Linear, 1.0, 1.0, 1.0, 1),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn hamiltonian_matrix_elements() {
        let m = model(JCVariant::Linear, 2.0, 3.0, 0.7, 6);
        let h = build_hamiltonian(&m).unwrap();
        assert!(h.hermiticity_deviation() < 1e-14);
        // <0,g|H|0,g> = -omega0/2
        assert!((h.entry(0, 0) - C64::new(-1.5, 0.0)).norm() < 1e-15);
        // <0,e|H|1,g> = lambda sqrt(1)
        assert!((h.entry(1, 2) - C64::new(0.7, 0.0)).norm() < 1e-15);

        let m = model(JCVariant::Su11, 2.0, 3.0, 0.7, 6);
        let h = build_hamiltonian(&m).unwrap();
        // <1,e|H|2,g> = 2 lambda0
        assert!((h.entry(3, 4) - C64::new(1.4, 0.0)).norm() < 1e-14);
        // field diagonal is omega n either way: <2,g|H|2,g> = 2 omega - omega0/2
        assert!((h.entry(4, 4) - C64::new(2.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn block_pair_splitting_at_resonance() {
        let m = resonant(JCVariant::Linear, 1.0, 10);
        let (lo, hi) = block_eigenvalues(&m, 4).unwrap();
        assert!((hi - lo - 4.0).abs() < 1e-14);
    }

    #[test]
    fn block_pair_detuned() {
        // Delta = 3, lambda = 2, n = 1: R = 5
        let m = model(JCVariant::Linear, 5.0, 2.0, 2.0, 10);
        let (lo, hi) = block_eigenvalues(&m, 1).unwrap();
        let center = 5.0 - 0.5 * (3.0 + 2.0);
        assert!((lo - (center - 2.5)).abs() < 1e-14);
        assert!((hi - (center + 2.5)).abs() < 1e-14);
    }

    #[test]
    fn ground_level_is_not_a_block() {
        let m = resonant(JCVariant::Linear, 1.0, 10);
        assert!(matches!(block_eigenvalues(&m, 0), Err(Error::GroundBlock)));
    }

    #[test]
    fn su11_rabi_frequency_is_linear_in_n() {
        let m = resonant(JCVariant::Su11, 1.5, 10);
        let (lo, hi) = block_eigenvalues(&m, 3).unwrap();
        assert!((hi - lo - 2.0 * 1.5 * 3.0).abs() < 1e-13);
    }

    #[test]
    fn coherent_state_basics() {
        let vac = glauber_state(C64::new(0.0, 0.0), 10).unwrap();
        assert_eq!(vac.amplitudes()[0], C64::new(1.0, 0.0));

        let st = glauber_state(C64::new(2.0, 0.0), 60).unwrap();
        assert!(st.check_normalized().is_ok());
        let mean: f64 = st
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum();
        assert!((mean - 4.0).abs() < 1e-9);
    }

    #[test]
    fn coherent_state_guards() {
        // precondition: 3|alpha|^2 < N
        assert!(matches!(
            glauber_state(C64::new(2.0, 0.0), 12),
            Err(Error::CutoffTooSmall { .. })
        ));
        // passes the precondition but the Poisson tail is ~1e-7
        assert!(matches!(
            glauber_state(C64::new(3.0, 0.0), 28),
            Err(Error::TailMass { .. })
        ));
    }

    #[test]
    fn eigenfield_state_basics() {
        let vac = barut_girardello_state(C64::new(0.0, 0.0), 10).unwrap();
        assert_eq!(vac.amplitudes()[0], C64::new(1.0, 0.0));

        let st = barut_girardello_state(C64::new(1.0, 0.0), 40).unwrap();
        assert!(st.check_normalized().is_ok());
        // vacuum amplitude is the full-space normalizer I0(2)^{-1/2}
        let i0_2 = bessel_i0(C64::new(2.0, 0.0)).unwrap().re;
        assert!((st.amplitudes()[0].re - 1.0 / i0_2.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn eigenfield_state_is_a_lowering_eigenstate() {
        let eta = C64::new(1.0, 0.5);
        let n = 40;
        let st = barut_girardello_state(eta, n).unwrap();
        let g = make_su11_hp(0.5, n).unwrap();
        let lowered = g.k_minus().apply(&st).unwrap();
        let mut dev = 0.0f64;
        for k in 0..n {
            dev = dev.max((lowered.amplitudes()[k] - eta * st.amplitudes()[k]).norm());
        }
        assert!(dev < 1e-9, "{dev}");
    }

    #[test]
    fn bessel_series_values() {
        assert_eq!(bessel_i0(C64::new(0.0, 0.0)).unwrap(), C64::new(1.0, 0.0));
        let v = bessel_i0(C64::new(2.0, 0.0)).unwrap().re;
        assert!((v - 2.2795853023360673).abs() < 1e-14, "{v}");
        // even function: I0(-2) = I0(2)
        let w = bessel_i0(C64::new(-2.0, 0.0)).unwrap();
        assert!((w.re - v).abs() < 1e-15);
        assert!(matches!(
            bessel_i0(C64::new(700.0, 0.0)),
            Err(Error::BesselOverflow(_))
        ));
    }

    #[test]
    fn series_reduces_to_exponential_and_bessel_at_zero_time() {
        let z = C64::new(1.5, 0.0);
        let e = series_s(0.5, 1.0, z, 1.0, 0.0, 1e-14).unwrap();
        assert!((e - (2.25f64).exp()).abs() / e < 1e-13);
        let b = series_s(1.0, 2.0, z, 1.0, 0.0, 1e-14).unwrap();
        let i0 = bessel_i0(C64::new(3.0, 0.0)).unwrap().re;
        assert!((b - i0).abs() / b < 1e-13);
    }

    #[test]
    fn series_preconditions() {
        let z = C64::new(1.0, 0.0);
        assert!(matches!(
            series_s(1.0, 0.5, z, 1.0, 0.0, 1e-14),
            Err(Error::InvalidSeriesExponent(_))
        ));
        assert!(matches!(
            series_s(1.0, 1.0, z, 1.0, 0.0, 0.0),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn su11_poisson_series_matches_its_closed_form() {
        let alpha = C64::new(1.7, 0.4);
        for &t in &[0.0, 0.3, 1.1, 2.9] {
            let s = series_s(1.0, 1.0, alpha, 0.8, t, 1e-14).unwrap();
            let closed = (alpha.norm_sqr() * (2.0 * 0.8 * t).cos()).exp()
                * (alpha.norm_sqr() * (2.0 * 0.8 * t).sin()).cos();
            assert!((s - closed).abs() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn ground_start_is_stationary() {
        let m = resonant(JCVariant::Linear, 1.0, 8);
        let vac = FockState::vacuum(8).unwrap();
        let init = AtomFieldState::ground_with_field(&vac).unwrap();
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 0.3).collect();
        let series = sz_exact(&m, &init, &times).unwrap();
        for v in series.values() {
            assert!((v + 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn inversion_starts_at_minus_half() {
        let m = resonant(JCVariant::Su11, 1.0, 60);
        let field = glauber_state(C64::new(2.0, 0.0), 60).unwrap();
        let init = AtomFieldState::ground_with_field(&field).unwrap();
        let series = sz_exact(&m, &init, &[0.0]).unwrap();
        assert!((series.values()[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn evolution_preserves_norm_and_excitation() {
        let m = model(JCVariant::Linear, 1.3, 0.9, 0.7, 40);
        let field = glauber_state(C64::new(1.5, 0.5), 40).unwrap();
        let init = AtomFieldState::ground_with_field(&field).unwrap();
        let start = init.excitation_expectation();
        for &t in &[0.4, 1.7, 6.3, 20.0] {
            let st = evolve_state(&m, &init, t).unwrap();
            assert!((st.norm() - 1.0).abs() < 1e-12);
            assert!((st.excitation_expectation() - start).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_matches_exact_linear_poisson() {
        let m = resonant(JCVariant::Linear, 1.0, 120);
        let alpha = C64::new(3.0, 0.0);
        let field = glauber_state(alpha, 120).unwrap();
        let init = AtomFieldState::ground_with_field(&field).unwrap();
        for &t in &[0.0, 0.5, 1.0, 2.5] {
            let exact = sz_exact(&m, &init, &[t]).unwrap().values()[0];
            let closed = sz_closed_linear_glauber(alpha, 1.0, t).unwrap();
            assert!((exact - closed).abs() < 1e-8, "t = {t}: {exact} vs {closed}");
        }
    }

    #[test]
    fn closed_form_matches_exact_su11_poisson() {
        let m = resonant(JCVariant::Su11, 1.0, 120);
        let alpha = C64::new(3.0, 0.0);
        let field = glauber_state(alpha, 120).unwrap();
        let init = AtomFieldState::ground_with_field(&field).unwrap();
        for &t in &[0.0, 0.3, 1.0, 2.0] {
            let exact = sz_exact(&m, &init, &[t]).unwrap().values()[0];
            let closed = sz_closed_su11_glauber(alpha, 1.0, t);
            assert!((exact - closed).abs() < 1e-8, "t = {t}: {exact} vs {closed}");
        }
    }

    #[test]
    fn closed_form_matches_exact_su11_eigenfield() {
        let m = resonant(JCVariant::Su11, 1.0, 100);
        let eta = C64::new(2.0, 0.0);
        let field = barut_girardello_state(eta, 100).unwrap();
        let init = AtomFieldState::ground_with_field(&field).unwrap();
        for &t in &[0.0, 0.7, 1.9] {
            let exact = sz_exact(&m, &init, &[t]).unwrap().values()[0];
            let closed = sz_closed_su11_bg(eta, 1.0, t).unwrap();
            assert!((exact - closed).abs() < 1e-8, "t = {t}: {exact} vs {closed}");
        }
    }

    #[test]
    fn bessel_and_series_routes_agree() {
        let eta = C64::new(2.0, 0.0);
        let (lambda0, t) = (1.0, 0.7);
        let via_bessel = sz_closed_su11_bg(eta, lambda0, t).unwrap();
        let s = series_s(1.0, 2.0, eta, lambda0, t, 1e-15).unwrap();
        let i0 = bessel_i0(C64::new(2.0 * eta.norm(), 0.0)).unwrap().re;
        let via_series = -0.5 * s / i0;
        assert!((via_bessel - via_series).abs() < 1e-11);
    }

    #[test]
    fn su11_inversion_revives_exactly() {
        let m = resonant(JCVariant::Su11, 2.0, 80);
        let period = revival_period(&m).unwrap();
        assert!((period - std::f64::consts::PI / 2.0).abs() < 1e-15);
        let field = glauber_state(C64::new(2.0, 0.0), 80).unwrap();
        let init = AtomFieldState::ground_with_field(&field).unwrap();
        for &t in &[0.13, 0.42, 1.01] {
            let a = sz_exact(&m, &init, &[t]).unwrap().values()[0];
            let b = sz_exact(&m, &init, &[t + period]).unwrap().values()[0];
            assert!((a - b).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn linear_variant_has_no_exact_period() {
        let m = resonant(JCVariant::Linear, 1.0, 40);
        assert_eq!(revival_period(&m), None);
    }

    #[test]
    fn envelope_and_collapse_detection() {
        // synthetic decaying oscillation: |cos(10 t)| e^{-t}
        let times: Vec<f64> = (0..2000).map(|k| k as f64 * 0.005).collect();
        let values: Vec<f64> = times
            .iter()
            .map(|t| 0.5 * (10.0 * t).cos() * (-t).exp())
            .collect();
        let window = 2.0 * std::f64::consts::PI / 10.0;
        let env = moving_max_envelope(&times, &values, window);
        assert_eq!(env.len(), times.len());
        assert!((env[0] - 0.5).abs() < 1e-15);
        // envelope tracks the decay: at t = 3 it is within a window-width
        // factor of 0.5 e^{-3}
        let idx = times.iter().position(|&t| t >= 3.0).unwrap();
        assert!(env[idx] <= 0.5 * (-3.0 + window).exp() + 1e-12);
        // collapse: e^{-t} < 0.1 at t = ln 10 ~ 2.303, plus window lag
        let tc = collapse_time(&times, &values, window).unwrap();
        assert!(tc > 2.3 && tc < 2.3 + 2.0 * window, "{tc}");
    }

    #[test]
    fn time_series_validation() {
        assert!(matches!(
            TimeSeries::new(vec![0.0, 0.0], vec![0.1, 0.1], SeriesLabel::Exact),
            Err(Error::NonMonotoneTimes)
        ));
        assert!(matches!(
            TimeSeries::new(vec![0.0, 1.0], vec![0.1, 0.7], SeriesLabel::Exact),
            Err(Error::Inconsistency(_))
        ));
        assert!(matches!(
            TimeSeries::new(vec![0.0], vec![0.1, 0.2], SeriesLabel::Exact),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn state_validation() {
        let m = resonant(JCVariant::Linear, 1.0, 10);
        let field = FockState::vacuum(8).unwrap();
        let init = AtomFieldState::ground_with_field(&field).unwrap();
        assert!(matches!(
            evolve_state(&m, &init, 1.0),
            Err(Error::CutoffMismatch { .. })
        ));
        assert!(matches!(
            AtomFieldState::new(3, vec![C64::new(1.0, 0.0); 6]),
            Err(Error::NotNormalized(_))
        ));
    }
}
