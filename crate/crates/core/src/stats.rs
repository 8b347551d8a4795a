//! Counting statistics of n quanta distributed over m modes.
//!
//! Extending a single-mode creator X to m modes by the coproduct
//!
//! ```text
//! D_m(X) = X(x)1(x)...(x)1 + 1(x)X(x)...(x)1 + ... + 1(x)...(x)X
//! ```
//!
//! and applying it n times to the joint vacuum produces a state whose
//! occupation probabilities depend on which algebra the creator lives in:
//!
//! - boson ladder a+: the multinomial law P(k) = m^{-n} n! / (k_1!...k_m!);
//! - su(1,1) raising K+ at kappa = 1/2: the uniform law
//!   P(k) = (m-1)! prod_{j=1}^{m-1} (n+j)^{-1} = 1 / C(n+m-1, m-1).
//!
//! Both closed forms are cross-checked against a brute-force oracle that
//! builds the (n+1)^m-dimensional state by repeated strided application of
//! the embedded creators; the oracle reads its matrix elements off the
//! actual single-mode operators and never evaluates the formulas.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{make_ladder, make_su11_hp};
use crate::tol;

/// Which algebra supplies the single-mode creator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algebra {
    /// Boson ladder operators with [a, a+] = 1.
    Weyl,
    /// su(1,1) at Bargmann index 1/2 (the fundamental positive series).
    Su11,
}

impl std::fmt::Display for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algebra::Weyl => write!(f, "weyl"),
            Algebra::Su11 => write!(f, "su11"),
        }
    }
}

impl std::str::FromStr for Algebra {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "weyl" => Ok(Algebra::Weyl),
            "su11" | "su11-fundamental" => Ok(Algebra::Su11),
            other => Err(format!("unknown algebra '{other}' (expected weyl or su11)")),
        }
    }
}

/// Ordered occupation pattern (k_1, ..., k_m); the mode count is the length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn modes(&self) -> usize {
        self.parts.len()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
}

/// Probability assignment over all compositions of n into m parts, in the
/// enumeration order of [`compositions`].
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationDistribution {
    n: usize,
    m: usize,
    algebra: Algebra,
    entries: Vec<(Composition, f64)>,
}

impl OccupationDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn entries(&self) -> &[(Composition, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn prob_of(&self, parts: &[usize]) -> Option<f64> {
        self.entries
            .iter()
            .find(|(c, _)| c.parts() == parts)
            .map(|(_, p)| *p)
    }

    /// Compensated (Kahan) sum: entry counts grow like n^(m-1), and a
    /// naive sum loses ~count*ulp, visibly breaching 1e-12 near 1e5
    /// entries.
    pub fn total_mass(&self) -> f64 {
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for (_, p) in &self.entries {
            let y = p - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Largest minus smallest probability; zero for a uniform law.
    pub fn spread(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (_, p) in &self.entries {
            lo = lo.min(*p);
            hi = hi.max(*p);
        }
        if self.entries.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    /// Largest |p_self - p_other| over the (identical) support.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "distribution shapes differ: ({}, {}) vs ({}, {})",
                self.n, self.m, other.n, other.m
            )));
        }
        let mut worst = 0.0f64;
        for ((ca, pa), (cb, pb)) in self.entries.iter().zip(other.entries.iter()) {
            if ca != cb {
                return Err(Error::Inconsistency(
                    "distribution supports are ordered differently".into(),
                ));
            }
            worst = worst.max((pa - pb).abs());
        }
        Ok(worst)
    }
}

/// All compositions of n into m non-negative parts, in lexicographically
/// decreasing order of (k_1, ..., k_m). The count is C(n+m-1, m-1).
pub fn compositions(n: usize, m: usize) -> Result<Vec<Composition>> {
    if m == 0 {
        return Err(Error::ZeroModes);
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m);
    fn rec(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(Composition::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k);
            rec(remaining - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    rec(n, m, &mut prefix, &mut out);
    Ok(out)
}

/// n! as an exact integer for n <= 20 (fits u128 with room to spare).
fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Table of ln(k!) for k = 0..=n, by cumulative summation.
pub(crate) fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(0.0);
    for k in 1..=n {
        t.push(t[k - 1] + (k as f64).ln());
    }
    t
}

/// Multinomial occupation law for the boson creator: P(k) = m^{-n} n! / prod k_j!.
/// Exact u128 arithmetic up to n = 20, log-space beyond (overflow guard).
pub fn dist_weyl(n: usize, m: usize) -> Result<OccupationDistribution> {
    let comps = compositions(n, m)?;
    let entries = if n <= 20 {
        let n_fact = factorial_u128(n);
        let m_pow = (m as f64).powi(n as i32);
        comps
            .into_iter()
            .map(|c| {
                let denom: u128 = c.parts().iter().map(|&k| factorial_u128(k)).product();
                let p = (n_fact / denom) as f64 / m_pow;
                (c, p)
            })
            .collect()
    } else {
        let lf = ln_factorial_table(n);
        let log_m_pow = (n as f64) * (m as f64).ln();
        comps
            .into_iter()
            .map(|c| {
                let log_p =
                    lf[n] - c.parts().iter().map(|&k| lf[k]).sum::<f64>() - log_m_pow;
                (c, log_p.exp())
            })
            .collect()
    };
    Ok(OccupationDistribution {
        n,
        m,
        algebra: Algebra::Weyl,
        entries,
    })
}

/// Uniform occupation law for the su(1,1) creator at kappa = 1/2:
/// every composition gets (m-1)! prod_{j=1}^{m-1} (n+j)^{-1}, i.e.
/// 1 / C(n+m-1, m-1). The shared value is computed once, so the law is
/// uniform bit-for-bit.
pub fn dist_su11(n: usize, m: usize) -> Result<OccupationDistribution> {
    let comps = compositions(n, m)?;
    let mut p = 1.0f64;
    for j in 1..m {
        p *= j as f64 / (n + j) as f64;
    }
    let entries = comps.into_iter().map(|c| (c, p)).collect();
    Ok(OccupationDistribution {
        n,
        m,
        algebra: Algebra::Su11,
        entries,
    })
}

/// Joint state of m modes, each truncated at occupation per_mode_cutoff - 1,
/// with amplitudes indexed in mixed radix: mode 1 is the most significant
/// digit, index = sum_j k_j (per_mode_cutoff)^(m-j).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiModeState {
    m: usize,
    per_mode_cutoff: usize,
    algebra: Algebra,
    amplitudes: Vec<C64>,
}

impl MultiModeState {
    pub fn from_amplitudes(
        m: usize,
        per_mode_cutoff: usize,
        algebra: Algebra,
        amplitudes: Vec<C64>,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModes);
        }
        let want = (per_mode_cutoff as u128).pow(m as u32);
        if want != amplitudes.len() as u128 {
            return Err(Error::DimensionMismatch(format!(
                "expected {want} amplitudes for {m} modes at cutoff {per_mode_cutoff}, got {}",
                amplitudes.len()
            )));
        }
        let state = Self {
            m,
            per_mode_cutoff,
            algebra,
            amplitudes,
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > tol::NORM_LIMIT {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn per_mode_cutoff(&self) -> usize {
        self.per_mode_cutoff
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Mixed-radix index of an occupation pattern.
    pub fn index_of(&self, parts: &[usize]) -> Result<usize> {
        if parts.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "pattern has {} parts, state has {} modes",
                parts.len(),
                self.m
            )));
        }
        let mut idx = 0usize;
        for &k in parts {
            if k >= self.per_mode_cutoff {
                return Err(Error::DimensionMismatch(format!(
                    "occupation {k} outside per-mode basis 0..{}",
                    self.per_mode_cutoff - 1
                )));
            }
            idx = idx * self.per_mode_cutoff + k;
        }
        Ok(idx)
    }
}

/// Brute-force m-mode state (D_m(creator))^n |0...0>, normalized.
///
/// The creator is the single-mode a+ (weyl) or K+ at kappa = 1/2 (su11),
/// both built at cutoff n + 1 so no application can escape the basis; its
/// subdiagonal is read off the constructed operator. Memory is guarded at
/// (n+1)^m <= 10^7 amplitudes.
pub fn coproduct_state(n: usize, m: usize, algebra: Algebra) -> Result<MultiModeState> {
    if m == 0 {
        return Err(Error::ZeroModes);
    }
    let radix = n + 1;
    let dim_wide = (radix as u128).pow(m as u32);
    if dim_wide > tol::STATE_DIM_GUARD as u128 {
        return Err(Error::MemoryGuard {
            dim: dim_wide.min(usize::MAX as u128) as usize,
            guard: tol::STATE_DIM_GUARD,
        });
    }
    let dim = dim_wide as usize;

    let mut amps = vec![C64::new(0.0, 0.0); dim];
    amps[0] = C64::new(1.0, 0.0);
    if n == 0 {
        // joint vacuum; the zero-quanta creator basis (cutoff 1) is below
        // the operator floor, and no application is needed anyway
        return MultiModeState::from_amplitudes(m, radix, algebra, amps);
    }

    // subdiagonal of the creator: amp_up[l] multiplies |l> -> |l+1>
    let amp_up: Vec<C64> = {
        let creator = match algebra {
            Algebra::Weyl => make_ladder(radix)?.1,
            Algebra::Su11 => make_su11_hp(0.5, radix)?.k_plus().clone(),
        };
        (0..n).map(|l| creator.entry(l + 1, l)).collect()
    };

    let mut current = amps;
    let mut next = vec![C64::new(0.0, 0.0); dim];
    for _ in 0..n {
        for z in next.iter_mut() {
            *z = C64::new(0.0, 0.0);
        }
        // stride of mode j (1-based) is radix^(m-j)
        let mut stride = dim / radix;
        for _ in 0..m {
            for idx in 0..dim {
                let digit = (idx / stride) % radix;
                if digit < n {
                    let contrib = amp_up[digit] * current[idx];
                    next[idx + stride] += contrib;
                }
            }
            stride /= radix;
        }
        std::mem::swap(&mut current, &mut next);
    }

    let norm = current
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if norm == 0.0 {
        return Err(Error::Inconsistency(
            "coproduct state collapsed to zero norm".into(),
        ));
    }
    let inv = C64::new(1.0 / norm, 0.0);
    for z in current.iter_mut() {
        *z *= inv;
    }
    MultiModeState::from_amplitudes(m, radix, algebra, current)
}

/// Occupation probabilities |amplitude(k)|^2 read off a normalized state,
/// restricted to the total-occupation shell n = per_mode_cutoff - 1.
///
/// Guards: total squared norm within 1e-9 of 1, and off-shell mass below
/// 1e-12; the (tiny) off-shell mass is renormalized away.
pub fn distribution_from_state(state: &MultiModeState) -> Result<OccupationDistribution> {
    let n = state.per_mode_cutoff() - 1;
    let m = state.modes();
    let norm_sq: f64 = state.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > tol::NORM_DEFICIT_LIMIT {
        return Err(Error::Inconsistency(format!(
            "state norm^2 = {norm_sq} differs from 1 beyond 1e-9"
        )));
    }
    let comps = compositions(n, m)?;
    let mut raw = Vec::with_capacity(comps.len());
    let mut on_shell = 0.0f64;
    for c in comps {
        let idx = state.index_of(c.parts())?;
        let p = state.amplitudes()[idx].norm_sqr();
        on_shell += p;
        raw.push((c, p));
    }
    let off_shell = norm_sq - on_shell;
    if off_shell > tol::OFF_SHELL_LIMIT {
        return Err(Error::Inconsistency(format!(
            "off-shell mass {off_shell:.3e} exceeds 1e-12"
        )));
    }
    for (_, p) in raw.iter_mut() {
        *p /= on_shell;
    }
    Ok(OccupationDistribution {
        n,
        m,
        algebra: state.algebra(),
        entries: raw,
    })
}
