//! Cross-module invariant suite: every library-level invariant evaluated
//! at pinned sizes, reported as one row per check.
//!
//! The suite is deterministic (fixed sizes, fixed probes, no RNG) and
//! cheap enough to run on every change. Each row carries the measured
//! value, the bound it is held to, and the verdict; rows are emitted in a
//! fixed order so reports are byte-comparable across runs.

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::fock::{
    casimir, commutator, evolve_unitary, make_ladder, make_su11_hp, span_residual,
};
use crate::jc::{
    barut_girardello_state, bessel_i0, block_eigenvalues, build_hamiltonian, collapse_time,
    evolve_state, glauber_state, series_s, sz_closed_linear_glauber, sz_closed_su11_bg,
    sz_closed_su11_glauber, sz_exact, AtomFieldState, JCModel, JCVariant,
};
use crate::lorentz::{boost_matrix, exp_boost, boost_conjugated, internal_symmetry_residual};
use crate::operator::TruncatedOperator;
use crate::oscillator::identity_table;
use crate::stats::{compositions, coproduct_state, dist_su11, dist_weyl, distribution_from_state, Algebra};

/// Direction of a check's bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// value must be strictly below the limit (a residual).
    Below(f64),
    /// value must be strictly above the limit (a witness).
    Above(f64),
    /// value must lie inside [lo, hi] (a corridor).
    Window { lo: f64, hi: f64 },
}

impl Bound {
    pub fn holds_for(&self, value: f64) -> bool {
        match *self {
            Bound::Below(limit) => value < limit,
            Bound::Above(limit) => value > limit,
            Bound::Window { lo, hi } => lo <= value && value <= hi,
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Bound::Below(limit) => write!(f, "<{limit:e}"),
            Bound::Above(limit) => write!(f, ">{limit:e}"),
            Bound::Window { lo, hi } => write!(f, "[{lo:e};{hi:e}]"),
        }
    }
}

/// One evaluated invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub check: String,
    pub value: f64,
    pub bound: Bound,
}

impl VerifyRow {
    fn below(check: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            check: check.into(),
            value,
            bound: Bound::Below(limit),
        }
    }

    fn above(check: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            check: check.into(),
            value,
            bound: Bound::Above(limit),
        }
    }

    pub fn pass(&self) -> bool {
        self.bound.holds_for(self.value)
    }
}

pub fn all_pass(rows: &[VerifyRow]) -> bool {
    rows.iter().all(VerifyRow::pass)
}

/// Run the whole suite. Row order and all inputs are pinned.
pub fn run_all() -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();
    fock_rows(&mut rows)?;
    stats_rows(&mut rows)?;
    oscillator_rows(&mut rows)?;
    lorentz_rows(&mut rows)?;
    jc_rows(&mut rows)?;
    Ok(rows)
}

fn fock_rows(rows: &mut Vec<VerifyRow>) -> Result<()> {
    // su(1,1) relations across admissible kappa at two cutoffs, margin 2.
    let mut worst = 0.0f64;
    for &kappa in &[0.25, 0.5, 1.0, 1.5, 2.0, 3.5] {
        for &n in &[10usize, 40] {
            let g = make_su11_hp(kappa, n)?;
            let r1 = commutator(g.k_three(), g.k_plus())?
                .checked_sub(g.k_plus())?
                .interior_max_abs(2)?;
            let r2 = commutator(g.k_three(), g.k_minus())?
                .checked_add(g.k_minus())?
                .interior_max_abs(2)?;
            let two_k3 = g.k_three().scale(C64::new(2.0, 0.0));
            let r3 = commutator(g.k_minus(), g.k_plus())?
                .checked_sub(&two_k3)?
                .interior_max_abs(2)?;
            worst = worst.max(r1).max(r2).max(r3);
        }
    }
    rows.push(VerifyRow::below("su11-relations-interior", worst, 1e-10));

    // Casimir = kappa(kappa-1) on the interior.
    let mut worst = 0.0f64;
    for &kappa in &[0.25, 0.5, 1.0, 1.5] {
        let g = make_su11_hp(kappa, 40)?;
        let expected = TruncatedOperator::identity(40)?.scale(C64::new(kappa * (kappa - 1.0), 0.0));
        let r = casimir(&g)?.checked_sub(&expected)?.interior_max_abs(2)?;
        worst = worst.max(r);
    }
    rows.push(VerifyRow::below("su11-casimir-interior", worst, 1e-10));

    // Unitarity of the eigendecomposition exponential on a dense Hermitian.
    let (a, a_dag, number) = make_ladder(40)?;
    let h = number.checked_add(&a.checked_add(&a_dag)?.scale(C64::new(0.5, 0.0)))?;
    let u = evolve_unitary(&h, 1.7)?;
    let dev = u
        .adjoint()
        .checked_mul(&u)?
        .checked_sub(&TruncatedOperator::identity(40)?)?
        .max_abs();
    rows.push(VerifyRow::below("evolve-unitarity", dev, 1e-9));

    // Raising operator is bit-exactly the adjoint of the lowering one.
    let mut worst = 0.0f64;
    for &kappa in &[0.25, 1.5] {
        let g = make_su11_hp(kappa, 30)?;
        let diff = g.k_plus().adjoint().checked_sub(g.k_minus())?.max_abs();
        worst = worst.max(diff);
    }
    rows.push(VerifyRow::below("ladder-adjoint-exact", worst, f64::MIN_POSITIVE));

    // Scale invariance of the span residual.
    let g = make_su11_hp(0.5, 30)?;
    let basis = vec![
        g.k_plus().clone(),
        g.k_minus().clone(),
        g.k_three().clone(),
        TruncatedOperator::identity(30)?,
    ];
    let probe = g.k_three().checked_mul(g.k_three())?;
    let base = span_residual(&probe, &basis, 10)?;
    let scaled = span_residual(&probe.scale(C64::new(7.3, -2.1)), &basis, 10)?;
    rows.push(VerifyRow::below(
        "span-residual-scale-invariance",
        (base - scaled).abs(),
        1e-12,
    ));
    // The quadratic probe genuinely leaves the span.
    rows.push(VerifyRow::above("span-residual-quadratic-probe", base, 0.1));
    Ok(())
}

fn stats_rows(rows: &mut Vec<VerifyRow>) -> Result<()> {
    let mut oracle_dev = 0.0f64;
    let mut spread = 0.0f64;
    let mut multinomial_dev = 0.0f64;
    let mut exchange_dev = 0.0f64;
    let mut binom_marginal_dev = 0.0f64;
    let mut uniform_marginal_dev = 0.0f64;

    for n in 0..=6usize {
        for m in 2..=4usize {
            for &algebra in &[Algebra::Weyl, Algebra::Su11] {
                let closed = match algebra {
                    Algebra::Weyl => dist_weyl(n, m)?,
                    Algebra::Su11 => dist_su11(n, m)?,
                };
                let brute = distribution_from_state(&coproduct_state(n, m, algebra)?)?;
                oracle_dev = oracle_dev.max(closed.max_abs_diff(&brute)?);

                // exchangeability: reversal and a rotation of the pattern
                for (k, p) in closed.entries() {
                    let mut rev = k.parts().to_vec();
                    rev.reverse();
                    let mut rot = k.parts().to_vec();
                    rot.rotate_left(1);
                    exchange_dev = exchange_dev
                        .max((closed.prob_of(&rev).unwrap_or(f64::NAN) - p).abs())
                        .max((closed.prob_of(&rot).unwrap_or(f64::NAN) - p).abs());
                }
            }

            let w = dist_weyl(n, m)?;
            let s = dist_su11(n, m)?;
            spread = spread.max(s.spread());

            // independent log-space multinomial route
            let lf = crate::stats::ln_factorial_table(n);
            for (k, p) in w.entries() {
                let ln_coeff: f64 = lf[n] - k.parts().iter().map(|&kj| lf[kj]).sum::<f64>();
                let independent = (ln_coeff - n as f64 * (m as f64).ln()).exp();
                multinomial_dev = multinomial_dev.max((independent - p).abs());
            }

            // mode-1 marginal of the boson law is Binomial(n, 1/m)
            for k1 in 0..=n {
                let marginal: f64 = w
                    .entries()
                    .iter()
                    .filter(|(k, _)| k.parts()[0] == k1)
                    .map(|(_, p)| p)
                    .sum();
                let ln_binom = lf[n] - lf[k1] - lf[n - k1];
                let p_binom = (ln_binom
                    + k1 as f64 * (1.0 / m as f64).ln()
                    + (n - k1) as f64 * (1.0 - 1.0 / m as f64).ln())
                .exp();
                binom_marginal_dev = binom_marginal_dev.max((marginal - p_binom).abs());
            }

            // mode-1 marginal of the su11 law at m = 2 is uniform on 0..n
            if m == 2 {
                let target = 1.0 / (n + 1) as f64;
                for k1 in 0..=n {
                    let marginal: f64 = s
                        .entries()
                        .iter()
                        .filter(|(k, _)| k.parts()[0] == k1)
                        .map(|(_, p)| p)
                        .sum();
                    uniform_marginal_dev = uniform_marginal_dev.max((marginal - target).abs());
                }
            }
        }
    }

    rows.push(VerifyRow::below("counting-oracle-equivalence", oracle_dev, 1e-10));
    rows.push(VerifyRow::below("su11-law-uniformity-spread", spread, 1e-14));
    rows.push(VerifyRow::below(
        "boson-law-multinomial-log-route",
        multinomial_dev,
        1e-12,
    ));
    rows.push(VerifyRow::below("law-exchangeability", exchange_dev, 1e-14));
    rows.push(VerifyRow::below(
        "boson-marginal-binomial",
        binom_marginal_dev,
        1e-12,
    ));
    rows.push(VerifyRow::below(
        "su11-marginal-uniform-two-modes",
        uniform_marginal_dev,
        1e-14,
    ));

    // composition count sanity: stars and bars at the grid corner
    let count = compositions(6, 4)?.len() as f64;
    rows.push(VerifyRow::below(
        "composition-count-stars-and-bars",
        (count - 84.0).abs(),
        0.5,
    ));
    Ok(())
}

fn oscillator_rows(rows: &mut Vec<VerifyRow>) -> Result<()> {
    // The full identity table at the pinned acceptance cutoff.
    for check in identity_table(50)? {
        let name = match check.kappa {
            Some(k) => format!("osc-{}-kappa-{k}", check.identity),
            None => format!("osc-{}", check.identity),
        };
        rows.push(VerifyRow::below(name, check.residual, check.tolerance));
    }

    // Schwinger relations hold at every pinned cutoff, not just 50.
    for &n in &[20usize, 40, 80] {
        let worst = identity_table(n)?
            .into_iter()
            .filter(|c| c.identity.starts_with("schwinger-k"))
            .map(|c| c.residual)
            .fold(0.0f64, f64::max);
        rows.push(VerifyRow::below(
            format!("schwinger-relations-n{n}"),
            worst,
            1e-10,
        ));
    }
    Ok(())
}

fn lorentz_rows(rows: &mut Vec<VerifyRow>) -> Result<()> {
    // Boost matrix against the exponential route at 20 rapidities.
    let mut dev = 0.0f64;
    for i in 0..20 {
        let theta = 3.0 * i as f64 / 19.0;
        let direct = boost_matrix((0.5 * theta).cosh())?;
        let exped = exp_boost(theta);
        dev = dev.max((direct.matrix() - exped).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    rows.push(VerifyRow::below("boost-exponential-agreement", dev, 1e-12));

    // One-parameter subgroup law.
    let mut dev = 0.0f64;
    for &(t1, t2) in &[(0.7, 1.1), (1.3, 0.4), (0.05, 2.4)] {
        let composed = exp_boost(t1) * exp_boost(t2);
        let direct = boost_matrix((0.5 * (t1 + t2)).cosh())?;
        dev = dev.max((direct.matrix() - composed).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    rows.push(VerifyRow::below("boost-group-law", dev, 1e-11));

    // Structural properties at gamma = 2.
    let b = boost_matrix(2.0)?;
    rows.push(VerifyRow::below(
        "boost-determinant-one",
        (b.det() - C64::new(1.0, 0.0)).norm(),
        1e-12,
    ));
    rows.push(VerifyRow::below("boost-hermiticity", b.hermiticity_deviation(), 1e-12));
    rows.push(VerifyRow::below("boost-orthogonality", b.orthogonality_deviation(), 1e-12));
    rows.push(VerifyRow::above("boost-non-unitary-witness", b.non_unitarity_witness(), 0.1));

    // Covariance residual: decreasing in the margin for the su(1,1) span,
    // bounded away from zero for the boson span.
    let margins = [10usize, 20, 30, 36];
    let mut su11 = Vec::new();
    let mut weyl_floor = f64::INFINITY;
    for &m in &margins {
        su11.push(internal_symmetry_residual(0.5, Algebra::Su11, 0.5, 80, m)?);
        weyl_floor = weyl_floor.min(internal_symmetry_residual(0.5, Algebra::Weyl, 0.5, 80, m)?);
    }
    let worst_ratio = su11
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, f64::max);
    rows.push(VerifyRow::below(
        "covariance-residual-margin-decay",
        worst_ratio,
        1.0,
    ));
    rows.push(VerifyRow::above("covariance-boson-floor", weyl_floor, 1e-2));

    // Conjugation preserves Hermiticity for diagonal and dense probes.
    let g = make_su11_hp(0.5, 80)?;
    let dense = g
        .k_plus()
        .checked_mul(g.k_minus())?
        .scale(C64::new(0.3, 0.0))
        .checked_add(&g.k_three().scale(C64::new(0.7, 0.0)))?;
    let dense = dense
        .checked_add(&dense.adjoint())?
        .scale(C64::new(0.5, 0.0));
    let mut dev = 0.0f64;
    for probe in [g.k_three().clone(), dense] {
        let conj = boost_conjugated(0.5, 0.5, 80, &probe)?;
        dev = dev.max(conj.hermiticity_deviation());
    }
    rows.push(VerifyRow::below("conjugation-preserves-hermiticity", dev, 1e-10));
    Ok(())
}

fn jc_rows(rows: &mut Vec<VerifyRow>) -> Result<()> {
    // Spectrum: dense eigenvalues against the closed-form block pairs, at
    // generic (detuned) parameters so no accidental degeneracy hides a
    // mismatch.
    for &variant in &[JCVariant::Linear, JCVariant::Su11] {
        let m = JCModel::new(variant, 1.3, 0.9, 0.7, 120)?;
        let h = build_hamiltonian(&m)?;
        let sym = (h.matrix() + h.matrix().adjoint()) * C64::new(0.5, 0.0);
        let mut numeric: Vec<f64> = nalgebra::SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        numeric.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut closed = vec![-0.5 * m.omega0(), m.omega() * 119.0 + 0.5 * m.omega0()];
        for n in 1..120 {
            let (lo, hi) = block_eigenvalues(&m, n)?;
            closed.push(lo);
            closed.push(hi);
        }
        closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let dev = numeric
            .iter()
            .zip(closed.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        rows.push(VerifyRow::below(
            format!("jc-spectrum-blocks-{variant}"),
            dev,
            1e-9,
        ));
    }

    // Closed forms against the exact block evolution on 200-point grids.
    let times: Vec<f64> = (0..200).map(|k| 10.0 * k as f64 / 199.0).collect();
    let alpha = C64::new(3.0, 0.0);
    let cutoff = 120;

    let lin = JCModel::new(JCVariant::Linear, 1.0, 1.0, 1.0, cutoff)?;
    let su = JCModel::new(JCVariant::Su11, 1.0, 1.0, 1.0, cutoff)?;
    let field = glauber_state(alpha, cutoff)?;
    let init = AtomFieldState::ground_with_field(&field)?;

    let lin_exact = sz_exact(&lin, &init, &times)?;
    let mut dev = 0.0f64;
    for (&t, &v) in times.iter().zip(lin_exact.values()) {
        dev = dev.max((sz_closed_linear_glauber(alpha, 1.0, t)? - v).abs());
    }
    rows.push(VerifyRow::below("jc-linear-poisson-closed-form", dev, 1e-8));

    let su_exact = sz_exact(&su, &init, &times)?;
    let mut dev = 0.0f64;
    for (&t, &v) in times.iter().zip(su_exact.values()) {
        dev = dev.max((sz_closed_su11_glauber(alpha, 1.0, t) - v).abs());
    }
    rows.push(VerifyRow::below("jc-su11-poisson-closed-form", dev, 1e-8));

    // The summed series route must reproduce the su11 Poisson closed form.
    let mut dev = 0.0f64;
    for &t in &times {
        let series = -0.5 * (-alpha.norm_sqr()).exp() * series_s(1.0, 1.0, alpha, 1.0, t, 1e-15)?;
        dev = dev.max((series - sz_closed_su11_glauber(alpha, 1.0, t)).abs());
    }
    rows.push(VerifyRow::below("jc-su11-series-closed-identity", dev, 1e-10));

    let eta = C64::new(2.0, 0.0);
    let bg_field = barut_girardello_state(eta, cutoff)?;
    let bg_init = AtomFieldState::ground_with_field(&bg_field)?;
    let bg_exact = sz_exact(&su, &bg_init, &times)?;
    let mut dev = 0.0f64;
    for (&t, &v) in times.iter().zip(bg_exact.values()) {
        dev = dev.max((sz_closed_su11_bg(eta, 1.0, t)? - v).abs());
    }
    rows.push(VerifyRow::below("jc-su11-eigenfield-closed-form", dev, 1e-8));

    // Dual evaluation routes for the eigenfield closed form.
    let i0 = bessel_i0(C64::new(2.0 * eta.norm(), 0.0))?.re;
    let mut dev = 0.0f64;
    for &t in &times {
        let via_series = -0.5 * series_s(1.0, 2.0, eta, 1.0, t, 1e-15)? / i0;
        dev = dev.max((via_series - sz_closed_su11_bg(eta, 1.0, t)?).abs());
    }
    rows.push(VerifyRow::below("jc-eigenfield-dual-route", dev, 1e-11));

    // Exact recurrence of the su11 inversion after pi/lambda0.
    let period = std::f64::consts::PI;
    let sample: Vec<f64> = vec![0.13, 0.42, 1.01, 2.2];
    let mut dev = 0.0f64;
    for &t in &sample {
        let a = evolve_state(&su, &init, t)?.sz_expectation();
        let b = evolve_state(&su, &init, t + period)?.sz_expectation();
        dev = dev.max((a - b).abs());
    }
    rows.push(VerifyRow::below("jc-su11-revival-periodicity", dev, 1e-9));

    // Conservation and unitarity along a long trajectory.
    let mut drift = 0.0f64;
    let mut norm_dev = 0.0f64;
    let mut bound = 0.0f64;
    let start = init.excitation_expectation();
    for &t in &times {
        let st = evolve_state(&lin, &init, t)?;
        drift = drift.max((st.excitation_expectation() - start).abs());
        norm_dev = norm_dev.max((st.norm() - 1.0).abs());
        bound = bound.max(st.sz_expectation().abs());
    }
    rows.push(VerifyRow::below("jc-excitation-conservation", drift, 1e-9));
    rows.push(VerifyRow::below("jc-norm-conservation", norm_dev, 1e-10));
    rows.push(VerifyRow::below("jc-inversion-bound", bound, 0.5 + 1e-9));

    // Collapse-time contrast between the variants at n_bar = 9. The
    // corridor encodes a 1/sqrt(n_bar) shortening of the time scale; the
    // trailing-envelope estimator measures the full envelope ratio, which
    // sits near 1/(2 sqrt(n_bar)) instead, so this row documents the
    // discrepancy rather than hiding it.
    let ratio = collapse_ratio()?;
    rows.push(VerifyRow {
        check: "jc-collapse-time-contrast".into(),
        value: ratio,
        bound: Bound::Window {
            lo: 0.7 / 3.0,
            hi: 1.3 / 3.0,
        },
    });
    Ok(())
}

/// Pinned collapse-contrast measurement: matched couplings, |alpha|^2 = 9,
/// trailing moving-max envelope with a Rabi-period window, 0.1 threshold.
pub fn collapse_ratio() -> Result<f64> {
    let cutoff = 120;
    let alpha = C64::new(3.0, 0.0);
    let field = glauber_state(alpha, cutoff)?;
    let init = AtomFieldState::ground_with_field(&field)?;
    let n_bar = field.mean_occupation();

    let su = JCModel::new(JCVariant::Su11, 1.0, 1.0, 1.0, cutoff)?;
    let su_times: Vec<f64> = (0..3000).map(|k| 3.0 * k as f64 / 2999.0).collect();
    let su_series = sz_exact(&su, &init, &su_times)?;
    let su_window = 2.0 * std::f64::consts::PI / su.rabi_frequency_at(n_bar);
    let su_collapse = collapse_time(su_series.times(), su_series.values(), su_window);

    let lin = JCModel::new(JCVariant::Linear, 1.0, 1.0, 1.0, cutoff)?;
    let lin_times: Vec<f64> = (0..3000).map(|k| 30.0 * k as f64 / 2999.0).collect();
    let lin_series = sz_exact(&lin, &init, &lin_times)?;
    let lin_window = 2.0 * std::f64::consts::PI / lin.rabi_frequency_at(n_bar);
    let lin_collapse = collapse_time(lin_series.times(), lin_series.values(), lin_window);

    match (su_collapse, lin_collapse) {
        (Some(s), Some(l)) if l > 0.0 => Ok(s / l),
        _ => Err(crate::error::Error::Inconsistency(
            "collapse threshold was never crossed on the pinned grids".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_runs_and_is_deterministic() {
        let first = run_all().unwrap();
        let second = run_all().unwrap();
        assert_eq!(first, second);
        assert!(first.len() >= 30, "expected a full table, got {}", first.len());
    }

    #[test]
    fn only_the_collapse_corridor_fails() {
        let rows = run_all().unwrap();
        let failing: Vec<&str> = rows
            .iter()
            .filter(|r| !r.pass())
            .map(|r| r.check.as_str())
            .collect();
        assert_eq!(failing, vec!["jc-collapse-time-contrast"]);
    }

    #[test]
    fn bounds_render_compactly() {
        assert_eq!(Bound::Below(1e-10).to_string(), "<1e-10");
        assert_eq!(Bound::Above(0.1).to_string(), ">1e-1");
        assert!(Bound::Window { lo: 0.2, hi: 0.4 }.holds_for(0.3));
    }

    #[test]
    fn collapse_ratio_is_reproducible_and_short() {
        let r = collapse_ratio().unwrap();
        assert!(r > 0.05 && r < 0.5, "{r}");
        assert_eq!(r, collapse_ratio().unwrap());
    }
}
