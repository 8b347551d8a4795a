//! Subcommand execution and report rendering. Every report is built in
//! memory with fixed field order and fixed float formatting (17
//! significant digits via `{:.16e}`), then written in one sequential pass,
//! so identical configs produce byte-identical output.

use std::fmt::Write as _;
use std::io::Write as _;

use bosonalg::{
    all_pass, barut_girardello_state, boost_matrix, collapse_time, dist_su11, dist_weyl,
    evolve_state, exp_boost, glauber_state, identity_table, internal_symmetry_residual,
    revival_period, run_all, sz_closed_linear_glauber, sz_closed_su11_bg, sz_closed_su11_glauber,
    Algebra, AtomFieldState, JCModel, JCVariant, C64,
};
use rayon::prelude::*;

use crate::args::{Command, Compare, Format, JcParams, LorentzParams, OscillatorParams, OutputOpts, StatsParams};

/// One-line failures with the exit-status contract: 2 for violated
/// preconditions (bad flags/config included), 1 for tripped numerical
/// guards and I/O.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Guard(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Guard(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Guard(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "output error: {e}"),
        }
    }
}

impl From<bosonalg::Error> for CliError {
    fn from(e: bosonalg::Error) -> Self {
        if e.is_precondition() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Guard(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// 17 significant digits, always scientific, locale-independent.
fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON value for a possibly-missing float.
fn sci_or_null(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => sci(v),
        _ => "null".to_string(),
    }
}

fn write_report(out: &OutputOpts, content: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

pub fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Stats { params, out } => run_stats(&params, &out),
        Command::Oscillator { params, out } => run_oscillator(&params, &out),
        Command::Lorentz { params, out } => run_lorentz(&params, &out),
        Command::Jc { params, out } => run_jc(&params, &out),
        Command::Verify { out } => run_verify(&out),
    }
}

fn run_stats(p: &StatsParams, out: &OutputOpts) -> Result<(), CliError> {
    let dist = match p.algebra.0 {
        Algebra::Weyl => dist_weyl(p.n, p.m)?,
        Algebra::Su11 => dist_su11(p.n, p.m)?,
    };
    let mut s = String::new();
    match out.format {
        Format::Csv => {
            for j in 1..=p.m {
                let _ = write!(s, "k_{j},");
            }
            s.push_str("probability\n");
            for (k, prob) in dist.entries() {
                for part in k.parts() {
                    let _ = write!(s, "{part},");
                }
                let _ = writeln!(s, "{}", sci(*prob));
            }
        }
        Format::Json => {
            let _ = write!(
                s,
                "{{\"schema\":1,\"subcommand\":\"stats\",\"n\":{},\"m\":{},\"algebra\":\"{}\",\"total_mass\":{},\"entries\":[",
                p.n,
                p.m,
                p.algebra.0,
                sci(dist.total_mass())
            );
            for (i, (k, prob)) in dist.entries().iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let parts: Vec<String> = k.parts().iter().map(|v| v.to_string()).collect();
                let _ = write!(
                    s,
                    "{{\"pattern\":[{}],\"probability\":{}}}",
                    parts.join(","),
                    sci(*prob)
                );
            }
            s.push_str("]}\n");
        }
    }
    write_report(out, &s)
}

fn run_oscillator(p: &OscillatorParams, out: &OutputOpts) -> Result<(), CliError> {
    let rows = identity_table(p.cutoff)?;
    let mut s = String::new();
    match out.format {
        Format::Csv => {
            s.push_str("identity,kappa,cutoff,residual,tolerance,pass\n");
            for r in &rows {
                let kappa = r.kappa.map(sci).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.identity,
                    kappa,
                    r.cutoff,
                    sci(r.residual),
                    sci(r.tolerance),
                    r.pass()
                );
            }
        }
        Format::Json => {
            let _ = write!(
                s,
                "{{\"schema\":1,\"subcommand\":\"oscillator\",\"cutoff\":{},\"all_pass\":{},\"rows\":[",
                p.cutoff,
                rows.iter().all(|r| r.pass())
            );
            for (i, r) in rows.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(
                    s,
                    "{{\"identity\":\"{}\",\"kappa\":{},\"cutoff\":{},\"residual\":{},\"tolerance\":{},\"pass\":{}}}",
                    r.identity,
                    sci_or_null(r.kappa),
                    r.cutoff,
                    sci(r.residual),
                    sci(r.tolerance),
                    r.pass()
                );
            }
            s.push_str("]}\n");
        }
    }
    write_report(out, &s)?;
    if rows.iter().all(|r| r.pass()) {
        Ok(())
    } else {
        Err(CliError::Guard(
            "oscillator identity table has failing rows".into(),
        ))
    }
}

fn run_lorentz(p: &LorentzParams, out: &OutputOpts) -> Result<(), CliError> {
    let want = |a: Algebra| p.algebra.is_none_or(|sel| sel.0 == a);
    let residual_su11 = if want(Algebra::Su11) {
        Some(internal_symmetry_residual(
            p.theta,
            Algebra::Su11,
            p.kappa,
            p.cutoff,
            p.margin,
        )?)
    } else {
        None
    };
    let residual_weyl = if want(Algebra::Weyl) {
        Some(internal_symmetry_residual(
            p.theta,
            Algebra::Weyl,
            p.kappa,
            p.cutoff,
            p.margin,
        )?)
    } else {
        None
    };

    // boost checks at gamma = cosh(theta/2), tying the matrix form to the
    // same rapidity the conjugation test uses
    let gamma = (0.5 * p.theta).cosh();
    let b = boost_matrix(gamma)?;
    let exp_agreement = (b.matrix() - exp_boost(p.theta))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let det_dev = (b.det() - C64::new(1.0, 0.0)).norm();

    let mut s = String::new();
    match out.format {
        Format::Csv => {
            s.push_str("quantity,value\n");
            if let Some(r) = residual_su11 {
                let _ = writeln!(s, "residual_su11,{}", sci(r));
            }
            if let Some(r) = residual_weyl {
                let _ = writeln!(s, "residual_weyl,{}", sci(r));
            }
            let _ = writeln!(s, "gamma,{}", sci(gamma));
            let _ = writeln!(s, "determinant_deviation,{}", sci(det_dev));
            let _ = writeln!(s, "hermiticity_deviation,{}", sci(b.hermiticity_deviation()));
            let _ = writeln!(s, "orthogonality_deviation,{}", sci(b.orthogonality_deviation()));
            let _ = writeln!(s, "non_unitarity_witness,{}", sci(b.non_unitarity_witness()));
            let _ = writeln!(s, "exponential_agreement,{}", sci(exp_agreement));
        }
        Format::Json => {
            let _ = writeln!(
                s,
                "{{\"schema\":1,\"subcommand\":\"lorentz\",\"theta\":{},\"kappa\":{},\"cutoff\":{},\"margin\":{},\"residual_su11\":{},\"residual_weyl\":{},\"boost_checks\":{{\"gamma\":{},\"determinant_deviation\":{},\"hermiticity_deviation\":{},\"orthogonality_deviation\":{},\"non_unitarity_witness\":{},\"exponential_agreement\":{}}}}}",
                sci(p.theta),
                sci(p.kappa),
                p.cutoff,
                p.margin,
                sci_or_null(residual_su11),
                sci_or_null(residual_weyl),
                sci(gamma),
                sci(det_dev),
                sci(b.hermiticity_deviation()),
                sci(b.orthogonality_deviation()),
                sci(b.non_unitarity_witness()),
                sci(exp_agreement),
            );
        }
    }
    write_report(out, &s)
}

enum FieldKind {
    Poisson(C64),
    Eigen(C64),
}

fn run_jc(p: &JcParams, out: &OutputOpts) -> Result<(), CliError> {
    let model = JCModel::new(p.variant.0, p.omega, p.omega0, p.coupling, p.cutoff)?;
    // rejects NaN as well as non-positive spans
    if p.t_max <= 0.0 || p.t_max.is_nan() {
        return Err(CliError::Usage(format!(
            "time grid precondition violated: t-max must be > 0, got {}",
            p.t_max
        )));
    }
    if p.t_steps < 2 {
        return Err(CliError::Usage(format!(
            "time grid precondition violated: t-steps must be >= 2, got {}",
            p.t_steps
        )));
    }
    let (kind, field) = match (p.alpha, p.eta) {
        (Some(a), None) => (FieldKind::Poisson(a.0), glauber_state(a.0, p.cutoff)?),
        (None, Some(e)) => (
            FieldKind::Eigen(e.0),
            barut_girardello_state(e.0, p.cutoff)?,
        ),
        _ => {
            return Err(CliError::Usage(
                "initial field precondition violated: exactly one of --alpha or --eta is required"
                    .into(),
            ))
        }
    };
    let init = AtomFieldState::ground_with_field(&field)?;
    let times: Vec<f64> = (0..p.t_steps)
        .map(|i| p.t_max * i as f64 / (p.t_steps - 1) as f64)
        .collect();

    let exact: Option<Vec<f64>> = if matches!(p.compare, Compare::Exact | Compare::Both) {
        let values = times
            .par_iter()
            .map(|&t| evolve_state(&model, &init, t).map(|s| s.sz_expectation()))
            .collect::<Result<Vec<f64>, _>>()?;
        Some(values)
    } else {
        None
    };

    let closed: Option<Vec<f64>> = if matches!(p.compare, Compare::Closed | Compare::Both) {
        if model.detuning() != 0.0 {
            return Err(CliError::Usage(
                "closed-form precondition violated: the closed forms hold at resonance only (omega must equal omega0)"
                    .into(),
            ));
        }
        let values = match (model.variant(), &kind) {
            (JCVariant::Linear, FieldKind::Poisson(a)) => {
                let a = *a;
                times
                    .iter()
                    .map(|&t| sz_closed_linear_glauber(a, model.coupling(), t))
                    .collect::<Result<Vec<f64>, _>>()?
            }
            (JCVariant::Su11, FieldKind::Poisson(a)) => times
                .iter()
                .map(|&t| sz_closed_su11_glauber(*a, model.coupling(), t))
                .collect(),
            (JCVariant::Su11, FieldKind::Eigen(e)) => {
                let e = *e;
                times
                    .iter()
                    .map(|&t| sz_closed_su11_bg(e, model.coupling(), t))
                    .collect::<Result<Vec<f64>, _>>()?
            }
            (JCVariant::Linear, FieldKind::Eigen(_)) => {
                return Err(CliError::Usage(
                    "closed-form precondition violated: the linear variant has no closed form for an eigenfield start (use --compare exact)"
                        .into(),
                ))
            }
        };
        Some(values)
    } else {
        None
    };

    let max_abs_err = match (&exact, &closed) {
        (Some(e), Some(c)) => Some(
            e.iter()
                .zip(c)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max),
        ),
        _ => None,
    };

    // collapse estimate from whichever series exists, using a Rabi-period
    // window at the field's mean occupation
    let series_for_collapse = exact.as_deref().or(closed.as_deref());
    let rabi = model.rabi_frequency_at(field.mean_occupation());
    let collapse = if rabi > 0.0 {
        series_for_collapse
            .and_then(|v| collapse_time(&times, v, 2.0 * std::f64::consts::PI / rabi))
    } else {
        None
    };
    let revival = revival_period(&model);

    let mut s = String::new();
    match out.format {
        Format::Csv => {
            s.push_str("t,sz_exact,sz_closed,abs_err\n");
            for (i, &t) in times.iter().enumerate() {
                let e = exact.as_ref().map(|v| sci(v[i])).unwrap_or_default();
                let c = closed.as_ref().map(|v| sci(v[i])).unwrap_or_default();
                let d = match (&exact, &closed) {
                    (Some(ev), Some(cv)) => sci((ev[i] - cv[i]).abs()),
                    _ => String::new(),
                };
                let _ = writeln!(s, "{},{e},{c},{d}", sci(t));
            }
        }
        Format::Json => {
            let _ = writeln!(
                s,
                "{{\"schema\":1,\"subcommand\":\"jc\",\"variant\":\"{}\",\"field\":\"{}\",\"collapse_time\":{},\"revival_period\":{},\"max_abs_err\":{}}}",
                model.variant(),
                match kind {
                    FieldKind::Poisson(_) => "poisson",
                    FieldKind::Eigen(_) => "eigen",
                },
                sci_or_null(collapse),
                sci_or_null(revival),
                sci_or_null(max_abs_err),
            );
        }
    }
    write_report(out, &s)
}

fn run_verify(out: &OutputOpts) -> Result<(), CliError> {
    let rows = run_all()?;
    let ok = all_pass(&rows);
    let mut s = String::new();
    match out.format {
        Format::Csv => {
            s.push_str("check,value,bound,pass\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", r.check, sci(r.value), r.bound, r.pass());
            }
        }
        Format::Json => {
            let _ = write!(
                s,
                "{{\"schema\":1,\"subcommand\":\"verify\",\"all_pass\":{ok},\"rows\":["
            );
            for (i, r) in rows.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(
                    s,
                    "{{\"check\":\"{}\",\"value\":{},\"bound\":\"{}\",\"pass\":{}}}",
                    r.check,
                    sci(r.value),
                    r.bound,
                    r.pass()
                );
            }
            s.push_str("]}\n");
        }
    }
    write_report(out, &s)?;
    if ok {
        Ok(())
    } else {
        let failing = rows.iter().filter(|r| !r.pass()).count();
        Err(CliError::Guard(format!(
            "verification suite: {failing} of {} checks failed",
            rows.len()
        )))
    }
}
