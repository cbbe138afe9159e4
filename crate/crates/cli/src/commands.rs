use std::f64::consts::FRAC_1_SQRT_2;

use dqc1lab::dqc1::Dqc1State;
use dqc1lab::entropic::{qd2_report, QdReport};
use dqc1lab::geometric::{
    gqd_bruteforce, gqd_closed_form, gqd_report, landscape_gradient, landscape_grid, stationarity_at_phi0, tau2, GqdReport,
    LandscapeGrid, StationarityCheck,
};
use dqc1lab::haar::{log2_gqd_slope, typicality_study, write_study_csv, EnsembleStats, RNG_ALGORITHM};
use dqc1lab::operator::{gates, ComplexMatrix, UnitaryOperator};
use dqc1lab::shots::{estimate_gqd_from_shots_with, estimate_gqd_noiseless, GqdShotReport, ShotOptions};
use serde::Serialize;

use crate::args::{Command, Format, OutputArgs};
use crate::output::{csv_row, emit, json};
use crate::{source, CliError, EXIT_OK, EXIT_PRECISION, EXIT_RESIDUAL};

/// Polarisation of the thermal NMR sample in the worked example.
const THERMAL_ALPHA: f64 = 1.4e-5;

pub fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Gqd { source, alpha, grid, output } => {
            let (u, label) = source::resolve(&source)?;
            let state = Dqc1State::new(u, alpha).map_err(CliError::from_core)?;
            let report = gqd_report(&state, grid).map_err(CliError::from_core)?;
            eprintln!("{}", gqd_summary(&label, &report));
            emit(&output, "gqd", |w| match output.format {
                Format::Json => json(w, &Envelope { command: "gqd", source: &label, report: &report }),
                Format::Csv => csv_row(w, &GqdRow::from(&report)),
            })?;
            Ok(residual_code(report.converged, report.residual, dqc1lab::geometric::AGREEMENT_TOL))
        }
        Command::Discord2 { source, alpha, grid, output } => {
            let (u, label) = source::resolve(&source)?;
            let report = qd2_report(&u, alpha, grid).map_err(CliError::from_core)?;
            eprintln!("{}", qd_summary(&label, &report));
            emit(&output, "discord2", |w| match output.format {
                Format::Json => json(w, &Envelope { command: "discord2", source: &label, report: &report }),
                Format::Csv => csv_row(w, &QdRow::from(&report)),
            })?;
            Ok(residual_code(report.converged, report.residual, dqc1lab::entropic::AGREEMENT_TOL))
        }
        Command::Landscape { source, alpha, res_a, res_phi, output } => {
            let (u, label) = source::resolve(&source)?;
            let state = Dqc1State::new(u, alpha).map_err(CliError::from_core)?;
            let grid = landscape_grid(&state, res_a, res_phi).map_err(CliError::from_core)?;
            let (lo, a_lo, p_lo) = grid.min();
            let (hi, a_hi, p_hi) = grid.max();
            eprintln!(
                "landscape of {label}, α = {alpha}, {res_a}×{res_phi} grid\n  min g/α² = {lo:.6e} at a = {a_lo:.4}, φ = {p_lo:.4}\n  max g/α² = {hi:.6e} at a = {a_hi:.4}, φ = {p_hi:.4}"
            );
            emit(&output, "landscape", |w| match output.format {
                Format::Json => json(w, &Envelope { command: "landscape", source: &label, report: &LandscapeReport { alpha, grid: &grid } }),
                Format::Csv => grid.write_csv(w).map_err(CliError::from_core),
            })?;
            Ok(EXIT_OK)
        }
        Command::HaarStudy { n, samples, alpha, seed, keep_samples, output } => {
            let stats = typicality_study(&n.0, samples, alpha, seed, keep_samples).map_err(CliError::from_core)?;
            let slope = if stats.len() >= 2 { log2_gqd_slope(&stats).ok() } else { None };
            eprintln!("{}", study_summary(&stats, slope, seed));
            emit(&output, "haar-study", |w| match output.format {
                Format::Json => json(
                    w,
                    &StudyReport { command: "haar-study", rng: RNG_ALGORITHM, seed, alpha, samples, log2_gqd_slope: slope, stats: &stats },
                ),
                Format::Csv => write_study_csv(&stats, w).map_err(CliError::from_core),
            })?;
            Ok(EXIT_OK)
        }
        Command::Shots { source, alpha, shots, noiseless, bootstrap, output } => {
            let (u, label) = source::resolve(&source)?;
            let report = if noiseless {
                estimate_gqd_noiseless(&u, alpha)
            } else {
                estimate_gqd_from_shots_with(&u, alpha, shots, source.seed, ShotOptions { bootstrap_replicates: bootstrap })
            }
            .map_err(CliError::from_core)?;
            eprintln!("{}", shots_summary(&label, &report, gqd_closed_form(&u, alpha).map_err(CliError::from_core)?));
            emit(&output, "shots", |w| match output.format {
                Format::Json => json(w, &Envelope { command: "shots", source: &label, report: &report }),
                Format::Csv => csv_row(w, &ShotsRow::from(&report)),
            })?;
            Ok(strict_code(&output, report.precision_warning))
        }
        Command::JonesDemo { res, grid, output } => {
            let demo = jones_demo(res, grid)?;
            eprintln!("{}", jones_summary(&demo));
            emit(&output, "jones-demo", |w| match output.format {
                Format::Json => json(w, &demo),
                Format::Csv => demo.landscape.write_csv(w).map_err(CliError::from_core),
            })?;
            Ok(if demo.stationarity.stationary { EXIT_OK } else { EXIT_RESIDUAL })
        }
    }
}

fn residual_code(converged: bool, residual: f64, tol: f64) -> i32 {
    if converged {
        EXIT_OK
    } else {
        eprintln!("error: closed form and brute force disagree by {residual:.3e} (tolerance {tol:.0e})");
        EXIT_RESIDUAL
    }
}

fn strict_code(output: &OutputArgs, precision_warning: bool) -> i32 {
    if output.strict && precision_warning {
        eprintln!("error: precision warning escalated by --strict");
        EXIT_PRECISION
    } else {
        EXIT_OK
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    source: &'a str,
    #[serde(flatten)]
    report: &'a T,
}

#[derive(Serialize)]
struct LandscapeReport<'a> {
    alpha: f64,
    #[serde(flatten)]
    grid: &'a LandscapeGrid,
}

#[derive(Serialize)]
struct StudyReport<'a> {
    command: &'a str,
    rng: &'a str,
    seed: u64,
    alpha: f64,
    samples: usize,
    log2_gqd_slope: Option<f64>,
    stats: &'a [EnsembleStats],
}

#[derive(Serialize)]
struct GqdRow {
    n: usize,
    alpha: f64,
    trace_u2_re: f64,
    trace_u2_im: f64,
    tau2: f64,
    gqd_closed_form: f64,
    gqd_bruteforce: f64,
    a_opt: f64,
    phi_opt: f64,
    phi0_formula: f64,
    residual: f64,
    converged: bool,
}

impl From<&GqdReport> for GqdRow {
    fn from(r: &GqdReport) -> Self {
        Self {
            n: r.n,
            alpha: r.alpha,
            trace_u2_re: r.trace_u2[0],
            trace_u2_im: r.trace_u2[1],
            tau2: r.tau2,
            gqd_closed_form: r.gqd_closed_form,
            gqd_bruteforce: r.gqd_bruteforce,
            a_opt: r.a_opt,
            phi_opt: r.phi_opt,
            phi0_formula: r.phi0_formula,
            residual: r.residual,
            converged: r.converged,
        }
    }
}

#[derive(Serialize)]
struct QdRow {
    alpha: f64,
    tau1: f64,
    qd_closed_form: f64,
    qd_bruteforce: f64,
    a_opt: f64,
    phi_opt: f64,
    a_formula: f64,
    phi_formula: f64,
    residual: f64,
    converged: bool,
}

impl From<&QdReport> for QdRow {
    fn from(r: &QdReport) -> Self {
        Self {
            alpha: r.alpha,
            tau1: r.tau1,
            qd_closed_form: r.qd_closed_form,
            qd_bruteforce: r.qd_bruteforce,
            a_opt: r.a_opt,
            phi_opt: r.phi_opt,
            a_formula: r.a_formula,
            phi_formula: r.phi_formula,
            residual: r.residual,
            converged: r.converged,
        }
    }
}

#[derive(Serialize)]
struct ShotsRow {
    n: usize,
    alpha: f64,
    shots_per_observable: u64,
    x_mean: f64,
    x_std_error: f64,
    y_mean: f64,
    y_std_error: f64,
    tau2_hat: f64,
    tau2_sigma: f64,
    gqd_hat: f64,
    gqd_sigma: f64,
    bias_warning: bool,
    precision_warning: bool,
}

impl From<&GqdShotReport> for ShotsRow {
    fn from(r: &GqdShotReport) -> Self {
        Self {
            n: r.n,
            alpha: r.alpha,
            shots_per_observable: r.shots_per_observable,
            x_mean: r.x_hat.mean,
            x_std_error: r.x_hat.std_error,
            y_mean: r.y_hat.mean,
            y_std_error: r.y_hat.std_error,
            tau2_hat: r.tau2_hat,
            tau2_sigma: r.tau2_sigma,
            gqd_hat: r.gqd_hat,
            gqd_sigma: r.gqd_sigma,
            bias_warning: r.bias_warning,
            precision_warning: r.precision_warning,
        }
    }
}

#[derive(Serialize)]
pub struct PhiComparison {
    /// ½ arg Tr U².
    pub formula: f64,
    /// φ of the brute-force minimum.
    pub minimizer: f64,
    /// arg Tr U², twice the optimal angle.
    pub doubled: f64,
    pub doubled_gradient_norm: f64,
    pub note: &'static str,
}

#[derive(Serialize)]
pub struct JonesDemo {
    pub command: &'static str,
    pub unitary: ComplexMatrix,
    pub trace_u2: [f64; 2],
    pub tau2: f64,
    pub gqd_alpha_1: f64,
    pub thermal_alpha: f64,
    pub gqd_thermal: f64,
    pub a_opt: f64,
    pub phi0: PhiComparison,
    pub stationarity: StationarityCheck,
    pub landscape_min: [f64; 3],
    pub landscape: LandscapeGrid,
}

fn jones_demo(res: usize, grid_n: usize) -> Result<JonesDemo, CliError> {
    let u: UnitaryOperator = gates::jones_unitary();
    let state = Dqc1State::new(u.clone(), 1.0).map_err(CliError::from_core)?;
    let found = gqd_bruteforce(&state, grid_n, true).map_err(CliError::from_core)?;
    let stationarity = stationarity_at_phi0(&state);
    let t = u.trace_of_square();
    let doubled = t.arg();
    let g = landscape_gradient(&state, FRAC_1_SQRT_2, doubled, 1e-4);
    let landscape = landscape_grid(&state, res, res).map_err(CliError::from_core)?;
    let (v, a, p) = landscape.min();
    Ok(JonesDemo {
        command: "jones-demo",
        unitary: u.matrix().clone(),
        trace_u2: [t.re, t.im],
        tau2: tau2(&u),
        gqd_alpha_1: gqd_closed_form(&u, 1.0).map_err(CliError::from_core)?,
        thermal_alpha: THERMAL_ALPHA,
        gqd_thermal: gqd_closed_form(&u, THERMAL_ALPHA).map_err(CliError::from_core)?,
        a_opt: found.a,
        phi0: PhiComparison {
            formula: stationarity.phi0,
            minimizer: found.phi,
            doubled,
            doubled_gradient_norm: g[0].hypot(g[1]),
            note: "the landscape depends on cos 2(φ − θ_j), so the optimum is ½ arg Tr U²; arg Tr U² itself is not stationary",
        },
        stationarity,
        landscape_min: [v, a, p],
        landscape,
    })
}

fn gqd_summary(label: &str, r: &GqdReport) -> String {
    format!(
        "geometric discord of {label} (n = {}, α = {})\n  Tr U² = {:.6} {:+.6}i, τ₂ = {:.6}\n  closed form  {:.10e}\n  brute force  {:.10e}  at a = {:.6}, φ = {:.6}\n  residual     {:.3e} ({})\n  φ₀ = ½ arg Tr U² = {:.6}{}",
        r.n,
        r.alpha,
        r.trace_u2[0],
        r.trace_u2[1],
        r.tau2,
        r.gqd_closed_form,
        r.gqd_bruteforce,
        r.a_opt,
        r.phi_opt,
        r.residual,
        if r.converged { "agree" } else { "DISAGREE" },
        r.phi0_formula,
        if r.phi0_degenerate { " (degenerate: Tr U² = 0)" } else { "" },
    )
}

fn qd_summary(label: &str, r: &QdReport) -> String {
    format!(
        "entropic discord of {label} (α = {}, τ₁ = |Tr U|/2 = {:.6})\n  closed form  {:.10e}\n  brute force  {:.10e}  at a = {:.6}, φ = {:.6}\n  formula basis a = {:.6}, φ = {:.6}\n  residual     {:.3e} ({})",
        r.alpha,
        r.tau1,
        r.qd_closed_form,
        r.qd_bruteforce,
        r.a_opt,
        r.phi_opt,
        r.a_formula,
        r.phi_formula,
        r.residual,
        if r.converged { "agree" } else { "DISAGREE" },
    )
}

fn study_summary(stats: &[EnsembleStats], slope: Option<f64>, seed: u64) -> String {
    let mut s = format!("Haar typicality study, seed {seed} ({RNG_ALGORITHM})\n   n  samples  τ₂ mean ± std          GQD/max");
    for e in stats {
        s.push_str(&format!("\n  {:>2}  {:>7}  {:.5} ± {:.5}      {:.5}", e.n, e.samples, e.tau2_mean, e.tau2_std, e.gqd_over_max_mean));
    }
    if let Some(m) = slope {
        s.push_str(&format!("\n  slope of log₂ mean GQD vs n: {m:.4}"));
    }
    s
}

fn shots_summary(label: &str, r: &GqdShotReport, exact: f64) -> String {
    let shots = if r.shots_per_observable == 0 { "noiseless".to_string() } else { format!("{} shots per observable", r.shots_per_observable) };
    let mut s = format!(
        "shot estimate for {label} (n = {}, α = {}, {shots})\n  ⟨σx⟩ = {:.6} ± {:.6}, ⟨σy⟩ = {:.6} ± {:.6}\n  τ₂  = {:.6} ± {:.6}\n  GQD = {:.6e} ± {:.3e} (exact {:.6e})",
        r.n, r.alpha, r.x_hat.mean, r.x_hat.std_error, r.y_hat.mean, r.y_hat.std_error, r.tau2_hat, r.tau2_sigma, r.gqd_hat, r.gqd_sigma, exact,
    );
    if let Some(b) = r.bootstrap_tau2_sigma {
        s.push_str(&format!("\n  bootstrap σ(τ₂) = {b:.6}"));
    }
    if r.bias_warning {
        s.push_str("\n  warning: τ̂₂ is biased upward at this signal-to-noise ratio");
    }
    if r.precision_warning {
        s.push_str("\n  warning: σ(τ₂) > 1, the polarisation is too small for this many shots");
    }
    s
}

fn jones_summary(d: &JonesDemo) -> String {
    format!(
        "three-qubit braid unitary diag(c,c,d,1,c,d,1,1)\n  Tr U² = {:.6} {:+.6}i, τ₂ = {:.6}\n  GQD(α = 1)       = {:.6}\n  GQD(α = {:.1e}) = {:.4e}\n  minimiser a = {:.6}, φ = {:.6}\n  φ₀ = ½ arg Tr U² = {:.6}  ‖∇g‖ = {:.2e} (tolerance {:.2e}, {})\n  arg Tr U² = {:.6}  ‖∇g‖ = {:.2e}, not stationary\n  landscape minimum g/α² = {:.6e} at a = {:.4}, φ = {:.4}",
        d.trace_u2[0],
        d.trace_u2[1],
        d.tau2,
        d.gqd_alpha_1,
        d.thermal_alpha,
        d.gqd_thermal,
        d.a_opt,
        d.phi0.minimizer,
        d.phi0.formula,
        d.stationarity.gradient_norm,
        d.stationarity.tolerance,
        if d.stationarity.stationary { "stationary" } else { "NOT stationary" },
        d.phi0.doubled,
        d.phi0.doubled_gradient_norm,
        d.landscape_min[0],
        d.landscape_min[1],
        d.landscape_min[2],
    )
}
