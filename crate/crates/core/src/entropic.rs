//! Entropic quantum discord with a measured qubit subsystem A.
//!
//! D(A:B) = H(ρ_A) − H(ρ) + min_Π Σ_k p_k H(ρ_{B|k}), all entropies in bits.
//! For two-qubit DQC1 states the minimum has a closed form in
//! τ₁ = |Tr U|/2 and α.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::dqc1::{basis_states, check_alpha, Dqc1State, MeasurementBasis};
use crate::error::{Error, Result};
use crate::operator::entropy::{spectrum_entropy, xlog2x};
use crate::operator::spectral::hermitian_eigenvalues;
use crate::operator::{binary_entropy, eigenphases, partial_trace, von_neumann_entropy, DensityMatrix, Subsystem, UnitaryOperator};
use crate::search::{minimize_over_bases, BasisMinimum};

/// Grid resolution per axis for the two-qubit brute-force search.
pub const DEFAULT_GRID: usize = 256;
/// Agreement expected between closed form and brute force, in bits.
pub const AGREEMENT_TOL: f64 = 1e-6;
/// Outcomes with smaller probability contribute nothing.
const MIN_OUTCOME_PROBABILITY: f64 = 1e-14;

/// Conditional-state blocks ρ split on the measured qubit.
struct QubitBlocks {
    d: usize,
    blocks: [DMatrix<Complex64>; 4],
}

impl QubitBlocks {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let dim = rho.dim();
        if dim % 2 != 0 {
            return Err(Error::Dimension(format!("a {dim}x{dim} state has no qubit factor A")));
        }
        let d = dim / 2;
        let m = rho.matrix().inner();
        let blocks = [0, 1, 2, 3].map(|k| m.view((k / 2 * d, k % 2 * d), (d, d)).clone_owned());
        Ok(Self { d, blocks })
    }

    /// Σ_k p_k H(ρ_{B|k}) for the projector pair at (a, φ).
    ///
    /// p_k ρ_{B|k} = Tr_A[(Π_k ⊗ I)ρ(Π_k ⊗ I)] = Σ_xy conj(ψ_x) ψ_y R_xy.
    fn conditional_entropy(&self, a: f64, phi: f64) -> f64 {
        let (plus, minus) = basis_states(a, phi);
        let mut total = 0.0;
        for psi in [plus, minus] {
            let mut m = DMatrix::<Complex64>::zeros(self.d, self.d);
            for x in 0..2 {
                for y in 0..2 {
                    let w = psi[x].conj() * psi[y];
                    if w != Complex64::new(0.0, 0.0) {
                        m += &self.blocks[2 * x + y] * w;
                    }
                }
            }
            let p = m.diagonal().iter().map(|z| z.re).sum::<f64>();
            if p < MIN_OUTCOME_PROBABILITY {
                continue;
            }
            // p·H(σ/p) = −Σ λ log λ + p log p for the unnormalised σ.
            let lambdas = hermitian_eigenvalues(&m);
            let unnormalised: f64 = lambdas.iter().map(|&l| -xlog2x(l.max(0.0))).sum();
            total += unnormalised + xlog2x(p);
        }
        total.max(0.0)
    }
}

/// Σ_k p_k H(ρ_{B|k}) for a measurement of the first (qubit) factor.
pub fn conditional_entropy(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<f64> {
    let blocks = QubitBlocks::new(rho).map_err(|e| Error::ContractViolation(e.to_string()))?;
    Ok(blocks.conditional_entropy(basis.a(), basis.phi()))
}

fn require_single_qubit(u: &UnitaryOperator) -> Result<()> {
    if u.n_qubits() != 1 {
        return Err(Error::Dimension(format!(
            "two-qubit formula needs a one-qubit unitary, got {} qubits",
            u.n_qubits()
        )));
    }
    Ok(())
}

/// The two-qubit conditional entropy f(x) with
/// x_j = ½αa√(1−a²)cos(φ − θ_j) and p± = ½ ± Σ_j x_j.
///
/// The outcome-± conditional states have spectra (¼ ± x_j)/p±, so
/// f = −Σ_j [(¼+x_j) log((¼+x_j)/p₊) + (¼−x_j) log((¼−x_j)/p₋)],
/// which is the usual f(x) regrouped so that zero eigenvalues are harmless.
pub fn f_conditional_2q(u: &UnitaryOperator, alpha: f64, basis: &MeasurementBasis) -> Result<f64> {
    require_single_qubit(u)?;
    check_alpha(alpha)?;
    let phases = eigenphases(u)?;
    Ok(f_from_phases(alpha, &phases, basis.a(), basis.phi()))
}

fn f_from_phases(alpha: f64, phases: &[f64], a: f64, phi: f64) -> f64 {
    let ab = a * (1.0 - a * a).max(0.0).sqrt();
    let x: Vec<f64> = phases.iter().map(|t| 0.5 * alpha * ab * (phi - t).cos()).collect();
    let sum: f64 = x.iter().sum();
    let (p_plus, p_minus) = (0.5 + sum, 0.5 - sum);
    let term = |q: f64, p: f64| if q <= 0.0 || p <= 0.0 { 0.0 } else { q * (q / p).log2() };
    -x.iter().map(|&xj| term(0.25 + xj, p_plus) + term(0.25 - xj, p_minus)).sum::<f64>()
}

/// How τ₁ is normalised when evaluating the two-qubit closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tau1Normalization {
    /// τ₁ = |Tr U|/2 (= |Tr U|/2ⁿ for n = 1). Agrees with brute force.
    HalfTrace,
    /// τ₁ = |Tr U|/4. Does not vanish at |Tr U|² = 4 and disagrees with brute force.
    QuarterTrace,
}

impl Tau1Normalization {
    pub fn tau1(self, u: &UnitaryOperator) -> f64 {
        let t = u.trace().norm();
        match self {
            Self::HalfTrace => t / 2.0,
            Self::QuarterTrace => t / 4.0,
        }
    }
}

/// Two-qubit DQC1 discord in bits:
///
/// ```text
/// D = H₂((1 − ατ₁)/2) − H₂((1 − α)/2) − ½log(1 − α²(1 − τ₁²))
///     − (α/2)√(1 − τ₁²)·log((1 + α√(1−τ₁²)) / (1 − α√(1−τ₁²)))
/// ```
pub fn qd2_closed_form(u: &UnitaryOperator, alpha: f64) -> Result<f64> {
    qd2_closed_form_with(u, alpha, Tau1Normalization::HalfTrace)
}

pub fn qd2_closed_form_with(u: &UnitaryOperator, alpha: f64, norm: Tau1Normalization) -> Result<f64> {
    require_single_qubit(u)?;
    check_alpha(alpha)?;
    let tau1 = norm.tau1(u).min(1.0);
    Ok(qd2_from_tau1(alpha, tau1))
}

fn qd2_from_tau1(alpha: f64, tau1: f64) -> f64 {
    let s = alpha * (1.0 - tau1 * tau1).max(0.0).sqrt();
    // The last two terms equal −½[(1+s)log(1+s) + (1−s)log(1−s)], which stays
    // finite as s → 1.
    binary_entropy(0.5 * (1.0 - alpha * tau1)) - binary_entropy(0.5 * (1.0 - alpha)) - 0.5 * (xlog2x(1.0 + s) + xlog2x(1.0 - s))
}

/// (1/√2, π/2 + (θ₁+θ₂)/2), wrapped into [−π/2, π/2].
pub fn qd2_optimal_basis(u: &UnitaryOperator) -> Result<MeasurementBasis> {
    require_single_qubit(u)?;
    let phases = eigenphases(u)?;
    Ok(MeasurementBasis::canonical(FRAC_1_SQRT_2, FRAC_PI_2 + 0.5 * (phases[0] + phases[1])))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiscordMinimum {
    pub value: f64,
    pub a: f64,
    pub phi: f64,
    pub min_conditional_entropy: f64,
}

/// H(ρ_A) − H(ρ) + min over a grid-and-polish search of the conditional entropy.
pub fn discord_bruteforce(rho: &DensityMatrix, grid_n: usize) -> Result<DiscordMinimum> {
    let blocks = QubitBlocks::new(rho)?;
    let dims = [2, blocks.d];
    let h_a = von_neumann_entropy(&partial_trace(rho, dims, Subsystem::A)?)?;
    let h_ab = spectrum_entropy(&rho.eigenvalues())?;
    let BasisMinimum { value, a, phi } = minimize_over_bases(|a, phi| blocks.conditional_entropy(a, phi), grid_n, true)?;
    Ok(DiscordMinimum {
        value: h_a - h_ab + value,
        a,
        phi,
        min_conditional_entropy: value,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QdReport {
    pub alpha: f64,
    pub tau1: f64,
    pub tau1_normalization: Tau1Normalization,
    pub qd_closed_form: f64,
    pub qd_bruteforce: f64,
    pub a_opt: f64,
    pub phi_opt: f64,
    pub a_formula: f64,
    pub phi_formula: f64,
    pub residual: f64,
    pub converged: bool,
    pub grid_n: usize,
}

/// Clamps values within 1e-9 below zero to 0; further negatives pass through.
fn clamp_reported(x: f64) -> f64 {
    if (-1e-9..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

pub fn qd2_report(u: &UnitaryOperator, alpha: f64, grid_n: usize) -> Result<QdReport> {
    let norm = Tau1Normalization::HalfTrace;
    let closed = qd2_closed_form_with(u, alpha, norm)?;
    let state = Dqc1State::new(u.clone(), alpha)?;
    let found = discord_bruteforce(state.rho(), grid_n)?;
    let formula = qd2_optimal_basis(u)?;
    let residual = (closed - found.value).abs();
    Ok(QdReport {
        alpha,
        tau1: norm.tau1(u),
        tau1_normalization: norm,
        qd_closed_form: clamp_reported(closed),
        qd_bruteforce: clamp_reported(found.value),
        a_opt: found.a,
        phi_opt: found.phi,
        a_formula: formula.a(),
        phi_formula: formula.phi(),
        residual,
        converged: residual <= AGREEMENT_TOL,
        grid_n,
    })
}
