//! Geometric discord of DQC1 states.
//!
//! The geometric discord is the minimum over clean-qubit measurements Π of the
//! landscape g(a, φ) = ‖ρ − Π(ρ)‖². For DQC1 states the minimum sits at
//! a = 1/√2, φ₀ = ½ arg Tr(U²), and equals (α/2)²·2⁻ⁿ·(1 − τ₂) with
//! τ₂ = |Tr U²|/2ⁿ.
//!
//! In terms of the eigenphases θ_j of U the landscape is
//!
//! ```text
//! g = α²/2^{n+1} − α²a²b²/2ⁿ − (α²a²b²/2^{2n})·Σ_j cos 2(φ − θ_j)
//! ```
//!
//! Everything here that searches or plots evaluates g from the density matrix;
//! the eigenphase form is exposed as [`g_from_eigenphases`] for cross-checks.

use std::array::from_fn;
use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::dqc1::{basis_states, check_alpha, measure_top_qubit, Dqc1State, MeasurementBasis};
use crate::error::{Error, Result};
use crate::operator::matrix::trace_of_product;
use crate::operator::{hs_norm_sq, ComplexMatrix, UnitaryOperator};
use crate::search::{a_axis, minimize_over_bases, phi_axis, BasisMinimum};

/// Grid resolution per axis for brute-force minimisation.
pub const DEFAULT_GRID: usize = 128;
/// Residual below which closed form and search are considered to agree.
pub const AGREEMENT_TOL: f64 = 1e-9;
/// |Tr U²| below which φ is immaterial.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Matrices up to this size form ρ − Π(ρ) explicitly in [`g_landscape`].
const EXPLICIT_DIFFERENCE_MAX_DIM: usize = 1 << 6;

/// τ₂ = |Tr U²|/2ⁿ.
pub fn tau2(u: &UnitaryOperator) -> f64 {
    u.trace_of_square().norm() / u.dim() as f64
}

/// (α/2)²·2⁻ⁿ, the largest geometric discord a DQC1 state on n+1 qubits can carry.
pub fn gqd_ceiling(n: usize, alpha: f64) -> f64 {
    0.25 * alpha * alpha / (1u64 << n) as f64
}

/// (α/2)²·2⁻ⁿ·(1 − τ₂).
pub fn gqd_closed_form(u: &UnitaryOperator, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(gqd_ceiling(u.n_qubits(), alpha) * (1.0 - tau2(u).min(1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Phi0 {
    pub phi: f64,
    /// Set when |Tr U²| < [`DEGENERACY_TOL`]; `phi` is then 0 and any φ is optimal.
    pub degenerate: bool,
}

/// φ₀ = ½ arg Tr(U²) ∈ (−π/2, π/2].
pub fn optimal_phi0(u: &UnitaryOperator) -> Phi0 {
    let t = u.trace_of_square();
    if t.norm() < DEGENERACY_TOL {
        return Phi0 { phi: 0.0, degenerate: true };
    }
    Phi0 {
        phi: 0.5 * crate::operator::wrap_phase(t.arg()),
        degenerate: false,
    }
}

/// The eigenphase form of the landscape.
pub fn g_from_eigenphases(alpha: f64, phases: &[f64], a: f64, phi: f64) -> f64 {
    let d = phases.len() as f64;
    let s = a * a * (1.0 - a * a);
    let cos_sum: f64 = phases.iter().map(|t| (2.0 * (phi - t)).cos()).sum();
    let a2 = alpha * alpha;
    a2 / (2.0 * d) - a2 * s / d - a2 * s * cos_sum / (d * d)
}

/// ‖ρ − Π(ρ)‖² from the density matrix.
///
/// Small states form the difference explicitly; above 64×64 the value is
/// Tr ρ² − Tr(ρ·Π(ρ)), which is equal because Tr(ρ·Π(ρ)) = Tr(Π(ρ)²).
pub fn g_landscape(state: &Dqc1State, basis: &MeasurementBasis) -> f64 {
    let rho = state.rho().matrix();
    let measured = measure_top_qubit(rho, basis).expect("DQC1 states have even dimension");
    if rho.nrows() <= EXPLICIT_DIFFERENCE_MAX_DIM {
        hs_norm_sq(&(rho - &measured))
    } else {
        state.rho().purity() - rho.trace_of_product(&measured).re
    }
}

/// ‖ρ − Π(ρ)‖² for any qubit ⊗ d state, at O(1) cost per measurement.
///
/// With ρ split into d×d blocks R_xy on the clean qubit, the overlap is
/// Tr(ρ·Π(ρ)) = Σ_± Σ P_xy P_zw Tr(R_wx R_yz), so the sixteen block traces
/// are computed once and each evaluation is a contraction with the
/// projector entries.
#[derive(Debug, Clone)]
pub struct TopQubitLandscape {
    purity: f64,
    // block_traces[w][x][y][z] = Tr(R_wx R_yz)
    block_traces: [[[[Complex64; 2]; 2]; 2]; 2],
}

impl TopQubitLandscape {
    pub fn new(rho: &ComplexMatrix) -> Result<Self> {
        let dim = rho.nrows();
        if !rho.is_square() || dim % 2 != 0 {
            return Err(Error::Dimension(format!("expected a qubit ⊗ d state, got {}x{}", rho.nrows(), rho.ncols())));
        }
        let d = dim / 2;
        let m = rho.inner();
        let blocks: Vec<_> = (0..4)
            .map(|k| m.view((k / 2 * d, k % 2 * d), (d, d)).clone_owned())
            .collect();
        let block = |x: usize, y: usize| &blocks[2 * x + y];
        let block_traces = from_fn(|w| from_fn(|x| from_fn(|y| from_fn(|z| trace_of_product(block(w, x), block(y, z))))));
        Ok(Self {
            purity: trace_of_product(m, m).re,
            block_traces,
        })
    }

    pub fn for_state(state: &Dqc1State) -> Self {
        Self::new(state.rho().matrix()).expect("DQC1 states have even dimension")
    }

    /// ‖ρ − Π(ρ)‖² for the measurement (a, φ); φ may lie outside [−π/2, π/2].
    pub fn distance(&self, a: f64, phi: f64) -> f64 {
        let (plus, minus) = basis_states(a, phi);
        let mut overlap = 0.0;
        for psi in [plus, minus] {
            let p = [
                [psi[0] * psi[0].conj(), psi[0] * psi[1].conj()],
                [psi[1] * psi[0].conj(), psi[1] * psi[1].conj()],
            ];
            let mut acc = Complex64::new(0.0, 0.0);
            for w in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        for z in 0..2 {
                            acc += p[x][y] * p[z][w] * self.block_traces[w][x][y][z];
                        }
                    }
                }
            }
            overlap += acc.re;
        }
        self.purity - overlap
    }
}

/// Grid search for min g over the measurement domain.
pub fn gqd_bruteforce(state: &Dqc1State, grid_n: usize, refine: bool) -> Result<BasisMinimum> {
    if grid_n < 16 {
        return Err(Error::Parameter(format!("grid resolution {grid_n} is below 16")));
    }
    let landscape = TopQubitLandscape::for_state(state);
    minimize_over_bases(|a, phi| landscape.distance(a, phi), grid_n, refine)
}

#[derive(Debug, Clone, Serialize)]
pub struct GqdReport {
    pub n: usize,
    pub alpha: f64,
    pub trace_u2: [f64; 2],
    pub tau2: f64,
    pub gqd_closed_form: f64,
    pub gqd_bruteforce: f64,
    pub a_opt: f64,
    pub phi_opt: f64,
    /// ½ arg Tr U².
    pub phi0_formula: f64,
    pub phi0_degenerate: bool,
    pub residual: f64,
    pub converged: bool,
    pub grid_n: usize,
}

pub fn gqd_report(state: &Dqc1State, grid_n: usize) -> Result<GqdReport> {
    let u = state.unitary();
    let closed = gqd_closed_form(u, state.alpha())?;
    let found = gqd_bruteforce(state, grid_n, true)?;
    let brute = found.value.max(0.0);
    let residual = (closed - brute).abs();
    let t = u.trace_of_square();
    let phi0 = optimal_phi0(u);
    Ok(GqdReport {
        n: state.n(),
        alpha: state.alpha(),
        trace_u2: [t.re, t.im],
        tau2: tau2(u),
        gqd_closed_form: closed,
        gqd_bruteforce: brute,
        a_opt: found.a,
        phi_opt: found.phi,
        phi0_formula: phi0.phi,
        phi0_degenerate: phi0.degenerate,
        residual,
        converged: residual <= AGREEMENT_TOL,
        grid_n,
    })
}

/// Central-difference gradient (∂g/∂a, ∂g/∂φ) of the matrix landscape.
pub fn landscape_gradient(state: &Dqc1State, a: f64, phi: f64, step: f64) -> [f64; 2] {
    let eval = |a: f64, phi: f64| g_landscape(state, &MeasurementBasis::canonical(a, phi));
    [
        (eval(a + step, phi) - eval(a - step, phi)) / (2.0 * step),
        (eval(a, phi + step) - eval(a, phi - step)) / (2.0 * step),
    ]
}

/// Stationarity of the matrix landscape at (1/√2, ½ arg Tr U²).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StationarityCheck {
    pub phi0: f64,
    pub gradient: [f64; 2],
    pub gradient_norm: f64,
    /// 1e-6·α²·2⁻ⁿ.
    pub tolerance: f64,
    pub stationary: bool,
}

pub fn stationarity_at_phi0(state: &Dqc1State) -> StationarityCheck {
    let phi0 = optimal_phi0(state.unitary()).phi;
    let gradient = landscape_gradient(state, FRAC_1_SQRT_2, phi0, 1e-4);
    let gradient_norm = gradient[0].hypot(gradient[1]);
    let tolerance = 1e-6 * state.alpha() * state.alpha() / state.unitary().dim() as f64;
    StationarityCheck {
        phi0,
        gradient,
        gradient_norm,
        tolerance,
        stationary: gradient_norm <= tolerance,
    }
}

/// g/α² sampled on a rectangular grid, a-major.
#[derive(Debug, Clone, Serialize)]
pub struct LandscapeGrid {
    pub a_axis: Vec<f64>,
    pub phi_axis: Vec<f64>,
    pub values: Vec<f64>,
}

impl LandscapeGrid {
    pub fn value(&self, ia: usize, iphi: usize) -> f64 {
        self.values[ia * self.phi_axis.len() + iphi]
    }

    /// (value, a, φ) of the first minimal grid point.
    pub fn min(&self) -> (f64, f64, f64) {
        self.extreme(|v, best| v < best)
    }

    pub fn max(&self) -> (f64, f64, f64) {
        self.extreme(|v, best| v > best)
    }

    fn extreme(&self, better: impl Fn(f64, f64) -> bool) -> (f64, f64, f64) {
        let mut idx = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if better(v, self.values[idx]) {
                idx = i;
            }
        }
        let np = self.phi_axis.len();
        (self.values[idx], self.a_axis[idx / np], self.phi_axis[idx % np])
    }

    /// CSV with header `a,phi,g_over_alpha2`, one row per grid point.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["a", "phi", "g_over_alpha2"])?;
        for (ia, a) in self.a_axis.iter().enumerate() {
            for (ip, phi) in self.phi_axis.iter().enumerate() {
                w.write_record(&[a.to_string(), phi.to_string(), self.value(ia, ip).to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub fn landscape_grid(state: &Dqc1State, res_a: usize, res_phi: usize) -> Result<LandscapeGrid> {
    if res_a < 2 || res_phi < 2 {
        return Err(Error::Parameter(format!("grid resolution {res_a}x{res_phi} is below 2x2")));
    }
    if state.alpha() == 0.0 {
        return Err(Error::Normalization("cannot normalise the landscape by alpha = 0".into()));
    }
    let landscape = TopQubitLandscape::for_state(state);
    let a2 = state.alpha() * state.alpha();
    let a_ax = a_axis(res_a);
    let phi_ax = phi_axis(res_phi);
    let values = a_ax
        .iter()
        .flat_map(|&a| phi_ax.iter().map(move |&phi| (a, phi)))
        .map(|(a, phi)| landscape.distance(a, phi) / a2)
        .collect();
    Ok(LandscapeGrid {
        a_axis: a_ax,
        phi_axis: phi_ax,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{eigenphases, gates};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn jones_trace_u2_by_hand() -> Complex64 {
        Complex64::from_polar(3.0, -4.0 * PI / 5.0) + Complex64::from_polar(2.0, 2.0 * PI / 5.0) + 3.0
    }

    #[test]
    fn tau2_examples() {
        for n in 0..4 {
            assert!((tau2(&UnitaryOperator::identity(n)) - 1.0).abs() < 1e-15);
        }
        assert!((tau2(&gates::hadamard()) - 1.0).abs() < 1e-15);
        let jones = tau2(&gates::jones_unitary());
        let by_hand = jones_trace_u2_by_hand().norm() / 8.0;
        assert!((jones - by_hand).abs() < 1e-14);
        assert!((jones - 0.1499).abs() < 1e-4);
    }

    #[test]
    fn tau2_from_eigenphases() {
        let u = gates::rotation([0.2, 0.7, -0.1], 2.4).unwrap().with_global_phase(0.3);
        let sum: Complex64 = eigenphases(&u).unwrap().iter().map(|t| Complex64::from_polar(1.0, 2.0 * t)).sum();
        assert!((tau2(&u) - sum.norm() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn jones_closed_form() {
        let u = gates::jones_unitary();
        let g = gqd_closed_form(&u, 1.0).unwrap();
        assert!((g - 0.0266).abs() < 5e-5, "{g}");
        let thermal = gqd_closed_form(&u, 1.4e-5).unwrap();
        assert!((thermal - 5.2e-12).abs() < 0.05e-12, "{thermal}");
    }

    #[test]
    fn binary_observable_has_zero_gqd() {
        let g = gqd_closed_form(&gates::pauli_x().with_global_phase(0.37), 1.0).unwrap();
        assert!(g.abs() < 1e-16);
    }

    #[test]
    fn phi0_examples() {
        assert_eq!(optimal_phi0(&UnitaryOperator::identity(2)), Phi0 { phi: 0.0, degenerate: false });
        let s_gate = gates::diagonal_unitary(&[0.0, FRAC_PI_2]).unwrap();
        assert!(optimal_phi0(&s_gate).degenerate);
        let jones = optimal_phi0(&gates::jones_unitary());
        let expected = 0.5 * jones_trace_u2_by_hand().arg();
        assert!((jones.phi - expected).abs() < 1e-14);
        assert!((jones.phi - 0.058).abs() < 5e-4);
    }

    #[test]
    fn z_measurement_value() {
        let u = gates::jones_unitary();
        let alpha = 0.8;
        let s = Dqc1State::new(u, alpha).unwrap();
        for phi in [-1.0, 0.0, 0.4] {
            for a in [0.0, 1.0] {
                let g = g_landscape(&s, &MeasurementBasis::new(a, phi).unwrap());
                assert!((g - alpha * alpha / 16.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_polarisation_gives_flat_zero_landscape() {
        let s = Dqc1State::new(gates::jones_unitary(), 0.0).unwrap();
        assert!(g_landscape(&s, &MeasurementBasis::new(0.3, 1.0).unwrap()).abs() < 1e-18);
    }

    #[test]
    fn jones_at_the_optimum() {
        let s = Dqc1State::new(gates::jones_unitary(), 1.0).unwrap();
        let phi0 = optimal_phi0(s.unitary()).phi;
        let g = g_landscape(&s, &MeasurementBasis::new(FRAC_1_SQRT_2, phi0).unwrap());
        assert!((g - 0.0266).abs() < 5e-5);
        assert!((g - gqd_closed_form(s.unitary(), 1.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn three_routes_to_g_agree() {
        let u = gates::jones_unitary();
        let phases = eigenphases(&u).unwrap();
        let s = Dqc1State::new(u, 0.55).unwrap();
        let fast = TopQubitLandscape::for_state(&s);
        for &(a, phi) in &[(0.1, -1.3), (0.5, 0.2), (0.93, 1.5), (FRAC_1_SQRT_2, 0.058)] {
            let basis = MeasurementBasis::new(a, phi).unwrap();
            let matrix = g_landscape(&s, &basis);
            let cross = s.rho().purity() - s.rho().matrix().trace_of_product(&measure_top_qubit(s.rho().matrix(), &basis).unwrap()).re;
            assert!((matrix - cross).abs() < 1e-12);
            assert!((matrix - fast.distance(a, phi)).abs() < 1e-14);
            assert!((matrix - g_from_eigenphases(0.55, &phases, a, phi)).abs() < 1e-14);
        }
    }

    #[test]
    fn bruteforce_sigma_x_is_zero() {
        let s = Dqc1State::new(gates::pauli_x(), 1.0).unwrap();
        let m = gqd_bruteforce(&s, 64, true).unwrap();
        assert!(m.value.abs() < 1e-14);
    }

    #[test]
    fn bruteforce_jones() {
        let s = Dqc1State::new(gates::jones_unitary(), 1.0).unwrap();
        let m = gqd_bruteforce(&s, DEFAULT_GRID, true).unwrap();
        assert!((m.value - gqd_closed_form(s.unitary(), 1.0).unwrap()).abs() < 1e-12);
        assert!((m.a - FRAC_1_SQRT_2).abs() < 1e-6);
        assert!((m.phi - optimal_phi0(s.unitary()).phi).abs() < 1e-5);
        assert!(gqd_bruteforce(&s, 8, true).is_err());
    }

    #[test]
    fn report_fields() {
        let s = Dqc1State::new(gates::jones_unitary(), 0.5).unwrap();
        let r = gqd_report(&s, DEFAULT_GRID).unwrap();
        assert!(r.converged);
        assert_eq!(r.n, 3);
        assert!((r.gqd_closed_form - 0.25 * 0.0266).abs() < 2e-5);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("phi0_formula").is_some());
    }

    #[test]
    fn stationarity_jones() {
        let s = Dqc1State::new(gates::jones_unitary(), 1.0).unwrap();
        let check = stationarity_at_phi0(&s);
        assert!(check.stationary, "{check:?}");
        // The doubled angle is not stationary.
        let g = landscape_gradient(&s, FRAC_1_SQRT_2, 2.0 * check.phi0, 1e-4);
        assert!(g[1].abs() > 100.0 * check.tolerance);
    }

    #[test]
    fn grid_rows_at_poles_are_flat() {
        let s = Dqc1State::new(UnitaryOperator::identity(1), 1.0).unwrap();
        let grid = landscape_grid(&s, 3, 3).unwrap();
        for ia in [0, 2] {
            for ip in 0..3 {
                assert!((grid.value(ia, ip) - grid.value(ia, 0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_extremes_for_jones() {
        let s = Dqc1State::new(gates::jones_unitary(), 1.0).unwrap();
        let grid = landscape_grid(&s, 201, 201).unwrap();
        let (_, a, phi) = grid.min();
        assert!((a - FRAC_1_SQRT_2).abs() < 0.01);
        assert!((phi - 0.058).abs() < 0.02);
        // Global maximum: the z-measurement rows at α²/2^{n+1}.
        let (max, a_max, _) = grid.max();
        assert!((max - 1.0 / 16.0).abs() < 1e-15);
        assert!(a_max == 0.0 || a_max == 1.0);
    }

    #[test]
    fn transverse_slice_peaks_at_quarter_turn_from_phi0() {
        let s = Dqc1State::new(gates::jones_unitary(), 1.0).unwrap();
        let phi0 = optimal_phi0(s.unitary()).phi;
        let land = TopQubitLandscape::for_state(&s);
        let peak = land.distance(FRAC_1_SQRT_2, phi0 + FRAC_PI_2);
        let best_on_slice = phi_axis(2001).iter().map(|&p| land.distance(FRAC_1_SQRT_2, p)).fold(f64::MIN, f64::max);
        assert!(peak >= best_on_slice - 1e-15);
        assert!(best_on_slice > peak - 1e-8);
        let via_basis = g_landscape(&s, &MeasurementBasis::transverse(phi0 + FRAC_PI_2));
        assert!((via_basis - peak).abs() < 1e-14);
    }

    #[test]
    fn grid_errors() {
        let s = Dqc1State::new(gates::jones_unitary(), 0.0).unwrap();
        assert!(matches!(landscape_grid(&s, 4, 4), Err(Error::Normalization(_))));
        let s = Dqc1State::new(gates::jones_unitary(), 1.0).unwrap();
        assert!(matches!(landscape_grid(&s, 1, 4), Err(Error::Parameter(_))));
    }

    #[test]
    fn csv_layout() {
        let s = Dqc1State::new(gates::hadamard(), 1.0).unwrap();
        let grid = landscape_grid(&s, 2, 3).unwrap();
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "a,phi,g_over_alpha2");
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("0,"));
        assert!(lines[4].starts_with("1,"));
    }
}
