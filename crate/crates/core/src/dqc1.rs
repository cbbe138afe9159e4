//! DQC1 output states and projective measurements of the clean qubit.
//!
//! With the clean qubit at polarisation α and an n-qubit register that starts
//! maximally mixed, a Hadamard on the clean qubit followed by controlled-U
//! leaves the joint state
//!
//! ```text
//! ρ = 1/2^{n+1} · [[ I,  αU† ],
//!                  [ αU, I   ]]
//! ```
//!
//! Measurements on the clean qubit are the projector pairs onto
//! |ψ₊⟩ = a|0⟩ + b e^{iφ}|1⟩ and |ψ₋⟩ = b|0⟩ − a e^{iφ}|1⟩ with b = √(1−a²),
//! a ∈ [0, 1] and φ ∈ [−π/2, π/2].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::operator::{ComplexMatrix, DensityMatrix, UnitaryOperator};

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("polarisation alpha = {alpha} is outside [0, 1]")))
    }
}

/// Projective measurement of the clean qubit, parameterised by (a, φ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    a: f64,
    phi: f64,
}

impl MeasurementBasis {
    pub fn new(a: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !(-FRAC_PI_2..=FRAC_PI_2).contains(&phi) {
            return Err(Error::Parameter(format!(
                "basis (a = {a}, phi = {phi}) outside [0,1] x [-pi/2, pi/2]"
            )));
        }
        Ok(Self { a, phi })
    }

    /// Maps arbitrary (a, φ) onto the parameter domain describing the same
    /// projector pair. `a` is clamped to [0, 1]; φ is shifted by multiples of
    /// π using (a, φ + π) ≅ (b, φ) up to relabelling of the outcomes.
    pub fn canonical(a: f64, phi: f64) -> Self {
        let mut a = a.clamp(0.0, 1.0);
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi > PI {
            phi -= 2.0 * PI;
        }
        if phi > FRAC_PI_2 {
            phi -= PI;
            a = (1.0 - a * a).max(0.0).sqrt();
        } else if phi < -FRAC_PI_2 {
            phi += PI;
            a = (1.0 - a * a).max(0.0).sqrt();
        }
        Self { a, phi }
    }

    pub fn z_basis() -> Self {
        Self { a: 1.0, phi: 0.0 }
    }

    pub fn x_basis() -> Self {
        Self { a: FRAC_1_SQRT_2, phi: 0.0 }
    }

    pub fn y_basis() -> Self {
        Self { a: FRAC_1_SQRT_2, phi: FRAC_PI_2 }
    }

    /// Equatorial measurement at azimuth φ, wrapped into the domain.
    pub fn transverse(phi: f64) -> Self {
        Self::canonical(FRAC_1_SQRT_2, phi)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        (1.0 - self.a * self.a).max(0.0).sqrt()
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// (|ψ₊⟩, |ψ₋⟩).
    pub fn states(&self) -> ([Complex64; 2], [Complex64; 2]) {
        basis_states(self.a, self.phi)
    }
}

/// (|ψ₊⟩, |ψ₋⟩) for unconstrained parameters; `a` must lie in [0, 1].
pub(crate) fn basis_states(a: f64, phi: f64) -> ([Complex64; 2], [Complex64; 2]) {
    let b = (1.0 - a * a).max(0.0).sqrt();
    let e = Complex64::from_polar(1.0, phi);
    (
        [Complex64::new(a, 0.0), e * b],
        [Complex64::new(b, 0.0), -e * a],
    )
}

/// (Π₊, Π₋) = (|ψ₊⟩⟨ψ₊|, |ψ₋⟩⟨ψ₋|).
pub fn measurement_projectors(basis: &MeasurementBasis) -> (ComplexMatrix, ComplexMatrix) {
    let (plus, minus) = basis.states();
    (ComplexMatrix::outer(&plus, &plus), ComplexMatrix::outer(&minus, &minus))
}

/// Output state of a DQC1 run, together with the inputs that produced it.
#[derive(Debug, Clone)]
pub struct Dqc1State {
    alpha: f64,
    u: UnitaryOperator,
    rho: DensityMatrix,
}

impl Dqc1State {
    pub fn new(u: UnitaryOperator, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let d = u.dim();
        let norm = 1.0 / (2 * d) as f64;
        let um = u.matrix().inner();
        let m = DMatrix::from_fn(2 * d, 2 * d, |i, j| {
            let (bi, ri) = (i / d, i % d);
            let (bj, rj) = (j / d, j % d);
            let z = match (bi, bj) {
                (0, 0) | (1, 1) => {
                    if ri == rj {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }
                // upper-right block αU†
                (0, 1) => um[(rj, ri)].conj() * alpha,
                _ => um[(ri, rj)] * alpha,
            };
            z * norm
        });
        let rho = DensityMatrix::new(ComplexMatrix::from_inner(m))?;
        Ok(Self { alpha, u, rho })
    }

    /// Number of qubits in the bottom register.
    pub fn n(&self) -> usize {
        self.u.n_qubits()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn unitary(&self) -> &UnitaryOperator {
        &self.u
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    /// (1 + α²)/2^{n+1}.
    pub fn purity_formula(&self) -> f64 {
        (1.0 + self.alpha * self.alpha) / (2 * self.u.dim()) as f64
    }
}

pub fn build_dqc1_state(u: UnitaryOperator, alpha: f64) -> Result<Dqc1State> {
    Dqc1State::new(u, alpha)
}

#[derive(Serialize, Deserialize)]
struct Dqc1StateJson {
    n: usize,
    alpha: f64,
    unitary: UnitaryOperator,
}

impl Serialize for Dqc1State {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Dqc1StateJson {
            n: self.n(),
            alpha: self.alpha,
            unitary: self.u.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dqc1State {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Dqc1StateJson::deserialize(deserializer)?;
        if raw.n != raw.unitary.n_qubits() {
            return Err(D::Error::custom(format!(
                "n = {} but the unitary acts on {} qubits",
                raw.n,
                raw.unitary.n_qubits()
            )));
        }
        Dqc1State::new(raw.unitary, raw.alpha).map_err(D::Error::custom)
    }
}

/// Σ_± (Π± ⊗ I) ρ (Π± ⊗ I) on a state whose first tensor factor is a qubit,
/// formed with explicit Kronecker products.
pub fn measure_top_qubit(rho: &ComplexMatrix, basis: &MeasurementBasis) -> Result<ComplexMatrix> {
    let dim = rho.nrows();
    if !rho.is_square() || dim % 2 != 0 {
        return Err(Error::Dimension(format!(
            "expected a qubit ⊗ d state, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let id = ComplexMatrix::identity(dim / 2);
    let (p_plus, p_minus) = measurement_projectors(basis);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for p in [p_plus, p_minus] {
        let lifted = p.kron(&id)?;
        let term = &(&lifted * rho) * &lifted;
        out = &out + &term;
    }
    Ok(out)
}

/// Π^A(ρ) for a DQC1 state.
pub fn apply_measurement_channel(state: &Dqc1State, basis: &MeasurementBasis) -> Result<DensityMatrix> {
    DensityMatrix::new(measure_top_qubit(state.rho.matrix(), basis)?)
}

/// (⟨σ_x ⊗ I⟩, ⟨σ_y ⊗ I⟩) as traces against ρ.
pub fn dqc1_expectations(state: &Dqc1State) -> (f64, f64) {
    let m = state.rho.matrix().inner();
    let d = state.u.dim();
    // σ_x⊗I picks ρ_{01}+ρ_{10} blocks; σ_y⊗I picks i(ρ_{01} − ρ_{10}).
    let mut upper = Complex64::new(0.0, 0.0);
    let mut lower = Complex64::new(0.0, 0.0);
    for k in 0..d {
        upper += m[(k, d + k)];
        lower += m[(d + k, k)];
    }
    let ex = (upper + lower).re;
    let ey = (Complex64::new(0.0, 1.0) * (upper - lower)).re;
    (ex, ey)
}

/// (α/2ⁿ)·(Re Tr U, Im Tr U).
pub fn expectations_from_trace(u: &UnitaryOperator, alpha: f64) -> (f64, f64) {
    let t = u.trace() * (alpha / u.dim() as f64);
    (t.re, t.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{gates, partial_trace, tensor_product, Subsystem};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_full_polarisation() {
        let s = Dqc1State::new(UnitaryOperator::identity(1), 1.0).unwrap();
        let q = 0.25;
        let expected = ComplexMatrix::from_row_major(
            4,
            4,
            [1., 0., 1., 0., 0., 1., 0., 1., 1., 0., 1., 0., 0., 1., 0., 1.]
                .iter()
                .map(|&x| c(x * q))
                .collect(),
        )
        .unwrap();
        assert!(s.rho().matrix().max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn zero_polarisation_is_maximally_mixed() {
        let s = Dqc1State::new(gates::jones_unitary(), 0.0).unwrap();
        assert!(s.rho().matrix().max_abs_diff(DensityMatrix::maximally_mixed(16).matrix()) < 1e-16);
    }

    #[test]
    fn alpha_out_of_range() {
        assert!(matches!(Dqc1State::new(UnitaryOperator::identity(1), 1.5), Err(Error::Parameter(_))));
        assert!(matches!(Dqc1State::new(UnitaryOperator::identity(1), -0.1), Err(Error::Parameter(_))));
        assert!(Dqc1State::new(UnitaryOperator::identity(1), f64::NAN).is_err());
    }

    #[test]
    fn jones_purity() {
        let s = Dqc1State::new(gates::jones_unitary(), 1.0).unwrap();
        assert!((s.rho().purity() - 0.125).abs() < 1e-12);
        assert!((s.purity_formula() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn projector_examples() {
        let (p, m) = measurement_projectors(&MeasurementBasis::z_basis());
        assert_eq!(p, ComplexMatrix::from_diagonal(&[c(1.0), c(0.0)]));
        assert!(m.max_abs_diff(&ComplexMatrix::from_diagonal(&[c(0.0), c(1.0)])) < 1e-16);

        let s = FRAC_1_SQRT_2;
        let (p, _) = measurement_projectors(&MeasurementBasis::x_basis());
        let plus = ComplexMatrix::outer(&[c(s), c(s)], &[c(s), c(s)]);
        assert!(p.max_abs_diff(&plus) < 1e-15);

        let (p, _) = measurement_projectors(&MeasurementBasis::y_basis());
        let plus_i = [c(s), Complex64::new(0.0, s)];
        assert!(p.max_abs_diff(&ComplexMatrix::outer(&plus_i, &plus_i)) < 1e-15);
    }

    #[test]
    fn projectors_form_a_complete_orthogonal_pair() {
        for &(a, phi) in &[(0.0, 0.3), (0.31, -1.2), (0.8, FRAC_PI_2), (1.0, -FRAC_PI_2)] {
            let basis = MeasurementBasis::new(a, phi).unwrap();
            let (p, m) = measurement_projectors(&basis);
            let id = ComplexMatrix::identity(2);
            assert!((&p + &m).max_abs_diff(&id) < 1e-14);
            assert!((&p * &p).max_abs_diff(&p) < 1e-14);
            assert!((&m * &m).max_abs_diff(&m) < 1e-14);
            assert!((&p * &m).max_abs() < 1e-14);
        }
    }

    #[test]
    fn basis_domain_checked() {
        assert!(MeasurementBasis::new(1.1, 0.0).is_err());
        assert!(MeasurementBasis::new(0.5, 2.0).is_err());
        assert!(MeasurementBasis::new(0.5, -FRAC_PI_2).is_ok());
    }

    #[test]
    fn canonical_wrapping_preserves_the_projector_pair() {
        for &(a, phi) in &[(0.3, 2.0), (0.9, -2.5), (0.6, 7.0), (0.2, -4.0)] {
            let wrapped = MeasurementBasis::canonical(a, phi);
            assert!((-FRAC_PI_2..=FRAC_PI_2).contains(&wrapped.phi()));
            let (p, m) = {
                let (plus, minus) = basis_states(a, phi);
                (ComplexMatrix::outer(&plus, &plus), ComplexMatrix::outer(&minus, &minus))
            };
            let (wp, wm) = measurement_projectors(&wrapped);
            let same = p.max_abs_diff(&wp) < 1e-14 && m.max_abs_diff(&wm) < 1e-14;
            let swapped = p.max_abs_diff(&wm) < 1e-14 && m.max_abs_diff(&wp) < 1e-14;
            assert!(same || swapped, "({a}, {phi}) -> {wrapped:?}");
        }
    }

    #[test]
    fn z_measurement_kills_coherences() {
        let s = Dqc1State::new(gates::jones_unitary(), 0.7).unwrap();
        let out = apply_measurement_channel(&s, &MeasurementBasis::z_basis()).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(16).matrix()) < 1e-16);
    }

    #[test]
    fn maximally_mixed_is_a_fixed_point() {
        let s = Dqc1State::new(gates::hadamard(), 0.0).unwrap();
        let out = apply_measurement_channel(&s, &MeasurementBasis::new(0.4, 0.9).unwrap()).unwrap();
        assert!(out.matrix().max_abs_diff(s.rho().matrix()) < 1e-16);
    }

    #[test]
    fn cross_and_square_terms_agree_for_jones() {
        let s = Dqc1State::new(gates::jones_unitary(), 1.0).unwrap();
        let out = apply_measurement_channel(&s, &MeasurementBasis::x_basis()).unwrap();
        let cross = s.rho().matrix().trace_of_product(out.matrix()).re;
        let square = out.purity();
        assert!((cross - square).abs() < 1e-12);
    }

    #[test]
    fn channel_is_idempotent() {
        let s = Dqc1State::new(gates::rotation([0.1, 0.5, -0.3], 2.1).unwrap(), 0.83).unwrap();
        let basis = MeasurementBasis::new(0.37, -0.6).unwrap();
        let once = measure_top_qubit(s.rho().matrix(), &basis).unwrap();
        let twice = measure_top_qubit(&once, &basis).unwrap();
        assert!(once.max_abs_diff(&twice) < 1e-12);
    }

    #[test]
    fn channel_matches_block_expression() {
        // Blocks (scaled by 2^{n+1}): I ± αab(a²−b²)(e^{−iφ}U + e^{iφ}U†) on the
        // diagonal, 2αa²b²(e^{−2iφ}U + U†) upper-right, 2αa²b²(U + e^{2iφ}U†) lower-left.
        let u = gates::jones_unitary();
        let alpha = 0.9;
        let (a, phi) = (0.42, 0.77);
        let s = Dqc1State::new(u.clone(), alpha).unwrap();
        let out = measure_top_qubit(s.rho().matrix(), &MeasurementBasis::new(a, phi).unwrap()).unwrap();
        let b = (1.0 - a * a).sqrt();
        let um = u.matrix();
        let ud = um.adjoint();
        let e1 = Complex64::from_polar(1.0, phi);
        let e2 = Complex64::from_polar(1.0, 2.0 * phi);
        let id = ComplexMatrix::identity(8);
        let diag_term = &um.scale(e1.conj()) + &ud.scale(e1);
        let k1 = c(alpha * a * b * (a * a - b * b));
        let k2 = c(2.0 * alpha * a * a * b * b);
        let top_left = &id + &diag_term.scale(k1);
        let bottom_right = &id - &diag_term.scale(k1);
        let top_right = (&um.scale(e2.conj()) + &ud).scale(k2);
        let bottom_left = (um + &ud.scale(e2)).scale(k2);
        let scale = 1.0 / 16.0;
        for i in 0..8 {
            for j in 0..8 {
                assert!((out.get(i, j) - top_left.get(i, j) * scale).norm() < 1e-10);
                assert!((out.get(i, j + 8) - top_right.get(i, j) * scale).norm() < 1e-10);
                assert!((out.get(i + 8, j) - bottom_left.get(i, j) * scale).norm() < 1e-10);
                assert!((out.get(i + 8, j + 8) - bottom_right.get(i, j) * scale).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn measured_state_commutes_with_measured_observable() {
        let s = Dqc1State::new(gates::jones_unitary(), 0.6).unwrap();
        let basis = MeasurementBasis::new(0.55, 0.2).unwrap();
        let out = measure_top_qubit(s.rho().matrix(), &basis).unwrap();
        let (p, m) = measurement_projectors(&basis);
        let obs = tensor_product(&(&p - &m), &ComplexMatrix::identity(8)).unwrap();
        let comm = &(&out * &obs) - &(&obs * &out);
        assert!(comm.max_abs() < 1e-10);
    }

    #[test]
    fn expectation_examples() {
        let s = Dqc1State::new(UnitaryOperator::identity(1), 1.0).unwrap();
        let (ex, ey) = dqc1_expectations(&s);
        assert!((ex - 1.0).abs() < 1e-15 && ey.abs() < 1e-15);

        let s = Dqc1State::new(gates::pauli_z(), 1.0).unwrap();
        let (ex, ey) = dqc1_expectations(&s);
        assert!(ex.abs() < 1e-15 && ey.abs() < 1e-15);

        let u = gates::jones_unitary();
        let w = Complex64::from_polar(1.0, -12.0 * PI / 5.0);
        let cc = -w;
        let dd = Complex64::from_polar(1.0, -24.0 * PI / 5.0);
        let expected = (cc * 3.0 + dd * 2.0 + 3.0) / 8.0;
        let s = Dqc1State::new(u.clone(), 1.0).unwrap();
        let (ex, ey) = dqc1_expectations(&s);
        assert!((ex - expected.re).abs() < 1e-12);
        assert!((ey - expected.im).abs() < 1e-12);
        let (tx, ty) = expectations_from_trace(&u, 1.0);
        assert!((ex - tx).abs() < 1e-12 && (ey - ty).abs() < 1e-12);
    }

    #[test]
    fn expectations_match_explicit_pauli_traces() {
        let u = gates::rotation([0.3, 0.3, 0.9], 0.8).unwrap().compose(&gates::hadamard()).unwrap();
        let s = Dqc1State::new(u, 0.45).unwrap();
        let id = ComplexMatrix::identity(2);
        let sx = tensor_product(gates::pauli_x().matrix(), &id).unwrap();
        let sy = tensor_product(gates::pauli_y().matrix(), &id).unwrap();
        let (ex, ey) = dqc1_expectations(&s);
        assert!((s.rho().matrix().trace_of_product(&sx).re - ex).abs() < 1e-14);
        assert!((s.rho().matrix().trace_of_product(&sy).re - ey).abs() < 1e-14);
    }

    #[test]
    fn clean_qubit_bloch_vector() {
        let u = gates::jones_unitary();
        let alpha = 0.65;
        let s = Dqc1State::new(u.clone(), alpha).unwrap();
        let top = partial_trace(s.rho(), [2, 8], Subsystem::A).unwrap();
        let m = top.matrix();
        let bloch = [2.0 * m.get(0, 1).re, -2.0 * m.get(0, 1).im, (m.get(0, 0) - m.get(1, 1)).re];
        let (tx, ty) = expectations_from_trace(&u, alpha);
        assert!((bloch[0] - tx).abs() < 1e-12);
        assert!((bloch[1] - ty).abs() < 1e-12);
        assert!(bloch[2].abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_reconstructs_rho() {
        let s = Dqc1State::new(gates::jones_unitary(), 0.3).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["n"], 3);
        assert!(v.get("rho").is_none());
        let back: Dqc1State = serde_json::from_str(&text).unwrap();
        assert_eq!(back.rho().matrix(), s.rho().matrix());
    }
}
