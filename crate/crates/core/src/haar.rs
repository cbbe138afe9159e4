//! Haar-random unitaries and the typicality of geometric discord.
//!
//! Sampling QR-factorises a matrix of i.i.d. standard complex Gaussians and
//! multiplies Q by the phases of R's diagonal. Without that phase correction
//! the distribution of Q depends on the QR implementation and is not Haar.
//!
//! Randomness comes from ChaCha20 keyed by the user seed. Every sample draws
//! from its own stream, `(n << 32) | index`, so any partition of the samples
//! across workers reproduces the same values.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometric::{gqd_ceiling, gqd_closed_form, tau2};
use crate::operator::{ComplexMatrix, UnitaryOperator};

pub const MAX_QUBITS: usize = 10;
pub const MIN_STUDY_SAMPLES: usize = 30;
/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 2012;
pub const RNG_ALGORITHM: &str = "chacha20/seed_from_u64/stream=(n<<32)|sample";

/// Generator for sample `index` of the n-qubit ensemble under `seed`.
pub fn sample_rng(seed: u64, n: usize, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | index);
    rng
}

fn check_qubits(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("Haar sampling supports 1..={MAX_QUBITS} qubits, got {n}")))
    }
}

/// A Haar-distributed n-qubit unitary, fixed by `seed`.
pub fn sample_haar_unitary(n: usize, seed: u64) -> Result<UnitaryOperator> {
    check_qubits(n)?;
    sample_haar_with_rng(n, &mut sample_rng(seed, n, 0))
}

pub fn sample_haar_with_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<UnitaryOperator> {
    check_qubits(n)?;
    let dim = 1usize << n;
    let mut gaussian = || -> f64 { rng.sample(StandardNormal) };
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        entries.push(Complex64::new(gaussian(), gaussian()) * FRAC_1_SQRT_2);
    }
    let z = DMatrix::from_row_slice(dim, dim, &entries);
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        let phase = if norm > 0.0 { rjj / norm } else { Complex64::new(1.0, 0.0) };
        col *= phase;
    }
    UnitaryOperator::new(ComplexMatrix::new(q)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub n: usize,
    pub samples: usize,
    pub alpha: f64,
    pub tau2_mean: f64,
    pub tau2_std: f64,
    pub gqd_mean: f64,
    /// Mean of GQD/((α/2)²·2⁻ⁿ), i.e. of 1 − τ₂.
    pub gqd_over_max_mean: f64,
    pub seed: u64,
    pub rng: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau2_samples: Option<Vec<f64>>,
}

/// Per-n statistics of τ₂ and geometric discord over Haar-random unitaries.
pub fn typicality_study(n_range: &[usize], samples: usize, alpha: f64, seed: u64, keep_samples: bool) -> Result<Vec<EnsembleStats>> {
    typicality_study_with(n_range, samples, alpha, seed, keep_samples, sample_haar_with_rng)
}

/// As [`typicality_study`], drawing unitaries from `source` instead of the Haar sampler.
pub fn typicality_study_with<F>(n_range: &[usize], samples: usize, alpha: f64, seed: u64, keep_samples: bool, mut source: F) -> Result<Vec<EnsembleStats>>
where
    F: FnMut(usize, &mut ChaCha20Rng) -> Result<UnitaryOperator>,
{
    if samples < MIN_STUDY_SAMPLES {
        return Err(Error::Parameter(format!("typicality study needs at least {MIN_STUDY_SAMPLES} samples, got {samples}")));
    }
    let mut out = Vec::with_capacity(n_range.len());
    for &n in n_range {
        check_qubits(n)?;
        let mut taus = Vec::with_capacity(samples);
        let mut gqd_sum = 0.0;
        for i in 0..samples {
            let u = source(n, &mut sample_rng(seed, n, i as u64))?;
            if u.n_qubits() != n {
                return Err(Error::Dimension(format!("source produced {} qubits, expected {n}", u.n_qubits())));
            }
            taus.push(tau2(&u));
            gqd_sum += gqd_closed_form(&u, alpha)?;
        }
        let m = samples as f64;
        let tau2_mean = taus.iter().sum::<f64>() / m;
        let var = taus.iter().map(|t| (t - tau2_mean).powi(2)).sum::<f64>() / (m - 1.0);
        let gqd_mean = gqd_sum / m;
        let ceiling = gqd_ceiling(n, alpha);
        out.push(EnsembleStats {
            n,
            samples,
            alpha,
            tau2_mean,
            tau2_std: var.sqrt(),
            gqd_mean,
            gqd_over_max_mean: if ceiling > 0.0 { gqd_mean / ceiling } else { 0.0 },
            seed,
            rng: RNG_ALGORITHM.to_string(),
            tau2_samples: keep_samples.then_some(taus),
        });
    }
    Ok(out)
}

/// Least-squares slope of log₂(mean GQD) against n.
pub fn log2_gqd_slope(stats: &[EnsembleStats]) -> Result<f64> {
    if stats.len() < 2 {
        return Err(Error::Parameter("slope needs at least two qubit counts".into()));
    }
    if let Some(s) = stats.iter().find(|s| s.gqd_mean.is_nan() || s.gqd_mean <= 0.0) {
        return Err(Error::Numeric(format!("mean GQD at n = {} is {}, log undefined", s.n, s.gqd_mean)));
    }
    let pts: Vec<(f64, f64)> = stats.iter().map(|s| (s.n as f64, s.gqd_mean.log2())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Parameter("slope needs distinct qubit counts".into()));
    }
    Ok(sxy / sxx)
}

#[derive(Serialize)]
struct StudyRow {
    n: usize,
    samples: usize,
    tau2_mean: f64,
    tau2_std: f64,
    gqd_over_max_mean: f64,
    seed: u64,
}

/// CSV with columns `n,samples,tau2_mean,tau2_std,gqd_over_max_mean,seed`.
pub fn write_study_csv<W: Write>(stats: &[EnsembleStats], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in stats {
        w.serialize(StudyRow {
            n: s.n,
            samples: s.samples,
            tau2_mean: s.tau2_mean,
            tau2_std: s.tau2_std,
            gqd_over_max_mean: s.gqd_over_max_mean,
            seed: s.seed,
        })?;
    }
    w.flush()?;
    Ok(())
}
