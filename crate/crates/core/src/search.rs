//! Minimisation over clean-qubit measurements: a uniform grid on
//! [0, 1] × [−π/2, π/2] followed by damped Newton polishing with
//! finite-difference derivatives.
//!
//! Objectives are called with unconstrained φ (the projectors are smooth and
//! 2π-periodic in φ) and with a ∈ [0, 1]. The reported optimum is mapped back
//! into the domain with [`MeasurementBasis::canonical`].

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::dqc1::MeasurementBasis;
use crate::error::{Error, Result};

/// Finite-difference step for gradients and Hessians.
pub const FD_STEP: f64 = 1e-4;
const MAX_NEWTON_ITERS: usize = 60;
const MAX_HALVINGS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisMinimum {
    pub value: f64,
    pub a: f64,
    pub phi: f64,
}

impl BasisMinimum {
    pub fn basis(&self) -> MeasurementBasis {
        MeasurementBasis::canonical(self.a, self.phi)
    }
}

/// `res` evenly spaced values of a over [0, 1].
pub fn a_axis(res: usize) -> Vec<f64> {
    linspace(0.0, 1.0, res)
}

/// `res` evenly spaced values of φ over [−π/2, π/2].
pub fn phi_axis(res: usize) -> Vec<f64> {
    linspace(-FRAC_PI_2, FRAC_PI_2, res)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// Grid minimum of `f` on a `grid_n × grid_n` grid, optionally polished.
///
/// Among grid points whose values tie with the minimum (to within a few ulps
/// of the landscape scale) the lexicographically smallest (a, φ) wins.
pub fn minimize_over_bases<F>(f: F, grid_n: usize, refine: bool) -> Result<BasisMinimum>
where
    F: Fn(f64, f64) -> f64,
{
    if grid_n < 2 {
        return Err(Error::Parameter(format!("grid resolution {grid_n} is below 2")));
    }
    let a_ax = a_axis(grid_n);
    let phi_ax = phi_axis(grid_n);
    let mut values = Vec::with_capacity(grid_n * grid_n);
    for &a in &a_ax {
        for &phi in &phi_ax {
            values.push(f(a, phi));
        }
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("objective returned {bad} on the grid")));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tie = 64.0 * f64::EPSILON * scale;
    let idx = values.iter().position(|&v| v <= lo + tie).expect("non-empty grid");
    let start = BasisMinimum {
        value: values[idx],
        a: a_ax[idx / grid_n],
        phi: phi_ax[idx % grid_n],
    };
    let best = if refine {
        let spacing = (1.0 / (grid_n - 1) as f64, PI / (grid_n - 1) as f64);
        polish(&f, start, spacing)
    } else {
        start
    };
    let basis = MeasurementBasis::canonical(best.a, best.phi);
    Ok(BasisMinimum {
        value: best.value,
        a: basis.a(),
        phi: basis.phi(),
    })
}

fn polish<F>(f: &F, start: BasisMinimum, spacing: (f64, f64)) -> BasisMinimum
where
    F: Fn(f64, f64) -> f64,
{
    let h = FD_STEP;
    let mut cur = start;
    for _ in 0..MAX_NEWTON_ITERS {
        let BasisMinimum { value: v, a, phi } = cur;
        let a_free = a - h >= 0.0 && a + h <= 1.0;

        let fp_plus = f(a, phi + h);
        let fp_minus = f(a, phi - h);
        let gp = (fp_plus - fp_minus) / (2.0 * h);
        let hpp = (fp_plus - 2.0 * v + fp_minus) / (h * h);

        let (ga, haa, hap) = if a_free {
            let fa_plus = f(a + h, phi);
            let fa_minus = f(a - h, phi);
            let cross = (f(a + h, phi + h) - f(a + h, phi - h) - f(a - h, phi + h) + f(a - h, phi - h)) / (4.0 * h * h);
            ((fa_plus - fa_minus) / (2.0 * h), (fa_plus - 2.0 * v + fa_minus) / (h * h), cross)
        } else {
            (0.0, 0.0, 0.0)
        };

        // Second differences carry O(ε·|v|/h²) noise; curvature below this is
        // treated as flat and that coordinate is left alone.
        let floor = 1e-6 * v.abs().max(f64::MIN_POSITIVE);
        let a_curved = a_free && haa > floor;
        let p_curved = hpp > floor;
        let det = haa * hpp - hap * hap;
        let (mut da, mut dp) = if a_curved && p_curved && det > floor * floor {
            ((-hpp * ga + hap * gp) / det, (hap * ga - haa * gp) / det)
        } else {
            (
                if a_curved { -ga / haa } else { 0.0 },
                if p_curved { -gp / hpp } else { 0.0 },
            )
        };
        da = da.clamp(-2.0 * spacing.0, 2.0 * spacing.0);
        dp = dp.clamp(-2.0 * spacing.1, 2.0 * spacing.1);
        if da.abs() < 1e-14 && dp.abs() < 1e-14 {
            break;
        }

        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let na = (a + da).clamp(0.0, 1.0);
            let np = phi + dp;
            let nv = f(na, np);
            if nv.is_finite() && nv <= v {
                accepted = Some(BasisMinimum { value: nv, a: na, phi: np });
                break;
            }
            da *= 0.5;
            dp *= 0.5;
        }
        match accepted {
            Some(next) => {
                let moved = (next.a - a).abs().max((next.phi - phi).abs());
                cur = next;
                if moved < 1e-13 {
                    break;
                }
            }
            None => break,
        }
    }
    cur
}
