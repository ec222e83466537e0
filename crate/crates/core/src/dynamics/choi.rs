//! Choi-Jamiołkowski states of the evolution map.

use super::{check_times, propagate, Propagator, QubitParams};
use crate::error::Result;
use crate::generator::Liouvillian;
use crate::linalg::{self, CMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiTrajectory {
    pub times: Vec<f64>,
    pub choi_states: Vec<CMatrix>,
    /// ascending eigenvalues per time
    pub eigenvalues: Vec<Vec<f64>>,
}

impl ChoiTrajectory {
    pub fn min_eigenvalue(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e[0]).collect()
    }
}

/// `(1/d) Σ_ij Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|`, with the ancilla as the outer (block) index.
pub fn choi_state(images: &[Vec<CMatrix>], d: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            out.view_mut((i * d, j * d), (d, d))
                .copy_from(&(&images[i][j] / C64::new(d as f64, 0.0)));
        }
    }
    out
}

/// Evolve the `d²` matrix units and assemble the Choi state at each time.
pub fn choi_evolution(l: &Liouvillian, times: &[f64]) -> Result<ChoiTrajectory> {
    check_times(times)?;
    let d = l.dim;
    let prop = Propagator::new(l);
    let mut runs: Vec<Vec<Vec<CMatrix>>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let mut unit = CMatrix::zeros(d, d);
            unit[(i, j)] = C64::new(1.0, 0.0);
            row.push(propagate(&prop, &unit, times)?);
        }
        runs.push(row);
    }
    let mut choi_states = Vec::with_capacity(times.len());
    let mut eigenvalues = Vec::with_capacity(times.len());
    for k in 0..times.len() {
        let images: Vec<Vec<CMatrix>> = runs
            .iter()
            .map(|row| row.iter().map(|run| run[k].clone()).collect())
            .collect();
        let state = choi_state(&images, d);
        eigenvalues.push(linalg::hermitian_eigenvalues(&linalg::hermitize(&state)));
        choi_states.push(state);
    }
    Ok(ChoiTrajectory {
        times: times.to_vec(),
        choi_states,
        eigenvalues,
    })
}

/// Closed-form Choi eigenvalue of the dipole qubit that starts at zero:
/// `¼[1 − e^{−st} − (√2/s) e^{−st/2} √(d²(cosh st − 1) + 2|γ₋₊|² s² (sin ω̄_Δt t / ω̄_Δt)²)]`.
/// It is the smallest eigenvalue at short times.
pub fn choi_eigenvalue_analytic(p: &QubitParams, t: f64) -> f64 {
    let (s, d) = (p.s(), p.d());
    if s == 0.0 {
        return 0.0;
    }
    let (_, sinc) = p.oscillation(t);
    let radicand = d * d * ((s * t).cosh() - 1.0) + 2.0 * p.gamma_mp.norm_sqr() * s * s * sinc * sinc;
    0.25 * (-(-s * t).exp_m1() - std::f64::consts::SQRT_2 / s * (-s * t / 2.0).exp() * radicand.max(0.0).sqrt())
}
