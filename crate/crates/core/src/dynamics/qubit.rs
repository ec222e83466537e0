//! Closed-form qubit solution from `|+⟩⟨+|`.

use crate::error::{Error, Result};
use crate::generator::CoarseGrainedGenerator;
use crate::linalg::{c, CMatrix, C64};

/// Generator data of the dipole qubit (basis index 0 is the ground state).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    /// renormalized splitting `ω0 + η₊₊ − η₋₋`
    pub omega_bar: f64,
    pub gamma_mm: f64,
    pub gamma_pp: f64,
    /// `γ₋₊^(Δt)`
    pub gamma_mp: C64,
}

impl QubitParams {
    /// Read the parameters off a two-gap, single-channel generator with
    /// index order `(−ω0, +ω0)`.
    pub fn from_generator(gen: &CoarseGrainedGenerator, omega0: f64) -> Result<Self> {
        if gen.n_indices() != 2 || gen.index_map[0].1 >= 0.0 || gen.index_map[1].1 <= 0.0 {
            return Err(Error::Configuration("expected the gap pair (-omega0, +omega0) on one channel".into()));
        }
        Ok(Self {
            omega_bar: omega0 + gen.eta[(1, 1)].re - gen.eta[(0, 0)].re,
            gamma_mm: gen.gamma[(0, 0)].re,
            gamma_pp: gen.gamma[(1, 1)].re,
            gamma_mp: gen.gamma[(0, 1)],
        })
    }

    /// `s = γ₊₊ + γ₋₋`
    pub fn s(&self) -> f64 {
        self.gamma_pp + self.gamma_mm
    }

    /// `d = γ₊₊ − γ₋₋`
    pub fn d(&self) -> f64 {
        self.gamma_pp - self.gamma_mm
    }

    /// `ω̄_Δt² = ω̄² − |γ₋₊|²`, negative in the overdamped regime.
    pub fn omega_dt_squared(&self) -> f64 {
        self.omega_bar * self.omega_bar - self.gamma_mp.norm_sqr()
    }

    /// `(cos(ω̄_Δt t), sin(ω̄_Δt t)/ω̄_Δt)`, continued to `cosh`/`sinh` when
    /// `ω̄_Δt²` is negative.
    pub(crate) fn oscillation(&self, t: f64) -> (f64, f64) {
        let w2 = self.omega_dt_squared();
        if w2 > 0.0 {
            let w = w2.sqrt();
            ((w * t).cos(), (w * t).sin() / w)
        } else if w2 < 0.0 {
            let w = (-w2).sqrt();
            ((w * t).cosh(), (w * t).sinh() / w)
        } else {
            (1.0, t)
        }
    }
}

/// `ρ(t)` starting from `|+⟩⟨+|`.
pub fn qubit_analytic(p: &QubitParams, t: f64) -> CMatrix {
    let (s, d) = (p.s(), p.d());
    let (cos, sinc) = p.oscillation(t);
    let decay = (-s * t / 2.0).exp();
    let re10 = 0.5 * decay * (p.gamma_mp.re * sinc + cos);
    let im10 = -0.5 * decay * (p.gamma_mp.im + p.omega_bar) * sinc;
    let rho00 = if s == 0.0 {
        0.5
    } else {
        (-d * (-s * t).exp() + 2.0 * p.gamma_pp) / (2.0 * s)
    };
    let mut rho = CMatrix::zeros(2, 2);
    rho[(0, 0)] = c(rho00, 0.0);
    rho[(1, 1)] = c(1.0 - rho00, 0.0);
    rho[(1, 0)] = c(re10, im10);
    rho[(0, 1)] = c(re10, -im10);
    rho
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_condition() {
        let p = QubitParams {
            omega_bar: 1.1,
            gamma_mm: 0.1,
            gamma_pp: 0.5,
            gamma_mp: c(0.2, -0.3),
        };
        let rho = qubit_analytic(&p, 0.0);
        assert!((rho - CMatrix::from_element(2, 2, c(0.5, 0.0))).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn secular_case_is_damped_rotation() {
        let p = QubitParams {
            omega_bar: 1.3,
            gamma_mm: 0.1,
            gamma_pp: 0.5,
            gamma_mp: c(0.0, 0.0),
        };
        let t = 2.7;
        let rho = qubit_analytic(&p, t);
        let expect = c((-1.3 * t).cos(), (-1.3 * t).sin()) * (0.5 * (-0.3 * t).exp());
        assert!((rho[(1, 0)] - expect).norm() < 1e-15);
        assert!((qubit_analytic(&p, 1e3)[(0, 0)].re - 0.5 / 0.6).abs() < 1e-12);
    }

    #[test]
    fn continuation_is_smooth_across_critical_damping() {
        let base = QubitParams {
            omega_bar: 1.0,
            gamma_mm: 0.2,
            gamma_pp: 0.9,
            gamma_mp: c(0.0, 1.0),
        };
        let nudge = |dw: f64| QubitParams {
            omega_bar: 1.0 + dw,
            ..base
        };
        let (a, b, m) = (qubit_analytic(&nudge(1e-9), 3.0), qubit_analytic(&nudge(-1e-9), 3.0), qubit_analytic(&base, 3.0));
        assert!((a[(1, 0)] - m[(1, 0)]).norm() < 1e-8);
        assert!((b[(1, 0)] - m[(1, 0)]).norm() < 1e-8);
    }
}
