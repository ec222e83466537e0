//! Second-moment equations of the dipole oscillator.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::generator::CoarseGrainedGenerator;
use crate::linalg::C64;

/// Generator data of the dipole oscillator (index order `(a, a†)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QhoParams {
    /// `ω0 + η₋₋ + η₊₊`
    pub omega_bar: f64,
    /// `η₊₋^(Δt)`, coefficient of `a†²` in the Lamb shift
    pub eta_pm: C64,
    pub gamma_mm: f64,
    pub gamma_pp: f64,
    /// `γ₊₋^(Δt)`
    pub gamma_pm: C64,
}

impl QhoParams {
    pub fn from_generator(gen: &CoarseGrainedGenerator, omega0: f64) -> Result<Self> {
        if gen.n_indices() != 2 || gen.index_map[0].1 >= 0.0 || gen.index_map[1].1 <= 0.0 {
            return Err(Error::Configuration("expected the gap pair (-omega0, +omega0) on one channel".into()));
        }
        Ok(Self {
            omega_bar: omega0 + gen.eta[(0, 0)].re + gen.eta[(1, 1)].re,
            eta_pm: gen.eta[(1, 0)],
            gamma_mm: gen.gamma[(0, 0)].re,
            gamma_pp: gen.gamma[(1, 1)].re,
            gamma_pm: gen.gamma[(1, 0)],
        })
    }

    /// Drift matrix on `(Re⟨a²⟩, Im⟨a²⟩, ⟨a†a⟩, 1)`.
    fn drift(&self) -> Matrix4<f64> {
        let damp = self.gamma_pp - self.gamma_mm;
        let (er, ei) = (self.eta_pm.re, self.eta_pm.im);
        let w = self.omega_bar;
        Matrix4::new(
            -damp, 2.0 * w, 4.0 * ei, 2.0 * ei - self.gamma_pm.re,
            -2.0 * w, -damp, -4.0 * er, -2.0 * er - self.gamma_pm.im,
            4.0 * ei, -4.0 * er, -damp, self.gamma_mm,
            0.0, 0.0, 0.0, 0.0,
        )
    }

    /// Fixed point `(⟨a²⟩, ⟨a†a⟩)` of the moment equations.
    pub fn stationary(&self) -> Result<(C64, f64)> {
        let m = self.drift();
        let a = m.fixed_view::<3, 3>(0, 0).into_owned();
        let b = -m.fixed_view::<3, 1>(0, 3).into_owned();
        let x = a
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::Domain("moment equations have no unique fixed point".into()))?;
        Ok((C64::new(x[0], x[1]), x[2]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPoint {
    pub t: f64,
    /// `⟨a²⟩`
    pub a2: C64,
    /// `⟨a†a⟩`
    pub n: f64,
}

/// Solve
/// `d⟨a²⟩/dt = −2i(ω̄⟨a²⟩ + 2η₊₋⟨a†a⟩ + η₊₋) − γ₊₋ − (γ₊₊ − γ₋₋)⟨a²⟩`,
/// `d⟨a†a⟩/dt = 2i(η₋₊⟨a²⟩ − η₊₋⟨a²⟩*) − (γ₊₊ − γ₋₋)⟨a†a⟩ + γ₋₋`
/// exactly through the exponential of the augmented real drift matrix.
pub fn qho_moments(p: &QhoParams, a2_0: C64, n_0: f64, times: &[f64]) -> Result<Vec<MomentPoint>> {
    super::check_times(times)?;
    if !(n_0 >= 0.0) {
        return Err(Error::validation("n_0", "occupation must be non-negative"));
    }
    let m = p.drift();
    let x0 = nalgebra::Vector4::new(a2_0.re, a2_0.im, n_0, 1.0);
    Ok(times
        .iter()
        .map(|&t| {
            let x = (m * t).exp() * x0;
            MomentPoint {
                t,
                a2: C64::new(x[0], x[1]),
                n: x[2],
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn secular_relaxes_to_thermal_occupation() {
        let p = QhoParams {
            omega_bar: 1.02,
            eta_pm: C64::new(0.0, 0.0),
            gamma_mm: 0.02,
            gamma_pp: 0.12,
            gamma_pm: C64::new(0.0, 0.0),
        };
        let pts = qho_moments(&p, C64::new(0.0, 0.0), 0.0, &[0.0, 5.0, 400.0]).unwrap();
        assert_eq!(pts[0].n, 0.0);
        assert!(pts.iter().all(|x| x.a2.norm() == 0.0));
        assert!((pts[2].n - 0.2).abs() < 1e-12);
        assert!((p.stationary().unwrap().1 - 0.2).abs() < 1e-14);
        // ⟨a†a⟩(t) = n∞(1 − e^{−κt}) with κ = γ₊₊ − γ₋₋
        assert!((pts[1].n - 0.2 * (1.0 - (-0.5f64).exp())).abs() < 1e-14);
    }
}
