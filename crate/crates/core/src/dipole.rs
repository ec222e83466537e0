//! Single-mode dipole models: a qubit or a truncated oscillator coupled
//! through `ζ + ζ†` to a bosonic or fermionic bath.

use serde::{Deserialize, Serialize};

use crate::bath::{dipole_omega_from_terms, BathSpec, DecayRate, DipoleTerms, OmegaProvider, Statistics};
use crate::error::{Error, Result};
use crate::generator::{build_generator, liouvillian, sinc_inverse, CoarseGrainedGenerator, CoarseGraining, DeltaT, Liouvillian};
use crate::linalg::{self, CMatrix};
use crate::spectral::{annihilation, decompose, sigma_minus, GapDecomposition, SpectralDecomposition, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Qubit,
    Oscillator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DipoleModel {
    pub system: SystemKind,
    pub statistics: Statistics,
    pub omega0: f64,
    pub beta: f64,
    pub decay: DecayRate,
    /// number of ladder levels kept (oscillator only)
    pub n_max: usize,
    pub coarse_graining: CoarseGraining,
    /// upper limit of the bath integrals; defaults to the decay rate's own
    pub integration_cutoff: Option<f64>,
}

impl DipoleModel {
    /// Qubit with an ohmic decay rate.
    pub fn qubit(statistics: Statistics, omega0: f64, beta: f64, kappa0: f64, omega_c: f64) -> Result<Self> {
        Self {
            system: SystemKind::Qubit,
            statistics,
            omega0,
            beta,
            decay: DecayRate::ohmic(kappa0, omega_c)?,
            n_max: 2,
            coarse_graining: CoarseGraining::secular(),
            integration_cutoff: None,
        }
        .validated()
    }

    /// Oscillator truncated to `n_max` levels with an ohmic decay rate.
    pub fn oscillator(
        statistics: Statistics,
        omega0: f64,
        beta: f64,
        kappa0: f64,
        omega_c: f64,
        n_max: usize,
    ) -> Result<Self> {
        Self {
            system: SystemKind::Oscillator,
            statistics,
            omega0,
            beta,
            decay: DecayRate::ohmic(kappa0, omega_c)?,
            n_max,
            coarse_graining: CoarseGraining::secular(),
            integration_cutoff: None,
        }
        .validated()
    }

    pub fn with_coarse_graining(mut self, cg: CoarseGraining) -> Self {
        self.coarse_graining = cg;
        self
    }

    pub fn with_sinc(self, sinc: f64) -> Self {
        self.with_coarse_graining(CoarseGraining::Sinc(sinc))
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(Error::validation("omega0", "must be positive and finite"));
        }
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(Error::validation("beta", "must be >= 0"));
        }
        if self.system == SystemKind::Oscillator && self.n_max < 2 {
            return Err(Error::validation("n_max", "oscillator needs at least 2 levels"));
        }
        if let CoarseGraining::Sinc(s) = self.coarse_graining {
            if !(-1.0..=1.0).contains(&s) {
                return Err(Error::validation("sinc", format!("{s} is outside [-1, 1]")));
            }
        }
        Ok(self)
    }

    pub fn bath(&self) -> Result<BathSpec> {
        let cutoff = self.integration_cutoff.unwrap_or_else(|| self.decay.default_cutoff());
        BathSpec::with_cutoff(self.statistics, self.beta, self.decay.clone(), cutoff)
    }

    /// Cross-gap weight `sinc(ω0Δt)` actually applied.
    pub fn sinc_value(&self) -> f64 {
        self.coarse_graining.weight(-self.omega0, self.omega0)
    }

    /// `Δt` on the principal branch giving the sinc weight `s ∈ [0, 1]`.
    pub fn delta_t_for_sinc(&self, s: f64) -> Result<DeltaT> {
        DeltaT::new(sinc_inverse(s)? / self.omega0)
    }

    /// `H_S = ω0 ζ†ζ` and the single coupling `ζ + ζ†`.
    pub fn system_spec(&self) -> Result<SystemSpec> {
        let zeta = match self.system {
            SystemKind::Qubit => sigma_minus(),
            SystemKind::Oscillator => annihilation(self.n_max),
        };
        let h = (zeta.adjoint() * &zeta) * linalg::r(self.omega0);
        let coupling = &zeta + zeta.adjoint();
        SystemSpec::new(h, vec![coupling])
    }

    /// The lowering operator `ζ`.
    pub fn lowering(&self) -> CMatrix {
        match self.system {
            SystemKind::Qubit => sigma_minus(),
            SystemKind::Oscillator => annihilation(self.n_max),
        }
    }
}

/// Every stage of the dipole pipeline.
#[derive(Debug, Clone)]
pub struct DipoleBuild {
    pub spec: SystemSpec,
    pub spectral: SpectralDecomposition,
    pub gaps: GapDecomposition,
    pub terms: DipoleTerms,
    pub omega: OmegaProvider,
    pub generator: CoarseGrainedGenerator,
    pub liouvillian: Liouvillian,
}

pub fn build_dipole(model: &DipoleModel) -> Result<DipoleBuild> {
    let model = model.clone().validated()?;
    let spec = model.system_spec()?;
    let (spectral, gaps) = decompose(&spec)?;
    let terms = DipoleTerms::compute(&model.bath()?, model.omega0)?;
    let omega = dipole_omega_from_terms(&terms);
    let mut generator = build_generator(&gaps, &omega, model.coarse_graining)?;
    if model.system == SystemKind::Oscillator {
        generator.lamb_shift = ladder_lamb_shift(&model, &omega)?;
    }
    let liouvillian = liouvillian(&spec, &generator, &gaps)?;
    Ok(DipoleBuild {
        spec,
        spectral,
        gaps,
        terms,
        omega,
        generator,
        liouvillian,
    })
}

/// Lamb shift of the oscillator with the products `A_i A_j†` formed one level
/// above the cut and then projected back, so `a a† = N + 1` holds on every
/// kept level. The truncated product loses the top level and breaks the
/// `H_S` covariance of `H_LS` there.
fn ladder_lamb_shift(model: &DipoleModel, omega: &OmegaProvider) -> Result<CMatrix> {
    let n = model.n_max;
    let mut wide = model.clone();
    wide.n_max = n + 1;
    let (_, gaps) = decompose(&wide.system_spec()?)?;
    let generator = build_generator(&gaps, omega, model.coarse_graining)?;
    Ok(generator.lamb_shift.view((0, 0), (n, n)).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::positivity::lambda_min;

    fn reference() -> DipoleModel {
        DipoleModel::qubit(Statistics::Bosonic, 1.0, 2.0, 2.0, 5.0).unwrap()
    }

    #[test]
    fn validation() {
        assert!(DipoleModel::qubit(Statistics::Bosonic, 0.0, 2.0, 2.0, 5.0).is_err());
        assert!(DipoleModel::oscillator(Statistics::Bosonic, 1.0, 2.0, 0.1, 5.0, 1).is_err());
        assert!(build_dipole(&reference().with_sinc(1.5)).is_err());
    }

    #[test]
    fn qubit_threshold_generator_is_marginal() {
        let b = build_dipole(&reference().with_sinc(0.628)).unwrap();
        let scale = linalg::spectral_norm(&b.generator.gamma);
        assert!(lambda_min(&b.generator.gamma).unwrap().abs() < 1e-3 * scale);
    }

    #[test]
    fn qubit_lamb_shift_is_a_level_shift_independent_of_coarse_graining() {
        let shift = |cg| {
            let b = build_dipole(&reference().with_coarse_graining(cg)).unwrap();
            let h = &b.generator.lamb_shift;
            assert!(h[(0, 1)].norm() < 1e-15 && h[(1, 0)].norm() < 1e-15);
            h[(1, 1)].re - h[(0, 0)].re
        };
        let secular = shift(CoarseGraining::secular());
        assert!((shift(CoarseGraining::redfield()) - secular).abs() < 1e-14);
        assert!((shift(CoarseGraining::Sinc(0.3)) - secular).abs() < 1e-14);
    }

    #[test]
    fn oscillator_lamb_shift_has_squeezing_terms() {
        let model = DipoleModel::oscillator(Statistics::Bosonic, 1.0, 2.0, 0.1, 5.0, 8)
            .unwrap()
            .with_sinc(0.5);
        let b = build_dipole(&model).unwrap();
        let a = model.lowering();
        let ad = a.adjoint();
        let g = &b.generator;
        let (em, ep, emp, epm) = (g.eta[(0, 0)], g.eta[(1, 1)], g.eta[(0, 1)], g.eta[(1, 0)]);
        // H_LS = η₋₋ (N + 1) + η₊₊ N + η₋₊ a² + η₊₋ a†²
        let number = &ad * &a;
        let expect = (&number + CMatrix::identity(8, 8)) * em + &number * ep + (&a * &a) * emp + (&ad * &ad) * epm;
        assert!(max_abs(&(expect - &g.lamb_shift)) < 1e-14);
        assert!(epm.norm() > 1e-3);
        assert!((emp - epm.conj()).norm() < 1e-15);
    }

    #[test]
    fn sinc_and_time_parameterizations_agree() {
        let m = reference();
        let dt = m.delta_t_for_sinc(0.628).unwrap();
        let by_time = build_dipole(&m.clone().with_coarse_graining(CoarseGraining::Time(dt))).unwrap();
        let by_sinc = build_dipole(&m.with_sinc(0.628)).unwrap();
        assert!(max_abs(&(&by_time.generator.gamma - &by_sinc.generator.gamma)) < 1e-12);
        assert!((by_sinc.generator.gamma[(0, 1)] - by_sinc.terms.gamma_mp_unit() * 0.628).norm() < 1e-14);
    }

    #[test]
    fn lamb_shift_constant_offset_is_dynamically_irrelevant() {
        let model = DipoleModel::oscillator(Statistics::Bosonic, 1.0, 2.0, 0.1, 5.0, 10)
            .unwrap()
            .with_sinc(0.6);
        let b = build_dipole(&model).unwrap();
        let offset = b.generator.eta[(0, 0)];
        let mut stripped = b.generator.clone();
        stripped.lamb_shift -= CMatrix::identity(10, 10) * offset;
        let l = crate::generator::liouvillian(&b.spec, &stripped, &b.gaps).unwrap();

        let mut rho0 = CMatrix::zeros(10, 10);
        rho0[(0, 0)] = linalg::r(0.5);
        rho0[(1, 1)] = linalg::r(0.5);
        rho0[(0, 1)] = linalg::r(0.5);
        rho0[(1, 0)] = linalg::r(0.5);
        let times = crate::dynamics::uniform_times(5.0, 21);
        let full = crate::dynamics::evolve(&b.liouvillian, &rho0, &times).unwrap();
        let bare = crate::dynamics::evolve(&l, &rho0, &times).unwrap();
        for (x, y) in full.states.iter().zip(&bare.states) {
            assert!(max_abs(&(x - y)) < 1e-12);
        }
    }
}
