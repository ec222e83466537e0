//! Complete-positivity certification of the coarse-grained dissipation matrix.
//!
//! Three levels of test are provided: the minimum eigenvalue of `γ^(Δt)`,
//! closed-form thresholds on the cross-gap sinc weight for the two-gap dipole
//! model, and sufficient critical coarse-graining times from a dilution of the
//! secular blocks' positive weight over the cross-gap blocks.

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::bath::{DipoleTerms, OmegaProvider};
use crate::error::{Error, Result};
use crate::generator::{coefficient_matrices, CoarseGraining, DeltaT, PSD_TOL};
use crate::linalg::{self, spectral_norm, CMatrix, C64};

/// Smallest eigenvalue of a Hermitian matrix.
pub fn lambda_min(gamma: &CMatrix) -> Result<f64> {
    if gamma.nrows() != gamma.ncols() || gamma.nrows() == 0 {
        return Err(Error::Dimension(format!("gamma is {}x{}", gamma.nrows(), gamma.ncols())));
    }
    let scale = linalg::max_abs(gamma).max(f64::MIN_POSITIVE);
    if linalg::hermitian_defect(gamma) > 1e-12 * scale {
        return Err(Error::validation("gamma", "not Hermitian"));
    }
    Ok(linalg::hermitian_eigenvalues(gamma)[0])
}

/// `λ_min ≥ −PSD_TOL·‖γ‖`.
pub fn is_psd(gamma: &CMatrix) -> Result<bool> {
    Ok(lambda_min(gamma)? >= -PSD_TOL * spectral_norm(gamma))
}

/// `γ^(Δt)` for an Ω set, using the provider's own gap list.
pub fn gamma_matrix(omega: &OmegaProvider, coarse_graining: CoarseGraining) -> Result<CMatrix> {
    let gaps = omega.gaps();
    let blocks: Vec<&CMatrix> = omega.entries().iter().map(|(_, m)| m).collect();
    Ok(coefficient_matrices(&gaps, &blocks, coarse_graining)?.0)
}

// ---- two-gap dipole model ----

fn ratio_or_one(num: f64, den: f64) -> f64 {
    // no dissipation at all: every sinc weight is admissible
    if den == 0.0 {
        1.0
    } else {
        (num / den).clamp(0.0, 1.0)
    }
}

/// Largest `|S|` for which the 2×2 dipole `γ` stays PSD:
/// `sqrt(4κ²n(1+qn) / (κ²(n+1+qn)² + 4I²))`.
pub fn exact_threshold_dipole(t: &DipoleTerms) -> f64 {
    let (k, n, q, i) = (t.kappa, t.occupation, t.q, t.pv.i_total);
    let num = 4.0 * k * k * n * (1.0 + q * n);
    let den = k * k * (n + 1.0 + q * n).powi(2) + 4.0 * i * i;
    ratio_or_one(num, den).sqrt()
}

/// The exact threshold with the principal-value term dropped,
/// `2√(n(1+qn))/(n+1+qn)`; an upper envelope of [`exact_threshold_dipole`].
pub fn simple_bound_dipole(t: &DipoleTerms) -> f64 {
    let (n, q) = (t.occupation, t.q);
    ratio_or_one(2.0 * (n * (1.0 + q * n)).sqrt(), n + 1.0 + q * n)
}

/// Sufficient bound `2κn / (√((κn)² + 4I₋²) + √((κ(1+qn))² + 4I₊²))`.
pub fn sufficient_sinc_bound_dipole(t: &DipoleTerms) -> f64 {
    let (mm, pp) = (t.gamma_mm(), t.gamma_pp());
    let den = (mm * mm + 4.0 * t.pv.i_minus.powi(2)).sqrt() + (pp * pp + 4.0 * t.pv.i_plus.powi(2)).sqrt();
    ratio_or_one(2.0 * mm.min(pp), den)
}

/// Closed-form eigenvalues `(γ₋, γ₊)` of the 2×2 dipole `γ` at sinc weight `s`.
pub fn dipole_gamma_eigenvalues(t: &DipoleTerms, sinc: f64) -> (f64, f64) {
    let (mm, pp) = (t.gamma_mm(), t.gamma_pp());
    let g2 = (t.gamma_mp_unit() * sinc).norm_sqr();
    let root = ((pp - mm).powi(2) + 4.0 * g2).sqrt();
    ((mm + pp - root) / 2.0, (mm + pp + root) / 2.0)
}

/// `det γ = γ₋₋γ₊₊ − |γ₋₊|²`; non-negative exactly on the CP side.
pub fn dipole_determinant(t: &DipoleTerms, sinc: f64) -> f64 {
    t.gamma_mm() * t.gamma_pp() - (t.gamma_mp_unit() * sinc).norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipoleThresholds {
    pub exact: f64,
    pub simple: f64,
    pub sufficient: f64,
}

impl DipoleThresholds {
    pub fn of(t: &DipoleTerms) -> Self {
        Self {
            exact: exact_threshold_dipole(t),
            simple: simple_bound_dipole(t),
            sufficient: sufficient_sinc_bound_dipole(t),
        }
    }
}

// ---- critical times ----

fn ext_real<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn ext_real_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => ext_real(x, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilutionPartner {
    pub omega: f64,
    /// `q^(ω)_{ω'}`
    pub q: f64,
    /// optimal `p^(ω)_{ω'} = K(ω)/q^(ω)_{ω'}`
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilutionRecord {
    pub omega: f64,
    /// `‖Ω(ω)‖`, spectral norm
    pub norm: f64,
    /// smallest eigenvalue of `Ω(ω) + Ω†(ω)`
    #[serde(serialize_with = "ext_real")]
    pub lambda_min: f64,
    /// `Q(ω) = Σ_{ω'≠ω} |ω − ω'| / (‖Ω(ω)‖ + ‖Ω(ω')‖)`
    #[serde(rename = "Q", serialize_with = "ext_real")]
    pub q_total: f64,
    /// `K(ω) = 1 / Σ_{ω'≠ω} 1/q^(ω)_{ω'}`
    #[serde(rename = "K")]
    pub k: f64,
    pub partners: Vec<DilutionPartner>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalTimes {
    #[serde(serialize_with = "ext_real")]
    pub dtc0: f64,
    #[serde(serialize_with = "ext_real")]
    pub dtc1: f64,
    #[serde(serialize_with = "ext_real")]
    pub dtc2: f64,
    /// single gap: no cross-gap blocks exist and any `Δt` is safe
    pub trivial: bool,
    pub dilution: Vec<DilutionRecord>,
}

/// Relative tolerance below which a secular block eigenvalue counts as zero.
const SECULAR_ZERO_TOL: f64 = 1e-13;

fn secular_lambda_min(omega: f64, block: &CMatrix) -> Result<f64> {
    let herm = block + block.adjoint();
    let lam = linalg::hermitian_eigenvalues(&herm)[0];
    let scale = spectral_norm(&herm);
    if lam < -PSD_TOL * scale {
        return Err(Error::validation(
            "omega",
            format!("Hermitian part of Omega({omega}) has eigenvalue {lam:e} < 0"),
        ));
    }
    Ok(if lam <= SECULAR_ZERO_TOL * scale { 0.0 } else { lam })
}

/// Critical coarse-graining times for the Ω set at the given gaps.
///
/// `dtc1` dilutes uniformly, `dtc0` with the optimal probabilities, `dtc2`
/// replaces every pair quantity by its worst case. The max in `dtc1` runs
/// over ordered pairs with the secular eigenvalue of the first gap.
pub fn critical_times(omega: &OmegaProvider, gaps: &[f64]) -> Result<CriticalTimes> {
    let tol = 1e-9 * gaps.iter().fold(1.0f64, |a, w| a.max(w.abs()));
    let blocks: Vec<&CMatrix> = gaps
        .iter()
        .map(|&w| {
            omega
                .get(w, tol)
                .ok_or_else(|| Error::Configuration(format!("no Omega entry for gap {w}")))
        })
        .collect::<Result<_>>()?;
    let g = gaps.len();
    if g <= 1 {
        let dilution = gaps
            .iter()
            .zip(&blocks)
            .map(|(&w, b)| {
                Ok(DilutionRecord {
                    omega: w,
                    norm: spectral_norm(b),
                    lambda_min: secular_lambda_min(w, b)?,
                    q_total: 0.0,
                    k: 0.0,
                    partners: vec![],
                })
            })
            .collect::<Result<_>>()?;
        return Ok(CriticalTimes {
            dtc0: 0.0,
            dtc1: 0.0,
            dtc2: 0.0,
            trivial: true,
            dilution,
        });
    }

    let norms: Vec<f64> = blocks.iter().map(|b| spectral_norm(b)).collect();
    let lams: Vec<f64> = gaps
        .iter()
        .zip(&blocks)
        .map(|(&w, b)| secular_lambda_min(w, b))
        .collect::<Result<_>>()?;

    let mut dtc0 = 0.0f64;
    let mut dtc1 = 0.0f64;
    let mut dilution = Vec::with_capacity(g);
    for a in 0..g {
        // pair weights |ω − ω'| / (‖Ω(ω)‖ + ‖Ω(ω')‖); infinite when both norms vanish
        let weights: Vec<(usize, f64)> = (0..g)
            .filter(|&b| b != a)
            .map(|b| (b, (gaps[a] - gaps[b]).abs() / (norms[a] + norms[b])))
            .collect();
        let q_total: f64 = weights.iter().map(|w| w.1).sum();
        let inv_sum: f64 = weights.iter().map(|w| q_total / w.1).sum();
        let k = 1.0 / inv_sum;
        let min_weight = weights.iter().map(|w| w.1).fold(f64::INFINITY, f64::min);
        let partners = weights
            .iter()
            .map(|&(b, w)| {
                let q = w / q_total;
                DilutionPartner {
                    omega: gaps[b],
                    q,
                    p: if q_total.is_finite() { k / q } else { 1.0 / (g - 1) as f64 },
                }
            })
            .collect();

        let lam = lams[a];
        let (t0, t1) = if lam == 0.0 {
            (f64::INFINITY, f64::INFINITY)
        } else {
            (2.0 / (q_total * k * lam), 2.0 * (g - 1) as f64 / (min_weight * lam))
        };
        dtc0 = dtc0.max(t0);
        dtc1 = dtc1.max(t1);
        dilution.push(DilutionRecord {
            omega: gaps[a],
            norm: norms[a],
            lambda_min: lam,
            q_total,
            k,
            partners,
        });
    }

    let norm_max = norms.iter().cloned().fold(0.0, f64::max);
    let lam_min = lams.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut nu_min = f64::INFINITY;
    for a in 0..g {
        for b in 0..a {
            nu_min = nu_min.min((gaps[a] - gaps[b]).abs());
        }
    }
    let dtc2 = if lam_min == 0.0 {
        f64::INFINITY
    } else {
        4.0 * (g - 1) as f64 * norm_max / (nu_min * lam_min)
    };

    Ok(CriticalTimes {
        dtc0,
        dtc1,
        dtc2,
        trivial: false,
        dilution,
    })
}

/// Relative slack in the dilution inequality so that `Δt` equal to a
/// computed critical time passes despite rounding.
const DILUTION_SLACK: f64 = 1e-12;

/// Check `Δt ≥ (2/p^(ω)_{ω'}) (‖Ω(ω)‖ + ‖Ω(ω')‖) / (|ω − ω'| λ_min(ω))`
/// for every ordered pair. `probabilities[a][b]` is `p^(ω_a)_{ω_b}`; the
/// diagonal is ignored and each row must be a probability vector.
pub fn verify_dilution(
    omega: &OmegaProvider,
    gaps: &[f64],
    probabilities: &[Vec<f64>],
    delta_t: DeltaT,
) -> Result<bool> {
    let g = gaps.len();
    if probabilities.len() != g || probabilities.iter().any(|row| row.len() != g) {
        return Err(Error::Dimension(format!("probabilities must be {g}x{g}")));
    }
    for (a, row) in probabilities.iter().enumerate() {
        let off: Vec<f64> = row.iter().enumerate().filter(|(b, _)| *b != a).map(|x| *x.1).collect();
        if off.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::validation("probabilities", "entries must be non-negative"));
        }
        let sum: f64 = off.iter().sum();
        if g > 1 && (sum - 1.0).abs() > 1e-10 {
            return Err(Error::validation("probabilities", format!("row {a} sums to {sum}")));
        }
    }
    let tol = 1e-9 * gaps.iter().fold(1.0f64, |acc, w| acc.max(w.abs()));
    let blocks: Vec<&CMatrix> = gaps
        .iter()
        .map(|&w| {
            omega
                .get(w, tol)
                .ok_or_else(|| Error::Configuration(format!("no Omega entry for gap {w}")))
        })
        .collect::<Result<_>>()?;
    let norms: Vec<f64> = blocks.iter().map(|b| spectral_norm(b)).collect();
    let dt = delta_t.value();
    for a in 0..g {
        let lam = secular_lambda_min(gaps[a], blocks[a])?;
        for b in (0..g).filter(|&b| b != a) {
            let pair = norms[a] + norms[b];
            if pair == 0.0 {
                continue;
            }
            let p = probabilities[a][b];
            if dt.is_infinite() {
                continue;
            }
            if p == 0.0 || lam == 0.0 {
                return Ok(false);
            }
            let need = 2.0 / p * pair / ((gaps[a] - gaps[b]).abs() * lam);
            if dt < need * (1.0 - DILUTION_SLACK) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl CriticalTimes {
    /// Probability table for [`verify_dilution`] from the optimal `p` values.
    pub fn optimal_probabilities(&self) -> Vec<Vec<f64>> {
        let gaps: Vec<f64> = self.dilution.iter().map(|d| d.omega).collect();
        self.dilution
            .iter()
            .map(|rec| {
                gaps.iter()
                    .map(|&w| rec.partners.iter().find(|p| p.omega == w).map(|p| p.p).unwrap_or(0.0))
                    .collect()
            })
            .collect()
    }
}

/// Uniform probabilities `1/(G−1)`.
pub fn flat_probabilities(n_gaps: usize) -> Vec<Vec<f64>> {
    let p = if n_gaps > 1 { 1.0 / (n_gaps - 1) as f64 } else { 0.0 };
    (0..n_gaps)
        .map(|a| (0..n_gaps).map(|b| if a == b { 0.0 } else { p }).collect())
        .collect()
}

// ---- report ----

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub schema_version: u32,
    /// `Δt` (or `null` when a sinc weight was given directly)
    #[serde(serialize_with = "ext_real_opt")]
    pub delta_t: Option<f64>,
    pub sinc: Option<f64>,
    pub lambda_min: f64,
    pub gamma_scale: f64,
    pub is_cp: bool,
    #[serde(flatten)]
    pub critical: CriticalTimes,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dipole: Option<DipoleThresholds>,
}

/// Certify `γ^(Δt)` of an Ω set and attach its critical times.
pub fn certify(omega: &OmegaProvider, coarse_graining: CoarseGraining) -> Result<PositivityReport> {
    let gamma = gamma_matrix(omega, coarse_graining)?;
    let lam = lambda_min(&gamma)?;
    let scale = spectral_norm(&gamma);
    let (delta_t, sinc) = match coarse_graining {
        CoarseGraining::Time(dt) => (Some(dt.value()), None),
        CoarseGraining::Sinc(s) => (None, Some(s)),
    };
    Ok(PositivityReport {
        schema_version: REPORT_SCHEMA_VERSION,
        delta_t,
        sinc,
        lambda_min: lam,
        gamma_scale: scale,
        is_cp: lam >= -PSD_TOL * scale,
        critical: critical_times(omega, &omega.gaps())?,
        dipole: None,
    })
}

// ---- synthetic instances ----

/// Random Ω set with `Ω(ω) = R R†/2 + i H`, `R` complex Gaussian-like and `H`
/// Hermitian, so every secular block `Ω + Ω† = R R†` is PSD.
pub fn synthetic_omega<R: Rng + ?Sized>(gaps: &[f64], channels: usize, rng: &mut R) -> Result<OmegaProvider> {
    let mut sample = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let entries = gaps
        .iter()
        .map(|&w| {
            let r = CMatrix::from_fn(channels, channels, |_, _| sample());
            let h = CMatrix::from_fn(channels, channels, |_, _| sample());
            let herm = linalg::hermitize(&h);
            (w, (&r * r.adjoint()).scale(0.5) + herm * linalg::I)
        })
        .collect();
    OmegaProvider::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{dipole_omega_from_terms, BathSpec, DecayRate, Statistics};
    use crate::linalg::{c, r};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reference_terms() -> DipoleTerms {
        let bath = BathSpec::new(Statistics::Bosonic, 2.0, DecayRate::ohmic(2.0, 5.0).unwrap()).unwrap();
        DipoleTerms::compute(&bath, 1.0).unwrap()
    }

    #[test]
    fn lambda_min_of_diagonal() {
        let mut g = CMatrix::zeros(2, 2);
        g[(0, 0)] = r(0.3);
        g[(1, 1)] = r(1.2);
        assert_eq!(lambda_min(&g).unwrap(), 0.3);
        g[(0, 1)] = c(0.0, 1e-3);
        assert!(lambda_min(&g).is_err());
    }

    #[test]
    fn reference_threshold() {
        let t = reference_terms();
        let exact = exact_threshold_dipole(&t);
        assert!((exact - 0.628).abs() < 0.005, "{exact}");
        assert!(sufficient_sinc_bound_dipole(&t) < exact);
        assert!(exact <= simple_bound_dipole(&t));
    }

    #[test]
    fn thresholds_do_not_depend_on_coupling_strength() {
        for stats in [Statistics::Bosonic, Statistics::Fermionic] {
            let at = |kappa0| {
                let bath = BathSpec::new(stats, 1.5, DecayRate::ohmic(kappa0, 10.0).unwrap()).unwrap();
                DipoleThresholds::of(&DipoleTerms::compute(&bath, 1.0).unwrap())
            };
            let (weak, strong) = (at(0.1), at(2.0));
            assert!((weak.exact - strong.exact).abs() < 1e-12);
            assert!((weak.simple - strong.simple).abs() < 1e-12);
            assert!((weak.sufficient - strong.sufficient).abs() < 1e-12);
        }
    }

    #[test]
    fn threshold_is_root_of_determinant() {
        let t = reference_terms();
        let s = exact_threshold_dipole(&t);
        let scale = t.gamma_pp();
        assert!(dipole_determinant(&t, s).abs() < 1e-10 * scale * scale);
        let (lo, hi) = dipole_gamma_eigenvalues(&t, s);
        assert!(lo.abs() < 1e-10 * hi);
        let gamma = gamma_matrix(&dipole_omega_from_terms(&t), CoarseGraining::Sinc(s)).unwrap();
        assert!(lambda_min(&gamma).unwrap().abs() < 1e-10 * spectral_norm(&gamma));
    }

    #[test]
    fn redfield_qubit_is_not_psd() {
        let gamma = gamma_matrix(&dipole_omega_from_terms(&reference_terms()), CoarseGraining::redfield()).unwrap();
        assert!(lambda_min(&gamma).unwrap() < 0.0);
    }

    #[test]
    fn critical_time_matches_sufficient_bound_for_two_gaps() {
        let t = reference_terms();
        let omega = dipole_omega_from_terms(&t);
        let ct = critical_times(&omega, &omega.gaps()).unwrap();
        assert_eq!(ct.dtc0, ct.dtc1);
        let induced = 2.0 / (2.0 * t.omega0 * ct.dtc1);
        assert!((induced - sufficient_sinc_bound_dipole(&t)).abs() < 1e-12);
        assert!(ct.dtc1 <= ct.dtc2);
    }

    #[test]
    fn zero_secular_eigenvalue_gives_infinite_times() {
        let omega = OmegaProvider::new(vec![
            (-1.0, CMatrix::from_element(1, 1, c(0.0, 0.2))),
            (1.0, CMatrix::from_element(1, 1, c(0.5, 0.1))),
        ])
        .unwrap();
        let ct = critical_times(&omega, &omega.gaps()).unwrap();
        assert!(ct.dtc0.is_infinite() && ct.dtc1.is_infinite() && ct.dtc2.is_infinite());
        let json = serde_json::to_string(&ct).unwrap();
        assert!(json.contains("\"dtc0\":\"inf\""));
    }

    #[test]
    fn single_gap_is_trivial() {
        let omega = OmegaProvider::new(vec![(0.0, CMatrix::from_element(1, 1, r(0.5)))]).unwrap();
        let ct = critical_times(&omega, &[0.0]).unwrap();
        assert!(ct.trivial);
        assert_eq!((ct.dtc0, ct.dtc1, ct.dtc2), (0.0, 0.0, 0.0));
    }

    #[test]
    fn symmetric_instance_has_flat_optimum() {
        let block = CMatrix::from_element(1, 1, c(0.4, 0.3));
        let omega =
            OmegaProvider::new(vec![(-1.0, block.clone()), (0.0, block.clone()), (1.0, block)]).unwrap();
        // equal norms and equal secular eigenvalues, but gap distances differ
        let ct = critical_times(&omega, &omega.gaps()).unwrap();
        assert!(ct.dtc0 <= ct.dtc1 && ct.dtc1 <= ct.dtc2);
        let two = OmegaProvider::new(vec![
            (-1.0, CMatrix::from_element(1, 1, c(0.4, 0.3))),
            (1.0, CMatrix::from_element(1, 1, c(0.4, -0.3))),
        ])
        .unwrap();
        let ct2 = critical_times(&two, &two.gaps()).unwrap();
        assert!((ct2.dtc0 - ct2.dtc1).abs() < 1e-15 * ct2.dtc1);
    }

    #[test]
    fn dilution_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let gaps = [-1.3, 0.2, 0.9];
        let omega = synthetic_omega(&gaps, 2, &mut rng).unwrap();
        let ct = critical_times(&omega, &gaps).unwrap();
        let opt = ct.optimal_probabilities();
        for row in opt.iter() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let at = |t: f64| DeltaT::new(t).unwrap();
        assert!(verify_dilution(&omega, &gaps, &opt, at(ct.dtc0)).unwrap());
        assert!(!verify_dilution(&omega, &gaps, &opt, at(ct.dtc0 / 2.0)).unwrap());
        assert!(verify_dilution(&omega, &gaps, &flat_probabilities(3), at(ct.dtc1)).unwrap());
        assert!(verify_dilution(&omega, &gaps, &flat_probabilities(3), DeltaT::secular()).unwrap());
        let bad = vec![vec![0.0, 0.5, 0.4]; 3];
        assert!(verify_dilution(&omega, &gaps, &bad, at(1.0)).is_err());
    }

    #[test]
    fn certify_report_serializes() {
        let omega = dipole_omega_from_terms(&reference_terms());
        let report = certify(&omega, CoarseGraining::Sinc(0.5)).unwrap();
        assert!(report.is_cp);
        let v: serde_json::Value = serde_json::to_value(&report).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert!(v["dtc1"].as_f64().unwrap() > 0.0);
        assert!(v["dilution"][0]["Q"].as_f64().is_some());
    }

    #[test]
    fn kappa_independence_of_exact_threshold() {
        let mk = |k0| {
            let bath = BathSpec::new(Statistics::Fermionic, 3.0, DecayRate::ohmic(k0, 10.0).unwrap()).unwrap();
            exact_threshold_dipole(&DipoleTerms::compute(&bath, 1.0).unwrap())
        };
        assert!((mk(0.1) - mk(2.0)).abs() < 1e-10);
    }
}
