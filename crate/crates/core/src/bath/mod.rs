//! Thermal bath statistics, decay-rate curves and the half-Fourier matrices Ω(ω).

pub mod quadrature;

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, max_abs, CMatrix};

pub use quadrature::{integrate, integrate_with_breaks, pv_integral, pv_integral_with_breaks, Quadrature};

/// Relative tolerance used for all bath principal-value integrals.
pub const PV_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bosonic,
    Fermionic,
}

impl Statistics {
    /// `q = +1` for bosons, `-1` for fermions.
    pub fn q(self) -> f64 {
        match self {
            Statistics::Bosonic => 1.0,
            Statistics::Fermionic => -1.0,
        }
    }
}

/// Thermal occupation `1/(e^{βε} − q)`.
///
/// `beta = ∞` gives 0 for any `ε > 0`. The bosonic pole at `ε = 0` is a
/// domain error; fermions accept `ε = 0` (value 1/2).
pub fn occupation(beta: f64, stats: Statistics, energy: f64) -> Result<f64> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::Domain(format!("inverse temperature {beta} must be >= 0")));
    }
    if energy.is_nan() || energy < 0.0 {
        return Err(Error::Domain(format!("occupation needs energy >= 0, got {energy}")));
    }
    match stats {
        Statistics::Bosonic if energy == 0.0 || beta == 0.0 => Err(Error::Domain(format!(
            "Bose occupation diverges at beta*energy = 0 (beta = {beta}, energy = {energy})"
        ))),
        Statistics::Fermionic if energy == 0.0 => Ok(0.5),
        _ => Ok(occupation_positive(beta, stats, energy)),
    }
}

/// Occupation for `ε > 0`, `β > 0` (possibly infinite).
fn occupation_positive(beta: f64, stats: Statistics, energy: f64) -> f64 {
    let x = beta * energy;
    if x > 745.0 {
        return 0.0;
    }
    match stats {
        Statistics::Bosonic => 1.0 / x.exp_m1(),
        Statistics::Fermionic => 1.0 / (x.exp() + 1.0),
    }
}

/// Continuum decay rate `κ_ε = 2πρ_ε`.
#[derive(Debug, Clone, PartialEq)]
pub enum DecayRate {
    /// `κ0 · ε · exp(−ε/ωc)`
    Ohmic { kappa0: f64, omega_c: f64 },
    /// Piecewise-linear curve through `(ε, κ)` samples, zero outside the table.
    Tabulated(Vec<(f64, f64)>),
}

impl DecayRate {
    pub fn ohmic(kappa0: f64, omega_c: f64) -> Result<Self> {
        if !(kappa0 >= 0.0 && kappa0.is_finite()) {
            return Err(Error::validation("kappa0", "must be finite and >= 0"));
        }
        if !(omega_c > 0.0 && omega_c.is_finite()) {
            return Err(Error::validation("omega_c", "must be finite and > 0"));
        }
        Ok(DecayRate::Ohmic { kappa0, omega_c })
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::validation("decay table", "needs at least two samples"));
        }
        for (k, &(e, kappa)) in samples.iter().enumerate() {
            if !(e.is_finite() && kappa.is_finite()) {
                return Err(Error::validation("decay table", format!("row {k} is not finite")));
            }
            if kappa < 0.0 {
                return Err(Error::validation("decay table", format!("row {k}: negative rate {kappa}")));
            }
            if e < 0.0 {
                return Err(Error::validation("decay table", format!("row {k}: negative energy {e}")));
            }
            if k > 0 && e <= samples[k - 1].0 {
                return Err(Error::validation(
                    "decay table",
                    format!("energies must be strictly increasing (row {k})"),
                ));
            }
        }
        Ok(DecayRate::Tabulated(samples))
    }

    /// Parse a two-column `energy,rate` CSV. Blank lines, `#` comments and a
    /// non-numeric header row are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::validation(
                    "decay table",
                    format!("line {}: expected 2 columns, found {}", lineno + 1, fields.len()),
                ));
            }
            match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
                (Ok(e), Ok(k)) => samples.push((e, k)),
                _ if samples.is_empty() => continue, // header
                _ => {
                    return Err(Error::validation(
                        "decay table",
                        format!("line {}: non-numeric entry", lineno + 1),
                    ))
                }
            }
        }
        Self::tabulated(samples)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::validation("decay table", format!("{}: {e}", path.display())))?;
        Self::from_csv_str(&text)
    }

    pub fn eval(&self, energy: f64) -> f64 {
        match self {
            DecayRate::Ohmic { kappa0, omega_c } => {
                if energy <= 0.0 {
                    0.0
                } else {
                    kappa0 * energy * (-energy / omega_c).exp()
                }
            }
            DecayRate::Tabulated(samples) => {
                let first = samples[0];
                let last = samples[samples.len() - 1];
                if energy < first.0 || energy > last.0 {
                    return 0.0;
                }
                let k = samples.partition_point(|s| s.0 <= energy).min(samples.len() - 1).max(1);
                let (e0, k0) = samples[k - 1];
                let (e1, k1) = samples[k];
                k0 + (k1 - k0) * (energy - e0) / (e1 - e0)
            }
        }
    }

    /// Points where the curve is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            DecayRate::Ohmic { .. } => Vec::new(),
            DecayRate::Tabulated(samples) => samples.iter().map(|s| s.0).collect(),
        }
    }

    /// Energy beyond which the curve is treated as zero.
    pub fn default_cutoff(&self) -> f64 {
        match self {
            DecayRate::Ohmic { omega_c, .. } => 40.0 * omega_c,
            DecayRate::Tabulated(samples) => samples[samples.len() - 1].0,
        }
    }
}

/// Thermal bath entering only through its statistics, temperature and decay rate.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    pub statistics: Statistics,
    /// Inverse temperature; `f64::INFINITY` is zero temperature.
    pub beta: f64,
    pub decay: DecayRate,
    pub integration_cutoff: f64,
}

impl BathSpec {
    pub fn new(statistics: Statistics, beta: f64, decay: DecayRate) -> Result<Self> {
        let cutoff = decay.default_cutoff();
        Self::with_cutoff(statistics, beta, decay, cutoff)
    }

    pub fn with_cutoff(statistics: Statistics, beta: f64, decay: DecayRate, integration_cutoff: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::validation("beta", "inverse temperature must be >= 0 (or infinite)"));
        }
        if !(integration_cutoff > 0.0 && integration_cutoff.is_finite()) {
            return Err(Error::validation("integration_cutoff", "must be finite and > 0"));
        }
        Ok(Self {
            statistics,
            beta,
            decay,
            integration_cutoff,
        })
    }

    pub fn q(&self) -> f64 {
        self.statistics.q()
    }

    /// Interior points that split the integration range at the thermal
    /// and decay-rate scales.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut points = self.decay.breakpoints();
        if let DecayRate::Ohmic { omega_c, .. } = self.decay {
            points.extend([omega_c, 5.0 * omega_c]);
        }
        if self.beta > 0.0 {
            points.extend([1.0 / self.beta, 10.0 / self.beta, 40.0 / self.beta]);
        }
        points.retain(|&p| p > 0.0 && p < self.integration_cutoff);
        points.sort_by(f64::total_cmp);
        points.dedup();
        points
    }

    pub fn kappa(&self, energy: f64) -> f64 {
        self.decay.eval(energy)
    }

    /// `n_ε κ_ε` for `ε > 0`, evaluated without forming `n_ε` at the bosonic pole.
    fn absorption_weight(&self, e: f64) -> f64 {
        let kappa = self.kappa(e);
        if kappa == 0.0 {
            return 0.0;
        }
        kappa * occupation_positive(self.beta, self.statistics, e)
    }

    /// `(1 + q n_ε) κ_ε` for `ε > 0`.
    fn emission_weight(&self, e: f64) -> f64 {
        let kappa = self.kappa(e);
        if kappa == 0.0 {
            return 0.0;
        }
        kappa + self.q() * kappa * occupation_positive(self.beta, self.statistics, e)
    }
}

/// Principal-value integrals of the single-mode dipole model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvTerms {
    /// `(ω0/π) ⨍ ((q+1)n_ε + 1) κ_ε / (ε² − ω0²) dε`
    pub i_total: f64,
    pub i_minus: f64,
    pub i_plus: f64,
}

fn check_frequency(bath: &BathSpec, omega0: f64) -> Result<()> {
    if !(omega0 > 0.0 && omega0 < bath.integration_cutoff) {
        return Err(Error::validation(
            "omega0",
            format!("{omega0} must lie inside the integration range (0, {})", bath.integration_cutoff),
        ));
    }
    if bath.statistics == Statistics::Bosonic && bath.beta == 0.0 {
        return Err(Error::validation("beta", "bosonic bath at infinite temperature"));
    }
    Ok(())
}

/// Evaluate `I`, `I₋` and `I₊` by principal-value quadrature.
pub fn dipole_pv_terms(bath: &BathSpec, omega0: f64) -> Result<PvTerms> {
    check_frequency(bath, omega0)?;
    let cutoff = bath.integration_cutoff;
    let q = bath.q();
    let tol = PV_REL_TOL;
    let abs_floor = 1e-300;

    let breaks = bath.breakpoints();
    let pv = |f: &dyn Fn(f64) -> f64| pv_integral_with_breaks(f, omega0, cutoff, &breaks, tol).map(|q| q.value);
    let regular = |f: &dyn Fn(f64) -> f64| {
        integrate_with_breaks(f, 0.0, cutoff, &breaks, tol, abs_floor).map(|q| q.value)
    };

    let i_total = omega0 / PI
        * pv(&|e| ((q + 1.0) * bath.absorption_weight(e) + bath.kappa(e)) / (e + omega0))?;
    let absorb_pv = pv(&|e| bath.absorption_weight(e))?;
    let emit_pv = pv(&|e| bath.emission_weight(e))?;
    let absorb_reg = regular(&|e| bath.absorption_weight(e) / (e + omega0))?;
    let emit_reg = regular(&|e| bath.emission_weight(e) / (e + omega0))?;

    let i_minus = (absorb_pv - emit_reg) / (2.0 * PI);
    let i_plus = (absorb_reg - emit_pv) / (2.0 * PI);
    Ok(PvTerms {
        i_total,
        i_minus,
        i_plus,
    })
}

/// Rates and shifts of the dipole model at the bare frequency `ω0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleTerms {
    pub omega0: f64,
    pub q: f64,
    /// `κ_{ω0}`
    pub kappa: f64,
    /// `n_{ω0}`
    pub occupation: f64,
    pub pv: PvTerms,
}

impl DipoleTerms {
    pub fn compute(bath: &BathSpec, omega0: f64) -> Result<Self> {
        let pv = dipole_pv_terms(bath, omega0)?;
        Ok(Self {
            omega0,
            q: bath.q(),
            kappa: bath.kappa(omega0),
            occupation: occupation(bath.beta, bath.statistics, omega0)?,
            pv,
        })
    }

    /// Absorption rate `γ₋₋ = κ n`.
    pub fn gamma_mm(&self) -> f64 {
        self.kappa * self.occupation
    }

    /// Emission rate `γ₊₊ = κ (1 + q n)`.
    pub fn gamma_pp(&self) -> f64 {
        self.kappa * (1.0 + self.q * self.occupation)
    }

    /// Off-diagonal dissipation entry `γ₋₊` at unit sinc weight.
    pub fn gamma_mp_unit(&self) -> linalg::C64 {
        c(
            ((self.q + 1.0) * self.occupation + 1.0) * self.kappa / 2.0,
            -self.pv.i_total,
        )
    }

    /// Lamb-shift entry `η₊₋` at unit sinc weight.
    pub fn eta_pm_unit(&self) -> linalg::C64 {
        c(
            0.5 * (self.pv.i_minus + self.pv.i_plus),
            0.25 * (self.gamma_pp() - self.gamma_mm()),
        )
    }
}

/// Map from gap `ω` to the `M×M` matrix `Ω(ω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaProvider {
    entries: Vec<(f64, CMatrix)>,
}

impl OmegaProvider {
    pub fn new(mut entries: Vec<(f64, CMatrix)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::validation("omega provider", "needs at least one gap"));
        }
        let m = entries[0].1.nrows();
        for (w, mat) in &entries {
            if !w.is_finite() {
                return Err(Error::validation("omega provider", "gap must be finite"));
            }
            if mat.nrows() != m || mat.ncols() != m || m == 0 {
                return Err(Error::Dimension(format!(
                    "Omega({w}) is {}x{}, expected {m}x{m}",
                    mat.nrows(),
                    mat.ncols()
                )));
            }
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::validation("omega provider", format!("duplicate gap {}", pair[0].0)));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, CMatrix)] {
        &self.entries
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn n_channels(&self) -> usize {
        self.entries[0].1.nrows()
    }

    /// Look up `Ω(ω)` allowing an absolute mismatch of `tol` in the gap.
    pub fn get(&self, omega: f64, tol: f64) -> Option<&CMatrix> {
        self.entries
            .iter()
            .find(|(w, _)| (w - omega).abs() <= tol)
            .map(|(_, m)| m)
    }

    /// Secular block `γ⁽⁺⁾(ω, ω) = Ω(ω) + Ω†(ω)`.
    pub fn secular_block(&self, index: usize) -> CMatrix {
        let m = &self.entries[index].1;
        m + m.adjoint()
    }

    /// Smallest eigenvalue of each secular block relative to the block scale;
    /// non-negative (within rounding) for physical baths.
    pub fn secular_psd_margin(&self) -> f64 {
        (0..self.entries.len())
            .map(|k| {
                let block = self.secular_block(k);
                let scale = max_abs(&self.entries[k].1).max(f64::MIN_POSITIVE);
                linalg::hermitian_eigenvalues(&block)[0] / scale
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// `Ω(∓ω0)` of the single-channel dipole model.
pub fn dipole_omega_from_terms(t: &DipoleTerms) -> OmegaProvider {
    let minus = CMatrix::from_element(1, 1, c(t.gamma_mm() / 2.0, t.pv.i_minus));
    let plus = CMatrix::from_element(1, 1, c(t.gamma_pp() / 2.0, t.pv.i_plus));
    OmegaProvider::new(vec![(-t.omega0, minus), (t.omega0, plus)]).expect("two distinct gaps")
}

pub fn dipole_omega(bath: &BathSpec, omega0: f64) -> Result<OmegaProvider> {
    Ok(dipole_omega_from_terms(&DipoleTerms::compute(bath, omega0)?))
}
