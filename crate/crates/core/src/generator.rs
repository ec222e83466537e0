//! Coarse-grained dissipation and Lamb-shift matrices, the Liouvillian
//! superoperator, its diagonal (GKSL) form, and commutator audits.
//!
//! The dissipator follows the index convention
//! `D[ρ] = Σ_ij γ_ij (A_j† ρ A_i − ½{A_i A_j†, ρ})` with `i = (α, ω)` and
//! `A_i = A_{αω}`; `H_LS = Σ_ij η_ij A_i A_j†`. Superoperators use the
//! column-stacking linearization documented in [`crate::linalg`].

use crate::bath::OmegaProvider;
use crate::error::{Error, Result};
use crate::linalg::{
    self, commutator, hamiltonian_superop, left_mul, max_abs, right_mul, sandwich, spectral_norm, CMatrix,
    CVector, C64, I,
};
use crate::spectral::{GapDecomposition, SystemSpec};

/// Coarse-graining time. `0` is the Redfield limit, `∞` the secular limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DeltaT(f64);

impl DeltaT {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::validation("delta_t", format!("must be >= 0 or infinite, got {value}")));
        }
        Ok(Self(value))
    }

    pub fn secular() -> Self {
        Self(f64::INFINITY)
    }

    pub fn redfield() -> Self {
        Self(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_secular(self) -> bool {
        self.0.is_infinite()
    }
}

/// `sinc((ω − ω')Δt/2)`, with the secular limit giving a Kronecker delta.
pub fn sinc_factor(omega: f64, omega_prime: f64, delta_t: DeltaT) -> f64 {
    if omega == omega_prime {
        return 1.0;
    }
    if delta_t.is_secular() {
        return 0.0;
    }
    sinc((omega - omega_prime) * delta_t.0 / 2.0)
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Invert `sinc(x) = value` on the principal branch `x ∈ [0, π]`.
pub fn sinc_inverse(value: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::validation("sinc", format!("{value} is outside [0, 1]")));
    }
    if value == 1.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sinc(mid) > value {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// How cross-gap terms are weighted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoarseGraining {
    Time(DeltaT),
    /// Fixed off-diagonal weight; only meaningful when all cross-gap pairs
    /// share one gap difference (two-gap models).
    Sinc(f64),
}

impl CoarseGraining {
    pub fn secular() -> Self {
        CoarseGraining::Time(DeltaT::secular())
    }

    pub fn redfield() -> Self {
        CoarseGraining::Time(DeltaT::redfield())
    }

    pub fn weight(&self, omega: f64, omega_prime: f64) -> f64 {
        match *self {
            CoarseGraining::Time(dt) => sinc_factor(omega, omega_prime, dt),
            CoarseGraining::Sinc(s) if omega != omega_prime => s,
            CoarseGraining::Sinc(_) => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseGrainedGenerator {
    pub coarse_graining: CoarseGraining,
    /// `γ^(Δt)`, `N×N` Hermitian.
    pub gamma: CMatrix,
    /// `η^(Δt)`, `N×N` Hermitian.
    pub eta: CMatrix,
    /// `H_LS^(Δt)`, `d×d` Hermitian.
    pub lamb_shift: CMatrix,
    /// Collective index order `(α, ω)`.
    pub index_map: Vec<(usize, f64)>,
}

impl CoarseGrainedGenerator {
    pub fn n_indices(&self) -> usize {
        self.index_map.len()
    }

    /// Spectral norm of `γ`, used as the scale for PSD tolerances.
    pub fn gamma_scale(&self) -> f64 {
        spectral_norm(&self.gamma)
    }
}

fn omega_lookup<'a>(omega: &'a OmegaProvider, w: f64, gaps: &GapDecomposition) -> Result<&'a CMatrix> {
    let tol = 10.0 * gaps.gap_tol() + 1e-12 * w.abs().max(1.0);
    omega
        .get(w, tol)
        .ok_or_else(|| Error::Configuration(format!("no Omega entry for gap {w}")))
}

/// `γ^(Δt)` and `η^(Δt)` from one `M×M` block `Ω(ω)` per gap, indices
/// ordered gap-major (`i = g·M + α`).
pub fn coefficient_matrices(
    gaps: &[f64],
    blocks: &[&CMatrix],
    coarse_graining: CoarseGraining,
) -> Result<(CMatrix, CMatrix)> {
    if gaps.len() != blocks.len() || gaps.is_empty() {
        return Err(Error::Dimension(format!("{} gaps but {} Omega blocks", gaps.len(), blocks.len())));
    }
    let m = blocks[0].nrows();
    if blocks.iter().any(|b| b.nrows() != m || b.ncols() != m) {
        return Err(Error::Dimension("Omega blocks must share one square shape".into()));
    }
    if let CoarseGraining::Sinc(s) = coarse_graining {
        if !s.is_finite() {
            return Err(Error::validation("sinc", "must be finite"));
        }
        let diffs: Vec<f64> = gaps
            .iter()
            .flat_map(|a| gaps.iter().map(move |b| (a - b).abs()))
            .filter(|d| *d > 0.0)
            .collect();
        let tol = 1e-9 * gaps.iter().fold(1.0f64, |acc, w| acc.max(w.abs()));
        if diffs.iter().any(|d| (d - diffs[0]).abs() > tol) {
            return Err(Error::Configuration(
                "a sinc-value parameterization needs a single cross-gap difference".into(),
            ));
        }
    }
    let n = gaps.len() * m;
    let mut gamma = CMatrix::zeros(n, n);
    let mut eta = CMatrix::zeros(n, n);
    for (g, &w) in gaps.iter().enumerate() {
        for (gp, &wp) in gaps.iter().enumerate() {
            let s = coarse_graining.weight(w, wp);
            for alpha in 0..m {
                for beta in 0..m {
                    let fwd = blocks[gp][(alpha, beta)];
                    let back = blocks[g][(beta, alpha)].conj();
                    let (i, j) = (g * m + alpha, gp * m + beta);
                    gamma[(i, j)] = (fwd + back) * s;
                    eta[(i, j)] = (fwd - back) / (I * 2.0) * s;
                }
            }
        }
    }
    Ok((gamma, eta))
}

/// Assemble `γ^(Δt)`, `η^(Δt)` and `H_LS^(Δt)` from the Ω blocks.
pub fn build_generator(
    gaps: &GapDecomposition,
    omega: &OmegaProvider,
    coarse_graining: CoarseGraining,
) -> Result<CoarseGrainedGenerator> {
    let m = gaps.n_channels();
    let blocks: Vec<&CMatrix> = gaps
        .gaps()
        .iter()
        .map(|&w| omega_lookup(omega, w, gaps))
        .collect::<Result<_>>()?;
    if omega.n_channels() != m {
        return Err(Error::Dimension(format!(
            "Omega blocks are {}x{}, system has {m} coupling channels",
            omega.n_channels(),
            omega.n_channels()
        )));
    }
    let (gamma, eta) = coefficient_matrices(gaps.gaps(), &blocks, coarse_graining)?;
    let n = gamma.nrows();

    let ops = gaps.indexed_ops();
    let d = gaps.dim();
    let mut lamb_shift = CMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            if eta[(i, j)] != C64::new(0.0, 0.0) {
                lamb_shift += (&ops[i] * ops[j].adjoint()) * eta[(i, j)];
            }
        }
    }

    Ok(CoarseGrainedGenerator {
        coarse_graining,
        gamma,
        eta,
        lamb_shift,
        index_map: gaps.index_map(),
    })
}

/// Linearized generator `L = H + D` acting on column-stacked density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    pub dim: usize,
    pub matrix: CMatrix,
    /// `−i[H_S + H_LS, ·]`
    pub hamiltonian_part: CMatrix,
    pub dissipator_part: CMatrix,
}

impl Liouvillian {
    pub fn from_parts(dim: usize, hamiltonian_part: CMatrix, dissipator_part: CMatrix) -> Self {
        Self {
            dim,
            matrix: &hamiltonian_part + &dissipator_part,
            hamiltonian_part,
            dissipator_part,
        }
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        linalg::unvectorize(&(&self.matrix * linalg::vectorize(rho)), self.dim)
    }

    /// Largest entry of `vec(1)† L`; zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let id = linalg::vectorize(&linalg::identity(self.dim));
        let row = id.adjoint() * &self.matrix;
        row.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |L − J L J|`, with `J` the antilinear map `vec(X) ↦ vec(X†)`;
    /// zero when `L(X†) = L(X)†` for every `X`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let flip = |k: usize| (k % d) * d + k / d;
        let n = d * d;
        let mut worst = 0.0f64;
        for col in 0..n {
            for row in 0..n {
                let a = self.matrix[(row, col)];
                let b = self.matrix[(flip(row), flip(col))].conj();
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }
}

/// Dissipator superoperator `Σ_ij γ_ij (A_j† · A_i − ½{A_i A_j†, ·})`.
pub fn dissipator_superop(gamma: &CMatrix, ops: &[CMatrix]) -> CMatrix {
    let d = ops.first().map(|a| a.nrows()).unwrap_or(0);
    let mut out = CMatrix::zeros(d * d, d * d);
    for (i, a_i) in ops.iter().enumerate() {
        for (j, a_j) in ops.iter().enumerate() {
            let g = gamma[(i, j)];
            if g == C64::new(0.0, 0.0) {
                continue;
            }
            let a_j_dag = a_j.adjoint();
            let prod = a_i * &a_j_dag;
            let term = sandwich(&a_j_dag, a_i) - (left_mul(&prod) + right_mul(&prod)).scale(0.5);
            out += term * g;
        }
    }
    out
}

/// Build the Schrödinger-picture generator for `H_S + H_LS` and `γ`.
pub fn liouvillian(spec: &SystemSpec, gen: &CoarseGrainedGenerator, gaps: &GapDecomposition) -> Result<Liouvillian> {
    let d = spec.dim();
    if gaps.dim() != d || gen.lamb_shift.nrows() != d {
        return Err(Error::Dimension(format!(
            "system dimension {d}, gap decomposition {}, Lamb shift {}",
            gaps.dim(),
            gen.lamb_shift.nrows()
        )));
    }
    if gen.gamma.nrows() != gaps.n_indices() {
        return Err(Error::Dimension("generator and gap decomposition index sets differ".into()));
    }
    let h = spec.hamiltonian() + &gen.lamb_shift;
    let hamiltonian_part = hamiltonian_superop(&h);
    let dissipator_part = dissipator_superop(&gen.gamma, &gaps.indexed_ops());
    Ok(Liouvillian::from_parts(d, hamiltonian_part, dissipator_part))
}

/// Diagonal form `γ = U diag(rates) U†` with jump operators `F_k = Σ_i U_ik A_i`,
/// so that `D[ρ] = Σ_k rate_k (F_k† ρ F_k − ½{F_k F_k†, ρ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladForm {
    pub rates: Vec<f64>,
    pub jump_ops: Vec<CMatrix>,
    pub unitary: CMatrix,
}

impl LindbladForm {
    pub fn dissipator(&self) -> CMatrix {
        let gamma = CMatrix::from_diagonal(&CVector::from_iterator(
            self.rates.len(),
            self.rates.iter().map(|&r| linalg::r(r)),
        ));
        dissipator_superop(&gamma, &self.jump_ops)
    }
}

/// Relative PSD tolerance applied to `γ`.
pub const PSD_TOL: f64 = 1e-10;

pub fn lindblad_diagonal_form(gen: &CoarseGrainedGenerator, gaps: &GapDecomposition) -> Result<LindbladForm> {
    let (values, unitary) = linalg::hermitian_eigen(&gen.gamma);
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if let Some(&lambda_min) = values.first() {
        if lambda_min < -PSD_TOL * scale {
            return Err(Error::NotCompletelyPositive { lambda_min });
        }
    }
    let ops = gaps.indexed_ops();
    let d = gaps.dim();
    let jump_ops = (0..values.len())
        .map(|k| {
            ops.iter()
                .enumerate()
                .fold(CMatrix::zeros(d, d), |acc, (i, a)| acc + a * unitary[(i, k)])
        })
        .collect();
    Ok(LindbladForm {
        rates: values.into_iter().map(|v| v.max(0.0)).collect(),
        jump_ops,
        unitary,
    })
}

/// Operator norms of the three commutators that vanish in the secular limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorAudit {
    /// `‖[H_S, H_LS]‖`
    pub hs_lamb: f64,
    /// `‖[H_S^(Δt) superop, D superop]‖` with `H_S^(Δt) = H_S + H_LS`
    pub full_hamiltonian_dissipator: f64,
    /// `‖[H_S superop, D superop]‖`
    pub bare_hamiltonian_dissipator: f64,
}

pub fn commutator_audit(
    spec: &SystemSpec,
    gen: &CoarseGrainedGenerator,
    gaps: &GapDecomposition,
) -> Result<CommutatorAudit> {
    let l = liouvillian(spec, gen, gaps)?;
    let bare = hamiltonian_superop(spec.hamiltonian());
    Ok(CommutatorAudit {
        hs_lamb: spectral_norm(&commutator(spec.hamiltonian(), &gen.lamb_shift)),
        full_hamiltonian_dissipator: spectral_norm(&commutator(&l.hamiltonian_part, &l.dissipator_part)),
        bare_hamiltonian_dissipator: spectral_norm(&commutator(&bare, &l.dissipator_part)),
    })
}

/// Scale for audit tolerances: the largest entry among the generator pieces.
pub fn audit_scale(spec: &SystemSpec, gen: &CoarseGrainedGenerator) -> f64 {
    max_abs(spec.hamiltonian())
        .max(max_abs(&gen.gamma))
        .max(max_abs(&gen.eta))
        .max(1.0)
}
