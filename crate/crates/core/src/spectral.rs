//! Energy levels, gaps and eigenoperators of the system Hamiltonian.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_defect, max_abs, CMatrix};

/// System Hamiltonian together with the system-side coupling operators `A_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    hamiltonian: CMatrix,
    couplings: Vec<CMatrix>,
}

fn check_hermitian(name: &str, m: &CMatrix) -> Result<()> {
    let scale = max_abs(m);
    let defect = hermitian_defect(m);
    if defect > 1e-12 * scale {
        return Err(Error::validation(
            name,
            format!("matrix is not Hermitian (|M - M†|max = {defect:.3e})"),
        ));
    }
    Ok(())
}

impl SystemSpec {
    pub fn new(hamiltonian: CMatrix, couplings: Vec<CMatrix>) -> Result<Self> {
        let d = hamiltonian.nrows();
        if d == 0 || hamiltonian.ncols() != d {
            return Err(Error::validation("hamiltonian", "must be a non-empty square matrix"));
        }
        check_hermitian("hamiltonian", &hamiltonian)?;
        if couplings.is_empty() {
            return Err(Error::validation("couplings", "at least one coupling operator is required"));
        }
        for (alpha, a) in couplings.iter().enumerate() {
            let name = format!("coupling[{alpha}]");
            if a.nrows() != d || a.ncols() != d {
                return Err(Error::Dimension(format!(
                    "{name} is {}x{}, hamiltonian is {d}x{d}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            check_hermitian(&name, a)?;
            if max_abs(a) == 0.0 {
                return Err(Error::validation(name, "coupling operator is the zero matrix"));
            }
        }
        Ok(Self {
            hamiltonian,
            couplings,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn couplings(&self) -> &[CMatrix] {
        &self.couplings
    }
}

/// One energy level `ε` with its spectral projector `π_ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub projector: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub levels: Vec<Level>,
    pub degeneracy_tol: f64,
}

impl SpectralDecomposition {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// `Σ ε π_ε`
    pub fn reassemble(&self) -> CMatrix {
        let d = self.levels[0].projector.nrows();
        self.levels
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, l| acc + l.projector.scale(l.energy))
    }

    fn spread(&self) -> f64 {
        let e = self.energies();
        let lo = e.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }

    /// Default gap merging tolerance: `1e-9` times the spectral range.
    pub fn default_gap_tol(&self) -> f64 {
        let range = self.spread();
        if range > 0.0 {
            1e-9 * range
        } else {
            1e-9 * self.levels[0].energy.abs().max(1.0)
        }
    }
}

/// Group sorted values into clusters whose consecutive members differ by at most `tol`.
fn cluster_sorted(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if (v - values[*last.last().unwrap()]).abs() <= tol => last.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    clusters
}

/// Diagonalize `H_S` and merge eigenvalues closer than `degeneracy_tol`.
pub fn eigendecompose(spec: &SystemSpec, degeneracy_tol: f64) -> Result<SpectralDecomposition> {
    if !(degeneracy_tol > 0.0) {
        return Err(Error::validation("degeneracy_tol", "must be positive"));
    }
    let (values, vectors) = linalg::hermitian_eigen(spec.hamiltonian());
    let d = spec.dim();
    let levels = cluster_sorted(&values, degeneracy_tol)
        .into_iter()
        .map(|members| {
            let energy = members.iter().map(|&k| values[k]).sum::<f64>() / members.len() as f64;
            let mut projector = CMatrix::zeros(d, d);
            for &k in &members {
                let v = vectors.column(k);
                projector += v * v.adjoint();
            }
            Level { energy, projector }
        })
        .collect();
    Ok(SpectralDecomposition {
        levels,
        degeneracy_tol,
    })
}

/// Eigenoperators `A_{αω}` of the couplings, indexed by channel and gap.
#[derive(Debug, Clone, PartialEq)]
pub struct GapDecomposition {
    gaps: Vec<f64>,
    channels: usize,
    dim: usize,
    eigenops: BTreeMap<(usize, usize), CMatrix>,
    gap_tol: f64,
}

impl GapDecomposition {
    /// Sorted distinct gaps carrying at least one nonzero eigenoperator.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn n_gaps(&self) -> usize {
        self.gaps.len()
    }

    /// Number of coupling channels `M`.
    pub fn n_channels(&self) -> usize {
        self.channels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gap_tol(&self) -> f64 {
        self.gap_tol
    }

    /// `N = G·M`
    pub fn n_indices(&self) -> usize {
        self.gaps.len() * self.channels
    }

    /// Collective index `i = (α, ω)`, gap-major: `i = g·M + α`.
    pub fn index_map(&self) -> Vec<(usize, f64)> {
        let mut out = Vec::with_capacity(self.n_indices());
        for &w in &self.gaps {
            for alpha in 0..self.channels {
                out.push((alpha, w));
            }
        }
        out
    }

    pub fn gap_index(&self, omega: f64) -> Option<usize> {
        let tol = self.gap_tol.max(1e-14 * omega.abs());
        self.gaps.iter().position(|&w| (w - omega).abs() <= tol)
    }

    /// `A_{αω}` for the gap at position `g`; pruned entries come back as zero.
    pub fn eigenop(&self, alpha: usize, g: usize) -> CMatrix {
        self.eigenops
            .get(&(alpha, g))
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.dim, self.dim))
    }

    pub fn has_eigenop(&self, alpha: usize, g: usize) -> bool {
        self.eigenops.contains_key(&(alpha, g))
    }

    /// Eigenoperators in collective-index order.
    pub fn indexed_ops(&self) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(self.n_indices());
        for g in 0..self.gaps.len() {
            for alpha in 0..self.channels {
                out.push(self.eigenop(alpha, g));
            }
        }
        out
    }
}

/// Split each coupling into eigenoperators of `H_S`, one per energy gap.
pub fn gap_decompose(
    sd: &SpectralDecomposition,
    couplings: &[CMatrix],
    gap_tol: f64,
) -> Result<GapDecomposition> {
    if !(gap_tol > 0.0) {
        return Err(Error::validation("gap_tol", "must be positive"));
    }
    if couplings.is_empty() {
        return Err(Error::validation("couplings", "at least one coupling operator is required"));
    }
    let d = sd.levels[0].projector.nrows();

    // every ordered pair of levels (ε1, ε2) with ω = ε1 - ε2
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i1, l1) in sd.levels.iter().enumerate() {
        for (i2, l2) in sd.levels.iter().enumerate() {
            pairs.push((l1.energy - l2.energy, i1, i2));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let diffs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let clusters = cluster_sorted(&diffs, gap_tol);

    let mut gaps = Vec::new();
    let mut eigenops = BTreeMap::new();
    for members in clusters {
        let omega = members.iter().map(|&k| diffs[k]).sum::<f64>() / members.len() as f64;
        let omega = if omega.abs() <= gap_tol { 0.0 } else { omega };
        let g = gaps.len();
        let mut survived = false;
        for (alpha, a) in couplings.iter().enumerate() {
            if a.nrows() != d {
                return Err(Error::Dimension(format!("coupling[{alpha}] has wrong dimension")));
            }
            let mut op = CMatrix::zeros(d, d);
            for &k in &members {
                let (_, i1, i2) = pairs[k];
                op += &sd.levels[i1].projector * a * &sd.levels[i2].projector;
            }
            if max_abs(&op) >= 1e-14 * max_abs(a) {
                eigenops.insert((alpha, g), op);
                survived = true;
            }
        }
        if survived {
            gaps.push(omega);
        }
    }
    Ok(GapDecomposition {
        gaps,
        channels: couplings.len(),
        dim: d,
        eigenops,
        gap_tol,
    })
}

/// Convenience: eigendecompose and gap-decompose with default tolerances.
pub fn decompose(spec: &SystemSpec) -> Result<(SpectralDecomposition, GapDecomposition)> {
    let scale = max_abs(spec.hamiltonian()).max(1.0);
    let sd = eigendecompose(spec, 1e-9 * scale)?;
    let tol = sd.default_gap_tol();
    let gd = gap_decompose(&sd, spec.couplings(), tol)?;
    Ok((sd, gd))
}

/// Qubit lowering operator `σ₋ = |0⟩⟨1|` with `|0⟩` the ground state.
pub fn sigma_minus() -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = linalg::r(1.0);
    m
}

/// Annihilation operator truncated to `n_max` ladder levels.
pub fn annihilation(n_max: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n_max, n_max);
    for n in 1..n_max {
        a[(n - 1, n)] = linalg::r((n as f64).sqrt());
    }
    a
}
