//! Time evolution under a Liouvillian, steady states, and the closed-form
//! qubit, Choi-eigenvalue and oscillator-moment solutions used as oracles.

mod choi;
mod qho;
mod qubit;

pub use choi::{choi_eigenvalue_analytic, choi_evolution, choi_state, ChoiTrajectory};
pub use qho::{qho_moments, MomentPoint, QhoParams};
pub use qubit::{qubit_analytic, QubitParams};

use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};
use crate::generator::Liouvillian;
use crate::linalg::{self, CMatrix, CVector, C64};

/// Density matrices sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `tr(O ρ(t))` at every sample.
    pub fn expectation(&self, op: &CMatrix) -> Vec<C64> {
        self.states.iter().map(|rho| linalg::trace(&(op * rho))).collect()
    }

    pub fn population(&self, level: usize) -> Vec<f64> {
        self.states.iter().map(|rho| rho[(level, level)].re).collect()
    }

    /// `⟨i|ρ(t)|j⟩`
    pub fn element(&self, i: usize, j: usize) -> Vec<C64> {
        self.states.iter().map(|rho| rho[(i, j)]).collect()
    }

    pub fn determinant(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|rho| linalg::hermitize(rho).determinant().re)
            .collect()
    }

    pub fn min_eigenvalue(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|rho| linalg::hermitian_eigenvalues(&linalg::hermitize(rho))[0])
            .collect()
    }

    /// Largest `|tr ρ − 1|` and `max|ρ − ρ†|` over the trajectory.
    pub fn invariant_defects(&self) -> (f64, f64) {
        self.states.iter().fold((0.0f64, 0.0f64), |(tr, herm), rho| {
            (
                tr.max((linalg::trace(rho) - C64::new(1.0, 0.0)).norm()),
                herm.max(linalg::hermitian_defect(rho)),
            )
        })
    }
}

/// Sparse exponential-action integrator for `ẋ = L x`.
///
/// Each time increment is split into substeps with `‖hL‖₁ ≤ 1/2` and the
/// Taylor series of `e^{hL}x` is summed until the terms drop below `1e-17`
/// of the running vector; the local error is then far below `1e-10`.
pub(crate) struct Propagator {
    matrix: CsrMatrix<C64>,
    norm1: f64,
}

const SUBSTEP_NORM: f64 = 0.5;
const TAYLOR_TOL: f64 = 1e-17;
const MAX_TAYLOR_TERMS: usize = 64;
/// Substep budget per output interval; longer spans are reported as failures.
const MAX_SUBSTEPS: f64 = 1e7;

impl Propagator {
    pub(crate) fn new(l: &Liouvillian) -> Self {
        let norm1 = (0..l.matrix.ncols())
            .map(|j| l.matrix.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        Self {
            matrix: CsrMatrix::from(&l.matrix),
            norm1,
        }
    }

    fn apply(&self, v: &CVector, out: &mut CVector) {
        for (i, row) in self.matrix.row_iter().enumerate() {
            out[i] = row
                .col_indices()
                .iter()
                .zip(row.values())
                .fold(C64::new(0.0, 0.0), |acc, (&j, &a)| acc + a * v[j]);
        }
    }

    /// Advance `v` by time `dt`, reporting the failure time `t_end` if the
    /// state stops being finite.
    pub(crate) fn advance(&self, v: &mut CVector, dt: f64, t_end: f64) -> Result<()> {
        if dt == 0.0 {
            return Ok(());
        }
        let steps = (dt * self.norm1 / SUBSTEP_NORM).ceil();
        if !(steps <= MAX_SUBSTEPS) {
            return Err(Error::Integration { time: t_end });
        }
        let steps = (steps as usize).max(1);
        let h = dt / steps as f64;
        let mut term = v.clone();
        let mut next = v.clone();
        for _ in 0..steps {
            term.copy_from(v);
            for k in 1..=MAX_TAYLOR_TERMS {
                self.apply(&term, &mut next);
                next *= C64::new(h / k as f64, 0.0);
                std::mem::swap(&mut term, &mut next);
                *v += &term;
                if term.norm() <= TAYLOR_TOL * v.norm() {
                    break;
                }
            }
            if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::Integration { time: t_end });
            }
        }
        Ok(())
    }
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::validation("times", "empty grid"));
    }
    if !(times[0] >= 0.0) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::validation("times", "must be finite and start at t >= 0"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation("times", "must be strictly increasing"));
    }
    Ok(())
}

/// Propagate an arbitrary (not necessarily Hermitian) operator.
pub(crate) fn propagate(prop: &Propagator, x0: &CMatrix, times: &[f64]) -> Result<Vec<CMatrix>> {
    let d = x0.nrows();
    let mut v = linalg::vectorize(x0);
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        prop.advance(&mut v, target - t, target)?;
        t = target;
        out.push(linalg::unvectorize(&v, d));
    }
    Ok(out)
}

/// Tolerance on the initial state's Hermiticity, trace and eigenvalues.
const STATE_TOL: f64 = 1e-10;

pub fn validate_density_matrix(rho: &CMatrix) -> Result<()> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::Dimension("density matrix must be square".into()));
    }
    if linalg::hermitian_defect(rho) > STATE_TOL {
        return Err(Error::validation("rho0", "not Hermitian"));
    }
    let tr = linalg::trace(rho);
    if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
        return Err(Error::validation("rho0", format!("trace {tr} != 1")));
    }
    if linalg::hermitian_eigenvalues(rho)[0] < -STATE_TOL {
        return Err(Error::validation("rho0", "not positive semidefinite"));
    }
    Ok(())
}

/// Evolve `rho0` (taken at `t = 0`) and sample at `times`.
pub fn evolve(l: &Liouvillian, rho0: &CMatrix, times: &[f64]) -> Result<Trajectory> {
    validate_density_matrix(rho0)?;
    if rho0.nrows() != l.dim {
        return Err(Error::Dimension(format!(
            "state is {}x{}, generator acts on dimension {}",
            rho0.nrows(),
            rho0.ncols(),
            l.dim
        )));
    }
    check_times(times)?;
    let states = propagate(&Propagator::new(l), rho0, times)?;
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}

/// Uniform grid of `n` points on `[0, t_max]`.
pub fn uniform_times(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Relative threshold on the second-smallest singular value.
pub const KERNEL_TOL: f64 = 1e-9;

/// Connected components of the sparsity graph of `L` (indices coupled by any
/// non-zero entry). The kernel of `L` splits over them.
fn components(m: &CMatrix) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..n {
            if m[(i, j)] != C64::new(0.0, 0.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Unique stationary state of `L`, from the null space of its matrix.
///
/// Singular values are compared to `KERNEL_TOL·σ_max`; more than one null
/// direction is reported as a non-unique steady state.
pub fn steady_state(l: &Liouvillian) -> Result<CMatrix> {
    let n = l.matrix.nrows();
    // (component, singular value, right singular vector)
    let mut spectrum: Vec<(usize, f64, CVector)> = vec![];
    let comps = components(&l.matrix);
    for (c_idx, comp) in comps.iter().enumerate() {
        let sub = CMatrix::from_fn(comp.len(), comp.len(), |i, j| l.matrix[(comp[i], comp[j])]);
        let svd = sub.svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        for (k, &s) in svd.singular_values.iter().enumerate() {
            spectrum.push((c_idx, s, v_t.row(k).adjoint()));
        }
    }
    let sigma_max = spectrum.iter().map(|x| x.1).fold(0.0, f64::max);
    let null: Vec<&(usize, f64, CVector)> = spectrum.iter().filter(|x| x.1 <= KERNEL_TOL * sigma_max).collect();
    let kernel_dim = null.len();
    if kernel_dim != 1 {
        return Err(Error::NonUniqueSteadyState { kernel_dim });
    }
    let (c_idx, _, ref v) = *null[0];
    let comp = &comps[c_idx];
    let mut full = CVector::zeros(n);
    for (k, &idx) in comp.iter().enumerate() {
        full[idx] = v[k];
    }
    let rho = linalg::unvectorize(&full, l.dim);
    let tr = linalg::trace(&rho);
    if tr.norm() < 1e-12 {
        return Err(Error::NonUniqueSteadyState { kernel_dim });
    }
    Ok(linalg::hermitize(&(rho / tr)))
}
