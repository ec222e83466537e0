use psa_core::dipole::{build_dipole, SystemKind};
use psa_core::dynamics::{
    choi_evolution, evolve, qho_moments, qubit_analytic, QhoParams, QubitParams,
};
use psa_core::linalg::{self, max_abs, r, CMatrix, C64};
use psa_core::positivity::{certify, synthetic_omega, DipoleThresholds, PositivityReport};
use psa_core::spectral::annihilation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{coarse_graining, resolve_grid, RunConfig, Series};
use crate::output::{Artifact, Table};
use crate::CliError;

/// Default visible ranges, in units of 1/ω0.
const QUBIT_T_MAX: f64 = 10.0;
const OSCILLATOR_T_MAX: f64 = 60.0;

pub type Outputs = Vec<(String, Artifact)>;

fn require(series: &Series, kind: SystemKind, command: &str) -> Result<(), CliError> {
    if series.model.system != kind {
        return Err(CliError::Input(format!(
            "{command} needs system = \"{}\" (series '{}')",
            match kind {
                SystemKind::Qubit => "qubit",
                SystemKind::Oscillator => "oscillator",
            },
            series.label
        )));
    }
    Ok(())
}

pub fn threshold_sweep(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Input("threshold-sweep needs a [sweep] block".into()))?;
    let grid = resolve_grid("sweep", sweep.values.clone(), sweep.start, sweep.stop, sweep.points)?;
    // (temperature, beta) per grid point
    let points: Vec<(f64, f64)> = match sweep.parameter.as_str() {
        "temperature" => grid.iter().map(|&t| (t, if t == 0.0 { f64::INFINITY } else { 1.0 / t })).collect(),
        "beta" => grid.iter().map(|&b| (1.0 / b, b)).collect(),
        other => {
            return Err(CliError::Input(format!(
                "sweep parameter '{other}' is not one of temperature, beta"
            )))
        }
    };
    if points.iter().any(|&(t, b)| !(t >= 0.0 && b >= 0.0)) {
        return Err(CliError::Input("sweep values must be >= 0".into()));
    }
    let series = cfg.series()?;
    let tasks: Vec<(usize, f64, f64)> = (0..series.len())
        .flat_map(|s| points.iter().map(move |&(t, b)| (s, t, b)))
        .collect();
    let rows: Vec<(usize, Vec<f64>)> = tasks
        .par_iter()
        .map(|&(s, t, beta)| {
            let model = series[s].model.dipole(Some(beta))?;
            let terms = psa_core::bath::DipoleTerms::compute(&model.bath()?, model.omega0)?;
            let th = DipoleThresholds::of(&terms);
            Ok((s, vec![t, th.exact, th.simple, th.sufficient]))
        })
        .collect::<Result<_, CliError>>()?;

    let mut tables: Vec<Table> = series
        .iter()
        .map(|_| Table::new(&["T", "exact_threshold", "simple_bound", "sufficient_bound"]))
        .collect();
    for (s, row) in rows {
        tables[s].push(row);
    }
    Ok(series
        .into_iter()
        .zip(tables)
        .map(|(s, t)| (s.label, Artifact::Csv(t)))
        .collect())
}

fn run_series<F>(cfg: &RunConfig, f: F) -> Result<Outputs, CliError>
where
    F: Fn(&Series) -> Result<Artifact, CliError> + Sync,
{
    let series = cfg.series()?;
    let artifacts: Vec<Artifact> = series.par_iter().map(&f).collect::<Result<_, _>>()?;
    Ok(series.into_iter().map(|s| s.label).zip(artifacts).collect())
}

/// Qubit from `|+⟩`; basis index 0 is the ground state.
pub fn evolve_qubit(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let times = cfg.time_grid(QUBIT_T_MAX)?;
    let verify = cfg.options.verify;
    run_series(cfg, |series| {
        require(series, SystemKind::Qubit, "evolve")?;
        let model = series.model.dipole(None)?;
        let b = build_dipole(&model)?;
        let rho0 = CMatrix::from_element(2, 2, r(0.5));
        let traj = evolve(&b.liouvillian, &rho0, &times)?;
        let params = QubitParams::from_generator(&b.generator, model.omega0)?;
        let det = traj.determinant();
        let mut table = Table::new(&["t", "rho00", "rho11", "re_rho10", "im_rho10", "det", "oracle_delta"]);
        for (k, (&t, rho)) in times.iter().zip(&traj.states).enumerate() {
            let delta = if verify {
                max_abs(&(rho - qubit_analytic(&params, t)))
            } else {
                f64::NAN
            };
            table.push(vec![
                t,
                rho[(0, 0)].re,
                rho[(1, 1)].re,
                rho[(1, 0)].re,
                rho[(1, 0)].im,
                det[k],
                delta,
            ]);
        }
        Ok(Artifact::Csv(table))
    })
}

/// Ascending eigenvalues of the qubit Choi state.
pub fn choi(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let times = cfg.time_grid(QUBIT_T_MAX)?;
    run_series(cfg, |series| {
        require(series, SystemKind::Qubit, "choi")?;
        let b = build_dipole(&series.model.dipole(None)?)?;
        let traj = choi_evolution(&b.liouvillian, &times)?;
        let mut table = Table::new(&["t", "lambda1", "lambda2", "lambda3", "lambda4"]);
        for (&t, eig) in times.iter().zip(&traj.eigenvalues) {
            let mut row = vec![t];
            row.extend_from_slice(eig);
            table.push(row);
        }
        Ok(Artifact::Csv(table))
    })
}

/// Oscillator moments from the ground state.
pub fn qho(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let times = cfg.time_grid(OSCILLATOR_T_MAX)?;
    let verify = cfg.options.verify;
    run_series(cfg, |series| {
        require(series, SystemKind::Oscillator, "qho")?;
        let model = series.model.dipole(None)?;
        let b = build_dipole(&model)?;
        let params = QhoParams::from_generator(&b.generator, model.omega0)?;
        let moments = qho_moments(&params, C64::new(0.0, 0.0), 0.0, &times)?;
        let deltas = if verify {
            let n = model.n_max;
            let mut ground = CMatrix::zeros(n, n);
            ground[(0, 0)] = r(1.0);
            let traj = evolve(&b.liouvillian, &ground, &times)?;
            let a = annihilation(n);
            let number = a.adjoint() * &a;
            let a2 = &a * &a;
            moments
                .iter()
                .zip(&traj.states)
                .map(|(m, rho)| {
                    let dn = (linalg::trace(&(&number * rho)).re - m.n).abs();
                    let da = (linalg::trace(&(&a2 * rho)) - m.a2).norm();
                    dn.max(da)
                })
                .collect()
        } else {
            vec![f64::NAN; times.len()]
        };
        let mut table = Table::new(&["t", "n", "re_a2", "im_a2", "oracle_delta"]);
        for (m, d) in moments.iter().zip(deltas) {
            table.push(vec![m.t, m.n, m.a2.re, m.a2.im, d]);
        }
        Ok(Artifact::Csv(table))
    })
}

pub fn certify_cmd(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let to_json = |report: &PositivityReport| {
        serde_json::to_value(report).map_err(|e| CliError::Numerical(format!("report serialization: {e}")))
    };
    if let Some(syn) = &cfg.synthetic {
        if !cfg.model.is_empty() || !cfg.series.is_empty() {
            return Err(CliError::Input("use either [synthetic] or [model], not both".into()));
        }
        if syn.gaps.is_empty() || syn.channels == 0 {
            return Err(CliError::Input("synthetic: need at least one gap and one channel".into()));
        }
        let mut gaps = syn.gaps.clone();
        gaps.sort_by(f64::total_cmp);
        let mut rng = ChaCha8Rng::seed_from_u64(syn.seed);
        let omega = synthetic_omega(&gaps, syn.channels, &mut rng)?;
        let cg = coarse_graining(syn.sinc, syn.delta_t, syn.coarse_graining.as_deref())?;
        let report = certify(&omega, cg)?;
        return Ok(vec![(String::new(), Artifact::Json(to_json(&report)?))]);
    }
    run_series(cfg, |series| {
        let model = series.model.dipole(None)?;
        let b = build_dipole(&model)?;
        let mut report = certify(&b.omega, model.coarse_graining)?;
        report.dipole = Some(DipoleThresholds::of(&b.terms));
        Ok(Artifact::Json(to_json(&report)?))
    })
}
