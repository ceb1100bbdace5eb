//! Time integration, periodic orbits, branch continuation in `a` and the
//! prescribed-period search over `nu`.

mod branch;
mod existence;
pub mod integrator;
mod shooting;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{jacobian_apply, rhs_flat, LatticeParams, LatticeState, Variant};

pub use branch::{seed_state, trace_branch, BranchOptions, BranchPoint, BranchTrace, OnsetFit};
pub use existence::{
    admissible_period_catalog, existence_search, log_grid, AdmissibleMode, ExistenceOptions, ExistenceOutcome,
    ScanPoint,
};
pub use integrator::Tolerance;
pub use shooting::{find_orbit_shooting, find_orbit_with, ShootingOptions};

/// States of a trajectory at increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<LatticeState>,
}

/// Adaptive integration over `t_span`, returning every accepted step.
pub fn integrate(
    params: &LatticeParams,
    initial: &LatticeState,
    t_span: (f64, f64),
    tol: Tolerance,
) -> Result<Trajectory> {
    initial.check(params)?;
    let (_, steps) = integrator::solve(
        |_, u, du| rhs_flat(params, u, du),
        t_span.0,
        &initial.to_flat(),
        &[t_span.1],
        tol,
        true,
    )?;
    let mut times = Vec::with_capacity(steps.len());
    let mut states = Vec::with_capacity(steps.len());
    for (t, u) in steps {
        times.push(t);
        states.push(LatticeState::from_flat(&u)?);
    }
    Ok(Trajectory { times, states })
}

/// Integration sampled exactly at the increasing `times` (the first of which is
/// the initial time).
pub fn integrate_at(
    params: &LatticeParams,
    initial: &LatticeState,
    times: &[f64],
    tol: Tolerance,
) -> Result<Trajectory> {
    initial.check(params)?;
    let Some(&t0) = times.first() else {
        return Ok(Trajectory { times: vec![], states: vec![] });
    };
    let (out, _) = integrator::solve(
        |_, u, du| rhs_flat(params, u, du),
        t0,
        &initial.to_flat(),
        times,
        tol,
        false,
    )?;
    let states = out.iter().map(|u| LatticeState::from_flat(u)).collect::<Result<_>>()?;
    Ok(Trajectory { times: times.to_vec(), states })
}

/// `d f / d nu` on the flat layout: the node nonlinearity of the bidirectional
/// system, zero otherwise.
pub(crate) fn nu_derivative(params: &LatticeParams, u: &[f64], out: &mut [f64]) {
    let m = params.sites();
    out.iter_mut().for_each(|v| *v = 0.0);
    if params.variant() == Variant::VdpBidirectionalY {
        let c = params.cubic().factor();
        for i in 0..m {
            let x = u[i];
            out[i] = params.a() * x - c * x * x * x;
        }
    }
}

/// State, state-transition matrix and (optionally) `nu`-sensitivity at one time.
#[derive(Debug, Clone)]
pub struct FlowPoint {
    pub state: Vec<f64>,
    pub phi: DMatrix<f64>,
    pub dnu: Option<DVector<f64>>,
}

/// Integrates the flow together with its variational equation
/// `Phi' = J Phi, Phi(0) = I` (and `S' = J S + df/dnu, S(0) = 0` when
/// `with_nu`), reporting at the increasing `times > 0`.
pub fn variational_flow(
    params: &LatticeParams,
    u0: &[f64],
    times: &[f64],
    tol: Tolerance,
    with_nu: bool,
) -> Result<Vec<FlowPoint>> {
    let dim = params.dim();
    if u0.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: u0.len() });
    }
    let cols = dim + usize::from(with_nu);
    let mut aug = vec![0.0; dim * (1 + cols)];
    aug[..dim].copy_from_slice(u0);
    for j in 0..dim {
        aug[dim + j * dim + j] = 1.0;
    }
    let mut forcing = vec![0.0; dim];
    let (out, _) = integrator::solve(
        |_, w, dw| {
            let (u, v) = w.split_at(dim);
            let (du, dv) = dw.split_at_mut(dim);
            rhs_flat(params, u, du);
            jacobian_apply(params, u, v, dv, cols);
            if with_nu {
                nu_derivative(params, u, &mut forcing);
                let last = &mut dv[dim * dim..];
                for (a, b) in last.iter_mut().zip(&forcing) {
                    *a += b;
                }
            }
        },
        0.0,
        &aug,
        times,
        tol,
        false,
    )?;
    Ok(out
        .into_iter()
        .map(|w| {
            let phi = DMatrix::from_column_slice(dim, dim, &w[dim..dim + dim * dim]);
            let dnu = with_nu.then(|| DVector::from_column_slice(&w[dim + dim * dim..]));
            FlowPoint { state: w[..dim].to_vec(), phi, dnu }
        })
        .collect())
}

/// Monodromy matrix of the orbit through `u0` with period `period`.
pub fn monodromy(params: &LatticeParams, u0: &[f64], period: f64, tol: Tolerance) -> Result<DMatrix<f64>> {
    let mut pts = variational_flow(params, u0, &[period], tol, false)?;
    Ok(pts.remove(0).phi)
}

/// One period of a periodic solution sampled on the uniform grid
/// `s_k = k T / M`, `k = 0..M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub samples: Vec<LatticeState>,
    pub period: f64,
    /// `|x(T) - x(0)|_inf` of the final integration.
    pub residual: f64,
    pub params_at: LatticeParams,
}

impl PeriodicOrbit {
    /// Residual bound for a converged orbit.
    pub const CONVERGED: f64 = 1e-8;

    /// An equilibrium viewed as a periodic orbit of any period.
    pub fn constant(params: &LatticeParams, state: &LatticeState, period: f64, samples: usize) -> Result<Self> {
        state.check(params)?;
        if !(period > 0.0) || samples == 0 {
            return Err(Error::InvalidParameter("period and sample count must be positive".into()));
        }
        Ok(PeriodicOrbit {
            samples: vec![state.clone(); samples],
            period,
            residual: 0.0,
            params_at: *params,
        })
    }

    /// Samples `x(0)` by integrating from `initial` over `[0, period]`.
    pub fn sample(params: &LatticeParams, initial: &LatticeState, period: f64, samples: usize, tol: Tolerance) -> Result<Self> {
        if !(period > 0.0) || samples < 4 {
            return Err(Error::InvalidParameter("need a positive period and at least 4 samples".into()));
        }
        let times: Vec<f64> = (0..=samples).map(|k| period * k as f64 / samples as f64).collect();
        let mut traj = integrate_at(params, initial, &times, tol)?;
        let end = traj.states.pop().expect("at least one output");
        let residual = end
            .x
            .iter()
            .zip(&initial.x)
            .chain(end.y.iter().zip(&initial.y))
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(PeriodicOrbit { samples: traj.states, period, residual, params_at: *params })
    }

    pub fn is_converged(&self) -> bool {
        self.residual <= Self::CONVERGED
    }

    pub fn initial(&self) -> &LatticeState {
        &self.samples[0]
    }

    /// Largest peak-to-peak excursion of any coordinate over the grid.
    pub fn amplitude(&self) -> f64 {
        let dim = self.samples[0].sites();
        let mut worst: f64 = 0.0;
        for block in 0..2 {
            for i in 0..dim {
                let vals = self.samples.iter().map(|s| if block == 0 { s.x[i] } else { s.y[i] });
                let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
                worst = worst.max(hi - lo);
            }
        }
        worst
    }

    /// Peak-to-peak excursion of the `x` block only.
    pub fn x_amplitude(&self) -> f64 {
        let dim = self.samples[0].sites();
        (0..dim)
            .map(|i| {
                let (lo, hi) = self
                    .samples
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.x[i]), hi.max(s.x[i])));
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    /// State at time `s` (any real), by periodic cubic Lagrange interpolation on
    /// the grid; grid points are returned exactly.
    pub fn state_at(&self, s: f64) -> LatticeState {
        let m = self.samples.len();
        let u = (s / self.period * m as f64).rem_euclid(m as f64);
        let k = u.round();
        if (u - k).abs() < 1e-9 {
            return self.samples[(k as usize) % m].clone();
        }
        let i0 = u.floor() as i64;
        let frac = u - i0 as f64;
        let nodes = [-1.0, 0.0, 1.0, 2.0];
        let mut w = [0.0; 4];
        for j in 0..4 {
            let mut l = 1.0;
            for q in 0..4 {
                if q != j {
                    l *= (frac - nodes[q]) / (nodes[j] - nodes[q]);
                }
            }
            w[j] = l;
        }
        let pick = |j: usize| &self.samples[(i0 - 1 + j as i64).rem_euclid(m as i64) as usize];
        let sites = self.samples[0].sites();
        let mut out = LatticeState::zeros(sites);
        for (j, wj) in w.iter().enumerate() {
            let sj = pick(j);
            for i in 0..sites {
                out.x[i] += wj * sj.x[i];
                out.y[i] += wj * sj.y[i];
            }
        }
        out
    }
}
