//! Newton shooting for periodic orbits, optionally constrained by a
//! spatio-temporal symmetry.
//!
//! Unknowns are the initial state `u0` and either the period `T` or, for a
//! prescribed period, the parameter `nu`. The residual stacks
//!
//! * `phi(T; u0) - u0`,
//! * `phi(theta T / 2 pi; u0) - g u0` for every generator `(g, theta)` of the
//!   requested twisted subgroup,
//!
//! and a phase row `f(u0_k) . (u0 - u0_k) = 0` anchors the update orthogonally
//! to the flow. The overdetermined linear systems are solved in the
//! least-squares sense.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::model::{rhs_flat, LatticeParams, LatticeState};
use crate::orbits::integrator::{self, Tolerance};
use crate::orbits::{variational_flow, PeriodicOrbit};
use crate::spectral::ModeIndex;
use crate::symmetry::TwistedSubgroup;

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingOptions {
    pub max_iter: usize,
    /// Target for the sup norm of the stacked residual.
    pub tol: f64,
    pub integ: Tolerance,
    pub symmetry: Option<TwistedSubgroup>,
    /// Grid size of the returned orbit.
    pub samples: usize,
    /// Solve for `nu` at this fixed period instead of for the period.
    pub fixed_period: Option<f64>,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        ShootingOptions {
            max_iter: 40,
            tol: 1e-10,
            integ: Tolerance { rtol: 1e-10, atol: 1e-12 },
            symmetry: None,
            samples: 120,
            fixed_period: None,
        }
    }
}

/// Shooting with default options and no symmetry constraint. A `mode_hint` is
/// only checked for being reduced mod `N`; symmetries are imposed through
/// [`find_orbit_with`].
pub fn find_orbit_shooting(
    params: &LatticeParams,
    guess: &LatticeState,
    t_guess: f64,
    mode_hint: Option<ModeIndex>,
) -> Result<PeriodicOrbit> {
    if let Some(t) = mode_hint {
        let n = params.n() as i64;
        if t.0.iter().any(|&v| v as i64 >= n) {
            return Err(Error::InvalidParameter(format!("mode {t} is not reduced mod {n}")));
        }
    }
    find_orbit_with(params, guess, t_guess, &ShootingOptions::default())
}

/// A symmetry constraint `x(lag) = g x(0)` with `lag` a fraction of the period.
struct Constraint {
    frac: f64,
    perm: Vec<usize>,
}

fn constraints(params: &LatticeParams, h: &TwistedSubgroup) -> Result<Vec<Constraint>> {
    let n = params.n();
    if h.n != n || h.variant != params.variant() {
        return Err(Error::MalformedSubgroup(format!("{h} does not act on this lattice")));
    }
    let m = params.sites();
    let index: Vec<f64> = (0..m).map(|i| i as f64).collect();
    Ok(h.generators()
        .into_iter()
        .map(|(g, phase)| {
            // (g v)_i = v_{perm[i]}
            let perm = g.act_vec(&index).iter().map(|&v| v as usize).collect();
            Constraint { frac: phase as f64 / (2 * n) as f64, perm }
        })
        .collect())
}

fn act_flat(c: &Constraint, m: usize, u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 2 * m];
    for i in 0..m {
        out[i] = u[c.perm[i]];
        out[m + i] = u[m + c.perm[i]];
    }
    out
}

/// Distinct sorted output fractions of the period (always ending in 1).
fn fractions(cons: &[Constraint]) -> Vec<f64> {
    let mut f: Vec<f64> = cons.iter().map(|c| c.frac).filter(|&v| v > 0.0).collect();
    f.push(1.0);
    f.sort_by(f64::total_cmp);
    f.dedup();
    f
}

fn position(fracs: &[f64], v: f64) -> usize {
    fracs.iter().position(|&f| f == v).expect("fraction is in the output list")
}

/// Residual vector (without the phase row) at `(u0, period, params)`.
fn residual(
    params: &LatticeParams,
    u0: &[f64],
    period: f64,
    cons: &[Constraint],
    fracs: &[f64],
    tol: Tolerance,
) -> Result<DVector<f64>> {
    let dim = u0.len();
    let m = dim / 2;
    let times: Vec<f64> = fracs.iter().map(|f| f * period).collect();
    let (states, _) = integrator::solve(|_, u, du| rhs_flat(params, u, du), 0.0, u0, &times, tol, false)?;
    let mut r = DVector::zeros(dim * (1 + cons.len()));
    let end = &states[fracs.len() - 1];
    for i in 0..dim {
        r[i] = end[i] - u0[i];
    }
    for (k, c) in cons.iter().enumerate() {
        let gu = act_flat(c, m, u0);
        let at: &[f64] = if c.frac > 0.0 { &states[position(fracs, c.frac)] } else { u0 };
        for i in 0..dim {
            r[dim * (k + 1) + i] = at[i] - gu[i];
        }
    }
    Ok(r)
}

fn sup(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Shooting with explicit options.
pub fn find_orbit_with(
    params: &LatticeParams,
    guess: &LatticeState,
    t_guess: f64,
    opts: &ShootingOptions,
) -> Result<PeriodicOrbit> {
    guess.check(params)?;
    if !(t_guess > 0.0) {
        return Err(Error::InvalidParameter(format!("period guess must be positive, got {t_guess}")));
    }
    let amplitude = guess.sup_norm();
    if amplitude <= 1e-12 {
        return Err(Error::ConstantGuess { amplitude });
    }
    let cons = match &opts.symmetry {
        Some(h) => constraints(params, h)?,
        None => Vec::new(),
    };
    let fracs = fractions(&cons);
    let dim = params.dim();
    let m = params.sites();
    let free_nu = opts.fixed_period.is_some();

    let mut p = *params;
    let mut u0 = guess.to_flat();
    let mut period = opts.fixed_period.unwrap_or(t_guess);
    let mut r = residual(&p, &u0, period, &cons, &fracs, opts.integ)?;
    let mut rn = r.norm();
    let mut iterations = 0;

    while sup(&r) > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::NoOrbitFound { iterations, residual: sup(&r) });
        }
        iterations += 1;

        let times: Vec<f64> = fracs.iter().map(|f| f * period).collect();
        let flow = variational_flow(&p, &u0, &times, opts.integ, free_nu)?;
        let rows = dim * (1 + cons.len()) + 1;
        let mut jac = DMatrix::zeros(rows, dim + 1);
        let mut f_at = vec![0.0; dim];

        // periodicity block
        let end = &flow[fracs.len() - 1];
        jac.view_mut((0, 0), (dim, dim)).copy_from(&end.phi);
        for i in 0..dim {
            jac[(i, i)] -= 1.0;
        }
        if free_nu {
            jac.view_mut((0, dim), (dim, 1)).copy_from(end.dnu.as_ref().expect("nu sensitivity"));
        } else {
            rhs_flat(&p, &end.state, &mut f_at);
            for i in 0..dim {
                jac[(i, dim)] = f_at[i];
            }
        }

        // symmetry blocks
        for (k, c) in cons.iter().enumerate() {
            let off = dim * (k + 1);
            if c.frac > 0.0 {
                let fp = &flow[position(&fracs, c.frac)];
                jac.view_mut((off, 0), (dim, dim)).copy_from(&fp.phi);
                if free_nu {
                    jac.view_mut((off, dim), (dim, 1)).copy_from(fp.dnu.as_ref().expect("nu sensitivity"));
                } else {
                    rhs_flat(&p, &fp.state, &mut f_at);
                    for i in 0..dim {
                        jac[(off + i, dim)] = c.frac * f_at[i];
                    }
                }
            } else {
                for i in 0..dim {
                    jac[(off + i, i)] += 1.0;
                }
            }
            for i in 0..m {
                jac[(off + i, c.perm[i])] -= 1.0;
                jac[(off + m + i, m + c.perm[i])] -= 1.0;
            }
        }

        // phase row
        rhs_flat(&p, &u0, &mut f_at);
        let fnorm = f_at.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
        for i in 0..dim {
            jac[(rows - 1, i)] = f_at[i] / fnorm;
        }

        let mut rhs_vec = DVector::zeros(rows);
        rhs_vec.rows_mut(0, rows - 1).copy_from(&r);
        let delta = least_squares(&jac, &rhs_vec)?;

        // damped update
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let u_try: Vec<f64> = u0.iter().zip(delta.iter()).map(|(u, d)| u - lambda * d).collect();
            let z_try = if free_nu { p.nu() } else { period } - lambda * delta[dim];
            let trial = if free_nu {
                p.with_nu(z_try).and_then(|pt| {
                    residual(&pt, &u_try, period, &cons, &fracs, opts.integ).map(|r| (pt, r))
                })
            } else if z_try > 0.0 {
                residual(&p, &u_try, z_try, &cons, &fracs, opts.integ).map(|r| (p, r))
            } else {
                Err(Error::InvalidParameter("nonpositive period".into()))
            };
            if let Ok((pt, r_try)) = trial {
                let n_try = r_try.norm();
                if n_try.is_finite() && (n_try < rn || lambda < 1e-3) {
                    u0 = u_try;
                    if free_nu {
                        p = pt;
                    } else {
                        period = z_try;
                    }
                    r = r_try;
                    rn = n_try;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NoOrbitFound { iterations, residual: sup(&r) });
        }
    }

    let start = LatticeState::from_flat(&u0)?;
    let orbit = PeriodicOrbit::sample(&p, &start, period, opts.samples, opts.integ)?;
    if orbit.amplitude() <= 1e-6 {
        // converged onto the equilibrium
        return Err(Error::NoOrbitFound { iterations, residual: sup(&r) });
    }
    if !orbit.is_converged() {
        return Err(Error::OrbitNotConverged { residual: orbit.residual, limit: PeriodicOrbit::CONVERGED });
    }
    Ok(orbit)
}
