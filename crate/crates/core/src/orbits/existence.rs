//! Periodic solutions of a prescribed period for the bidirectional system,
//! found by sweeping `nu`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Resonance, Result};
use crate::model::{LatticeParams, Variant};
use crate::orbits::branch::seed_state;
use crate::orbits::shooting::{find_orbit_with, ShootingOptions};
use crate::orbits::PeriodicOrbit;
use crate::spectral::{bifurcation_record, canonical_modes, k_of_mode, ModeIndex};
use crate::symmetry::{
    branch_count, symmetry_classes, verify_orbit_symmetry, SymmetryReport, TwistedSubgroup, DEFAULT_SYMMETRY_TOL,
};

/// A mode admitting `p`-periodic solutions, with its symmetry classes and the
/// number of solutions per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleMode {
    pub mode: ModeIndex,
    pub k: f64,
    pub symmetries: Vec<TwistedSubgroup>,
    pub counts: Vec<u64>,
}

const RESONANCE_TOL: f64 = 1e-9;

/// Modes with `K_t > (2 pi / p)^2`. Fails when some `K_t` vanishes or when `p`
/// equals `2 pi (2k - 1) / sqrt(b K_t)` for some mode and `k >= 1`.
pub fn admissible_period_catalog(params: &LatticeParams, p: f64) -> Result<Vec<AdmissibleMode>> {
    if params.variant() != Variant::VdpBidirectionalY {
        return Err(Error::WrongVariant { expected: Variant::VdpBidirectionalY.short_name() });
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("period must be positive, got {p}")));
    }
    let n = params.n();
    let modes = canonical_modes(n);
    let mut offending = Vec::new();
    for t in &modes {
        let k = k_of_mode(params, t);
        if k.abs() <= 1e-12 {
            return Err(Error::SingularMode { mode: *t });
        }
        if k > 0.0 {
            let base = 2.0 * PI / (params.b() * k).sqrt();
            let top = (p / base + 1.0) / 2.0 + 1.0;
            for j in 1..=(top.ceil() as i64) {
                let pj = base * (2 * j - 1) as f64;
                if (p - pj).abs() <= RESONANCE_TOL * p.max(1.0) {
                    offending.push(Resonance { k: j, mode: *t, k_value: k });
                }
            }
        }
    }
    if !offending.is_empty() {
        return Err(Error::RejectedResonantPeriod { period: p, offending });
    }
    let thresh = (2.0 * PI / p).powi(2);
    modes
        .into_iter()
        .filter_map(|t| {
            let k = k_of_mode(params, &t);
            (k > thresh).then_some((t, k))
        })
        .map(|(t, k)| {
            let symmetries = symmetry_classes(&t, params.variant(), n);
            let counts = symmetries.iter().map(branch_count).collect::<Result<Vec<_>>>()?;
            Ok(AdmissibleMode { mode: t, k, symmetries, counts })
        })
        .collect()
}

/// `count` logarithmically spaced points in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (l, h) = (lo.ln(), hi.ln());
    (0..count).map(|i| (l + (h - l) * i as f64 / (count - 1) as f64).exp()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceOptions {
    pub shooting: ShootingOptions,
    pub symmetry_tol: f64,
    /// Peak amplitude of the first seed; defaults to the averaged vdP amplitude.
    pub seed_amplitude: Option<f64>,
}

impl Default for ExistenceOptions {
    fn default() -> Self {
        ExistenceOptions { shooting: ShootingOptions::default(), symmetry_tol: DEFAULT_SYMMETRY_TOL, seed_amplitude: None }
    }
}

/// Free-period solve at one grid value of `nu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub nu: f64,
    pub period: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExistenceOutcome {
    Found {
        nu: f64,
        orbit: PeriodicOrbit,
        report: SymmetryReport,
        /// Solutions in the group orbit of the one found.
        count: u64,
        scan: Vec<ScanPoint>,
    },
    /// Nothing found on the grid. This does not rule out a solution at a `nu`
    /// outside the grid or between grid points.
    Exhausted { scan: Vec<ScanPoint>, reason: String },
}

/// Sweeps `nu` upward over `nu_grid` with period continuation, looks for a
/// bracket of the target period `p`, then solves for `nu` at fixed period `p`.
/// `params.nu()` is ignored; the cubic normalization is taken from `params`.
pub fn existence_search(
    params: &LatticeParams,
    p: f64,
    t: &ModeIndex,
    symmetry: &TwistedSubgroup,
    nu_grid: &[f64],
    opts: &ExistenceOptions,
) -> Result<ExistenceOutcome> {
    let n = params.n();
    let t = t.canonical(n);
    let catalog = admissible_period_catalog(params, p)?;
    let entry = catalog
        .iter()
        .find(|m| m.mode == t)
        .ok_or_else(|| Error::Inadmissible(format!("mode {t} has K_t <= (2 pi / p)^2 for p = {p}")))?;
    let idx = entry
        .symmetries
        .iter()
        .position(|h| h == symmetry)
        .ok_or_else(|| Error::Inadmissible(format!("{symmetry} is not a symmetry class of mode {t}")))?;
    let count = entry.counts[idx];
    let mut grid: Vec<f64> = nu_grid.iter().copied().filter(|v| *v > 0.0).collect();
    if grid.is_empty() {
        return Err(Error::InvalidParameter("nu grid has no positive values".into()));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut shoot = opts.shooting.clone();
    shoot.symmetry = Some(*symmetry);
    shoot.fixed_period = None;

    let mut scan: Vec<ScanPoint> = Vec::new();
    let mut prev: Option<(f64, PeriodicOrbit)> = None;
    for &nu in &grid {
        let pn = (*params).with_nu(nu)?;
        let record = bifurcation_record(&pn, &t).ok_or_else(|| Error::Inadmissible(format!("mode {t} has no Hopf point")))?;
        let (guess, t_guess) = match &prev {
            Some((_, o)) => (o.initial().clone(), o.period),
            None => {
                let amp = opts
                    .seed_amplitude
                    .unwrap_or_else(|| 2.0 * (pn.a().max(1e-2) / (3.0 * pn.cubic().factor())).sqrt());
                let (s, w) = seed_state(&pn, &record, symmetry, 1.0)?;
                let peak = s.x.iter().chain(&s.y).fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
                let s = crate::model::LatticeState {
                    x: s.x.iter().map(|v| v * amp / peak).collect(),
                    y: s.y.iter().map(|v| v * amp / peak).collect(),
                };
                (s, 2.0 * PI / w)
            }
        };
        match find_orbit_with(&pn, &guess, t_guess, &shoot) {
            Ok(orbit) => {
                let period = orbit.period;
                scan.push(ScanPoint { nu, period: Some(period), error: None });
                if let Some((nu0, o0)) = &prev {
                    if (o0.period - p) * (period - p) <= 0.0 {
                        let w = (p - o0.period) / (period - o0.period);
                        let nu_guess = nu0 + w * (nu - nu0);
                        let start = if w < 0.5 { o0 } else { &orbit };
                        let mut fixed = shoot.clone();
                        fixed.fixed_period = Some(p);
                        let p_guess = (*params).with_nu(nu_guess)?;
                        match find_orbit_with(&p_guess, start.initial(), p, &fixed) {
                            Ok(found) => {
                                let report = verify_orbit_symmetry(&found, symmetry, opts.symmetry_tol)?;
                                if report.holds && report.minimal && ((found.period - p) / p).abs() <= 1e-6 {
                                    return Ok(ExistenceOutcome::Found {
                                        nu: found.params_at.nu(),
                                        orbit: found,
                                        report,
                                        count,
                                        scan,
                                    });
                                }
                            }
                            Err(e) => {
                                scan.push(ScanPoint { nu: nu_guess, period: None, error: Some(format!("refinement: {e}")) });
                            }
                        }
                    }
                }
                prev = Some((nu, orbit));
            }
            Err(e) => {
                scan.push(ScanPoint { nu, period: None, error: Some(e.to_string()) });
                prev = None;
            }
        }
    }
    Ok(ExistenceOutcome::Exhausted {
        scan,
        reason: format!("no bracket of p = {p} found on the nu grid; this does not refute existence at other nu"),
    })
}
