//! Natural-parameter continuation of a Hopf branch in `a`.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{coupling_matrix, LatticeParams, LatticeState, Variant};
use crate::orbits::shooting::{find_orbit_with, ShootingOptions};
use crate::orbits::PeriodicOrbit;
use crate::spectral::BifurcationRecord;
use crate::symmetry::{fixed_mode_vector, verify_orbit_symmetry, SymmetryReport, TwistedSubgroup, DEFAULT_SYMMETRY_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub a: f64,
    pub orbit: PeriodicOrbit,
    pub amplitude: f64,
    pub symmetry_report: SymmetryReport,
}

/// Least-squares line `amplitude^2 = slope (a - a_c) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnsetFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchTrace {
    pub critical_a: f64,
    pub symmetry: String,
    /// Angular frequency of the linear seed.
    pub seed_frequency: f64,
    pub points: Vec<BranchPoint>,
    /// Why the branch stopped before the end of the range.
    pub truncated: Option<String>,
    pub onset_fit: Option<OnsetFit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchOptions {
    pub shooting: ShootingOptions,
    pub symmetry_tol: f64,
    /// Points used for the square-root fit.
    pub fit_points: usize,
}

impl Default for BranchOptions {
    fn default() -> Self {
        BranchOptions { shooting: ShootingOptions::default(), symmetry_tol: DEFAULT_SYMMETRY_TOL, fit_points: 5 }
    }
}

/// Linear-mode seed `A Re(e^{i w s} v)` in the fixed space of `symmetry` at
/// parameter `params.a()`, where `v` spans the `H`-fixed line of the
/// complexified mode space and `w` is the positive frequency of the linear
/// dynamics on that line. Returns the state at `s = 0` and `w`.
pub fn seed_state(
    params: &LatticeParams,
    record: &BifurcationRecord,
    symmetry: &TwistedSubgroup,
    amplitude: f64,
) -> Result<(LatticeState, f64)> {
    let (v, defect) = fixed_mode_vector(params, &record.mode, symmetry)?;
    if defect > 1e-8 {
        return Err(Error::Inadmissible(format!(
            "{symmetry} fixes no vector in the mode space of {} (defect {defect:e})",
            record.mode
        )));
    }
    // x' = alpha x + beta y, y' = b x on the line spanned by v
    let (alpha, beta) = match params.variant() {
        Variant::VdpBidirectionalY => {
            let k = record.k.unwrap_or(1.0);
            (Complex::new(params.nu() * params.a(), 0.0), Complex::new(-k, 0.0))
        }
        Variant::VdplUnidirectionalX => {
            let c = coupling_matrix(params);
            let re: Vec<f64> = v.iter().map(|z| z.re).collect();
            let im: Vec<f64> = v.iter().map(|z| z.im).collect();
            let (cr, ci) = (c.apply(&re), c.apply(&im));
            let mu: Complex<f64> = v
                .iter()
                .zip(cr.iter().zip(&ci))
                .map(|(z, (a, b))| z.conj() * Complex::new(*a, *b))
                .sum();
            (Complex::new(params.a(), 0.0) - mu, Complex::new(-1.0, 0.0))
        }
    };
    let disc = (alpha * alpha + 4.0 * params.b() * beta).sqrt();
    let roots = [(alpha + disc) * 0.5, (alpha - disc) * 0.5];
    let lam = if roots[0].im >= roots[1].im { roots[0] } else { roots[1] };
    let w = lam.im;
    if !(w > 0.0) {
        return Err(Error::Inadmissible(format!("no oscillatory linear dynamics on the {symmetry} line")));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let x: Vec<f64> = v.iter().map(|z| amplitude * z.re / norm).collect();
    // y' = b x  =>  y = Re(b v e^{iws} / (iw))
    let y: Vec<f64> = v.iter().map(|z| amplitude * params.b() * z.im / (w * norm)).collect();
    Ok((LatticeState { x, y }, w))
}

fn onset_fit(points: &[BranchPoint], a_c: f64, count: usize) -> Option<OnsetFit> {
    let pts: Vec<(f64, f64)> =
        points.iter().take(count).map(|p| (p.a - a_c, p.amplitude * p.amplitude)).collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(OnsetFit { slope, intercept, r_squared, points: pts.len() })
}

/// Continues the branch of `record` with symmetry `symmetry` over
/// `a = a_start, a_start + step, ...` up to `a_end`. The first orbit is seeded
/// with amplitude `10 sqrt(a - a_c)` along the fixed mode vector; each later
/// point starts from its predecessor rescaled by the square-root law. The
/// trace stops early, with a diagnostic, when shooting fails or the symmetry
/// no longer holds.
pub fn trace_branch(
    params: &LatticeParams,
    record: &BifurcationRecord,
    symmetry: &TwistedSubgroup,
    a_range: (f64, f64),
    step: f64,
    opts: &BranchOptions,
) -> Result<BranchTrace> {
    let a_c = record.critical_a;
    let (a_start, a_end) = a_range;
    if !(step > 0.0) || a_end < a_start {
        return Err(Error::InvalidParameter("need step > 0 and an increasing a-range".into()));
    }
    if a_start <= a_c {
        return Err(Error::InvalidParameter(format!(
            "a-range must start on the supercritical side of a_c = {a_c}"
        )));
    }
    let count = ((a_end - a_start) / step + 1e-9).floor() as usize + 1;
    let mut shoot = opts.shooting.clone();
    shoot.symmetry = Some(*symmetry);

    let p0 = (*params).with_a(a_start);
    let (mut guess, w) = seed_state(&p0, record, symmetry, 10.0 * (a_start - a_c).sqrt())?;
    let mut t_guess = 2.0 * std::f64::consts::PI / w;
    let mut points: Vec<BranchPoint> = Vec::new();
    let mut truncated = None;

    for k in 0..count {
        let a = a_start + k as f64 * step;
        let p = (*params).with_a(a);
        if let Some(prev) = points.last() {
            let scale = ((a - a_c) / (prev.a - a_c)).sqrt();
            let s = prev.orbit.initial();
            guess = LatticeState { x: s.x.iter().map(|v| v * scale).collect(), y: s.y.iter().map(|v| v * scale).collect() };
            t_guess = prev.orbit.period;
        }
        let orbit = match find_orbit_with(&p, &guess, t_guess, &shoot) {
            Ok(o) => o,
            Err(e) => {
                truncated = Some(format!("shooting failed at a = {a}: {e}"));
                break;
            }
        };
        let report = verify_orbit_symmetry(&orbit, symmetry, opts.symmetry_tol)?;
        if !report.holds {
            truncated = Some(format!("symmetry {} broken at a = {a} (defect {:e})", report.subgroup, report.max_defect));
            break;
        }
        let amplitude = orbit.x_amplitude() / 2.0;
        points.push(BranchPoint { a, orbit, amplitude, symmetry_report: report });
    }

    let onset_fit = onset_fit(&points, a_c, opts.fit_points);
    Ok(BranchTrace {
        critical_a: a_c,
        symmetry: symmetry.to_string(),
        seed_frequency: w,
        points,
        truncated,
        onset_fit,
    })
}
