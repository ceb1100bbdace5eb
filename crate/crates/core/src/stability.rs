//! Stability of the origin and of computed periodic orbits.

use std::f64::consts::PI;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sorted_eigenvalues;
use crate::model::{rhs_flat, LatticeParams, Variant};
use crate::orbits::{monodromy, PeriodicOrbit, ShootingOptions, Tolerance};
use crate::spectral::{all_modes, critical_a_vdpl, eigenvalues_vdp, eigenvalues_vdpl, k_of_mode, ModeIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    EquilibriumStable,
    EquilibriumUnstable,
    OrbitStable,
    OrbitUnstable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    /// A mode and the scalar that decides the verdict (`K_t`, `Re lambda`, ...).
    Mode { mode: ModeIndex, label: String, value: f64 },
    Multiplier { re: f64, im: f64, modulus: f64 },
    Value { label: String, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub kind: VerdictKind,
    pub witnesses: Vec<Witness>,
}

/// `theta_N = (N - 1) pi / N`
pub fn theta_n(n: usize) -> f64 {
    (n as f64 - 1.0) * PI / n as f64
}

/// Sufficient condition for instability of the origin of the bidirectional
/// system: some `k in {0,1}^3` with `k1 delta + k2 zeta + k3 epsilon` below
/// `1 / (2 (cos theta_N - 1))`. The witness mode `k (N-1)/2` then has `K_t < 0`.
pub fn vdp_instability_criterion(params: &LatticeParams) -> Result<StabilityVerdict> {
    if params.variant() != Variant::VdpBidirectionalY {
        return Err(Error::WrongVariant { expected: Variant::VdpBidirectionalY.short_name() });
    }
    let n = params.n();
    let threshold = 1.0 / (2.0 * (theta_n(n).cos() - 1.0));
    let c = params.couplings();
    let h = (n - 1) / 2;
    let mut witnesses = Vec::new();
    for k in 0..8usize {
        let bits = [(k >> 2) & 1, (k >> 1) & 1, k & 1];
        let s: f64 = bits.iter().zip(&c).map(|(b, ci)| *b as f64 * ci).sum();
        if s < threshold {
            let t = ModeIndex(bits.map(|b| b * h));
            witnesses.push(Witness::Mode { mode: t, label: "K_t".into(), value: k_of_mode(params, &t) });
        }
    }
    if witnesses.is_empty() {
        return Ok(StabilityVerdict {
            kind: VerdictKind::Inconclusive,
            witnesses: vec![Witness::Value { label: "threshold".into(), value: threshold }],
        });
    }
    Ok(StabilityVerdict { kind: VerdictKind::EquilibriumUnstable, witnesses })
}

/// `a* = sum_{c_i > 0} c_i (1 - cos theta_N)` and its leading mode, which has
/// `t_i = (N-1)/2` on the positively coupled axes and `0` elsewhere.
pub fn vdpl_threshold(params: &LatticeParams) -> Result<(f64, ModeIndex)> {
    if params.variant() != Variant::VdplUnidirectionalX {
        return Err(Error::WrongVariant { expected: Variant::VdplUnidirectionalX.short_name() });
    }
    let n = params.n();
    let mut sum = 0.0;
    let mut t = [0usize; 3];
    for (i, c) in params.couplings().iter().enumerate() {
        if *c > 0.0 {
            sum += c;
            t[i] = (n - 1) / 2;
        }
    }
    Ok((sum * (1.0 - theta_n(n).cos()), ModeIndex(t)))
}

/// Largest real part over the closed-form spectrum at `a`, and the mode carrying it.
pub fn leading_eigenvalue(params: &LatticeParams, a: f64) -> (f64, ModeIndex) {
    let mut best = (f64::NEG_INFINITY, ModeIndex::zero());
    for t in all_modes(params.n()) {
        let ev = match params.variant() {
            Variant::VdpBidirectionalY => eigenvalues_vdp(params, &t, a),
            Variant::VdplUnidirectionalX => eigenvalues_vdpl(params, &t, a),
        };
        for l in ev {
            if l.re > best.0 {
                best = (l.re, t);
            }
        }
    }
    best
}

/// Linear stability of the origin at `a` from the closed-form spectrum.
pub fn origin_verdict(params: &LatticeParams, a: f64) -> StabilityVerdict {
    let (re, t) = leading_eigenvalue(params, a);
    let kind = if re < 0.0 {
        VerdictKind::EquilibriumStable
    } else if re > 0.0 {
        VerdictKind::EquilibriumUnstable
    } else {
        VerdictKind::Inconclusive
    };
    let mut witnesses = vec![Witness::Mode { mode: t, label: "max Re lambda".into(), value: re }];
    if params.variant() == Variant::VdplUnidirectionalX {
        witnesses.push(Witness::Mode { mode: t, label: "a_t".into(), value: critical_a_vdpl(params, &t) });
    }
    StabilityVerdict { kind, witnesses }
}

/// First Lyapunov coefficient of `u' = -w v + f(u, v), v' = w u + g(u, v)` at
/// the origin (Guckenheimer-Holmes normalization). `field` returns the full
/// vector field; derivatives of the nonlinear part use central differences
/// with step `h`, which are exact for polynomial fields of degree at most 3 up
/// to rounding.
pub fn first_lyapunov_coefficient<F>(field: F, w: f64, h: f64) -> f64
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let f = |u: f64, v: f64| field(u, v).0 + w * v;
    let g = |u: f64, v: f64| field(u, v).1 - w * u;
    let d2 = |q: &dyn Fn(f64, f64) -> f64, axis: usize| {
        let (du, dv) = if axis == 0 { (h, 0.0) } else { (0.0, h) };
        (q(du, dv) - 2.0 * q(0.0, 0.0) + q(-du, -dv)) / (h * h)
    };
    let dxy = |q: &dyn Fn(f64, f64) -> f64| (q(h, h) - q(h, -h) - q(-h, h) + q(-h, -h)) / (4.0 * h * h);
    let d3 = |q: &dyn Fn(f64, f64) -> f64, axis: usize| {
        let p = |s: f64| if axis == 0 { q(s, 0.0) } else { q(0.0, s) };
        (p(2.0 * h) - 2.0 * p(h) + 2.0 * p(-h) - p(-2.0 * h)) / (2.0 * h * h * h)
    };
    // d^3 q / du dv^2 and d^3 q / du^2 dv
    let duvv = |q: &dyn Fn(f64, f64) -> f64| {
        let s = |u: f64| q(u, h) - 2.0 * q(u, 0.0) + q(u, -h);
        (s(h) - s(-h)) / (2.0 * h * h * h)
    };
    let duuv = |q: &dyn Fn(f64, f64) -> f64| {
        let s = |v: f64| q(h, v) - 2.0 * q(0.0, v) + q(-h, v);
        (s(h) - s(-h)) / (2.0 * h * h * h)
    };
    let (fxx, fyy, fxy) = (d2(&f, 0), d2(&f, 1), dxy(&f));
    let (gxx, gyy, gxy) = (d2(&g, 0), d2(&g, 1), dxy(&g));
    let cubic = d3(&f, 0) + duvv(&f) + duuv(&g) + d3(&g, 1);
    let quad = fxy * (fxx + fyy) - gxy * (gxx + gyy) - fxx * gxx + fyy * gyy;
    (cubic + quad / w) / 16.0
}

/// First Lyapunov coefficient of a single uncoupled vdP-like oscillator at
/// `a = 0`, in the coordinates `u = -y / sqrt(b)`, `v = x` where the linear
/// part is a rotation with frequency `sqrt(b)`.
pub fn lyapunov_coefficient_vdpl_single(b: f64) -> Result<f64> {
    lyapunov_coefficient_vdpl_single_with_step(b, 1e-2)
}

pub fn lyapunov_coefficient_vdpl_single_with_step(b: f64, h: f64) -> Result<f64> {
    let params = LatticeParams::new(Variant::VdplUnidirectionalX, 3)?.with_b(b)?.with_a(0.0);
    let m = params.sites();
    let w = b.sqrt();
    // every node of the uncoupled lattice carries the same scalar oscillator
    let field = |u: f64, v: f64| {
        let (x, y) = (v, -w * u);
        let mut state = vec![x; m];
        state.extend(std::iter::repeat_n(y, m));
        let mut d = vec![0.0; 2 * m];
        rhs_flat(&params, &state, &mut d);
        let (dx, dy) = (d[0], d[m]);
        (-dy / w, dx)
    };
    Ok(first_lyapunov_coefficient(field, w, h))
}

/// Eigenvalues of the monodromy matrix of `orbit`, sorted by decreasing modulus.
pub fn floquet_multipliers(orbit: &PeriodicOrbit, params: &LatticeParams) -> Result<Vec<Complex<f64>>> {
    floquet_multipliers_with(orbit, params, ShootingOptions::default().integ.tightened(10.0))
}

pub fn floquet_multipliers_with(
    orbit: &PeriodicOrbit,
    params: &LatticeParams,
    tol: Tolerance,
) -> Result<Vec<Complex<f64>>> {
    if !orbit.is_converged() {
        return Err(Error::OrbitNotConverged { residual: orbit.residual, limit: PeriodicOrbit::CONVERGED });
    }
    orbit.initial().check(params)?;
    let mono = monodromy(params, &orbit.initial().to_flat(), orbit.period, tol)?;
    let mut ev = sorted_eigenvalues(&mono)?;
    ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(ev)
}

/// Index of the multiplier closest to 1.
pub fn trivial_multiplier(multipliers: &[Complex<f64>]) -> Option<usize> {
    multipliers
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - 1.0).norm().total_cmp(&(b.1 - 1.0).norm()))
        .map(|(i, _)| i)
}

/// Orbit verdict from multipliers: stable if all nontrivial ones have modulus
/// at most `1 - margin`, unstable if one has modulus at least `1 + margin`.
pub fn orbit_verdict(multipliers: &[Complex<f64>], margin: f64) -> StabilityVerdict {
    let Some(triv) = trivial_multiplier(multipliers) else {
        return StabilityVerdict {
            kind: VerdictKind::Inconclusive,
            witnesses: vec![Witness::Value { label: "multipliers".into(), value: 0.0 }],
        };
    };
    let w = |z: &Complex<f64>| Witness::Multiplier { re: z.re, im: z.im, modulus: z.norm() };
    let lead = multipliers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != triv)
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(_, z)| *z);
    let mut witnesses = vec![w(&multipliers[triv])];
    let kind = match lead {
        None => VerdictKind::Inconclusive,
        Some(z) => {
            witnesses.push(w(&z));
            if z.norm() <= 1.0 - margin {
                VerdictKind::OrbitStable
            } else if z.norm() >= 1.0 + margin {
                VerdictKind::OrbitUnstable
            } else {
                VerdictKind::Inconclusive
            }
        }
    };
    StabilityVerdict { kind, witnesses }
}
