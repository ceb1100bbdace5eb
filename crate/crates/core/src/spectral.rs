//! Discrete Fourier mode decomposition of the lattice and the closed-form
//! spectral data of both linearizations at the origin.
//!
//! Every irreducible mode is labelled by a wave vector `t = (t1, t2, t3)` in
//! `Z_N^3`. Writing `c_i = 1 - cos(2 pi t_i / N)` and `s_i = sin(2 pi t_i / N)`:
//!
//! * `K_t = 1 + 2 (delta c_1 + zeta c_2 + epsilon c_3)` (bidirectional coupling),
//! * `a^z_t = delta c_1 + zeta c_2 + epsilon c_3`, `H_t(a) = a - a^z_t`,
//! * `G_t = delta s_1 + zeta s_2 + epsilon s_3` (unidirectional coupling).

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{dot, orthonormalize};
use crate::model::{site_coords, LatticeParams, LatticeState, Variant};
use crate::symmetry::{branch_count, symmetry_classes, TwistedSubgroup};

/// Wave vector of an irreducible mode, stored reduced mod `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex(pub [usize; 3]);

impl ModeIndex {
    pub fn new(n: usize, t1: i64, t2: i64, t3: i64) -> Self {
        let r = |t: i64| t.rem_euclid(n as i64) as usize;
        ModeIndex([r(t1), r(t2), r(t3)])
    }

    pub fn zero() -> Self {
        ModeIndex([0, 0, 0])
    }

    pub fn t(&self) -> [usize; 3] {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// `-t mod N`
    pub fn neg(&self, n: usize) -> Self {
        ModeIndex(self.0.map(|t| (n - t) % n))
    }

    /// Lexicographically smaller of `t` and `-t`.
    pub fn canonical(&self, n: usize) -> Self {
        let m = self.neg(n);
        if m.0 < self.0 {
            m
        } else {
            *self
        }
    }

    pub fn is_canonical(&self, n: usize) -> bool {
        self.canonical(n) == *self
    }

    /// Number of nonzero components.
    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|&&t| t != 0).count()
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// All `N^3` wave vectors in lexicographic order.
pub fn all_modes(n: usize) -> impl Iterator<Item = ModeIndex> {
    (0..n).flat_map(move |a| {
        (0..n).flat_map(move |b| (0..n).map(move |c| ModeIndex([a, b, c])))
    })
}

/// One representative per pair `{t, -t}`; `(N^3 + 1) / 2` modes.
pub fn canonical_modes(n: usize) -> Vec<ModeIndex> {
    all_modes(n).filter(|t| t.is_canonical(n)).collect()
}

fn angle(n: usize, t: usize) -> f64 {
    2.0 * PI * t as f64 / n as f64
}

/// `sum_i coupling_i (1 - cos(2 pi t_i / N))`
fn cosine_sum(params: &LatticeParams, t: &ModeIndex) -> f64 {
    let n = params.n();
    params
        .couplings()
        .iter()
        .zip(t.0)
        .map(|(c, ti)| c * (1.0 - angle(n, ti).cos()))
        .sum()
}

pub fn k_of_mode(params: &LatticeParams, t: &ModeIndex) -> f64 {
    let n = params.n();
    let [d, z, e] = params.couplings();
    let [t1, t2, t3] = t.0;
    1.0 + 2.0 * d * (1.0 - angle(n, t1).cos())
        + 2.0 * z * (1.0 - angle(n, t2).cos())
        + 2.0 * e * (1.0 - angle(n, t3).cos())
}

pub fn g_of_mode(params: &LatticeParams, t: &ModeIndex) -> f64 {
    let n = params.n();
    params
        .couplings()
        .iter()
        .zip(t.0)
        .map(|(c, ti)| c * angle(n, ti).sin())
        .sum()
}

pub fn h_of_mode(params: &LatticeParams, t: &ModeIndex, a: f64) -> f64 {
    a - cosine_sum(params, t)
}

/// Bifurcation point `a^z_t` of the unidirectional system.
pub fn critical_a_vdpl(params: &LatticeParams, t: &ModeIndex) -> f64 {
    cosine_sum(params, t)
}

/// Roots of `l^2 - nu a l + b K_t = 0`.
pub fn eigenvalues_vdp(params: &LatticeParams, t: &ModeIndex, a: f64) -> [Complex<f64>; 2] {
    let tr = Complex::new(params.nu() * a, 0.0);
    let det = Complex::new(params.b() * k_of_mode(params, t), 0.0);
    quadratic_roots(tr, det)
}

/// Eigenvalues of `L_t(a) = [[H_t(a) - i G_t, -1], [b, 0]]`.
pub fn eigenvalues_vdpl(params: &LatticeParams, t: &ModeIndex, a: f64) -> [Complex<f64>; 2] {
    let tr = Complex::new(h_of_mode(params, t, a), -g_of_mode(params, t));
    let det = Complex::new(params.b(), 0.0);
    quadratic_roots(tr, det)
}

/// Roots of `l^2 - tr l + det`, ordered with the `+` branch of the square root first.
fn quadratic_roots(tr: Complex<f64>, det: Complex<f64>) -> [Complex<f64>; 2] {
    let disc = (tr * tr - 4.0 * det).sqrt();
    [(tr + disc) * 0.5, (tr - disc) * 0.5]
}

/// Closed-form spectrum of the full origin Jacobian at parameter `a`,
/// with multiplicity (`2 N^3` values).
pub fn closed_form_spectrum(params: &LatticeParams, a: f64) -> Vec<Complex<f64>> {
    let n = params.n();
    let mut out = Vec::with_capacity(params.dim());
    match params.variant() {
        Variant::VdpBidirectionalY => {
            for t in all_modes(n) {
                out.extend(eigenvalues_vdp(params, &t, a));
            }
        }
        Variant::VdplUnidirectionalX => {
            for t in canonical_modes(n) {
                let ev = eigenvalues_vdpl(params, &t, a);
                out.extend(ev);
                if !t.is_zero() {
                    out.extend(ev.iter().map(|z| z.conj()));
                }
            }
        }
    }
    out
}

/// Limit periods of the two Hopf branches of mode `t` (unidirectional system).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitPeriods {
    pub p1: f64,
    pub p2: f64,
    /// `p1 / p2` is rational (denominator at most 64, within `1e-9`).
    pub resonant: bool,
}

pub fn limit_periods_vdpl(params: &LatticeParams, t: &ModeIndex) -> LimitPeriods {
    let h = g_of_mode(params, t);
    let root = (h * h + 4.0 * params.b()).sqrt();
    let p1 = (4.0 * PI / (h + root)).abs();
    let p2 = (4.0 * PI / (h - root)).abs();
    LimitPeriods { p1, p2, resonant: is_rational(p1 / p2, 64, 1e-9) }
}

/// Whether `x` lies within `tol` of a fraction with denominator `<= max_den`.
pub fn is_rational(x: f64, max_den: u32, tol: f64) -> bool {
    (1..=max_den).any(|q| {
        let q = q as f64;
        ((x * q).round() / q - x).abs() <= tol
    })
}

/// Orthonormal basis of the real mode subspace of `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBasis {
    pub mode: ModeIndex,
    pub vectors: Vec<Vec<f64>>,
}

impl ModeBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// `(cos, sin)` of `2 pi (alpha t1 + beta t2 + gamma t3) / N` over all sites.
pub fn fourier_pair(n: usize, t: [i64; 3]) -> (Vec<f64>, Vec<f64>) {
    let m = n * n * n;
    let ni = n as i64;
    let mut c = Vec::with_capacity(m);
    let mut s = Vec::with_capacity(m);
    for i in 0..m {
        let [al, be, ga] = site_coords(n, i);
        // reduce the phase exactly before the trig call
        let k = (al as i64 * t[0] + be as i64 * t[1] + ga as i64 * t[2]).rem_euclid(ni);
        let th = 2.0 * PI * k as f64 / n as f64;
        c.push(th.cos());
        s.push(th.sin());
    }
    (c, s)
}

/// Mode subspace: `span(x1_t, x2_t)` for the cyclic group and the span over the
/// sign patterns `(t1, +-t2, +-t3)` for the dihedral group, orthonormalized with
/// duplicates (from zero components) removed at threshold `1e-10`.
pub fn mode_basis(params: &LatticeParams, t: &ModeIndex) -> ModeBasis {
    let n = params.n();
    let [t1, t2, t3] = t.0.map(|v| v as i64);
    let patterns: Vec<[i64; 3]> = match params.variant() {
        Variant::VdplUnidirectionalX => vec![[t1, t2, t3]],
        Variant::VdpBidirectionalY => {
            vec![[t1, t2, t3], [t1, -t2, t3], [t1, t2, -t3], [t1, -t2, -t3]]
        }
    };
    let mut raw = Vec::with_capacity(2 * patterns.len());
    for p in patterns {
        let (c, s) = fourier_pair(n, p);
        raw.push(c);
        raw.push(s);
    }
    ModeBasis { mode: *t, vectors: orthonormalize(&raw, 1e-10) }
}

/// Coordinates of a state's `x` and `y` blocks in a mode basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeCoordinates {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn mode_project(basis: &ModeBasis, state: &LatticeState) -> ModeCoordinates {
    ModeCoordinates {
        x: basis.vectors.iter().map(|v| dot(v, &state.x)).collect(),
        y: basis.vectors.iter().map(|v| dot(v, &state.y)).collect(),
    }
}

/// One row of the Hopf bifurcation catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationRecord {
    pub mode: ModeIndex,
    pub variant: Variant,
    pub critical_a: f64,
    /// `K_t`, bidirectional system only.
    pub k: Option<f64>,
    /// `G_t`, unidirectional system only.
    pub g: Option<f64>,
    pub limit_frequency: f64,
    /// One period (bidirectional) or the pair `(P1, P2)` (unidirectional).
    pub limit_periods: Vec<f64>,
    pub resonant: bool,
    pub symmetries: Vec<TwistedSubgroup>,
    /// Branch count for each entry of `symmetries`.
    pub branches_per_symmetry: Vec<u64>,
}

fn record_for(params: &LatticeParams, t: ModeIndex) -> Option<BifurcationRecord> {
    let n = params.n();
    let symmetries = symmetry_classes(&t, params.variant(), n);
    match params.variant() {
        Variant::VdpBidirectionalY => {
            let k = k_of_mode(params, &t);
            if k <= 0.0 {
                return None;
            }
            let w = (params.b() * k).sqrt();
            let branches = symmetries
                .iter()
                .map(|h| branch_count(h).expect("catalog subgroups divide the group order"))
                .collect();
            Some(BifurcationRecord {
                mode: t,
                variant: params.variant(),
                critical_a: 0.0,
                k: Some(k),
                g: None,
                limit_frequency: w,
                limit_periods: vec![2.0 * PI / w],
                resonant: false,
                symmetries,
                branches_per_symmetry: branches,
            })
        }
        Variant::VdplUnidirectionalX => {
            let lp = limit_periods_vdpl(params, &t);
            // P1 and P2 each carry a branch unless they may coincide
            let per_period = if lp.resonant { 1 } else { 2 };
            let branches = symmetries
                .iter()
                .map(|h| per_period * branch_count(h).expect("catalog subgroups divide the group order"))
                .collect();
            Some(BifurcationRecord {
                mode: t,
                variant: params.variant(),
                critical_a: critical_a_vdpl(params, &t),
                k: None,
                g: Some(g_of_mode(params, &t)),
                limit_frequency: 2.0 * PI / lp.p1,
                limit_periods: vec![lp.p1, lp.p2],
                resonant: lp.resonant,
                symmetries,
                branches_per_symmetry: branches,
            })
        }
    }
}

/// One record per canonical mode, sorted by critical `a` then by mode.
/// Bidirectional modes with `K_t <= 0` have no Hopf point and are skipped.
pub fn bifurcation_catalog(params: &LatticeParams) -> Vec<BifurcationRecord> {
    let mut records: Vec<BifurcationRecord> = canonical_modes(params.n())
        .into_par_iter()
        .filter_map(|t| record_for(params, t))
        .collect();
    records.sort_by(|a, b| a.critical_a.total_cmp(&b.critical_a).then(a.mode.cmp(&b.mode)));
    records
}

/// The catalog row for a single mode (canonicalized), if it has a Hopf point.
pub fn bifurcation_record(params: &LatticeParams, t: &ModeIndex) -> Option<BifurcationRecord> {
    record_for(params, t.canonical(params.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{coupling_matrix, jacobian};
    use crate::linalg::{multiset_distance, sorted_eigenvalues};

    fn params(variant: Variant, n: usize, c: [f64; 3]) -> LatticeParams {
        LatticeParams::new(variant, n).unwrap().with_couplings(c[0], c[1], c[2])
    }

    #[test]
    fn k_examples() {
        let p = params(Variant::VdpBidirectionalY, 3, [1.0, 0.0, 0.0]);
        assert_eq!(k_of_mode(&p, &ModeIndex::zero()), 1.0);
        assert!((k_of_mode(&p, &ModeIndex([1, 0, 0])) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn k_and_critical_a_are_even_in_t() {
        let p = params(Variant::VdpBidirectionalY, 5, [0.37, -1.2, 0.81]);
        for t in all_modes(5) {
            assert!((k_of_mode(&p, &t) - k_of_mode(&p, &t.neg(5))).abs() < 1e-13);
            for axis in 0..3 {
                let mut f = t.0;
                f[axis] = (5 - f[axis]) % 5;
                let tf = ModeIndex(f);
                assert!((k_of_mode(&p, &t) - k_of_mode(&p, &tf)).abs() < 1e-13);
                assert!((critical_a_vdpl(&p, &t) - critical_a_vdpl(&p, &tf)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn g_and_h_examples() {
        let p = params(Variant::VdplUnidirectionalX, 3, [1.0, 0.0, 0.0]);
        assert_eq!(g_of_mode(&p, &ModeIndex::zero()), 0.0);
        assert_eq!(h_of_mode(&p, &ModeIndex::zero(), 0.3), 0.3);
        assert!((g_of_mode(&p, &ModeIndex([1, 0, 0])) - 0.866_025_403_784_438_6).abs() < 1e-12);
    }

    #[test]
    fn h_vanishes_at_critical_a() {
        for n in [3, 5] {
            let p = params(Variant::VdplUnidirectionalX, n, [0.3, -0.45, 0.12]);
            for t in all_modes(n) {
                assert!(h_of_mode(&p, &t, critical_a_vdpl(&p, &t)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn critical_a_example() {
        let p = params(Variant::VdplUnidirectionalX, 3, [1.0, 1.0, 0.0]);
        assert_eq!(critical_a_vdpl(&p, &ModeIndex::zero()), 0.0);
        assert!((critical_a_vdpl(&p, &ModeIndex([1, 1, 0])) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn vdp_eigenvalue_examples() {
        let p = params(Variant::VdpBidirectionalY, 3, [1.0, 0.0, 0.0]);
        let ev = eigenvalues_vdp(&p, &ModeIndex([1, 0, 0]), 0.0);
        assert!(ev[0].re.abs() < 1e-15 && (ev[0].im.abs() - 2.0).abs() < 1e-14);
        assert!((ev[0] + ev[1]).norm() < 1e-14);
        let q = params(Variant::VdpBidirectionalY, 3, [0.0; 3]).with_nu(1.5).unwrap();
        for t in all_modes(3) {
            for l in eigenvalues_vdp(&q, &t, 0.2) {
                assert!((l * l - 0.3 * l + 1.0).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn vdpl_eigenvalues_at_origin_mode() {
        let p = params(Variant::VdplUnidirectionalX, 3, [0.2, 0.1, -0.3]);
        let ev = eigenvalues_vdpl(&p, &ModeIndex::zero(), 0.0);
        let mut ims: Vec<f64> = ev.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!(ev.iter().all(|z| z.re.abs() < 1e-15));
        assert!((ims[0] + 1.0).abs() < 1e-15 && (ims[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vdpl_critical_root_is_imaginary_and_crossing_is_positive() {
        for n in [3, 5] {
            let p = params(Variant::VdplUnidirectionalX, n, [0.3, -0.2, 0.1]);
            for t in all_modes(n) {
                let ac = critical_a_vdpl(&p, &t);
                let ev = eigenvalues_vdpl(&p, &t, ac);
                let on_axis = ev.iter().filter(|z| z.re.abs() < 1e-12).count();
                assert_eq!(on_axis, 2, "mode {t}");
                let h = 1e-6;
                for r in 0..2 {
                    let d = (eigenvalues_vdpl(&p, &t, ac + h)[r].re
                        - eigenvalues_vdpl(&p, &t, ac - h)[r].re)
                        / (2.0 * h);
                    assert!((d - 0.5).abs() < 1e-6, "mode {t}: {d}");
                }
            }
        }
    }

    #[test]
    fn vdp_crossing_speed_is_nu_over_two() {
        let p = params(Variant::VdpBidirectionalY, 3, [0.2, 0.3, 0.1]).with_nu(1.7).unwrap();
        let h = 1e-6;
        for t in all_modes(3) {
            for r in 0..2 {
                let d = (eigenvalues_vdp(&p, &t, h)[r].re - eigenvalues_vdp(&p, &t, -h)[r].re)
                    / (2.0 * h);
                assert!((d - 0.85).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn limit_period_examples() {
        let p = params(Variant::VdplUnidirectionalX, 3, [0.0; 3]);
        let lp = limit_periods_vdpl(&p, &ModeIndex::zero());
        assert!((lp.p1 - 2.0 * PI).abs() < 1e-14 && (lp.p2 - 2.0 * PI).abs() < 1e-14);
        assert!(lp.resonant);
        // G = sin(2 pi / 3) delta = 1 with b = 2: sqrt(1 + 8) = 3
        let d = 1.0 / (2.0 * PI / 3.0).sin();
        let q = params(Variant::VdplUnidirectionalX, 3, [d, 0.0, 0.0]).with_b(2.0).unwrap();
        let lp = limit_periods_vdpl(&q, &ModeIndex([1, 0, 0]));
        assert!((lp.p1 - PI).abs() < 1e-12 && (lp.p2 - 2.0 * PI).abs() < 1e-12);
        assert!(lp.resonant);
    }

    #[test]
    fn limit_periods_match_critical_frequencies() {
        for n in [3, 5] {
            let p = params(Variant::VdplUnidirectionalX, n, [0.3, -0.2, 0.1]).with_b(1.3).unwrap();
            for t in all_modes(n) {
                let lp = limit_periods_vdpl(&p, &t);
                let ev = eigenvalues_vdpl(&p, &t, critical_a_vdpl(&p, &t));
                let mut freqs: Vec<f64> = ev.iter().map(|z| z.im.abs()).collect();
                freqs.sort_by(f64::total_cmp);
                let mut want = [2.0 * PI / lp.p1, 2.0 * PI / lp.p2];
                want.sort_by(f64::total_cmp);
                assert!((freqs[0] - want[0]).abs() < 1e-12 && (freqs[1] - want[1]).abs() < 1e-12);
                // opposite signs: one root rotates each way
                assert!(ev[0].im * ev[1].im < 0.0 || t.is_zero() || lp.p1 == lp.p2);
            }
        }
    }

    #[test]
    fn resonance_detection() {
        assert!(is_rational(3.0 / 7.0, 64, 1e-9));
        assert!(!is_rational(2f64.sqrt(), 64, 1e-9));
    }

    #[test]
    fn trivial_mode_basis_is_normalized_ones() {
        let p = params(Variant::VdpBidirectionalY, 3, [0.0; 3]);
        let b = mode_basis(&p, &ModeIndex::zero());
        assert_eq!(b.dim(), 1);
        let w = 1.0 / 27f64.sqrt();
        assert!(b.vectors[0].iter().all(|v| (v - w).abs() < 1e-15));
    }

    #[test]
    fn dihedral_basis_dimensions() {
        let p = params(Variant::VdpBidirectionalY, 5, [0.1, 0.2, 0.3]);
        let dim = |t: [usize; 3]| mode_basis(&p, &ModeIndex(t)).dim();
        assert_eq!(dim([0, 0, 0]), 1);
        assert_eq!(dim([2, 0, 0]), 2);
        assert_eq!(dim([0, 1, 0]), 2);
        assert_eq!(dim([1, 2, 0]), 4);
        assert_eq!(dim([0, 1, 4]), 4);
        assert_eq!(dim([1, 1, 1]), 8);
    }

    #[test]
    fn cyclic_bases_are_complete_and_orthonormal() {
        let p = params(Variant::VdplUnidirectionalX, 3, [0.0; 3]);
        let all: Vec<Vec<f64>> = canonical_modes(3)
            .iter()
            .flat_map(|t| mode_basis(&p, t).vectors)
            .collect();
        assert_eq!(all.len(), 27);
        for (i, u) in all.iter().enumerate() {
            for (j, v) in all.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(u, v) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mode_vectors_are_coupling_eigenvectors() {
        for n in [3, 5] {
            let p = params(Variant::VdpBidirectionalY, n, [0.4, -0.3, 0.7]);
            let c = coupling_matrix(&p);
            for t in all_modes(n) {
                let (x1, _) = fourier_pair(n, t.0.map(|v| v as i64));
                let cx = c.apply(&x1);
                let k = k_of_mode(&p, &t);
                for (a, b) in cx.iter().zip(&x1) {
                    assert!((a - k * b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mode_spaces_are_coupling_invariant() {
        for variant in [Variant::VdpBidirectionalY, Variant::VdplUnidirectionalX] {
            let p = params(variant, 5, [0.4, -0.3, 0.7]);
            let c = coupling_matrix(&p);
            for t in canonical_modes(5) {
                let b = mode_basis(&p, &t);
                for v in &b.vectors {
                    let cv = c.apply(v);
                    let proj = mode_project(&b, &LatticeState { x: cv.clone(), y: vec![0.0; cv.len()] });
                    let mut resid = cv.clone();
                    for (coef, q) in proj.x.iter().zip(&b.vectors) {
                        for (r, qi) in resid.iter_mut().zip(q) {
                            *r -= coef * qi;
                        }
                    }
                    let rn = dot(&resid, &resid).sqrt();
                    let cn = dot(&cv, &cv).sqrt().max(1.0);
                    assert!(rn / cn <= 1e-10, "{t}: {rn}");
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_full_jacobian_small_cases() {
        let p = params(Variant::VdpBidirectionalY, 3, [1.0, 0.0, 0.0])
            .with_a(0.1)
            .with_b(2.0)
            .unwrap();
        let j = jacobian(&p, &LatticeState::zeros(27)).unwrap();
        let d = multiset_distance(&closed_form_spectrum(&p, 0.1), &sorted_eigenvalues(&j).unwrap());
        assert!(d < 1e-8, "{d}");
        let q = params(Variant::VdplUnidirectionalX, 3, [0.3, -0.2, 0.1]).with_a(0.05);
        let j = jacobian(&q, &LatticeState::zeros(27)).unwrap();
        let d = multiset_distance(&closed_form_spectrum(&q, 0.05), &sorted_eigenvalues(&j).unwrap());
        assert!(d < 1e-8, "{d}");
    }

    #[test]
    fn uncoupled_vdp_catalog() {
        let p = params(Variant::VdpBidirectionalY, 3, [0.0; 3]);
        let cat = bifurcation_catalog(&p);
        assert_eq!(cat.len(), 14);
        for r in &cat {
            assert_eq!(r.critical_a, 0.0);
            assert!((r.limit_frequency - 1.0).abs() < 1e-15);
            assert!((r.limit_frequency * r.limit_periods[0] - 2.0 * PI).abs() < 1e-14);
        }
    }

    #[test]
    fn vdpl_catalog_uses_bifurcation_points() {
        let p = params(Variant::VdplUnidirectionalX, 3, [0.3, -0.2, 0.1]);
        let cat = bifurcation_catalog(&p);
        assert_eq!(cat.len(), 14);
        for w in cat.windows(2) {
            assert!(w[0].critical_a <= w[1].critical_a);
        }
        for r in &cat {
            assert_eq!(r.critical_a, critical_a_vdpl(&p, &r.mode));
            assert_eq!(r.symmetries.len(), 1);
        }
    }

    #[test]
    fn vdp_catalog_skips_nonpositive_k() {
        let p = params(Variant::VdpBidirectionalY, 3, [-1.0, 0.0, 0.0]);
        let cat = bifurcation_catalog(&p);
        assert!(cat.iter().all(|r| r.k.unwrap() > 0.0));
        assert_eq!(cat.len(), 5); // t1 = 0 modes only
    }

    #[test]
    fn vdp_branch_count_for_traveling_wave() {
        let p = params(Variant::VdpBidirectionalY, 3, [0.2, 0.0, 0.0]);
        let r = bifurcation_record(&p, &ModeIndex([1, 1, 1])).unwrap();
        assert_eq!(r.symmetries.len(), 27);
        let i = r
            .symmetries
            .iter()
            .position(|h| h.to_string() == "(Z3 x Z3 x Z3)^(1,1,1)")
            .unwrap();
        assert_eq!(r.branches_per_symmetry[i], 8);
    }

    #[test]
    fn canonical_mode_count() {
        for n in [3, 5, 7] {
            assert_eq!(canonical_modes(n).len(), (n * n * n).div_ceil(2));
        }
    }
}
