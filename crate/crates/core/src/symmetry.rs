//! Group actions on the lattice, twisted subgroups and symmetry checks of
//! periodic orbits.
//!
//! An element of `D_N^3` is stored per axis as an index map
//! `alpha -> s alpha + r (mod N)` with `s = -1` for a flip, and acts on states by
//! `(g x)_(alpha,beta,gamma) = x_(sigma_1(alpha), sigma_2(beta), sigma_3(gamma))`.
//! The shift generator of axis 1 is `alpha -> alpha + 1` and the flip is
//! `alpha -> -alpha`.
//!
//! A spatio-temporal symmetry `(g, theta)` of a `T`-periodic orbit means
//! `g x(s - theta T / 2 pi) = x(s)`, i.e. `x(theta T / 2 pi) = g x(0)`.
//! Phases are kept exact as integers mod `2N`, in units of `pi / N`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::model::{site_coords, site_index, LatticeParams, LatticeState, Variant};
use crate::orbits::PeriodicOrbit;
use crate::spectral::{mode_basis, ModeIndex};

/// Element of `D_N^3` (or of `Z_N^3` when no flip is set).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub n: usize,
    pub rot: [usize; 3],
    pub flip: [bool; 3],
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement { n, rot: [0; 3], flip: [false; 3] }
    }

    /// `alpha_axis -> alpha_axis + k`
    pub fn shift(n: usize, axis: usize, k: usize) -> Self {
        let mut g = Self::identity(n);
        g.rot[axis] = k % n;
        g
    }

    /// `alpha_axis -> -alpha_axis`
    pub fn flip(n: usize, axis: usize) -> Self {
        let mut g = Self::identity(n);
        g.flip[axis] = true;
        g
    }

    pub fn is_cyclic(&self) -> bool {
        !self.flip.iter().any(|&f| f)
    }

    #[inline]
    fn map_axis(&self, axis: usize, a: usize) -> usize {
        let n = self.n;
        let base = if self.flip[axis] { (n - a) % n } else { a };
        (base + self.rot[axis]) % n
    }

    /// Product with `act(g.compose(h), x) == act(g, act(h, x))`.
    pub fn compose(&self, h: &GroupElement) -> GroupElement {
        let n = self.n;
        let mut out = Self::identity(n);
        for i in 0..3 {
            // sigma_{gh} = sigma_h o sigma_g
            let r = if h.flip[i] { (n - self.rot[i]) % n } else { self.rot[i] };
            out.rot[i] = (r + h.rot[i]) % n;
            out.flip[i] = self.flip[i] ^ h.flip[i];
        }
        out
    }

    pub fn inverse(&self) -> GroupElement {
        let n = self.n;
        let mut out = *self;
        for i in 0..3 {
            out.rot[i] = if self.flip[i] { self.rot[i] } else { (n - self.rot[i]) % n };
        }
        out
    }

    /// Permutes one block of `N^3` site values.
    pub fn act_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..v.len())
            .map(|i| {
                let [a, b, c] = site_coords(n, i);
                v[site_index(n, self.map_axis(0, a), self.map_axis(1, b), self.map_axis(2, c))]
            })
            .collect()
    }

    pub fn act_complex(&self, v: &[Complex<f64>]) -> Vec<Complex<f64>> {
        let n = self.n;
        (0..v.len())
            .map(|i| {
                let [a, b, c] = site_coords(n, i);
                v[site_index(n, self.map_axis(0, a), self.map_axis(1, b), self.map_axis(2, c))]
            })
            .collect()
    }
}

/// Acts diagonally on `x` and `y`.
pub fn act(g: &GroupElement, state: &LatticeState) -> LatticeState {
    LatticeState { x: g.act_vec(&state.x), y: g.act_vec(&state.y) }
}

/// Generators of the acting group of a variant: three shifts, plus three flips
/// for the bidirectional system.
pub fn group_generators(variant: Variant, n: usize) -> Vec<GroupElement> {
    let mut gens: Vec<GroupElement> = (0..3).map(|i| GroupElement::shift(n, i, 1)).collect();
    if variant.is_dihedral() {
        gens.extend((0..3).map(|i| GroupElement::flip(n, i)));
    }
    gens
}

/// Every element of the acting group.
pub fn group_elements(variant: Variant, n: usize) -> Vec<GroupElement> {
    let flips: &[bool] = if variant.is_dihedral() { &[false, true] } else { &[false] };
    let mut out = Vec::new();
    for &f0 in flips {
        for &f1 in flips {
            for &f2 in flips {
                for r0 in 0..n {
                    for r1 in 0..n {
                        for r2 in 0..n {
                            out.push(GroupElement { n, rot: [r0, r1, r2], flip: [f0, f1, f2] });
                        }
                    }
                }
            }
        }
    }
    out
}

/// One factor `H_i^{phi_i}` of a product twisted subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    /// `Z_N^{k}`: the shift `r` carries phase `2 pi k / N`.
    Cyclic { twist: usize },
    /// `D_1^{+}` or `D_1^{-}`: the flip carries phase `0` or `pi`.
    Reflection { odd: bool },
    /// `D_N x {1}`
    Dihedral,
}

impl Factor {
    fn order(&self, n: usize) -> u64 {
        match self {
            Factor::Cyclic { .. } => n as u64,
            Factor::Reflection { .. } => 2,
            Factor::Dihedral => 2 * n as u64,
        }
    }

    /// Phase (units of `pi / N`) of the axis component, or `None` if not in `H_i`.
    fn phase_of(&self, n: usize, rot: usize, flip: bool) -> Option<usize> {
        match *self {
            Factor::Cyclic { twist } => (!flip).then_some((2 * rot * twist) % (2 * n)),
            Factor::Reflection { odd } => match (rot, flip) {
                (0, false) => Some(0),
                (0, true) => Some(if odd { n } else { 0 }),
                _ => None,
            },
            Factor::Dihedral => Some(0),
        }
    }

    /// Generators with their phases.
    fn generators(&self, n: usize) -> Vec<(usize, bool, usize)> {
        match *self {
            Factor::Cyclic { twist } => vec![(1, false, (2 * twist) % (2 * n))],
            Factor::Reflection { odd } => vec![(0, true, if odd { n } else { 0 })],
            Factor::Dihedral => vec![(1, false, 0), (0, true, 0)],
        }
    }
}

/// Product twisted subgroup `(H_1 x H_2 x H_3)^{phi_1 phi_2 phi_3}` of `G x S^1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistedSubgroup {
    pub n: usize,
    pub variant: Variant,
    pub factors: [Factor; 3],
}

impl TwistedSubgroup {
    pub fn new(n: usize, variant: Variant, factors: [Factor; 3]) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::MalformedSubgroup(format!("lattice side {n} must be odd and at least 3")));
        }
        let mut factors = factors;
        for f in factors.iter_mut() {
            if let Factor::Cyclic { twist } = f {
                *twist %= n;
            } else if !variant.is_dihedral() {
                return Err(Error::MalformedSubgroup(
                    "reflections are not elements of the cyclic group".into(),
                ));
            }
        }
        Ok(TwistedSubgroup { n, variant, factors })
    }

    /// `(Z_N^{t1} x Z_N^{t2} x Z_N^{t3})`
    pub fn traveling(n: usize, variant: Variant, t: &ModeIndex) -> Self {
        let [a, b, c] = t.0;
        TwistedSubgroup {
            n,
            variant,
            factors: [a, b, c].map(|k| Factor::Cyclic { twist: k % n }),
        }
    }

    /// The acting group with trivial twist.
    pub fn full(n: usize, variant: Variant) -> Self {
        let f = if variant.is_dihedral() { Factor::Dihedral } else { Factor::Cyclic { twist: 0 } };
        TwistedSubgroup { n, variant, factors: [f; 3] }
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|f| f.order(self.n)).product()
    }

    pub fn group_order(&self) -> u64 {
        let n3 = (self.n as u64).pow(3);
        if self.variant.is_dihedral() {
            8 * n3
        } else {
            n3
        }
    }

    /// Phase of `g` (units of `pi / N`) if `g` lies in the spatial part.
    pub fn phase_of(&self, g: &GroupElement) -> Option<usize> {
        let mut total = 0;
        for i in 0..3 {
            total += self.factors[i].phase_of(self.n, g.rot[i], g.flip[i])?;
        }
        Some(total % (2 * self.n))
    }

    /// `(g, e^{i pi phase / N})` is an element.
    pub fn contains(&self, g: &GroupElement, phase: usize) -> bool {
        g.n == self.n && self.phase_of(g) == Some(phase % (2 * self.n))
    }

    /// Generators `(g, phase)` with phase in units of `pi / N`.
    pub fn generators(&self) -> Vec<(GroupElement, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for (axis, f) in self.factors.iter().enumerate() {
            for (rot, flip, phase) in f.generators(n) {
                let mut g = GroupElement::identity(n);
                g.rot[axis] = rot;
                g.flip[axis] = flip;
                out.push((g, phase));
            }
        }
        out
    }

    /// Whether `self` is a subgroup of `other`.
    pub fn is_subgroup_of(&self, other: &TwistedSubgroup) -> bool {
        self.n == other.n && self.generators().iter().all(|(g, p)| other.contains(g, *p))
    }
}

impl fmt::Display for TwistedSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let names: Vec<String> = self
            .factors
            .iter()
            .map(|fac| match fac {
                Factor::Cyclic { .. } => format!("Z{n}"),
                Factor::Reflection { .. } => "D1".to_string(),
                Factor::Dihedral => format!("D{n}"),
            })
            .collect();
        let twists: Vec<String> = self
            .factors
            .iter()
            .map(|fac| match fac {
                Factor::Cyclic { twist } => twist.to_string(),
                Factor::Reflection { odd: false } => "+".to_string(),
                Factor::Reflection { odd: true } => "-".to_string(),
                Factor::Dihedral => "1".to_string(),
            })
            .collect();
        write!(f, "({})^({})", names.join(" x "), twists.join(","))
    }
}

/// Parses `"(F1 x F2 x F3)^(s1,s2,s3)"` with `F` in `{ZN, D1, DN}` (the lattice
/// side written out, e.g. `Z5`) and `s` a twist, `+`, `-` or `1`.
pub fn parse_subgroup(input: &str, n: usize, variant: Variant) -> Result<TwistedSubgroup> {
    let err = |reason: &str| Error::SymmetryParse { input: input.to_string(), reason: reason.to_string() };
    let s: String = input
        .replace('\u{2212}', "-")
        .replace('\u{00d7}', "x")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let (lhs, rhs) = s.split_once(")^(").ok_or_else(|| err("expected '(F1 x F2 x F3)^(s1,s2,s3)'"))?;
    let lhs = lhs.strip_prefix('(').ok_or_else(|| err("missing '('"))?;
    let rhs = rhs.strip_suffix(')').ok_or_else(|| err("missing closing ')'"))?;
    let names: Vec<&str> = lhs.split('x').collect();
    let twists: Vec<&str> = rhs.split(',').collect();
    if names.len() != 3 || twists.len() != 3 {
        return Err(err("need exactly three factors and three twists"));
    }
    let mut factors = [Factor::Dihedral; 3];
    for i in 0..3 {
        let name = names[i].replace('_', "").to_ascii_uppercase();
        let tw = twists[i];
        let zn = format!("Z{n}");
        let dn = format!("D{n}");
        factors[i] = if name == zn || name == "ZN" {
            let k: i64 = tw.parse().map_err(|_| err("cyclic factor needs an integer twist"))?;
            Factor::Cyclic { twist: k.rem_euclid(n as i64) as usize }
        } else if name == "D1" {
            match tw {
                "+" => Factor::Reflection { odd: false },
                "-" => Factor::Reflection { odd: true },
                _ => return Err(err("D1 factor needs twist '+' or '-'")),
            }
        } else if name == dn || name == "DN" {
            if tw != "1" {
                return Err(err("full dihedral factor carries the trivial twist '1'"));
            }
            Factor::Dihedral
        } else {
            return Err(err(&format!("unknown factor '{}' for N = {n}", names[i])));
        };
    }
    TwistedSubgroup::new(n, variant, factors).map_err(|e| err(&e.to_string()))
}

impl FromStr for Factor {
    type Err = Error;

    /// Parses a single factor written as `Z:<twist>`, `D1:+`, `D1:-` or `DN`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "DN" => Ok(Factor::Dihedral),
            "D1:+" => Ok(Factor::Reflection { odd: false }),
            "D1:-" => Ok(Factor::Reflection { odd: true }),
            other => other
                .strip_prefix("Z:")
                .and_then(|k| k.parse().ok())
                .map(|twist| Factor::Cyclic { twist })
                .ok_or_else(|| Error::SymmetryParse { input: s.into(), reason: "unknown factor".into() }),
        }
    }
}

/// `S(t_i)`: the full dihedral factor when `t_i = 0`, otherwise the twisted
/// cyclic factor and both reflections.
fn axis_classes(t: usize) -> Vec<Factor> {
    if t == 0 {
        vec![Factor::Dihedral]
    } else {
        vec![Factor::Cyclic { twist: t }, Factor::Reflection { odd: false }, Factor::Reflection { odd: true }]
    }
}

/// Maximal twisted isotropies of mode `t`: the product of `S(t_i)` for the
/// dihedral group, and the single traveling-wave class for the cyclic one.
pub fn symmetry_classes(t: &ModeIndex, variant: Variant, n: usize) -> Vec<TwistedSubgroup> {
    let t = ModeIndex::new(n, t.0[0] as i64, t.0[1] as i64, t.0[2] as i64);
    if !variant.is_dihedral() {
        return vec![TwistedSubgroup::traveling(n, variant, &t)];
    }
    let mut out = Vec::new();
    for f0 in axis_classes(t.0[0]) {
        for f1 in axis_classes(t.0[1]) {
            for f2 in axis_classes(t.0[2]) {
                out.push(TwistedSubgroup { n, variant, factors: [f0, f1, f2] });
            }
        }
    }
    out
}

/// `|G| / |H|`: the number of distinct orbits in the group orbit of one
/// solution with isotropy exactly `H`.
pub fn branch_count(h: &TwistedSubgroup) -> Result<u64> {
    let g = h.group_order();
    let o = h.order();
    if o == 0 || !g.is_multiple_of(o) {
        return Err(Error::MalformedSubgroup(format!("order {o} of {h} does not divide {g}")));
    }
    Ok(g / o)
}

/// A nonzero vector `v` of the complexified mode space of `t` with
/// `g v = e^{i theta} v` for every generator of `H`. Returns the unit vector
/// minimizing the stacked defect, and the defect itself.
pub fn fixed_mode_vector(
    params: &LatticeParams,
    t: &ModeIndex,
    h: &TwistedSubgroup,
) -> Result<(Vec<Complex<f64>>, f64)> {
    let n = params.n();
    if h.n != n {
        return Err(Error::MalformedSubgroup(format!("subgroup is for N = {}, lattice has N = {n}", h.n)));
    }
    let basis = mode_basis(params, t);
    let d = basis.dim();
    let gens = h.generators();
    let mut m = DMatrix::<Complex<f64>>::zeros(gens.len() * d, d);
    for (k, (g, phase)) in gens.iter().enumerate() {
        let rot = Complex::from_polar(1.0, std::f64::consts::PI * *phase as f64 / n as f64);
        for (j, bj) in basis.vectors.iter().enumerate() {
            let gb = g.act_vec(bj);
            for (i, bi) in basis.vectors.iter().enumerate() {
                let mut val = Complex::new(dot(bi, &gb), 0.0);
                if i == j {
                    val -= rot;
                }
                m[(k * d + i, j)] = val;
            }
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::LinearAlgebra("SVD without right singular vectors".into()))?;
    let (idx, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let coeffs: Vec<Complex<f64>> = (0..d).map(|j| v_t[(idx, j)].conj()).collect();
    let m3 = params.sites();
    let mut v = vec![Complex::new(0.0, 0.0); m3];
    for (c, b) in coeffs.iter().zip(&basis.vectors) {
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += c * bi;
        }
    }
    Ok((v, smin))
}

/// Outcome of checking a symmetry on a computed orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub subgroup: String,
    /// Largest generator defect, relative to the orbit amplitude.
    pub max_defect: f64,
    pub holds: bool,
    /// No strictly larger catalog subgroup holds at the same tolerance.
    pub minimal: bool,
    /// A strictly larger subgroup that also holds, when `minimal` is false.
    pub larger: Option<String>,
}

pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-4;

/// Largest relative defect of `g x(s - theta T / 2 pi) - x(s)` over the grid and
/// the generators of `h`.
fn generator_defect(orbit: &PeriodicOrbit, h: &TwistedSubgroup) -> f64 {
    let n = h.n;
    let m = orbit.samples.len();
    let scale = orbit.amplitude();
    let mut worst: f64 = 0.0;
    for (g, phase) in h.generators() {
        let lag = orbit.period * phase as f64 / (2 * n) as f64;
        for k in 0..m {
            let s = orbit.period * k as f64 / m as f64;
            let moved = act(&g, &orbit.state_at(s - lag));
            let here = &orbit.samples[k];
            let d = moved
                .x
                .iter()
                .zip(&here.x)
                .chain(moved.y.iter().zip(&here.y))
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
            worst = worst.max(d);
        }
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// Catalog subgroups of the acting group, used as the search space for minimality.
pub fn catalog_subgroups(n: usize, variant: Variant) -> Vec<TwistedSubgroup> {
    let mut opts: Vec<Factor> = Vec::new();
    if variant.is_dihedral() {
        opts.push(Factor::Dihedral);
        opts.extend((1..n).map(|k| Factor::Cyclic { twist: k }));
        opts.push(Factor::Reflection { odd: false });
        opts.push(Factor::Reflection { odd: true });
    } else {
        opts.extend((0..n).map(|k| Factor::Cyclic { twist: k }));
    }
    let mut out = Vec::new();
    for &a in &opts {
        for &b in &opts {
            for &c in &opts {
                out.push(TwistedSubgroup { n, variant, factors: [a, b, c] });
            }
        }
    }
    out
}

/// Checks `g x(s - theta T / 2 pi) = x(s)` for every generator of `h` on the
/// orbit's grid. Refuses orbits whose shooting residual exceeds `1e-8`.
pub fn verify_orbit_symmetry(orbit: &PeriodicOrbit, h: &TwistedSubgroup, tol: f64) -> Result<SymmetryReport> {
    if !orbit.is_converged() {
        return Err(Error::OrbitNotConverged { residual: orbit.residual, limit: PeriodicOrbit::CONVERGED });
    }
    if orbit.params_at.n() != h.n {
        return Err(Error::MalformedSubgroup(format!(
            "subgroup is for N = {}, orbit has N = {}",
            h.n,
            orbit.params_at.n()
        )));
    }
    let max_defect = generator_defect(orbit, h);
    let holds = max_defect < tol;
    let mut larger = None;
    if holds {
        let order = h.order();
        for k in catalog_subgroups(h.n, h.variant) {
            if k.order() > order && h.is_subgroup_of(&k) && generator_defect(orbit, &k) < tol {
                larger = Some(k.to_string());
                break;
            }
        }
    }
    Ok(SymmetryReport {
        subgroup: h.to_string(),
        max_defect,
        holds,
        minimal: holds && larger.is_none(),
        larger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fourier_pair;

    #[test]
    fn shift_has_order_n() {
        let n = 5;
        let g = GroupElement::shift(n, 1, 1);
        let mut h = GroupElement::identity(n);
        for _ in 0..n {
            h = h.compose(&g);
        }
        assert_eq!(h, GroupElement::identity(n));
    }

    #[test]
    fn flip_negates_sine_mode() {
        let (_, s) = fourier_pair(3, [1, 0, 0]);
        let f = GroupElement::flip(3, 0).act_vec(&s);
        for (a, b) in f.iter().zip(&s) {
            assert!((a + b).abs() < 1e-15);
        }
    }

    #[test]
    fn compose_matches_sequential_action() {
        let n = 3;
        let v: Vec<f64> = (0..27).map(|i| i as f64).collect();
        let els = group_elements(Variant::VdpBidirectionalY, n);
        for g in els.iter().step_by(17) {
            for h in els.iter().step_by(23) {
                assert_eq!(g.compose(h).act_vec(&v), g.act_vec(&h.act_vec(&v)));
                assert_eq!(g.inverse().act_vec(&g.act_vec(&v)), v);
            }
        }
    }

    #[test]
    fn class_counts() {
        let v = Variant::VdpBidirectionalY;
        assert_eq!(symmetry_classes(&ModeIndex([1, 1, 1]), v, 5).len(), 27);
        let z = symmetry_classes(&ModeIndex::zero(), v, 5);
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].to_string(), "(D5 x D5 x D5)^(1,1,1)");
        let c = symmetry_classes(&ModeIndex([1, 2, 0]), Variant::VdplUnidirectionalX, 5);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].to_string(), "(Z5 x Z5 x Z5)^(1,2,0)");
    }

    #[test]
    fn branch_counts() {
        let v = Variant::VdpBidirectionalY;
        let n = 5;
        let z = Factor::Cyclic { twist: 1 };
        let d1 = Factor::Reflection { odd: false };
        let h = |f| TwistedSubgroup::new(n, v, f).unwrap();
        assert_eq!(branch_count(&h([z, z, z])).unwrap(), 8);
        assert_eq!(branch_count(&h([Factor::Dihedral, z, z])).unwrap(), 4);
        assert_eq!(branch_count(&h([d1, d1, d1])).unwrap(), 125);
        let c = TwistedSubgroup::traveling(n, Variant::VdplUnidirectionalX, &ModeIndex([1, 2, 0]));
        assert_eq!(branch_count(&c).unwrap(), 1);
    }

    #[test]
    fn cyclic_group_rejects_reflections() {
        let f = [Factor::Reflection { odd: true }, Factor::Dihedral, Factor::Cyclic { twist: 0 }];
        assert!(TwistedSubgroup::new(3, Variant::VdplUnidirectionalX, f).is_err());
    }

    #[test]
    fn display_parse_round_trip() {
        let v = Variant::VdpBidirectionalY;
        for t in [[1, 2, 0], [0, 0, 0], [2, 1, 1]] {
            for h in symmetry_classes(&ModeIndex(t), v, 3) {
                assert_eq!(parse_subgroup(&h.to_string(), 3, v).unwrap(), h);
            }
        }
        let h = parse_subgroup("(Z_N \u{00d7} D1 \u{00d7} Z3)^(1, \u{2212}, -1)", 3, v).unwrap();
        assert_eq!(h.to_string(), "(Z3 x D1 x Z3)^(1,-,2)");
        assert!(parse_subgroup("(Z5 x Z5 x Z5)^(1,1,1)", 3, v).is_err());
        assert!(parse_subgroup("(D1 x D1 x D1)^(1,+,+)", 3, v).is_err());
        assert!(parse_subgroup("Z3 x Z3", 3, v).is_err());
    }

    #[test]
    fn membership_follows_twist() {
        let h = TwistedSubgroup::traveling(3, Variant::VdpBidirectionalY, &ModeIndex([1, 2, 0]));
        let g = GroupElement { n: 3, rot: [1, 1, 2], flip: [false; 3] };
        // phase 2*(1*1 + 1*2 + 2*0) = 6 = 0 mod 6
        assert!(h.contains(&g, 0));
        assert!(!h.contains(&g, 2));
        assert!(!h.contains(&GroupElement::flip(3, 0), 0));
    }

    #[test]
    fn traveling_wave_is_in_dihedral_catalog_fix() {
        let p = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap().with_couplings(0.2, 0.0, 0.0);
        let t = ModeIndex([1, 1, 1]);
        for h in symmetry_classes(&t, p.variant(), 3) {
            let (v, defect) = fixed_mode_vector(&p, &t, &h).unwrap();
            assert!(defect < 1e-10, "{h}: {defect}");
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn subgroup_containment() {
        let v = Variant::VdpBidirectionalY;
        let full = TwistedSubgroup::full(3, v);
        let z0 = TwistedSubgroup::traveling(3, v, &ModeIndex::zero());
        let z1 = TwistedSubgroup::traveling(3, v, &ModeIndex([1, 0, 0]));
        assert!(z0.is_subgroup_of(&full));
        assert!(!z1.is_subgroup_of(&full));
        assert!(!full.is_subgroup_of(&z0));
    }
}
