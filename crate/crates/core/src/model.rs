//! Lattice parameters, state layout and the two coupled vector fields.
//!
//! A site of the `N x N x N` torus is addressed by `(alpha, beta, gamma)` with
//! every coordinate taken mod `N` and flattened as `alpha*N^2 + beta*N + gamma`.
//! The flat phase-space vector is `[x; y]`, each block of length `N^3`.
//!
//! Both systems share `y' = b x`. They differ in the `x` equation:
//!
//! * `VdpBidirectionalY`: `x' = nu (a x - c x^3) - (C y)` where `C` is the
//!   symmetric six-neighbour stencil with `K_t` as eigenvalues and `c` is 1
//!   or 1/3 (see [`CubicTerm`]).
//! * `VdplUnidirectionalX`: `x' = -y - x^3 - x^2 + a x - (C x)` where `C` is the
//!   forward-difference stencil, so that the mode `t` sees `H_t(a) - i G_t`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// vdP nodes, y-coupled to all six neighbours; `D_N^3` symmetric.
    VdpBidirectionalY,
    /// vdP-like nodes, x-coupled to the three forward neighbours; `Z_N^3` symmetric.
    VdplUnidirectionalX,
}

impl Variant {
    pub fn short_name(self) -> &'static str {
        match self {
            Variant::VdpBidirectionalY => "vdp",
            Variant::VdplUnidirectionalX => "vdpl",
        }
    }

    pub fn is_dihedral(self) -> bool {
        matches!(self, Variant::VdpBidirectionalY)
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vdp" | "vdpbidirectionaly" => Ok(Variant::VdpBidirectionalY),
            "vdpl" | "vdplunidirectionalx" => Ok(Variant::VdplUnidirectionalX),
            other => Err(Error::InvalidParameter(format!("unknown variant '{other}'"))),
        }
    }
}

/// Normalization of the cubic damping term of the vdP node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CubicTerm {
    /// `nu (a x - x^3)`
    #[default]
    Unit,
    /// `nu (a x - x^3 / 3)`
    Third,
}

impl CubicTerm {
    pub(crate) fn factor(self) -> f64 {
        match self {
            CubicTerm::Unit => 1.0,
            CubicTerm::Third => 1.0 / 3.0,
        }
    }
}

/// All model constants of one lattice. Construct with [`LatticeParams::new`];
/// the setters keep the invariants (`N` odd and at least 3, `nu, b > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct LatticeParams {
    n: usize,
    delta: f64,
    zeta: f64,
    epsilon: f64,
    nu: f64,
    a: f64,
    b: f64,
    variant: Variant,
    cubic: CubicTerm,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    delta: f64,
    zeta: f64,
    epsilon: f64,
    nu: f64,
    a: f64,
    b: f64,
    variant: Variant,
    #[serde(default)]
    cubic: CubicTerm,
}

impl TryFrom<RawParams> for LatticeParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        LatticeParams::new(r.variant, r.n)?
            .with_couplings(r.delta, r.zeta, r.epsilon)
            .with_a(r.a)
            .with_nu(r.nu)?
            .with_b(r.b)
            .map(|p| p.with_cubic(r.cubic))
    }
}

impl From<LatticeParams> for RawParams {
    fn from(p: LatticeParams) -> Self {
        RawParams {
            n: p.n,
            delta: p.delta,
            zeta: p.zeta,
            epsilon: p.epsilon,
            nu: p.nu,
            a: p.a,
            b: p.b,
            variant: p.variant,
            cubic: p.cubic,
        }
    }
}

impl LatticeParams {
    /// Uncoupled lattice with `nu = b = 1`, `a = 0`.
    pub fn new(variant: Variant, n: usize) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "lattice side N must be odd and >= 3, got {n}"
            )));
        }
        Ok(LatticeParams {
            n,
            delta: 0.0,
            zeta: 0.0,
            epsilon: 0.0,
            nu: 1.0,
            a: 0.0,
            b: 1.0,
            variant,
            cubic: CubicTerm::Unit,
        })
    }

    pub fn with_couplings(mut self, delta: f64, zeta: f64, epsilon: f64) -> Self {
        self.delta = delta;
        self.zeta = zeta;
        self.epsilon = epsilon;
        self
    }

    pub fn with_a(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu must be > 0, got {nu}")));
        }
        self.nu = nu;
        Ok(self)
    }

    pub fn with_b(mut self, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("b must be > 0, got {b}")));
        }
        self.b = b;
        Ok(self)
    }

    pub fn with_cubic(mut self, cubic: CubicTerm) -> Self {
        self.cubic = cubic;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn zeta(&self) -> f64 {
        self.zeta
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn variant(&self) -> Variant {
        self.variant
    }
    pub fn cubic(&self) -> CubicTerm {
        self.cubic
    }

    /// `[delta, zeta, epsilon]`, one coupling per lattice axis.
    pub fn couplings(&self) -> [f64; 3] {
        [self.delta, self.zeta, self.epsilon]
    }

    /// Number of sites, `N^3`.
    pub fn sites(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Phase-space dimension, `2 N^3`.
    pub fn dim(&self) -> usize {
        2 * self.sites()
    }
}

pub fn site_index(n: usize, alpha: usize, beta: usize, gamma: usize) -> usize {
    (alpha % n) * n * n + (beta % n) * n + gamma % n
}

pub fn site_coords(n: usize, i: usize) -> [usize; 3] {
    [i / (n * n), (i / n) % n, i % n]
}

/// Index of the neighbour of site `i` displaced by `+1` (`forward`) or `-1`
/// along `axis`.
#[inline]
pub(crate) fn neighbor(n: usize, i: usize, axis: usize, forward: bool) -> usize {
    let stride = match axis {
        0 => n * n,
        1 => n,
        _ => 1,
    };
    let coord = (i / stride) % n;
    let base = i - coord * stride;
    let next = if forward { (coord + 1) % n } else { (coord + n - 1) % n };
    base + next * stride
}

/// Positions `x` and velocities-like variables `y`, one per lattice site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl LatticeState {
    pub fn zeros(sites: usize) -> Self {
        LatticeState { x: vec![0.0; sites], y: vec![0.0; sites] }
    }

    pub fn from_parts(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        Ok(LatticeState { x, y })
    }

    /// Splits a flat `[x; y]` vector.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: flat.len() + 1, found: flat.len() });
        }
        let m = flat.len() / 2;
        Ok(LatticeState { x: flat[..m].to_vec(), y: flat[m..].to_vec() })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.x.len());
        v.extend_from_slice(&self.x);
        v.extend_from_slice(&self.y);
        v
    }

    pub fn sites(&self) -> usize {
        self.x.len()
    }

    pub fn sup_norm(&self) -> f64 {
        self.x.iter().chain(self.y.iter()).fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn check(&self, params: &LatticeParams) -> Result<()> {
        let s = params.sites();
        if self.x.len() != s {
            return Err(Error::DimensionMismatch { expected: s, found: self.x.len() });
        }
        if self.y.len() != s {
            return Err(Error::DimensionMismatch { expected: s, found: self.y.len() });
        }
        Ok(())
    }
}

/// `out = C v` evaluated with the stencil. The two neighbour values of the
/// bidirectional stencil are summed before subtraction so that reflections,
/// which swap them, leave the floating-point result unchanged.
pub(crate) fn apply_coupling(params: &LatticeParams, v: &[f64], out: &mut [f64]) {
    let n = params.n;
    let [d, z, e] = params.couplings();
    match params.variant {
        Variant::VdpBidirectionalY => {
            for i in 0..v.len() {
                let vi = v[i];
                let s0 = v[neighbor(n, i, 0, true)] + v[neighbor(n, i, 0, false)];
                let s1 = v[neighbor(n, i, 1, true)] + v[neighbor(n, i, 1, false)];
                let s2 = v[neighbor(n, i, 2, true)] + v[neighbor(n, i, 2, false)];
                out[i] = vi
                    + d * (2.0 * vi - s0)
                    + z * (2.0 * vi - s1)
                    + e * (2.0 * vi - s2);
            }
        }
        Variant::VdplUnidirectionalX => {
            for i in 0..v.len() {
                let vi = v[i];
                out[i] = d * (vi - v[neighbor(n, i, 0, true)])
                    + z * (vi - v[neighbor(n, i, 1, true)])
                    + e * (vi - v[neighbor(n, i, 2, true)]);
            }
        }
    }
}

/// Vector field on the flat `[x; y]` layout. `du` must have the same length as `u`.
pub fn rhs_flat(params: &LatticeParams, u: &[f64], du: &mut [f64]) {
    let m = params.sites();
    let (x, y) = u.split_at(m);
    let (dx, dy) = du.split_at_mut(m);
    match params.variant {
        Variant::VdpBidirectionalY => {
            apply_coupling(params, y, dx);
            let c = params.cubic.factor();
            for i in 0..m {
                let xi = x[i];
                dx[i] = params.nu * (params.a * xi - c * xi * xi * xi) - dx[i];
            }
        }
        Variant::VdplUnidirectionalX => {
            apply_coupling(params, x, dx);
            for i in 0..m {
                let xi = x[i];
                dx[i] = -y[i] - xi * xi * xi - xi * xi + params.a * xi - dx[i];
            }
        }
    }
    for i in 0..m {
        dy[i] = params.b * x[i];
    }
}

/// Right-hand side `(x', y')` at `state`.
pub fn rhs(params: &LatticeParams, state: &LatticeState) -> Result<LatticeState> {
    state.check(params)?;
    let u = state.to_flat();
    let mut du = vec![0.0; u.len()];
    rhs_flat(params, &u, &mut du);
    LatticeState::from_flat(&du)
}

/// Derivative of the node nonlinearity `d(x')/d(x_i)` at the node, excluding coupling.
#[inline]
fn node_slope(params: &LatticeParams, xi: f64) -> f64 {
    match params.variant {
        Variant::VdpBidirectionalY => {
            params.nu * (params.a - 3.0 * params.cubic.factor() * xi * xi)
        }
        Variant::VdplUnidirectionalX => params.a - 3.0 * xi * xi - 2.0 * xi,
    }
}

/// `out[:, k] = J(u) v[:, k]` for `cols` column-major columns of length `2 N^3`.
pub fn jacobian_apply(params: &LatticeParams, u: &[f64], v: &[f64], out: &mut [f64], cols: usize) {
    let m = params.sites();
    let dim = 2 * m;
    debug_assert_eq!(v.len(), dim * cols);
    debug_assert_eq!(out.len(), dim * cols);
    let x = &u[..m];
    let mut coupled = vec![0.0; m];
    for k in 0..cols {
        let vk = &v[k * dim..(k + 1) * dim];
        let ok = &mut out[k * dim..(k + 1) * dim];
        let (vx, vy) = vk.split_at(m);
        match params.variant {
            Variant::VdpBidirectionalY => {
                apply_coupling(params, vy, &mut coupled);
                for i in 0..m {
                    ok[i] = node_slope(params, x[i]) * vx[i] - coupled[i];
                }
            }
            Variant::VdplUnidirectionalX => {
                apply_coupling(params, vx, &mut coupled);
                for i in 0..m {
                    ok[i] = node_slope(params, x[i]) * vx[i] - vy[i] - coupled[i];
                }
            }
        }
        for i in 0..m {
            ok[m + i] = params.b * vx[i];
        }
    }
}

/// Dense analytic Jacobian of [`rhs`], `2N^3 x 2N^3`.
pub fn jacobian(params: &LatticeParams, state: &LatticeState) -> Result<DMatrix<f64>> {
    state.check(params)?;
    let m = params.sites();
    let c = coupling_matrix(params);
    let mut j = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        j[(i, i)] = node_slope(params, state.x[i]);
        j[(m + i, i)] = params.b;
    }
    match params.variant {
        Variant::VdpBidirectionalY => {
            for (i, row) in c.rows.iter().enumerate() {
                for &(col, val) in row {
                    j[(i, m + col)] -= val;
                }
            }
        }
        Variant::VdplUnidirectionalX => {
            for (i, row) in c.rows.iter().enumerate() {
                for &(col, val) in row {
                    j[(i, col)] -= val;
                }
            }
            for i in 0..m {
                j[(i, m + i)] = -1.0;
            }
        }
    }
    Ok(j)
}

/// Sparse coupling matrix, one row of `(column, value)` entries per site.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    pub sites: usize,
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl CouplingMatrix {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut c = DMatrix::zeros(self.sites, self.sites);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                c[(i, j)] += v;
            }
        }
        c
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, c)| c * v[j]).sum())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows.iter().map(|row| row.iter().map(|&(_, v)| v).sum()).collect()
    }

    /// Bit-exact symmetry of the dense form.
    pub fn is_symmetric(&self) -> bool {
        let d = self.to_dense();
        d == d.transpose()
    }
}

/// Coupling matrix assembled entry by entry from the neighbour lists.
pub fn coupling_matrix(params: &LatticeParams) -> CouplingMatrix {
    let n = params.n;
    let m = params.sites();
    let cs = params.couplings();
    let rows = (0..m)
        .map(|i| {
            let [al, be, ga] = site_coords(n, i);
            let mut row = Vec::with_capacity(7);
            match params.variant {
                Variant::VdpBidirectionalY => {
                    row.push((i, 1.0 + 2.0 * (cs[0] + cs[1] + cs[2])));
                    row.push((site_index(n, al + 1, be, ga), -cs[0]));
                    row.push((site_index(n, al + n - 1, be, ga), -cs[0]));
                    row.push((site_index(n, al, be + 1, ga), -cs[1]));
                    row.push((site_index(n, al, be + n - 1, ga), -cs[1]));
                    row.push((site_index(n, al, be, ga + 1), -cs[2]));
                    row.push((site_index(n, al, be, ga + n - 1), -cs[2]));
                }
                Variant::VdplUnidirectionalX => {
                    row.push((i, cs[0] + cs[1] + cs[2]));
                    row.push((site_index(n, al + 1, be, ga), -cs[0]));
                    row.push((site_index(n, al, be + 1, ga), -cs[1]));
                    row.push((site_index(n, al, be, ga + 1), -cs[2]));
                }
            }
            row
        })
        .collect();
    CouplingMatrix { sites: m, rows }
}
