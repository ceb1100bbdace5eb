use proptest::prelude::*;

use torus_hopf::model::{coupling_matrix, jacobian, rhs, rhs_flat, site_coords, site_index};
use torus_hopf::symmetry::{act, group_generators};
use torus_hopf::{CubicTerm, LatticeParams, LatticeState, Variant};

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::VdpBidirectionalY), Just(Variant::VdplUnidirectionalX)]
}

fn params(n: usize) -> impl Strategy<Value = LatticeParams> {
    (variant(), -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -0.5..0.5f64, 0.1..3.0f64, 0.1..3.0f64, any::<bool>())
        .prop_map(move |(v, d, z, e, a, nu, b, third)| {
            let cubic = if third { CubicTerm::Third } else { CubicTerm::Unit };
            LatticeParams::new(v, n)
                .unwrap()
                .with_couplings(d, z, e)
                .with_a(a)
                .with_nu(nu)
                .unwrap()
                .with_b(b)
                .unwrap()
                .with_cubic(cubic)
        })
}

fn state(n: usize) -> impl Strategy<Value = LatticeState> {
    let m = n * n * n;
    (prop::collection::vec(-2.0..2.0f64, m), prop::collection::vec(-2.0..2.0f64, m))
        .prop_map(|(x, y)| LatticeState { x, y })
}

fn lattice() -> impl Strategy<Value = (LatticeParams, LatticeState)> {
    prop_oneof![Just(3usize), Just(5usize)].prop_flat_map(|n| (params(n), state(n)))
}

/// Direct transcription of the stencils, one site at a time.
fn rhs_by_sites(p: &LatticeParams, s: &LatticeState) -> LatticeState {
    let n = p.n();
    let c3 = match p.cubic() {
        CubicTerm::Unit => 1.0,
        CubicTerm::Third => 1.0 / 3.0,
    };
    let [d, z, e] = p.couplings();
    let at = |v: &[f64], a: usize, b: usize, c: usize| v[site_index(n, a % n, b % n, c % n)];
    let mut out = LatticeState::zeros(p.sites());
    for i in 0..p.sites() {
        let [a, b, c] = site_coords(n, i);
        let (x, y) = (s.x[i], s.y[i]);
        out.x[i] = match p.variant() {
            Variant::VdpBidirectionalY => {
                let lap = |v: &[f64]| {
                    d * (2.0 * v[i] - at(v, a + 1, b, c) - at(v, a + n - 1, b, c))
                        + z * (2.0 * v[i] - at(v, a, b + 1, c) - at(v, a, b + n - 1, c))
                        + e * (2.0 * v[i] - at(v, a, b, c + 1) - at(v, a, b, c + n - 1))
                };
                p.nu() * (p.a() * x - c3 * x * x * x) - y - lap(&s.y)
            }
            Variant::VdplUnidirectionalX => {
                let diff = d * (x - at(&s.x, a + 1, b, c))
                    + z * (x - at(&s.x, a, b + 1, c))
                    + e * (x - at(&s.x, a, b, c + 1));
                -y - x * x * x - x * x + p.a() * x - diff
            }
        };
        out.y[i] = p.b() * x;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rhs_commutes_with_generators((p, s) in lattice()) {
        let f = rhs(&p, &s).unwrap();
        for g in group_generators(p.variant(), p.n()) {
            prop_assert_eq!(rhs(&p, &act(&g, &s)).unwrap(), act(&g, &f));
        }
    }

    #[test]
    fn origin_is_an_equilibrium(p in prop_oneof![Just(3usize), Just(5usize), Just(7usize)].prop_flat_map(params)) {
        let f = rhs(&p, &LatticeState::zeros(p.sites())).unwrap();
        prop_assert!(f.x.iter().chain(&f.y).all(|v| *v == 0.0));
    }

    #[test]
    fn rhs_matches_site_stencils((p, s) in lattice()) {
        let f = rhs(&p, &s).unwrap();
        let g = rhs_by_sites(&p, &s);
        for (a, b) in f.x.iter().zip(&g.x).chain(f.y.iter().zip(&g.y)) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn y_equation_is_linear((p, s) in lattice()) {
        let f = rhs(&p, &s).unwrap();
        for (dy, x) in f.y.iter().zip(&s.x) {
            prop_assert_eq!(*dy, p.b() * x);
        }
    }

    #[test]
    fn bidirectional_coupling_is_symmetric(p in params(5)) {
        let c = coupling_matrix(&p.with_variant(Variant::VdpBidirectionalY)).to_dense();
        prop_assert_eq!(&c, &c.transpose());
    }

    #[test]
    fn coupling_row_sums_by_variant(p in params(3)) {
        let expect = match p.variant() {
            Variant::VdpBidirectionalY => 1.0,
            Variant::VdplUnidirectionalX => 0.0,
        };
        for r in coupling_matrix(&p).row_sums() {
            prop_assert!((r - expect).abs() <= 1e-14);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobian_matches_central_differences(p in params(3), s in state(3)) {
        let j = jacobian(&p, &s).unwrap();
        let u = s.to_flat();
        let dim = u.len();
        let h = 1e-5;
        let scale = j.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let (mut up, mut um) = (vec![0.0; dim], vec![0.0; dim]);
        for col in 0..dim {
            let mut plus = u.clone();
            let mut minus = u.clone();
            plus[col] += h;
            minus[col] -= h;
            rhs_flat(&p, &plus, &mut up);
            rhs_flat(&p, &minus, &mut um);
            for row in 0..dim {
                let fd = (up[row] - um[row]) / (2.0 * h);
                prop_assert!((fd - j[(row, col)]).abs() <= 1e-6 * scale, "entry ({row},{col}): {fd} vs {}", j[(row, col)]);
            }
        }
    }
}

#[test]
fn even_lattices_are_rejected() {
    for n in [1, 2, 4, 6] {
        assert!(LatticeParams::new(Variant::VdpBidirectionalY, n).is_err());
    }
    assert!(LatticeParams::new(Variant::VdplUnidirectionalX, 3).unwrap().with_nu(0.0).is_err());
    assert!(LatticeParams::new(Variant::VdplUnidirectionalX, 3).unwrap().with_b(-1.0).is_err());
}

#[test]
fn mismatched_state_is_rejected() {
    let p = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap();
    assert!(rhs(&p, &LatticeState::zeros(125)).is_err());
    assert!(jacobian(&p, &LatticeState { x: vec![0.0; 27], y: vec![0.0; 26] }).is_err());
}
