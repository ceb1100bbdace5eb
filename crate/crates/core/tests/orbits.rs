use std::f64::consts::PI;

use nalgebra::DVector;

use torus_hopf::model::jacobian;
use torus_hopf::orbits::{
    admissible_period_catalog, existence_search, find_orbit_shooting, find_orbit_with, integrate, integrate_at, log_grid,
    trace_branch, BranchOptions, ExistenceOptions, ExistenceOutcome, PeriodicOrbit, ShootingOptions, Tolerance,
};
use torus_hopf::spectral::{bifurcation_record, fourier_pair, k_of_mode, limit_periods_vdpl};
use torus_hopf::stability::vdpl_threshold;
use torus_hopf::symmetry::{act, symmetry_classes, verify_orbit_symmetry, GroupElement, TwistedSubgroup};
use torus_hopf::{CubicTerm, Error, LatticeParams, LatticeState, ModeIndex, Variant};

fn synchronized(m: usize, x: f64) -> LatticeState {
    LatticeState { x: vec![x; m], y: vec![0.0; m] }
}

#[test]
fn origin_stays_at_origin() {
    for variant in [Variant::VdpBidirectionalY, Variant::VdplUnidirectionalX] {
        let p = LatticeParams::new(variant, 3).unwrap().with_couplings(0.3, -0.2, 0.1).with_a(0.4);
        let tr = integrate(&p, &LatticeState::zeros(27), (0.0, 50.0), Tolerance::default()).unwrap();
        assert!(tr.states.iter().all(|s| s.sup_norm() == 0.0));
    }
}

#[test]
fn synchronized_oscillators_reach_the_van_der_pol_cycle() {
    let p = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap().with_a(1.0).with_cubic(CubicTerm::Third);
    let end = 120.0;
    let tr = integrate(&p, &synchronized(27, 0.01), (0.0, end), Tolerance::default()).unwrap();
    let last: Vec<&LatticeState> = tr.times.iter().zip(&tr.states).filter(|(t, _)| **t > end - 10.0).map(|(_, s)| s).collect();
    let peak = last.iter().map(|s| s.x[0].abs()).fold(0.0, f64::max);
    // classical amplitude of x' = x - x^3/3 - y, y' = x
    assert!((peak - 2.0).abs() < 0.05, "{peak}");
    for s in &last {
        assert!(s.x.iter().all(|v| (v - s.x[0]).abs() <= 1e-9));
    }
}

#[test]
fn small_solutions_follow_the_linearization() {
    for variant in [Variant::VdpBidirectionalY, Variant::VdplUnidirectionalX] {
        let p = LatticeParams::new(variant, 3).unwrap().with_couplings(0.2, -0.1, 0.15).with_a(0.05);
        let (c, s) = fourier_pair(3, [1, 2, 0]);
        let raw: Vec<f64> = c.iter().chain(&s).enumerate().map(|(i, v)| v + 0.1 * ((i % 7) as f64 - 3.0)).collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let u0: Vec<f64> = raw.iter().map(|v| 1e-6 * v / norm).collect();
        let period = 2.0 * PI / p.b().sqrt();
        let times: Vec<f64> = (0..=8).map(|k| period * k as f64 / 8.0).collect();
        let j = jacobian(&p, &LatticeState::zeros(27)).unwrap();
        let tr = integrate_at(&p, &LatticeState::from_flat(&u0).unwrap(), &times, Tolerance::new(1e-10, 1e-16).unwrap())
            .unwrap();
        for (t, st) in times.iter().zip(&tr.states) {
            let exact = (&j * *t).exp() * DVector::from_column_slice(&u0);
            let err = st.to_flat().iter().zip(exact.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err <= 1e-8, "{variant:?} t = {t}: {err}");
        }
    }
}

#[test]
fn error_scales_with_tolerance() {
    let p = LatticeParams::new(Variant::VdplUnidirectionalX, 3).unwrap().with_a(0.3);
    let init = synchronized(27, 0.5);
    let times = [0.0, 20.0];
    let reference = integrate_at(&p, &init, &times, Tolerance::new(1e-14, 1e-16).unwrap()).unwrap().states[1].to_flat();
    let mut points = Vec::new();
    for k in 0..8 {
        let tol = 1e-6 / 2f64.powi(k);
        let end = integrate_at(&p, &init, &times, Tolerance::new(tol, tol * 1e-2).unwrap()).unwrap().states[1].to_flat();
        let err = end.iter().zip(&reference).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        points.push((tol.ln(), err.ln()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    // error-per-step control of a fifth-order pair: global error proportional to tol
    assert!((0.75..=1.25).contains(&slope), "log-log slope {slope}");
}

#[test]
fn fixed_point_subspaces_are_invariant() {
    let cases = [
        (Variant::VdpBidirectionalY, GroupElement::flip(3, 0)),
        (Variant::VdpBidirectionalY, GroupElement::shift(3, 2, 1)),
        (Variant::VdplUnidirectionalX, GroupElement::shift(3, 1, 1)),
    ];
    for (variant, g) in cases {
        let p = LatticeParams::new(variant, 3).unwrap().with_couplings(0.25, -0.15, 0.2).with_a(0.3);
        let raw = LatticeState {
            x: (0..27).map(|i| ((i * 7 % 11) as f64 - 5.0) / 10.0).collect(),
            y: (0..27).map(|i| ((i * 5 % 13) as f64 - 6.0) / 12.0).collect(),
        };
        // average over the cyclic group generated by g
        let mut sum = raw.clone();
        let mut cur = raw.clone();
        let order = if g.is_cyclic() { 3 } else { 2 };
        for _ in 1..order {
            cur = act(&g, &cur);
            for (s, c) in sum.x.iter_mut().zip(&cur.x).chain(sum.y.iter_mut().zip(&cur.y)) {
                *s += c;
            }
        }
        assert!(act(&g, &sum).x.iter().zip(&sum.x).all(|(a, b)| (a - b).abs() <= 1e-15));
        let tr = integrate(&p, &sum, (0.0, 30.0), Tolerance::default()).unwrap();
        for s in &tr.states {
            let moved = act(&g, s);
            let d = moved.to_flat().iter().zip(s.to_flat()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(d <= 1e-10, "{variant:?}: {d}");
        }
    }
}

fn synchronized_orbit(a_offset: f64) -> (LatticeParams, PeriodicOrbit) {
    let p0 = LatticeParams::new(Variant::VdplUnidirectionalX, 3).unwrap().with_couplings(-0.1, -0.1, -0.1);
    let (a_star, _) = vdpl_threshold(&p0).unwrap();
    let p = p0.with_a(a_star + a_offset);
    let guess = synchronized(27, (4.0 * p.a() / 3.0).sqrt());
    let orbit = find_orbit_shooting(&p, &guess, 2.0 * PI / p.b().sqrt(), Some(ModeIndex::zero())).unwrap();
    (p, orbit)
}

#[test]
fn synchronized_orbit_near_onset() {
    let (p, orbit) = synchronized_orbit(0.01);
    assert!(orbit.is_converged());
    assert!(orbit.amplitude() > 1e-6);
    let p1 = limit_periods_vdpl(&p, &ModeIndex::zero()).p1;
    assert!((orbit.period - p1).abs() / p1 <= 0.02, "{} vs {p1}", orbit.period);
    let s = orbit.initial();
    assert!(s.x.iter().all(|v| (v - s.x[0]).abs() <= 1e-8));
    let closure = integrate_at(&p, s, &[0.0, orbit.period], Tolerance::new(1e-11, 1e-13).unwrap()).unwrap();
    let gap = closure.states[1].to_flat().iter().zip(s.to_flat()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(gap <= orbit.residual.max(1e-9), "{gap}");
}

#[test]
fn shooting_from_a_converged_orbit_is_idempotent() {
    let (p, orbit) = synchronized_orbit(0.03);
    let again = find_orbit_shooting(&p, orbit.initial(), orbit.period, None).unwrap();
    assert!((again.period - orbit.period).abs() <= 1e-10);
}

#[test]
fn constant_guesses_are_rejected() {
    let p = LatticeParams::new(Variant::VdplUnidirectionalX, 3).unwrap().with_a(0.05);
    let r = find_orbit_shooting(&p, &LatticeState::zeros(27), 2.0 * PI, None);
    assert!(matches!(r, Err(Error::ConstantGuess { .. })), "{r:?}");
}

#[test]
fn period_approaches_the_linear_period_at_onset() {
    let p = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap().with_couplings(0.2, 0.0, 0.0);
    let t = ModeIndex([1, 0, 0]);
    let w = (p.b() * k_of_mode(&p, &t)).sqrt();
    let (c, _) = fourier_pair(3, [1, 0, 0]);
    let mut errors = Vec::new();
    for a in [0.05, 0.02, 0.01] {
        let q = p.with_a(a);
        let amp = 2.0 * a.sqrt();
        let guess = LatticeState { x: c.iter().map(|v| amp * v).collect(), y: vec![0.0; 27] };
        let orbit = find_orbit_shooting(&q, &guess, 2.0 * PI / w, Some(t)).unwrap();
        errors.push((orbit.period - 2.0 * PI / w).abs());
    }
    assert!(errors.windows(2).all(|e| e[1] < e[0]), "{errors:?}");
    assert!(errors[2] / (2.0 * PI / w) <= 0.01);
}

#[test]
fn synchronized_branch_obeys_the_square_root_law() {
    let p = LatticeParams::new(Variant::VdplUnidirectionalX, 3).unwrap().with_couplings(-0.1, -0.1, -0.1);
    let record = bifurcation_record(&p, &ModeIndex::zero()).unwrap();
    let h = symmetry_classes(&ModeIndex::zero(), p.variant(), 3)[0];
    let trace = trace_branch(&p, &record, &h, (0.005, 0.025), 0.005, &BranchOptions::default()).unwrap();
    assert_eq!(trace.points.len(), 5, "{:?}", trace.truncated);
    assert!(trace.points.windows(2).all(|w| (w[1].a - w[0].a - 0.005).abs() <= 1e-12));
    let fit = trace.onset_fit.unwrap();
    assert!(fit.r_squared > 0.99, "{fit:?}");
    let p1 = record.limit_periods[0];
    let errs: Vec<f64> = trace.points.iter().map(|b| (b.orbit.period - p1).abs()).collect();
    assert!(errs[0] / p1 <= 0.01);
    assert!(errs[..3].windows(2).all(|e| e[0] < e[1]), "{errs:?}");
    for b in &trace.points {
        assert!(b.symmetry_report.holds);
    }
}

#[test]
fn traveling_wave_branch_keeps_its_symmetry() {
    let p = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap().with_couplings(0.2, 0.0, 0.0);
    let t = ModeIndex([1, 1, 1]);
    let record = bifurcation_record(&p, &t).unwrap();
    let h = TwistedSubgroup::traveling(3, p.variant(), &t);
    let trace = trace_branch(&p, &record, &h, (0.01, 0.05), 0.01, &BranchOptions::default()).unwrap();
    assert_eq!(trace.points.len(), 5, "{:?}", trace.truncated);
    for b in &trace.points {
        let r = verify_orbit_symmetry(&b.orbit, &h, 1e-4).unwrap();
        assert!(r.holds && r.minimal, "{r:?}");
    }
}

#[test]
fn shooting_with_a_symmetry_keeps_it() {
    let p = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap().with_couplings(0.2, 0.1, 0.0).with_a(0.03);
    let t = ModeIndex([1, 0, 0]);
    let record = bifurcation_record(&p, &t).unwrap();
    for h in symmetry_classes(&t, p.variant(), 3) {
        let (seed, w) = torus_hopf::orbits::seed_state(&p, &record, &h, 10.0 * 0.03f64.sqrt()).unwrap();
        let opts = ShootingOptions { symmetry: Some(h), ..ShootingOptions::default() };
        let orbit = find_orbit_with(&p, &seed, 2.0 * PI / w, &opts).unwrap();
        let r = verify_orbit_symmetry(&orbit, &h, 1e-4).unwrap();
        assert!(r.holds, "{h}: {r:?}");
    }
}

#[test]
fn catalog_examples() {
    let p = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap();
    let c = admissible_period_catalog(&p, 10.0).unwrap();
    assert_eq!(c.len(), 14);
    assert!(c.iter().all(|m| m.symmetries.len() == m.counts.len()));
    assert!(admissible_period_catalog(&p, PI).unwrap().is_empty());
    match admissible_period_catalog(&p, 2.0 * PI) {
        Err(Error::RejectedResonantPeriod { offending, .. }) => assert!(offending.iter().all(|r| r.k == 1 && r.k_value == 1.0)),
        other => panic!("{other:?}"),
    }
    // third odd harmonic of the K = 1 modes
    assert!(matches!(admissible_period_catalog(&p, 6.0 * PI), Err(Error::RejectedResonantPeriod { .. })));
    let singular = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap().with_couplings(-1.0 / 3.0, 0.0, 0.0);
    assert!(matches!(admissible_period_catalog(&singular, 10.0), Err(Error::SingularMode { .. })));
}

#[test]
fn existence_search_finds_a_synchronized_solution() {
    let p = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap().with_a(1.0).with_cubic(CubicTerm::Third);
    let t = ModeIndex::zero();
    let h = symmetry_classes(&t, p.variant(), 3)[0];
    let grid = log_grid(0.1, 5.0, 30);
    let out = existence_search(&p, 10.0, &t, &h, &grid, &ExistenceOptions::default()).unwrap();
    let ExistenceOutcome::Found { nu, orbit, report, count, .. } = out else { panic!("{out:?}") };
    assert!((0.1..=5.0).contains(&nu));
    assert!(((orbit.period - 10.0) / 10.0).abs() <= 1e-6);
    assert!(report.holds && report.minimal, "{report:?}");
    assert_eq!(count, 1);
    let again = verify_orbit_symmetry(&orbit, &h, 1e-4).unwrap();
    assert!(again.holds);
}

#[test]
fn existence_search_rejects_inadmissible_requests() {
    let p = LatticeParams::new(Variant::VdpBidirectionalY, 3).unwrap();
    let t = ModeIndex::zero();
    let h = symmetry_classes(&t, p.variant(), 3)[0];
    let grid = log_grid(0.1, 5.0, 30);
    let r = existence_search(&p, PI, &t, &h, &grid, &ExistenceOptions::default());
    assert!(matches!(r, Err(Error::Inadmissible(_))), "{r:?}");
    let r = existence_search(&p, 2.0 * PI, &t, &h, &grid, &ExistenceOptions::default());
    assert!(matches!(r, Err(Error::RejectedResonantPeriod { .. })));
}

#[test]
fn orbits_round_trip_through_json() {
    let (_, orbit) = synchronized_orbit(0.02);
    let text = serde_json::to_string(&orbit).unwrap();
    let back: PeriodicOrbit = serde_json::from_str(&text).unwrap();
    assert_eq!(back, orbit);
}
