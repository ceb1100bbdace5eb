use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;
use torus_hopf::orbits::{
    admissible_period_catalog, existence_search, find_orbit_with, integrate_at, log_grid, seed_state, trace_branch,
    BranchOptions, ExistenceOptions, ShootingOptions, Tolerance,
};
use torus_hopf::spectral::{
    bifurcation_catalog, bifurcation_record, canonical_modes, critical_a_vdpl, eigenvalues_vdp, eigenvalues_vdpl,
    fourier_pair, g_of_mode, k_of_mode,
};
use torus_hopf::stability::{
    floquet_multipliers, orbit_verdict, origin_verdict, vdp_instability_criterion, vdpl_threshold,
};
use torus_hopf::symmetry::{parse_subgroup, verify_orbit_symmetry};
use torus_hopf::{
    BifurcationRecord, CubicTerm, Error, LatticeParams, LatticeState, ModeIndex, PeriodicOrbit, TwistedSubgroup,
    Variant,
};

use crate::args::*;
use crate::error::CliError;
use crate::report::*;

type Result<T> = std::result::Result<T, CliError>;

pub fn lattice_params(args: &LatticeArgs) -> Result<LatticeParams> {
    let variant = match args.variant.unwrap_or(VariantArg::Vdp) {
        VariantArg::Vdp => Variant::VdpBidirectionalY,
        VariantArg::Vdpl => Variant::VdplUnidirectionalX,
    };
    let cubic = match args.cubic.unwrap_or(CubicArg::Unit) {
        CubicArg::Unit => CubicTerm::Unit,
        CubicArg::Third => CubicTerm::Third,
    };
    let values = [("delta", args.delta), ("zeta", args.zeta), ("epsilon", args.epsilon), ("a", args.a)];
    for (name, v) in values {
        if v.is_some_and(|v| !v.is_finite()) {
            return Err(CliError::config(format!("{name} must be finite")));
        }
    }
    Ok(LatticeParams::new(variant, args.n.unwrap_or(3))?
        .with_couplings(args.delta.unwrap_or(0.0), args.zeta.unwrap_or(0.0), args.epsilon.unwrap_or(0.0))
        .with_a(args.a.unwrap_or(0.0))
        .with_nu(args.nu.unwrap_or(1.0))?
        .with_b(args.b.unwrap_or(1.0))?
        .with_cubic(cubic))
}

/// Parses `t1,t2,t3`, optionally parenthesized, reduced mod `n`.
pub fn parse_mode(s: &str, n: usize) -> Result<ModeIndex> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<i64> = inner
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::config(format!("mode must be three integers t1,t2,t3, got '{s}'")))?;
    match parts[..] {
        [a, b, c] => Ok(ModeIndex::new(n, a, b, c)),
        _ => Err(CliError::config(format!("mode must be three integers t1,t2,t3, got '{s}'"))),
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(format!("{name} must be positive, got {v}")))
    }
}

fn record(p: &LatticeParams, t: &ModeIndex) -> Result<BifurcationRecord> {
    bifurcation_record(p, t).ok_or_else(|| CliError::precondition(format!("mode {t} has no Hopf bifurcation (K_t <= 0)")))
}

fn subgroup(s: &str, p: &LatticeParams) -> Result<TwistedSubgroup> {
    Ok(parse_subgroup(s, p.n(), p.variant())?)
}

fn pair(mut v: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    v.sort_by(|x, y| y[1].total_cmp(&x[1]).then(y[0].total_cmp(&x[0])));
    v
}

pub fn spectrum(args: &SpectrumArgs) -> Result<SpectrumReport> {
    let p = lattice_params(&args.lattice)?;
    let a = p.a();
    let rows = canonical_modes(p.n())
        .into_par_iter()
        .map(|t| match p.variant() {
            Variant::VdpBidirectionalY => {
                let k = k_of_mode(&p, &t);
                SpectrumRow {
                    mode: t,
                    k: Some(k),
                    g: None,
                    critical_a: (k > 0.0).then_some(0.0),
                    eigenvalues: pair(eigenvalues_vdp(&p, &t, a).map(|z| [z.re, z.im])),
                }
            }
            Variant::VdplUnidirectionalX => SpectrumRow {
                mode: t,
                k: None,
                g: Some(g_of_mode(&p, &t)),
                critical_a: Some(critical_a_vdpl(&p, &t)),
                eigenvalues: pair(eigenvalues_vdpl(&p, &t, a).map(|z| [z.re, z.im])),
            },
        })
        .collect();
    Ok(SpectrumReport { variant: p.variant(), n: p.n(), a, rows })
}

fn catalog_entry(r: &BifurcationRecord) -> CatalogEntry {
    CatalogEntry {
        mode: r.mode,
        critical_a: r.critical_a,
        k: r.k,
        g: r.g,
        limit_frequency: r.limit_frequency,
        limit_periods: r.limit_periods.clone(),
        resonant: r.resonant,
        symmetries: r
            .symmetries
            .iter()
            .zip(&r.branches_per_symmetry)
            .map(|(h, c)| SymmetryCount { symmetry: h.to_string(), count: *c })
            .collect(),
    }
}

pub fn catalog(args: &CatalogArgs) -> Result<CatalogReport> {
    let p = lattice_params(&args.lattice)?;
    let records = match &args.mode {
        Some(m) => vec![record(&p, &parse_mode(m, p.n())?.canonical(p.n()))?],
        None => bifurcation_catalog(&p),
    };
    Ok(CatalogReport { variant: p.variant(), n: p.n(), entries: records.iter().map(catalog_entry).collect() })
}

/// Sign patterns in the order all-negative, one positive, two positive, all positive.
const SIGN_ROWS: [[f64; 3]; 8] = [
    [-1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
    [1.0, 1.0, -1.0],
    [1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0],
];

pub fn stability(args: &StabilityArgs) -> Result<StabilityReport> {
    let p = lattice_params(&args.lattice)?;
    let (threshold, verdict) = match p.variant() {
        Variant::VdpBidirectionalY => (None, vdp_instability_criterion(&p)?),
        Variant::VdplUnidirectionalX => {
            let (a_star, leading) = vdpl_threshold(&p)?;
            (Some(Threshold { a_star, leading }), origin_verdict(&p, p.a()))
        }
    };
    let mut table = Vec::new();
    if args.table {
        if p.variant() != Variant::VdplUnidirectionalX {
            return Err(CliError::config("--table applies to the vdpl variant"));
        }
        let mag = p.couplings().map(f64::abs);
        if mag.contains(&0.0) {
            return Err(CliError::config("--table needs nonzero delta, zeta and epsilon"));
        }
        table = SIGN_ROWS
            .par_iter()
            .map(|s| {
                let c = [s[0] * mag[0], s[1] * mag[1], s[2] * mag[2]];
                let q = p.with_couplings(c[0], c[1], c[2]);
                let (a_star, leading) = vdpl_threshold(&q)?;
                let signs = s.iter().map(|v| if *v > 0.0 { '+' } else { '-' }).collect();
                Ok(SignRow { signs, couplings: c, a_star, leading })
            })
            .collect::<std::result::Result<Vec<_>, Error>>()?;
    }
    Ok(StabilityReport { params: p, threshold, verdict, table })
}

/// Synchronized offset `x0` plus `amp` times the cosine vector of `mode`.
fn initial_state(p: &LatticeParams, seed: &SeedArgs, x0: f64) -> Result<LatticeState> {
    let mut s = LatticeState { x: vec![x0; p.sites()], y: vec![0.0; p.sites()] };
    if let Some(m) = &seed.mode {
        let t = parse_mode(m, p.n())?;
        let (c, _) = fourier_pair(p.n(), t.0.map(|v| v as i64));
        let amp = seed.amp.unwrap_or(0.1);
        for (x, v) in s.x.iter_mut().zip(c) {
            *x += amp * v;
        }
    }
    Ok(s)
}

pub fn simulate(args: &SimulateArgs) -> Result<SimulationReport> {
    let p = lattice_params(&args.lattice)?;
    let t_end = positive("t-end", args.t_end)?;
    let dt = positive("dt", args.dt)?;
    let tol = Tolerance::new(args.rtol, args.atol)?;
    let init = initial_state(&p, &args.seed, args.x0)?;
    let steps = (t_end / dt).floor() as usize;
    let mut times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    if t_end - times[steps] > 1e-12 * t_end {
        times.push(t_end);
    }
    let trajectory = integrate_at(&p, &init, &times, tol)?;
    Ok(SimulationReport { params: p, trajectory })
}

pub fn orbit(args: &OrbitArgs) -> Result<OrbitReport> {
    let p = lattice_params(&args.lattice)?;
    let h = args.symmetry.as_deref().map(|s| subgroup(s, &p)).transpose()?;
    let (mode, guess, t_guess, h) = match &args.seed.mode {
        Some(m) => {
            let t = parse_mode(m, p.n())?.canonical(p.n());
            let rec = record(&p, &t)?;
            let h = h.unwrap_or(rec.symmetries[0]);
            let amp = args.seed.amp.unwrap_or(10.0 * (p.a() - rec.critical_a).abs().sqrt()).max(1e-3);
            let (s, w) = seed_state(&p, &rec, &h, amp)?;
            (Some(t), s, 2.0 * PI / w, Some(h))
        }
        None => {
            // averaged amplitude of the synchronized cycle
            let scale = match p.cubic() {
                CubicTerm::Third if p.variant() == Variant::VdpBidirectionalY => 3.0,
                _ => 1.0,
            };
            let amp = args.seed.amp.unwrap_or((4.0 * scale * p.a().abs() / 3.0).sqrt().max(0.05));
            let s = LatticeState { x: vec![amp; p.sites()], y: vec![0.0; p.sites()] };
            (None, s, 2.0 * PI / p.b().sqrt(), h)
        }
    };
    let t_guess = args.period_guess.map(|v| positive("period-guess", v)).transpose()?.unwrap_or(t_guess);
    let opts = ShootingOptions { symmetry: h, samples: args.samples, ..ShootingOptions::default() };
    let orbit = find_orbit_with(&p, &guess, t_guess, &opts)?;
    if !orbit.is_converged() {
        return Err(Error::OrbitNotConverged { residual: orbit.residual, limit: PeriodicOrbit::CONVERGED }.into());
    }
    let (multipliers, verdict) = if args.no_floquet {
        (Vec::new(), None)
    } else {
        let mut m = floquet_multipliers(&orbit, &p)?;
        let verdict = orbit_verdict(&m, args.margin);
        m.sort_by(|x, y| y.norm().total_cmp(&x.norm()).then(y.im.total_cmp(&x.im)));
        (m.iter().map(|z| [z.re, z.im]).collect(), Some(verdict))
    };
    let symmetry = h.map(|h| verify_orbit_symmetry(&orbit, &h, args.tol)).transpose()?;
    if let Some(path) = &args.save_orbit {
        let text = serde_json::to_string(&orbit).map_err(|e| CliError::io(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(OrbitReport {
        params: p,
        mode,
        period: orbit.period,
        residual: orbit.residual,
        converged: orbit.is_converged(),
        amplitude: orbit.amplitude(),
        multipliers,
        verdict,
        symmetry,
        orbit,
    })
}

pub fn trace(args: &TraceArgs) -> Result<TraceReport> {
    let p = lattice_params(&args.lattice)?;
    let t = parse_mode(&args.mode, p.n())?.canonical(p.n());
    let rec = record(&p, &t)?;
    let step = positive("a-step", args.a_step)?;
    let start = args.a_start.unwrap_or(rec.critical_a + step);
    let end = args.a_end.unwrap_or(rec.critical_a + 5.0 * step);
    let classes = match &args.symmetry {
        Some(s) => vec![subgroup(s, &p)?],
        None => rec.symmetries.clone(),
    };
    let branches = classes
        .par_iter()
        .map(|h| trace_branch(&p, &rec, h, (start, end), step, &BranchOptions::default()))
        .collect::<std::result::Result<Vec<_>, Error>>()?;
    Ok(TraceReport { params: p, mode: t, branches })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OrbitFile {
    Bare(PeriodicOrbit),
    Wrapped { orbit: PeriodicOrbit },
}

pub fn load_orbit(path: &Path) -> Result<PeriodicOrbit> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(OrbitFile::Bare(o)) | Ok(OrbitFile::Wrapped { orbit: o }) => Ok(o),
        Err(e) => Err(CliError::config(format!("{} is not an orbit file: {e}", path.display()))),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<VerifyReport> {
    let orbit = load_orbit(&args.orbit)?;
    let h = subgroup(&args.symmetry, &orbit.params_at)?;
    let tol = positive("tol", args.tol)?;
    let report = verify_orbit_symmetry(&orbit, &h, tol)?;
    Ok(VerifyReport { period: orbit.period, tol, report })
}

pub fn existence(args: &ExistenceArgs) -> Result<ExistenceReport> {
    let p = lattice_params(&args.lattice)?;
    let period = positive("p", args.p)?;
    let catalog = admissible_period_catalog(&p, period)?;
    if catalog.is_empty() {
        return Err(CliError::precondition(format!(
            "no admissible modes: every K_t <= (2 pi / p)^2 for p = {period}"
        )));
    }
    let admissible = catalog
        .iter()
        .map(|m| AdmissibleEntry {
            mode: m.mode,
            k: m.k,
            symmetries: m
                .symmetries
                .iter()
                .zip(&m.counts)
                .map(|(h, c)| SymmetryCount { symmetry: h.to_string(), count: *c })
                .collect(),
        })
        .collect();
    let mut searches = Vec::new();
    if let Some(m) = &args.mode {
        let t = parse_mode(m, p.n())?.canonical(p.n());
        let entry = catalog
            .iter()
            .find(|e| e.mode == t)
            .ok_or_else(|| CliError::precondition(format!("mode {t} is not admissible for p = {period}")))?;
        let classes = match &args.symmetry {
            Some(s) => vec![subgroup(s, &p)?],
            None => entry.symmetries.clone(),
        };
        if !(args.nu_min > 0.0 && args.nu_max >= args.nu_min && args.nu_count > 0) {
            return Err(CliError::config("need 0 < nu-min <= nu-max and nu-count >= 1"));
        }
        let grid = log_grid(args.nu_min, args.nu_max, args.nu_count);
        searches = classes
            .par_iter()
            .map(|h| {
                let outcome = existence_search(&p, period, &t, h, &grid, &ExistenceOptions::default())?;
                Ok(SearchReport { mode: t, symmetry: h.to_string(), outcome })
            })
            .collect::<std::result::Result<Vec<_>, Error>>()?;
    }
    Ok(ExistenceReport { params: p, period, admissible, searches })
}
