//! Serializable reports, one per subcommand.

use serde::{Deserialize, Serialize};
use torus_hopf::orbits::{BranchTrace, ExistenceOutcome, Trajectory};
use torus_hopf::stability::{StabilityVerdict, VerdictKind, Witness};
use torus_hopf::symmetry::SymmetryReport;
use torus_hopf::{LatticeParams, ModeIndex, PeriodicOrbit, Variant};

use crate::output::{header, num, opt, Tabular};

fn mode_cols(t: &ModeIndex) -> [String; 3] {
    t.0.map(|v| v.to_string())
}

fn blank_mode() -> [String; 3] {
    Default::default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub mode: ModeIndex,
    pub k: Option<f64>,
    pub g: Option<f64>,
    pub critical_a: Option<f64>,
    /// `[re, im]` pairs at the requested `a`, larger imaginary part first.
    pub eigenvalues: [[f64; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub variant: Variant,
    pub n: usize,
    pub a: f64,
    pub rows: Vec<SpectrumRow>,
}

impl Tabular for SpectrumReport {
    fn header(&self) -> Vec<String> {
        header(&["t1", "t2", "t3", "k", "g", "critical_a", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                let mut row = mode_cols(&r.mode).to_vec();
                row.extend([opt(r.k), opt(r.g), opt(r.critical_a)]);
                row.extend(r.eigenvalues.iter().flatten().map(|v| num(*v)));
                row
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCount {
    pub symmetry: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub mode: ModeIndex,
    pub critical_a: f64,
    pub k: Option<f64>,
    pub g: Option<f64>,
    pub limit_frequency: f64,
    pub limit_periods: Vec<f64>,
    pub resonant: bool,
    /// Symmetry classes with their branch counts.
    pub symmetries: Vec<SymmetryCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub variant: Variant,
    pub n: usize,
    pub entries: Vec<CatalogEntry>,
}

impl Tabular for CatalogReport {
    fn header(&self) -> Vec<String> {
        header(&[
            "t1",
            "t2",
            "t3",
            "critical_a",
            "k",
            "g",
            "limit_frequency",
            "limit_period_1",
            "limit_period_2",
            "resonant",
            "symmetry",
            "branches",
        ])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for e in &self.entries {
            for s in &e.symmetries {
                let mut row = mode_cols(&e.mode).to_vec();
                row.extend([
                    num(e.critical_a),
                    opt(e.k),
                    opt(e.g),
                    num(e.limit_frequency),
                    opt(e.limit_periods.first().copied()),
                    opt(e.limit_periods.get(1).copied()),
                    e.resonant.to_string(),
                    s.symmetry.clone(),
                    s.count.to_string(),
                ]);
                rows.push(row);
            }
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub a_star: f64,
    pub leading: ModeIndex,
}

/// One sign pattern of the coupling magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignRow {
    pub signs: String,
    pub couplings: [f64; 3],
    pub a_star: f64,
    pub leading: ModeIndex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub params: LatticeParams,
    pub threshold: Option<Threshold>,
    pub verdict: StabilityVerdict,
    pub table: Vec<SignRow>,
}

fn kind_name(k: VerdictKind) -> String {
    format!("{k:?}")
}

impl Tabular for StabilityReport {
    fn header(&self) -> Vec<String> {
        header(&["record", "label", "t1", "t2", "t3", "value"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let row = |record: &str, label: String, t: [String; 3], value: String| {
            let mut r = vec![record.to_string(), label];
            r.extend(t);
            r.push(value);
            r
        };
        let mut rows = Vec::new();
        if let Some(th) = &self.threshold {
            rows.push(row("threshold", "a_star".into(), mode_cols(&th.leading), num(th.a_star)));
        }
        rows.push(row("verdict", kind_name(self.verdict.kind), blank_mode(), String::new()));
        for w in &self.verdict.witnesses {
            rows.push(match w {
                Witness::Mode { mode, label, value } => row("witness", label.clone(), mode_cols(mode), num(*value)),
                Witness::Multiplier { modulus, .. } => row("witness", "multiplier modulus".into(), blank_mode(), num(*modulus)),
                Witness::Value { label, value } => row("witness", label.clone(), blank_mode(), num(*value)),
            });
        }
        for s in &self.table {
            rows.push(row("table", s.signs.clone(), mode_cols(&s.leading), num(s.a_star)));
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub params: LatticeParams,
    pub trajectory: Trajectory,
}

impl Tabular for SimulationReport {
    fn header(&self) -> Vec<String> {
        let n = self.params.n();
        let wide = n > 10;
        let name = |block: char, i: usize| {
            let [a, b, c] = torus_hopf::model::site_coords(n, i);
            if wide {
                format!("{block}_{a}_{b}_{c}")
            } else {
                format!("{block}_{a}{b}{c}")
            }
        };
        let sites = self.params.sites();
        std::iter::once("t".to_string())
            .chain((0..sites).map(|i| name('x', i)))
            .chain((0..sites).map(|i| name('y', i)))
            .collect()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let tr = &self.trajectory;
        tr.times
            .iter()
            .zip(&tr.states)
            .map(|(t, s)| std::iter::once(*t).chain(s.x.iter().copied()).chain(s.y.iter().copied()).map(num).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub params: LatticeParams,
    pub mode: Option<ModeIndex>,
    pub period: f64,
    pub residual: f64,
    pub converged: bool,
    pub amplitude: f64,
    /// `[re, im]`, largest modulus first.
    pub multipliers: Vec<[f64; 2]>,
    pub verdict: Option<StabilityVerdict>,
    pub symmetry: Option<SymmetryReport>,
    pub orbit: PeriodicOrbit,
}

impl Tabular for OrbitReport {
    fn header(&self) -> Vec<String> {
        header(&["name", "value", "imag"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![
            vec!["period".into(), num(self.period), String::new()],
            vec!["residual".into(), num(self.residual), String::new()],
            vec!["converged".into(), self.converged.to_string(), String::new()],
            vec!["amplitude".into(), num(self.amplitude), String::new()],
        ];
        if let Some(v) = &self.verdict {
            rows.push(vec!["verdict".into(), kind_name(v.kind), String::new()]);
        }
        if let Some(s) = &self.symmetry {
            rows.push(vec!["symmetry".into(), s.subgroup.clone(), String::new()]);
            rows.push(vec!["symmetry_defect".into(), num(s.max_defect), String::new()]);
            rows.push(vec!["symmetry_holds".into(), s.holds.to_string(), String::new()]);
            rows.push(vec!["symmetry_minimal".into(), s.minimal.to_string(), String::new()]);
        }
        for [re, im] in &self.multipliers {
            rows.push(vec!["multiplier".into(), num(*re), num(*im)]);
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub params: LatticeParams,
    pub mode: ModeIndex,
    pub branches: Vec<BranchTrace>,
}

impl Tabular for TraceReport {
    fn header(&self) -> Vec<String> {
        header(&["symmetry", "a", "period", "amplitude", "residual", "max_defect", "holds"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.branches
            .iter()
            .flat_map(|b| {
                b.points.iter().map(move |p| {
                    vec![
                        b.symmetry.clone(),
                        num(p.a),
                        num(p.orbit.period),
                        num(p.amplitude),
                        num(p.orbit.residual),
                        num(p.symmetry_report.max_defect),
                        p.symmetry_report.holds.to_string(),
                    ]
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub period: f64,
    pub tol: f64,
    pub report: SymmetryReport,
}

impl Tabular for VerifyReport {
    fn header(&self) -> Vec<String> {
        header(&["subgroup", "max_defect", "holds", "minimal", "larger"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let r = &self.report;
        vec![vec![
            r.subgroup.clone(),
            num(r.max_defect),
            r.holds.to_string(),
            r.minimal.to_string(),
            r.larger.clone().unwrap_or_default(),
        ]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleEntry {
    pub mode: ModeIndex,
    pub k: f64,
    pub symmetries: Vec<SymmetryCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub mode: ModeIndex,
    pub symmetry: String,
    pub outcome: ExistenceOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub params: LatticeParams,
    pub period: f64,
    pub admissible: Vec<AdmissibleEntry>,
    pub searches: Vec<SearchReport>,
}

impl Tabular for ExistenceReport {
    fn header(&self) -> Vec<String> {
        header(&["record", "t1", "t2", "t3", "symmetry", "k", "count", "nu", "period", "holds"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for e in &self.admissible {
            for s in &e.symmetries {
                let mut r = vec!["admissible".to_string()];
                r.extend(mode_cols(&e.mode));
                r.extend([s.symmetry.clone(), num(e.k), s.count.to_string(), String::new(), String::new(), String::new()]);
                rows.push(r);
            }
        }
        for s in &self.searches {
            let mut r = vec![];
            match &s.outcome {
                ExistenceOutcome::Found { nu, orbit, report, count, .. } => {
                    r.push("found".to_string());
                    r.extend(mode_cols(&s.mode));
                    r.extend([
                        s.symmetry.clone(),
                        String::new(),
                        count.to_string(),
                        num(*nu),
                        num(orbit.period),
                        report.holds.to_string(),
                    ]);
                }
                ExistenceOutcome::Exhausted { .. } => {
                    r.push("exhausted".to_string());
                    r.extend(mode_cols(&s.mode));
                    r.extend([s.symmetry.clone(), String::new(), String::new(), String::new(), String::new(), String::new()]);
                }
            }
            rows.push(r);
        }
        rows
    }
}
