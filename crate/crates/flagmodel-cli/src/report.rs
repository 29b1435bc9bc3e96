//! Report values shared by the human-readable and `--json` outputs. Every
//! subcommand builds exactly one of these and both renderings derive from
//! it, so the two can never drift apart.

use std::fmt::Write as _;

use flagclean_core::atlas::{AtlasModel, CocycleReport, LineBundleReport};
use flagclean_core::cleanness::{Criterion, Verdict};
use flagclean_core::lattice::{AgreementReport, GridOutcome};
use flagclean_core::loopgroup::{FixtureOutcome, MemberStatus};
use flagclean_core::rat::Rat;
use flagclean_core::symcore::Assignment;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub chart: String,
    pub coordinate: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FormReport {
    pub form: String,
    pub witnesses: Vec<WitnessReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeriveReport {
    pub model: String,
    pub forms: Vec<FormReport>,
}

pub fn derive_report(model_name: &str, model: &AtlasModel, crit: &Criterion) -> DeriveReport {
    DeriveReport {
        model: model_name.to_string(),
        forms: crit
            .entries()
            .iter()
            .map(|e| FormReport {
                form: e.form.render(model.params()),
                witnesses: e
                    .witnesses
                    .iter()
                    .map(|w| WitnessReport {
                        chart: w.chart.clone(),
                        coordinate: w.coordinate.clone(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

impl DeriveReport {
    /// One normalized form per line; the machine-readable mirror carries the
    /// witnesses.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for f in &self.forms {
            let _ = writeln!(out, "{}", f.form);
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FormValueReport {
    pub form: String,
    pub value: String,
    pub integral: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub model: String,
    pub assignment: Vec<(String, String)>,
    pub values: Vec<FormValueReport>,
    pub violated: Vec<FormValueReport>,
    pub clean: bool,
}

pub fn check_report(
    model_name: &str,
    model: &AtlasModel,
    assignment: &Assignment,
    verdict: &Verdict,
    values: &[(String, Rat)],
) -> CheckReport {
    CheckReport {
        model: model_name.to_string(),
        assignment: assignment
            .iter()
            .map(|(i, v)| (model.params().name(i).to_string(), v.to_string()))
            .collect(),
        values: values
            .iter()
            .map(|(form, v)| FormValueReport {
                form: form.clone(),
                value: v.to_string(),
                integral: v.is_integer(),
            })
            .collect(),
        violated: verdict
            .violated
            .iter()
            .map(|(f, v)| FormValueReport {
                form: f.render(model.params()),
                value: v.to_string(),
                integral: true,
            })
            .collect(),
        clean: verdict.clean,
    }
}

impl CheckReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for v in &self.values {
            let tag = if v.integral {
                "integral"
            } else {
                "non-integral"
            };
            let _ = writeln!(out, "{} = {} ({tag})", v.form, v.value);
        }
        let _ = writeln!(out, "{}", if self.clean { "CLEAN" } else { "NOT CLEAN" });
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistReport {
    pub fiber: String,
    pub exponents: Vec<String>,
    pub unit: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitionReport {
    pub target: String,
    pub source: String,
    pub map: String,
    pub base_exponents: Vec<Vec<String>>,
    pub base_coeffs: Vec<String>,
    pub twists: Vec<TwistReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitionsReport {
    pub model: String,
    pub transitions: Vec<TransitionReport>,
}

pub fn transitions_report(model_name: &str, model: &AtlasModel) -> TransitionsReport {
    let fiber = &model.fiber().names;
    TransitionsReport {
        model: model_name.to_string(),
        transitions: model
            .declared_transitions()
            .map(|t| {
                let source_chart = model.chart(&t.source).expect("validated");
                TransitionReport {
                    target: t.target.clone(),
                    source: t.source.clone(),
                    map: t.render(&source_chart.coords, fiber),
                    base_exponents: t
                        .base
                        .exponents()
                        .iter()
                        .map(|r| r.iter().map(|e| e.to_string()).collect())
                        .collect(),
                    base_coeffs: t.base.coeffs().iter().map(|c| c.to_string()).collect(),
                    twists: fiber
                        .iter()
                        .zip(&t.twists)
                        .map(|(name, tw)| TwistReport {
                            fiber: name.clone(),
                            exponents: tw.exponents.iter().map(|e| e.to_string()).collect(),
                            unit: tw.unit.to_string(),
                        })
                        .collect(),
                }
            })
            .collect(),
    }
}

impl TransitionsReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for t in &self.transitions {
            let _ = writeln!(out, "Psi({},{}): {}", t.target, t.source, t.map);
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LineBundlePairReport {
    pub target: String,
    pub source: String,
    pub derived_inverse: Vec<String>,
    pub expected_twist: Vec<String>,
    pub twist_row: Option<Vec<String>>,
    pub declared: Option<Vec<String>>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LineBundleJson {
    pub model: String,
    pub pairs: Vec<LineBundlePairReport>,
    pub passed: bool,
}

pub fn line_bundle_report(model_name: &str, report: &LineBundleReport) -> LineBundleJson {
    let ints = |v: &[flagclean_core::Int]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>();
    LineBundleJson {
        model: model_name.to_string(),
        pairs: report
            .pairs
            .iter()
            .map(|p| LineBundlePairReport {
                target: p.target.clone(),
                source: p.source.clone(),
                derived_inverse: ints(&p.derived_inverse),
                expected_twist: ints(&p.expected_twist),
                twist_row: p.twist_row.as_deref().map(ints),
                declared: p.declared.as_deref().map(ints),
                ok: p.ok,
            })
            .collect(),
        passed: report.passed(),
    }
}

impl LineBundleJson {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "pair ({},{}): derived inverse exponents [{}], twist row [{}]{} -> {}",
                p.target,
                p.source,
                p.derived_inverse.join(", "),
                p.expected_twist.join(", "),
                match &p.declared {
                    Some(d) => format!(", declared [{}]", d.join(", ")),
                    None => String::new(),
                },
                if p.ok { "match" } else { "MISMATCH" }
            );
        }
        let _ = writeln!(out, "{}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSimpleReport {
    pub mu: Vec<String>,
    pub window: i64,
    pub simple: bool,
}

impl OracleSimpleReport {
    pub fn text(&self) -> String {
        format!(
            "mu = ({}), window = {}\nsimple: {}\n",
            self.mu.join(", "),
            self.window,
            if self.simple { "yes" } else { "no" }
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartOracleReport {
    pub chart: String,
    pub exponents: Vec<String>,
    pub window: i64,
    pub clean: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCleanReport {
    pub model: String,
    pub assignment: Vec<(String, String)>,
    pub charts: Vec<ChartOracleReport>,
    pub oracle_clean: bool,
    pub criterion_clean: bool,
    pub agree: bool,
}

pub fn oracle_clean_report(
    model_name: &str,
    model: &AtlasModel,
    assignment: &Assignment,
    report: &AgreementReport,
) -> OracleCleanReport {
    OracleCleanReport {
        model: model_name.to_string(),
        assignment: assignment
            .iter()
            .map(|(i, v)| (model.params().name(i).to_string(), v.to_string()))
            .collect(),
        charts: report
            .charts
            .iter()
            .map(|c| ChartOracleReport {
                chart: c.chart.clone(),
                exponents: c.exponents.iter().map(|e| e.to_string()).collect(),
                window: c.window,
                clean: c.clean,
            })
            .collect(),
        oracle_clean: report.oracle_clean,
        criterion_clean: report.criterion_clean,
        agree: report.agree(),
    }
}

impl OracleCleanReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.charts {
            let _ = writeln!(
                out,
                "chart {}: exponents ({}) window {} -> {}",
                c.chart,
                c.exponents.join(", "),
                c.window,
                if c.clean { "clean" } else { "not clean" }
            );
        }
        let _ = writeln!(
            out,
            "oracle: {}, criterion: {}, {}",
            verdict_word(self.oracle_clean),
            verdict_word(self.criterion_clean),
            if self.agree { "AGREE" } else { "DISAGREE" }
        );
        out
    }
}

fn verdict_word(clean: bool) -> &'static str {
    if clean {
        "clean"
    } else {
        "not clean"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridDisagreementReport {
    pub assignment: Vec<String>,
    pub oracle_clean: bool,
    pub criterion_clean: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleGridReport {
    pub model: String,
    pub denominator_bound: u32,
    pub range: i64,
    pub window: i64,
    pub cases: usize,
    pub agreements: usize,
    pub all_agree: bool,
    pub disagreements: Vec<GridDisagreementReport>,
}

pub fn oracle_grid_report(
    model_name: &str,
    denominator_bound: u32,
    range: i64,
    window: i64,
    outcome: &GridOutcome,
) -> OracleGridReport {
    OracleGridReport {
        model: model_name.to_string(),
        denominator_bound,
        range,
        window,
        cases: outcome.cases,
        agreements: outcome.agreements,
        all_agree: outcome.all_agree(),
        disagreements: outcome
            .disagreements
            .iter()
            .map(|d| GridDisagreementReport {
                assignment: d.assignment.iter().map(|v| v.to_string()).collect(),
                oracle_clean: d.oracle_clean,
                criterion_clean: d.criterion_clean,
            })
            .collect(),
    }
}

impl OracleGridReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "cases: {}", self.cases);
        let _ = writeln!(out, "agreements: {}", self.agreements);
        if self.all_agree {
            let _ = writeln!(out, "agreement: 100%");
        } else {
            let pct = 10000 * self.agreements / self.cases.max(1);
            let _ = writeln!(out, "agreement: {}.{:02}%", pct / 100, pct % 100);
            for d in &self.disagreements {
                let _ = writeln!(
                    out,
                    "disagreement at ({}): oracle {}, criterion {}",
                    d.assignment.join(", "),
                    verdict_word(d.oracle_clean),
                    verdict_word(d.criterion_clean)
                );
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CocycleFailureReport {
    pub charts: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub subgroup: String,
    pub expected: String,
    pub got: String,
    pub certificate: Option<String>,
    pub denominators: Vec<String>,
    pub precision: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub model: String,
    pub cocycle_failures: Vec<CocycleFailureReport>,
    pub cocycles_passed: bool,
    pub line_bundle: LineBundleJson,
    pub fixtures: Vec<FixtureReport>,
    pub fixtures_passed: bool,
    pub passed: bool,
}

pub fn verify_report(
    model_name: &str,
    cocycles: &CocycleReport,
    line_bundle: LineBundleJson,
    fixtures: &[FixtureOutcome],
    fixture_vars: &[String],
) -> VerifyReport {
    let fixture_reports: Vec<FixtureReport> = fixtures
        .iter()
        .map(|f| {
            let (got, certificate) = match &f.status {
                MemberStatus::Yes => ("yes".to_string(), None),
                MemberStatus::No { row, col, power } => (
                    "no".to_string(),
                    Some(format!("entry ({},{}) at t^{}", row + 1, col + 1, power)),
                ),
                MemberStatus::InsufficientPrecision => ("insufficient_precision".to_string(), None),
            };
            FixtureReport {
                name: f.name.clone(),
                subgroup: f.subgroup.label().to_string(),
                expected: if f.expected { "yes" } else { "no" }.to_string(),
                got,
                certificate,
                denominators: f
                    .denominators
                    .iter()
                    .map(|d| d.render(fixture_vars))
                    .collect(),
                precision: f.precision,
                pass: f.pass,
            }
        })
        .collect();
    let fixtures_passed = fixture_reports.iter().all(|f| f.pass);
    let passed = cocycles.passed() && line_bundle.passed && fixtures_passed;
    VerifyReport {
        model: model_name.to_string(),
        cocycle_failures: cocycles
            .failures
            .iter()
            .map(|f| CocycleFailureReport {
                charts: f.charts.clone(),
                message: f.message.clone(),
            })
            .collect(),
        cocycles_passed: cocycles.passed(),
        line_bundle,
        fixtures: fixture_reports,
        fixtures_passed,
        passed,
    }
}

impl VerifyReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "cocycles: {} ({} failures)",
            pass_word(self.cocycles_passed),
            self.cocycle_failures.len()
        );
        for f in &self.cocycle_failures {
            let _ = writeln!(out, "  ({}) {}", f.charts.join(","), f.message);
        }
        let _ = writeln!(
            out,
            "line bundle: {} ({} pairs)",
            pass_word(self.line_bundle.passed),
            self.line_bundle.pairs.len()
        );
        for p in &self.line_bundle.pairs {
            if !p.ok {
                let _ = writeln!(
                    out,
                    "  pair ({},{}): expected [{}], twist {:?}, declared {:?}",
                    p.target,
                    p.source,
                    p.expected_twist.join(", "),
                    p.twist_row,
                    p.declared
                );
            }
        }
        let _ = writeln!(
            out,
            "fixtures: {} ({} of {} passed)",
            pass_word(self.fixtures_passed),
            self.fixtures.iter().filter(|f| f.pass).count(),
            self.fixtures.len()
        );
        for f in &self.fixtures {
            let dens = if f.denominators.is_empty() {
                String::new()
            } else {
                format!(" over {{{} != 0}}", f.denominators.join(", "))
            };
            let cert = match &f.certificate {
                Some(c) => format!(" [{c}]"),
                None => String::new(),
            };
            let _ = writeln!(
                out,
                "  {}: {} (expected {}, got {}{}{})",
                f.name,
                pass_word(f.pass),
                f.expected,
                f.got,
                cert,
                dens
            );
        }
        let _ = writeln!(out, "{}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
