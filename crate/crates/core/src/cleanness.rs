//! The criterion engine: per-chart exponent transport, boundary-form
//! collection, deduplication up to the invariance group of non-integrality,
//! and verdicts at exact rational parameter values.

use alloc::string::String;
use alloc::vec::Vec;

use crate::atlas::{AtlasError, AtlasModel};
use crate::rat::Rat;
use crate::symcore::{Assignment, EvalError, ExponentVector, LinearForm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CleanError {
    #[error("assignment does not cover parameter `{name}`")]
    MissingParameter { name: String },
    #[error(transparent)]
    Atlas(#[from] AtlasError),
}

/// The exponent attached to one boundary divisor in one chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryForm {
    pub chart: String,
    pub coordinate: String,
    pub form: LinearForm,
}

/// A chart/coordinate pair that produced a criterion form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryWitness {
    pub chart: String,
    pub coordinate: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionEntry {
    pub form: LinearForm,
    pub witnesses: Vec<BoundaryWitness>,
}

/// Deduplicated set of normalized boundary forms in order of first
/// appearance over the charts, each with its witness list. The local system
/// extends cleanly exactly when every form evaluates non-integrally.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Criterion {
    entries: Vec<CriterionEntry>,
}

impl Criterion {
    fn push(&mut self, form: LinearForm, witness: BoundaryWitness) {
        match self.entries.iter_mut().find(|e| e.form == form) {
            Some(entry) => entry.witnesses.push(witness),
            None => self.entries.push(CriterionEntry {
                form,
                witnesses: alloc::vec![witness],
            }),
        }
    }

    pub fn entries(&self) -> &[CriterionEntry] {
        &self.entries
    }

    pub fn forms(&self) -> impl Iterator<Item = &LinearForm> {
        self.entries.iter().map(|e| &e.form)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, form: &LinearForm) -> bool {
        let n = form.normalized();
        self.entries.iter().any(|e| e.form == n)
    }

    /// Substitute values for a subset of the parameters and re-deduplicate.
    /// Witness lists of forms that collapse together are merged in order.
    pub fn specialize(&self, partial: &Assignment) -> Criterion {
        let mut out = Criterion::default();
        for entry in &self.entries {
            let form = entry.form.substitute(partial).normalized();
            for w in &entry.witnesses {
                out.push(form.clone(), w.clone());
            }
        }
        out
    }
}

/// Outcome of evaluating the criterion at one assignment. `violated` lists
/// every form with an integral value, together with that value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub clean: bool,
    pub violated: Vec<(LinearForm, Rat)>,
}

/// Transport the reference-chart exponents into chart `id` through the atlas
/// transition. Base exponents pick up the transposed full exponent matrix;
/// fiber exponents are unchanged.
pub fn chart_exponents(model: &AtlasModel, id: &str) -> Result<ExponentVector, AtlasError> {
    let t = model.transition(model.reference(), id)?;
    Ok(t.pull_exponents(model.local_system())?)
}

/// One normalized form per divisorial base coordinate of every chart, in
/// chart declaration order. Fiber coordinates never vanish on the torsor
/// total space and contribute nothing.
pub fn boundary_forms(model: &AtlasModel) -> Result<Vec<BoundaryForm>, AtlasError> {
    let mut out = Vec::new();
    for chart in model.charts() {
        let exps = chart_exponents(model, &chart.id)?;
        for (i, coord) in chart.coords.iter().enumerate() {
            if chart.divisorial[i] {
                out.push(BoundaryForm {
                    chart: chart.id.clone(),
                    coordinate: coord.clone(),
                    form: exps.base[i].normalized(),
                });
            }
        }
    }
    Ok(out)
}

/// The deduplicated cleanness criterion. Forms are normalized, so the
/// deduplication collapses exactly the orbit of each form under negation and
/// integer shifts, never more.
pub fn criterion(model: &AtlasModel) -> Result<Criterion, AtlasError> {
    let mut out = Criterion::default();
    for bf in boundary_forms(model)? {
        out.push(
            bf.form,
            BoundaryWitness {
                chart: bf.chart,
                coordinate: bf.coordinate,
            },
        );
    }
    Ok(out)
}

/// Evaluate every criterion form at the assignment; clean iff none is
/// integral.
pub fn evaluate_clean(model: &AtlasModel, assignment: &Assignment) -> Result<Verdict, CleanError> {
    let crit = criterion(model)?;
    let mut violated = Vec::new();
    for form in crit.forms() {
        let value = form.evaluate(assignment).map_err(|e| lift_eval(model, e))?;
        if value.is_integer() {
            violated.push((form.clone(), value));
        }
    }
    Ok(Verdict {
        clean: violated.is_empty(),
        violated,
    })
}

pub(crate) fn lift_eval(model: &AtlasModel, e: EvalError) -> CleanError {
    match e {
        EvalError::MissingParameter { index } => CleanError::MissingParameter {
            name: String::from(model.params().name(index)),
        },
        EvalError::UnknownParameter { name } => CleanError::MissingParameter { name },
    }
}
