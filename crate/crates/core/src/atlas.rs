//! The monomial-atlas data model: charts with boundary divisors, fiber-torus
//! twist cocycles, total transitions, cocycle verification, and the
//! derivation of line-bundle transition functions from log top-forms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rat::{Int, Rat};
use crate::symcore::{ExponentVector, MapError, MonomialMap, ParamSpace};

/// One affine chart of the compactification. `divisorial[i]` marks base
/// coordinates whose zero locus lies in the boundary of the open torus;
/// `logpole[i]` marks coordinates along whose divisor the reference
/// line-bundle section keeps a logarithmic pole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub id: String,
    pub coords: Vec<String>,
    pub divisorial: Vec<bool>,
    pub logpole: Vec<bool>,
}

/// Ordered fiber-torus coordinate names. By convention the last name is the
/// central line direction used by the line-bundle check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSpec {
    pub names: Vec<String>,
}

impl FiberSpec {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Index of the central fiber coordinate, when there is one.
    pub fn central(&self) -> Option<usize> {
        self.names.len().checked_sub(1)
    }
}

/// Twist of one fiber coordinate along a transition: the coordinate maps to
/// itself times `unit * prod z_i^(exponents[i])` in source-chart base
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberTwist {
    pub exponents: Vec<Int>,
    pub unit: Rat,
}

impl FiberTwist {
    pub fn from_i64(exponents: &[i64], unit: Rat) -> Self {
        Self {
            exponents: exponents.iter().map(|&e| crate::rat::int(e)).collect(),
            unit,
        }
    }
}

/// A chart transition on base times fiber coordinates, written in
/// source-chart coordinates. The full map has block form `[[E, 0], [W, I]]`:
/// base coordinates transform by the monomial map `E`, and each fiber
/// coordinate maps to itself times a base monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalTransition {
    pub source: String,
    pub target: String,
    pub base: MonomialMap,
    pub twists: Vec<FiberTwist>,
}

impl TotalTransition {
    pub fn identity(chart: &str, n_base: usize, n_fiber: usize) -> Self {
        Self {
            source: String::from(chart),
            target: String::from(chart),
            base: MonomialMap::identity(n_base),
            twists: vec![
                FiberTwist {
                    exponents: vec![Int::zero(); n_base],
                    unit: Rat::one(),
                };
                n_fiber
            ],
        }
    }

    pub fn n_base(&self) -> usize {
        self.base.source_dim()
    }

    pub fn n_fiber(&self) -> usize {
        self.twists.len()
    }

    /// The transition as one monomial map on base plus fiber coordinates.
    pub fn full_map(&self) -> MonomialMap {
        let n = self.n_base();
        let f = self.n_fiber();
        let mut coeffs: Vec<Rat> = self.base.coeffs().to_vec();
        let mut rows: Vec<Vec<Int>> = self
            .base
            .exponents()
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.extend(core::iter::repeat_with(Int::zero).take(f));
                r
            })
            .collect();
        for (k, tw) in self.twists.iter().enumerate() {
            let mut r = tw.exponents.clone();
            r.extend((0..f).map(|j| if j == k { Int::one() } else { Int::zero() }));
            rows.push(r);
            coeffs.push(tw.unit.clone());
        }
        MonomialMap::new(n + f, coeffs, rows).expect("block map is well formed")
    }

    fn from_full_map(
        source: String,
        target: String,
        map: MonomialMap,
        n_base: usize,
        n_fiber: usize,
    ) -> Result<Self, AtlasError> {
        let rows = map.exponents();
        let coeffs = map.coeffs();
        if map.source_dim() != n_base + n_fiber || map.target_dim() != n_base + n_fiber {
            return Err(AtlasError::BlockStructure);
        }
        let mut base_rows = Vec::with_capacity(n_base);
        for row in rows.iter().take(n_base) {
            if row[n_base..].iter().any(|e| !e.is_zero()) {
                return Err(AtlasError::BlockStructure);
            }
            base_rows.push(row[..n_base].to_vec());
        }
        let base = MonomialMap::new(n_base, coeffs[..n_base].to_vec(), base_rows)?;
        let mut twists = Vec::with_capacity(n_fiber);
        for k in 0..n_fiber {
            let row = &rows[n_base + k];
            for (j, e) in row[n_base..].iter().enumerate() {
                let want_one = j == k;
                if (want_one && !e.is_one()) || (!want_one && !e.is_zero()) {
                    return Err(AtlasError::BlockStructure);
                }
            }
            twists.push(FiberTwist {
                exponents: row[..n_base].to_vec(),
                unit: coeffs[n_base + k].clone(),
            });
        }
        Ok(Self {
            source,
            target,
            base,
            twists,
        })
    }

    /// `self . inner`: apply `inner` first; requires `inner.target == self.source`.
    pub fn compose(&self, inner: &TotalTransition) -> Result<TotalTransition, AtlasError> {
        if inner.target != self.source {
            return Err(AtlasError::ChartMismatch {
                expected: self.source.clone(),
                got: inner.target.clone(),
            });
        }
        let full = self.full_map().compose(&inner.full_map())?;
        Self::from_full_map(
            inner.source.clone(),
            self.target.clone(),
            full,
            self.n_base(),
            self.n_fiber(),
        )
    }

    pub fn inverse(&self) -> Result<TotalTransition, AtlasError> {
        let full = self.full_map().inverse()?;
        Self::from_full_map(
            self.target.clone(),
            self.source.clone(),
            full,
            self.n_base(),
            self.n_fiber(),
        )
    }

    /// Transport exponent data from target-chart coordinates into
    /// source-chart coordinates. Fiber exponents are unchanged because the
    /// full exponent matrix is block triangular with an identity fiber block.
    pub fn pull_exponents(&self, ev: &ExponentVector) -> Result<ExponentVector, MapError> {
        let pulled = self.full_map().pullback(&ev.concat())?;
        Ok(ExponentVector::from_concat(pulled, self.n_base()))
    }

    /// Display in the source-coordinate convention, e.g.
    /// `(x,y,a,v) -> (1/x, y/x^2, a/x, v/x^3)`.
    pub fn render(&self, base_names: &[String], fiber_names: &[String]) -> String {
        let mut names: Vec<&str> = base_names.iter().map(String::as_str).collect();
        names.extend(fiber_names.iter().map(String::as_str));
        self.full_map().render(&names)
    }
}

/// A validation problem, addressed by a stable field path so that file
/// loaders can attach source locations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelIssue {
    pub path: String,
    pub message: String,
}

impl core::fmt::Display for ModelIssue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtlasError {
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("charts `{0}` and `{1}` are not connected by declared transitions")]
    Disconnected(String, String),
    #[error("expected a map out of chart `{expected}`, got one out of `{got}`")]
    ChartMismatch { expected: String, got: String },
    #[error("transition does not have the base/fiber block structure")]
    BlockStructure,
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Unvalidated model data; [`AtlasModel::new`] checks every invariant and
/// reports all violations at once.
#[derive(Debug, Clone)]
pub struct AtlasModelData {
    pub params: ParamSpace,
    pub charts: Vec<Chart>,
    pub fiber: FiberSpec,
    pub reference: String,
    pub transitions: Vec<TotalTransition>,
    pub local_system: ExponentVector,
    pub central_cocycle: Vec<((String, String), MonomialMap)>,
}

/// A validated atlas: charts, declared transitions keyed by
/// `(target, source)`, the reference-chart local system, and an optional
/// declared central cocycle for cross-checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasModel {
    params: ParamSpace,
    charts: Vec<Chart>,
    fiber: FiberSpec,
    reference: String,
    transitions: BTreeMap<(String, String), TotalTransition>,
    local_system: ExponentVector,
    central_cocycle: BTreeMap<(String, String), MonomialMap>,
}

impl AtlasModel {
    pub fn new(data: AtlasModelData) -> Result<Self, Vec<ModelIssue>> {
        let mut issues: Vec<ModelIssue> = Vec::new();
        let mut issue = |path: &str, message: String| {
            issues.push(ModelIssue {
                path: String::from(path),
                message,
            });
        };

        if data.charts.is_empty() {
            issue("charts", String::from("at least one chart is required"));
            return Err(issues);
        }
        let n = data.charts[0].coords.len();

        for chart in &data.charts {
            let path = format!("chart {}", chart.id);
            if data.charts.iter().filter(|c| c.id == chart.id).count() > 1 {
                issue(&path, format!("duplicate chart id `{}`", chart.id));
            }
            if chart.coords.len() != n {
                issue(
                    &path,
                    format!(
                        "chart has {} coordinates, expected {}",
                        chart.coords.len(),
                        n
                    ),
                );
            }
            for (i, c) in chart.coords.iter().enumerate() {
                if chart.coords[..i].iter().any(|d| d == c) {
                    issue(&path, format!("duplicate coordinate `{c}`"));
                }
                if data.fiber.names.iter().any(|f| f == c) {
                    issue(
                        &path,
                        format!("coordinate `{c}` clashes with a fiber coordinate name"),
                    );
                }
            }
            if chart.divisorial.len() != chart.coords.len()
                || chart.logpole.len() != chart.coords.len()
            {
                issue(&path, String::from("flag lists must match the coordinates"));
            } else {
                for i in 0..chart.coords.len() {
                    if chart.logpole[i] && !chart.divisorial[i] {
                        issue(
                            &path,
                            format!(
                                "log pole on non-divisorial coordinate `{}`",
                                chart.coords[i]
                            ),
                        );
                    }
                }
            }
        }

        for (i, f) in data.fiber.names.iter().enumerate() {
            if data.fiber.names[..i].iter().any(|g| g == f) {
                issue("fiber", format!("duplicate fiber coordinate `{f}`"));
            }
        }

        let chart_ids: Vec<&String> = data.charts.iter().map(|c| &c.id).collect();
        if !chart_ids.iter().any(|id| **id == data.reference) {
            issue(
                "reference",
                format!("reference chart `{}` is not declared", data.reference),
            );
        }

        let mut transitions: BTreeMap<(String, String), TotalTransition> = BTreeMap::new();
        for t in &data.transitions {
            let path = format!("transition {} {}", t.target, t.source);
            for id in [&t.source, &t.target] {
                if !chart_ids.contains(&id) {
                    issue(&path, format!("unknown chart `{id}`"));
                }
            }
            if t.base.source_dim() != n || t.base.target_dim() != n {
                issue(
                    &path,
                    format!(
                        "base map is {}x{}, expected {n}x{n}",
                        t.base.target_dim(),
                        t.base.source_dim()
                    ),
                );
            } else if !t.base.is_unimodular() {
                issue(
                    &path,
                    format!(
                        "base exponent matrix is not unimodular (det = {})",
                        t.base.det().expect("square map")
                    ),
                );
            }
            if t.twists.len() != data.fiber.len() {
                issue(
                    &path,
                    format!(
                        "{} twist rows for {} fiber coordinates",
                        t.twists.len(),
                        data.fiber.len()
                    ),
                );
            }
            for (k, tw) in t.twists.iter().enumerate() {
                if tw.exponents.len() != n {
                    issue(&path, format!("twist row {k} has wrong length"));
                }
                if tw.unit.is_zero() {
                    issue(&path, format!("twist row {k} has zero unit"));
                }
            }
            let key = (t.target.clone(), t.source.clone());
            if transitions.insert(key, t.clone()).is_some() {
                issue(&path, String::from("transition declared twice"));
            }
        }

        if data.local_system.base.len() != n {
            issue(
                "local_system/base",
                format!(
                    "{} base exponent forms for {} coordinates",
                    data.local_system.base.len(),
                    n
                ),
            );
        }
        if data.local_system.fiber.len() != data.fiber.len() {
            issue(
                "local_system/fiber",
                format!(
                    "{} fiber exponent forms for {} fiber coordinates",
                    data.local_system.fiber.len(),
                    data.fiber.len()
                ),
            );
        }
        for form in data
            .local_system
            .base
            .iter()
            .chain(data.local_system.fiber.iter())
        {
            if let Some(max) = form.max_param() {
                if max >= data.params.len() {
                    issue(
                        "local_system",
                        format!("exponent form references parameter #{max} out of range"),
                    );
                }
            }
        }

        let mut central_cocycle = BTreeMap::new();
        for ((i, j), m) in &data.central_cocycle {
            let path = format!("central_cocycle {i} {j}");
            for id in [i, j] {
                if !chart_ids.contains(&id) {
                    issue(&path, format!("unknown chart `{id}`"));
                }
            }
            if m.source_dim() != n || m.target_dim() != 1 {
                issue(
                    &path,
                    String::from("entry must be a single monomial in the base coordinates"),
                );
            }
            if central_cocycle
                .insert((i.clone(), j.clone()), m.clone())
                .is_some()
            {
                issue(&path, String::from("entry declared twice"));
            }
        }

        // connectivity of the declared transition graph from the reference
        if issues.is_empty() {
            let index: BTreeMap<&str, usize> = data
                .charts
                .iter()
                .enumerate()
                .map(|(i, c)| (c.id.as_str(), i))
                .collect();
            let mut adj = vec![Vec::new(); data.charts.len()];
            for (t, s) in transitions.keys() {
                let ti = index[t.as_str()];
                let si = index[s.as_str()];
                adj[ti].push(si);
                adj[si].push(ti);
            }
            let mut seen = vec![false; data.charts.len()];
            let mut stack = vec![index[data.reference.as_str()]];
            seen[stack[0]] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            for (i, c) in data.charts.iter().enumerate() {
                if !seen[i] {
                    issues.push(ModelIssue {
                        path: String::from("transitions"),
                        message: format!("chart `{}` is not reachable from the reference", c.id),
                    });
                }
            }
        }

        if issues.is_empty() {
            Ok(Self {
                params: data.params,
                charts: data.charts,
                fiber: data.fiber,
                reference: data.reference,
                transitions,
                local_system: data.local_system,
                central_cocycle,
            })
        } else {
            Err(issues)
        }
    }

    pub fn params(&self) -> &ParamSpace {
        &self.params
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn fiber(&self) -> &FiberSpec {
        &self.fiber
    }

    pub fn reference(&self) -> &str {
        &self.reference
    }

    pub fn local_system(&self) -> &ExponentVector {
        &self.local_system
    }

    pub fn n_base(&self) -> usize {
        self.charts[0].coords.len()
    }

    pub fn chart(&self, id: &str) -> Option<&Chart> {
        self.charts.iter().find(|c| c.id == id)
    }

    fn chart_index(&self, id: &str) -> Result<usize, AtlasError> {
        self.charts
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| AtlasError::UnknownChart(String::from(id)))
    }

    /// Declared transitions in `(target, source)` key order.
    pub fn declared_transitions(&self) -> impl Iterator<Item = &TotalTransition> {
        self.transitions.values()
    }

    pub fn central_cocycle(&self) -> impl Iterator<Item = (&(String, String), &MonomialMap)> {
        self.central_cocycle.iter()
    }

    /// The step map from chart `from` into chart `to`, resolved from the
    /// declared data directly or by inverting the opposite declaration.
    fn step(&self, to: &str, from: &str) -> Result<TotalTransition, AtlasError> {
        if let Some(t) = self
            .transitions
            .get(&(String::from(to), String::from(from)))
        {
            return Ok(t.clone());
        }
        if let Some(t) = self
            .transitions
            .get(&(String::from(from), String::from(to)))
        {
            return t.inverse();
        }
        Err(AtlasError::Disconnected(
            String::from(to),
            String::from(from),
        ))
    }

    /// Total transition mapping chart `source` coordinates into chart
    /// `target` coordinates, derived by composing declared transitions along
    /// a shortest path. Path independence is not assumed; it is what
    /// [`AtlasModel::verify_cocycles`] checks.
    pub fn transition(&self, target: &str, source: &str) -> Result<TotalTransition, AtlasError> {
        let ti = self.chart_index(target)?;
        let si = self.chart_index(source)?;
        if ti == si {
            return Ok(TotalTransition::identity(
                target,
                self.n_base(),
                self.fiber.len(),
            ));
        }
        // breadth-first over the undirected declared-edge graph, charts in
        // declaration order for determinism
        let mut prev: Vec<Option<usize>> = vec![None; self.charts.len()];
        let mut seen = vec![false; self.charts.len()];
        let mut queue = alloc::collections::VecDeque::new();
        seen[si] = true;
        queue.push_back(si);
        'outer: while let Some(v) = queue.pop_front() {
            for (w, chart) in self.charts.iter().enumerate() {
                if seen[w] {
                    continue;
                }
                let vid = &self.charts[v].id;
                let key_a = (chart.id.clone(), vid.clone());
                let key_b = (vid.clone(), chart.id.clone());
                if self.transitions.contains_key(&key_a) || self.transitions.contains_key(&key_b) {
                    seen[w] = true;
                    prev[w] = Some(v);
                    if w == ti {
                        break 'outer;
                    }
                    queue.push_back(w);
                }
            }
        }
        if !seen[ti] {
            return Err(AtlasError::Disconnected(
                String::from(target),
                String::from(source),
            ));
        }
        let mut path = vec![ti];
        while let Some(p) = prev[*path.last().expect("nonempty")] {
            path.push(p);
        }
        path.reverse(); // source .. target
        let mut acc: Option<TotalTransition> = None;
        for pair in path.windows(2) {
            let from = &self.charts[pair[0]].id;
            let to = &self.charts[pair[1]].id;
            let step = self.step(to, from)?;
            acc = Some(match acc {
                None => step,
                Some(prev_map) => step.compose(&prev_map)?,
            });
        }
        Ok(acc.expect("path has at least one edge"))
    }

    /// Compose steps along an explicit chart path `[source, .., target]`.
    pub fn transition_along(&self, path: &[&str]) -> Result<TotalTransition, AtlasError> {
        if path.is_empty() {
            return Err(AtlasError::UnknownChart(String::new()));
        }
        self.chart_index(path[0])?;
        if path.len() == 1 {
            return Ok(TotalTransition::identity(
                path[0],
                self.n_base(),
                self.fiber.len(),
            ));
        }
        let mut acc: Option<TotalTransition> = None;
        for pair in path.windows(2) {
            self.chart_index(pair[1])?;
            let step = self.step(pair[1], pair[0])?;
            acc = Some(match acc {
                None => step,
                Some(prev_map) => step.compose(&prev_map)?,
            });
        }
        Ok(acc.expect("path has at least one edge"))
    }

    /// Check the declared gluing data for consistency: mutually declared
    /// pairs must be inverse to each other, and every triangle of declared
    /// pairs must satisfy the cocycle law on full block maps, coefficients
    /// included. Failures are report entries, never errors.
    pub fn verify_cocycles(&self) -> CocycleReport {
        let mut failures = Vec::new();
        let ids: Vec<&String> = self.charts.iter().map(|c| &c.id).collect();

        for ((t, s), map) in &self.transitions {
            let opposite = self.transitions.get(&(s.clone(), t.clone()));
            if let Some(op) = opposite {
                if t < s {
                    match map.compose(op) {
                        Ok(round) => {
                            let id = TotalTransition::identity(t, self.n_base(), self.fiber.len());
                            if round != id {
                                failures.push(CocycleFailure {
                                    charts: vec![t.clone(), s.clone()],
                                    message: String::from(
                                        "mutually declared transitions are not inverse",
                                    ),
                                });
                            }
                        }
                        Err(e) => failures.push(CocycleFailure {
                            charts: vec![t.clone(), s.clone()],
                            message: format!("cannot compose declared pair: {e}"),
                        }),
                    }
                }
            }
        }

        let declared_pair = |a: &str, b: &str| {
            self.transitions
                .contains_key(&(String::from(a), String::from(b)))
                || self
                    .transitions
                    .contains_key(&(String::from(b), String::from(a)))
        };
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                for k in j + 1..ids.len() {
                    let (a, b, c) = (ids[i], ids[j], ids[k]);
                    if !(declared_pair(a, b) && declared_pair(b, c) && declared_pair(a, c)) {
                        continue;
                    }
                    let check = (|| -> Result<Option<CocycleFailure>, AtlasError> {
                        let direct = self.step(a, c)?;
                        let via = self.step(a, b)?.compose(&self.step(b, c)?)?;
                        if direct != via {
                            return Ok(Some(CocycleFailure {
                                charts: vec![a.clone(), b.clone(), c.clone()],
                                message: format!(
                                    "transition({a}<-{c}) differs from transition({a}<-{b}) o transition({b}<-{c})"
                                ),
                            }));
                        }
                        Ok(None)
                    })();
                    match check {
                        Ok(Some(f)) => failures.push(f),
                        Ok(None) => {}
                        Err(e) => failures.push(CocycleFailure {
                            charts: vec![a.clone(), b.clone(), c.clone()],
                            message: format!("cannot evaluate triangle: {e}"),
                        }),
                    }
                }
            }
        }
        CocycleReport { failures }
    }

    /// Exponent vector `v` of the reference log top-form on a chart:
    /// `omega = prod x_s^(v_s) * dlog x_1 ^ .. ^ dlog x_n`, where `v_s` is 0
    /// exactly when the section keeps a log pole along `x_s = 0`.
    fn logform_prefactor(&self, chart: &Chart) -> Vec<Int> {
        chart
            .logpole
            .iter()
            .map(|&pole| if pole { Int::zero() } else { Int::one() })
            .collect()
    }

    /// Ratio `omega_source / omega_target` of the chart log top-forms as a
    /// single monomial in target-chart coordinates, up to a nonzero
    /// constant. Pulling the full log form back along a monomial map only
    /// multiplies it by the determinant of the exponent matrix, so the ratio
    /// is the transported prefactor of the source form divided by the
    /// target's own prefactor.
    pub fn logform_cocycle(&self, target: &str, source: &str) -> Result<MonomialMap, AtlasError> {
        let ct = self
            .chart(target)
            .ok_or_else(|| AtlasError::UnknownChart(String::from(target)))?;
        let cs = self
            .chart(source)
            .ok_or_else(|| AtlasError::UnknownChart(String::from(source)))?;
        let into_source = self.transition(source, target)?;
        let e = into_source.base.exponents();
        let v_s = self.logform_prefactor(cs);
        let v_t = self.logform_prefactor(ct);
        let n = self.n_base();
        let mut exps = Vec::with_capacity(n);
        for s in 0..n {
            let mut acc = -&v_t[s];
            for (r, vr) in v_s.iter().enumerate() {
                acc += vr * &e[r][s];
            }
            exps.push(acc);
        }
        let mut coeff = Rat::one();
        for (r, vr) in v_s.iter().enumerate() {
            coeff *= crate::rat::rat_pow(&into_source.base.coeffs()[r], vr);
        }
        Ok(MonomialMap::new(n, vec![coeff.abs()], vec![exps])?)
    }

    /// Compare the derived line-bundle cocycle against the declared central
    /// twist rows and, when present, the separately declared central
    /// cocycle. Exponents must match exactly after inverting the derived
    /// ratio and rewriting it in source-chart coordinates; coefficients are
    /// only fixed up to a nonzero constant and are not compared.
    pub fn check_line_bundle(&self) -> Result<LineBundleReport, AtlasError> {
        let mut pairs = Vec::new();
        for ((target, source), decl) in &self.transitions {
            let derived = self.logform_cocycle(target, source)?;
            let w = &derived.exponents()[0];
            let e = decl.base.exponents();
            let n = self.n_base();
            // exponents of 1/derived, moved into source-chart coordinates
            let expected: Vec<Int> = (0..n)
                .map(|s| {
                    let mut acc = Int::zero();
                    for (r, wr) in w.iter().enumerate() {
                        acc -= wr * &e[r][s];
                    }
                    acc
                })
                .collect();
            let twist_row = self
                .fiber
                .central()
                .map(|c| decl.twists[c].exponents.clone());
            let declared = self
                .central_cocycle
                .get(&(target.clone(), source.clone()))
                .map(|m| m.exponents()[0].clone());
            if twist_row.is_none() && declared.is_none() {
                continue;
            }
            let ok = twist_row.as_ref().is_none_or(|r| *r == expected)
                && declared.as_ref().is_none_or(|r| *r == expected);
            pairs.push(LineBundlePair {
                target: target.clone(),
                source: source.clone(),
                derived_inverse: w.clone(),
                expected_twist: expected,
                twist_row,
                declared,
                ok,
            });
        }
        Ok(LineBundleReport { pairs })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleFailure {
    pub charts: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleReport {
    pub failures: Vec<CocycleFailure>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-pair outcome of the line-bundle cross-check. `derived_inverse` holds
/// the exponents of the derived `omega_source/omega_target` ratio in
/// target-chart coordinates; `expected_twist` is its inverse rewritten in
/// source-chart coordinates, which must equal the central twist row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundlePair {
    pub target: String,
    pub source: String,
    pub derived_inverse: Vec<Int>,
    pub expected_twist: Vec<Int>,
    pub twist_row: Option<Vec<Int>>,
    pub declared: Option<Vec<Int>>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundleReport {
    pub pairs: Vec<LineBundlePair>,
}

impl LineBundleReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.ok)
    }
}
