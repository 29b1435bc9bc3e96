//! The structured text format for atlas models and loop-group fixtures.
//!
//! A model file is line oriented; `#` starts a comment. Top-level lines are
//! `params`, `fiber`, `reference`, and `fixture_vars`; `chart`,
//! `transition`, `local_system`, `central_cocycle`, and `fixture` open
//! blocks closed by `end`. Rationals are written `p/q`, never as floats;
//! exponent rows are integer lists. `transition T S` declares the map from
//! chart `S` coordinates into chart `T` coordinates, matching the display
//! convention of the `transitions` subcommand.

use std::collections::BTreeMap;

use flagclean_core::atlas::{
    AtlasModel, AtlasModelData, Chart, FiberSpec, FiberTwist, TotalTransition,
};
use flagclean_core::loopgroup::{ExactLaurent, LoopFixture, RatFunc, Subgroup};
use flagclean_core::rat::{parse_rat, Int, Rat};
use flagclean_core::symcore::{ExponentVector, LinearForm, MonomialMap, ParamSpace};

use crate::diag::Diagnostic;
use crate::expr::{lex, parse_linear_form, parse_matrix};

#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub model: AtlasModel,
    pub fixture_vars: Vec<String>,
    pub fixtures: Vec<LoopFixture>,
}

struct Line<'a> {
    no: usize,
    words: Vec<(usize, &'a str)>,
    raw: &'a str,
}

fn split_words(raw: &str, no: usize) -> Line<'_> {
    let body = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    };
    let mut words = Vec::new();
    let mut col = 0;
    for part in body.split_whitespace() {
        let at = body[col..].find(part).expect("substring") + col;
        words.push((at + 1, part));
        col = at + part.len();
    }
    Line {
        no,
        words,
        raw: body,
    }
}

struct Parser<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    diags: Vec<Diagnostic>,
    /// Section path -> source location, for late (semantic) diagnostics.
    locations: BTreeMap<String, (usize, usize)>,
}

impl<'a> Parser<'a> {
    fn diag(&mut self, line: usize, col: usize, path: &str, message: impl Into<String>) {
        self.diags.push(Diagnostic::new(line, col, path, message));
    }

    fn next_line(&mut self) -> Option<usize> {
        while self.pos < self.lines.len() {
            if self.lines[self.pos].words.is_empty() {
                self.pos += 1;
                continue;
            }
            let i = self.pos;
            self.pos += 1;
            return Some(i);
        }
        None
    }

    /// Lines of a block up to the matching `end`.
    fn block(&mut self, path: &str) -> Vec<usize> {
        let mut body = Vec::new();
        loop {
            let Some(i) = self.next_line() else {
                let last = self.lines.len();
                self.diag(last, 1, path, "missing `end`");
                return body;
            };
            if self.lines[i].words[0].1 == "end" {
                return body;
            }
            body.push(i);
        }
    }
}

fn parse_i64_list(
    words: &[(usize, &str)],
    line: usize,
    path: &str,
    diags: &mut Vec<Diagnostic>,
) -> Vec<Int> {
    let mut out = Vec::new();
    for (col, w) in words {
        match w.parse::<Int>() {
            Ok(v) => out.push(v),
            Err(_) => diags.push(Diagnostic::new(
                line,
                *col,
                path,
                format!("not an integer: `{w}`"),
            )),
        }
    }
    out
}

fn parse_rat_at(
    word: &str,
    line: usize,
    col: usize,
    path: &str,
    diags: &mut Vec<Diagnostic>,
) -> Rat {
    match parse_rat(word) {
        Ok(r) => r,
        Err(e) => {
            diags.push(Diagnostic::new(line, col, path, e.to_string()));
            Rat::from_integer(Int::from(1))
        }
    }
}

/// Parse a model file. All structural and semantic violations are collected;
/// the result is all-or-nothing.
pub fn parse_model(text: &str) -> Result<LoadedModel, Vec<Diagnostic>> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| split_words(raw, i + 1))
        .collect();
    let mut p = Parser {
        lines,
        pos: 0,
        diags: Vec::new(),
        locations: BTreeMap::new(),
    };

    let mut params: Option<ParamSpace> = None;
    let mut fiber: Option<Vec<String>> = None;
    let mut reference: Option<String> = None;
    let mut charts: Vec<Chart> = Vec::new();
    let mut transitions: Vec<TotalTransition> = Vec::new();
    let mut local_base: Vec<LinearForm> = Vec::new();
    let mut local_fiber: Vec<LinearForm> = Vec::new();
    let mut saw_local = false;
    let mut central: Vec<((String, String), MonomialMap)> = Vec::new();
    let mut fixture_vars: Vec<String> = Vec::new();
    let mut fixtures: Vec<LoopFixture> = Vec::new();

    while let Some(i) = p.next_line() {
        let no = p.lines[i].no;
        let words = p.lines[i].words.clone();
        let (head_col, head) = words[0];
        match head {
            "params" => {
                p.locations.insert("params".into(), (no, head_col));
                match ParamSpace::new(words[1..].iter().map(|(_, w)| w.to_string())) {
                    Ok(ps) => params = Some(ps),
                    Err(e) => p.diag(no, head_col, "params", e.to_string()),
                }
            }
            "fiber" => {
                p.locations.insert("fiber".into(), (no, head_col));
                fiber = Some(words[1..].iter().map(|(_, w)| w.to_string()).collect());
            }
            "reference" => {
                p.locations.insert("reference".into(), (no, head_col));
                if words.len() != 2 {
                    p.diag(no, head_col, "reference", "expected exactly one chart id");
                } else {
                    reference = Some(words[1].1.to_string());
                }
            }
            "fixture_vars" => {
                fixture_vars = words[1..].iter().map(|(_, w)| w.to_string()).collect();
            }
            "chart" => {
                if words.len() != 2 {
                    p.diag(no, head_col, "chart", "expected `chart <id>`");
                    p.block("chart");
                    continue;
                }
                let id = words[1].1.to_string();
                let path = format!("chart {id}");
                p.locations.insert(path.clone(), (no, head_col));
                let body = p.block(&path);
                let mut coords: Vec<String> = Vec::new();
                let mut divisorial_names: Vec<String> = Vec::new();
                let mut logpole_names: Vec<String> = Vec::new();
                for b in body {
                    let lno = p.lines[b].no;
                    let w = p.lines[b].words.clone();
                    let names: Vec<String> = w[1..].iter().map(|(_, s)| s.to_string()).collect();
                    match w[0].1 {
                        "coords" => coords = names,
                        "divisorial" => divisorial_names = names,
                        "logpole" => logpole_names = names,
                        other => p.diag(lno, w[0].0, &path, format!("unknown key `{other}`")),
                    }
                }
                for set in [&divisorial_names, &logpole_names] {
                    for n in set {
                        if !coords.contains(n) {
                            p.diag(no, head_col, &path, format!("`{n}` is not a coordinate"));
                        }
                    }
                }
                let divisorial = coords
                    .iter()
                    .map(|c| divisorial_names.contains(c))
                    .collect();
                let logpole = coords.iter().map(|c| logpole_names.contains(c)).collect();
                charts.push(Chart {
                    id,
                    coords,
                    divisorial,
                    logpole,
                });
            }
            "transition" => {
                if words.len() != 3 {
                    p.diag(
                        no,
                        head_col,
                        "transition",
                        "expected `transition <target> <source>`",
                    );
                    p.block("transition");
                    continue;
                }
                let target = words[1].1.to_string();
                let source = words[2].1.to_string();
                let path = format!("transition {target} {source}");
                p.locations.insert(path.clone(), (no, head_col));
                let body = p.block(&path);
                let mut rows: Vec<Vec<Int>> = Vec::new();
                let mut coeffs: Vec<Rat> = Vec::new();
                let mut twists: Vec<(String, FiberTwist)> = Vec::new();
                for b in body {
                    let lno = p.lines[b].no;
                    let w = p.lines[b].words.clone();
                    match w[0].1 {
                        "row" => rows.push(parse_i64_list(&w[1..], lno, &path, &mut p.diags)),
                        "coeffs" => {
                            coeffs = w[1..]
                                .iter()
                                .map(|(c, s)| parse_rat_at(s, lno, *c, &path, &mut p.diags))
                                .collect()
                        }
                        "twist" => {
                            // twist <fiber-name> <ints..> unit <rat>
                            let unit_at = w.iter().position(|(_, s)| *s == "unit");
                            let Some(u) = unit_at else {
                                p.diag(lno, w[0].0, &path, "twist needs a `unit` value");
                                continue;
                            };
                            if w.len() < 3 || u + 2 != w.len() {
                                p.diag(
                                    lno,
                                    w[0].0,
                                    &path,
                                    "expected `twist <fiber> <ints..> unit <rat>`",
                                );
                                continue;
                            }
                            let name = w[1].1.to_string();
                            let exps = parse_i64_list(&w[2..u], lno, &path, &mut p.diags);
                            let unit =
                                parse_rat_at(w[u + 1].1, lno, w[u + 1].0, &path, &mut p.diags);
                            twists.push((
                                name,
                                FiberTwist {
                                    exponents: exps,
                                    unit,
                                },
                            ));
                        }
                        other => p.diag(lno, w[0].0, &path, format!("unknown key `{other}`")),
                    }
                }
                if coeffs.is_empty() {
                    coeffs = vec![Rat::from_integer(Int::from(1)); rows.len()];
                }
                let n = rows.first().map(Vec::len).unwrap_or(0);
                if rows.iter().any(|r| r.len() != n) {
                    p.diag(no, head_col, &path, "ragged exponent rows");
                    continue;
                }
                let base = match MonomialMap::new(n, coeffs, rows) {
                    Ok(m) => m,
                    Err(e) => {
                        p.diag(no, head_col, &path, e.to_string());
                        continue;
                    }
                };
                // twist rows are matched to fiber names after the header is known
                let ordered = |fiber: &Option<Vec<String>>,
                               twists: &[(String, FiberTwist)],
                               p: &mut Parser|
                 -> Vec<FiberTwist> {
                    let Some(names) = fiber else {
                        return twists.iter().map(|(_, t)| t.clone()).collect();
                    };
                    let mut out = Vec::new();
                    for nm in names {
                        match twists.iter().find(|(t, _)| t == nm) {
                            Some((_, t)) => out.push(t.clone()),
                            None => p.diag(
                                no,
                                head_col,
                                &path,
                                format!("missing twist for fiber `{nm}`"),
                            ),
                        }
                    }
                    for (t, _) in twists {
                        if !names.contains(t) {
                            p.diag(
                                no,
                                head_col,
                                &path,
                                format!("twist for unknown fiber `{t}`"),
                            );
                        }
                    }
                    out
                };
                let twists = ordered(&fiber, &twists, &mut p);
                transitions.push(TotalTransition {
                    source,
                    target,
                    base,
                    twists,
                });
            }
            "local_system" => {
                saw_local = true;
                p.locations.insert("local_system".into(), (no, head_col));
                p.locations
                    .insert("local_system/base".into(), (no, head_col));
                p.locations
                    .insert("local_system/fiber".into(), (no, head_col));
                let body = p.block("local_system");
                let Some(ps) = params.clone() else {
                    p.diag(
                        no,
                        head_col,
                        "local_system",
                        "params must be declared first",
                    );
                    continue;
                };
                for b in body {
                    let lno = p.lines[b].no;
                    let raw = p.lines[b].raw;
                    let w = p.lines[b].words.clone();
                    let key = w[0].1;
                    if key != "base" && key != "fiber" {
                        p.diag(lno, w[0].0, "local_system", format!("unknown key `{key}`"));
                        continue;
                    }
                    let expr_start = w[1].0 - 1;
                    let path = format!("local_system/{key}");
                    match lex(&raw[expr_start..], lno, &path) {
                        Ok(mut toks) => {
                            for t in &mut toks {
                                t.col += expr_start;
                            }
                            match parse_linear_form(&toks, lno, &path, &ps) {
                                Ok(f) => {
                                    if key == "base" {
                                        local_base.push(f)
                                    } else {
                                        local_fiber.push(f)
                                    }
                                }
                                Err(d) => p.diags.push(d),
                            }
                        }
                        Err(d) => p.diags.push(d),
                    }
                }
            }
            "central_cocycle" => {
                if words.len() != 3 {
                    p.diag(
                        no,
                        head_col,
                        "central_cocycle",
                        "expected `central_cocycle <target> <source>`",
                    );
                    p.block("central_cocycle");
                    continue;
                }
                let target = words[1].1.to_string();
                let source = words[2].1.to_string();
                let path = format!("central_cocycle {target} {source}");
                p.locations.insert(path.clone(), (no, head_col));
                let body = p.block(&path);
                let mut row: Vec<Int> = Vec::new();
                let mut coeff = Rat::from_integer(Int::from(1));
                for b in body {
                    let lno = p.lines[b].no;
                    let w = p.lines[b].words.clone();
                    match w[0].1 {
                        "row" => row = parse_i64_list(&w[1..], lno, &path, &mut p.diags),
                        "coeff" => coeff = parse_rat_at(w[1].1, lno, w[1].0, &path, &mut p.diags),
                        other => p.diag(lno, w[0].0, &path, format!("unknown key `{other}`")),
                    }
                }
                let n = row.len();
                match MonomialMap::new(n, vec![coeff], vec![row]) {
                    Ok(m) => central.push(((target, source), m)),
                    Err(e) => p.diag(no, head_col, &path, e.to_string()),
                }
            }
            "fixture" => {
                if words.len() != 2 {
                    p.diag(no, head_col, "fixture", "expected `fixture <name>`");
                    p.block("fixture");
                    continue;
                }
                let name = words[1].1.to_string();
                let path = format!("fixture {name}");
                p.locations.insert(path.clone(), (no, head_col));
                let body = p.block(&path);
                let mut subgroup = None;
                let mut expect = None;
                let mut lhs: Option<[[ExactLaurent; 2]; 2]> = None;
                let mut rhs: Option<[[ExactLaurent; 2]; 2]> = None;
                for b in body {
                    let lno = p.lines[b].no;
                    let raw = p.lines[b].raw;
                    let w = p.lines[b].words.clone();
                    match w[0].1 {
                        "subgroup" => match w.get(1).map(|(_, s)| *s) {
                            Some("I") => subgroup = Some(Subgroup::Iwahori),
                            Some("Iu") => subgroup = Some(Subgroup::IwahoriUnipotent),
                            _ => p.diag(lno, w[0].0, &path, "expected `I` or `Iu`"),
                        },
                        "expect" => match w.get(1).map(|(_, s)| *s) {
                            Some("yes") => expect = Some(true),
                            Some("no") => expect = Some(false),
                            _ => p.diag(lno, w[0].0, &path, "expected `yes` or `no`"),
                        },
                        side @ ("lhs" | "rhs") => {
                            let expr_start = w[1].0 - 1;
                            match lex(&raw[expr_start..], lno, &path) {
                                Ok(mut toks) => {
                                    for t in &mut toks {
                                        t.col += expr_start;
                                    }
                                    match parse_matrix(&toks, lno, &path, &fixture_vars) {
                                        Ok(m) => {
                                            if side == "lhs" {
                                                lhs = Some(m)
                                            } else {
                                                rhs = Some(m)
                                            }
                                        }
                                        Err(d) => p.diags.push(d),
                                    }
                                }
                                Err(d) => p.diags.push(d),
                            }
                        }
                        other => p.diag(lno, w[0].0, &path, format!("unknown key `{other}`")),
                    }
                }
                match (subgroup, expect, lhs, rhs) {
                    (Some(subgroup), Some(expect_equal), Some(lhs), Some(rhs)) => {
                        fixtures.push(LoopFixture {
                            name,
                            subgroup,
                            expect_equal,
                            lhs,
                            rhs,
                        })
                    }
                    _ => p.diag(
                        no,
                        head_col,
                        &path,
                        "fixture needs subgroup, expect, lhs, and rhs",
                    ),
                }
            }
            other => {
                p.diag(no, head_col, "file", format!("unknown section `{other}`"));
            }
        }
    }

    let params = params.unwrap_or_else(|| ParamSpace::new(Vec::<String>::new()).expect("empty"));
    if !saw_local {
        p.diag(0, 0, "local_system", "missing local_system section");
    }
    if reference.is_none() {
        p.diag(0, 0, "reference", "missing reference chart");
    }

    let data = AtlasModelData {
        params,
        charts,
        fiber: FiberSpec::new(fiber.unwrap_or_default()),
        reference: reference.unwrap_or_default(),
        transitions,
        local_system: ExponentVector::new(local_base, local_fiber),
        central_cocycle: central,
    };

    if !p.diags.is_empty() {
        return Err(p.diags);
    }

    match AtlasModel::new(data) {
        Ok(model) => Ok(LoadedModel {
            model,
            fixture_vars,
            fixtures,
        }),
        Err(issues) => Err(issues
            .into_iter()
            .map(|i| {
                let (line, col) = p.locations.get(&i.path).copied().unwrap_or((0, 0));
                Diagnostic::new(line, col, i.path, i.message)
            })
            .collect()),
    }
}

/// Canonical serialization; parsing it back yields an equal model.
pub fn serialize_model(
    model: &AtlasModel,
    fixture_vars: &[String],
    fixtures: &[LoopFixture],
) -> String {
    use std::fmt::Write as _;
    fn keyword_list(out: &mut String, indent: &str, key: &str, items: &str) {
        if items.is_empty() {
            let _ = writeln!(out, "{indent}{key}");
        } else {
            let _ = writeln!(out, "{indent}{key} {items}");
        }
    }
    let mut out = String::new();
    let params = model.params();
    keyword_list(&mut out, "", "params", &params.names().join(" "));
    keyword_list(&mut out, "", "fiber", &model.fiber().names.join(" "));
    let _ = writeln!(out, "reference {}", model.reference());
    for chart in model.charts() {
        let _ = writeln!(out);
        let _ = writeln!(out, "chart {}", chart.id);
        let _ = writeln!(out, "  coords {}", chart.coords.join(" "));
        let names = |flags: &[bool]| {
            chart
                .coords
                .iter()
                .zip(flags)
                .filter(|(_, &f)| f)
                .map(|(c, _)| c.clone())
                .collect::<Vec<_>>()
                .join(" ")
        };
        keyword_list(&mut out, "  ", "divisorial", &names(&chart.divisorial));
        keyword_list(&mut out, "  ", "logpole", &names(&chart.logpole));
        let _ = writeln!(out, "end");
    }
    for t in model.declared_transitions() {
        let _ = writeln!(out);
        let _ = writeln!(out, "transition {} {}", t.target, t.source);
        for row in t.base.exponents() {
            let row: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "  row {}", row.join(" "));
        }
        let coeffs: Vec<String> = t.base.coeffs().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "  coeffs {}", coeffs.join(" "));
        for (name, tw) in model.fiber().names.iter().zip(&t.twists) {
            let exps: Vec<String> = tw.exponents.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "  twist {} {} unit {}", name, exps.join(" "), tw.unit);
        }
        let _ = writeln!(out, "end");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "local_system");
    for f in &model.local_system().base {
        let _ = writeln!(out, "  base {}", f.render(params));
    }
    for f in &model.local_system().fiber {
        let _ = writeln!(out, "  fiber {}", f.render(params));
    }
    let _ = writeln!(out, "end");
    for ((target, source), m) in model.central_cocycle() {
        let _ = writeln!(out);
        let _ = writeln!(out, "central_cocycle {target} {source}");
        let row: Vec<String> = m.exponents()[0].iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "  row {}", row.join(" "));
        let _ = writeln!(out, "  coeff {}", m.coeffs()[0]);
        let _ = writeln!(out, "end");
    }
    if !fixtures.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "fixture_vars {}", fixture_vars.join(" "));
        for f in fixtures {
            let _ = writeln!(out);
            let _ = writeln!(out, "fixture {}", f.name);
            let _ = writeln!(out, "  subgroup {}", f.subgroup.label());
            let _ = writeln!(
                out,
                "  expect {}",
                if f.expect_equal { "yes" } else { "no" }
            );
            let _ = writeln!(out, "  lhs {}", matrix_text(&f.lhs, fixture_vars));
            let _ = writeln!(out, "  rhs {}", matrix_text(&f.rhs, fixture_vars));
            let _ = writeln!(out, "end");
        }
    }
    out
}

fn matrix_text(m: &[[ExactLaurent; 2]; 2], vars: &[String]) -> String {
    format!(
        "[ {} , {} ; {} , {} ]",
        laurent_text(&m[0][0], vars),
        laurent_text(&m[0][1], vars),
        laurent_text(&m[1][0], vars),
        laurent_text(&m[1][1], vars)
    )
}

fn laurent_text(e: &ExactLaurent, vars: &[String]) -> String {
    if e.terms().is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (k, c) in e.terms() {
        let coeff = ratfunc_text(c, vars);
        let part = match k {
            0 => coeff,
            1 => format!("{coeff}*t"),
            _ => format!("{coeff}*t^{k}"),
        };
        parts.push(part);
    }
    parts.join(" + ")
}

fn ratfunc_text(r: &RatFunc, vars: &[String]) -> String {
    format!("({})/({})", r.num().render(vars), r.den().render(vars))
}
