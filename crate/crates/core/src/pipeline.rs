//! Batch run over registry entries: validate, realize, classify, and diff
//! against the transcribed expectations. Also builds the per-n3 summary.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::numfield::eval_mod;
use crate::algebra::{resultant, squarefree_multi, MultiPoly, UniPoly};
use crate::incidence::{canonical_form, validate};
use crate::moduli::{classify, solve_points, vanishing_part, ConstraintSystem, ModuliError, ModuliReport, Triangular, Verdict};
use crate::realize::{realize, RealizeError};
use crate::registry::{ExpectedVerdict, RegistryEntry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub field: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub lines: usize,
    pub triples: usize,
    pub params: Vec<String>,
    /// Raw incidence constraints before reduction.
    pub constraints: Vec<MultiPoly>,
    pub report: Option<ModuliReport>,
    pub error: Option<String>,
    /// True when the table itself failed to validate.
    pub invalid: bool,
    pub mismatches: Vec<Mismatch>,
}

impl EntryReport {
    pub fn verdict(&self) -> Option<Verdict> {
        self.report.as_ref().map(|r| r.verdict)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub lines: usize,
    pub triples: usize,
    pub combinatorial: usize,
    pub non_geometric: usize,
    pub geometric: usize,
    pub flagged: usize,
    pub irreducible_or_conjugate: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SummaryReport {
    pub rows: Vec<SummaryRow>,
    /// Sum over the ten-line rows.
    pub total: SummaryRow,
    pub flagged_names: Vec<String>,
    pub non_geometric_names: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub entries: Vec<EntryReport>,
    pub summary: SummaryReport,
}

impl PipelineReport {
    /// 0 clean, 2 mismatch, 3 validation failure.
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| e.invalid) {
            3
        } else if self.entries.iter().any(|e| !e.mismatches.is_empty() || e.error.is_some()) {
            2
        } else {
            0
        }
    }
}

/// Classify one table with its registry directives. A forced coincidence
/// of lines or points makes the table non-geometric.
pub fn analyze(entry: &RegistryEntry) -> EntryReport {
    let mut out = EntryReport {
        name: entry.name.clone(),
        lines: entry.table.k(),
        triples: entry.table.n3(),
        params: vec![],
        constraints: vec![],
        report: None,
        error: None,
        invalid: false,
        mismatches: vec![],
    };
    if let Err(e) = validate(&entry.table) {
        out.error = Some(e.to_string());
        out.invalid = true;
        return out;
    }
    let grid = match entry.grid() {
        Ok(g) => g,
        Err(e) => {
            out.error = Some(e.to_string());
            out.invalid = true;
            return out;
        }
    };
    let st = match realize(&entry.table, grid.as_ref(), &entry.directives.hints) {
        Ok(st) => st,
        Err(RealizeError::InconsistentIncidence(msg)) => {
            out.report = Some(ModuliReport::empty(vec![format!("forced coincidence: {}", msg)], vec![]));
            out.mismatches = diff_expected(out.report.as_ref().unwrap(), None, entry);
            return out;
        }
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.params = st.param_names().iter().map(|s| s.to_string()).collect();
    out.constraints = st.constraints.clone();
    let sys = ConstraintSystem::from_state(&st);
    match classify(&sys) {
        Ok(r) => {
            out.mismatches = diff_expected(&r, Some(&sys), entry);
            out.report = Some(r);
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

/// Run `entries` in parallel; the result keeps the input order.
pub fn run_pipeline(entries: &[RegistryEntry]) -> PipelineReport {
    let reports: Vec<EntryReport> = entries.par_iter().map(analyze).collect();
    let summary = summarize(entries, &reports);
    PipelineReport { entries: reports, summary }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Empty => "empty",
        Verdict::ZeroDim => "zero_dim",
        Verdict::PositiveDim => "positive_dim",
    }
}

fn expected_name(v: &ExpectedVerdict) -> &'static str {
    match v {
        ExpectedVerdict::Empty => "empty",
        ExpectedVerdict::ZeroDim => "zero_dim",
        ExpectedVerdict::PositiveDim => "positive_dim",
    }
}

fn apply_substitutions(g: &MultiPoly, tri: &Triangular) -> MultiPoly {
    let mut g = g.clone();
    for s in &tri.substitutions {
        g = g.subst_fraction(s.var, &s.num, &s.den);
    }
    g
}

/// Does `g` vanish on the solution set described by `r`?
fn vanishes_on(g: &MultiPoly, r: &ModuliReport) -> Result<bool, ModuliError> {
    match r.verdict {
        Verdict::Empty => Ok(true),
        Verdict::ZeroDim => {
            for p in &r.points {
                match eval_mod(g, &p.env, &p.m) {
                    Some(v) if v.is_zero() => {}
                    _ => return Ok(false),
                }
            }
            Ok(true)
        }
        Verdict::PositiveDim => {
            for tri in &r.branches {
                let h = apply_substitutions(g, tri);
                if h.is_zero() {
                    continue;
                }
                match tri.constraints.len() {
                    0 => return Ok(false),
                    1 => {
                        let f = squarefree_multi(&tri.constraints[0]);
                        if h.div_exact(&f).is_none() {
                            return Ok(false);
                        }
                    }
                    _ => {
                        let mut vars: Vec<usize> = tri.constraints.iter().flat_map(|c| c.vars()).collect();
                        vars.sort();
                        vars.dedup();
                        for p in solve_points(&tri.constraints, &vars, &mut vec![])? {
                            match vanishing_part(&h, &p.env, &p.m) {
                                Some(z) if z.degree() == p.m.degree() => {}
                                _ => return Ok(false),
                            }
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}

fn monic_text(p: &MultiPoly) -> String {
    squarefree_multi(p).monic().to_string()
}

/// Squarefree polynomial in `var` whose roots are the values of `var` at
/// the surviving points of `r`.
fn coordinate_polynomial(r: &ModuliReport, var: usize) -> Option<MultiPoly> {
    let mut prod = MultiPoly::one();
    for p in &r.points {
        let val = p.env[var].as_ref()?;
        let x = p.m.var;
        if x == var {
            prod = &prod * &p.m.to_multi();
            continue;
        }
        let shifted = &MultiPoly::var(var) - &val.to_multi();
        prod = &prod * &resultant(&p.m.to_multi(), &shifted, x).ok()?;
    }
    Some(squarefree_multi(&prod))
}

fn rename_equal(a: &MultiPoly, b: &MultiPoly) -> bool {
    let (Some(u), Some(v)) = (a.vars().first().copied(), b.vars().first().copied()) else { return false };
    if a.vars().len() != 1 || b.vars().len() != 1 {
        return false;
    }
    let a = UniPoly::from_multi(a, u).unwrap().squarefree_part().map(|p| p.monic());
    let b = UniPoly::from_multi(b, v).unwrap().squarefree_part().map(|p| p.monic());
    matches!((a, b), (Ok(a), Ok(b)) if a.coeffs() == b.coeffs())
}

/// Differences between a classification and the transcribed expectation.
/// Constraint lists are compared as solution sets: each side's polynomials
/// must vanish on the other side's reduced variety.
pub fn diff_expected(r: &ModuliReport, sys: Option<&ConstraintSystem>, entry: &RegistryEntry) -> Vec<Mismatch> {
    let Some(exp) = &entry.expected else { return vec![] };
    let mut out = vec![];
    let mut push = |field: &str, expected: String, got: String| out.push(Mismatch { field: field.into(), expected, got });
    if expected_name(&exp.verdict) != verdict_name(r.verdict) {
        push("verdict", expected_name(&exp.verdict).into(), verdict_name(r.verdict).into());
        if exp.zariski_flag != r.zariski_flag {
            push("zariski_flag", exp.zariski_flag.to_string(), r.zariski_flag.to_string());
        }
        return out;
    }
    if exp.zariski_flag != r.zariski_flag {
        push("zariski_flag", exp.zariski_flag.to_string(), r.zariski_flag.to_string());
    }
    if let (Some(d), Some(got)) = (exp.dimension, r.dimension) {
        if d != got {
            push("dimension", d.to_string(), got.to_string());
        }
    }
    if r.verdict == Verdict::Empty {
        return out;
    }
    let Some(sys) = sys else { return out };
    let parsed: Result<Vec<MultiPoly>, _> = exp.constraints.iter().map(|s| MultiPoly::parse(s)).collect();
    let expected_polys = match parsed {
        Ok(p) => p,
        Err(e) => {
            push("constraints", exp.constraints.join(", "), format!("unparseable: {}", e));
            return out;
        }
    };
    let shown = |v: &[MultiPoly]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");

    if r.verdict == Verdict::ZeroDim {
        if let Some(e) = expected_polys.iter().find(|p| p.vars().len() == 1) {
            let var = e.vars()[0];
            let same = match coordinate_polynomial(r, var) {
                Some(c) => monic_text(&c) == monic_text(e),
                None => false,
            };
            let renamed = r.minpoly.as_ref().map_or(false, |m| rename_equal(m, e));
            if !same && !renamed {
                let got = r.minpoly.as_ref().map(|m| m.to_string()).unwrap_or_default();
                push("minpoly", e.to_string(), got);
            }
        }
    }

    let theirs = ConstraintSystem { constraints: expected_polys.clone(), ..sys.clone() };
    let exp_report = match classify(&theirs) {
        Ok(x) => x,
        Err(e) => {
            push("constraints", shown(&expected_polys), format!("expected system not classifiable: {}", e));
            return out;
        }
    };
    let same_shape = exp_report.verdict == r.verdict && exp_report.dimension == r.dimension;
    let contained = |gs: &[MultiPoly], on: &ModuliReport| gs.iter().all(|g| vanishes_on(g, on).unwrap_or(false));
    if !same_shape || !contained(&expected_polys, r) || !contained(&r.system, &exp_report) {
        push("constraints", shown(&expected_polys), shown(&r.system));
    }
    out
}

fn summarize(entries: &[RegistryEntry], reports: &[EntryReport]) -> SummaryReport {
    let mut rows: BTreeMap<(usize, usize), SummaryRow> = BTreeMap::new();
    let mut s = SummaryReport::default();
    let mut classes: BTreeMap<(usize, usize), BTreeMap<_, Vec<String>>> = BTreeMap::new();
    for (e, r) in entries.iter().zip(reports) {
        let key = (r.lines, r.triples);
        let row = rows.entry(key).or_insert_with(|| SummaryRow { lines: r.lines, triples: r.triples, ..Default::default() });
        row.combinatorial += 1;
        match r.report.as_ref() {
            None => row.errors += 1,
            Some(m) if m.verdict == Verdict::Empty => {
                row.non_geometric += 1;
                if r.lines == 10 {
                    s.non_geometric_names.push(r.name.clone());
                }
            }
            Some(m) => {
                row.geometric += 1;
                if m.zariski_flag {
                    row.flagged += 1;
                    if r.lines == 10 {
                        s.flagged_names.push(r.name.clone());
                    }
                } else {
                    row.irreducible_or_conjugate += 1;
                }
            }
        }
        if !r.invalid {
            classes.entry(key).or_default().entry(canonical_form(&e.table)).or_default().push(r.name.clone());
        }
    }
    for row in rows.values().filter(|r| r.lines == 10) {
        let t = &mut s.total;
        t.lines = 10;
        t.combinatorial += row.combinatorial;
        t.non_geometric += row.non_geometric;
        t.geometric += row.geometric;
        t.flagged += row.flagged;
        t.irreducible_or_conjugate += row.irreducible_or_conjugate;
        t.errors += row.errors;
    }
    for ((k, n3), by_form) in &classes {
        let count: usize = by_form.values().map(|v| v.len()).sum();
        if by_form.len() < count {
            let groups: Vec<String> = by_form.values().filter(|v| v.len() > 1).map(|v| v.join(" = ")).collect();
            s.notes.push(format!(
                "k={} n3={}: {} tables form {} isomorphism classes; isomorphic names: {}",
                k,
                n3,
                count,
                by_form.len(),
                groups.join("; ")
            ));
        }
    }
    for r in reports {
        if !r.mismatches.is_empty() {
            let what: Vec<&str> = r.mismatches.iter().map(|m| m.field.as_str()).collect();
            s.notes.push(format!("{}: differs from expectation in {}", r.name, what.join(", ")));
        }
        if let Some(err) = &r.error {
            s.notes.push(format!("{}: {}", r.name, err));
        }
    }
    s.rows = rows.into_values().collect();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{load_registry, registry_dir, Expected};

    fn entry(name: &str) -> RegistryEntry {
        load_registry(&registry_dir()).unwrap().into_iter().find(|e| e.name == name).unwrap()
    }

    #[test]
    fn pair_entry_matches() {
        let e = entry("(9_3).ii.CFI");
        let r = analyze(&e);
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        assert!(r.report.unwrap().zariski_flag);
    }

    #[test]
    fn three_root_entry_matches() {
        let r = analyze(&entry("12.B.2.iv"));
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
    }

    #[test]
    fn tampered_sign_is_reported() {
        let mut e = entry("(10_3).ii");
        let exp = e.expected.as_mut().unwrap();
        let tampered: Vec<String> = exp.constraints.iter().map(|c| c.replace("- 1", "+ 1")).collect();
        assert_ne!(tampered, exp.constraints);
        *exp = Expected { constraints: tampered, ..exp.clone() };
        let r = analyze(&e);
        assert_eq!(r.mismatches.len(), 1, "{:?}", r.mismatches);
    }

    #[test]
    fn empty_selection() {
        let r = run_pipeline(&[]);
        assert!(r.entries.is_empty());
        assert!(r.summary.rows.is_empty());
        assert_eq!(r.exit_code(), 0);
    }
}
