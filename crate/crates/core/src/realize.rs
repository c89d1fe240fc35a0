//! Exact projective coordinatization of a configuration table.
//!
//! Six lines forming two 3-line pencils are fixed to `y=0, y=z, y=bz` and
//! `x=0, x=z, x=az`; every other line and triple point is then reached by
//! cross products. Coordinates are polynomial triples with the common factor
//! removed, so no division ever happens. Incidences that are not used for
//! construction become constraints; non-concurrent line triples become
//! inequations.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{det3_poly, MultiPoly, RationalFunction, NVARS, VAR_NAMES};
use crate::incidence::ConfigTable;

pub type Coords = [MultiPoly; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("no two triple points lie on disjoint sets of lines")]
    NoGrid,
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("incidence forces {0} to a zero coordinate vector")]
    InconsistentIncidence(String),
    #[error("more than {NVARS} parameters needed")]
    ParameterBudgetExceeded,
    #[error("bad parameter hint: {0}")]
    BadHint(String),
}

/// Two pencils: `y_lines` pass through `p`, `x_lines` through `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridChoice {
    /// Assigned y=0, y=z, y=bz in this order.
    pub y_lines: [usize; 3],
    /// Assigned x=0, x=z, x=az in this order.
    pub x_lines: [usize; 3],
    pub p: usize,
    pub q: usize,
}

/// A point placed by hand: affine coordinates (x, y).
#[derive(Clone, Debug)]
pub struct Hint {
    pub point: usize,
    pub x: MultiPoly,
    pub y: MultiPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct Inequation {
    pub poly: MultiPoly,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct RealizationState {
    pub lines: Vec<Option<Coords>>,
    pub points: Vec<Option<Coords>>,
    /// Parameter variable indices, in order of introduction.
    pub params: Vec<usize>,
    pub constraints: Vec<MultiPoly>,
    /// Incidence behind each constraint, as (line, point).
    pub constraint_sources: Vec<(usize, usize)>,
    pub inequations: Vec<Inequation>,
    /// Degrees of freedom of lines left free (too few triple points to pin).
    pub free_dims: usize,
    pub log: Vec<String>,
}

fn cross(u: &Coords, v: &Coords) -> Coords {
    [
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

fn dot(u: &Coords, v: &Coords) -> MultiPoly {
    &(&(&u[0] * &v[0]) + &(&u[1] * &v[1])) + &(&u[2] * &v[2])
}

/// Remove the common polynomial factor and fix the sign so the last nonzero
/// entry has a positive leading coefficient.
fn normalize(v: Coords) -> Option<Coords> {
    let mut g: Option<MultiPoly> = None;
    for e in v.iter().filter(|e| !e.is_zero()) {
        g = Some(match g {
            None => e.primitive(),
            Some(g) => g.gcd(e),
        });
    }
    let g = g?;
    let last = v.iter().rev().find(|e| !e.is_zero()).unwrap();
    let mut g = g;
    let q = last.div_exact(&g).expect("gcd divides");
    if q.leading_coeff() < num_traits::Zero::zero() {
        g = -&g;
    }
    Some(v.map(|e| e.div_exact(&g).expect("gcd divides")))
}

fn konst(n: i64) -> MultiPoly {
    MultiPoly::from_int(n)
}

fn lines_through(table: &ConfigTable) -> Vec<Vec<usize>> {
    table.point_lines()
}

impl GridChoice {
    /// Check a hand-picked gauge.
    pub fn new(table: &ConfigTable, y_lines: [usize; 3], x_lines: [usize; 3]) -> Result<GridChoice, RealizeError> {
        let common = |ls: &[usize; 3]| -> Option<usize> {
            (0..table.n3()).find(|&p| ls.iter().all(|&l| table.incident(l, p)))
        };
        let mut all: Vec<usize> = y_lines.iter().chain(&x_lines).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != 6 || all.iter().any(|&l| l >= table.k()) {
            return Err(RealizeError::InvalidGauge("six distinct lines required".into()));
        }
        let p = common(&y_lines).ok_or_else(|| RealizeError::InvalidGauge("y-lines not concurrent at a triple".into()))?;
        let q = common(&x_lines).ok_or_else(|| RealizeError::InvalidGauge("x-lines not concurrent at a triple".into()))?;
        Ok(GridChoice { y_lines, x_lines, p, q })
    }
}

/// Pick two triples with disjoint line sets, preferring the pair whose 3x3
/// crossings hit the most triple points; ties go to the earliest pair.
pub fn find_grid(table: &ConfigTable) -> Result<GridChoice, RealizeError> {
    if table.k() < 6 {
        return Err(RealizeError::NoGrid);
    }
    let pl = lines_through(table);
    let mut best: Option<(usize, GridChoice)> = None;
    for p in 0..table.n3() {
        for q in 0..table.n3() {
            if p == q || pl[p].len() != 3 || pl[q].len() != 3 {
                continue;
            }
            if pl[p].iter().any(|l| pl[q].contains(l)) {
                continue;
            }
            let hits = pl[p]
                .iter()
                .flat_map(|&i| pl[q].iter().map(move |&j| (i, j)))
                .filter(|&(i, j)| table.meet(i, j).is_some())
                .count();
            if best.as_ref().map_or(true, |(h, _)| hits > *h) {
                let y_lines = [pl[p][0], pl[p][1], pl[p][2]];
                let x_lines = [pl[q][0], pl[q][1], pl[q][2]];
                best = Some((hits, GridChoice { y_lines, x_lines, p, q }));
            }
        }
    }
    best.map(|(_, g)| g).ok_or(RealizeError::NoGrid)
}

pub fn seed_grid(table: &ConfigTable, choice: &GridChoice) -> RealizationState {
    let a = MultiPoly::var(0);
    let b = MultiPoly::var(1);
    let mut st = RealizationState {
        lines: vec![None; table.k()],
        points: vec![None; table.n3()],
        params: vec![0, 1],
        constraints: vec![],
        constraint_sources: vec![],
        inequations: vec![],
        free_dims: 0,
        log: vec![],
    };
    let ys = [konst(0), konst(-1), -&b];
    let xs = [konst(0), konst(-1), -&a];
    for (i, &l) in choice.y_lines.iter().enumerate() {
        st.lines[l] = Some([konst(0), konst(1), ys[i].clone()]);
    }
    for (i, &l) in choice.x_lines.iter().enumerate() {
        st.lines[l] = Some([konst(1), konst(0), xs[i].clone()]);
    }
    st.points[choice.p] = Some([konst(1), konst(0), konst(0)]);
    st.points[choice.q] = Some([konst(0), konst(1), konst(0)]);
    for (v, name) in [(0usize, "a"), (1, "b")] {
        let x = MultiPoly::var(v);
        st.inequations.push(Inequation { poly: x.clone(), reason: format!("grid: {} != 0", name) });
        st.inequations.push(Inequation { poly: &x - &konst(1), reason: format!("grid: {} != 1", name) });
    }
    st.log.push(format!(
        "gauge: y=0,z,bz on {} and x=0,z,az on {}",
        choice.y_lines.iter().map(|l| format!("L{}", l + 1)).collect::<Vec<_>>().join(","),
        choice.x_lines.iter().map(|l| format!("L{}", l + 1)).collect::<Vec<_>>().join(",")
    ));
    st
}

impl RealizationState {
    fn used_vars(&self) -> usize {
        self.params.len()
    }

    fn next_param(&mut self) -> Result<usize, RealizeError> {
        let v = (0..NVARS).find(|v| !self.params.contains(v)).ok_or(RealizeError::ParameterBudgetExceeded)?;
        self.params.push(v);
        Ok(v)
    }

    pub fn is_complete(&self) -> bool {
        self.points.iter().all(|p| p.is_some()) && self.lines.iter().all(|l| l.is_some())
    }

    pub fn param_names(&self) -> Vec<&'static str> {
        self.params.iter().map(|&v| VAR_NAMES[v]).collect()
    }
}

/// Run the cross-product rules to a fixpoint.
pub fn propagate(mut st: RealizationState, table: &ConfigTable) -> Result<RealizationState, RealizeError> {
    let pl = lines_through(table);
    loop {
        let mut changed = false;
        for p in 0..table.n3() {
            if st.points[p].is_some() {
                continue;
            }
            let known: Vec<usize> = pl[p].iter().copied().filter(|&l| st.lines[l].is_some()).collect();
            if known.len() >= 2 {
                let v = cross(st.lines[known[0]].as_ref().unwrap(), st.lines[known[1]].as_ref().unwrap());
                let v = normalize(v).ok_or_else(|| {
                    RealizeError::InconsistentIncidence(format!(
                        "{} (L{} and L{} coincide)",
                        table.label(p),
                        known[0] + 1,
                        known[1] + 1
                    ))
                })?;
                st.points[p] = Some(v);
                changed = true;
            }
        }
        for l in 0..table.k() {
            if st.lines[l].is_some() {
                continue;
            }
            let known: Vec<usize> = table.line(l).iter().copied().filter(|&p| st.points[p].is_some()).collect();
            if known.len() >= 2 {
                let v = cross(st.points[known[0]].as_ref().unwrap(), st.points[known[1]].as_ref().unwrap());
                let v = normalize(v).ok_or_else(|| {
                    RealizeError::InconsistentIncidence(format!(
                        "L{} ({} and {} coincide)",
                        l + 1,
                        table.label(known[0]),
                        table.label(known[1])
                    ))
                })?;
                st.lines[l] = Some(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(st)
}

/// Give one stalled point a fresh parameter along a known line, or, if the
/// hint list has an entry for an uncoordinatized point, use that instead.
pub fn introduce_parameter(
    mut st: RealizationState,
    table: &ConfigTable,
    hints: &mut Vec<Hint>,
) -> Result<RealizationState, RealizeError> {
    while let Some(h) = (!hints.is_empty()).then(|| hints.remove(0)) {
        if h.point >= table.n3() {
            return Err(RealizeError::BadHint(format!("point index {}", h.point)));
        }
        if st.points[h.point].is_some() {
            st.log.push(format!("hint for {} not needed", table.label(h.point)));
            continue;
        }
        for v in h.x.vars().into_iter().chain(h.y.vars()) {
            if !st.params.contains(&v) {
                if st.used_vars() >= NVARS {
                    return Err(RealizeError::ParameterBudgetExceeded);
                }
                st.params.push(v);
            }
        }
        st.log.push(format!("{} placed at ({}, {})", table.label(h.point), h.x, h.y));
        st.points[h.point] = Some(normalize([h.x.clone(), h.y.clone(), konst(1)]).unwrap());
        return Ok(st);
    }
    let pl = lines_through(table);
    let pick = (0..table.n3())
        .filter(|&p| st.points[p].is_none())
        .filter_map(|p| {
            let known: Vec<usize> = pl[p].iter().copied().filter(|&l| st.lines[l].is_some()).collect();
            (known.len() == 1).then(|| (p, known[0], pl[p].len() - 1))
        })
        .max_by(|x, y| x.2.cmp(&y.2).then(y.0.cmp(&x.0)));
    if let Some((p, l, _)) = pick {
        let t = MultiPoly::var(st.next_param()?);
        let [aa, bb, cc] = st.lines[l].clone().unwrap();
        let v = if !bb.is_zero() {
            [&bb * &t, -&(&(&aa * &t) + &cc), bb.clone()]
        } else {
            [-&cc, &aa * &t, aa.clone()]
        };
        st.log.push(format!("{} given parameter {} along L{}", table.label(p), t, l + 1));
        st.points[p] = Some(normalize(v).ok_or_else(|| RealizeError::InconsistentIncidence(table.label(p).to_string()))?);
        return Ok(st);
    }
    // a line through one known point and nothing else that could pin it
    let line = (0..table.k())
        .filter(|&l| st.lines[l].is_none())
        .find_map(|l| table.line(l).iter().copied().find(|&p| st.points[p].is_some()).map(|p| (l, p)));
    if let Some((l, p)) = line {
        let t = MultiPoly::var(st.next_param()?);
        let dir = [konst(1), t.clone(), konst(0)];
        let v = cross(st.points[p].as_ref().unwrap(), &dir);
        st.log.push(format!("L{} given parameter {} through {}", l + 1, t, table.label(p)));
        st.lines[l] = Some(normalize(v).ok_or_else(|| RealizeError::InconsistentIncidence(format!("L{}", l + 1)))?);
        return Ok(st);
    }
    Ok(st)
}

/// Constraints from every incidence not satisfied identically, and
/// inequations from every line triple without a common triple point.
fn collect_conditions(st: &mut RealizationState, table: &ConfigTable) {
    let mut seen: BTreeSet<String> = st.constraints.iter().map(|c| c.to_string()).collect();
    for l in 0..table.k() {
        let Some(lc) = st.lines[l].clone() else { continue };
        for &p in table.line(l) {
            let Some(pc) = &st.points[p] else { continue };
            let d = dot(&lc, pc);
            if d.is_zero() {
                continue;
            }
            let d = d.primitive();
            if seen.insert(d.to_string()) {
                st.constraints.push(d);
                st.constraint_sources.push((l, p));
            }
        }
    }
    let pl = lines_through(table);
    let k = table.k();
    for i in 0..k {
        for j in i + 1..k {
            for m in j + 1..k {
                if pl.iter().any(|ls| ls.contains(&i) && ls.contains(&j) && ls.contains(&m)) {
                    continue;
                }
                let (Some(x), Some(y), Some(z)) = (&st.lines[i], &st.lines[j], &st.lines[m]) else { continue };
                let d = det3_poly(&[x.clone(), y.clone(), z.clone()]).primitive();
                st.inequations.push(Inequation { poly: d, reason: format!("L{},L{},L{} not concurrent", i + 1, j + 1, m + 1) });
            }
        }
    }
}

/// Full coordinatization: gauge, propagation, parameters as needed, then
/// constraints and inequations.
pub fn realize(table: &ConfigTable, gauge: Option<&GridChoice>, hints: &[Hint]) -> Result<RealizationState, RealizeError> {
    let choice = match gauge {
        Some(g) => g.clone(),
        None => find_grid(table)?,
    };
    let mut hints = hints.to_vec();
    let mut st = propagate(seed_grid(table, &choice), table)?;
    while !st.is_complete() {
        let before = (st.points.iter().flatten().count(), st.lines.iter().flatten().count());
        st = introduce_parameter(st, table, &mut hints)?;
        let after = (st.points.iter().flatten().count(), st.lines.iter().flatten().count());
        if before == after {
            break;
        }
        st = propagate(st, table)?;
    }
    for l in 0..table.k() {
        if st.lines[l].is_none() {
            // only reachable for lines with at most one triple point
            st.free_dims += 2 - table.line(l).len().min(2);
        }
    }
    collect_conditions(&mut st, table);
    Ok(st)
}

/// Line equation in the form `y = ...` when solvable for y, else `x = ...`.
pub struct LineEquation<'a>(pub &'a Coords);

impl fmt::Display for LineEquation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        let rf = |n: &MultiPoly, d: &MultiPoly| RationalFunction::new(-n, d.clone()).expect("nonzero denominator");
        let term = |coef: RationalFunction, var: &str| -> String {
            if coef.is_zero() {
                return String::new();
            }
            let s = coef.to_string();
            match s.as_str() {
                "1" => var.to_string(),
                "-1" => format!("-{}", var),
                _ => format!("({})*{}", s, var),
            }
        };
        let join = |parts: Vec<String>| -> String {
            let parts: Vec<String> = parts.into_iter().filter(|s| !s.is_empty()).collect();
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        };
        if !b.is_zero() {
            write!(f, "y = {}", join(vec![term(rf(a, b), "x"), term(rf(c, b), "z")]))
        } else {
            write!(f, "x = {}", join(vec![term(rf(c, a), "z")]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_orthogonal() {
        let u = [MultiPoly::parse("a").unwrap(), MultiPoly::parse("b + 1").unwrap(), konst(2)];
        let v = [konst(1), MultiPoly::parse("a*b").unwrap(), MultiPoly::parse("c").unwrap()];
        let w = cross(&u, &v);
        assert!(dot(&w, &u).is_zero());
        assert!(dot(&w, &v).is_zero());
    }

    #[test]
    fn too_few_lines() {
        let t = ConfigTable::from_lines(vec![vec![0], vec![0], vec![0]], 1);
        assert_eq!(find_grid(&t), Err(RealizeError::NoGrid));
    }

    #[test]
    fn line_equation_text() {
        let l = [MultiPoly::parse("-a").unwrap(), konst(1), konst(0)];
        assert_eq!(LineEquation(&l).to_string(), "y = (a)*x");
        let l = [konst(1), konst(0), MultiPoly::parse("-a").unwrap()];
        assert_eq!(LineEquation(&l).to_string(), "x = (a)*z");
    }
}
