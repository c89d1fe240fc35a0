//! Reduction and classification of realization systems: substitution of
//! linear constraints, resultant elimination, exact root counting and the
//! complex-conjugation orbit count that drives the pair flag.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::numfield::{eval_mod, gcd_split, inverse, split, to_kpoly, Env};
use crate::algebra::{abs_irreducible_quadratic, resultant, squarefree_multi, AlgebraError, Monomial, MultiPoly, QuadraticVerdict, UniPoly, NVARS};
use crate::realize::{Inequation, RealizationState};

const MAX_DEGREE: u32 = 12;
const MAX_BRANCHES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuliError {
    #[error("elimination produced degree {0}, above the limit of {MAX_DEGREE}")]
    EliminationOverflow(u32),
    #[error("denominator {0} vanishes at the root")]
    NonInvertibleDenominator(String),
    #[error("unsupported system: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub params: Vec<usize>,
    pub constraints: Vec<MultiPoly>,
    pub inequations: Vec<Inequation>,
    /// Extra dimensions from lines that carry no conditions.
    pub free_dims: usize,
}

impl ConstraintSystem {
    pub fn from_state(st: &RealizationState) -> Self {
        ConstraintSystem {
            params: st.params.clone(),
            constraints: st.constraints.clone(),
            inequations: st.inequations.clone(),
            free_dims: st.free_dims,
        }
    }
}

/// `var = num / den`, with `den` known to be nonzero on the branch.
#[derive(Clone, Debug, Serialize)]
pub struct Substitution {
    pub var: usize,
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl Substitution {
    /// `den*var - num`, primitive.
    pub fn as_poly(&self) -> MultiPoly {
        (&(&self.den * &MultiPoly::var(self.var)) - &self.num).primitive()
    }
}

/// One branch of the reduction: substitutions already made plus what is
/// left. `empty` carries the reason when the branch has no valid points.
#[derive(Clone, Debug)]
pub struct Triangular {
    pub free: Vec<usize>,
    pub constraints: Vec<MultiPoly>,
    pub substitutions: Vec<Substitution>,
    pub inequations: Vec<Inequation>,
    pub empty: Option<String>,
    pub log: Vec<String>,
}

impl Triangular {
    /// Substitutions as polynomials followed by the remaining constraints,
    /// canonically sorted.
    pub fn system(&self) -> Vec<MultiPoly> {
        let mut v: Vec<MultiPoly> = self.substitutions.iter().map(|s| s.as_poly()).collect();
        v.extend(self.constraints.iter().cloned());
        sort_dedup(v)
    }
}

fn sort_dedup(v: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out: Vec<MultiPoly> = v.into_iter().filter(|p| seen.insert(p.to_string())).collect();
    out.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| a.to_string().cmp(&b.to_string())));
    out
}

/// Remove every factor `f` shares with an inequation.
pub fn saturate(f: &MultiPoly, ineqs: &[Inequation]) -> MultiPoly {
    let mut f = f.primitive();
    for h in ineqs {
        if h.poly.is_constant() {
            continue;
        }
        loop {
            if f.is_constant() {
                return f;
            }
            let g = f.gcd(&h.poly);
            if g.is_constant() {
                break;
            }
            f = f.div_exact(&g).expect("gcd divides").primitive();
        }
    }
    f
}

fn linear_in(f: &MultiPoly, v: usize) -> Option<(MultiPoly, MultiPoly)> {
    if f.degree_in(v) != 1 {
        return None;
    }
    let c = f.coeffs_in(v);
    Some((c[1].clone(), c[0].clone()))
}

fn vars_of(cs: &[MultiPoly]) -> Vec<usize> {
    let mut s: BTreeSet<usize> = BTreeSet::new();
    for c in cs {
        s.extend(c.vars());
    }
    s.into_iter().collect()
}

struct Reducer {
    saturate: bool,
}

impl Reducer {
    fn clean(&self, tri: &mut Triangular) {
        let mut out = vec![];
        for c in tri.constraints.drain(..) {
            if c.is_zero() {
                continue;
            }
            let c = if self.saturate { squarefree_multi(&saturate(&c, &tri.inequations)) } else { c.primitive() };
            if c.is_zero() {
                continue;
            }
            if c.is_constant() {
                if tri.empty.is_none() {
                    tri.empty = Some("a constraint has no solution off the degenerate locus".into());
                }
                continue;
            }
            out.push(c);
        }
        tri.constraints = sort_dedup(out);
        if tri.empty.is_none() {
            if let Some(h) = tri.inequations.iter().find(|h| h.poly.is_zero()) {
                tri.empty = Some(format!("forced degeneration: {}", h.reason));
            }
        }
    }

    fn substitute(&self, mut tri: Triangular, idx: usize, v: usize, p1: MultiPoly, p0: MultiPoly) -> Triangular {
        let num = -&p0;
        let den = p1;
        tri.constraints.remove(idx);
        tri.constraints = tri.constraints.iter().map(|c| c.subst_fraction(v, &num, &den)).collect();
        tri.inequations = tri
            .inequations
            .iter()
            .map(|h| Inequation { poly: h.poly.subst_fraction(v, &num, &den).primitive(), reason: h.reason.clone() })
            .collect();
        tri.free.retain(|&x| x != v);
        let sub = Substitution { var: v, num, den };
        tri.log.push(format!("substituted {}", sub.as_poly()));
        tri.substitutions.push(sub);
        self.clean(&mut tri);
        tri
    }

    fn run(&self, sys: &ConstraintSystem) -> Result<Vec<Triangular>, ModuliError> {
        let mut start = Triangular {
            free: sys.params.clone(),
            constraints: sys.constraints.clone(),
            substitutions: vec![],
            inequations: sys.inequations.iter().map(|h| Inequation { poly: h.poly.primitive(), reason: h.reason.clone() }).collect(),
            empty: None,
            log: vec![],
        };
        self.clean(&mut start);
        let mut todo = vec![start];
        let mut done = vec![];
        while let Some(tri) = todo.pop() {
            if done.len() + todo.len() > MAX_BRANCHES {
                return Err(ModuliError::Unsupported(format!("more than {} branches", MAX_BRANCHES)));
            }
            if tri.empty.is_some() {
                done.push(tri);
                continue;
            }
            match self.pick(&tri) {
                None => done.push(tri),
                Some((idx, v, p1, p0, unit)) => {
                    if unit {
                        todo.push(self.substitute(tri, idx, v, p1, p0));
                    } else {
                        // either p1 != 0 and v is solved for, or p1 = p0 = 0
                        let mut zero = tri.clone();
                        zero.constraints.remove(idx);
                        zero.constraints.push(p1.clone());
                        zero.constraints.push(p0.clone());
                        zero.log.push(format!("branch: {} = 0", p1));
                        self.clean(&mut zero);
                        let mut nz = tri;
                        nz.inequations.push(Inequation { poly: p1.primitive(), reason: format!("branch: {} != 0", p1) });
                        nz.log.push(format!("branch: {} != 0", p1));
                        todo.push(zero);
                        todo.push(self.substitute(nz, idx, v, p1, p0));
                    }
                }
            }
        }
        done.reverse();
        Ok(done)
    }

    /// Next linear substitution: constant coefficient first, then a
    /// coefficient that is nonzero on the valid locus, then any; higher
    /// variables first within each class.
    fn pick(&self, tri: &Triangular) -> Option<(usize, usize, MultiPoly, MultiPoly, bool)> {
        let mut best: Option<(u8, usize, usize, MultiPoly, MultiPoly)> = None;
        let only_one_free = vars_of(&tri.constraints).len() == 1;
        for (i, c) in tri.constraints.iter().enumerate() {
            for v in (0..NVARS).rev() {
                let Some((p1, p0)) = linear_in(c, v) else { continue };
                if only_one_free && c.vars() == vec![v] && tri.free.len() == 1 {
                    // the last unknown: keep it as the eliminant
                    continue;
                }
                let class = if p1.is_constant() {
                    0
                } else if saturate(&p1, &tri.inequations).is_constant() {
                    1
                } else {
                    2
                };
                if best.as_ref().map_or(true, |b| class < b.0) {
                    best = Some((class, i, v, p1, p0));
                }
            }
        }
        best.map(|(class, i, v, p1, p0)| (i, v, p1, p0, class < 2))
    }
}

/// Substitute linear constraints until none is left, branching on whether
/// the solved-for coefficient vanishes. With `saturate`, factors shared with
/// inequations are removed from constraints along the way.
pub fn triangularize(sys: &ConstraintSystem, saturate: bool) -> Result<Vec<Triangular>, ModuliError> {
    if sys.params.len() > NVARS {
        return Err(ModuliError::Unsupported(format!("{} parameters", sys.params.len())));
    }
    Reducer { saturate }.run(sys)
}

/// A set of points: the roots of `m` (in variable `m.var`), with every
/// solved variable expressed in Q[x]/(m).
#[derive(Clone, Debug)]
pub struct Piece {
    pub m: UniPoly,
    pub env: Env,
}

fn restrict(env: &Env, m: &UniPoly) -> Env {
    let mut e: Env = Default::default();
    for v in 0..NVARS {
        e[v] = env[v].as_ref().map(|p| p.rem(m));
    }
    e
}

/// All common roots of `cs` in the variables `vars`, which must be finitely
/// many. Fails with `Unsupported` when some variable is left free or a lift
/// is not linear.
pub fn solve_points(cs: &[MultiPoly], vars: &[usize], log: &mut Vec<String>) -> Result<Vec<Piece>, ModuliError> {
    if vars.len() == 1 {
        let v = vars[0];
        let mut g: Option<UniPoly> = None;
        for c in cs {
            let u = UniPoly::from_multi(c, v).ok_or_else(|| ModuliError::Unsupported("stray variable".into()))?;
            g = Some(match g {
                None => u,
                Some(g) => g.gcd(&u),
            });
        }
        let Some(g) = g else { return Err(ModuliError::Unsupported("free variable".into())) };
        if g.is_constant() {
            return Ok(vec![]);
        }
        let m = g.squarefree_part()?.primitive();
        let mut env: Env = Default::default();
        env[v] = Some(UniPoly::x(v));
        return Ok(vec![Piece { m, env }]);
    }
    let mut last_err = None;
    for &v in vars.iter().rev() {
        match eliminate_and_lift(cs, vars, v, log) {
            Ok(p) => return Ok(p),
            Err(e @ ModuliError::EliminationOverflow(_)) => return Err(e),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

fn eliminate_and_lift(cs: &[MultiPoly], vars: &[usize], v: usize, log: &mut Vec<String>) -> Result<Vec<Piece>, ModuliError> {
    let (with_v, rest): (Vec<MultiPoly>, Vec<MultiPoly>) = cs.iter().cloned().partition(|c| c.contains_var(v));
    if with_v.is_empty() {
        return Err(ModuliError::Unsupported("free variable".into()));
    }
    let gi = (0..with_v.len())
        .min_by_key(|&i| (with_v[i].degree_in(v), with_v[i].total_degree()))
        .unwrap();
    let g = &with_v[gi];
    let mut sub = rest;
    for (i, f) in with_v.iter().enumerate() {
        if i == gi {
            continue;
        }
        let r = resultant(g, f, v)?;
        if r.is_zero() {
            return Err(ModuliError::Unsupported("constraints share a factor".into()));
        }
        if r.total_degree() > MAX_DEGREE {
            return Err(ModuliError::EliminationOverflow(r.total_degree()));
        }
        if r.is_constant() {
            return Ok(vec![]);
        }
        sub.push(squarefree_multi(&r));
    }
    let rest_vars: Vec<usize> = vars.iter().copied().filter(|&x| x != v).collect();
    let pieces = solve_points(&sub, &rest_vars, log)?;
    let mut out = vec![];
    for piece in pieces {
        let kps = with_v
            .iter()
            .map(|c| to_kpoly(c, v, &piece.env, &piece.m))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| ModuliError::Unsupported("unsolved variable in lift".into()))?;
        for (m, g) in gcd_split(&kps, &piece.m) {
            match g.len() {
                0 => return Err(ModuliError::Unsupported("positive-dimensional fibre".into())),
                1 => log.push(format!("discarded extraneous resultant factor {}", m.to_multi())),
                2 => {
                    let mut env = restrict(&piece.env, &m);
                    env[v] = Some(g[0].neg().rem(&m));
                    out.push(Piece { m, env });
                }
                d => return Err(ModuliError::Unsupported(format!("lift of degree {}", d - 1))),
            }
        }
    }
    Ok(out)
}

/// An inequation that vanishes on (part of) a root set.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub reason: String,
    pub inequation: MultiPoly,
    /// Factor of the minimal polynomial on whose roots it vanishes.
    pub on: MultiPoly,
}

/// Evaluate each inequation at the roots of `m` in Q[x]/(m) and report those
/// vanishing somewhere.
pub fn check_degenerations(ineqs: &[Inequation], m: &UniPoly, env: &Env) -> Result<Vec<Violation>, ModuliError> {
    let mut out = vec![];
    for h in ineqs {
        let val = eval_mod(&h.poly, env, m)
            .ok_or_else(|| ModuliError::Unsupported(format!("inequation {} uses an unsolved parameter", h.poly)))?;
        let (z, _) = split(m, &val);
        if !z.is_constant() {
            out.push(Violation { reason: h.reason.clone(), inequation: h.poly.clone(), on: z.to_multi() });
        }
    }
    Ok(out)
}

/// Extend `env` with the substituted variables by back-substitution. Roots
/// where a denominator vanishes are split off and returned as the second
/// component.
pub fn back_substitute(subs: &[Substitution], piece: &Piece) -> Result<(Piece, UniPoly), ModuliError> {
    let mut m = piece.m.clone();
    let mut env = piece.env.clone();
    let mut dropped = UniPoly::from_ints(m.var, &[1]);
    for s in subs.iter().rev() {
        let den = eval_mod(&s.den, &env, &m).ok_or_else(|| ModuliError::NonInvertibleDenominator(s.den.to_string()))?;
        let (z, rest) = split(&m, &den);
        if !z.is_constant() {
            dropped = dropped.mul(&z);
            m = rest;
            if m.is_constant() {
                return Ok((Piece { m, env }, dropped));
            }
            env = restrict(&env, &m);
        }
        let den = eval_mod(&s.den, &env, &m).unwrap();
        let inv = inverse(&den, &m).ok_or_else(|| ModuliError::NonInvertibleDenominator(s.den.to_string()))?;
        let num = eval_mod(&s.num, &env, &m).ok_or_else(|| ModuliError::Unsupported("unsolved variable".into()))?;
        env[s.var] = Some(num.mul(&inv).rem(&m));
    }
    Ok((Piece { m, env }, dropped))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Empty,
    ZeroDim,
    PositiveDim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliReport {
    pub verdict: Verdict,
    pub dimension: Option<usize>,
    /// Squarefree eliminant of the surviving points (or of the point
    /// components of a positive-dimensional space).
    pub minpoly: Option<MultiPoly>,
    pub point_count: usize,
    pub real_count: usize,
    pub orbit_count: usize,
    pub irreducible: Option<Irreducibility>,
    pub zariski_flag: bool,
    /// More than one complex point, or a positive-dimensional space not
    /// shown irreducible: connectedness of the moduli space is not concluded.
    pub caveat: bool,
    /// Reduced system of the surviving branch(es).
    pub system: Vec<MultiPoly>,
    pub degeneracy_log: Vec<String>,
    pub log: Vec<String>,
    /// Surviving points with every coordinate in Q[x]/(m) (zero-dimensional case).
    #[serde(skip)]
    pub points: Vec<Piece>,
    /// Branches of top dimension.
    #[serde(skip)]
    pub branches: Vec<Triangular>,
}

impl ModuliReport {
    pub fn empty(reason: Vec<String>, log: Vec<String>) -> Self {
        ModuliReport {
            verdict: Verdict::Empty,
            dimension: None,
            minpoly: None,
            point_count: 0,
            real_count: 0,
            orbit_count: 0,
            irreducible: None,
            zariski_flag: false,
            caveat: false,
            system: vec![],
            degeneracy_log: reason,
            log,
            points: vec![],
            branches: vec![],
        }
    }
}

/// Outcome of one branch before merging.
#[derive(Clone, Debug)]
struct BranchOutcome {
    dim: Option<usize>,
    pieces: Vec<UniPoly>,
    points: Vec<Piece>,
    tri: Triangular,
    /// For a single hypersurface: its verdict.
    surface: Option<Irreducibility>,
    /// Conjugation orbits among components (hypersurface case).
    surface_orbits: usize,
    system: Vec<MultiPoly>,
}

/// Split off the roots of `m` on which a polynomial in the solved and free
/// variables vanishes identically in the free ones.
pub fn vanishing_part(h: &MultiPoly, env: &Env, m: &UniPoly) -> Option<UniPoly> {
    let solved: Vec<bool> = (0..NVARS).map(|v| env[v].is_some()).collect();
    let mut groups: std::collections::BTreeMap<Monomial, MultiPoly> = Default::default();
    for (mono, c) in h.terms() {
        let mut free = *mono;
        let mut bound = *mono;
        for v in 0..NVARS {
            if solved[v] {
                free.0[v] = 0;
            } else {
                bound.0[v] = 0;
            }
        }
        let e = groups.entry(free).or_insert_with(MultiPoly::zero);
        *e = &*e + &MultiPoly::monomial(bound, c.clone());
    }
    let mut z = m.clone();
    for coef in groups.values() {
        let val = eval_mod(coef, env, m)?;
        z = split(&z, &val).0;
        if z.is_constant() {
            break;
        }
    }
    Some(z)
}

fn classify_branch(tri: &Triangular, sys: &ConstraintSystem, degeneracy: &mut Vec<String>, log: &mut Vec<String>) -> Result<BranchOutcome, ModuliError> {
    let system = tri.system();
    let nfree = tri.free.len() + sys.free_dims;
    let none = BranchOutcome { dim: None, pieces: vec![], points: vec![], tri: tri.clone(), surface: None, surface_orbits: 0, system: system.clone() };
    if let Some(r) = &tri.empty {
        degeneracy.push(r.clone());
        return Ok(none);
    }
    let cs = &tri.constraints;
    if cs.is_empty() {
        return Ok(BranchOutcome { dim: Some(nfree), pieces: vec![], points: vec![], tri: tri.clone(), surface: Some(Irreducibility::Irreducible), surface_orbits: 1, system });
    }
    let cvars = vars_of(cs);
    if cs.len() == 1 && cvars.len() > 1 {
        let f = squarefree_multi(&cs[0]);
        if let Some(h) = tri.inequations.iter().find(|h| !h.poly.is_zero() && h.poly.div_exact(&f).is_some()) {
            degeneracy.push(format!("hypersurface {} lies in the degenerate locus: {}", f, h.reason));
            return Ok(none);
        }
        let mut verdict = Irreducibility::Unknown;
        let mut orbits = 0;
        let mut order: Vec<usize> = cvars.clone();
        order.sort_by_key(|&v| (f.degree_in(v), std::cmp::Reverse(v)));
        for v in order {
            match abs_irreducible_quadratic(&f, v) {
                QuadraticVerdict::Irreducible => {
                    verdict = Irreducibility::Irreducible;
                    orbits = 1;
                    break;
                }
                QuadraticVerdict::Reducible { real_split } => {
                    verdict = Irreducibility::Reducible;
                    orbits = if real_split { 2 } else { 1 };
                    log.push(format!("{} splits over {}", f, if real_split { "the reals" } else { "a non-real quadratic field" }));
                    break;
                }
                QuadraticVerdict::NotApplicable => {}
            }
        }
        return Ok(BranchOutcome { dim: Some(nfree - 1), pieces: vec![], points: vec![], tri: tri.clone(), surface: Some(verdict), surface_orbits: orbits, system });
    }
    let pieces = solve_points(cs, &cvars, log)?;
    let dim = nfree - cvars.len();
    let mut kept = vec![];
    let mut points = vec![];
    for piece in pieces {
        if dim == 0 {
            let (piece, dropped) = back_substitute(&tri.substitutions, &piece)?;
            if !dropped.is_constant() {
                degeneracy.push(format!("roots of {} removed: a solved coordinate has a vanishing denominator", dropped.to_multi()));
            }
            if piece.m.is_constant() {
                continue;
            }
            let mut m = piece.m.clone();
            for v in check_degenerations(&sys.inequations, &m, &piece.env)? {
                let (z, rest) = split(&m, &UniPoly::from_multi(&v.on, m.var).unwrap());
                if !z.is_constant() {
                    degeneracy.push(format!("roots of {} removed: {}", z.to_multi(), v.reason));
                    m = rest;
                }
                if m.is_constant() {
                    break;
                }
            }
            // branch-specific conditions (e.g. a solved-for coefficient)
            for h in tri.inequations.iter().filter(|h| h.reason.starts_with("branch")) {
                if m.is_constant() {
                    break;
                }
                if let Some(z) = vanishing_part(&h.poly, &restrict(&piece.env, &m), &m) {
                    if !z.is_constant() {
                        degeneracy.push(format!("roots of {} removed: {}", z.to_multi(), h.reason));
                        m = split(&m, &z).1;
                    }
                }
            }
            if !m.is_constant() {
                points.push(Piece { env: restrict(&piece.env, &m), m: m.clone() });
                kept.push(m);
            }
        } else {
            let mut m = piece.m.clone();
            for h in &tri.inequations {
                if m.is_constant() {
                    break;
                }
                let env = restrict(&piece.env, &m);
                if let Some(z) = vanishing_part(&h.poly, &env, &m) {
                    if !z.is_constant() {
                        degeneracy.push(format!("components over roots of {} removed: {}", z.to_multi(), h.reason));
                        m = split(&m, &z).1;
                    }
                }
            }
            if !m.is_constant() {
                kept.push(m);
            }
        }
    }
    if kept.is_empty() {
        return Ok(none);
    }
    Ok(BranchOutcome { dim: Some(dim), pieces: kept, points, tri: tri.clone(), surface: None, surface_orbits: 0, system })
}

/// Classify the moduli space described by `sys`.
pub fn classify(sys: &ConstraintSystem) -> Result<ModuliReport, ModuliError> {
    let branches = triangularize(sys, true)?;
    let mut degeneracy = vec![];
    let mut log = vec![];
    let mut outcomes = vec![];
    for b in &branches {
        log.extend(b.log.iter().cloned());
        outcomes.push(classify_branch(b, sys, &mut degeneracy, &mut log)?);
    }
    let Some(dim) = outcomes.iter().filter_map(|o| o.dim).max() else {
        return Ok(ModuliReport::empty(degeneracy, log));
    };
    let top: Vec<&BranchOutcome> = outcomes.iter().filter(|o| o.dim == Some(dim)).collect();
    if top.len() > 1 {
        log.push(format!("{} branches reach dimension {}; their components are counted together", top.len(), dim));
    }
    let mut system = vec![];
    for o in &top {
        system.extend(o.system.iter().cloned());
    }
    let system = sort_dedup(system);
    let pieces: Vec<&UniPoly> = top.iter().flat_map(|o| o.pieces.iter()).collect();
    let mut point_count = 0;
    let mut real_count = 0;
    for p in &pieces {
        point_count += p.degree();
        real_count += p.sturm_real_roots()?;
    }
    let complex = point_count - real_count;
    assert!(complex % 2 == 0, "non-real roots come in conjugate pairs");
    let mut orbit_count = real_count + complex / 2;
    let minpoly = if !pieces.is_empty() && pieces.iter().all(|p| p.var == pieces[0].var) {
        let mut prod = UniPoly::from_ints(pieces[0].var, &[1]);
        for p in &pieces {
            prod = prod.mul(p);
        }
        Some(prod.primitive().to_multi())
    } else {
        None
    };
    let (verdict, irreducible) = if dim == 0 {
        (Verdict::ZeroDim, None)
    } else {
        let surfaces: Vec<&BranchOutcome> = top.iter().copied().filter(|o| o.surface.is_some()).collect();
        orbit_count += surfaces.iter().map(|o| o.surface_orbits).sum::<usize>();
        let ncomp = point_count + surfaces.len();
        let irr = if surfaces.iter().any(|o| o.surface == Some(Irreducibility::Unknown)) {
            Irreducibility::Unknown
        } else if ncomp == 1 && surfaces.iter().all(|o| o.surface == Some(Irreducibility::Irreducible)) {
            Irreducibility::Irreducible
        } else {
            Irreducibility::Reducible
        };
        (Verdict::PositiveDim, Some(irr))
    };
    let zariski_flag = orbit_count >= 2;
    let caveat = match irreducible {
        None => point_count > 1,
        Some(i) => i != Irreducibility::Irreducible,
    };
    Ok(ModuliReport {
        verdict,
        dimension: (dim > 0).then_some(dim),
        minpoly,
        point_count,
        real_count,
        orbit_count,
        irreducible,
        zariski_flag,
        caveat,
        system,
        degeneracy_log: degeneracy,
        log,
        points: top.iter().flat_map(|o| o.points.iter().cloned()).collect(),
        branches: top.iter().map(|o| o.tri.clone()).collect(),
    })
}
