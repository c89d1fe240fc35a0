//! Isomorph-free generation of configuration tables by canonical
//! augmentation: lines are added one at a time in nonincreasing size, and a
//! child is kept only when the added line lies in the automorphism orbit of
//! the child's canonical deletion line.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::incidence::canon::canon_bipartite;
use crate::incidence::{canonical_form, canonical_table, census_solutions, validate, CanonicalForm, ConfigTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("no line census exists for {k} lines and {n3} triple points")]
    InfeasibleCensus { k: usize, n3: usize },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("enumeration/registry mismatch: unmatched classes {unmatched_classes:?}, unmatched names {unmatched_names:?}")]
    CountMismatch { unmatched_classes: Vec<String>, unmatched_names: Vec<String> },
}

#[derive(Clone, Debug)]
pub struct EnumOptions {
    /// Every line carries exactly three triples.
    pub exact_three: bool,
    /// Apply the static line-count filters.
    pub filters: bool,
    /// Permute candidate order (for order-independence checks).
    pub shuffle_seed: Option<u64>,
    pub parallel: bool,
    /// Decide orbit membership by marked re-canonization instead of the
    /// automorphism generators.
    pub marked_orbit_test: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { exact_three: false, filters: true, shuffle_seed: None, parallel: true, marked_orbit_test: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumClass {
    pub form: CanonicalForm,
    #[serde(skip)]
    pub table: ConfigTable,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumResult {
    pub k: usize,
    pub n3: usize,
    /// Line-size profiles searched, as size -> count.
    pub profiles: Vec<BTreeMap<usize, usize>>,
    /// Lines were allowed fewer than three triples because no profile with
    /// three or four triples per line exists.
    pub relaxed: bool,
    /// Partial structures accepted, summed over levels.
    pub nodes: usize,
    pub classes: Vec<EnumClass>,
}

#[derive(Clone)]
struct Node {
    lines: Vec<u128>,
    deg: Vec<u8>,
}

impl Node {
    fn npts(&self) -> usize {
        self.deg.len()
    }

    /// Canonical labeling of the partial structure. Points on a single line
    /// are interchangeable, so they are dropped and counted in the line color.
    fn canon(&self, marked: Option<usize>) -> (Vec<u8>, Vec<usize>, Vec<Vec<usize>>) {
        let kept: Vec<usize> = (0..self.npts()).filter(|&p| self.deg[p] >= 2).collect();
        let mut remap = vec![usize::MAX; self.npts()];
        for (i, &p) in kept.iter().enumerate() {
            remap[p] = i;
        }
        let mut masks = vec![0u128; self.lines.len()];
        let mut colors = vec![0u32; self.lines.len()];
        for (i, &l) in self.lines.iter().enumerate() {
            let mut m = l;
            let mut pend = 0;
            while m != 0 {
                let p = m.trailing_zeros() as usize;
                m &= m - 1;
                if remap[p] == usize::MAX {
                    pend += 1;
                } else {
                    masks[i] |= 1u128 << remap[p];
                }
            }
            // marked line sorts first; pendant count distinguishes the rest
            colors[i] = 1 + pend;
            if Some(i) == marked {
                colors[i] = 0;
            }
        }
        let pcolors: Vec<u32> = kept.iter().map(|&p| self.deg[p] as u32).collect();
        let c = canon_bipartite(kept.len(), &masks, &colors, &pcolors);
        let mut key = Vec::with_capacity(2 + 2 * self.lines.len() + 16 * c.cert.len());
        key.push(self.lines.len() as u8);
        key.push(kept.len() as u8);
        for &l in &c.line_order {
            key.push(colors[l] as u8);
        }
        for &p in &c.point_order {
            key.push(pcolors[p] as u8);
        }
        for row in &c.cert {
            key.extend_from_slice(&row.to_le_bytes());
        }
        let nl = self.lines.len();
        let gens = c.generators.into_iter().map(|g| g[..nl].to_vec()).collect();
        (key, c.line_order, gens)
    }

    fn to_table(&self) -> ConfigTable {
        let lines = self
            .lines
            .iter()
            .map(|&m| (0..self.npts()).filter(|&p| m >> p & 1 == 1).collect())
            .collect();
        ConfigTable::from_lines(lines, self.npts())
    }
}

struct Ctx {
    k: usize,
    n3: usize,
    sizes: Vec<usize>,
    opts: EnumOptions,
}

fn line_orbit(gens: &[Vec<usize>], n: usize, a: usize) -> HashSet<usize> {
    let mut seen: HashSet<usize> = HashSet::new();
    seen.insert(a);
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        for g in gens {
            if seen.insert(g[x]) {
                stack.push(g[x]);
            }
        }
    }
    debug_assert!(seen.iter().all(|&x| x < n));
    seen
}

fn shuffled_key(seed: u64, v: u128) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    seed.hash(&mut h);
    v.hash(&mut h);
    h.finish()
}

impl Ctx {
    /// Subsets of `open` of size `j`, pairwise not on a common line.
    fn independent_sets(open: &[usize], coll: &[u128], j: usize) -> Vec<u128> {
        let mut out = vec![];
        fn rec(open: &[usize], coll: &[u128], j: usize, start: usize, cur: u128, forbidden: u128, out: &mut Vec<u128>) {
            if j == 0 {
                out.push(cur);
                return;
            }
            for idx in start..open.len() {
                if open.len() - idx < j {
                    break;
                }
                let p = open[idx];
                if forbidden >> p & 1 == 1 {
                    continue;
                }
                rec(open, coll, j - 1, idx + 1, cur | 1u128 << p, forbidden | coll[p], out);
            }
        }
        rec(open, coll, j, 0, 0, 0, &mut out);
        out
    }

    fn feasible(&self, node: &Node) -> bool {
        let m = node.lines.len();
        let remaining = self.k - m;
        if node.npts() > self.n3 {
            return false;
        }
        if node.deg.iter().any(|&d| (3 - d as usize) > remaining) {
            return false;
        }
        if node.npts() < self.n3 && remaining < 3 {
            return false;
        }
        // open points must be reachable by the lines still to come
        let open = node.deg.iter().filter(|&&d| d < 3).count();
        let need: usize = node.deg.iter().map(|&d| 3 - d as usize).sum::<usize>() + 3 * (self.n3 - node.npts());
        let have: usize = self.sizes[m..].iter().sum();
        need == have && (open == 0 || remaining > 0)
    }

    fn passes_filters(&self, node: &Node) -> bool {
        if !self.opts.filters {
            return true;
        }
        let k = self.k;
        // two triples need five lines
        if self.n3 >= 2 && k < 5 {
            return false;
        }
        for &l in &node.lines {
            let s = l.count_ones() as usize;
            // each of its s triples carries two further lines, all distinct
            if k < 2 * s + 1 {
                return false;
            }
        }
        // three non-collinear triples need six lines
        if k < 6 && node.npts() >= 3 {
            let all: u128 = node.lines.iter().fold(0, |a, &b| a | b);
            let collinear_all = node.lines.iter().any(|&l| l == all);
            if !collinear_all {
                return false;
            }
        }
        true
    }

    fn children(&self, node: &Node) -> Vec<Node> {
        let m = node.lines.len();
        let s = self.sizes[m];
        let npts = node.npts();
        let mut coll = vec![0u128; npts];
        for &l in &node.lines {
            let mut mm = l;
            while mm != 0 {
                let p = mm.trailing_zeros() as usize;
                mm &= mm - 1;
                coll[p] |= l;
            }
        }
        let open: Vec<usize> = (0..npts).filter(|&p| node.deg[p] < 3).collect();
        let max_new = self.n3 - npts;
        let jmin = s.saturating_sub(max_new);
        let mut cands: Vec<u128> = vec![];
        for j in jmin..=s.min(open.len()) {
            let q = s - j;
            for set in Self::independent_sets(&open, &coll, j) {
                let mut line = set;
                for t in 0..q {
                    line |= 1u128 << (npts + t);
                }
                cands.push(line);
            }
        }
        if let Some(seed) = self.opts.shuffle_seed {
            cands.sort_by_key(|&c| shuffled_key(seed, c));
        }
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut out = vec![];
        for line in cands {
            let mut child = node.clone();
            let new_pts = (line >> npts).count_ones() as usize;
            child.deg.extend(std::iter::repeat(0).take(new_pts));
            let mut mm = line;
            while mm != 0 {
                let p = mm.trailing_zeros() as usize;
                mm &= mm - 1;
                child.deg[p] += 1;
            }
            child.lines.push(line);
            if !self.feasible(&child) || !self.passes_filters(&child) {
                continue;
            }
            let (key, order, gens) = child.canon(None);
            if !self.is_canonical_extension(&child, &order, &gens) {
                continue;
            }
            if seen.insert(key) {
                out.push(child);
            }
        }
        out
    }

    /// The new line (last) must be equivalent to the canonical deletion line:
    /// the smallest-size line occupying the latest canonical position.
    fn is_canonical_extension(&self, child: &Node, order: &[usize], gens: &[Vec<usize>]) -> bool {
        let m = child.lines.len();
        let last = m - 1;
        let smin = child.lines[last].count_ones();
        let cstar = *order
            .iter()
            .rev()
            .find(|&&l| child.lines[l].count_ones() == smin)
            .expect("the new line has minimal size");
        if cstar == last {
            return true;
        }
        if self.opts.marked_orbit_test {
            return child.canon(Some(cstar)).0 == child.canon(Some(last)).0;
        }
        line_orbit(gens, m, cstar).contains(&last)
    }
}

/// Line-size sequences (nonincreasing) to search, and whether lines were
/// allowed to carry fewer than three triples.
pub fn size_profiles(k: usize, n3: usize, exact_three: bool) -> (Vec<BTreeMap<usize, usize>>, bool) {
    let max = k.saturating_sub(1) / 2;
    if exact_three {
        let p: Vec<_> = census_solutions(k, n3, 3..=3);
        return (p, false);
    }
    let strict = census_solutions(k, n3, 3..=max.max(3));
    if !strict.is_empty() {
        return (strict, false);
    }
    (census_solutions(k, n3, 0..=max), true)
}

pub fn enumerate(k: usize, n3: usize, opts: &EnumOptions) -> Result<EnumResult, EnumError> {
    if k > 16 || n3 > 100 || k + n3 > 120 {
        return Err(EnumError::TooLarge(format!("{} lines, {} triples", k, n3)));
    }
    let (profiles, relaxed) = size_profiles(k, n3, opts.exact_three);
    if profiles.is_empty() {
        return Err(EnumError::InfeasibleCensus { k, n3 });
    }
    let mut classes: BTreeMap<CanonicalForm, ConfigTable> = BTreeMap::new();
    let mut nodes = 0;
    for prof in &profiles {
        let mut sizes: Vec<usize> = prof.iter().flat_map(|(&s, &c)| std::iter::repeat(s).take(c)).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let ctx = Ctx { k, n3, sizes, opts: opts.clone() };
        if opts.filters && ctx.sizes.iter().any(|&s| k < 2 * s + 1) {
            continue;
        }
        let mut level = vec![Node { lines: vec![], deg: vec![] }];
        for _ in 0..k {
            level = if opts.parallel {
                level.par_iter().flat_map_iter(|n| ctx.children(n)).collect()
            } else {
                level.iter().flat_map(|n| ctx.children(n)).collect()
            };
            nodes += level.len();
        }
        for node in level {
            let t = node.to_table();
            debug_assert!(validate(&t).is_ok());
            let form = canonical_form(&t);
            let prev = classes.insert(form, canonical_table(&t));
            debug_assert!(prev.is_none(), "canonical augmentation produced a duplicate");
        }
    }
    let classes = classes.into_iter().map(|(form, table)| EnumClass { form, table }).collect();
    Ok(EnumResult { k, n3, profiles, relaxed, nodes, classes })
}

/// Outcome of pairing enumerated classes with named tables.
#[derive(Clone, Debug, Serialize)]
pub struct RegistryMatch {
    pub by_name: BTreeMap<String, CanonicalForm>,
    /// Groups of names whose tables are isomorphic to each other.
    pub aliases: Vec<Vec<String>>,
}

/// Pair enumerated classes with named tables by canonical form. Several names
/// may land on one class (reported as aliases); every class must be named and
/// every name must hit a class.
pub fn match_registry(classes: &[EnumClass], named: &[(String, ConfigTable)]) -> Result<RegistryMatch, EnumError> {
    let index: HashMap<&CanonicalForm, usize> = classes.iter().enumerate().map(|(i, c)| (&c.form, i)).collect();
    let mut hits: Vec<Vec<String>> = vec![vec![]; classes.len()];
    let mut by_name = BTreeMap::new();
    let mut unmatched_names = vec![];
    for (name, t) in named {
        let f = canonical_form(t);
        match index.get(&f) {
            Some(&i) => {
                hits[i].push(name.clone());
                by_name.insert(name.clone(), f);
            }
            None => unmatched_names.push(name.clone()),
        }
    }
    let unmatched_classes: Vec<String> =
        classes.iter().zip(&hits).filter(|(_, h)| h.is_empty()).map(|(c, _)| c.form.hex()).collect();
    if !unmatched_names.is_empty() || !unmatched_classes.is_empty() {
        return Err(EnumError::CountMismatch { unmatched_classes, unmatched_names });
    }
    let mut aliases: Vec<Vec<String>> = hits.into_iter().filter(|h| h.len() > 1).collect();
    for a in aliases.iter_mut() {
        a.sort();
    }
    aliases.sort();
    Ok(RegistryMatch { by_name, aliases })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(k: usize, n3: usize, exact: bool) -> usize {
        let opts = EnumOptions { exact_three: exact, ..Default::default() };
        enumerate(k, n3, &opts).unwrap().classes.len()
    }

    #[test]
    fn six_lines() {
        assert_eq!(count(6, 3, false), 1);
        assert_eq!(count(6, 4, false), 1);
    }

    #[test]
    fn nine_lines() {
        assert_eq!(count(9, 9, true), 3);
        assert_eq!(count(9, 10, false), 3);
    }

    #[test]
    fn infeasible() {
        assert!(matches!(enumerate(10, 14, &EnumOptions::default()), Err(EnumError::InfeasibleCensus { .. })));
    }
}
