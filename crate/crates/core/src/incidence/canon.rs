//! Canonical labeling of bipartite line/point incidence graphs by equitable
//! refinement and individualization, with automorphism pruning.

use std::collections::VecDeque;

use serde::Serialize;

use super::table::ConfigTable;

/// Canonical serialization of a table up to relabeling of lines and points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn hex(&self) -> String {
        hex::encode(&self.bytes)
    }

    /// SHA-256 of the canonical bytes, hex encoded.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(&self.bytes))
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.hex())
    }
}

/// A lattice automorphism: `lines[i]` is the image of line `i`, `points[p]`
/// the image of point `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Automorphism {
    pub lines: Vec<usize>,
    pub points: Vec<usize>,
}

/// Result of a canonical labeling run.
#[derive(Clone, Debug)]
pub struct Canon {
    /// Rows of the canonical incidence matrix: for each canonical line, its
    /// points as a bitmask in canonical point order.
    pub cert: Vec<u128>,
    /// `line_order[i]` is the original line placed at canonical position `i`.
    pub line_order: Vec<usize>,
    pub point_order: Vec<usize>,
    /// Generators of the automorphism group, as vertex permutations
    /// (lines first, then points).
    pub generators: Vec<Vec<usize>>,
}

#[derive(Clone)]
struct Partition {
    lab: Vec<usize>,
    pos: Vec<usize>,
    /// For a position that starts a cell, the exclusive end of that cell.
    cell_end: Vec<usize>,
    /// Vertex -> start position of its cell.
    cell_of: Vec<usize>,
}

impl Partition {
    fn from_cells(n: usize, cells: &[Vec<usize>]) -> Partition {
        let mut lab = Vec::with_capacity(n);
        let mut cell_end = vec![0; n];
        let mut cell_of = vec![0; n];
        for c in cells.iter().filter(|c| !c.is_empty()) {
            let start = lab.len();
            for &v in c {
                cell_of[v] = start;
                lab.push(v);
            }
            cell_end[start] = lab.len();
        }
        let mut pos = vec![0; n];
        for (i, &v) in lab.iter().enumerate() {
            pos[v] = i;
        }
        Partition { lab, pos, cell_end, cell_of }
    }

    fn is_discrete(&self) -> bool {
        let n = self.lab.len();
        let mut i = 0;
        while i < n {
            if self.cell_end[i] - i > 1 {
                return false;
            }
            i = self.cell_end[i];
        }
        true
    }

    fn starts(&self) -> Vec<usize> {
        let mut out = vec![];
        let mut i = 0;
        while i < self.lab.len() {
            out.push(i);
            i = self.cell_end[i];
        }
        out
    }

    fn cell_mask(&self, start: usize) -> u128 {
        self.lab[start..self.cell_end[start]].iter().fold(0u128, |m, &v| m | (1u128 << v))
    }

    /// Refine to the coarsest equitable partition finer than the current one.
    fn refine(&mut self, adj: &[u128], initial: &[usize]) {
        let n = self.lab.len();
        let mut queue: VecDeque<usize> = initial.iter().copied().collect();
        let mut queued = vec![false; n];
        for &s in initial {
            queued[s] = true;
        }
        let mut counts = vec![0u32; n];
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            let wmask = self.cell_mask(w);
            let mut i = 0;
            while i < n {
                let end = self.cell_end[i];
                if end - i > 1 {
                    let mut same = true;
                    let c0 = (adj[self.lab[i]] & wmask).count_ones();
                    for j in i..end {
                        let v = self.lab[j];
                        counts[v] = (adj[v] & wmask).count_ones();
                        if counts[v] != c0 {
                            same = false;
                        }
                    }
                    if !same {
                        let cell = &mut self.lab[i..end];
                        cell.sort_by_key(|&v| (counts[v], v));
                        let mut start = i;
                        for j in i..=end {
                            if j == end || (j > start && counts[self.lab[j]] != counts[self.lab[start]]) {
                                self.cell_end[start] = j;
                                for t in start..j {
                                    let v = self.lab[t];
                                    self.cell_of[v] = start;
                                    self.pos[v] = t;
                                }
                                if !queued[start] {
                                    queued[start] = true;
                                    queue.push_back(start);
                                }
                                start = j;
                            }
                        }
                    }
                }
                i = end;
            }
        }
    }

    fn individualize(&mut self, v: usize) -> usize {
        let start = self.cell_of[v];
        let end = self.cell_end[start];
        let p = self.pos[v];
        let u = self.lab[start];
        self.lab.swap(start, p);
        self.pos[u] = p;
        self.pos[v] = start;
        self.cell_end[start] = start + 1;
        self.cell_end[start + 1] = end;
        for t in start + 1..end {
            self.cell_of[self.lab[t]] = start + 1;
        }
        start
    }
}

struct Search<'a> {
    adj: &'a [u128],
    nl: usize,
    first: Option<(Vec<u128>, Vec<usize>)>,
    best: Option<(Vec<u128>, Vec<usize>)>,
    gens: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn certificate(&self, p: &Partition) -> Vec<u128> {
        (0..self.nl)
            .map(|i| {
                let mut row = 0u128;
                let mut m = self.adj[p.lab[i]];
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    m &= m - 1;
                    row |= 1u128 << (p.pos[v] - self.nl);
                }
                row
            })
            .collect()
    }

    fn perm_between(from: &[usize], to: &[usize]) -> Vec<usize> {
        let mut g = vec![0; from.len()];
        for (i, &v) in from.iter().enumerate() {
            g[v] = to[i];
        }
        g
    }

    fn leaf(&mut self, p: &Partition) {
        let cert = self.certificate(p);
        match &self.first {
            None => {
                self.first = Some((cert.clone(), p.lab.clone()));
                self.best = Some((cert, p.lab.clone()));
            }
            Some((fc, fl)) => {
                if *fc == cert {
                    let g = Self::perm_between(fl, &p.lab);
                    self.gens.push(g);
                    return;
                }
                let (bc, bl) = self.best.as_ref().unwrap();
                if *bc == cert {
                    let g = Self::perm_between(bl, &p.lab);
                    self.gens.push(g);
                } else if cert > *bc {
                    self.best = Some((cert, p.lab.clone()));
                }
            }
        }
    }

    /// Orbit representative of each vertex under generators fixing `prefix`.
    fn orbits(&self, n: usize, prefix: &[usize]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for g in &self.gens {
            if prefix.iter().all(|&v| g[v] == v) {
                for v in 0..n {
                    let a = find(&mut parent, v);
                    let b = find(&mut parent, g[v]);
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }

    fn run(&mut self, p: Partition, prefix: &mut Vec<usize>) {
        if p.is_discrete() {
            self.leaf(&p);
            return;
        }
        let starts = p.starts();
        let target = starts
            .iter()
            .copied()
            .filter(|&s| p.cell_end[s] - s > 1)
            .min_by_key(|&s| (p.cell_end[s] - s, s))
            .unwrap();
        let mut cands: Vec<usize> = p.lab[target..p.cell_end[target]].to_vec();
        cands.sort_unstable();
        let mut explored: Vec<usize> = vec![];
        for v in cands {
            if !explored.is_empty() {
                let orb = self.orbits(p.lab.len(), prefix);
                if explored.iter().any(|&u| orb[u] == orb[v]) {
                    continue;
                }
            }
            let mut child = p.clone();
            let s = child.individualize(v);
            child.refine(self.adj, &[s]);
            prefix.push(v);
            self.run(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }
}

/// Canonically label a bipartite graph given by line bitmasks over points.
/// Lines and points are never exchanged; `line_colors` and `point_colors`
/// give vertex invariants that must be preserved (smaller colors first).
pub fn canon_bipartite(np: usize, line_pts: &[u128], line_colors: &[u32], point_colors: &[u32]) -> Canon {
    let nl = line_pts.len();
    let n = nl + np;
    assert!(n <= 128, "canonical labeling supports at most 128 vertices");
    let mut adj = vec![0u128; n];
    for (i, &m) in line_pts.iter().enumerate() {
        adj[i] = m << nl;
        let mut mm = m;
        while mm != 0 {
            let p = mm.trailing_zeros() as usize;
            mm &= mm - 1;
            adj[nl + p] |= 1u128 << i;
        }
    }
    let mut cells: Vec<Vec<usize>> = vec![];
    let mut lc: Vec<u32> = line_colors.to_vec();
    lc.sort_unstable();
    lc.dedup();
    for c in lc {
        cells.push((0..nl).filter(|&i| line_colors[i] == c).collect());
    }
    let mut pc: Vec<u32> = point_colors.to_vec();
    pc.sort_unstable();
    pc.dedup();
    for c in pc {
        cells.push((0..np).filter(|&p| point_colors[p] == c).map(|p| nl + p).collect());
    }
    let mut part = Partition::from_cells(n, &cells);
    let starts = part.starts();
    part.refine(&adj, &starts);
    let mut s = Search { adj: &adj, nl, first: None, best: None, gens: vec![] };
    if n == 0 {
        return Canon { cert: vec![], line_order: vec![], point_order: vec![], generators: vec![] };
    }
    s.run(part, &mut vec![]);
    let (cert, lab) = s.best.take().unwrap();
    Canon {
        cert,
        line_order: lab[..nl].to_vec(),
        point_order: lab[nl..].iter().map(|v| v - nl).collect(),
        generators: s.gens,
    }
}

fn encode(k: usize, n3: usize, cert: &[u128]) -> Vec<u8> {
    let width = (n3 + 7) / 8;
    let mut bytes = Vec::with_capacity(4 + k * width);
    bytes.extend_from_slice(&(k as u16).to_be_bytes());
    bytes.extend_from_slice(&(n3 as u16).to_be_bytes());
    for row in cert {
        bytes.extend_from_slice(&row.to_be_bytes()[16 - width..]);
    }
    bytes
}

pub fn canonize(t: &ConfigTable) -> Canon {
    canon_bipartite(t.n3(), &t.line_masks(), &vec![0; t.k()], &vec![0; t.n3()])
}

pub fn canonical_form(t: &ConfigTable) -> CanonicalForm {
    let c = canonize(t);
    CanonicalForm { bytes: encode(t.k(), t.n3(), &c.cert) }
}

/// Table relabeled into canonical order.
pub fn canonical_table(t: &ConfigTable) -> ConfigTable {
    let c = canonize(t);
    table_from_canon(t, &c)
}

pub fn table_from_canon(t: &ConfigTable, c: &Canon) -> ConfigTable {
    let mut line_perm = vec![0; t.k()];
    for (i, &l) in c.line_order.iter().enumerate() {
        line_perm[l] = i;
    }
    let mut point_perm = vec![0; t.n3()];
    for (i, &p) in c.point_order.iter().enumerate() {
        point_perm[p] = i;
    }
    t.relabel(&line_perm, &point_perm)
}

/// Generators of the automorphism group of the table.
pub fn automorphisms(t: &ConfigTable) -> Vec<Automorphism> {
    let k = t.k();
    canonize(t)
        .generators
        .into_iter()
        .map(|g| Automorphism {
            lines: g[..k].to_vec(),
            points: g[k..].iter().map(|v| v - k).collect(),
        })
        .collect()
}

/// Order of the group generated by permutations on `n` points (orbit-
/// stabilizer via Schreier-Sims is overkill at this size: plain closure).
pub fn group_order(gens: &[Vec<usize>], n: usize) -> usize {
    use std::collections::HashSet;
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for h in gens {
            let gh: Vec<usize> = (0..n).map(|i| h[g[i]]).collect();
            if seen.insert(gh.clone()) {
                frontier.push(gh);
            }
        }
    }
    seen.len()
}
