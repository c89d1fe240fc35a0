use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use super::TableError;

/// Lines-by-triple-points incidence table. Point labels are interned to
/// dense indices in natural label order (`e2` before `e10`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigTable {
    lines: Vec<Vec<usize>>,
    labels: Vec<String>,
}

/// Sort key putting `e<number>` labels first in numeric order.
fn natural_key(s: &str) -> (u8, u64, String) {
    if let Some(rest) = s.strip_prefix('e') {
        if let Ok(n) = rest.parse::<u64>() {
            return (0, n, String::new());
        }
    }
    (1, 0, s.to_string())
}

impl ConfigTable {
    /// Table from point-index lists with labels `e1..e_n`.
    pub fn from_lines(lines: Vec<Vec<usize>>, n3: usize) -> Self {
        let labels = (1..=n3).map(|i| format!("e{}", i)).collect();
        let mut lines = lines;
        for l in lines.iter_mut() {
            l.sort_unstable();
        }
        ConfigTable { lines, labels }
    }

    pub fn k(&self) -> usize {
        self.lines.len()
    }

    pub fn n3(&self) -> usize {
        self.labels.len()
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &[usize] {
        &self.lines[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Lines through each point, ascending.
    pub fn point_lines(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]; self.n3()];
        for (i, l) in self.lines.iter().enumerate() {
            for &p in l {
                out[p].push(i);
            }
        }
        out
    }

    pub fn incident(&self, line: usize, point: usize) -> bool {
        self.lines[line].binary_search(&point).is_ok()
    }

    /// Common point of two lines, if the table lists one.
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        self.lines[i].iter().copied().find(|p| self.incident(j, *p))
    }

    /// Line bitmasks over points.
    pub fn line_masks(&self) -> Vec<u128> {
        self.lines
            .iter()
            .map(|l| l.iter().fold(0u128, |m, &p| m | (1u128 << p)))
            .collect()
    }

    pub fn parse(text: &str) -> Result<ConfigTable, TableError> {
        let perr = |line: usize, col: usize, msg: &str| TableError::Parse { line, col, msg: msg.to_string() };
        let mut header: Option<(usize, usize)> = None;
        let mut rows: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let col0 = body.len() - body.trim_start().len() + 1;
            let body = body.trim();
            if header.is_none() {
                let toks: Vec<&str> = body.split_whitespace().collect();
                if toks.len() != 4 || toks[0] != "lines:" || toks[2] != "triples:" {
                    return Err(perr(ln, col0, "expected header `lines: <k> triples: <n3>`"));
                }
                let k = toks[1].parse().map_err(|_| perr(ln, col0 + 7, "bad line count"))?;
                let n3 = toks[3].parse().map_err(|_| perr(ln, col0, "bad triple count"))?;
                header = Some((k, n3));
                continue;
            }
            let (name, rest) = body
                .split_once(':')
                .ok_or_else(|| perr(ln, col0, "expected `L<i>: <labels>`"))?;
            let idx: usize = name
                .trim()
                .strip_prefix('L')
                .and_then(|s| s.parse().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| perr(ln, col0, "expected line name `L<i>`"))?;
            if rows.contains_key(&idx) {
                return Err(perr(ln, col0, "line listed twice"));
            }
            let mut labels: Vec<String> = vec![];
            for tok in rest.split_whitespace() {
                if !tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    let col = col0 + body.find(tok).unwrap_or(0);
                    return Err(perr(ln, col, "bad point label"));
                }
                if labels.iter().any(|l| l == tok) {
                    return Err(TableError::DuplicateIncidence { line: idx, label: tok.to_string() });
                }
                labels.push(tok.to_string());
            }
            rows.insert(idx, labels);
        }
        let (k, n3) = header.ok_or_else(|| perr(1, 1, "empty table"))?;
        if rows.len() != k || rows.keys().copied().ne(1..=k) {
            return Err(perr(1, 1, &format!("expected rows L1..L{}", k)));
        }
        let mut all: Vec<String> = rows.values().flatten().cloned().collect();
        all.sort_by_key(|s| natural_key(s));
        all.dedup();
        if all.len() != n3 {
            return Err(TableError::CensusMismatch(format!(
                "header declares {} triples, table lists {}",
                n3,
                all.len()
            )));
        }
        let index: HashMap<&str, usize> = all.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let lines = rows
            .values()
            .map(|ls| {
                let mut v: Vec<usize> = ls.iter().map(|s| index[s.as_str()]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        Ok(ConfigTable { lines, labels: all })
    }

    /// Text form with dense labels e1..e_n3.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "lines: {} triples: {}", self.k(), self.n3()).unwrap();
        for (i, l) in self.lines.iter().enumerate() {
            let pts: Vec<String> = l.iter().map(|p| format!("e{}", p + 1)).collect();
            writeln!(s, "L{}: {}", i + 1, pts.join(" ")).unwrap();
        }
        s
    }

    /// Apply permutations: line `i` becomes line `line_perm[i]`, point `p`
    /// becomes point `point_perm[p]`.
    pub fn relabel(&self, line_perm: &[usize], point_perm: &[usize]) -> ConfigTable {
        let mut lines = vec![vec![]; self.k()];
        for (i, l) in self.lines.iter().enumerate() {
            let mut v: Vec<usize> = l.iter().map(|&p| point_perm[p]).collect();
            v.sort_unstable();
            lines[line_perm[i]] = v;
        }
        ConfigTable::from_lines(lines, self.n3())
    }
}

/// Number of lines carrying each count of triples, with the implied doubles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineCensus {
    pub k: usize,
    pub n3: usize,
    pub n2: usize,
    /// triples-per-line -> number of lines
    pub ell: BTreeMap<usize, usize>,
}

impl LineCensus {
    pub fn ell(&self, i: usize) -> usize {
        self.ell.get(&i).copied().unwrap_or(0)
    }
}

/// Check the table against the double/triple-point constraints.
pub fn validate(t: &ConfigTable) -> Result<LineCensus, TableError> {
    let k = t.k();
    let n3 = t.n3();
    for (p, ls) in t.point_lines().iter().enumerate() {
        if ls.len() != 3 {
            return Err(TableError::NotTriplePoint(t.label(p).to_string()));
        }
    }
    let masks = t.line_masks();
    for i in 0..k {
        for j in i + 1..k {
            if (masks[i] & masks[j]).count_ones() > 1 {
                return Err(TableError::RepeatedPair(i + 1, j + 1));
            }
        }
    }
    let mut ell = BTreeMap::new();
    for l in t.lines() {
        *ell.entry(l.len()).or_insert(0) += 1;
    }
    let total: usize = ell.values().sum();
    let incid: usize = ell.iter().map(|(i, c)| i * c).sum();
    if total != k || incid != 3 * n3 {
        return Err(TableError::CensusMismatch(format!("line sums {} / incidences {}", total, incid)));
    }
    let pairs = k * k.saturating_sub(1) / 2;
    if 3 * n3 > pairs {
        return Err(TableError::CensusMismatch(format!(
            "{} triples need {} line pairs, only {} exist",
            n3,
            3 * n3,
            pairs
        )));
    }
    Ok(LineCensus { k, n3, n2: pairs - 3 * n3, ell })
}

/// Inequality for line arrangements with no point of multiplicity close to k:
/// n2 + 3/4 n3 >= k.
pub fn hirzebruch_feasible(k: usize, n2: usize, n3: usize) -> bool {
    4 * n2 + 3 * n3 >= 4 * k
}

/// All line-size multisets (size -> count) with sizes in `sizes`, `k` lines
/// and `n3` triple points.
pub fn census_solutions(k: usize, n3: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<BTreeMap<usize, usize>> {
    let sizes: Vec<usize> = sizes.rev().collect();
    let mut out = vec![];
    let mut cur = BTreeMap::new();
    fn rec(
        sizes: &[usize],
        lines_left: usize,
        inc_left: usize,
        cur: &mut BTreeMap<usize, usize>,
        out: &mut Vec<BTreeMap<usize, usize>>,
    ) {
        if sizes.is_empty() {
            if lines_left == 0 && inc_left == 0 {
                out.push(cur.iter().filter(|(_, &c)| c > 0).map(|(&s, &c)| (s, c)).collect());
            }
            return;
        }
        let s = sizes[0];
        let max = if s == 0 { lines_left } else { lines_left.min(inc_left / s) };
        for c in (0..=max).rev() {
            cur.insert(s, c);
            rec(&sizes[1..], lines_left - c, inc_left - c * s, cur, out);
        }
        cur.remove(&s);
    }
    rec(&sizes, k, 3 * n3, &mut cur, &mut out);
    out
}

/// (l3, l4) for k lines whose every line carries three or four triples.
pub fn line_census(k: usize, n3: usize) -> Option<(usize, usize)> {
    let sols = census_solutions(k, n3, 3..=4);
    match sols.as_slice() {
        [one] => Some((one.get(&3).copied().unwrap_or(0), one.get(&4).copied().unwrap_or(0))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NINE_I: &str = "# nine lines\nlines: 9 triples: 9\nL1: e1 e2 e3\nL2: e1 e4 e5\nL3: e1 e6 e7\nL4: e2 e4 e8\nL5: e2 e6 e9\nL6: e3 e5 e9\nL7: e3 e7 e8\nL8: e4 e7 e9\nL9: e5 e6 e8\n";

    #[test]
    fn parse_and_round_trip() {
        let t = ConfigTable::parse(NINE_I).unwrap();
        assert_eq!(t.k(), 9);
        assert!(t.lines().iter().all(|l| l.len() == 3));
        assert_eq!(ConfigTable::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(ConfigTable::parse(""), Err(TableError::Parse { .. })));
        let dup = "lines: 1 triples: 1\nL1: e1 e1\n";
        assert!(matches!(ConfigTable::parse(dup), Err(TableError::DuplicateIncidence { .. })));
    }

    #[test]
    fn validate_rejects_bad_tables() {
        let two = "lines: 3 triples: 1\nL1: e1\nL2: e1\nL3:\n";
        assert!(matches!(validate(&ConfigTable::parse(two).unwrap()), Err(TableError::NotTriplePoint(_))));
        let rep = "lines: 4 triples: 2\nL1: e1 e2\nL2: e1 e2\nL3: e1\nL4: e2\n";
        assert!(matches!(validate(&ConfigTable::parse(rep).unwrap()), Err(TableError::RepeatedPair(1, 2))));
    }

    #[test]
    fn census_table() {
        assert_eq!(line_census(10, 10), Some((10, 0)));
        assert_eq!(line_census(10, 11), Some((7, 3)));
        assert_eq!(line_census(10, 12), Some((4, 6)));
        assert_eq!(line_census(10, 13), Some((1, 9)));
        assert_eq!(line_census(6, 4), None);
    }

    #[test]
    fn hirzebruch_examples() {
        assert!(!hirzebruch_feasible(6, 0, 5));
        assert!(hirzebruch_feasible(6, 3, 4));
        assert!(hirzebruch_feasible(0, 0, 0));
    }
}
