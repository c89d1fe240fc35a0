//! Named tables shipped as `.cfg` files plus their expected classification.
//!
//! Directives live in comments so the files stay valid tables:
//! `# gauge: y=L3,L2,L1 x=L4,L5,L6` fixes the grid and `# param: e10=(a,c)`
//! places a point when propagation stalls.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::algebra::MultiPoly;
use crate::incidence::{ConfigTable, TableError};
use crate::realize::{GridChoice, Hint, RealizeError};

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{name}: {source}")]
    Table { name: String, source: TableError },
    #[error("{name}: bad directive `{line}`: {msg}")]
    Directive { name: String, line: String, msg: String },
    #[error("expected data: {0}")]
    Expected(String),
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedVerdict {
    Empty,
    ZeroDim,
    PositiveDim,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Expected {
    pub verdict: ExpectedVerdict,
    pub constraints: Vec<String>,
    pub zariski_flag: bool,
    #[serde(default)]
    pub mark: Option<String>,
    #[serde(default)]
    pub dimension: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct Directives {
    /// (y-lines, x-lines) as zero-based line indices.
    pub gauge: Option<([usize; 3], [usize; 3])>,
    pub hints: Vec<Hint>,
}

#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub name: String,
    pub table: ConfigTable,
    pub directives: Directives,
    pub expected: Option<Expected>,
}

impl RegistryEntry {
    pub fn grid(&self) -> Result<Option<GridChoice>, RealizeError> {
        match &self.directives.gauge {
            Some((y, x)) => GridChoice::new(&self.table, *y, *x).map(Some),
            None => Ok(None),
        }
    }
}

fn line_ref(s: &str) -> Option<usize> {
    s.trim().strip_prefix('L')?.parse::<usize>().ok()?.checked_sub(1)
}

fn triple(s: &str) -> Option<[usize; 3]> {
    let v: Vec<usize> = s.split(',').map(line_ref).collect::<Option<_>>()?;
    v.try_into().ok()
}

/// Read `# gauge:` and `# param:` comment directives.
pub fn parse_directives(name: &str, text: &str, table: &ConfigTable) -> Result<Directives, RegistryError> {
    let mut d = Directives::default();
    let bad = |line: &str, msg: &str| RegistryError::Directive { name: name.into(), line: line.into(), msg: msg.into() };
    for line in text.lines() {
        let Some(body) = line.trim().strip_prefix('#') else { continue };
        let body = body.trim();
        if let Some(g) = body.strip_prefix("gauge:") {
            let mut y = None;
            let mut x = None;
            for part in g.split_whitespace() {
                if let Some(r) = part.strip_prefix("y=") {
                    y = triple(r);
                } else if let Some(r) = part.strip_prefix("x=") {
                    x = triple(r);
                }
            }
            match (y, x) {
                (Some(y), Some(x)) if y.iter().chain(&x).all(|&l| l < table.k()) => d.gauge = Some((y, x)),
                _ => return Err(bad(line, "expected y=Li,Lj,Lk x=Ll,Lm,Ln")),
            }
        } else if let Some(p) = body.strip_prefix("param:") {
            for item in p.split_whitespace() {
                let (label, coords) = item.split_once('=').ok_or_else(|| bad(line, "expected eN=(x,y)"))?;
                let point = table.point_index(label).ok_or_else(|| bad(line, "unknown point"))?;
                let inner = coords
                    .strip_prefix('(')
                    .and_then(|c| c.strip_suffix(')'))
                    .ok_or_else(|| bad(line, "coordinates must be parenthesized"))?;
                let (xs, ys) = inner.split_once(',').ok_or_else(|| bad(line, "two coordinates required"))?;
                let x = MultiPoly::parse(xs).map_err(|e| bad(line, &e.to_string()))?;
                let y = MultiPoly::parse(ys).map_err(|e| bad(line, &e.to_string()))?;
                d.hints.push(Hint { point, x, y });
            }
        }
    }
    Ok(d)
}

pub fn load_entry(path: &Path) -> Result<RegistryEntry, RegistryError> {
    let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io { path: path.into(), source })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let table = ConfigTable::parse(&text).map_err(|source| RegistryError::Table { name: name.clone(), source })?;
    let directives = parse_directives(&name, &text, &table)?;
    Ok(RegistryEntry { name, table, directives, expected: None })
}

/// Registry directory: `WORKBENCH_REGISTRY` or the one shipped with the crate.
pub fn registry_dir() -> PathBuf {
    match std::env::var_os("WORKBENCH_REGISTRY") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../registry"),
    }
}

/// All entries, sorted by name, with expectations attached when present.
pub fn load_registry(dir: &Path) -> Result<Vec<RegistryEntry>, RegistryError> {
    let rd = std::fs::read_dir(dir).map_err(|source| RegistryError::Io { path: dir.into(), source })?;
    let mut entries = vec![];
    for e in rd {
        let path = e.map_err(|source| RegistryError::Io { path: dir.into(), source })?.path();
        if path.extension().map_or(false, |x| x == "cfg") {
            entries.push(load_entry(&path)?);
        }
    }
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    let mut exp = load_expected(dir)?;
    for e in entries.iter_mut() {
        e.expected = exp.remove(&e.name);
    }
    if let Some(name) = exp.keys().next() {
        return Err(RegistryError::Expected(format!("no table for expected entry {}", name)));
    }
    Ok(entries)
}

/// `expected.json` in `dir`, or nothing if the file is absent.
pub fn load_expected(dir: &Path) -> Result<BTreeMap<String, Expected>, RegistryError> {
    let path = dir.join("expected.json");
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let text = std::fs::read_to_string(&path).map_err(|source| RegistryError::Io { path: path.clone(), source })?;
    serde_json::from_str(&text).map_err(|e| RegistryError::Expected(e.to_string()))
}
