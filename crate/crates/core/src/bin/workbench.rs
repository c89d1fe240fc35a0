use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use workbench::enumerate::{enumerate, match_registry, EnumOptions};
use workbench::incidence::canon::group_order;
use workbench::incidence::{canonical_table, canonize, validate, ConfigTable};
use workbench::pipeline::{analyze, run_pipeline, EntryReport, PipelineReport};
use workbench::realize::{realize, LineEquation, RealizationState};
use workbench::registry::{load_entry, load_expected, load_registry, registry_dir, RegistryEntry};

const EXIT_MISMATCH: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(name = "workbench", version, about = "Enumerate, realize and classify line arrangements with triple points")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a table and print its line census.
    Validate { file: PathBuf },
    /// Canonical form, automorphism group order and canonical relabeling.
    Canon { file: PathBuf },
    /// List isomorphism classes of tables with K lines and N triple points.
    Enumerate {
        #[arg(long)]
        lines: usize,
        #[arg(long)]
        triples: usize,
        /// Every line carries exactly three triple points.
        #[arg(long)]
        exact_three: bool,
        /// Disable the static pruning filters.
        #[arg(long)]
        no_filters: bool,
        /// Shuffle the branching order with this seed.
        #[arg(long)]
        shuffle: Option<u64>,
        /// Run single-threaded.
        #[arg(long)]
        serial: bool,
        /// Write one .cfg per class and a manifest of digests here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Name the classes after the registry tables with the same counts.
        #[arg(long = "match")]
        match_names: bool,
    },
    /// Symbolic realization: parameters, lines, constraints, inequations.
    Realize {
        file: PathBuf,
        /// Also print point coordinates and the propagation log.
        #[arg(long)]
        dump_state: bool,
    },
    /// Classify the moduli space of one table.
    Classify { file: PathBuf },
    /// Run the whole registry (or the named entries) and print the summary.
    Report {
        /// Only entries with this many triple points.
        #[arg(long)]
        triples: Option<usize>,
        names: Vec<String>,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_INVALID, msg: e.to_string() }
}

fn failed(e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, msg: e.to_string() }
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

/// Load a table with its directives, and its expectation when the file
/// sits next to an `expected.json` that names it.
fn load_with_expected(path: &Path) -> Result<RegistryEntry, Failure> {
    let mut e = load_entry(path).map_err(invalid)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    e.expected = load_expected(dir).map_err(invalid)?.remove(&e.name);
    Ok(e)
}

fn load_table(path: &Path) -> Result<ConfigTable, Failure> {
    Ok(load_entry(path).map_err(invalid)?.table)
}

fn cmd_validate(file: &Path, json: bool) -> Result<u8, Failure> {
    let t = load_table(file)?;
    let c = validate(&t).map_err(invalid)?;
    if json {
        print_json(&c);
    } else {
        println!("valid: {} lines, {} triple points, {} double points", c.k, c.n3, c.n2);
        for (i, n) in &c.ell {
            println!("lines with {} triples: {}", i, n);
        }
    }
    Ok(0)
}

fn cmd_canon(file: &Path, json: bool) -> Result<u8, Failure> {
    let t = load_table(file)?;
    validate(&t).map_err(invalid)?;
    let c = canonize(&t);
    let order = group_order(&c.generators, t.k() + t.n3());
    let form = workbench::incidence::canonical_form(&t);
    let canon = canonical_table(&t);
    if json {
        print_json(&json!({
            "form": form.hex(),
            "digest": form.digest(),
            "automorphism_group_order": order,
            "generators": workbench::incidence::automorphisms(&t),
            "canonical_table": canon.to_text(),
        }));
    } else {
        println!("form: {}", form.hex());
        println!("digest: {}", form.digest());
        println!("automorphism group order: {}", order);
        print!("{}", canon.to_text());
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_enumerate(
    k: usize,
    n3: usize,
    exact_three: bool,
    no_filters: bool,
    shuffle: Option<u64>,
    serial: bool,
    out: Option<&Path>,
    match_names: bool,
    json: bool,
) -> Result<u8, Failure> {
    let opts = EnumOptions { exact_three, filters: !no_filters, shuffle_seed: shuffle, parallel: !serial, ..Default::default() };
    let res = enumerate(k, n3, &opts).map_err(failed)?;
    let files: Vec<String> = (1..=res.classes.len()).map(|i| format!("class-{:03}.cfg", i)).collect();
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(failed)?;
        let mut manifest = String::new();
        for (c, f) in res.classes.iter().zip(&files) {
            std::fs::write(dir.join(f), c.table.to_text()).map_err(failed)?;
            manifest.push_str(&format!("{}  {}\n", c.form.digest(), f));
        }
        std::fs::write(dir.join("manifest.txt"), manifest).map_err(failed)?;
    }
    let mut code = 0;
    let mut names = None;
    if match_names {
        let named: Vec<(String, ConfigTable)> = load_registry(&registry_dir())
            .map_err(failed)?
            .into_iter()
            .filter(|e| e.table.k() == k && e.table.n3() == n3)
            .map(|e| (e.name, e.table))
            .collect();
        match match_registry(&res.classes, &named) {
            Ok(m) => names = Some(m),
            Err(e) => {
                eprintln!("{}", e);
                code = EXIT_MISMATCH;
            }
        }
    }
    if json {
        let classes: Vec<_> = res
            .classes
            .iter()
            .zip(&files)
            .map(|(c, f)| json!({"file": f, "digest": c.form.digest(), "form": c.form.hex()}))
            .collect();
        print_json(&json!({
            "lines": k,
            "triples": n3,
            "count": res.classes.len(),
            "profiles": res.profiles,
            "relaxed": res.relaxed,
            "nodes": res.nodes,
            "classes": classes,
            "registry": names,
        }));
    } else {
        println!("{} classes ({} lines, {} triples, {} nodes)", res.classes.len(), k, n3, res.nodes);
        if res.relaxed {
            println!("note: lines with fewer than three triples were allowed");
        }
        for (c, f) in res.classes.iter().zip(&files) {
            println!("{}  {}", c.form.digest(), f);
        }
        if let Some(m) = &names {
            for (name, form) in &m.by_name {
                println!("{} -> {}", name, form.digest());
            }
            for group in &m.aliases {
                println!("isomorphic: {}", group.join(" = "));
            }
        }
    }
    Ok(code)
}

fn state_json(t: &ConfigTable, st: &RealizationState, dump: bool) -> serde_json::Value {
    let lines: Vec<String> = st.lines.iter().map(|l| l.as_ref().map_or("unknown".into(), |c| LineEquation(c).to_string())).collect();
    let mut v = json!({
        "params": st.param_names(),
        "lines": lines,
        "constraints": st.constraints,
        "inequations": st.inequations,
        "free_dims": st.free_dims,
    });
    if dump {
        let points: Vec<_> = st
            .points
            .iter()
            .enumerate()
            .map(|(p, c)| json!({"label": t.label(p), "coords": c.as_ref().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>())}))
            .collect();
        v["points"] = json!(points);
        v["sources"] = json!(st.constraint_sources.iter().map(|(l, p)| format!("L{} {}", l + 1, t.label(*p))).collect::<Vec<_>>());
        v["log"] = json!(st.log);
    }
    v
}

fn cmd_realize(file: &Path, dump: bool, json: bool) -> Result<u8, Failure> {
    let e = load_entry(file).map_err(invalid)?;
    validate(&e.table).map_err(invalid)?;
    let grid = e.grid().map_err(invalid)?;
    let st = realize(&e.table, grid.as_ref(), &e.directives.hints).map_err(failed)?;
    let v = state_json(&e.table, &st, dump);
    if json {
        print_json(&v);
        return Ok(0);
    }
    println!("parameters: {}", st.param_names().join(", "));
    println!("lines:");
    for (i, l) in v["lines"].as_array().unwrap().iter().enumerate() {
        println!("  L{}: {}", i + 1, l.as_str().unwrap());
    }
    if dump {
        println!("points:");
        for p in v["points"].as_array().unwrap() {
            let coords = p["coords"].as_array().map(|c| c.iter().map(|x| x.as_str().unwrap().to_string()).collect::<Vec<_>>().join(", "));
            println!("  {}: [{}]", p["label"].as_str().unwrap(), coords.unwrap_or_else(|| "unknown".into()));
        }
    }
    println!("constraints:");
    for (i, c) in st.constraints.iter().enumerate() {
        if dump {
            let (l, p) = st.constraint_sources[i];
            println!("  {} = 0    (L{} through {})", c, l + 1, e.table.label(p));
        } else {
            println!("  {} = 0", c);
        }
    }
    println!("inequations:");
    for h in st.inequations.iter().filter(|h| !h.poly.is_constant()) {
        println!("  {} != 0    ({})", h.poly, h.reason);
    }
    if st.free_dims > 0 {
        println!("free dimensions from unconstrained lines: {}", st.free_dims);
    }
    if dump {
        println!("log:");
        for l in &st.log {
            println!("  {}", l);
        }
    }
    Ok(0)
}

fn print_entry(r: &EntryReport) {
    println!("{}: {} lines, {} triples", r.name, r.lines, r.triples);
    if let Some(err) = &r.error {
        println!("  error: {}", err);
    }
    if let Some(m) = &r.report {
        let v = serde_json::to_value(m).unwrap();
        println!("  verdict: {}", v["verdict"].as_str().unwrap());
        if let Some(d) = m.dimension {
            println!("  dimension: {}", d);
        }
        if let Some(p) = &m.minpoly {
            println!("  minpoly: {}", p);
        }
        if m.point_count > 0 {
            println!("  points: {} (real {}, conjugation orbits {})", m.point_count, m.real_count, m.orbit_count);
        }
        if let Some(i) = v["irreducible"].as_str() {
            println!("  irreducible: {}", i);
        }
        println!("  zariski_flag: {}", m.zariski_flag);
        if m.caveat {
            let what = if m.irreducible.is_some() { "not known to be irreducible" } else { "more than one point over C" };
            println!("  caveat: {}", what);
        }
        for p in &m.system {
            println!("  system: {} = 0", p);
        }
        for d in &m.degeneracy_log {
            println!("  degeneracy: {}", d);
        }
    }
    for mm in &r.mismatches {
        println!("  MISMATCH {}: expected {} got {}", mm.field, mm.expected, mm.got);
    }
}

fn entry_code(r: &EntryReport) -> u8 {
    if r.invalid {
        EXIT_INVALID
    } else if !r.mismatches.is_empty() {
        EXIT_MISMATCH
    } else if r.error.is_some() {
        1
    } else {
        0
    }
}

fn cmd_classify(file: &Path, json: bool) -> Result<u8, Failure> {
    let e = load_with_expected(file)?;
    let r = analyze(&e);
    if json {
        print_json(&r);
    } else {
        print_entry(&r);
    }
    Ok(entry_code(&r))
}

fn print_report(rep: &PipelineReport) {
    for r in &rep.entries {
        print_entry(r);
    }
    let s = &rep.summary;
    println!();
    println!("{:>5} {:>7} {:>6} {:>8} {:>6} {:>7} {:>10}", "lines", "triples", "comb", "non-geom", "geom", "flagged", "irr-or-conj");
    for row in s.rows.iter().chain(std::iter::once(&s.total)) {
        let triples = if std::ptr::eq(row, &s.total) { "total".to_string() } else { row.triples.to_string() };
        println!(
            "{:>5} {:>7} {:>6} {:>8} {:>6} {:>7} {:>10}",
            row.lines, triples, row.combinatorial, row.non_geometric, row.geometric, row.flagged, row.irreducible_or_conjugate
        );
    }
    println!("flagged: {}", s.flagged_names.join(", "));
    println!("non-geometric: {}", s.non_geometric_names.join(", "));
    for n in &s.notes {
        println!("note: {}", n);
    }
}

fn cmd_report(triples: Option<usize>, names: &[String], json: bool) -> Result<u8, Failure> {
    let all = load_registry(&registry_dir()).map_err(invalid)?;
    for n in names {
        if !all.iter().any(|e| &e.name == n) {
            return Err(invalid(format!("no registry entry named {}", n)));
        }
    }
    let chosen: Vec<RegistryEntry> = all
        .into_iter()
        .filter(|e| names.is_empty() || names.contains(&e.name))
        .filter(|e| triples.map_or(true, |n| e.table.n3() == n))
        .collect();
    let rep = run_pipeline(&chosen);
    if json {
        print_json(&rep);
    } else {
        print_report(&rep);
    }
    Ok(rep.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let res = match &cli.cmd {
        Cmd::Validate { file } => cmd_validate(file, json),
        Cmd::Canon { file } => cmd_canon(file, json),
        Cmd::Enumerate { lines, triples, exact_three, no_filters, shuffle, serial, out, match_names } => {
            cmd_enumerate(*lines, *triples, *exact_three, *no_filters, *shuffle, *serial, out.as_deref(), *match_names, json)
        }
        Cmd::Realize { file, dump_state } => cmd_realize(file, *dump_state, json),
        Cmd::Classify { file } => cmd_classify(file, json),
        Cmd::Report { triples, names } => cmd_report(*triples, names, json),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
