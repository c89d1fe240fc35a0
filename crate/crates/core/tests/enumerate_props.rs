//! Enumerator invariants: isomorph-free output, registry coverage, and
//! independence from branching order, pruning and orbit-test strategy.

use std::collections::BTreeSet;

use workbench::enumerate::{enumerate, match_registry, EnumOptions, EnumResult};
use workbench::incidence::{canonical_form, validate, CanonicalForm, ConfigTable};
use workbench::registry::{load_registry, registry_dir};

const CASES: [(usize, usize, bool); 7] = [(6, 3, false), (6, 4, false), (9, 9, true), (9, 10, false), (10, 13, false), (10, 10, true), (10, 12, false)];

fn run(k: usize, n3: usize, exact_three: bool, tweak: impl Fn(&mut EnumOptions)) -> EnumResult {
    let mut o = EnumOptions { exact_three, ..Default::default() };
    tweak(&mut o);
    enumerate(k, n3, &o).unwrap()
}

fn forms(r: &EnumResult) -> Vec<CanonicalForm> {
    r.classes.iter().map(|c| c.form.clone()).collect()
}

#[test]
fn output_is_isomorph_free_and_valid() {
    for (k, n3, e) in CASES {
        let r = run(k, n3, e, |_| {});
        let set: BTreeSet<_> = forms(&r).into_iter().collect();
        assert_eq!(set.len(), r.classes.len(), "duplicate class for ({}, {})", k, n3);
        for c in &r.classes {
            let census = validate(&c.table).unwrap();
            assert_eq!((census.k, census.n3), (k, n3));
            assert_eq!(canonical_form(&c.table), c.form);
            if e {
                assert!(c.table.lines().iter().all(|l| l.len() == 3));
            }
        }
    }
}

#[test]
fn registry_tables_are_all_found() {
    let reg = load_registry(&registry_dir()).unwrap();
    for (k, n3, e) in CASES {
        let named: Vec<(String, ConfigTable)> = reg
            .iter()
            .filter(|x| x.table.k() == k && x.table.n3() == n3)
            .map(|x| (x.name.clone(), x.table.clone()))
            .collect();
        let r = run(k, n3, e, |_| {});
        let found: BTreeSet<_> = forms(&r).into_iter().collect();
        for (name, t) in &named {
            assert!(found.contains(&canonical_form(t)), "{} missing from ({}, {})", name, k, n3);
        }
        if !named.is_empty() {
            let m = match_registry(&r.classes, &named).unwrap();
            assert_eq!(m.by_name.len(), named.len());
        }
    }
}

#[test]
fn shuffled_branching_gives_same_classes() {
    for (k, n3, e) in CASES {
        let base = forms(&run(k, n3, e, |_| {}));
        for seed in [1, 99] {
            assert_eq!(forms(&run(k, n3, e, |o| o.shuffle_seed = Some(seed))), base, "({}, {}) seed {}", k, n3, seed);
        }
    }
}

#[test]
fn filters_only_prune() {
    for (k, n3, e) in CASES {
        let with = run(k, n3, e, |_| {});
        let without = run(k, n3, e, |o| o.filters = false);
        assert_eq!(forms(&with), forms(&without), "({}, {})", k, n3);
        assert!(without.nodes >= with.nodes);
    }
}

#[test]
fn orbit_test_strategies_agree() {
    for (k, n3, e) in CASES {
        let gens = run(k, n3, e, |_| {});
        let marked = run(k, n3, e, |o| o.marked_orbit_test = true);
        assert_eq!(forms(&gens), forms(&marked), "({}, {})", k, n3);
    }
}

#[test]
fn serial_equals_parallel() {
    for (k, n3, e) in CASES {
        let par = run(k, n3, e, |_| {});
        let ser = run(k, n3, e, |o| o.parallel = false);
        assert_eq!(forms(&par), forms(&ser));
        assert_eq!(par.nodes, ser.nodes);
    }
}
