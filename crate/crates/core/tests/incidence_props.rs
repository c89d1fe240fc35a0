//! Canonical forms, validation and automorphism groups on the registry.

mod support;

use std::collections::BTreeSet;

use workbench::enumerate::{enumerate, EnumOptions};
use workbench::incidence::canon::group_order;
use workbench::incidence::{canonical_form, canonize, hirzebruch_feasible, validate, ConfigTable};
use workbench::registry::{load_registry, registry_dir};

fn tables() -> Vec<(String, ConfigTable)> {
    load_registry(&registry_dir()).unwrap().into_iter().map(|e| (e.name, e.table)).collect()
}

#[test]
fn canonical_form_survives_relabeling() {
    // 1000 relabelings in total, cycling through the registry
    assert_eq!(support::relabel_suite(&tables(), 1000), Ok(1000));
}

#[test]
fn different_census_never_collides() {
    let all = tables();
    for (n1, t1) in &all {
        let c1 = validate(t1).unwrap();
        for (n2, t2) in &all {
            if validate(t2).unwrap() != c1 {
                assert_ne!(canonical_form(t1), canonical_form(t2), "{} vs {}", n1, n2);
            }
        }
    }
}

#[test]
fn registry_tables_validate_and_are_feasible() {
    for (name, t) in tables() {
        let c = validate(&t).unwrap_or_else(|e| panic!("{}: {}", name, e));
        // n2 = C(k,2) - 3 n3 >= 0 is implied by the census; recheck directly
        let pairs = t.k() * (t.k() - 1) / 2;
        assert!(pairs >= 3 * t.n3(), "{}", name);
        assert_eq!(c.n2, pairs - 3 * t.n3(), "{}", name);
        assert!(hirzebruch_feasible(t.k(), c.n2, c.n3), "{}", name);
    }
}

#[test]
fn single_deletion_breaks_validation() {
    for (name, t) in tables() {
        for l in 0..t.k() {
            for i in 0..t.line(l).len() {
                let mut lines: Vec<Vec<usize>> = t.lines().to_vec();
                lines[l].remove(i);
                let m = ConfigTable::from_lines(lines, t.n3());
                assert!(validate(&m).is_err(), "{}: deleting from L{} still validates", name, l + 1);
            }
        }
    }
}

/// Line permutations mapping the set of triple-point line sets onto itself.
fn brute_force_order(t: &ConfigTable) -> usize {
    let triples: BTreeSet<Vec<usize>> = t
        .point_lines()
        .into_iter()
        .map(|mut v| {
            v.sort();
            v
        })
        .collect();
    let k = t.k();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut count = 0;
    // Heap's algorithm
    let mut c = vec![0usize; k];
    let check = |perm: &[usize]| {
        triples.iter().all(|s| {
            let mut im: Vec<usize> = s.iter().map(|&l| perm[l]).collect();
            im.sort();
            triples.contains(&im)
        })
    };
    if check(&perm) {
        count += 1;
    }
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if check(&perm) {
                count += 1;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

fn generated_order(t: &ConfigTable) -> usize {
    group_order(&canonize(t).generators, t.k() + t.n3())
}

#[test]
fn six_line_automorphisms_match_brute_force() {
    for n3 in [3, 4] {
        let res = enumerate(6, n3, &EnumOptions::default()).unwrap();
        for c in &res.classes {
            assert_eq!(generated_order(&c.table), brute_force_order(&c.table));
        }
    }
    // the four triple points of the complete quadrilateral: symmetric group on 4
    let t = &enumerate(6, 4, &EnumOptions::default()).unwrap().classes[0].table;
    assert_eq!(brute_force_order(t), 24);
}

#[test]
fn nine_line_automorphisms_match_brute_force() {
    let all = tables();
    for name in ["(9_3).i", "(9_3).ii", "(9_3).iii", "Pappus"] {
        let t = &all.iter().find(|(n, _)| n == name).unwrap().1;
        assert_eq!(generated_order(t), brute_force_order(t), "{}", name);
    }
    // the Pappus configuration has 108 collineations
    let t = &all.iter().find(|(n, _)| n == "(9_3).i").unwrap().1;
    assert_eq!(brute_force_order(t), 108);
}
