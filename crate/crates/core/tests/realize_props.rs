//! Realizer invariants over the whole registry.

use workbench::algebra::MultiPoly;
use workbench::realize::{realize, Coords, RealizationState};
use workbench::registry::{load_registry, registry_dir, RegistryEntry};

/// Entries whose transcription lists a partly reduced system, so the raw
/// constraint count differs: a - b was already substituted.
const REDUCED_TRANSCRIPTIONS: [&str; 1] = ["12.B.2.iii"];

fn realized() -> Vec<(RegistryEntry, RealizationState)> {
    load_registry(&registry_dir())
        .unwrap()
        .into_iter()
        .filter_map(|e| {
            let g = e.grid().unwrap();
            let st = realize(&e.table, g.as_ref(), &e.directives.hints).ok()?;
            Some((e, st))
        })
        .collect()
}

fn dot(l: &Coords, p: &Coords) -> MultiPoly {
    &(&(&l[0] * &p[0]) + &(&l[1] * &p[1])) + &(&l[2] * &p[2])
}

fn same_up_to_unit(a: &MultiPoly, b: &MultiPoly) -> bool {
    a.primitive() == b.primitive() || a.primitive() == (-b).primitive()
}

#[test]
fn every_incidence_holds_or_is_a_constraint() {
    let all = realized();
    assert!(all.len() >= 70);
    for (e, st) in &all {
        assert!(st.is_complete(), "{}", e.name);
        for l in 0..e.table.k() {
            for &p in e.table.line(l) {
                let d = dot(st.lines[l].as_ref().unwrap(), st.points[p].as_ref().unwrap());
                if !d.is_zero() {
                    assert!(st.constraints.iter().any(|c| same_up_to_unit(c, &d)), "{}: L{} {} gives {}", e.name, l + 1, e.table.label(p), d);
                }
            }
        }
        for (c, &(l, p)) in st.constraints.iter().zip(&st.constraint_sources) {
            let d = dot(st.lines[l].as_ref().unwrap(), st.points[p].as_ref().unwrap());
            assert!(same_up_to_unit(c, &d), "{}: constraint {} not from its source", e.name, c);
        }
    }
}

#[test]
fn constraint_counts_match_transcription() {
    for (e, st) in realized() {
        let Some(x) = &e.expected else { continue };
        if REDUCED_TRANSCRIPTIONS.contains(&e.name.as_str()) {
            continue;
        }
        assert_eq!(st.constraints.len(), x.constraints.len(), "{}", e.name);
    }
}

#[test]
fn realization_is_deterministic() {
    for (e, st) in realized() {
        let again = realize(&e.table, e.grid().unwrap().as_ref(), &e.directives.hints).unwrap();
        let text = |s: &RealizationState| {
            let mut v: Vec<String> = s.constraints.iter().map(|c| c.to_string()).collect();
            v.extend(s.inequations.iter().map(|h| format!("{} {}", h.poly, h.reason)));
            v
        };
        assert_eq!(text(&st), text(&again), "{}", e.name);
    }
}

#[test]
fn grid_inequations_are_present() {
    for (e, st) in realized() {
        for g in ["a", "a - 1", "b", "b - 1"] {
            let g = MultiPoly::parse(g).unwrap();
            assert!(st.inequations.iter().any(|h| h.poly == g), "{}", e.name);
        }
    }
}
