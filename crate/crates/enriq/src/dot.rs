//! DOT rendering of a completion: the Hasse reduction of the
//! isomorphism-quotient order, one node per class labeled by its
//! presheaf vector, with the embedded base objects doubly circled.
//!
//! Output is deterministic — nodes in canonical completion order,
//! edges sorted — so rendered files can serve as golden fixtures.

use std::fmt::Write as _;

use crate::macneille::Completion;

fn quote(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the completion's underlying order as a DOT digraph, edges
/// pointing upward (covers only).
pub fn completion_dot(mn: &Completion) -> String {
    let cat = mn.category();
    let q = cat.quantale();
    let k = cat.len();
    // completion points are already one per class, but quotient anyway
    // so isomorphic duplicates (never produced today) would collapse
    let mut class_of = vec![usize::MAX; k];
    let mut reps: Vec<usize> = Vec::new();
    for (i, slot) in class_of.iter_mut().enumerate() {
        for (cls, &r) in reps.iter().enumerate() {
            if cat.obj_leq(i, r) && cat.obj_leq(r, i) {
                *slot = cls;
                break;
            }
        }
        if *slot == usize::MAX {
            *slot = reps.len();
            reps.push(i);
        }
    }
    let m = reps.len();
    let strictly_below =
        |a: usize, b: usize| cat.obj_leq(reps[a], reps[b]) && !cat.obj_leq(reps[b], reps[a]);
    let embedded: Vec<bool> = {
        let mut marks = vec![false; m];
        for c in 0..mn.base().len() {
            marks[class_of[mn.embedding_index(c)]] = true;
        }
        marks
    };

    let mut out = String::new();
    out.push_str("digraph completion {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=ellipse];\n");
    for (cls, &r) in reps.iter().enumerate() {
        let values: Vec<String> = mn.objects()[r]
            .presheaf()
            .value_vec()
            .iter()
            .map(|e| q.show(e))
            .collect();
        let label = format!("({})", values.join(", "));
        if embedded[cls] {
            let _ = writeln!(
                out,
                "  n{cls} [label=\"{}\", peripheries=2];",
                quote(&label)
            );
        } else {
            let _ = writeln!(out, "  n{cls} [label=\"{}\"];", quote(&label));
        }
    }
    for a in 0..m {
        for b in 0..m {
            if !strictly_below(a, b) {
                continue;
            }
            // Hasse reduction: keep only covering edges
            let covered = (0..m).any(|c| strictly_below(a, c) && strictly_below(c, b));
            if !covered {
                let _ = writeln!(out, "  n{a} -> n{b};");
            }
        }
    }
    out.push_str("}\n");
    out
}
