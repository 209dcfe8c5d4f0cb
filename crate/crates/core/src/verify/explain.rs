use std::fmt::Write;

use super::Verdict;

/// Human-readable account of a verdict: label, witness and each edge.
pub fn explain(verdict: &Verdict) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "label: {}", verdict.label);
    if verdict.inverted {
        out.push_str("frame: inverted (label is the negation of the inner claim)\n");
    }
    match &verdict.witness {
        Some(a) if !a.bindings.is_empty() => {
            for b in &a.bindings {
                let _ = writeln!(out, "witness: ?x{} = {}", b.variable, b.name);
            }
        }
        _ => out.push_str("witness: none\n"),
    }
    for e in &verdict.checked_edges {
        let mark = if e.holds { "holds " } else { "fails " };
        let triple = format!("({}, {}, {})", e.head, e.relation, e.tail);
        if e.negated {
            let _ = writeln!(out, "{mark} NOT {triple}");
        } else {
            let _ = writeln!(out, "{mark} {triple}");
        }
    }
    out
}
