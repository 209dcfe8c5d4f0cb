use crate::error::{Error, Result};

use super::EvidencePath;

pub const SEP: &str = "<SEP>";

/// `h r t <SEP> h r t`, one path per line.
pub fn serialize_evidence(paths: &[EvidencePath]) -> String {
    paths
        .iter()
        .map(|p| serialize_triples(&p.triples))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn serialize_triples(triples: &[[String; 3]]) -> String {
    triples
        .iter()
        .map(|[h, r, t]| format!("{h} {r} {t}"))
        .collect::<Vec<_>>()
        .join(&format!(" {SEP} "))
}

/// Inverse of [`serialize_evidence`] for names without whitespace.
pub fn parse_evidence(text: &str) -> Result<Vec<Vec<[String; 3]>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            line.split(&format!(" {SEP} "))
                .map(|part| {
                    let tokens: Vec<&str> = part.split_whitespace().collect();
                    match tokens.as_slice() {
                        [h, r, t] => Ok([h.to_string(), r.to_string(), t.to_string()]),
                        _ => Err(Error::parse(
                            i + 1,
                            format!("expected `head relation tail`, got {part:?}"),
                        )),
                    }
                })
                .collect()
        })
        .collect()
}
