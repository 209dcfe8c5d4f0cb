use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::claim::ClaimPattern;
use crate::error::{Error, Result};

/// A single sentence with the triples it states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPair {
    #[serde(default)]
    pub id: String,
    pub text: String,
    pub triples: Vec<[String; 3]>,
}

impl SeedPair {
    pub fn new(id: impl Into<String>, text: impl Into<String>, triples: Vec<[String; 3]>) -> Self {
        SeedPair {
            id: id.into(),
            text: text.into(),
            triples,
        }
    }

    /// Grounded conjunction of the seed's triples.
    pub fn pattern(&self) -> Result<ClaimPattern> {
        ClaimPattern::from_triples(&self.triples)
    }
}

/// Reads `{"text": .., "triples": [[h, r, t], ..]}` lines. Seeds without an
/// `id` are named after their line number.
pub fn read_seeds<R: BufRead>(input: R) -> Result<Vec<SeedPair>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut seed: SeedPair =
            serde_json::from_str(&line).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        if seed.triples.is_empty() {
            return Err(Error::parse(i + 1, "seed has no triples"));
        }
        if seed.id.is_empty() {
            seed.id = format!("L{:07}", i + 1);
        }
        out.push(seed);
    }
    Ok(out)
}

pub fn write_seeds<W: Write>(seeds: &[SeedPair], mut out: W) -> Result<()> {
    for s in seeds {
        serde_json::to_writer(&mut out, s)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
