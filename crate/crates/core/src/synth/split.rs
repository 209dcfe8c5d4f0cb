use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::claim::ClaimRecord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitRatios {
    pub train: f64,
    pub dev: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.8,
            dev: 0.1,
            test: 0.1,
        }
    }
}

impl SplitRatios {
    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.dev, self.test];
        if parts.iter().any(|p| !p.is_finite() || *p < 0.0)
            || ((parts.iter().sum::<f64>()) - 1.0).abs() > 1e-9
        {
            return Err(Error::Unsupported(format!(
                "split ratios must be non-negative and sum to 1, got {}/{}/{}",
                self.train, self.dev, self.test
            )));
        }
        Ok(())
    }

    /// Triple counts per split for `n` triples; test takes the remainder.
    pub fn sizes(&self, n: usize) -> [usize; 3] {
        let train = ((n as f64) * self.train).round() as usize;
        let dev = (((n as f64) * self.dev).round() as usize).min(n - train.min(n));
        let train = train.min(n);
        [train, dev, n - train - dev]
    }
}

/// Train/dev/test records over pairwise disjoint triple sets.
#[derive(Clone, Debug, Default)]
pub struct Split {
    pub train: Vec<ClaimRecord>,
    pub dev: Vec<ClaimRecord>,
    pub test: Vec<ClaimRecord>,
    pub triples: [BTreeSet<[String; 3]>; 3],
    /// Records whose source triples fall in more than one split.
    pub dropped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub triples: [usize; 3],
    pub records: [usize; 3],
    pub dropped: usize,
}

impl Split {
    pub fn parts(&self) -> [&[ClaimRecord]; 3] {
        [&self.train, &self.dev, &self.test]
    }

    pub fn report(&self) -> SplitReport {
        SplitReport {
            triples: [0, 1, 2].map(|i| self.triples[i].len()),
            records: [self.train.len(), self.dev.len(), self.test.len()],
            dropped: self.dropped,
        }
    }
}

/// Partitions the records' source triples by `ratios`, then places each
/// record in the split holding all of its triples. Records keep their
/// relative order.
pub fn split_dataset<R: Rng + ?Sized>(
    records: Vec<ClaimRecord>,
    ratios: SplitRatios,
    rng: &mut R,
) -> Result<Split> {
    ratios.validate()?;
    let universe: BTreeSet<&[String; 3]> = records.iter().flat_map(|r| &r.source_triples).collect();
    let mut triples: Vec<[String; 3]> = universe.into_iter().cloned().collect();
    triples.shuffle(rng);
    let [n_train, n_dev, _] = ratios.sizes(triples.len());
    let mut split = Split::default();
    for (i, t) in triples.into_iter().enumerate() {
        let part = if i < n_train {
            0
        } else if i < n_train + n_dev {
            1
        } else {
            2
        };
        split.triples[part].insert(t);
    }
    for record in records {
        let home = (0..3).find(|&p| {
            record
                .source_triples
                .iter()
                .all(|t| split.triples[p].contains(t))
        });
        match home {
            Some(0) => split.train.push(record),
            Some(1) => split.dev.push(record),
            Some(_) => split.test.push(record),
            None => split.dropped += 1,
        }
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_round_and_cover() {
        let r = SplitRatios::default();
        assert_eq!(r.sizes(100), [80, 10, 10]);
        assert_eq!(r.sizes(0), [0, 0, 0]);
        assert_eq!(r.sizes(7), [6, 1, 0]);
        for n in 0..200 {
            assert_eq!(r.sizes(n).iter().sum::<usize>(), n);
        }
    }

    #[test]
    fn bad_ratios() {
        assert!(SplitRatios {
            train: 0.5,
            dev: 0.1,
            test: 0.1
        }
        .validate()
        .is_err());
        assert!(SplitRatios {
            train: 1.2,
            dev: -0.1,
            test: -0.1
        }
        .validate()
        .is_err());
    }
}
