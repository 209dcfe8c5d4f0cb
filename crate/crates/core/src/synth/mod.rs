//! Labeled claim generation from seed sentence/triple pairs.
//!
//! Every emitted record carries the label the verifier assigns to its
//! pattern, so `verify(kg, record.pattern).label == record.label` holds by
//! construction.

mod ops;
mod seeds;
mod split;

pub use ops::{
    MostSpecificType, PassThrough, Placement, PresupKind, SynthContext, TextFilter, TypePicker,
};
pub use seeds::{read_seeds, write_seeds, SeedPair};
pub use split::{split_dataset, Split, SplitRatios, SplitReport};

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::claim::{primary_tag, ClaimRecord, ReasoningType};
use crate::error::{Error, Result};
use crate::rng;

/// Why a generation step produced nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Skip {
    SeedNotSupported,
    SeedInvalid,
    NoMention,
    UntypedEntity,
    NoCandidate,
    NotInGroup,
    SwappedTripleExists,
    NotCatalogRelation,
    NoAbsentRelation,
    NotAConjunction,
    NoInternalNode,
    UnsupportedPlacement,
    AlreadyNegated,
    NoStructuralTemplate,
    AlreadyWrapped,
    LabelMismatch,
    Filtered,
    SearchLimit,
}

impl Skip {
    pub fn reason(self) -> &'static str {
        match self {
            Skip::SeedNotSupported => "seed not supported by graph",
            Skip::SeedInvalid => "seed triples do not form a valid pattern",
            Skip::NoMention => "entity not mentioned in text",
            Skip::UntypedEntity => "entity has no type",
            Skip::NoCandidate => "no substitute outside exclusion radius",
            Skip::NotInGroup => "relation in no substitution group",
            Skip::SwappedTripleExists => "every swapped triple exists",
            Skip::NotCatalogRelation => "relation not in existence catalog",
            Skip::NoAbsentRelation => "no catalog relation absent for entity",
            Skip::NotAConjunction => "not a conjunction",
            Skip::NoInternalNode => "no typed internal node",
            Skip::UnsupportedPlacement => "unsupported negation placement",
            Skip::AlreadyNegated => "already negated",
            Skip::NoStructuralTemplate => "no structural template",
            Skip::AlreadyWrapped => "already presupposition-wrapped",
            Skip::LabelMismatch => "verifier disagreed with construction",
            Skip::Filtered => "rejected by text filter",
            Skip::SearchLimit => "verifier budget exceeded",
        }
    }
}

impl fmt::Display for Skip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.reason())
    }
}

/// Which edges a negation step flips.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegationPolicy {
    /// First, second or both, chosen uniformly per record.
    #[default]
    Uniform,
    First,
    Second,
    Both,
}

/// Share of written records that also get a presupposition-wrapped variant,
/// and relative weights of the three wrapper kinds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PresupMix {
    pub rate: f64,
    pub factive: f64,
    pub non_factive: f64,
    pub structural: f64,
}

impl Default for PresupMix {
    fn default() -> Self {
        PresupMix {
            rate: 0.3,
            factive: 1.0,
            non_factive: 1.0,
            structural: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub seed: u64,
    /// Substitutes must lie farther than this many hops from every original entity.
    pub radius: usize,
    pub max_attempts: usize,
    /// Upper bound on records per primary reasoning type; absent types are unbounded.
    pub quotas: BTreeMap<ReasoningType, usize>,
    pub split: SplitRatios,
    pub negation: NegationPolicy,
    pub presupposition: PresupMix,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            radius: 4,
            max_attempts: 16,
            quotas: BTreeMap::new(),
            split: SplitRatios::default(),
            negation: NegationPolicy::Uniform,
            presupposition: PresupMix::default(),
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radius == 0 {
            return Err(Error::Unsupported("radius must be at least 1".into()));
        }
        if self.max_attempts == 0 {
            return Err(Error::Unsupported("max_attempts must be at least 1".into()));
        }
        self.split.validate()?;
        let p = &self.presupposition;
        if !(0.0..=1.0).contains(&p.rate) {
            return Err(Error::Unsupported(
                "presupposition rate must be in [0, 1]".into(),
            ));
        }
        let weights = [p.factive, p.non_factive, p.structural];
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite())
            || (p.rate > 0.0 && weights.iter().sum::<f64>() <= 0.0)
        {
            return Err(Error::Unsupported(
                "presupposition weights must be non-negative with a positive sum".into(),
            ));
        }
        Ok(())
    }
}

/// Counts describing one generation run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub seeds: usize,
    pub seeds_used: usize,
    pub records: usize,
    pub by_type: BTreeMap<String, usize>,
    pub by_style: BTreeMap<String, usize>,
    pub by_label: BTreeMap<String, usize>,
    pub skipped: BTreeMap<String, usize>,
    pub quota_shortfall: BTreeMap<String, usize>,
}

impl GenerationReport {
    fn skip(&mut self, skip: Skip) {
        *self.skipped.entry(skip.reason().to_string()).or_default() += 1;
    }
}

/// Everything one seed yields, plus what it could not yield.
#[derive(Default)]
struct SeedOutput {
    records: Vec<ClaimRecord>,
    skips: Vec<Skip>,
    used: bool,
}

impl SeedOutput {
    fn take(&mut self, outcome: std::result::Result<ClaimRecord, Skip>) -> Option<ClaimRecord> {
        match outcome {
            Ok(r) => {
                self.records.push(r.clone());
                Some(r)
            }
            Err(s) => {
                self.skips.push(s);
                None
            }
        }
    }
}

impl SynthContext<'_> {
    fn placement<R: Rng + ?Sized>(&self, edges: usize, rng: &mut R) -> Placement {
        if edges == 1 {
            return Placement::First;
        }
        match self.config.negation {
            NegationPolicy::First => Placement::First,
            NegationPolicy::Second => Placement::Second,
            NegationPolicy::Both => Placement::Both,
            NegationPolicy::Uniform => {
                [Placement::First, Placement::Second, Placement::Both][rng.gen_range(0..3)]
            }
        }
    }

    fn presup_kind<R: Rng + ?Sized>(&self, rng: &mut R) -> PresupKind {
        let p = &self.config.presupposition;
        let total = p.factive + p.non_factive + p.structural;
        let x = rng.gen_range(0.0..total);
        if x < p.factive {
            PresupKind::Factive
        } else if x < p.factive + p.non_factive {
            PresupKind::NonFactive
        } else {
            PresupKind::Structural
        }
    }

    fn generate_seed(&self, seed: &SeedPair) -> SeedOutput {
        let mut out = SeedOutput::default();
        let mut rng = rng::stream(self.config.seed, &seed.id);
        let base = match self.base_record(seed) {
            Ok(r) => r,
            Err(s) => {
                out.skips.push(s);
                return out;
            }
        };
        out.used = true;
        out.records.push(base.clone());
        let mut negatable = vec![base.clone()];

        if let Some(r) = out.take(self.substitute_entity(&base, &mut rng)) {
            negatable.push(r);
        }
        if base.pattern.edges().len() == 1 {
            if let Some(r) = out.take(self.substitute_relation(&base, &mut rng)) {
                negatable.push(r);
            }
            for outcome in self.make_existence(&base, 0, &mut rng) {
                if let Some(r) = out.take(outcome) {
                    negatable.push(r);
                }
            }
        } else if let Some(mh) = out.take(self.make_multihop(&base, &mut rng)) {
            negatable.push(mh.clone());
            if let Some(r) = out.take(self.substitute_entity(&mh, &mut rng)) {
                negatable.push(r);
            }
        }
        for record in &negatable {
            let placement = self.placement(record.pattern.edges().len(), &mut rng);
            out.take(self.negate(record, placement));
        }

        let written: Vec<ClaimRecord> = out.records.clone();
        for record in &written {
            if self.config.presupposition.rate > 0.0
                && rng.gen_bool(self.config.presupposition.rate)
            {
                let kind = self.presup_kind(&mut rng);
                out.take(self.wrap_presupposition(record, kind, &mut rng));
            }
        }
        out
    }
}

/// Pseudo-random but order-independent ranking key for quota selection.
fn selection_key(master: u64, id: &str) -> u64 {
    use rand::RngCore;
    rng::stream(master ^ 0x5155_4f54_4153_u64, id).next_u64()
}

/// Runs the full generation pipeline over `seeds`.
///
/// Seeds are processed in parallel, each with its own random stream, and the
/// result is sorted by record id, so output does not depend on scheduling.
pub fn generate_dataset(
    ctx: &SynthContext<'_>,
    seeds: &[SeedPair],
) -> Result<(Vec<ClaimRecord>, GenerationReport)> {
    ctx.config.validate()?;
    let outputs: Vec<SeedOutput> = seeds.par_iter().map(|s| ctx.generate_seed(s)).collect();

    let mut report = GenerationReport {
        seeds: seeds.len(),
        ..GenerationReport::default()
    };
    let mut records = Vec::new();
    for output in outputs {
        report.seeds_used += usize::from(output.used);
        for s in output.skips {
            report.skip(s);
        }
        records.extend(output.records);
    }

    if !ctx.config.quotas.is_empty() {
        records.sort_by_cached_key(|r| (selection_key(ctx.config.seed, &r.id), r.id.clone()));
        let mut taken: BTreeMap<ReasoningType, usize> = BTreeMap::new();
        records.retain(|r| {
            let t = primary_tag(&r.types).unwrap_or_else(|| r.pattern.shape());
            match ctx.config.quotas.get(&t) {
                Some(&q) => {
                    let n = taken.entry(t).or_default();
                    *n += 1;
                    *n <= q
                }
                None => true,
            }
        });
        for (&t, &q) in &ctx.config.quotas {
            let got = taken.get(&t).copied().unwrap_or(0).min(q);
            if got < q {
                report.quota_shortfall.insert(t.to_string(), q - got);
            }
        }
    }
    records.sort_by(|a, b| a.id.cmp(&b.id));

    report.records = records.len();
    for r in &records {
        *report
            .by_type
            .entry(r.primary_type().to_string())
            .or_default() += 1;
        *report.by_style.entry(r.style.to_string()).or_default() += 1;
        *report.by_label.entry(r.label.to_string()).or_default() += 1;
    }
    Ok((records, report))
}
