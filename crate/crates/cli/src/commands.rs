use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::Context;
use kgfact_core::claim::{read_records_lenient, records_to_string, ClaimRecord, TemplateCatalog};
use kgfact_core::kg::{ingest_triples, GraphConfig, TripleFormat};
use kgfact_core::retrieve::{
    retrieve as retrieve_claim, serialize_triples, ContextPredictor, EntityReport,
    LexicalPredictor, OraclePredictor,
};
use kgfact_core::rng;
use kgfact_core::synth::{generate_dataset, read_seeds, split_dataset, SynthContext};
use kgfact_core::verify::{explain, Verifier};
use kgfact_core::{KnowledgeGraph, Label};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{write_atomic, write_json};
use crate::{Predictor, UsageError};

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

/// Loads a snapshot, or parses a triple file when the magic bytes are absent.
pub fn load_graph(path: &Path) -> anyhow::Result<KnowledgeGraph> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let kg = if KnowledgeGraph::is_snapshot(&bytes) {
        KnowledgeGraph::read_snapshot(bytes.as_slice())
    } else {
        ingest_triples(
            bytes.as_slice(),
            TripleFormat::from_path(path),
            GraphConfig::default(),
        )
    };
    kg.with_context(|| path.display().to_string())
}

fn required<'a>(value: &'a Option<std::path::PathBuf>, what: &str) -> anyhow::Result<&'a Path> {
    value.as_deref().ok_or_else(|| {
        UsageError(format!(
            "no {what} given: pass --{what} or set `{what}` in the config"
        ))
        .into()
    })
}

fn stats_line(kg: &KnowledgeGraph) -> String {
    format!(
        "{} triples, {} entities, {} relations",
        kg.triple_count(),
        kg.entity_count(),
        kg.relation_count()
    )
}

pub fn ingest(input: &Path, snapshot: Option<&Path>) -> anyhow::Result<()> {
    let kg = ingest_triples(
        open(input)?,
        TripleFormat::from_path(input),
        GraphConfig::default(),
    )
    .with_context(|| input.display().to_string())?;
    if let Some(out) = snapshot {
        let mut bytes = Vec::new();
        kg.write_snapshot(&mut bytes)?;
        write_atomic(out, &bytes)?;
    }
    println!("{}", stats_line(&kg));
    Ok(())
}

pub fn stats(config: &RunConfig) -> anyhow::Result<()> {
    let kg = load_graph(required(&config.graph, "graph")?)?;
    println!("{}", stats_line(&kg));
    let mut per_relation: BTreeMap<&str, usize> = BTreeMap::new();
    for t in kg.triples() {
        *per_relation
            .entry(kg.relation_name(t.relation))
            .or_default() += 1;
    }
    let mut rows: Vec<(&str, usize)> = per_relation.into_iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    for (r, n) in rows {
        println!("{n}\t{r}");
    }
    Ok(())
}

pub fn synth(config: &RunConfig) -> anyhow::Result<()> {
    let out = config.out_dir()?;
    let kg = load_graph(required(&config.graph, "graph")?)?;
    let catalog = match &config.catalog {
        Some(p) => TemplateCatalog::load(p)?,
        None => TemplateCatalog::default(),
    };
    let seeds_path = required(&config.seeds, "seeds")?;
    let seeds = read_seeds(open(seeds_path)?).with_context(|| seeds_path.display().to_string())?;
    info!("{} seeds, {}", seeds.len(), stats_line(&kg));

    let ctx = SynthContext::new(&kg, &catalog, config.synth.clone())
        .with_verify_config(config.verify.clone());
    let (records, report) = generate_dataset(&ctx, &seeds)?;
    for (kind, missing) in &report.quota_shortfall {
        warn!("quota for {kind} short by {missing}");
    }
    for (reason, n) in &report.skipped {
        info!("skipped {n}: {reason}");
    }
    let split = split_dataset(
        records,
        config.synth.split,
        &mut rng::stream(config.seed, "split"),
    )?;

    for (name, part) in ["train", "dev", "test"].iter().zip(split.parts()) {
        write_atomic(
            &out.join(format!("{name}.jsonl")),
            records_to_string(part).as_bytes(),
        )?;
    }
    write_json(&out.join("generation_report.json"), &report)?;
    write_json(&out.join("split_report.json"), &split.report())?;
    write_atomic(&out.join("config.toml"), config.to_toml().as_bytes())?;
    let sizes = split.report().records;
    println!(
        "{} records from {}/{} seeds: train {}, dev {}, test {}, {} dropped across splits",
        report.records,
        report.seeds_used,
        report.seeds,
        sizes[0],
        sizes[1],
        sizes[2],
        split.dropped
    );
    Ok(())
}

/// Well-formed records and the line numbers of the rest.
fn load_records(path: &Path) -> anyhow::Result<(Vec<ClaimRecord>, Vec<usize>)> {
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    for (line, entry) in read_records_lenient(open(path)?)? {
        match entry {
            Ok(r) => records.push(r),
            Err(e) => {
                warn!("{}: line {line}: {e}", path.display());
                malformed.push(line);
            }
        }
    }
    Ok((records, malformed))
}

#[derive(Serialize)]
struct Prediction<'a> {
    id: &'a str,
    stored: Label,
    predicted: Option<Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    records: usize,
    agree: usize,
    disagree: usize,
    errors: usize,
    malformed: usize,
    agreement: f64,
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

pub fn verify(config: &RunConfig, path: &Path, show: bool) -> anyhow::Result<()> {
    let kg = load_graph(required(&config.graph, "graph")?)?;
    let (records, malformed) = load_records(path)?;
    let verifier = Verifier::new(&kg, config.verify.clone());
    let verdicts: Vec<_> = records
        .par_iter()
        .map(|r| verifier.verify(&r.pattern))
        .collect();

    let mut predictions = Vec::with_capacity(records.len());
    let (mut agree, mut errors) = (0, 0);
    for (r, v) in records.iter().zip(&verdicts) {
        match v {
            Ok(v) => {
                agree += usize::from(v.label == r.label);
                if v.label != r.label {
                    println!(
                        "disagree {}: stored {}, verified {}",
                        r.id, r.label, v.label
                    );
                }
                if show {
                    println!("# {}: {}", r.id, r.text);
                    print!("{}", explain(v));
                }
            }
            Err(e) => {
                errors += 1;
                warn!("{}: {e}", r.id);
            }
        }
        predictions.push(Prediction {
            id: &r.id,
            stored: r.label,
            predicted: v.as_ref().ok().map(|v| v.label),
            error: v.as_ref().err().map(|e| e.to_string()),
        });
    }
    let report = VerifyReport {
        records: records.len(),
        agree,
        disagree: records.len() - agree - errors,
        errors,
        malformed: malformed.len(),
        agreement: percent(agree, records.len()),
    };
    if let Some(out) = &config.out {
        let mut lines = String::new();
        for p in &predictions {
            lines.push_str(&serde_json::to_string(p)?);
            lines.push('\n');
        }
        write_atomic(&out.join("predictions.jsonl"), lines.as_bytes())?;
        write_json(&out.join("verify_report.json"), &report)?;
    }
    println!(
        "{} records, {} agree ({:.2}%), {} disagree, {} errors, {} malformed",
        report.records,
        report.agree,
        report.agreement,
        report.disagree,
        report.errors,
        report.malformed
    );
    Ok(())
}

#[derive(Serialize)]
struct ClaimRetrieval {
    id: String,
    label: Label,
    reached: bool,
    truncated: bool,
    paths: usize,
    entities: Vec<EntityReport>,
}

#[derive(Serialize)]
struct RetrieveReport {
    predictor: &'static str,
    claims: usize,
    reached: usize,
    supported: usize,
    supported_reached: usize,
    truncated: usize,
    malformed: usize,
    per_claim: Vec<ClaimRetrieval>,
}

pub fn retrieve(config: &RunConfig, path: &Path, predictor: Predictor) -> anyhow::Result<()> {
    let out = config.out_dir()?;
    let kg = load_graph(required(&config.graph, "graph")?)?;
    let (records, malformed) = load_records(path)?;
    let lexical;
    let predictor: &dyn ContextPredictor = match predictor {
        Predictor::Oracle => &OraclePredictor,
        Predictor::Lexical => {
            lexical = LexicalPredictor::new(&kg, config.retrieve.max_hops);
            &lexical
        }
    };
    let limits = config.retrieve.limits();
    let results: Vec<_> = records
        .par_iter()
        .map(|r| {
            let mut rng = rng::stream(config.seed, &format!("retrieve/{}", r.id));
            retrieve_claim(&kg, r, predictor, &limits, &mut rng)
        })
        .collect();

    let mut evidence = String::new();
    let mut per_claim = Vec::with_capacity(records.len());
    for (r, got) in records.iter().zip(results) {
        for p in &got.paths {
            evidence.push_str(&r.id);
            evidence.push('\t');
            evidence.push_str(&serialize_triples(&p.triples));
            evidence.push('\n');
        }
        if got.truncated() {
            warn!("{}: retrieval budget exhausted, evidence is partial", r.id);
        }
        per_claim.push(ClaimRetrieval {
            id: r.id.clone(),
            label: r.label,
            reached: got.reached(),
            truncated: got.truncated(),
            paths: got.paths.len(),
            entities: got.entities,
        });
    }
    let count = |f: &dyn Fn(&ClaimRetrieval) -> bool| per_claim.iter().filter(|c| f(c)).count();
    let report = RetrieveReport {
        predictor: predictor.name(),
        claims: per_claim.len(),
        reached: count(&|c| c.reached),
        supported: count(&|c| c.label == Label::Supported),
        supported_reached: count(&|c| c.label == Label::Supported && c.reached),
        truncated: count(&|c| c.truncated),
        malformed: malformed.len(),
        per_claim,
    };
    write_atomic(&out.join("evidence.tsv"), evidence.as_bytes())?;
    write_json(&out.join("retrieval_report.json"), &report)?;
    println!(
        "{} claims, {} reached ({:.2}%), supported {}/{} reached ({:.2}%), {} truncated, {} malformed",
        report.claims,
        report.reached,
        percent(report.reached, report.claims),
        report.supported_reached,
        report.supported,
        percent(report.supported_reached, report.supported),
        report.truncated,
        report.malformed
    );
    Ok(())
}
