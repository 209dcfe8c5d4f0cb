//! Small fixed graph and a synthetic graph generator for tests, benchmarks
//! and demos.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::claim::TemplateCatalog;
use crate::kg::{ingest_str, GraphConfig, KnowledgeGraph, TripleFormat};
use crate::rng;
use crate::synth::SeedPair;

/// The AIDAstella graph with a few extra entities for substitutions.
pub const AIDASTELLA_TSV: &str = "\
AIDAstella\tshipBuilder\tMeyer_Werft
AIDAstella\tshipOperator\tAIDA_Cruises
Meyer_Werft\tlocation\tPapenburg
Meyer_Werft\tparentCompany\tMeyer_Group
Samsung_Heavy_Industries\tlocation\tGeoje
AIDAstella\trdf:type\tShip
Meyer_Werft\trdf:type\tCompany
AIDA_Cruises\trdf:type\tCompany
Meyer_Group\trdf:type\tCompany
Samsung_Heavy_Industries\trdf:type\tCompany
Papenburg\trdf:type\tCity
Geoje\trdf:type\tCity
New_York\trdf:type\tCity
";

pub fn aidastella() -> KnowledgeGraph {
    ingest_str(AIDASTELLA_TSV, TripleFormat::Tsv, GraphConfig::default())
        .expect("fixed graph parses")
}

const SYLLABLES: [&str; 16] = [
    "ka", "lo", "mi", "ren", "to", "sa", "vel", "di", "no", "ra", "bes", "ul", "fa", "ti", "gor",
    "en",
];

/// Unique single-word stem for `n`, e.g. `Kalomi`.
fn stem(n: usize) -> String {
    let mut n = n + 16 * 16;
    let mut s = String::new();
    while n > 0 {
        s.push_str(SYLLABLES[n % 16]);
        n /= 16;
    }
    let mut c = s.chars();
    let first = c.next().expect("non-empty").to_ascii_uppercase();
    std::iter::once(first).chain(c).collect()
}

/// Shape of a generated graph.
#[derive(Clone, Debug)]
pub struct SyntheticSpec {
    pub clusters: usize,
    pub seed: u64,
    /// Probability that a cluster links one person to the previous cluster's team.
    pub cross_link_rate: f64,
    pub single_seeds_per_cluster: usize,
    pub chain_seeds_per_cluster: usize,
}

impl SyntheticSpec {
    pub fn new(clusters: usize, seed: u64) -> Self {
        SyntheticSpec {
            clusters,
            seed,
            cross_link_rate: 0.05,
            single_seeds_per_cluster: 12,
            chain_seeds_per_cluster: 4,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SyntheticGraph {
    pub triples: Vec<[String; 3]>,
    pub seeds: Vec<SeedPair>,
}

impl SyntheticGraph {
    pub fn to_tsv(&self) -> String {
        let mut out = String::with_capacity(self.triples.len() * 40);
        for [h, r, t] in &self.triples {
            let _ = writeln!(out, "{h}\t{r}\t{t}");
        }
        out
    }

    pub fn graph(&self) -> KnowledgeGraph {
        ingest_str(&self.to_tsv(), TripleFormat::Tsv, GraphConfig::default())
            .expect("generated triples parse")
    }

    /// Keeps the first `n` triples and the seeds fully inside them.
    pub fn truncate(&mut self, n: usize) {
        self.triples.truncate(n);
        let kept: std::collections::HashSet<&[String; 3]> = self.triples.iter().collect();
        self.seeds
            .retain(|s| s.triples.iter().all(|t| kept.contains(t)));
    }
}

struct Cluster {
    triples: Vec<[String; 3]>,
    facts: Vec<usize>,
}

impl Cluster {
    fn add(&mut self, h: &str, r: &str, t: &str) {
        let fact = r != "rdf:type";
        if fact {
            self.facts.push(self.triples.len());
        }
        self.triples
            .push([h.to_string(), r.to_string(), t.to_string()]);
    }
}

fn cluster<R: Rng>(
    counter: &mut usize,
    prev_team: Option<&str>,
    spec: &SyntheticSpec,
    rng: &mut R,
) -> (Cluster, String) {
    let mut name = |pattern: &str| {
        *counter += 1;
        pattern.replace('#', &stem(*counter))
    };
    let country = name("Republic_of_#");
    let cities: Vec<String> = (0..2).map(|_| name("#")).collect();
    let persons: Vec<String> = (0..6).map(|_| name("#_Holm")).collect();
    let companies: Vec<String> = ["#_Werft", "#_Group", "#_Lines"]
        .iter()
        .map(|p| name(p))
        .collect();
    let ships: Vec<String> = (0..2).map(|_| name("MS_#")).collect();
    let team = name("FC_#");
    let university = name("University_of_#");

    let mut c = Cluster {
        triples: Vec::new(),
        facts: Vec::new(),
    };
    let ty = |c: &mut Cluster, e: &str, types: &[&str]| {
        for t in types {
            c.add(e, "rdf:type", t);
        }
    };
    ty(&mut c, &country, &["Country", "Place"]);
    for city in &cities {
        ty(&mut c, city, &["City", "Place"]);
    }
    for p in &persons {
        ty(&mut c, p, &["Person"]);
    }
    for co in &companies {
        ty(&mut c, co, &["Company", "Organisation"]);
    }
    for s in &ships {
        ty(&mut c, s, &["Ship"]);
    }
    ty(&mut c, &team, &["SportsTeam", "Organisation"]);
    ty(&mut c, &university, &["University", "Organisation"]);

    let mut maybe = |c: &mut Cluster, p: f64, h: &str, r: &str, t: &str| {
        if rng.gen_bool(p) {
            c.add(h, r, t);
        }
    };
    c.add(&country, "capital", &cities[0]);
    maybe(&mut c, 0.8, &country, "president", &persons[0]);
    maybe(&mut c, 0.5, &country, "vicePresident", &persons[1]);
    maybe(&mut c, 0.7, &cities[0], "leaderName", &persons[2]);
    for (i, co) in companies.iter().enumerate() {
        c.add(co, "location", &cities[i % 2]);
    }
    c.add(&companies[1], "parentCompany", &companies[0]);
    maybe(&mut c, 0.5, &companies[2], "owner", &companies[0]);
    maybe(&mut c, 0.6, &companies[0], "headquarter", &cities[0]);
    maybe(&mut c, 0.7, &companies[0], "founder", &persons[3]);
    maybe(&mut c, 0.5, &companies[2], "chairman", &persons[5]);
    c.add(&ships[0], "shipBuilder", &companies[0]);
    c.add(&ships[0], "shipOperator", &companies[2]);
    maybe(&mut c, 0.7, &ships[1], "builder", &companies[1]);
    maybe(&mut c, 0.7, &ships[1], "shipOperator", &companies[2]);
    maybe(&mut c, 0.7, &persons[0], "spouse", &persons[1]);
    maybe(&mut c, 0.6, &persons[0], "child", &persons[2]);
    maybe(&mut c, 0.6, &persons[0], "successor", &persons[3]);
    maybe(&mut c, 0.5, &persons[3], "predecessor", &persons[0]);
    c.add(&persons[2], "team", &team);
    maybe(&mut c, 0.6, &persons[4], "formerTeam", &team);
    maybe(&mut c, 0.6, &persons[5], "university", &university);
    maybe(&mut c, 0.4, &persons[1], "college", &university);
    c.add(&team, "location", &cities[1]);
    c.add(&university, "location", &cities[1]);
    if let Some(prev) = prev_team {
        if rng.gen_bool(spec.cross_link_rate) {
            c.add(&persons[4], "formerTeam", prev);
        }
    }
    (c, team)
}

/// Renders the seed text for `triples` from catalog statements.
fn seed_text(catalog: &TemplateCatalog, triples: &[[String; 3]]) -> String {
    triples
        .iter()
        .map(|[h, r, t]| catalog.render_statement(h, r, t, false))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Generates `spec.clusters` loosely linked clusters of typed entities
/// (countries, cities, people, companies, ships, teams, universities) and
/// seed sentences over them: single triples and two-triple chains or forks.
pub fn synthetic(spec: &SyntheticSpec) -> SyntheticGraph {
    let catalog = TemplateCatalog::default();
    let mut out = SyntheticGraph::default();
    let mut counter = 0;
    let mut prev_team: Option<String> = None;
    for k in 0..spec.clusters {
        let mut rng = rng::stream(spec.seed, &format!("cluster-{k}"));
        let (c, team) = cluster(&mut counter, prev_team.as_deref(), spec, &mut rng);
        prev_team = Some(team);

        let mut singles = c.facts.clone();
        singles.shuffle(&mut rng);
        for (j, &i) in singles
            .iter()
            .take(spec.single_seeds_per_cluster)
            .enumerate()
        {
            let t = vec![c.triples[i].clone()];
            out.seeds.push(SeedPair::new(
                format!("c{k:06}-s{j:02}"),
                seed_text(&catalog, &t),
                t,
            ));
        }

        let mut pairs = Vec::new();
        for (a, &i) in c.facts.iter().enumerate() {
            for &j in &c.facts[a + 1..] {
                let (x, y) = (&c.triples[i], &c.triples[j]);
                let shares = x[2] == y[0] || y[2] == x[0] || x[0] == y[0];
                let same_pair = (x[0] == y[0] && x[2] == y[2]) || (x[0] == y[2] && x[2] == y[0]);
                if shares && !same_pair {
                    pairs.push(if y[2] == x[0] { (j, i) } else { (i, j) });
                }
            }
        }
        pairs.shuffle(&mut rng);
        for (j, &(a, b)) in pairs.iter().take(spec.chain_seeds_per_cluster).enumerate() {
            let t = vec![c.triples[a].clone(), c.triples[b].clone()];
            out.seeds.push(SeedPair::new(
                format!("c{k:06}-p{j:02}"),
                seed_text(&catalog, &t),
                t,
            ));
        }
        out.triples.extend(c.triples);
    }
    out
}

/// A graph of at least `n` triples, cut to exactly `n`.
pub fn synthetic_triples(n: usize, seed: u64) -> SyntheticGraph {
    let mut spec = SyntheticSpec::new(n / 40 + 1, seed);
    loop {
        let mut g = synthetic(&spec);
        if g.triples.len() >= n {
            g.truncate(n);
            return g;
        }
        spec.clusters = spec.clusters * 5 / 4 + 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn stems_unique_single_words() {
        let stems: HashSet<String> = (0..5000).map(stem).collect();
        assert_eq!(stems.len(), 5000);
        assert!(stems.iter().all(|s| s.chars().all(char::is_alphabetic)));
    }

    #[test]
    fn deterministic_and_sized() {
        let a = synthetic_triples(2000, 3);
        let b = synthetic_triples(2000, 3);
        assert_eq!(a.triples, b.triples);
        assert_eq!(a.triples.len(), 2000);
        assert!(!a.seeds.is_empty());
        let kg = a.graph();
        for s in &a.seeds {
            for [h, r, t] in &s.triples {
                assert!(kg.contains_named(h, r, t));
            }
        }
    }

    #[test]
    fn aidastella_types() {
        let kg = aidastella();
        let mw = kg.entity_id("Meyer_Werft").unwrap();
        assert_eq!(kg.entity_types(mw), vec!["Company"]);
    }
}
