//! Seeded synthetic corpora in fixture format, for tests and benchmarks.

use litscope_core::Doi;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fixture::{FixtureData, FixtureEntry};

const VOCABULARY: &[&str] = &[
    "visual", "citation", "network", "analysis", "treemap", "graph", "layout", "survey", "interactive",
    "literature", "search", "exploration", "scholarly", "recommendation", "timeline", "clustering", "review",
    "evaluation", "design", "overview", "text", "map", "embedding", "user", "study", "large", "dynamic",
];

const NAMES: &[&str] = &[
    "Ada Lovelace", "A. Lovelace", "Alan Turing", "Grace Hopper", "G. Hopper", "Edsger Dijkstra", "Barbara Liskov",
    "Donald Knuth", "D. E. Knuth", "Jürgen Müller", "Jurgen Muller", "Ben Shneiderman", "Tamara Munzner",
    "Jeffrey Heer", "J. Heer", "Stuart Card", "Jock Mackinlay", "Jean-Daniel Fekete", "Fabian Beck", "F. Beck",
];

#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub n_publications: usize,
    /// Upper bound on outgoing references per publication.
    pub max_references: usize,
    pub first_year: i32,
    pub last_year: i32,
    /// Share of publications without metadata, in percent.
    pub missing_metadata_percent: u32,
    /// Publications reported as cited at least 1000 times.
    pub n_heavily_cited: usize,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            seed: 0,
            n_publications: 200,
            max_references: 12,
            first_year: 1995,
            last_year: 2024,
            missing_metadata_percent: 5,
            n_heavily_cited: 2,
        }
    }
}

pub fn synthetic_doi(i: usize) -> Doi {
    Doi::parse(&format!("10.5555/syn.{i:05}")).expect("synthetic DOI is well formed")
}

/// Publication `i` cites only publications with a smaller index, so the
/// graph is acyclic and years roughly increase with the index.
pub fn synthetic_corpus(spec: &SyntheticSpec) -> FixtureData {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let span = (spec.last_year - spec.first_year).max(0) as usize;
    let n = spec.n_publications;
    let mut data = FixtureData::with_capacity(n);
    for i in 0..n {
        let doi = synthetic_doi(i);
        let mut entry = FixtureEntry::default();
        if rng.random_range(0..100) >= spec.missing_metadata_percent {
            let n_words = rng.random_range(2..=6);
            let words: Vec<&str> = (0..n_words).map(|_| *VOCABULARY.choose(&mut rng).unwrap()).collect();
            entry.title = Some(words.join(" "));
            let n_authors = rng.random_range(1..=4);
            entry.authors = (0..n_authors).map(|_| NAMES.choose(&mut rng).unwrap().to_string()).collect();
            entry.orcids = entry
                .authors
                .iter()
                .map(|a| rng.random_bool(0.2).then(|| format!("0000-0001-{:04}-0000", a.len())))
                .collect();
            let base = spec.first_year + (i * span / n.max(1)) as i32;
            entry.year = Some((base + rng.random_range(0..=2)).min(spec.last_year));
            entry.venue = rng.random_bool(0.7).then(|| "Synthetic Journal".to_string());
            if rng.random_bool(0.1) {
                entry.n_citing = Some(rng.random_range(40..160));
            }
        }
        if i > 0 {
            let k = rng.random_range(0..=spec.max_references.min(i));
            let mut refs: Vec<usize> = (0..k).map(|_| rng.random_range(0..i)).collect();
            refs.sort_unstable();
            refs.dedup();
            entry.citing = refs.into_iter().map(synthetic_doi).collect();
        }
        data.insert(doi, entry);
    }
    for i in 0..spec.n_heavily_cited.min(n) {
        if let Some(entry) = data.get_mut(&synthetic_doi(i)) {
            entry.n_cited_by = Some(1000 + 500 * i as u32);
        }
    }
    data
}
