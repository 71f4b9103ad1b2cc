//! Random valid sessions and publication lists.
#![allow(dead_code)]

use litscope_core::{Doi, KeywordSpec, Publication, SessionState};
use rand::seq::SliceRandom;
use rand::Rng;

const SURNAMES: [&str; 8] = ["Smith", "Müller", "O'Neil", "García", "Nguyen", "Østergaard", "Li", "Smith-Jones"];
const GIVEN: [&str; 6] = ["John", "J.", "Anna", "Wei", "Zoë", "Jean-Pierre"];
const TITLE_WORDS: [&str; 12] = [
    "The", "Visual", "Analysis", "of", "Citation", "Networks", "50%", "R&D", "{Braces}", "C#", "snake_case", "Ünïcode",
];

pub fn random_doi<R: Rng>(rng: &mut R) -> Doi {
    Doi::parse(&format!("10.{}/x.{}", rng.random_range(1000..1010), rng.random_range(0..60))).unwrap()
}

fn random_keywords<R: Rng>(rng: &mut R) -> String {
    let stems = ["vis", "citation", "graph", "net work", "Lit", "ÄRA"];
    let groups: Vec<String> = (0..rng.random_range(0..4))
        .map(|_| (0..rng.random_range(1..3)).map(|_| stems[rng.random_range(0..stems.len())]).collect::<Vec<_>>().join("|"))
        .collect();
    KeywordSpec::parse(&groups.join(",")).render()
}

/// A committed state: distinct, disjoint selected and excluded lists.
pub fn random_session<R: Rng>(rng: &mut R) -> SessionState {
    let mut pool: Vec<Doi> = (0..rng.random_range(0..30)).map(|_| random_doi(rng)).collect();
    pool.sort();
    pool.dedup();
    pool.shuffle(rng);
    let cut = rng.random_range(0..=pool.len());
    let (selected, excluded) = pool.split_at(cut);
    let read = (0..rng.random_range(0..5)).map(|_| random_doi(rng)).collect();
    SessionState {
        selected: selected.to_vec(),
        excluded: excluded.to_vec(),
        keyword_text: random_keywords(rng),
        boost_enabled: rng.random_bool(0.5),
        read_dois: read,
        ..Default::default()
    }
}

/// Publications with awkward names and titles and frequent key collisions.
pub fn random_publications<R: Rng>(rng: &mut R) -> Vec<Publication> {
    let n = rng.random_range(1..25);
    (0..n)
        .map(|k| {
            let mut p = Publication::stub(Doi::parse(&format!("10.7777/b.{k}")).unwrap());
            let words = rng.random_range(0..6);
            p.title = (0..words).map(|_| TITLE_WORDS[rng.random_range(0..TITLE_WORDS.len())]).collect::<Vec<_>>().join(" ");
            p.authors = (0..rng.random_range(0..4))
                .map(|_| format!("{} {}", GIVEN[rng.random_range(0..GIVEN.len())], SURNAMES[rng.random_range(0..SURNAMES.len())]))
                .collect();
            p.year = rng.random_bool(0.8).then(|| rng.random_range(2018..2021));
            p.venue = rng.random_bool(0.5).then(|| "Trans. on Vis & Graphics".to_string());
            p.sanitize()
        })
        .collect()
}
