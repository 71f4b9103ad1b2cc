//! Naive reference implementation of candidate scoring and ranking, written
//! from the rules alone: plain loops over an edge list, no index, no sorting
//! helpers from the crate under test.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use litscope_core::{Doi, Publication};
use rand::seq::IteratorRandom;
use rand::Rng;

const WORDS: [&str; 16] = [
    "citation", "network", "visual", "analysis", "graph", "literature", "search", "survey", "topic", "model", "author",
    "ranking", "timeline", "review", "scalable", "interactive",
];
const STEMS: [&str; 10] = ["CIT", "NET", "VIS", "GRAPH", "LIT", "SEARCH", "TOP", "RANK", "TIME", "INTER"];

#[derive(Debug, Clone)]
pub struct Graph {
    pub dois: Vec<String>,
    /// `None` when metadata has not been loaded.
    pub titles: Vec<Option<String>>,
    /// (from, to): `from` cites `to`.
    pub edges: BTreeSet<(usize, usize)>,
    pub selected: BTreeSet<usize>,
    pub excluded: BTreeSet<usize>,
    pub keywords: Vec<Vec<String>>,
    pub boost: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub doi: String,
    pub o: u32,
    pub i: u32,
    pub b: u32,
    pub s: u64,
}

pub fn random_graph<R: Rng>(rng: &mut R) -> Graph {
    let n = rng.random_range(2..=50usize);
    let dois: Vec<String> = (0..n).map(|k| format!("10.5555/n{k}")).collect();
    let titles = (0..n)
        .map(|_| {
            (!rng.random_bool(0.1)).then(|| {
                let len = rng.random_range(1..=6);
                (0..len).map(|_| WORDS[rng.random_range(0..WORDS.len())]).collect::<Vec<_>>().join(" ")
            })
        })
        .collect();
    let max_edges = (n * (n - 1)).min(300);
    let m = rng.random_range(0..=max_edges);
    let mut edges = BTreeSet::new();
    while edges.len() < m {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            edges.insert((a, b));
        }
    }
    let n_selected = rng.random_range(1..=n.min(8));
    let selected: BTreeSet<usize> = (0..n).choose_multiple(rng, n_selected).into_iter().collect();
    let excluded = (0..n).filter(|k| !selected.contains(k) && rng.random_bool(0.05)).collect();
    let keywords = (0..rng.random_range(0..=4))
        .map(|_| (0..rng.random_range(1..=3)).map(|_| STEMS[rng.random_range(0..STEMS.len())].to_string()).collect())
        .collect();
    Graph { dois, titles, edges, selected, excluded, keywords, boost: rng.random_bool(0.7) }
}

impl Graph {
    pub fn keyword_text(&self) -> String {
        self.keywords.iter().map(|g| g.join("|")).collect::<Vec<_>>().join(", ")
    }

    fn boost_degree(&self, node: usize) -> u32 {
        let Some(title) = &self.titles[node] else { return 0 };
        let title = title.to_lowercase();
        let mut b = 0;
        for group in &self.keywords {
            if group.iter().any(|alt| title.contains(&alt.to_lowercase())) {
                b += 1;
            }
        }
        b
    }

    fn expected(&self, node: usize, o: u32, i: u32) -> Expected {
        let b = self.boost_degree(node);
        let mut s = u64::from(o + i);
        if self.boost {
            for _ in 0..b {
                s *= 2;
            }
        }
        Expected { doi: self.dois[node].clone(), o, i, b, s }
    }

    fn links(&self, node: usize) -> (u32, u32) {
        let mut o = 0;
        let mut i = 0;
        for &p in &self.selected {
            if p == node {
                continue;
            }
            if self.edges.contains(&(node, p)) {
                o += 1;
            }
            if self.edges.contains(&(p, node)) {
                i += 1;
            }
        }
        (o, i)
    }

    /// Candidates in rank order.
    pub fn naive_suggestions(&self) -> Vec<Expected> {
        let mut candidates = BTreeSet::new();
        for &(a, b) in &self.edges {
            for (mine, other) in [(a, b), (b, a)] {
                if self.selected.contains(&mine) && !self.selected.contains(&other) && !self.excluded.contains(&other) {
                    candidates.insert(other);
                }
            }
        }
        let mut out: Vec<Expected> = candidates
            .into_iter()
            .map(|c| {
                let (o, i) = self.links(c);
                self.expected(c, o, i)
            })
            .collect();
        out.sort_by_key(|e| (Reverse(e.s), Reverse(e.i), Reverse(e.o), e.doi.clone()));
        out
    }

    /// Selected publications with the virtual self-citation, keyed by DOI.
    pub fn naive_selected(&self) -> BTreeMap<String, Expected> {
        self.selected
            .iter()
            .map(|&p| {
                let (o, i) = self.links(p);
                (self.dois[p].clone(), self.expected(p, o, i + 1))
            })
            .collect()
    }

    pub fn doi(&self, node: usize) -> Doi {
        Doi::parse(&self.dois[node]).unwrap()
    }

    /// Publications carrying each link on the citing side, the cited side
    /// or both, as sources do.
    pub fn publications<R: Rng>(&self, rng: &mut R) -> Vec<Publication> {
        let mut pubs: Vec<Publication> = (0..self.dois.len())
            .map(|k| {
                let mut p = Publication::stub(self.doi(k));
                p.title = self.titles[k].clone().unwrap_or_default();
                p
            })
            .collect();
        for &(a, b) in &self.edges {
            match rng.random_range(0..3) {
                0 => {
                    pubs[a].citing.insert(self.doi(b));
                }
                1 => {
                    pubs[b].cited_by.insert(self.doi(a));
                }
                _ => {
                    pubs[a].citing.insert(self.doi(b));
                    pubs[b].cited_by.insert(self.doi(a));
                }
            }
        }
        pubs.into_iter().map(Publication::sanitize).collect()
    }
}
