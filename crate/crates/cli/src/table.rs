//! Fixed-width terminal tables, at most 80 columns wide.

use litscope_core::Tag;
use litscope_service::views::{AuthorsPage, FoundPublication, SuggestionsPage};

pub const WIDTH: usize = 80;

/// Cuts `text` to `width` characters, ending in an ellipsis when cut.
pub fn truncate(text: &str, width: usize) -> String {
    if text.chars().count() <= width {
        return text.to_string();
    }
    let mut out: String = text.chars().take(width.saturating_sub(1)).collect();
    out.push('…');
    out
}

fn tag_letters(tags: &[Tag]) -> String {
    tags.iter()
        .map(|t| match t {
            Tag::HighlyCited => 'H',
            Tag::LiteratureSurvey => 'S',
            Tag::New => 'N',
            Tag::Unnoted => 'U',
        })
        .collect()
}

fn year(y: Option<i32>) -> String {
    y.map_or_else(|| "----".to_string(), |y| y.to_string())
}

fn line(prefix: String, title: &str) -> String {
    let room = WIDTH.saturating_sub(prefix.chars().count());
    format!("{prefix}{}", truncate(title, room))
}

pub fn suggestions(page: &SuggestionsPage) -> String {
    let mut out = format!(
        "{} of {} candidates loaded, {} shown\ntags: H highly cited, S survey, N new, U unnoted\n",
        page.loaded_count,
        page.total_candidates,
        page.entries.len()
    );
    out.push_str(&format!("{:>4} {:>6} {:>3} {:>3} {:>2} {:>4} {:<4} title\n", "#", "s", "o", "i", "b", "year", "tags"));
    for (k, e) in page.entries.iter().enumerate() {
        let title = if e.loaded { e.title.as_str() } else { e.doi.as_str() };
        let prefix = format!(
            "{:>4} {:>6} {:>3} {:>3} {:>2} {:>4} {:<4} ",
            page.offset + k + 1,
            e.score.s,
            e.score.o,
            e.score.i,
            e.score.b,
            year(e.year),
            tag_letters(&e.tags)
        );
        out.push_str(&line(prefix, title));
        out.push('\n');
    }
    out
}

pub fn authors(page: &AuthorsPage) -> String {
    let mut out = format!("condition {}, {} authors\n", page.condition, page.total);
    out.push_str(&format!("{:>4} {:>7} {:>4} {:<9} name\n", "#", "score", "pubs", "years"));
    for (k, a) in page.authors.iter().enumerate() {
        let years = match (a.first_year, a.last_year) {
            (Some(f), Some(l)) if f == l => f.to_string(),
            (Some(f), Some(l)) => format!("{f}-{l}"),
            _ => String::new(),
        };
        let prefix = format!("{:>4} {:>7} {:>4} {:<9} ", k + 1, a.score, a.publications.len(), years);
        out.push_str(&line(prefix, &a.name));
        out.push('\n');
    }
    out
}

pub fn found(results: &[FoundPublication]) -> String {
    let mut out = String::new();
    for r in results {
        let prefix = format!("{:<28} {:>4} ", truncate(r.doi.as_str(), 28), year(r.year));
        out.push_str(&line(prefix, &r.title));
        out.push('\n');
    }
    out
}
