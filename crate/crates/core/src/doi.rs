//! DOI identity.
//!
//! Every publication is keyed by its normalized DOI: lowercase, no resolver
//! prefix, no surrounding whitespace, always starting with `10.`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

const SCHEMES: [&str; 2] = ["https://", "http://"];
const RESOLVERS: [&str; 2] = ["dx.doi.org/", "doi.org/"];
const DOI_SCHEME: &str = "doi:";

/// A normalized Digital Object Identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Doi(String);

impl Doi {
    /// Normalizes `raw` into a [`Doi`].
    ///
    /// Accepted prefixes are `http://`, `https://`, `dx.doi.org/`,
    /// `doi.org/` and `doi:`; anything else in front of `10.` is rejected.
    pub fn parse(raw: &str) -> Result<Self, Error> {
        let lowered = raw.trim().to_lowercase();
        if lowered.is_empty() {
            return Err(Error::MalformedDoi(raw.to_string()));
        }

        let mut rest = lowered.as_str();
        for scheme in SCHEMES {
            if let Some(stripped) = rest.strip_prefix(scheme) {
                rest = stripped;
                break;
            }
        }
        for resolver in RESOLVERS {
            if let Some(stripped) = rest.strip_prefix(resolver) {
                rest = stripped;
                break;
            }
        }
        if let Some(stripped) = rest.strip_prefix(DOI_SCHEME) {
            rest = stripped.trim_start();
        }

        if !rest.starts_with("10.") || rest.len() <= 3 || rest.chars().any(char::is_whitespace) {
            return Err(Error::MalformedDoi(raw.to_string()));
        }
        Ok(Doi(rest.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Resolver URL, for links in exports and the UI.
    pub fn url(&self) -> String {
        format!("https://doi.org/{}", self.0)
    }
}

/// Free-function form of [`Doi::parse`].
pub fn normalize_doi(raw: &str) -> Result<Doi, Error> {
    Doi::parse(raw)
}

impl fmt::Display for Doi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Doi {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl FromStr for Doi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Doi::parse(s)
    }
}

impl Serialize for Doi {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Doi {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Doi::parse(&raw).map_err(serde::de::Error::custom)
    }
}
