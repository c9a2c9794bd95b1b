//! OEIS-style b-files: one `index value` pair per line, `#` comments.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFile {
    pub entries: Vec<(i64, BigInt)>,
}

impl BFile {
    pub fn from_slice(first_index: i64, values: &[BigInt]) -> Self {
        BFile {
            entries: values.iter().enumerate().map(|(i, v)| (first_index + i as i64, v.clone())).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: &str| Error::BFile {
                line: i + 1,
                reason: reason.to_string(),
            };
            let mut parts = line.split_whitespace();
            let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err("expected `index value`"));
            };
            let idx = i64::from_str(idx).map_err(|_| err("bad index"))?;
            let val = BigInt::from_str(val).map_err(|_| err("bad value"))?;
            if let Some(&(prev, _)) = entries.last() {
                if idx != prev + 1 {
                    return Err(err("indices are not consecutive"));
                }
            }
            entries.push((idx, val));
        }
        Ok(BFile { entries })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, v) in &self.entries {
            let _ = writeln!(out, "{i} {v}");
        }
        out
    }

    pub fn value_at(&self, index: i64) -> Option<&BigInt> {
        let first = self.entries.first()?.0;
        let pos = usize::try_from(index - first).ok()?;
        self.entries.get(pos).map(|(_, v)| v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermMatch {
    Equal,
    Negated,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermComparison {
    pub index: i64,
    pub ours: String,
    pub reference: String,
    pub status: TermMatch,
}

/// Per-index comparison of a computed sequence with a reference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub offset: i64,
    pub terms: Vec<TermComparison>,
    /// First index (in the computed numbering) whose absolute values differ.
    pub first_divergence: Option<i64>,
}

impl Comparison {
    pub fn compared(&self) -> usize {
        self.terms.len()
    }

    /// Overlap is nonempty and every term agrees up to sign.
    pub fn matches(&self) -> bool {
        !self.terms.is_empty() && self.first_divergence.is_none()
    }

    pub fn exact(&self) -> bool {
        self.matches() && self.terms.iter().all(|t| t.status == TermMatch::Equal)
    }
}

/// Compares `ours[i]` with `reference[i + offset]` term by term; a pair
/// matches when the absolute values agree.
pub fn compare(ours: &BFile, reference: &BFile, offset: i64) -> Comparison {
    let terms: Vec<TermComparison> = ours
        .entries
        .iter()
        .filter_map(|(i, a)| {
            let b = reference.value_at(i + offset)?;
            let status = if a == b {
                TermMatch::Equal
            } else if a.magnitude() == b.magnitude() {
                TermMatch::Negated
            } else {
                TermMatch::Mismatch
            };
            Some(TermComparison {
                index: *i,
                ours: a.to_string(),
                reference: b.to_string(),
                status,
            })
        })
        .collect();
    let first_divergence = terms.iter().find(|t| t.status == TermMatch::Mismatch).map(|t| t.index);
    Comparison {
        offset,
        terms,
        first_divergence,
    }
}
