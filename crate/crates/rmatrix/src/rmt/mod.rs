//! The RMT table format.
//!
//! ```text
//! rmt m=2 kind=trig variant=literal
//!
//! # optional label, kept with the group
//! group [a] * [a-u]^-1
//!   term e 2 3 3 2
//!   term bold * q^{u} e 3 2 2 3
//! ```
//!
//! A `term` line `e i k j l` stands for the basis element `e^{ik}_{jl}`:
//! output pair `(i, k)`, input pair `(j, l)`.

mod emit;
mod parse;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::CoeffExpr;

pub use emit::emit_rmt;
pub use parse::{check_helpers, parse_rmt};
pub use validate::{expected_count, validate_table, TableReport};

/// `(i, k, j, l)` with 1-based indices.
pub type Quad = [u16; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Trig,
    Quantum,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Trig => "trig",
            Kind::Quantum => "quantum",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "trig" => Ok(Kind::Trig),
            "quantum" => Ok(Kind::Quantum),
            _ => Err(format!("unknown kind `{s}` (expected trig or quantum)")),
        }
    }
}

/// Which transcription of a table: exactly as printed, or with the
/// corrections needed for the projector and Yang–Baxter identities to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Literal,
    Corrected,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Literal => "literal",
            Variant::Corrected => "corrected",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "literal" => Ok(Variant::Literal),
            "corrected" => Ok(Variant::Corrected),
            _ => Err(format!("unknown variant `{s}` (expected literal or corrected)")),
        }
    }
}

/// Source line of a parsed item. Compares equal to every other span so that
/// structural equality of tables ignores layout.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Span {
    pub line: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermEntry {
    pub quad: Quad,
    pub bold: bool,
    pub monomial: CoeffExpr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermGroup {
    pub label: Option<String>,
    pub prefactor: CoeffExpr,
    pub entries: Vec<TermEntry>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RTable {
    pub m: u8,
    pub kind: Kind,
    pub variant: Variant,
    pub groups: Vec<TermGroup>,
}

impl RTable {
    pub fn dim(&self) -> usize {
        1 << self.m
    }

    pub fn entries(&self) -> impl Iterator<Item = (&TermGroup, &TermEntry)> {
        self.groups.iter().flat_map(|g| g.entries.iter().map(move |e| (g, e)))
    }

    pub fn entry_count(&self) -> usize {
        self.groups.iter().map(|g| g.entries.len()).sum()
    }

    /// Short identifier, e.g. `m3_trig (corrected)`.
    pub fn id(&self) -> String {
        format!("m{}_{} ({})", self.m, self.kind, self.variant)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RmtError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Semantic { line: usize, msg: String },
}
