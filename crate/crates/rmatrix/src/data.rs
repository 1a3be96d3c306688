//! The shipped tables and helper definitions, and variant resolution.
//!
//! Every `(m, kind)` has a `literal` table (the transcription as printed).
//! Where that transcription does not satisfy the projector-sum and
//! Yang–Baxter identities a `corrected` table ships alongside it; asking for
//! `corrected` where none exists yields the literal table, which is then
//! already correct.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::Error;
use crate::rmt::{check_helpers, parse_rmt, Kind, RTable, Variant};
use crate::scalar::{parse_helpers, HelperSet};

/// Environment variable naming a directory that replaces the shipped data.
pub const DATA_DIR_ENV: &str = "RMT_DATA_DIR";

const HELPERS: &str = include_str!("../data/helpers.rmh");

const TABLES: &[(&str, &str)] = &[
    ("m1_trig.rmt", include_str!("../data/m1_trig.rmt")),
    ("m1_quantum.rmt", include_str!("../data/m1_quantum.rmt")),
    ("m2_trig.rmt", include_str!("../data/m2_trig.rmt")),
    ("m2_trig_literal.rmt", include_str!("../data/m2_trig_literal.rmt")),
    ("m2_quantum.rmt", include_str!("../data/m2_quantum.rmt")),
    ("m3_trig.rmt", include_str!("../data/m3_trig.rmt")),
    ("m3_trig_literal.rmt", include_str!("../data/m3_trig_literal.rmt")),
    ("m3_quantum.rmt", include_str!("../data/m3_quantum.rmt")),
    ("m3_quantum_literal.rmt", include_str!("../data/m3_quantum_literal.rmt")),
    ("m4_trig.rmt", include_str!("../data/m4_trig.rmt")),
    ("m4_trig_literal.rmt", include_str!("../data/m4_trig_literal.rmt")),
    ("m4_quantum.rmt", include_str!("../data/m4_quantum.rmt")),
    ("m4_quantum_literal.rmt", include_str!("../data/m4_quantum_literal.rmt")),
];

#[derive(Clone, Debug)]
pub struct TableStore {
    pub helpers: HelperSet,
    tables: BTreeMap<(u8, Kind, Variant), RTable>,
    /// Source name of each table, for diagnostics.
    sources: BTreeMap<(u8, Kind, Variant), String>,
}

fn with_name<T>(name: &str, r: Result<T, crate::rmt::RmtError>) -> Result<T, Error> {
    r.map_err(|e| Error::Io { path: name.to_string(), source: std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()) })
}

impl TableStore {
    /// Builds a store from `(name, text)` pairs; tables are keyed by their headers.
    pub fn from_sources<'a>(helpers: &str, tables: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self, Error> {
        let helpers = with_name("helpers.rmh", parse_helpers(helpers))?;
        let mut store = TableStore { helpers, tables: BTreeMap::new(), sources: BTreeMap::new() };
        for (name, text) in tables {
            let t = with_name(name, parse_rmt(text))?;
            with_name(name, check_helpers(&t, &store.helpers))?;
            let key = (t.m, t.kind, t.variant);
            if let Some(prev) = store.sources.get(&key) {
                return Err(Error::Io {
                    path: name.to_string(),
                    source: std::io::Error::new(std::io::ErrorKind::InvalidData, format!("duplicates table {prev}")),
                });
            }
            store.sources.insert(key, name.to_string());
            store.tables.insert(key, t);
        }
        Ok(store)
    }

    /// The tables compiled into the library.
    pub fn embedded() -> Self {
        Self::from_sources(HELPERS, TABLES.iter().copied()).expect("shipped tables parse")
    }

    /// `helpers.rmh` and every `*.rmt` in `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, Error> {
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|source| Error::Io { path: p.display().to_string(), source });
        let helpers = read(&dir.join("helpers.rmh"))?;
        let entries = std::fs::read_dir(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
        let mut files = Vec::new();
        for e in entries {
            let p = e.map_err(|source| Error::Io { path: dir.display().to_string(), source })?.path();
            if p.extension().is_some_and(|x| x == "rmt") {
                files.push((p.display().to_string(), read(&p)?));
            }
        }
        files.sort();
        Self::from_sources(&helpers, files.iter().map(|(n, t)| (n.as_str(), t.as_str())))
    }

    /// `RMT_DATA_DIR` when set, the embedded tables otherwise.
    pub fn load() -> Result<Self, Error> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::from_dir(Path::new(&d)),
            _ => Ok(Self::embedded()),
        }
    }

    /// Exact lookup, no fallback.
    pub fn exact(&self, m: u8, kind: Kind, variant: Variant) -> Option<&RTable> {
        self.tables.get(&(m, kind, variant))
    }

    /// Resolves `variant`; `corrected` falls back to `literal` when no
    /// separate corrected table exists.
    pub fn get(&self, m: u8, kind: Kind, variant: Variant) -> Result<&RTable, Error> {
        if !(1..=4).contains(&m) {
            return Err(Error::Level(m));
        }
        self.exact(m, kind, variant)
            .or_else(|| if variant == Variant::Corrected { self.exact(m, kind, Variant::Literal) } else { None })
            .ok_or(Error::NoTable { m, kind })
    }

    /// True when `(m, kind)` has distinct literal and corrected tables.
    pub fn has_correction(&self, m: u8, kind: Kind) -> bool {
        self.exact(m, kind, Variant::Corrected).is_some()
    }

    pub fn tables(&self) -> impl Iterator<Item = &RTable> {
        self.tables.values()
    }

    pub fn source(&self, t: &RTable) -> Option<&str> {
        self.sources.get(&(t.m, t.kind, t.variant)).map(String::as_str)
    }
}
