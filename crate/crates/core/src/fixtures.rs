//! Classification tables transcribed as JSON, bundled into the library and
//! overridable through the `SEGRE_FIXTURES` directory.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{CurveClass, Divisor3};

pub const FIXTURE_DIR_VAR: &str = "SEGRE_FIXTURES";

const BUNDLED: [(&str, &str); 4] = [
    ("thm-4.9-rank2", include_str!("../fixtures/thm-4.9-rank2.json")),
    ("thm-5.5-rank2", include_str!("../fixtures/thm-5.5-rank2.json")),
    ("prop-3.5", include_str!("../fixtures/prop-3.5.json")),
    ("thm-1.1-higher", include_str!("../fixtures/thm-1.1-higher.json")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("no fixture named {0:?}")]
    UnknownId(String),
    #[error("fixture {id:?} has no table for c1 = {c1}")]
    NoTableForC1 { id: String, c1: Divisor3 },
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("malformed fixture {id:?}: {message}")]
    Malformed { id: String, message: String },
}

/// Which ranks an enumeration targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankMode {
    Two,
    All,
}

impl fmt::Display for RankMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankMode::Two => f.write_str("2"),
            RankMode::All => f.write_str("all"),
        }
    }
}

impl std::str::FromStr for RankMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "2" => Ok(RankMode::Two),
            "all" => Ok(RankMode::All),
            other => Err(format!("rank must be 2 or \"all\", got {other:?}")),
        }
    }
}

impl Serialize for RankMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RankMode::Two => s.serialize_u64(2),
            RankMode::All => s.serialize_str("all"),
        }
    }
}

impl<'de> Deserialize<'de> for RankMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) if n.as_u64() == Some(2) => Ok(RankMode::Two),
            serde_json::Value::String(s) if s == "all" => Ok(RankMode::All),
            other => Err(serde::de::Error::custom(format!("rank must be 2 or \"all\", got {other}"))),
        }
    }
}

/// (s; e) with the genera of the components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleRef {
    pub s: usize,
    pub e: CurveClass,
    pub g: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub s: usize,
    pub e: CurveClass,
    pub g: Vec<u32>,
    pub rank_min: u64,
    pub rank_max: u64,
    pub paper_ref: String,
}

impl FixtureRow {
    pub fn tuple(&self) -> TupleRef {
        TupleRef {
            s: self.s,
            e: self.e,
            g: self.g.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub tuple: TupleRef,
    pub reason: String,
    pub paper_ref: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub id: String,
    pub c1: Divisor3,
    pub rank: RankMode,
    /// Survivors whose top rank is below the floor are dropped and
    /// minimum ranks are raised to it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_floor: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_s: Option<usize>,
    pub rows: Vec<FixtureRow>,
    #[serde(default)]
    pub exclusions: Vec<Exclusion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Document {
    One(Box<Fixture>),
    Many(Vec<Fixture>),
}

/// Parses a fixture file holding one table or a list of tables.
pub fn parse_tables(id: &str, text: &str) -> Result<Vec<Fixture>, FixtureError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| FixtureError::Malformed {
        id: id.to_string(),
        message: e.to_string(),
    })?;
    let tables = match doc {
        Document::One(f) => vec![*f],
        Document::Many(v) => v,
    };
    for t in &tables {
        if t.id != id {
            return Err(FixtureError::Malformed {
                id: id.to_string(),
                message: format!("table declares id {:?}", t.id),
            });
        }
        for r in &t.rows {
            if r.g.len() != r.s {
                return Err(FixtureError::Malformed {
                    id: id.to_string(),
                    message: format!("row with s = {} lists {} genera", r.s, r.g.len()),
                });
            }
        }
    }
    Ok(tables)
}

pub fn bundled_ids() -> Vec<&'static str> {
    BUNDLED.iter().map(|(id, _)| *id).collect()
}

fn pick(id: &str, c1: &Divisor3, tables: Vec<Fixture>) -> Result<Fixture, FixtureError> {
    tables.into_iter().find(|t| t.c1 == *c1).ok_or(FixtureError::NoTableForC1 {
        id: id.to_string(),
        c1: *c1,
    })
}

/// The table compiled into the library.
pub fn bundled(id: &str, c1: &Divisor3) -> Result<Fixture, FixtureError> {
    let text = BUNDLED
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(_, text)| *text)
        .ok_or_else(|| FixtureError::UnknownId(id.to_string()))?;
    pick(id, c1, parse_tables(id, text)?)
}

/// All bundled tables.
pub fn bundled_all() -> Result<Vec<Fixture>, FixtureError> {
    let mut out = Vec::new();
    for (id, text) in BUNDLED {
        out.extend(parse_tables(id, text)?);
    }
    Ok(out)
}

/// Reads `<dir>/<id>.json`.
pub fn from_dir(dir: &Path, id: &str, c1: &Divisor3) -> Result<Fixture, FixtureError> {
    let path = dir.join(format!("{id}.json"));
    let text = std::fs::read_to_string(&path).map_err(|e| FixtureError::Io {
        path: path.clone(),
        message: e.to_string(),
    })?;
    pick(id, c1, parse_tables(id, &text)?)
}

/// Looks in `$SEGRE_FIXTURES` when set, else in the bundled tables.
pub fn load(id: &str, c1: &Divisor3) -> Result<Fixture, FixtureError> {
    match std::env::var_os(FIXTURE_DIR_VAR) {
        Some(dir) if !dir.is_empty() => from_dir(Path::new(&dir), id, c1),
        _ => bundled(id, c1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_parse() {
        let all = bundled_all().unwrap();
        assert_eq!(all.len(), 5);
        assert!(bundled("thm-1.1-higher", &Divisor3::new(2, 1, 1)).is_ok());
        assert!(bundled("thm-1.1-higher", &Divisor3::new(1, 1, 1)).is_ok());
        assert!(matches!(
            bundled("thm-4.9-rank2", &Divisor3::new(1, 1, 1)),
            Err(FixtureError::NoTableForC1 { .. })
        ));
        assert!(matches!(bundled("nope", &Divisor3::new(1, 1, 1)), Err(FixtureError::UnknownId(_))));
    }

    #[test]
    fn rank_mode_json() {
        assert_eq!(serde_json::to_string(&RankMode::Two).unwrap(), "2");
        assert_eq!(serde_json::to_string(&RankMode::All).unwrap(), "\"all\"");
        let r: RankMode = serde_json::from_str("\"all\"").unwrap();
        assert_eq!(r, RankMode::All);
        assert!(serde_json::from_str::<RankMode>("3").is_err());
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let text = r#"{"id":"x","c1":[1,1,1],"rank":2,"rows":[{"s":2,"e":[0,1,1],"g":[0],"rank_min":2,"rank_max":2,"paper_ref":""}]}"#;
        assert!(matches!(parse_tables("x", text), Err(FixtureError::Malformed { .. })));
        assert!(matches!(parse_tables("y", text), Err(FixtureError::Malformed { .. })));
    }

    #[test]
    fn directory_override() {
        let dir = std::env::temp_dir().join(format!("segre-fixture-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let text = r#"{"id":"custom","c1":[1,1,1],"rank":2,"rows":[]}"#;
        std::fs::write(dir.join("custom.json"), text).unwrap();
        let f = from_dir(&dir, "custom", &Divisor3::new(1, 1, 1)).unwrap();
        assert!(f.rows.is_empty());
        assert!(matches!(from_dir(&dir, "absent", &Divisor3::new(1, 1, 1)), Err(FixtureError::Io { .. })));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
