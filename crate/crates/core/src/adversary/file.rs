//! JSON scheme files.
//!
//! ```json
//! {
//!   "function": {"arity": 3, "table": "01111110"},
//!   "A": [0, 7],
//!   "B": [1, 2, 3, 4, 5, 6],
//!   "pairs": [{"x": 0, "y": 1, "w": "2", "wp": {"3": ["2*sqrt(2)", "sqrt(2)"]}}]
//! }
//! ```
//!
//! `function` may also be a path to a truth-table file, resolved relative to
//! the scheme file. Weights are exact strings; floats are rejected.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adversary::scheme::{PairSpec, WeightScheme};
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::weight::{ExactWeight, Weight};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionRef {
    Inline { arity: usize, table: String },
    Path(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRecord {
    pub x: u64,
    pub y: u64,
    pub w: String,
    pub wp: BTreeMap<String, [String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub function: FunctionRef,
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    pub pairs: Vec<PairRecord>,
}

fn exact_string(w: &Weight) -> Result<String> {
    w.exact()
        .map(|e| e.to_string())
        .ok_or_else(|| Error::NotRepresentable(format!("approximate weight {w}")))
}

fn parse_weight(s: &str) -> Result<Weight> {
    Ok(Weight::Exact(s.parse::<ExactWeight>()?))
}

impl SchemeFile {
    pub fn from_scheme(scheme: &WeightScheme) -> Result<Self> {
        let f = scheme.function();
        let mut pairs = Vec::with_capacity(scheme.len());
        for (p, pair) in scheme.pairs().iter().enumerate() {
            let mut wp = BTreeMap::new();
            let mut err = None;
            scheme.for_each_directional(p, |i, fwd, bwd| {
                match (exact_string(&fwd), exact_string(&bwd)) {
                    (Ok(a), Ok(b)) => {
                        wp.insert(i.to_string(), [a, b]);
                    }
                    (Err(e), _) | (_, Err(e)) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            pairs.push(PairRecord {
                x: pair.x,
                y: pair.y,
                w: exact_string(&pair.w)?,
                wp,
            });
        }
        Ok(Self {
            function: FunctionRef::Inline {
                arity: f.arity(),
                table: f.table_string(),
            },
            a: scheme.a().to_vec(),
            b: scheme.b().to_vec(),
            pairs,
        })
    }

    /// Builds the scheme; `base` resolves a function given by path.
    pub fn into_scheme(self, base: Option<&Path>) -> Result<WeightScheme> {
        let f = match self.function {
            FunctionRef::Inline { arity, table } => {
                BooleanFunction::from_text(&format!("{arity}\n{table}\n"))?
            }
            FunctionRef::Path(p) => {
                let path = match base {
                    Some(dir) => dir.join(&p),
                    None => p.into(),
                };
                BooleanFunction::from_text(&std::fs::read_to_string(&path)?)?
            }
        };
        let n = f.arity();
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for rec in self.pairs {
            let mut wp = Vec::with_capacity(rec.wp.len());
            for (key, [fwd, bwd]) in &rec.wp {
                let i: usize = key.parse().map_err(|_| {
                    Error::MalformedScheme(format!(
                        "pair ({}, {}): index key {key:?} is not a number",
                        rec.x, rec.y
                    ))
                })?;
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, arity: n });
                }
                wp.push((i, parse_weight(fwd)?, parse_weight(bwd)?));
            }
            pairs.push(PairSpec {
                x: rec.x,
                y: rec.y,
                w: parse_weight(&rec.w)?,
                wp,
            });
        }
        WeightScheme::new(Arc::new(f), self.a, self.b, pairs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scheme serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            position: e.column(),
            message: e.to_string(),
        })
    }
}

pub fn read_scheme(path: &Path) -> Result<WeightScheme> {
    let text = std::fs::read_to_string(path)?;
    SchemeFile::from_json(&text)?.into_scheme(path.parent())
}

pub fn write_scheme(scheme: &WeightScheme, path: &Path) -> Result<()> {
    std::fs::write(path, SchemeFile::from_scheme(scheme)?.to_json())?;
    Ok(())
}
