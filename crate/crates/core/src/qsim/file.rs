//! JSON algorithm files.
//!
//! ```json
//! {"N": 2, "work": 2, "unitaries": [[[1, 0], [0, 0], ...], ...]}
//! ```
//!
//! Each unitary is a flat row-major list of `[re, im]` entries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Matrix, QueryAlgorithm, DEFAULT_WORK};
use crate::error::{Error, Result};

fn default_work() -> usize {
    DEFAULT_WORK
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "default_work")]
    pub work: usize,
    pub unitaries: Vec<Vec<[f64; 2]>>,
}

impl AlgorithmFile {
    pub fn from_algorithm(alg: &QueryAlgorithm) -> Self {
        Self {
            n: alg.arity(),
            work: alg.work(),
            unitaries: alg
                .unitaries()
                .iter()
                .map(|u| u.data().iter().map(|c| [c.re, c.im]).collect())
                .collect(),
        }
    }

    pub fn into_algorithm(self) -> Result<QueryAlgorithm> {
        let dim = (self.n + 1) * self.work;
        let us = self
            .unitaries
            .into_iter()
            .map(|u| Matrix::from_rows(dim, u.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
            .collect::<Result<Vec<_>>>()?;
        QueryAlgorithm::new(self.n, self.work, us)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("algorithm serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            position: e.column(),
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let alg = QueryAlgorithm::parity2();
        let json = AlgorithmFile::from_algorithm(&alg).to_json();
        let back = AlgorithmFile::from_json(&json).unwrap().into_algorithm().unwrap();
        assert_eq!(back.unitaries(), alg.unitaries());
    }

    #[test]
    fn rejects_non_unitary() {
        let mut file = AlgorithmFile::from_algorithm(&QueryAlgorithm::identity(1, 2, 1).unwrap());
        file.unitaries[1][0] = [0.5, 0.0];
        assert!(matches!(file.into_algorithm(), Err(Error::NotUnitary { index: 1, .. })));
        let short = r#"{"N": 1, "unitaries": [[[1, 0]]]}"#;
        assert!(AlgorithmFile::from_json(short).unwrap().into_algorithm().is_err());
    }
}
