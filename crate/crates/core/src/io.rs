//! Generator-set files.
//!
//! ```json
//! {"n": 3, "rounds": 4, "closed": true,
//!  "generators": [{"name": "t", "provenance": "x0", "round": 0,
//!                  "signature": [1, 3, 0], "polynomial": "x0", "term_count": 1}]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{format_poly, parse_poly};
use crate::solver::KernelResult;
use crate::subalgebra::{GeneratorInfo, Signature};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub provenance: String,
    #[serde(default)]
    pub round: u32,
    pub signature: Signature,
    pub polynomial: String,
    pub term_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub n: usize,
    pub rounds: u32,
    #[serde(default = "default_closed")]
    pub closed: bool,
    pub generators: Vec<GeneratorRecord>,
}

fn default_closed() -> bool {
    true
}

impl From<&KernelResult> for GeneratorFile {
    fn from(result: &KernelResult) -> Self {
        GeneratorFile {
            n: result.n,
            rounds: result.rounds_used,
            closed: result.closed,
            generators: result
                .generators
                .iter()
                .map(|g| GeneratorRecord {
                    name: g.name.clone(),
                    provenance: g.provenance.clone(),
                    round: g.round,
                    signature: g.sig,
                    polynomial: format_poly(&g.poly),
                    term_count: g.poly.term_count(),
                })
                .collect(),
        }
    }
}

impl GeneratorFile {
    /// Polynomials are parsed as written and the stored signatures kept, so
    /// a tampered file reaches `verify_result` unchanged.
    pub fn into_result(self) -> Result<KernelResult> {
        let n = self.n;
        let generators = self
            .generators
            .into_iter()
            .map(|r| {
                let poly = parse_poly(&r.polynomial, n)?;
                Ok(GeneratorInfo {
                    name: r.name,
                    poly,
                    sig: r.signature,
                    provenance: r.provenance,
                    round: r.round,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelResult {
            n,
            generators,
            rounds_used: self.rounds,
            closed: self.closed,
        })
    }
}

pub fn to_json(result: &KernelResult) -> String {
    let mut s = serde_json::to_string_pretty(&GeneratorFile::from(result))
        .expect("generator file serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<KernelResult> {
    let file: GeneratorFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        position: e.column(),
        message: format!("generator file line {}: {e}", e.line()),
    })?;
    file.into_result()
}
