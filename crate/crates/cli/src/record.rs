//! JSON shapes for results, batch input and error records.

use serde::{Deserialize, Serialize};

use fquot_core::Insertion;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagJson {
    pub n: usize,
    pub s: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertionJson {
    pub alpha: usize,
    pub beta: usize,
}

impl From<Insertion> for InsertionJson {
    fn from(ins: Insertion) -> Self {
        InsertionJson {
            alpha: ins.alpha,
            beta: ins.beta,
        }
    }
}

impl From<InsertionJson> for Insertion {
    fn from(ins: InsertionJson) -> Self {
        Insertion::new(ins.alpha, ins.beta)
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// One computed invariant. The invariant is a decimal string so that no
/// consumer truncates it to a machine integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub flag: FlagJson,
    pub degree: Vec<u32>,
    pub insertions: Vec<InsertionJson>,
    pub dimension: u64,
    pub fixed_points: u64,
    pub invariant: String,
    pub samples: usize,
    pub seed: u64,
    pub mode: String,
    /// Present (and true) only when an insertion exceeds the proven β range.
    #[serde(default, skip_serializing_if = "is_false")]
    pub beta_overflow: bool,
}

/// One line of a batch file. Result records are valid batch lines too: the
/// extra fields are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct BatchProblem {
    pub flag: FlagJson,
    #[serde(default)]
    pub degree: Option<Vec<u32>>,
    #[serde(default)]
    pub insertions: Vec<InsertionJson>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub allow_beta_overflow: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub line: usize,
    pub kind: String,
    pub error: String,
}

/// One listed fixed point, with one-based coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointJson {
    pub chain: Vec<Vec<usize>>,
    pub a: Vec<Vec<u32>>,
    pub b: Vec<Vec<u32>>,
}
