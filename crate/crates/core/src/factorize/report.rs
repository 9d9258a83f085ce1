//! Serializable verification outcome.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `"exact"` or `"numeric"`.
    pub mode: String,
    pub profile: Vec<u32>,
    pub esym: Vec<String>,
    pub defect_max: String,
    pub pass: bool,
    pub quotient_operator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offending: Option<String>,
}
