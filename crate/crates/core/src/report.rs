//! Verdict records shared by the verification suites.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IdentityVerdict {
    pub name: String,
    pub branch: String,
    pub instance: String,
    pub residual_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
}

impl IdentityVerdict {
    pub fn new(name: &str, branch: &str, instance: String, residual_zero: bool) -> Self {
        Self {
            name: name.to_string(),
            branch: branch.to_string(),
            instance,
            residual_zero,
            residual: None,
        }
    }

    pub fn with_residual(mut self, residual: String) -> Self {
        if !self.residual_zero {
            self.residual = Some(residual);
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchRef {
    pub name: String,
    pub branch: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub flavor: String,
    pub field: String,
    pub q: Option<String>,
    pub e: u64,
    pub n: usize,
    pub orbit: Vec<String>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: SuiteParams,
    pub identities: Vec<IdentityVerdict>,
    pub not_exercised: Vec<BranchRef>,
    pub sample: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|v| v.residual_zero)
    }

    pub fn failures(&self) -> Vec<&IdentityVerdict> {
        self.identities
            .iter()
            .filter(|v| !v.residual_zero)
            .collect()
    }

    /// Distinct `(name, branch)` pairs that were checked.
    pub fn exercised(&self) -> Vec<BranchRef> {
        let mut out: Vec<BranchRef> = self
            .identities
            .iter()
            .map(|v| BranchRef {
                name: v.name.clone(),
                branch: v.branch.clone(),
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub(crate) fn finish(mut self, expected: &[(&str, &str)]) -> Self {
        self.identities.sort();
        let seen = self.exercised();
        self.not_exercised = expected
            .iter()
            .map(|(n, b)| BranchRef {
                name: n.to_string(),
                branch: b.to_string(),
            })
            .filter(|b| !seen.contains(b))
            .collect();
        self.not_exercised.sort();
        self.not_exercised.dedup();
        self
    }
}
