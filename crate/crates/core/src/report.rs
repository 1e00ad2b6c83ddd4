use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// a harness finished without confirming or refuting its claim
    Inconclusive,
}

/// Outcome of one verification run, serialized as
/// `{claim, instances, status, certificates}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub claim: String,
    pub instances: Vec<String>,
    pub status: CheckStatus,
    pub certificates: Vec<Value>,
}

impl CheckReport {
    pub fn new(claim: impl Into<String>, instances: Vec<String>) -> Self {
        CheckReport {
            claim: claim.into(),
            instances,
            status: CheckStatus::Pass,
            certificates: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    /// Record a certificate; a failing one turns the status to `Fail`.
    pub fn push(&mut self, ok: bool, cert: Value) {
        if !ok {
            self.status = CheckStatus::Fail;
        }
        self.certificates.push(cert);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
