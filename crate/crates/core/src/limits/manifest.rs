use super::{clique_orders, conjecture_gap, limit_approximation, ConjectureGap, LimitApproximation, TailSpec};
use crate::error::{Error, Result};
use crate::graph::GraphVector;
use serde::{Deserialize, Serialize};

/// Experiment configuration read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentManifest {
    /// pattern vector, e.g. `"K2,K3"`
    pub vector: String,
    pub host_sizes: Vec<usize>,
    /// largest tail parameter `k` in the inner body
    #[serde(rename = "K")]
    pub max_k: u32,
    pub kernel_sizes: Vec<usize>,
    pub samples: u64,
    pub seed: u64,
}

impl ExperimentManifest {
    pub fn from_json(s: &str) -> Result<Self> {
        let m: ExperimentManifest = serde_json::from_str(s)
            .map_err(|e| Error::parse(e.column(), format!("manifest JSON line {}: {e}", e.line())))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    fn validate(&self) -> Result<()> {
        GraphVector::parse(&self.vector)?;
        if self.host_sizes.is_empty() {
            return Err(Error::invalid("host_sizes is empty"));
        }
        if let Some(&n) = self.host_sizes.iter().find(|&&n| n > crate::graph::MAX_ENUMERATION_VERTICES) {
            return Err(Error::Capacity {
                what: "host size",
                limit: crate::graph::MAX_ENUMERATION_VERTICES,
                got: n,
            });
        }
        if self.kernel_sizes.iter().any(|&k| k == 0 || k > 4) {
            return Err(Error::invalid("kernel sizes must lie in 1..=4"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub manifest: ExperimentManifest,
    pub approximations: Vec<LimitApproximation>,
    /// present when every pattern is a clique with increasing orders
    pub conjecture: Vec<ConjectureGap>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_experiment(m: &ExperimentManifest) -> Result<ExperimentReport> {
    m.validate()?;
    let fs = GraphVector::parse(&m.vector)?;
    let mut approximations = Vec::new();
    for &n in &m.host_sizes {
        for &k in &m.kernel_sizes {
            approximations.push(limit_approximation(&fs, n, k, m.samples.max(1), m.seed)?.0);
        }
    }
    let mut conjecture = Vec::new();
    if let Some(tail) = clique_orders(&fs).and_then(|o| TailSpec::new(o).ok()) {
        for &n in &m.host_sizes {
            conjecture.push(conjecture_gap(&tail, n, m.max_k, m.samples, m.seed)?);
        }
    }
    Ok(ExperimentReport {
        manifest: m.clone(),
        approximations,
        conjecture,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trip_and_run() {
        let src = r#"{"vector": "K2,K3", "host_sizes": [4, 5], "K": 5, "kernel_sizes": [2], "samples": 40, "seed": 3}"#;
        let m = ExperimentManifest::from_json(src).unwrap();
        assert_eq!(ExperimentManifest::from_json(&m.to_json()).unwrap(), m);
        let r = run_experiment(&m).unwrap();
        assert_eq!(r.approximations.len(), 2);
        assert_eq!(r.conjecture.len(), 2);
        assert!(r.approximations.iter().all(|a| a.inner_inside_outer));
        let a = run_experiment(&m).unwrap().to_json();
        assert_eq!(a, r.to_json());
        assert!(ExperimentManifest::from_json(r#"{"vector": "K2"}"#).is_err());
        let bad = src.replace("[4, 5]", "[9]");
        assert!(matches!(ExperimentManifest::from_json(&bad), Err(Error::Capacity { .. })));
    }
}
