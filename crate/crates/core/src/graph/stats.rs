use super::{count_subgraphs, density, Graph, GraphVector};
use crate::rational::{qu, Q};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatKind {
    /// raw subgraph counts
    Lattice,
    /// counts normalized by the complete graph of the same order
    Density,
}

impl std::str::FromStr for StatKind {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "lattice" => Ok(StatKind::Lattice),
            "density" => Ok(StatKind::Density),
            other => Err(crate::error::Error::invalid(format!(
                "unknown statistics kind {other:?} (expected lattice or density)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatVector {
    pub values: Vec<Q>,
    pub kind: StatKind,
    /// graph6 of the host graph the vector was computed from
    pub witness: Option<String>,
}

pub fn stat_vector(fs: &GraphVector, host: &Graph, kind: StatKind) -> StatVector {
    let values = fs
        .patterns()
        .iter()
        .map(|f| match kind {
            StatKind::Lattice => qu(count_subgraphs(f, host)),
            StatKind::Density => density(f, host),
        })
        .collect();
    StatVector {
        values,
        kind,
        witness: Some(host.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn small_examples() {
        let fs = GraphVector::parse("P3,K3").unwrap();
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(stat_vector(&fs, &k3, StatKind::Lattice).values, vec![qi(3), qi(1)]);
        let e3 = Graph::empty(3).unwrap();
        assert_eq!(stat_vector(&fs, &e3, StatKind::Lattice).values, vec![qi(0), qi(0)]);
        let run = GraphVector::parse("K3,C4,K4-e").unwrap();
        let k6 = Graph::complete(6).unwrap();
        let v = stat_vector(&run, &k6, StatKind::Density);
        assert_eq!(v.values, vec![qi(1), qi(1), qi(1)]);
        assert_eq!(v.witness.as_deref(), Some("E~~w"));
    }
}
