//! Polytopes of subgraph statistics built by exhaustive enumeration.

mod checks;

pub use checks::{
    check_ehrhart_scaling, check_inclusion, check_inclusion_chain, check_nonneg_facets,
    check_nonneg_facets_unchecked, inclusion_report,
};

use crate::error::{Error, Result};
use crate::geometry::io::PolytopeDoc;
use crate::geometry::{extreme_points, RationalPoint, VPolytope};
use crate::graph::{
    complete_count, pair_count, Graph, GraphVector, PatternCounter, StatKind,
    MAX_ENUMERATION_VERTICES,
};
use crate::rational::{qu, Q};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Witness graphs kept per vertex.
pub const MAX_WITNESSES: usize = 8;
const CHUNK_BITS: u32 = 12;

#[derive(Clone, Debug)]
pub struct SubgraphPolytope {
    pub fs: GraphVector,
    pub n: usize,
    pub kind: StatKind,
    pub hull: VPolytope,
    pub point_count_raw: u64,
    pub point_count_dedup: usize,
    /// every distinct statistics vector, in increasing order
    pub stat_points: Vec<RationalPoint>,
}

#[derive(Serialize)]
pub struct SubgraphPolytopeDoc {
    pub patterns: String,
    pub n: usize,
    pub kind: StatKind,
    pub point_count_raw: u64,
    pub point_count_dedup: usize,
    pub polytope: PolytopeDoc,
}

impl SubgraphPolytope {
    pub fn dim(&self) -> usize {
        self.fs.len()
    }

    pub fn to_doc(&self, facets: Option<Vec<crate::geometry::Facet>>) -> SubgraphPolytopeDoc {
        SubgraphPolytopeDoc {
            patterns: self.fs.label(),
            n: self.n,
            kind: self.kind,
            point_count_raw: self.point_count_raw,
            point_count_dedup: self.point_count_dedup,
            polytope: PolytopeDoc::new(&self.hull, facets),
        }
    }
}

/// Subgraph counts of every labeled graph on `n` vertices, deduplicated; each
/// distinct count vector keeps its smallest edge codes as witnesses.
pub fn distinct_counts(fs: &GraphVector, n: usize) -> Result<BTreeMap<Vec<u64>, Vec<u64>>> {
    check_order(fs, n)?;
    let counters: Vec<PatternCounter> = fs.patterns().iter().map(|f| PatternCounter::new(f, n)).collect();
    let total = 1u64 << pair_count(n);
    let chunk = 1u64 << CHUNK_BITS;
    let chunks = total.div_ceil(chunk);
    let merged = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut map: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
            for code in c * chunk..total.min((c + 1) * chunk) {
                let key: Vec<u64> = counters.iter().map(|pc| pc.count_code(code)).collect();
                let w = map.entry(key).or_default();
                if w.len() < MAX_WITNESSES {
                    w.push(code);
                }
            }
            map
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, mut w) in b {
                let e = a.entry(k).or_default();
                e.append(&mut w);
                e.sort_unstable();
                e.truncate(MAX_WITNESSES);
            }
            a
        });
    Ok(merged)
}

fn check_order(fs: &GraphVector, n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_VERTICES {
        return Err(Error::Capacity {
            what: "host order",
            limit: MAX_ENUMERATION_VERTICES,
            got: n,
        });
    }
    if fs.max_order() > n {
        return Err(Error::invalid(format!(
            "patterns of order {} do not fit in hosts of order {n}",
            fs.max_order()
        )));
    }
    Ok(())
}

/// `P_{F;n}` (density kind) or `P^L_{F;n}` (lattice kind).
pub fn build_polytope(fs: &GraphVector, n: usize, kind: StatKind) -> Result<SubgraphPolytope> {
    let counts = distinct_counts(fs, n)?;
    let denominators: Vec<u64> = fs.patterns().iter().map(|f| complete_count(f, n)).collect();
    let mut stat_points = Vec::with_capacity(counts.len());
    let mut witness_codes = Vec::with_capacity(counts.len());
    for (key, codes) in &counts {
        let coords = key
            .iter()
            .zip(&denominators)
            .map(|(&c, &den)| match kind {
                StatKind::Lattice => qu(c),
                StatKind::Density => Q::new(c.into(), den.into()),
            })
            .collect();
        stat_points.push(RationalPoint(coords));
        witness_codes.push(codes);
    }
    let mut hull = extreme_points(&stat_points)?;
    let index: BTreeMap<&RationalPoint, usize> =
        stat_points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let witnesses = hull
        .vertices()
        .iter()
        .map(|v| {
            witness_codes[index[v]]
                .iter()
                .map(|&code| Graph::from_edge_code(n, code).expect("enumerated code").to_string())
                .collect()
        })
        .collect();
    hull.set_witnesses(witnesses)?;
    Ok(SubgraphPolytope {
        fs: fs.clone(),
        n,
        kind,
        hull,
        point_count_raw: 1u64 << pair_count(n),
        point_count_dedup: stat_points.len(),
        stat_points,
    })
}

/// Coordinatewise map `x_i ↦ t^L(F_i, K_n) x_i` from densities to counts.
pub fn density_to_lattice(fs: &GraphVector, n: usize, p: &RationalPoint) -> RationalPoint {
    RationalPoint(
        fs.patterns()
            .iter()
            .zip(p.coords())
            .map(|(f, x)| x * qu(complete_count(f, n)))
            .collect(),
    )
}
