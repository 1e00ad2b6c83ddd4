//! Versioned JSON documents for polytopes and OFF export of 3D hulls.

use super::hull::{ConvexHull, Facet};
use super::polytope::{extreme_points, VPolytope};
use super::RationalPoint;
use crate::error::{Error, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

pub const POLYTOPE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDoc {
    pub version: u32,
    pub dim: usize,
    pub vertices: Vec<RationalPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Facet>>,
}

impl PolytopeDoc {
    pub fn new(poly: &VPolytope, facets: Option<Vec<Facet>>) -> Self {
        PolytopeDoc {
            version: POLYTOPE_FORMAT_VERSION,
            dim: poly.dim(),
            vertices: poly.vertices().to_vec(),
            witnesses: poly.has_witnesses().then(|| poly.witnesses().to_vec()),
            facets,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Parse and validate: every listed vertex must be extreme and distinct,
    /// and every facet must support the polytope at its incident vertices.
    pub fn from_json(s: &str) -> Result<(VPolytope, Option<Vec<Facet>>)> {
        let doc: PolytopeDoc =
            serde_json::from_str(s).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        doc.into_polytope()
    }

    pub fn into_polytope(self) -> Result<(VPolytope, Option<Vec<Facet>>)> {
        if self.version != POLYTOPE_FORMAT_VERSION {
            return Err(Error::invalid(format!(
                "unsupported polytope format version {}",
                self.version
            )));
        }
        if let Some(bad) = self.vertices.iter().find(|v| v.dim() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: bad.dim(),
            });
        }
        let mut poly = extreme_points(&self.vertices)?;
        if poly.vertices() != self.vertices.as_slice() {
            return Err(Error::invalid(
                "vertex list contains duplicates or non-extreme points",
            ));
        }
        if let Some(w) = self.witnesses {
            poly.set_witnesses(w)?;
        }
        if let Some(facets) = &self.facets {
            for f in facets {
                check_facet(&poly, f)?;
            }
        }
        Ok((poly, self.facets))
    }
}

fn check_facet(poly: &VPolytope, f: &Facet) -> Result<()> {
    if f.normal.dim() != poly.dim() {
        return Err(Error::DimensionMismatch {
            expected: poly.dim(),
            got: f.normal.dim(),
        });
    }
    for (i, v) in poly.vertices().iter().enumerate() {
        let slack = f.slack(v);
        let incident = f.incident_vertices.contains(&i);
        if slack < Zero::zero() || incident != slack.is_zero() {
            return Err(Error::invalid(format!(
                "facet incidence does not match vertex {i}"
            )));
        }
    }
    Ok(())
}

/// OFF mesh of a hull boundary (floating-point coordinates). A 2D hull is
/// written as a single polygon in the plane `z = 0`.
pub fn to_off(hull: &ConvexHull) -> Result<String> {
    let mut out = String::new();
    match hull.dim {
        2 => {
            let cyc = hull.polygon_cycle();
            writeln!(out, "OFF\n{} 1 0", cyc.len()).expect("write to string");
            for &i in &cyc {
                let c = hull.vertices[i].to_f64();
                writeln!(out, "{} {} 0", c[0], c[1]).expect("write to string");
            }
            let idx: Vec<String> = (0..cyc.len()).map(|i| i.to_string()).collect();
            writeln!(out, "{} {}", cyc.len(), idx.join(" ")).expect("write to string");
        }
        3 => {
            writeln!(out, "OFF\n{} {} 0", hull.surface.len(), hull.triangles.len()).expect("write to string");
            for p in &hull.surface {
                let c = p.to_f64();
                writeln!(out, "{} {} {}", c[0], c[1], c[2]).expect("write to string");
            }
            for t in &hull.triangles {
                writeln!(out, "3 {} {} {}", t[0], t[1], t[2]).expect("write to string");
            }
        }
        d => return Err(Error::invalid(format!("OFF export needs a 2D or 3D hull, got dimension {d}"))),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hull_facets;
    use crate::rational::{q, qi};

    fn pt(xs: &[i64]) -> RationalPoint {
        RationalPoint(xs.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn document_round_trip_with_facets() {
        let mut poly =
            VPolytope::from_points(&[pt(&[0, 0]), RationalPoint(vec![q(1, 3), qi(0)]), pt(&[0, 1])])
                .unwrap();
        poly.set_witnesses(vec![vec!["B?".into()], vec![], vec![]]).unwrap();
        let facets = hull_facets(&poly).unwrap();
        let json = PolytopeDoc::new(&poly, Some(facets.clone())).to_json();
        assert!(json.contains("\"1/3\""));
        let (back, f) = PolytopeDoc::from_json(&json).unwrap();
        assert_eq!(back, poly);
        assert_eq!(f, Some(facets));
    }

    #[test]
    fn rejects_bad_documents() {
        let interior = r#"{"version":1,"dim":1,"vertices":[["0"],["1/2"],["1"]]}"#;
        assert!(PolytopeDoc::from_json(interior).is_err());
        let version = r#"{"version":9,"dim":1,"vertices":[["0"]]}"#;
        assert!(PolytopeDoc::from_json(version).is_err());
        let dims = r#"{"version":1,"dim":2,"vertices":[["0"]]}"#;
        assert!(PolytopeDoc::from_json(dims).is_err());
        let facet = r#"{"version":1,"dim":1,"vertices":[["0"],["1"]],
            "facets":[{"normal":["1"],"offset":"1","incident_vertices":[0]}]}"#;
        assert!(PolytopeDoc::from_json(facet).is_err());
        assert!(PolytopeDoc::from_json("{").is_err());
    }

    #[test]
    fn off_export() {
        let cube: Vec<RationalPoint> =
            (0..8).map(|m| pt(&[m & 1, (m >> 1) & 1, (m >> 2) & 1])).collect();
        let off = to_off(&ConvexHull::from_points(&cube).unwrap()).unwrap();
        assert!(off.starts_with("OFF\n8 12 0\n"));
        let square: Vec<RationalPoint> = vec![pt(&[0, 0]), pt(&[1, 1]), pt(&[1, 0]), pt(&[0, 1]), RationalPoint(vec![q(1, 2), q(1, 2)])];
        let off = to_off(&ConvexHull::from_points(&square).unwrap()).unwrap();
        assert!(off.starts_with("OFF\n4 1 0\n"));
        assert!(off.ends_with("4 0 1 2 3\n"));
        let seg = vec![pt(&[0]), pt(&[2])];
        assert!(to_off(&ConvexHull::from_points(&seg).unwrap()).is_err());
    }
}
