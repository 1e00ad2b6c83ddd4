use super::{build_polytope, SubgraphPolytope};
use crate::error::{Error, Result};
use crate::geometry::{
    affine_rank, fit_ehrhart_default, membership, EhrhartPoly, Membership, RationalPoint,
};
use crate::graph::{stat_vector, GraphVector, StatKind};
use crate::rational::{binomial, format_q, qu, Q};
use crate::report::CheckReport;
use num_traits::Zero;
use serde_json::json;

fn fmt_point(p: &RationalPoint) -> Vec<String> {
    p.coords().iter().map(format_q).collect()
}

fn fmt_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

/// Every vertex of `big` must lie in `small`.
pub fn inclusion_report(small: &SubgraphPolytope, big: &SubgraphPolytope) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        format!(
            "P[{};{}] is contained in P[{};{}]",
            big.fs.label(),
            big.n,
            small.fs.label(),
            small.n
        ),
        vec![format!("{} kind, {} vertices", label_kind(big.kind), big.hull.vertices().len())],
    );
    for (i, v) in big.hull.vertices().iter().enumerate() {
        let witness = big.hull.witnesses()[i].first().cloned();
        match membership(v, &small.hull)? {
            Membership::Inside(lambda) => {
                let combination: Vec<(usize, String)> = lambda
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| !l.is_zero())
                    .map(|(k, l)| (k, format_q(l)))
                    .collect();
                report.push(true, json!({"vertex": fmt_point(v), "witness": witness, "combination": combination}));
            }
            Membership::Outside { normal, offset } => report.push(
                false,
                json!({"vertex": fmt_point(v), "witness": witness, "violation": {
                    "normal": fmt_vec(&normal), "offset": format_q(&offset)}}),
            ),
        }
    }
    Ok(report)
}

fn label_kind(kind: StatKind) -> &'static str {
    match kind {
        StatKind::Lattice => "lattice",
        StatKind::Density => "density",
    }
}

/// `P_{F;n_big} ⊆ P_{F;n_small}` for density polytopes.
pub fn check_inclusion(fs: &GraphVector, n_small: usize, n_big: usize) -> Result<CheckReport> {
    if n_small > n_big {
        return Err(Error::invalid(format!("need n_small <= n_big, got {n_small} > {n_big}")));
    }
    let small = build_polytope(fs, n_small, StatKind::Density)?;
    let big = build_polytope(fs, n_big, StatKind::Density)?;
    inclusion_report(&small, &big)
}

/// Inclusions along `n_0 ≤ n_0+1 ≤ … ≤ n_max`, each polytope built once.
pub fn check_inclusion_chain(fs: &GraphVector, n0: usize, n_max: usize) -> Result<CheckReport> {
    let polys = (n0..=n_max)
        .map(|n| build_polytope(fs, n, StatKind::Density))
        .collect::<Result<Vec<_>>>()?;
    let mut report = CheckReport::new(
        format!("P[{};n] decreases along n = {n0}..{n_max}", fs.label()),
        Vec::new(),
    );
    for pair in polys.windows(2) {
        let step = inclusion_report(&pair[0], &pair[1])?;
        report.instances.push(step.claim.clone());
        report.push(
            step.passed(),
            json!({"n_small": pair[0].n, "n_big": pair[1].n, "vertices_checked": step.certificates.len(),
                   "violations": step.certificates.iter().filter(|c| c.get("violation").is_some()).collect::<Vec<_>>()}),
        );
    }
    Ok(report)
}

/// `E_{P^L_{n''}}(C(n',n)k) ≤ E_{P^L_{n'}}(C(n'',n)k)` for patterns all of order `n`.
pub fn check_ehrhart_scaling(fs: &GraphVector, n: usize, n1: usize, n2: usize) -> Result<CheckReport> {
    if let Some(f) = fs.patterns().iter().find(|f| f.order() != n) {
        return Err(Error::Hypothesis(format!(
            "all patterns must have order {n} (found one of order {}); pad with isolated vertices explicitly",
            f.order()
        )));
    }
    if !(n <= n1 && n1 <= n2) {
        return Err(Error::invalid(format!("need n <= n' <= n'', got {n}, {n1}, {n2}")));
    }
    if fs.len() > 3 {
        return Err(Error::Capacity {
            what: "Ehrhart check dimension",
            limit: 3,
            got: fs.len(),
        });
    }
    let p1 = build_polytope(fs, n1, StatKind::Lattice)?;
    let p2 = build_polytope(fs, n2, StatKind::Lattice)?;
    let c1 = qu(binomial(n1 as u64, n as u64));
    let c2 = qu(binomial(n2 as u64, n as u64));
    let e1 = fit_ehrhart_default(&p1.hull)?;
    let e2 = fit_ehrhart_default(&p2.hull)?;
    let left = e2.compose_scale(&c1);
    let right = e1.compose_scale(&c2);
    let mut report = CheckReport::new(
        format!(
            "E[P^L({});{n2}](C({n1},{n})k) <= E[P^L({});{n1}](C({n2},{n})k)",
            fs.label(),
            fs.label()
        ),
        vec![format!("left = {left}"), format!("right = {right}")],
    );
    for k in 1..=4u64 {
        let (l, r) = (left.eval_u64(k), right.eval_u64(k));
        report.push(l <= r, json!({"k": k, "left": format_q(&l), "right": format_q(&r)}));
    }
    let coefficientwise = coefficientwise_le(&left, &right);
    report.certificates.push(json!({
        "left_coefficients": fmt_vec(&left.coefficients),
        "right_coefficients": fmt_vec(&right.coefficients),
        "coefficientwise_le": coefficientwise,
        "equal": left == right,
    }));
    // C(n',n) P^L_{n''} ⊆ C(n'',n) P^L_{n'}
    let outer = p1.hull.dilated(&c2)?;
    for v in p2.hull.vertices() {
        let scaled = v.scaled(&c1);
        let inside = matches!(membership(&scaled, &outer)?, Membership::Inside(_));
        if !inside {
            report.push(false, json!({"scaled_vertex_outside": fmt_point(&scaled)}));
        }
    }
    Ok(report)
}

fn coefficientwise_le(a: &EhrhartPoly, b: &EhrhartPoly) -> bool {
    let len = a.coefficients.len().max(b.coefficients.len());
    (0..len).all(|i| {
        let x = a.coefficients.get(i).cloned().unwrap_or_default();
        let y = b.coefficients.get(i).cloned().unwrap_or_default();
        x <= y
    })
}

/// The coordinate inequalities `x_i ≥ 0` as facets, for pattern vectors in
/// which no pattern is a subgraph of another.
pub fn check_nonneg_facets(fs: &GraphVector, n: usize) -> Result<CheckReport> {
    if let Some(&(i, j)) = fs.subgraph_relations().first() {
        return Err(Error::Hypothesis(format!(
            "pattern {} is a subgraph of pattern {}",
            fs.names()[i],
            fs.names()[j]
        )));
    }
    nonneg_facets(fs, n, true)
}

/// Same computation without the hypothesis; reports which coordinate
/// hyperplanes are actually facets.
pub fn check_nonneg_facets_unchecked(fs: &GraphVector, n: usize) -> Result<CheckReport> {
    nonneg_facets(fs, n, false)
}

fn nonneg_facets(fs: &GraphVector, n: usize, expect_all: bool) -> Result<CheckReport> {
    let p = build_polytope(fs, n, StatKind::Density)?;
    let d = fs.len();
    let full = affine_rank(p.hull.vertices());
    let mut report = CheckReport::new(
        if expect_all {
            format!("x_i >= 0 is facet defining for P[{};{n}]", fs.label())
        } else {
            format!("faces x_i = 0 of P[{};{n}] (subgraph hypothesis not checked)", fs.label())
        },
        vec![format!("polytope dimension {full}")],
    );
    // disjoint unions F_j + isolated vertices
    let padded: Vec<RationalPoint> = fs
        .patterns()
        .iter()
        .map(|f| {
            let g = f.with_isolated(n - f.order())?;
            Ok(RationalPoint(stat_vector(fs, &g, StatKind::Density).values))
        })
        .collect::<Result<_>>()?;
    for i in 0..d {
        let zero: Vec<&RationalPoint> = p.hull.vertices().iter().filter(|v| v[i].is_zero()).collect();
        let zero_owned: Vec<RationalPoint> = zero.iter().map(|v| (*v).clone()).collect();
        let face_dim = if zero.is_empty() { None } else { Some(affine_rank(&zero_owned)) };
        let facet = face_dim == Some(full.saturating_sub(1)) && full == d;
        let mut simplex = vec![RationalPoint::zero(d)];
        simplex.extend((0..d).filter(|&j| j != i).map(|j| padded[j].clone()));
        let proof_points_on_face = simplex.iter().all(|s| s[i].is_zero())
            && simplex
                .iter()
                .all(|s| matches!(membership(s, &p.hull), Ok(Membership::Inside(_))));
        let proof_simplex_rank = affine_rank(&simplex);
        let ok = !expect_all || facet;
        report.push(
            ok,
            json!({
                "coordinate": i,
                "pattern": fs.names()[i],
                "facet": facet,
                "face_dimension": face_dim,
                "vertices_on_face": zero.iter().map(|v| fmt_point(v)).collect::<Vec<_>>(),
                "disjoint_union_points_on_face": proof_points_on_face,
                "disjoint_union_simplex_rank": proof_simplex_rank,
            }),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusion_examples() {
        let k2 = GraphVector::parse("K2").unwrap();
        assert!(check_inclusion(&k2, 2, 3).unwrap().passed());
        let p3k3 = GraphVector::parse("P3,K3").unwrap();
        assert!(check_inclusion(&p3k3, 3, 4).unwrap().passed());
        assert!(check_inclusion(&p3k3, 4, 3).is_err());
    }

    #[test]
    fn inclusion_fails_when_reversed_by_hand() {
        // the path on three vertices has edge density 2/3 without triangles,
        // which no triangle-free graph on five vertices reaches
        let fs = GraphVector::parse("K2,K3").unwrap();
        let small = build_polytope(&fs, 5, StatKind::Density).unwrap();
        let big = build_polytope(&fs, 3, StatKind::Density).unwrap();
        let r = inclusion_report(&small, &big).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn ehrhart_examples() {
        let fs = GraphVector::parse("P3,K3").unwrap();
        let r = check_ehrhart_scaling(&fs, 3, 3, 4).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.instances, vec!["left = 8k^2 + 6k + 1", "right = 8k^2 + 6k + 1"]);
        let r = check_ehrhart_scaling(&fs, 3, 3, 5).unwrap();
        assert!(r.passed());
        assert_eq!(r.instances, vec!["left = 48k^2 + 13k + 1", "right = 50k^2 + 15k + 1"]);
        assert_eq!(r.certificates[0]["left"], "62");
        assert_eq!(r.certificates[0]["right"], "66");
        let same = check_ehrhart_scaling(&fs, 3, 3, 3).unwrap();
        assert_eq!(same.certificates[4]["equal"], true);
        let mixed = GraphVector::parse("K2,K3").unwrap();
        assert!(matches!(check_ehrhart_scaling(&mixed, 3, 3, 4), Err(Error::Hypothesis(_))));
        let padded = mixed.padded_to(3).unwrap();
        assert!(check_ehrhart_scaling(&padded, 3, 3, 4).unwrap().passed());
    }

    #[test]
    fn nonneg_facets() {
        let fs = GraphVector::parse("K3,C4").unwrap();
        assert!(check_nonneg_facets(&fs, 6).unwrap().passed());
        let k2 = GraphVector::parse("K2").unwrap();
        assert!(check_nonneg_facets(&k2, 3).unwrap().passed());
        let run = GraphVector::parse("K3,C4,K4-e").unwrap();
        assert!(matches!(check_nonneg_facets(&run, 6), Err(Error::Hypothesis(_))));
        let r = check_nonneg_facets_unchecked(&run, 6).unwrap();
        let facets: Vec<bool> = r.certificates.iter().map(|c| c["facet"].as_bool().unwrap()).collect();
        assert_eq!(facets, vec![false, false, true]);
    }
}
