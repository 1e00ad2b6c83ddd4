//! Acceptance gate: one PASS/FAIL line per criterion.

use num_traits::{Signed, Zero};
use polystat::certificates::{certify_nonneg, facet_dual, facet_through, SparsePolynomial};
use polystat::geometry::linalg::determinant;
use polystat::geometry::{affine_rank, fit_ehrhart_default, hull_facets, membership_batch, Membership, RationalPoint};
use polystat::graph::{
    count_subgraphs, density, enumerate_labeled_graphs, Graph, GraphVector, PatternCounter, StatKind,
};
use polystat::limits::{check_tail_cyclic, conjecture_gap, razborov_polygon, TailSpec};
use polystat::rational::{q, qi, qu, Q};
use polystat::spine::{
    bialternant, exponent_sets, gale_volume_sum, pfaffian_eval, pfaffian_product, schur_eval,
    spine_point, spine_volume_integrand_quadrature, Partition, SpineSpec,
};
use polystat::statistics::{build_polytope, check_inclusion_chain};
use polystat::zonotope::{injective_homomorphisms, simplex_witness, zonotope_sample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

const VECTORS: [&str; 3] = ["K2,K3", "P3,K3", "K3,C4,K4-e"];

fn fv(s: &str) -> GraphVector {
    GraphVector::parse(s).unwrap()
}

fn pt(v: &[Q]) -> RationalPoint {
    RationalPoint(v.to_vec())
}

fn all_inside(points: &[RationalPoint], poly: &polystat::geometry::VPolytope) -> usize {
    membership_batch(points, poly)
        .unwrap()
        .iter()
        .filter(|m| matches!(m, Membership::Outside { .. }))
        .count()
}

fn ehrhart_reproduction() -> String {
    let fs = fv("P3,K3");
    let e = |n: usize| fit_ehrhart_default(&build_polytope(&fs, n, StatKind::Lattice).unwrap().hull).unwrap();
    let (e3, e4, e5) = (e(3), e(4), e(5));
    let coeffs = |v: &[i64]| v.iter().map(|&c| qi(c)).collect::<Vec<_>>();
    assert_eq!(e3.compose_scale(&qi(4)).coefficients, coeffs(&[1, 6, 8]));
    assert_eq!(e4.coefficients, coeffs(&[1, 6, 8]));
    assert_eq!(e3.compose_scale(&qi(10)).coefficients, coeffs(&[1, 15, 50]));
    assert_eq!(e5.coefficients, coeffs(&[1, 13, 48]));
    "E3(4k) = E4(k) = 8k^2+6k+1, E3(10k) = 50k^2+15k+1, E5(k) = 48k^2+13k+1".into()
}

fn facet_and_certificate() -> String {
    let poly = build_polytope(&fv("K3,C4,K4-e"), 6, StatKind::Density).unwrap();
    assert_eq!(poly.point_count_raw, 32768);
    let pts = [
        pt(&[q(8, 20), q(10, 45), q(16, 90)]),
        pt(&[q(10, 20), q(15, 45), q(30, 90)]),
        pt(&[q(5, 20), q(3, 45), q(6, 90)]),
    ];
    let facets = hull_facets(&poly.hull).unwrap();
    let f = facet_through(&facets, &poly.hull, &pts).expect("a facet through the three vertices");
    let c = facet_dual(&f).unwrap();
    assert_eq!(c, vec![q(-16, 3), q(11, 2), q(-1, 2)]);
    let qpoly: SparsePolynomial = "1 - 16/3 x^3 + 11/2 x^4 - 1/2 x^5".parse().unwrap();
    let cert = certify_nonneg(&qpoly, &poly).unwrap();
    assert!(cert.certified(), "{}", cert.to_json());
    format!("{} vertices, {} facets, dual (-16/3, 11/2, -1/2) certified", poly.hull.vertices().len(), facets.len())
}

fn volume_oracles() -> String {
    let specs = exponent_sets(5, 6);
    let worst = specs
        .par_iter()
        .map(|spec| {
            let closed = pfaffian_product(spec).unwrap();
            let gale = gale_volume_sum(spec, 2000).unwrap();
            let bound = Q::new((5 * spec.exponent_sum()).into(), 2000.into());
            let gap = (&gale - &closed).abs();
            assert!(gap <= bound, "{spec}: Gale gap {gap} above {bound}");
            let quad = spine_volume_integrand_quadrature(spec).unwrap();
            let qgap = (quad.value - polystat::rational::to_f64(&closed)).abs();
            assert!(qgap <= 1e-9, "{spec}: quadrature gap {qgap}");
            qgap
        })
        .reduce(|| 0.0, f64::max);
    let spot = |e: Vec<u32>| pfaffian_product(&SpineSpec::new(e).unwrap()).unwrap();
    assert_eq!(spot(vec![2, 1]), q(1, 6));
    assert_eq!(spot(vec![3, 2, 1]), q(1, 180));
    assert_eq!(spot(vec![5, 4, 3]), q(1, 1512));
    format!("{} specs, worst quadrature gap {worst:.1e}, spot values 1/6, 1/180, 1/1512", specs.len())
}

fn containment() -> String {
    for v in VECTORS {
        let fs = fv(v);
        let r = check_inclusion_chain(&fs, fs.max_order(), 7).unwrap();
        assert!(r.passed(), "inclusion chain for {v}: {}", r.to_json());
    }
    let fs = fv("K3,C4,K4-e");
    let poly = build_polytope(&fs, 6, StatKind::Density).unwrap();
    let spec = SpineSpec::from_graph_vector(&fs).unwrap();
    let spine: Vec<RationalPoint> = (0..=100).map(|j| spine_point(&spec, &q(j, 100)).unwrap()).collect();
    assert_eq!(all_inside(&spine, &poly.hull), 0, "spine points outside");
    let mut zono = Vec::new();
    for k in [2, 3] {
        zono.extend(zonotope_sample(&fs, k, 98, 17).unwrap().points);
    }
    assert_eq!(zono.len(), 200);
    assert_eq!(all_inside(&zono, &poly.hull), 0, "zonotope points outside");
    let polygon = razborov_polygon(10).unwrap();
    let p7 = build_polytope(&fv("K2,K3"), 7, StatKind::Density).unwrap();
    assert_eq!(all_inside(polygon.vertices(), &p7.hull), 0, "polygon vertices outside");
    format!("3 inclusion chains to n = 7, 101 spine points, 200 zonotope points, {} polygon vertices", polygon.vertices().len())
}

fn random_host(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(4..=7);
    let mut g = Graph::empty(n).unwrap();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == m)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

fn falling(n: usize, k: usize) -> u64 {
    (0..k).map(|i| (n - i) as u64).product()
}

fn identities() -> String {
    let patterns: Vec<Graph> = (2..=4)
        .flat_map(|k| enumerate_labeled_graphs(k).unwrap())
        .filter(|g| g.edge_count() > 0)
        .collect();
    let auts: Vec<u64> = patterns
        .iter()
        .map(|f| permutations(f.order()).iter().filter(|p| f.permuted(p) == *f).count() as u64)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let hosts: Vec<Graph> = (0..500).map(|_| random_host(&mut rng)).collect();
    hosts.par_iter().for_each(|g| {
        let n = g.order();
        let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v) as u32).collect();
        for (f, aut) in patterns.iter().zip(&auts) {
            let k = f.order();
            let count = count_subgraphs(f, g);
            assert_eq!(injective_homomorphisms(f, &adj), count * aut);
            assert_eq!(PatternCounter::new(f, n).count(g), count);
            let t = density(f, g);
            assert_eq!(t * Q::new(falling(n, k).into(), (*aut).into()), qu(count));
            for m in k..n {
                let subs = subsets(n, m);
                let total: Q = subs.iter().map(|s| density(f, &g.induced(s).unwrap())).sum();
                assert_eq!(total / qu(subs.len() as u64), density(f, g), "averaging over {m}-subsets");
            }
        }
    });

    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..200 {
        let n = 2 * rng.gen_range(1..=4);
        let mut a = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                a[i][j] = q(rng.gen_range(-9..=9), rng.gen_range(1..=4));
                a[j][i] = -a[i][j].clone();
            }
        }
        let pf = pfaffian_eval(&a).unwrap();
        assert_eq!(&pf * &pf, determinant(&a));
    }

    for _ in 0..200 {
        let k = rng.gen_range(1..=4);
        let len = rng.gen_range(0..=k);
        let mut parts: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let lambda = Partition::new(parts).unwrap();
        let mut xs: Vec<Q> = Vec::new();
        while xs.len() < k {
            let x = q(rng.gen_range(-12..=12), rng.gen_range(1..=5));
            if !xs.contains(&x) {
                xs.push(x);
            }
        }
        let via_ratio = bialternant(&lambda, &xs).expect("distinct arguments");
        assert_eq!(schur_eval(&lambda, &xs).unwrap(), via_ratio);
    }
    format!("{} patterns x 500 hosts, 200 Pfaffians, 200 Schur points", patterns.len())
}

fn full_dimensionality() -> String {
    let mut out = Vec::new();
    for v in VECTORS {
        let fs = fv(v);
        let sample = zonotope_sample(&fs, 2, 98, 23).unwrap();
        assert_eq!(sample.points.len(), 100);
        assert_eq!(affine_rank(&sample.points), fs.len(), "{v}");
        let w = simplex_witness(&fs, 2, 98, 23).unwrap();
        assert_eq!(w.points.len(), fs.len() + 1);
        let rows: Vec<Vec<Q>> = w.points[1..].iter().map(|p| p.sub(&w.points[0])).collect();
        let fact: u64 = (1..=fs.len() as u64).product();
        let vol = determinant(&rows).abs() / qu(fact);
        assert!(vol.is_positive());
        assert_eq!(vol, w.volume);
        assert!(w.points.iter().all(|p| sample.points.contains(p)));
        out.push(format!("{v}: {}", polystat::rational::format_q(&w.volume)));
    }
    format!("rank d for all three; witness volumes {}", out.join(", "))
}

fn tail_cyclic() -> String {
    let spec = TailSpec::new(vec![2, 3, 4]).unwrap();
    let r = check_tail_cyclic(&spec, &[1, 2, 3, 4, 5, 6, 7]).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    assert_eq!(r.certificates.len(), 2, "both the extremality and the facet comparison ran");
    format!("7 points extreme, {} Gale facets", r.certificates[1]["gale_facets"])
}

fn asymptotic_reports() -> String {
    // trend report only; nothing about the limit object is asserted here
    let spec = TailSpec::new(vec![2, 3]).unwrap();
    let rows: Vec<String> = [5usize, 6, 7]
        .iter()
        .map(|&n| {
            let g = conjecture_gap(&spec, n, 8, 400, 31).unwrap();
            format!("n={n} gap={:?} outside={} evidence={:?}", g.volume_gap, g.outside_inner, g.evidence)
        })
        .collect();
    format!("report only: {}", rows.join("; "))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> String); 8] = [
        (1, "Ehrhart reproduction", Duration::from_secs(10), ehrhart_reproduction),
        (2, "facet and dual certificate", Duration::from_secs(120), facet_and_certificate),
        (3, "spine hull volume oracles", Duration::from_secs(300), volume_oracles),
        (4, "containment suite", Duration::from_secs(600), containment),
        (5, "identity suite", Duration::from_secs(120), identities),
        (6, "full-dimensionality evidence", Duration::from_secs(60), full_dimensionality),
        (7, "tail cyclic structure", Duration::from_secs(60), tail_cyclic),
        (8, "asymptotic statements as reports", Duration::from_secs(300), asymptotic_reports),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, msg)
            }
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id} [{name}]: {} in {:.2}s ({detail})",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
