use crate::manifest::InputHashes;
use crate::{Check, CertifyArgs, Command, ExportArgs, ExportFormat, Outcome, PolytopeArgs, VolumeArgs, ZonotopeCmd};
use anyhow::{anyhow, bail, Context, Result};
use polystat::certificates::{certify_nonneg, SparsePolynomial};
use polystat::geometry::io::{to_off, PolytopeDoc};
use polystat::geometry::{hull_facets, ConvexHull};
use polystat::graph::{parse_pattern, GraphVector, StatKind};
use polystat::limits::{check_limit_inclusions, check_tail_cyclic, run_experiment, ExperimentManifest, TailSpec};
use polystat::rational::{format_q, to_f64};
use polystat::report::{CheckReport, CheckStatus};
use polystat::spine::{check_spine_containment, check_volume_oracles, exponent_sets, volume_row, volume_table_csv, SpineSpec};
use polystat::statistics::{
    build_polytope, check_ehrhart_scaling, check_inclusion_chain, check_nonneg_facets, check_nonneg_facets_unchecked,
};
use polystat::zonotope::{
    check_zonotope_in_polytope, expectation_check, simplex_witness, zonotope_hull_volume, zonotope_point,
    zonotope_sample, StepKernel,
};
use polystat::Error;
use serde_json::json;
use std::path::Path;

pub struct CmdOutput {
    pub report: String,
    pub outcome: Outcome,
    /// seed actually used when it differs from `--seed`
    pub seed: Option<u64>,
}

impl CmdOutput {
    fn pass(report: String) -> Self {
        CmdOutput {
            report,
            outcome: Outcome::Pass,
            seed: None,
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn vector(spec: &str) -> Result<GraphVector> {
    GraphVector::parse(spec).with_context(|| format!("pattern vector {spec:?}"))
}

fn status_outcome(s: CheckStatus) -> Outcome {
    match s {
        CheckStatus::Pass => Outcome::Pass,
        CheckStatus::Fail => Outcome::Violation,
        CheckStatus::Inconclusive => Outcome::Inconclusive,
    }
}

fn check_output(r: CheckReport) -> CmdOutput {
    CmdOutput {
        outcome: status_outcome(r.status),
        report: r.to_json() + "\n",
        seed: None,
    }
}

fn spine_specs(a: &VolumeArgs) -> Result<Vec<SpineSpec>> {
    let mut specs: Vec<SpineSpec> = a
        .specs
        .iter()
        .map(|s| s.parse().with_context(|| format!("exponent vector {s:?}")))
        .collect::<Result<_>>()?;
    if let Some(d) = a.max_dim {
        if a.max_entry > 16 {
            bail!("--max-entry is limited to 16");
        }
        specs.extend(exponent_sets(d, a.max_entry));
    }
    if specs.is_empty() {
        bail!("give at least one --spec or --max-dim");
    }
    Ok(specs)
}

fn read_kernel(path: &Path, inputs: &mut InputHashes) -> Result<StepKernel> {
    let src = inputs.read(path)?;
    StepKernel::from_json(&src).with_context(|| format!("kernel {}", path.display()))
}

pub fn dispatch(cmd: &Command, seed: u64, inputs: &mut InputHashes) -> Result<CmdOutput> {
    match cmd {
        Command::Polytope(a) => polytope(a),
        Command::Check { check } => run_check(check, seed),
        Command::Certify(a) => certify(a),
        Command::SpineVolume(a) => {
            let rows = spine_specs(a)?
                .iter()
                .map(|s| volume_row(s, a.gale_n))
                .collect::<polystat::Result<Vec<_>>>()?;
            Ok(CmdOutput::pass(if a.csv { volume_table_csv(&rows)? } else { pretty(&rows) }))
        }
        Command::Zonotope { action } => zonotope(action, seed, inputs),
        Command::Limits(a) => {
            let src = inputs.read(&a.manifest)?;
            let m = ExperimentManifest::from_json(&src).with_context(|| format!("manifest {}", a.manifest.display()))?;
            let r = run_experiment(&m)?;
            let consistent = r.approximations.iter().all(|x| x.inner_inside_outer)
                && r.conjecture.iter().all(|c| c.inner_inside_outer);
            Ok(CmdOutput {
                report: r.to_json() + "\n",
                outcome: if consistent { Outcome::Pass } else { Outcome::Violation },
                seed: Some(m.seed),
            })
        }
        Command::Export(a) => export(a, inputs),
    }
}

fn polytope(a: &PolytopeArgs) -> Result<CmdOutput> {
    let fs = vector(&a.vector)?;
    let poly = build_polytope(&fs, a.n, a.kind)?;
    let hull = if poly.dim() <= 3 {
        match ConvexHull::from_points(poly.hull.vertices()) {
            Ok(h) => Some(h),
            Err(Error::Degenerate { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let facets = match &hull {
        Some(_) => Some(hull_facets(&poly.hull)?),
        None => None,
    };
    let facet_count = facets.as_ref().map(Vec::len);
    let doc = pretty(&poly.to_doc(facets));
    let kind = match a.kind {
        StatKind::Density => "density",
        StatKind::Lattice => "lattice",
    };
    let mut summary = format!(
        "P[{};{}] {kind}: dim {}, {} graphs, {} distinct points, {} vertices",
        fs.label(),
        a.n,
        poly.dim(),
        poly.point_count_raw,
        poly.point_count_dedup,
        poly.hull.vertices().len()
    );
    if let Some(f) = facet_count {
        summary += &format!(", {f} facets");
    }
    summary.push('\n');
    let off_path = a.off.clone().or_else(|| a.output.as_ref().map(|p| p.with_extension("off")));
    if let (Some(h), Some(p)) = (&hull, &off_path) {
        if h.dim >= 2 {
            std::fs::write(p, to_off(h)?).with_context(|| format!("writing {}", p.display()))?;
            summary += &format!("OFF written to {}\n", p.display());
        }
    }
    match &a.output {
        Some(p) => {
            std::fs::write(p, doc).with_context(|| format!("writing {}", p.display()))?;
            Ok(CmdOutput::pass(summary + &format!("JSON written to {}\n", p.display())))
        }
        None => {
            eprint!("{summary}");
            Ok(CmdOutput::pass(doc))
        }
    }
}

fn run_check(check: &Check, seed: u64) -> Result<CmdOutput> {
    let report = match check {
        Check::Inclusion { vector: v, n_min, n_max } => {
            let fs = vector(v)?;
            check_inclusion_chain(&fs, n_min.unwrap_or(fs.max_order()), *n_max)?
        }
        Check::Ehrhart { vector: v, n, n1, n2 } => check_ehrhart_scaling(&vector(v)?, *n, n1.unwrap_or(*n), *n2)?,
        Check::NonnegFacets { vector: v, n, unchecked } => {
            let fs = vector(v)?;
            if *unchecked {
                check_nonneg_facets_unchecked(&fs, *n)?
            } else {
                check_nonneg_facets(&fs, *n)?
            }
        }
        Check::Spine { vector: v, n, grid } => check_spine_containment(&vector(v)?, *n, *grid)?,
        Check::Zonotope {
            vector: v,
            kernel_size,
            host_n,
            count,
        } => check_zonotope_in_polytope(&vector(v)?, *kernel_size, *host_n, *count, seed)?,
        Check::Limits { vector: v, n_max } => check_limit_inclusions(&vector(v)?, *n_max)?,
        Check::TailCyclic { tail, ks } => {
            let spec: TailSpec = tail.parse().with_context(|| format!("tail {tail:?}"))?;
            check_tail_cyclic(&spec, ks)?
        }
        Check::VolumeOracles(a) => check_volume_oracles(&spine_specs(a)?, a.gale_n)?,
    };
    Ok(check_output(report))
}

fn certify(a: &CertifyArgs) -> Result<CmdOutput> {
    let q: SparsePolynomial = a.polynomial.parse().with_context(|| format!("polynomial {:?}", a.polynomial))?;
    let poly = build_polytope(&vector(&a.vector)?, a.n, StatKind::Density)?;
    let cert = certify_nonneg(&q, &poly)?;
    Ok(CmdOutput {
        outcome: status_outcome(cert.status),
        report: cert.to_json() + "\n",
        seed: None,
    })
}

fn zonotope(cmd: &ZonotopeCmd, seed: u64, inputs: &mut InputHashes) -> Result<CmdOutput> {
    let out = match cmd {
        ZonotopeCmd::Sample {
            vector: v,
            kernel_size,
            count,
            csv,
        } => {
            let s = zonotope_sample(&vector(v)?, *kernel_size, *count, seed)?;
            if *csv {
                s.to_csv()?
            } else {
                pretty(&json!({
                    "patterns": s.fs.label(),
                    "kernel_size": s.n,
                    "seed": s.seed,
                    "points": s.points.iter().map(|p| p.0.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "kernels": s.kernels.iter().map(StepKernel::to_doc).collect::<Vec<_>>(),
                }))
            }
        }
        ZonotopeCmd::Volume {
            vector: v,
            kernel_size,
            count,
        } => pretty(&zonotope_hull_volume(&vector(v)?, *kernel_size, *count, seed)?),
        ZonotopeCmd::Witness {
            vector: v,
            kernel_size,
            count,
        } => pretty(&simplex_witness(&vector(v)?, *kernel_size, *count, seed)?.to_json()),
        ZonotopeCmd::Eval { vector: v, kernel } => {
            let fs = vector(v)?;
            let k = read_kernel(kernel, inputs)?;
            let p = zonotope_point(&fs, &k);
            pretty(&json!({
                "patterns": fs.label(),
                "kernel_size": k.size(),
                "point": p.0.iter().map(format_q).collect::<Vec<_>>(),
                "point_f64": p.0.iter().map(to_f64).collect::<Vec<_>>(),
            }))
        }
        ZonotopeCmd::Expect {
            pattern,
            kernel,
            host_order,
            graphs,
        } => {
            let f = parse_pattern(pattern).with_context(|| format!("pattern {pattern:?}"))?;
            let k = read_kernel(kernel, inputs)?;
            let r = expectation_check(&f, &k, *host_order, *graphs, seed)?;
            let within = r.within(4.0);
            return Ok(CmdOutput {
                report: pretty(&json!({"report": r, "within_4_stderr": within})),
                outcome: if within { Outcome::Pass } else { Outcome::Violation },
                seed: None,
            });
        }
    };
    Ok(CmdOutput::pass(out))
}

fn export(a: &ExportArgs, inputs: &mut InputHashes) -> Result<CmdOutput> {
    let src = inputs.read(&a.input)?;
    let value: serde_json::Value =
        serde_json::from_str(&src).with_context(|| format!("{} is not JSON", a.input.display()))?;
    let (poly, facets) = match value.get("polytope") {
        Some(inner) => serde_json::from_value::<PolytopeDoc>(inner.clone())
            .map_err(|e| anyhow!("polytope document in {}: {e}", a.input.display()))?
            .into_polytope()?,
        None => PolytopeDoc::from_json(&src).with_context(|| format!("polytope document {}", a.input.display()))?,
    };
    let report = match a.format {
        ExportFormat::Json => pretty(&PolytopeDoc::new(&poly, facets)),
        ExportFormat::Off => to_off(&ConvexHull::from_points(poly.vertices())?)?,
        ExportFormat::Graph6 => {
            if !poly.has_witnesses() {
                bail!("{} carries no witness graphs", a.input.display());
            }
            let mut lines = String::new();
            for w in poly.witnesses().iter().flatten() {
                lines += w;
                lines.push('\n');
            }
            lines
        }
    };
    Ok(CmdOutput::pass(report))
}
