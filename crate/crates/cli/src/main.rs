mod commands;
mod manifest;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use polystat::graph::StatKind;

#[derive(Parser, Debug)]
#[command(name = "polystat", version, about = "Exact polytopes of subgraph statistics and the bodies inscribed in them")]
struct Cli {
    /// cap on worker threads (default: all cores); results do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// master seed for every sampled quantity
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// write the report to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// write a run manifest (command, parameters, seed, version, input hashes, timestamp)
    #[arg(long, global = true)]
    run_manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Build P[F;n] by exhaustive enumeration and write it as JSON (+ OFF in 2D/3D)
    Polytope(PolytopeArgs),
    /// Run a verification check; exit 0 pass, 1 violation, 3 inconclusive
    Check {
        #[command(subcommand)]
        #[serde(flatten)]
        check: Check,
    },
    /// Certify 1 + sum c_i x^e_i >= 0 on [0,1] from the vertices of P[F;n]
    Certify(CertifyArgs),
    /// Spine hull volumes by Gale sums, quadrature and the product formula
    SpineVolume(VolumeArgs),
    /// Curvy zonotope sampling, volumes and kernel evaluation
    Zonotope {
        #[command(subcommand)]
        #[serde(flatten)]
        action: ZonotopeCmd,
    },
    /// Run a limit-object experiment described by a JSON manifest
    Limits(LimitsArgs),
    /// Re-export a polytope JSON document as JSON, OFF or graph6 witnesses
    Export(ExportArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct PolytopeArgs {
    /// pattern vector, e.g. K3,C4,K4-e
    #[arg(short = 'F', long = "vector")]
    pub vector: String,
    /// host order
    #[arg(short = 'n', long = "n")]
    pub n: usize,
    #[arg(long, default_value = "density")]
    pub kind: StatKind,
    /// polytope JSON path (standard output when absent)
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// OFF path (default: the JSON path with extension .off)
    #[arg(long)]
    pub off: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Vertexwise inclusion P[F;n+1] in P[F;n] along a chain of host orders
    Inclusion {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        /// first host order (default: largest pattern order)
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
    },
    /// Ehrhart inequality between the lattice polytopes at orders n1 <= n2
    Ehrhart {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        /// common pattern order
        #[arg(short = 'n', long = "n")]
        n: usize,
        /// smaller host order (default: n)
        #[arg(long)]
        n1: Option<usize>,
        #[arg(long)]
        n2: usize,
    },
    /// Coordinate hyperplanes x_i = 0 are facets
    NonnegFacets {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        #[arg(short = 'n', long = "n")]
        n: usize,
        /// skip the no-pattern-is-a-subgraph hypothesis and report which are facets
        #[arg(long)]
        unchecked: bool,
    },
    /// Spine grid points lie in P[F;n]
    Spine {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        #[arg(short = 'n', long = "n")]
        n: usize,
        #[arg(long, default_value_t = 100)]
        grid: u32,
    },
    /// Sampled curvy zonotope points lie in P[F;host_n]
    Zonotope {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        #[arg(short = 'k', long, default_value_t = 2)]
        kernel_size: usize,
        #[arg(long, default_value_t = 6)]
        host_n: usize,
        #[arg(long, default_value_t = 100)]
        count: u64,
    },
    /// Inner bodies (polygon, tail, Turan points) against P[F;n] for n <= n_max
    Limits {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
    },
    /// Tail points at x = 1/k span a cyclic polytope
    TailCyclic {
        /// clique orders, e.g. 2,3,4
        #[arg(long)]
        tail: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7")]
        ks: Vec<u32>,
    },
    /// Gale sum, quadrature and product formula agree on spine hull volumes
    VolumeOracles(VolumeArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct VolumeArgs {
    /// exponent vector, e.g. 5,4,3 (repeatable)
    #[arg(long = "spec")]
    pub specs: Vec<String>,
    /// also every set of distinct exponents up to --max-entry with at most this many entries
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub max_entry: u32,
    /// number of spine points in the Gale sum
    #[arg(long, default_value_t = 2000)]
    pub gale_n: u64,
    /// CSV table instead of JSON
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CertifyArgs {
    /// polynomial such as "1 - 16/3 x^3 + 11/2 x^4 - 1/2 x^5"
    pub polynomial: String,
    #[arg(short = 'F', long = "vector")]
    pub vector: String,
    #[arg(short = 'n', long = "n")]
    pub n: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZonotopeCmd {
    /// Points t(F, W_M) for the corner kernels and `count` random kernels
    Sample {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        #[arg(short = 'k', long, default_value_t = 2)]
        kernel_size: usize,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Convex hull volume of sampled points
    Volume {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        #[arg(short = 'k', long, default_value_t = 2)]
        kernel_size: usize,
        #[arg(long, default_value_t = 1000)]
        count: u64,
    },
    /// Exact full-dimensional simplex spanned by sampled points
    Witness {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        #[arg(short = 'k', long, default_value_t = 2)]
        kernel_size: usize,
        #[arg(long, default_value_t = 100)]
        count: u64,
    },
    /// Exact point t(F, W_M) of a kernel read from JSON
    Eval {
        #[arg(short = 'F', long = "vector")]
        vector: String,
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Mean pattern density over random graphs G(m, W_M) against t(F, W_M)
    Expect {
        /// a single pattern, e.g. K3
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        kernel: PathBuf,
        #[arg(short = 'm', long, default_value_t = 20)]
        host_order: usize,
        #[arg(long, default_value_t = 10_000)]
        graphs: u64,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct LimitsArgs {
    /// experiment manifest JSON
    pub manifest: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Json,
    Off,
    Graph6,
}

#[derive(Args, Debug, Serialize)]
pub struct ExportArgs {
    /// polytope JSON (bare document or the output of `polytope`)
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ExportFormat,
}

/// How a command's result maps onto the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Violation,
    Inconclusive,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Violation => 1,
            Outcome::Inconclusive => 3,
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global()?;
    }
    let mut inputs = manifest::InputHashes::default();
    let out = commands::dispatch(&cli.command, cli.seed, &mut inputs)?;
    match &cli.out {
        Some(p) => std::fs::write(p, &out.report).map_err(|e| anyhow::anyhow!("writing {}: {e}", p.display()))?,
        None => print!("{}", out.report),
    }
    if let Some(p) = &cli.run_manifest {
        let m = manifest::RunManifest::new(&cli.command, out.seed.unwrap_or(cli.seed), inputs)?;
        std::fs::write(p, m.to_json()).map_err(|e| anyhow::anyhow!("writing {}: {e}", p.display()))?;
    }
    Ok(out.outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) => ExitCode::from(o.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
