//! Command-line workbench: goodness, diagrams, bound checks, interleaving
//! verification, bottleneck distances, and fixture generation over the cover
//! document format.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 on mathematical failures
//! (insufficient goodness, failed identities, violated bounds).

use nervecheck_cli::{document, report};

use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use nervecheck_core::cell::IndexSet;
use nervecheck_core::cover::CoverFiltration;
use nervecheck_core::generators;
use nervecheck_core::interleave::{InterleaveError, Interleaver, InterleavingConfig};
use nervecheck_core::metrics::{shifted_bound_check, MetricsError};
use nervecheck_core::persistence::{goodness, persistence, Bar, PersistenceDiagram};
use nervecheck_core::Scale;

use document::{digest, emit_cover, parse_cover, Decimal, FamilyInfo};
use report::{ErrorJson, RunReport};

#[derive(Parser)]
#[command(
    name = "nervecheck",
    version,
    about = "Exact persistence workbench for simplicial cover filtrations: goodness, nerve and blow-up diagrams, bottleneck bound checks, and machine-verified chain interleavings"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Space,
    Nerve,
    Blowup,
    ShiftedNerve,
    Intersection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Good,
    Perturbed,
}

#[derive(Subcommand)]
enum Commands {
    /// Compute the exact goodness of a cover (longest reduced bar over all
    /// intersections, dimensions 0..=K)
    Goodness {
        /// Cover document path, or '-' for stdin
        #[arg(default_value = "-")]
        file: String,
        /// Homology dimension cap K
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Compute a persistence diagram of one of the derived filtrations
    Diagram {
        #[arg(default_value = "-")]
        file: String,
        #[arg(long, value_enum)]
        target: Target,
        /// Intersection index set, comma separated (for --target intersection)
        #[arg(long)]
        v: Option<String>,
        /// Top homology dimension reported
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Report unreduced homology instead of reduced
        #[arg(long)]
        unreduced: bool,
        /// Emit a CSV table instead of a JSON report
        #[arg(long)]
        csv: bool,
    },
    /// Check the bottleneck bound d_B <= (K+1) eps* and the half-shift bound
    Bound {
        #[arg(default_value = "-")]
        file: String,
        /// Comma-separated list of homology dimensions K
        #[arg(long, default_value = "1")]
        dim: String,
    },
    /// Construct the chain interleaving and optionally verify its identities
    Interleave {
        #[arg(default_value = "-")]
        file: String,
        /// Homology dimension cap K
        #[arg(long)]
        dim: usize,
        /// Goodness parameter eps (defaults to the computed eps*)
        #[arg(long)]
        eps: Option<f64>,
        /// Run the five-identity verification suite over the grid
        #[arg(long)]
        verify: bool,
        /// Explicit comma-separated verification scales
        #[arg(long)]
        scales: Option<String>,
    },
    /// Bottleneck distance between two diagram files in one dimension
    Bottleneck {
        file_a: String,
        file_b: String,
        #[arg(long)]
        dim: usize,
    },
    /// Generate a cover document on stdout
    Gen {
        #[command(subcommand)]
        what: GenCommands,
    },
}

#[derive(Subcommand)]
enum GenCommands {
    /// The tight-bound family over the facets of the standard n-simplex
    Tight {
        #[arg(long)]
        n: u32,
    },
    /// The worked two-element fixture
    E1,
    /// Seeded random path covers
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FlavorArg::Good)]
        flavor: FlavorArg,
        #[arg(long, default_value_t = 10)]
        vertices: u32,
        #[arg(long, default_value_t = 3)]
        elements: u32,
        #[arg(long, default_value_t = 4)]
        scales: u32,
        /// Probability that element growth pauses at a step
        #[arg(long, default_value_t = 0.5)]
        fill: f64,
        #[arg(long, default_value_t = 2)]
        delay_budget: u32,
        #[arg(long, default_value_t = 3)]
        delay_count: u32,
    },
}

enum Failure {
    /// Bad input: exit 1. The message goes to stderr.
    Input(anyhow::Error),
    /// Mathematical failure: exit 2. A report was already printed.
    Math,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
        Err(Failure::Math) => ExitCode::from(2),
    }
}

fn read_input(path: &str) -> anyhow::Result<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        std::fs::read(path).with_context(|| format!("reading {}", path))
    }
}

fn load_cover(path: &str) -> anyhow::Result<(CoverFiltration, Option<FamilyInfo>, String)> {
    let bytes = read_input(path)?;
    let (cover, doc) = parse_cover(&bytes).map_err(|e| anyhow!(e))?;
    let canonical = document::emit_document(&doc);
    Ok((cover, doc.family, digest(&canonical)))
}

fn parse_dim_list(raw: &str) -> anyhow::Result<Vec<usize>> {
    let mut dims = Vec::new();
    for part in raw.split(',') {
        let k: usize = part
            .trim()
            .parse()
            .with_context(|| format!("invalid dimension '{}'", part))?;
        dims.push(k);
    }
    if dims.is_empty() {
        bail!("at least one dimension is required");
    }
    dims.sort_unstable();
    dims.dedup();
    Ok(dims)
}

fn parse_scale_list(raw: &str) -> anyhow::Result<Vec<Scale>> {
    let mut out = Vec::new();
    for part in raw.split(',') {
        let x: f64 = part
            .trim()
            .parse()
            .with_context(|| format!("invalid scale '{}'", part))?;
        if !(x.is_finite() && x >= 0.0) {
            bail!("scales must be finite and nonnegative, got '{}'", part);
        }
        out.push(Scale::new(x));
    }
    Ok(out)
}

fn parse_index_set(raw: &str) -> anyhow::Result<IndexSet> {
    let mut ids = Vec::new();
    for part in raw.split(',') {
        let i: u32 = part
            .trim()
            .parse()
            .with_context(|| format!("invalid cover index '{}'", part))?;
        ids.push(i);
    }
    if ids.is_empty() {
        bail!("the index set must be nonempty");
    }
    Ok(IndexSet::new(ids))
}

fn finish(mut rep: RunReport, started: Instant) -> RunReport {
    rep.timing_ms = started.elapsed().as_millis();
    rep
}

fn run(cli: Cli) -> Result<(), Failure> {
    let started = Instant::now();
    match cli.command {
        Commands::Goodness { file, dim } => {
            let (cover, family, dg) = load_cover(&file)?;
            let mut rep = RunReport::new("goodness");
            rep.input_digest = Some(dg);
            rep.family = family;
            rep.parameters = serde_json::json!({ "dim": dim });
            rep.goodness = Some(report::goodness_json(&goodness(&cover, dim)));
            print!("{}", finish(rep, started).render());
            Ok(())
        }
        Commands::Diagram {
            file,
            target,
            v,
            dim,
            unreduced,
            csv,
        } => {
            let (cover, family, dg) = load_cover(&file)?;
            let cap = dim + 1;
            let reduced = !unreduced;
            let (name, diagram) = match target {
                Target::Space => (
                    "space".to_string(),
                    persistence(&cover.space_filtration().complex(cap), reduced),
                ),
                Target::Nerve => (
                    "nerve".to_string(),
                    persistence(&cover.nerve_filtration(cap + 1).complex(cap), reduced),
                ),
                Target::Blowup => (
                    "blowup".to_string(),
                    persistence(&cover.blowup_complex(cap), reduced),
                ),
                Target::ShiftedNerve => {
                    let good = goodness(&cover, dim);
                    if !good.epsilon_star.is_finite() {
                        return Err(Failure::Input(anyhow!(
                            "the shifted nerve needs finite goodness, but eps* is infinite"
                        )));
                    }
                    let half = good.epsilon_star.times(dim + 1).half();
                    (
                        "shifted-nerve".to_string(),
                        persistence(&cover.nerve_filtration(cap + 1).complex(cap), reduced)
                            .translate(half),
                    )
                }
                Target::Intersection => {
                    let raw = v.ok_or_else(|| {
                        Failure::Input(anyhow!("--target intersection requires --v"))
                    })?;
                    let vset = parse_index_set(&raw)?;
                    if vset.indices().iter().any(|&i| i as usize >= cover.len()) {
                        return Err(Failure::Input(anyhow!(
                            "index set {} exceeds the {} cover elements",
                            vset,
                            cover.len()
                        )));
                    }
                    (
                        format!("intersection{}", vset),
                        persistence(&cover.intersection_filtration(&vset).complex(cap), reduced),
                    )
                }
            };
            let diagram = trim_dims(&diagram, dim);
            if csv {
                print!("{}", report::diagram_csv(&diagram));
            } else {
                let mut rep = RunReport::new("diagram");
                rep.input_digest = Some(dg);
                rep.family = family;
                rep.parameters = serde_json::json!({
                    "target": name,
                    "dim": dim,
                    "reduced": reduced,
                });
                rep.diagrams = Some(BTreeMap::from([(name, report::diagram_json(&diagram))]));
                print!("{}", finish(rep, started).render());
            }
            Ok(())
        }
        Commands::Bound { file, dim } => {
            let (cover, family, dg) = load_cover(&file)?;
            let dims = parse_dim_list(&dim)?;
            let mut rep = RunReport::new("bound");
            rep.input_digest = Some(dg);
            rep.family = family;
            rep.parameters = serde_json::json!({ "dim": dims });
            let mut rows = Vec::new();
            for &k in &dims {
                match shifted_bound_check(&cover, k) {
                    Ok(r) => rows.push(report::bound_json(&r)),
                    Err(e) => {
                        rep.bounds = Some(rows);
                        rep.error = Some(match &e {
                            MetricsError::TheoremViolation { k, d_b, bound } => {
                                ErrorJson::TheoremViolation {
                                    k: *k,
                                    d_b: Decimal(d_b.value()),
                                    bound: Decimal(bound.value()),
                                }
                            }
                            MetricsError::BlowupDiagramMismatch { dim } => {
                                ErrorJson::BlowupDiagramMismatch { dim: *dim }
                            }
                        });
                        print!("{}", finish(rep, started).render());
                        eprintln!("error: {}", e);
                        return Err(Failure::Math);
                    }
                }
            }
            rep.bounds = Some(rows);
            print!("{}", finish(rep, started).render());
            Ok(())
        }
        Commands::Interleave {
            file,
            dim,
            eps,
            verify,
            scales,
        } => {
            let (cover, family, dg) = load_cover(&file)?;
            let epsilon = match eps {
                Some(x) => {
                    if !(x.is_finite() && x >= 0.0) {
                        return Err(Failure::Input(anyhow!(
                            "--eps must be finite and nonnegative"
                        )));
                    }
                    Scale::new(x)
                }
                None => {
                    let star = goodness(&cover, dim).epsilon_star;
                    if !star.is_finite() {
                        return Err(Failure::Input(anyhow!(
                            "computed goodness is infinite; supply a finite --eps"
                        )));
                    }
                    star
                }
            };
            let mut cfg = InterleavingConfig::new(dim, epsilon);
            if let Some(raw) = &scales {
                cfg.scales = parse_scale_list(raw)?;
            }
            let mut rep = RunReport::new("interleave");
            rep.input_digest = Some(dg);
            rep.family = family;
            rep.parameters = serde_json::json!({
                "dim": dim,
                "eps": Decimal::render(epsilon.value()),
                "verify": verify,
                "scales": scales,
            });
            let mut il = Interleaver::new(cover, cfg);
            let grid = il.grid();
            let outcome: Result<_, InterleaveError> = (|| {
                if verify {
                    return Ok(Some(il.verify_identities()?));
                }
                // construct the maps without checking identities
                for &alpha in &grid {
                    il.q_map(alpha)?;
                    il.global_homotopy(alpha)?;
                }
                Ok(None)
            })();
            match outcome {
                Ok(maybe_report) => {
                    rep.interleaving = Some(report::InterleaveSummaryJson {
                        k_max: dim,
                        epsilon: Decimal(epsilon.value()),
                        shift: Decimal(il.cfg.shift().value()),
                        grid: grid.iter().map(|s| Decimal(s.value())).collect(),
                        basepoints: il
                            .basepoints()
                            .iter()
                            .map(|(v, &(x, _))| (v.to_string(), x))
                            .collect(),
                        local_homotopies: il.cached_homotopies(),
                    });
                    let all_pass = match &maybe_report {
                        Some(r) => {
                            rep.identities = Some(report::identities_json(r));
                            r.all_pass()
                        }
                        None => true,
                    };
                    if !all_pass {
                        rep.error = Some(ErrorJson::IdentityFailure);
                        print!("{}", finish(rep, started).render());
                        eprintln!("error: identity verification failed");
                        return Err(Failure::Math);
                    }
                    print!("{}", finish(rep, started).render());
                    Ok(())
                }
                Err(InterleaveError::NotEpsGood { v, alpha, dim }) => {
                    rep.error = Some(ErrorJson::NotEpsGood {
                        v: v.indices().to_vec(),
                        alpha: Decimal(alpha.value()),
                        dim,
                    });
                    print!("{}", finish(rep, started).render());
                    eprintln!(
                        "error: cover is not eps-good at v={} alpha={} dim={}",
                        v, alpha, dim
                    );
                    Err(Failure::Math)
                }
                Err(e) => Err(Failure::Input(anyhow!(e))),
            }
        }
        Commands::Bottleneck {
            file_a,
            file_b,
            dim,
        } => {
            let da = read_diagram(&file_a)?;
            let db = read_diagram(&file_b)?;
            let value = nervecheck_core::metrics::bottleneck(&da, &db, dim);
            let mut rep = RunReport::new("bottleneck");
            rep.parameters = serde_json::json!({
                "fileA": file_a,
                "fileB": file_b,
                "dim": dim,
            });
            rep.bottleneck = Some(Decimal(value.value()));
            print!("{}", finish(rep, started).render());
            Ok(())
        }
        Commands::Gen { what } => {
            let (cover, family) = match what {
                GenCommands::Tight { n } => {
                    if !(1..=4).contains(&n) {
                        return Err(Failure::Input(anyhow!("--n must be between 1 and 4")));
                    }
                    (generators::gen_tight(n), document::tight_family(n))
                }
                GenCommands::E1 => (
                    generators::gen_e1(),
                    FamilyInfo {
                        name: "e1".to_string(),
                        n: None,
                        nominal_epsilon: None,
                        nominal_dim: None,
                        seed: None,
                    },
                ),
                GenCommands::Random {
                    seed,
                    flavor,
                    vertices,
                    elements,
                    scales,
                    fill,
                    delay_budget,
                    delay_count,
                } => {
                    if !(2..=64).contains(&vertices) || !(1..=6).contains(&elements) {
                        return Err(Failure::Input(anyhow!(
                            "--vertices must be in 2..=64 and --elements in 1..=6"
                        )));
                    }
                    if !(0.0..=1.0).contains(&fill) {
                        return Err(Failure::Input(anyhow!("--fill must be in [0, 1]")));
                    }
                    if !(1..=32).contains(&scales) {
                        return Err(Failure::Input(anyhow!("--scales must be in 1..=32")));
                    }
                    let flavor = match flavor {
                        FlavorArg::Good => generators::Flavor::Good,
                        FlavorArg::Perturbed => generators::Flavor::Perturbed,
                    };
                    if flavor == generators::Flavor::Perturbed && delay_budget < 1 {
                        return Err(Failure::Input(anyhow!(
                            "--delay-budget must be at least 1 for the perturbed flavor"
                        )));
                    }
                    let params = generators::RandomCoverParams {
                        vertices,
                        elements,
                        scales,
                        fill,
                        flavor,
                        delay_budget,
                        delay_count,
                    };
                    let name = match flavor {
                        generators::Flavor::Good => "random-good",
                        generators::Flavor::Perturbed => "random-perturbed",
                    };
                    (
                        generators::gen_random(seed, &params),
                        FamilyInfo {
                            name: name.to_string(),
                            n: None,
                            nominal_epsilon: (flavor == generators::Flavor::Perturbed)
                                .then_some(Decimal(delay_budget as f64)),
                            nominal_dim: None,
                            seed: Some(seed),
                        },
                    )
                }
            };
            print!("{}", emit_cover(&cover, Some(family)));
            Ok(())
        }
    }
}

/// Keeps only bars of dimension <= dim (the complexes were built with cap
/// dim+1, so higher entries would be cap artifacts).
fn trim_dims(d: &PersistenceDiagram, dim: usize) -> PersistenceDiagram {
    PersistenceDiagram {
        bars: d.bars.iter().filter(|b| b.dim <= dim).copied().collect(),
    }
}

/// Reads a diagram file: either a run report with a single diagrams entry,
/// an object with a "bars" array, or a bare array of bars.
fn read_diagram(path: &str) -> anyhow::Result<PersistenceDiagram> {
    let bytes = read_input(path)?;
    let value: serde_json::Value =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path))?;
    let bars_value = if value.is_array() {
        value
    } else if let Some(bars) = value.get("bars") {
        bars.clone()
    } else if let Some(diagrams) = value.get("diagrams").and_then(|d| d.as_object()) {
        let mut entries = diagrams.values();
        let first = entries
            .next()
            .ok_or_else(|| anyhow!("{}: empty diagrams section", path))?;
        if entries.next().is_some() {
            bail!(
                "{}: multiple diagrams in the report; extract the one to compare",
                path
            );
        }
        first.clone()
    } else {
        bail!(
            "{}: no diagram found (expected bars or a diagram report)",
            path
        );
    };
    let bars: Vec<report::BarJson> =
        serde_json::from_value(bars_value).with_context(|| format!("decoding bars in {}", path))?;
    for b in &bars {
        if !(b.birth.0.is_finite() && b.birth.0 >= 0.0) {
            bail!("{}: bar birth must be finite and nonnegative", path);
        }
        if b.death.0 <= b.birth.0 {
            bail!("{}: bar death must exceed birth", path);
        }
    }
    Ok(PersistenceDiagram::new(
        bars.iter()
            .map(|b| Bar {
                dim: b.dim,
                birth: Scale::new(b.birth.0),
                death: if b.death.0.is_infinite() {
                    Scale::INFINITY
                } else {
                    Scale::new(b.death.0)
                },
            })
            .collect(),
    ))
}
