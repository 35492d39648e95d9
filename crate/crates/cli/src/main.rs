//! `ectff`: orbits, constructions, verification, and novelty certification
//! for tight-fusion-frame parameters, one subcommand per operation.
//!
//! Results go to stdout, diagnostics to stderr. Exit code 0 on success, 1 on
//! domain errors, 2 on usage errors. Identical invocations print identical
//! bytes.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ectff_core::catalog::{Catalog, CertificationReport};
use ectff_core::designs::{search_df, Bibd, DifferenceFamily};
use ectff_core::frames::{
    construct_2r_4_r, construct_f0_witness, construct_trivial, construct_zauner, FusionFrame,
    VerificationReport,
};
use ectff_core::groups::{AbelianGroup, GroupElement, Subgroup};
use ectff_core::harmonic::{self, HarmonicResult, HarmonicSpec};
use ectff_core::triples::{self, Move, OrbitTag, ParamTriple};
use ectff_core::Field;

#[derive(Parser)]
#[command(
    name = "ectff",
    version,
    about = "Tight fusion frame parameter orbits, harmonic constructions, verification, and novelty certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Walk the alternating complement window around a parameter triple
    Orbit(OrbitArgs),
    /// Classify a triple's orbit and locate its minimal point
    Classify(TripleArgs),
    /// Decide whether a tight fusion frame with these parameters exists
    Exists(TripleArgs),
    /// Check a parameter triple against the catalog of known constructions
    Certify(CertifyArgs),
    /// Build a fusion frame and print it as frame JSON
    #[command(subcommand)]
    Construct(ConstructKind),
    /// Verify tightness, equichordality, and equi-isoclinicity of a frame
    Verify(VerifyArgs),
    /// Exhaustively search a group for difference families
    #[command(name = "search-df")]
    SearchDf(SearchArgs),
    /// Complement a tight frame and print the result as frame JSON
    Complement(ComplementArgs),
}

#[derive(Args)]
struct OrbitArgs {
    d: i128,
    n: i128,
    r: i128,
    /// Window width in steps; spans floor(w/2) on each side of the query
    #[arg(long, default_value_t = 16)]
    window: u32,
    #[arg(long, conflicts_with_all = ["pretty", "emit_plot_data"])]
    json: bool,
    #[arg(long, conflicts_with = "emit_plot_data")]
    pretty: bool,
    /// Print "D R" pairs, one per line, for external plotting
    #[arg(long)]
    emit_plot_data: bool,
}

#[derive(Args)]
struct TripleArgs {
    d: i128,
    n: i128,
    r: i128,
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct CertifyArgs {
    /// Omit the triple to read one "D N R" query per stdin line
    d: Option<i128>,
    n: Option<i128>,
    r: Option<i128>,
    #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
    field: FieldArg,
    /// Catalog JSON path; falls back to ECTFF_CATALOG, then the embedded copy
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Orthonormal-basis partition (R = D/N) or repeated full spaces (R = D)
    Trivial {
        d: i128,
        n: i128,
        r: i128,
        #[arg(long)]
        pretty: bool,
    },
    /// The four-block equi-isoclinic family in dimension 2R
    C2r4r {
        r: usize,
        #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
        field: FieldArg,
        #[arg(long)]
        pretty: bool,
    },
    /// Span the blocks of a balanced incomplete block design
    Zauner {
        /// Point count of the complete design on pairs drawn from --v/--k
        #[arg(long, required_unless_present = "design", conflicts_with = "design")]
        v: Option<u64>,
        /// Block size of the complete design
        #[arg(long, required_unless_present = "design", conflicts_with = "design")]
        k: Option<usize>,
        /// Design JSON {v, blocks} instead of a complete design
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Spectral complement of a tight input frame
    Naimark {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Orthogonal complement of every subspace of an input frame
    Spatial {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Block-diagonal direct sum of two frames with equal rank ratios
    Dsum {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Realify a complex frame entrywise into twice the dimension
    Hoggar {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Harmonic frame from a group, a subgroup, and a subset
    Harmonic {
        /// Group literal, e.g. Z13xZ2
        #[arg(long)]
        group: String,
        /// Subgroup literal, e.g. "Z13x{0}"
        #[arg(long)]
        subgroup: String,
        /// JSON array of coordinate tuples, e.g. [[0,0],[1,0],[3,1]]
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Harmonic frame lifted from a difference family JSON file
    #[command(name = "from-df")]
    FromDf {
        /// Family JSON (object or array; first entry used); stdin if omitted
        path: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// The zero-invariant witness with repeated subspaces in dimension 2R
    F0 {
        r: usize,
        #[arg(long)]
        pretty: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Frame JSON path; stdin if omitted
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
    tol: f64,
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Group literal, e.g. Z19
    #[arg(long)]
    group: String,
    /// Block size
    #[arg(long)]
    k: usize,
    /// Difference count per nonzero element
    #[arg(long)]
    lambda: u64,
    /// Stop after this many families; 0 searches exhaustively
    #[arg(long, default_value_t = 0)]
    limit: usize,
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct ComplementArgs {
    kind: ComplementKind,
    /// Frame JSON path; stdin if omitted
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum ComplementKind {
    Naimark,
    Spatial,
}

#[derive(Copy, Clone, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

fn parse_tol(text: &str) -> std::result::Result<f64, String> {
    let v: f64 = text.parse().map_err(|e| format!("{e}"))?;
    if !v.is_finite() || v <= 0.0 {
        return Err("tolerance must be a finite positive number".to_string());
    }
    Ok(v)
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Orbit(args) => orbit(args),
        Command::Classify(args) => classify(args),
        Command::Exists(args) => exists(args),
        Command::Certify(args) => certify(args),
        Command::Construct(kind) => construct(kind),
        Command::Verify(args) => verify(args),
        Command::SearchDf(args) => search(args),
        Command::Complement(args) => complement(args),
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .context("reading stdin")?;
            Ok(buf)
        }
    }
}

fn read_frame(path: &Option<PathBuf>) -> Result<FusionFrame> {
    let text = read_input(path)?;
    FusionFrame::from_json(&text).context("parsing frame JSON")
}

fn print_frame(frame: &FusionFrame, pretty: bool) {
    if pretty {
        println!("{}", frame.to_json_pretty());
    } else {
        println!("{}", frame.to_json());
    }
}

fn print_json<T: Serialize>(value: &T, pretty: bool) -> Result<()> {
    let text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    println!("{text}");
    Ok(())
}

fn tag_name(tag: OrbitTag) -> &'static str {
    match tag {
        OrbitTag::SmallN2 => "two-block-cycle",
        OrbitTag::SmallN3 => "three-block-cycle",
        OrbitTag::FZero => "zero",
        OrbitTag::FNegTrivialSeed => "negative-with-seed",
        OrbitTag::FNegNoTFF => "negative-no-tff",
        OrbitTag::FPos => "positive",
    }
}

fn move_name(m: Move) -> &'static str {
    match m {
        Move::Naimark => "naimark",
        Move::Spatial => "spatial",
    }
}

fn triple_or_none(t: &Option<ParamTriple>) -> String {
    match t {
        Some(p) => p.to_string(),
        None => "(none)".to_string(),
    }
}

fn orbit(args: OrbitArgs) -> Result<()> {
    let query = ParamTriple::new(args.d, args.n, args.r);
    let half = (args.window / 2) as i32;
    let k_min = -half;
    let k_max = args.window as i32 - half;
    let window = triples::sequence(query, k_min, k_max)?;

    if args.emit_plot_data {
        for t in &window {
            println!("{} {}", t.d, t.r);
        }
        return Ok(());
    }
    if args.json || args.pretty {
        return print_json(&window, args.pretty);
    }
    println!("orbit window K in [{k_min}, {k_max}] around {query}:");
    for (offset, t) in window.iter().enumerate() {
        let k = k_min + offset as i32;
        println!("  K = {k:>3}  {t}");
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassifyRecord {
    query: ParamTriple,
    class: &'static str,
    minimal_point: Option<ParamTriple>,
    sample: Vec<ParamTriple>,
}

fn classify(args: TripleArgs) -> Result<()> {
    let query = ParamTriple::new(args.d, args.n, args.r);
    let class = triples::classify(query)?;
    let record = ClassifyRecord {
        query,
        class: tag_name(class.tag),
        minimal_point: class.minimal_point,
        sample: class.orbit_sample,
    };
    if args.json || args.pretty {
        return print_json(&record, args.pretty);
    }
    println!("query: {query}");
    println!("class: {}", record.class);
    println!("minimal point: {}", triple_or_none(&record.minimal_point));
    let sample: Vec<String> = record.sample.iter().map(|t| t.to_string()).collect();
    println!("sample: {}", sample.join(" "));
    Ok(())
}

#[derive(Serialize)]
struct ExistsRecord {
    query: ParamTriple,
    exists: bool,
    seed: Option<ParamTriple>,
    chain: Vec<&'static str>,
}

fn exists(args: TripleArgs) -> Result<()> {
    let query = ParamTriple::new(args.d, args.n, args.r);
    let verdict = triples::tff_exists(query)?;
    let record = ExistsRecord {
        query,
        exists: verdict.exists,
        seed: verdict.seed,
        chain: verdict.chain.iter().map(|&m| move_name(m)).collect(),
    };
    if args.json || args.pretty {
        return print_json(&record, args.pretty);
    }
    println!("query: {query}");
    println!("exists: {}", if record.exists { "yes" } else { "no" });
    println!("seed: {}", triple_or_none(&record.seed));
    if record.chain.is_empty() {
        println!("chain: (empty)");
    } else {
        println!("chain: {}", record.chain.join(" "));
    }
    Ok(())
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Catalog> {
    match path {
        Some(p) => Ok(Catalog::load(p)?),
        None => Ok(Catalog::load_default()?),
    }
}

fn print_certification(report: &CertificationReport) {
    println!("verdict: {}", report.verdict);
    println!("query: {} over {}", report.query, report.field);
    println!("invariant: f = {}", report.invariant);
    println!("orbit class: {}", tag_name(report.orbit_tag));
    println!("orbit minimum: {}", triple_or_none(&report.minimal_point));
    println!(
        "tight fusion frame exists: {}",
        if report.tff_exists { "yes" } else { "no" }
    );
    println!("note: {}", report.summary);
    if !report.rules.is_empty() {
        println!("rules:");
        for r in &report.rules {
            let tag = if r.novelty_relevant {
                ""
            } else {
                " [informational]"
            };
            println!(
                "  {:<9} {:<8} {}{}: {}",
                r.rule.id(),
                r.outcome.to_string(),
                r.rule.title(),
                tag,
                r.evidence
            );
        }
    }
    println!(
        "catalog: {} sha256:{}",
        report.catalog_schema, report.catalog_hash
    );
}

fn certify(args: CertifyArgs) -> Result<()> {
    let catalog = load_catalog(&args.catalog)?;
    let field: Field = args.field.into();

    match (args.d, args.n, args.r) {
        (Some(d), Some(n), Some(r)) => {
            let report = catalog.certify(ParamTriple::new(d, n, r), field)?;
            if args.json || args.pretty {
                return print_json(&report, args.pretty);
            }
            print_certification(&report);
            Ok(())
        }
        (None, None, None) => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .context("reading stdin")?;
            let mut reports = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let parts: Vec<i128> = line
                    .split_whitespace()
                    .map(|w| w.parse::<i128>())
                    .collect::<std::result::Result<_, _>>()
                    .with_context(|| format!("line {}: expected \"D N R\"", lineno + 1))?;
                if parts.len() != 3 {
                    bail!(
                        "line {}: expected three integers \"D N R\", got {}",
                        lineno + 1,
                        parts.len()
                    );
                }
                let report =
                    catalog.certify(ParamTriple::new(parts[0], parts[1], parts[2]), field)?;
                if args.json {
                    println!("{}", serde_json::to_string(&report)?);
                } else if !args.pretty {
                    println!("{} {}: {}", report.query, report.field, report.verdict);
                }
                reports.push(report);
            }
            if args.pretty {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            }
            Ok(())
        }
        _ => bail!("pass all of D N R for a single query, or none to read queries from stdin"),
    }
}

fn harmonic_flags_note(result: &HarmonicResult) {
    eprintln!(
        "cards constant at {}; difference family: {}; per-block difference sets: {}",
        result.constant_card, result.is_df, result.is_ds_each
    );
}

fn parse_set_file(group: &AbelianGroup, path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let coords: Vec<Vec<u64>> = serde_json::from_str(&text)
        .context("set file must be a JSON array of coordinate tuples")?;
    coords
        .into_iter()
        .map(|c| Ok(group.index_of(&GroupElement(c))?))
        .collect()
}

fn parse_df(text: &str) -> Result<DifferenceFamily> {
    if let Ok(df) = serde_json::from_str::<DifferenceFamily>(text) {
        return Ok(df);
    }
    let families: Vec<DifferenceFamily> =
        serde_json::from_str(text).context("expected a difference family object or array")?;
    families
        .into_iter()
        .next()
        .context("the family array is empty")
}

fn construct(kind: ConstructKind) -> Result<()> {
    let (frame, pretty) = match kind {
        ConstructKind::Trivial { d, n, r, pretty } => {
            (construct_trivial(ParamTriple::new(d, n, r))?, pretty)
        }
        ConstructKind::C2r4r { r, field, pretty } => (construct_2r_4_r(r, field.into())?, pretty),
        ConstructKind::Zauner {
            v,
            k,
            design,
            pretty,
        } => {
            let bibd = match design {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<Bibd>(&text).context("parsing design JSON")?
                }
                None => Bibd::complete(v.expect("required"), k.expect("required"))?,
            };
            (construct_zauner(&bibd)?, pretty)
        }
        ConstructKind::Naimark { input, pretty } => {
            (read_frame(&input)?.naimark_complement()?, pretty)
        }
        ConstructKind::Spatial { input, pretty } => {
            (read_frame(&input)?.spatial_complement()?, pretty)
        }
        ConstructKind::Dsum { a, b, pretty } => {
            let left = read_frame(&Some(a))?;
            let right = read_frame(&Some(b))?;
            (left.direct_sum(&right)?, pretty)
        }
        ConstructKind::Hoggar { input, pretty } => (read_frame(&input)?.realify()?, pretty),
        ConstructKind::Harmonic {
            group,
            subgroup,
            set,
            pretty,
        } => {
            let g = AbelianGroup::parse(&group)?;
            let h = Subgroup::parse(&g, &subgroup)?;
            let subset = parse_set_file(&g, &set)?;
            let result = HarmonicSpec::new(g, h, subset)?.build()?;
            harmonic_flags_note(&result);
            (result.frame, pretty)
        }
        ConstructKind::FromDf { path, pretty } => {
            let df = parse_df(&read_input(&path)?)?;
            let result = harmonic::from_df(&df)?;
            harmonic_flags_note(&result);
            (result.frame, pretty)
        }
        ConstructKind::F0 { r, pretty } => (construct_f0_witness(r)?, pretty),
    };
    print_frame(&frame, pretty);
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_verification(rep: &VerificationReport) {
    println!(
        "frame: dim {}, {} blocks of rank {}, {}",
        rep.dim, rep.num_blocks, rep.subspace_dim, rep.field
    );
    println!(
        "tolerance: {:e} (effective {:e})",
        rep.tol, rep.effective_tol
    );
    println!(
        "tight: {} (residual {:e})",
        yes_no(rep.tight),
        rep.tight_residual
    );
    println!(
        "equichordal: {} (pair traces in [{:.12}, {:.12}], target {:.12})",
        yes_no(rep.equichordal),
        rep.pair_trace_min,
        rep.pair_trace_max,
        rep.trace_target
    );
    println!(
        "equi-isoclinic: {} (cos^2 target {:.12})",
        yes_no(rep.equiisoclinic),
        rep.ei_cos2_target
    );
    println!("max imaginary part: {:e}", rep.max_imag);
    println!("repeated subspaces: {}", yes_no(rep.repeated_subspaces));
}

fn verify(args: VerifyArgs) -> Result<()> {
    let frame = read_frame(&args.input)?;
    let report = frame.verify(args.tol);
    if args.json || args.pretty {
        return print_json(&report, args.pretty);
    }
    print_verification(&report);
    Ok(())
}

fn search(args: SearchArgs) -> Result<()> {
    let group = AbelianGroup::parse(&args.group)?;
    let families = search_df(&group, args.k, args.lambda, args.limit)?;
    if args.json || args.pretty {
        return print_json(&families, args.pretty);
    }
    println!(
        "found {} famil{} in {} with k = {}, lambda = {}",
        families.len(),
        if families.len() == 1 { "y" } else { "ies" },
        args.group,
        args.k,
        args.lambda
    );
    for f in &families {
        let value = serde_json::to_value(f)?;
        println!("  {}", serde_json::to_string(&value["blocks"])?);
    }
    Ok(())
}

fn complement(args: ComplementArgs) -> Result<()> {
    let frame = read_frame(&args.input)?;
    let out = match args.kind {
        ComplementKind::Naimark => frame.naimark_complement()?,
        ComplementKind::Spatial => frame.spatial_complement()?,
    };
    print_frame(&out, args.pretty);
    Ok(())
}
