//! Command-line front door for the toolkit: exact tau/nu with certificates,
//! the constructive pipelines, corpus generation, and desk-scale bound
//! verification with machine-readable reports.

use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num::rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use tuza_core::fixtures;
use tuza_core::graph::Graph;
use tuza_core::graph6;
use tuza_core::ninefifths::{self, ThreeTreeSeq};
use tuza_core::planar::{self, PlanarTriangulation};
use tuza_core::solve::{
    nu_exact_with_budget, tau_exact_with_budget, PackingCertificate, SolveError,
    TransversalCertificate, DEFAULT_NODE_BUDGET,
};

#[derive(Parser)]
#[command(name = "tuza", version, about = "Triangle transversal and packing toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimum triangle transversal of a graph file, with certificate
    Tau {
        input: PathBuf,
        /// search nodes to spend before giving up
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Maximum edge-disjoint triangle packing of a graph file, with certificate
    Nu {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Sample a family and check its tau/nu bound with exact solvers
    Verify {
        family: Family,
        /// instances to sample
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// inclusive order range A..B (defaults per family)
        #[arg(long)]
        n: Option<String>,
        /// master seed; per-instance orders and seeds are drawn from it
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// write the JSON-lines reports here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a construction pipeline and print its re-checked certificate
    Construct { pipeline: Pipeline, input: PathBuf },
    /// Write instance files for a fixture or a seeded random family
    Gen {
        family: GenFamily,
        /// vertex count for the random families
        #[arg(long)]
        n: Option<usize>,
        /// column count for the strip family
        #[arg(long)]
        len: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// on-disk encoding (defaults per family)
        #[arg(long)]
        format: Option<FileFormat>,
        /// output file, or directory when --count > 1
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// random partial 6-trees, bound tau <= 2 nu
    Tw6,
    /// random stacked planar triangulations, bound tau <= (3/2) nu
    Triangulation,
    /// random 3-trees, bound 5 tau <= 9 nu + 1
    #[value(name = "3tree")]
    ThreeTree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pipeline {
    /// dual-matching transversal of size n - 2 on a triangulation
    MatchingTransversal,
    /// dual-coloring facial packing on a triangulation
    ColoringPacking,
    /// transversal/packing pair with 5|X| <= 9|Y| + 1 on a 3-tree
    Ninetp,
    /// facial packing through the external face of a triangulation
    ExternalPacking,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    G6,
    FacesJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    /// K6 plus three apex vertices: 9 vertices, 33 edges, treewidth 6
    #[value(name = "k6-apex")]
    K6Apex,
    /// twice-stellated triangle: 10 faces, tight for external-face packings
    NestedStack,
    /// separating-triangle-free strip triangulation
    Strip,
    /// random stacked planar triangulation
    Tri,
    /// random 3-tree stacking sequence
    #[value(name = "3tree")]
    ThreeTree,
    /// random partial 6-tree
    Tw6,
}

/// Process outcome other than success; the code is the exit status contract:
/// 1 bound violated, 2 unreadable input, 3 budget exhausted, 4 internal breach.
enum Failure {
    Violation,
    Parse(String),
    Budget(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Violation => 1,
            Failure::Parse(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            Failure::Violation => None,
            Failure::Parse(m) | Failure::Budget(m) | Failure::Internal(m) => Some(m),
        }
    }
}

fn budget_failure(e: SolveError) -> Failure {
    Failure::Budget(e.to_string())
}

fn main() {
    let cli = Cli::parse();
    if let Err(f) = dispatch(cli) {
        if let Some(msg) = f.message() {
            eprintln!("error: {msg}");
        }
        std::process::exit(f.code());
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Tau { input, budget } => cmd_size(&input, budget, true),
        Cmd::Nu { input, budget } => cmd_size(&input, budget, false),
        Cmd::Verify { family, count, n, seed, jobs, budget, out } => {
            cmd_verify(family, count, n.as_deref(), seed, jobs, budget, out.as_deref())
        }
        Cmd::Construct { pipeline, input } => cmd_construct(pipeline, &input),
        Cmd::Gen { family, n, len, count, seed, format, out } => {
            cmd_gen(family, n, len, count, seed, format, out)
        }
    }
}

/// A parsed input file: face-list triangulation, 3-tree stacking sequence,
/// or a bare graph6 graph.
enum InstanceFile {
    Faces(PlanarTriangulation),
    Stacking(ThreeTreeSeq),
    Bare(Graph),
}

fn load_instance(path: &Path) -> Result<InstanceFile, Failure> {
    let body = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let text = body.trim();
    if text.starts_with('{') {
        if let Ok(t) = serde_json::from_str::<PlanarTriangulation>(text) {
            return Ok(InstanceFile::Faces(t));
        }
        if let Ok(s) = serde_json::from_str::<ThreeTreeSeq>(text) {
            return Ok(InstanceFile::Stacking(s));
        }
        Err(Failure::Parse(format!(
            "{}: JSON is neither a face list nor a stacking sequence",
            path.display()
        )))
    } else {
        let line = text
            .lines()
            .next()
            .ok_or_else(|| Failure::Parse(format!("{}: empty file", path.display())))?;
        graph6::decode(line.trim())
            .map(InstanceFile::Bare)
            .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
    }
}

fn graph_of(inst: &InstanceFile) -> Graph {
    match inst {
        InstanceFile::Faces(t) => t.graph().clone(),
        InstanceFile::Stacking(s) => s.to_graph(),
        InstanceFile::Bare(g) => g.clone(),
    }
}

fn cmd_size(input: &Path, budget: u64, transversal: bool) -> Result<(), Failure> {
    let g = graph_of(&load_instance(input)?);
    if transversal {
        let cert = tau_exact_with_budget(&g, budget).map_err(budget_failure)?;
        println!("tau={}", cert.size);
        println!("{}", serde_json::to_string(&cert).expect("certificate serializes"));
    } else {
        let cert = nu_exact_with_budget(&g, budget).map_err(budget_failure)?;
        println!("nu={}", cert.size);
        println!("{}", serde_json::to_string(&cert).expect("certificate serializes"));
    }
    Ok(())
}

#[derive(Serialize)]
struct RatioJson {
    num: i64,
    den: i64,
}

#[derive(Serialize)]
struct RunReport {
    id: String,
    family: &'static str,
    n: usize,
    tau: usize,
    nu: usize,
    ratio: Option<RatioJson>,
    bound: &'static str,
    holds: bool,
    wall_ms: u64,
    tau_digest: String,
    nu_digest: String,
}

#[derive(Serialize)]
struct Counterexample<'a> {
    id: &'a str,
    family: &'static str,
    n: usize,
    graph6: &'a str,
    tau_certificate: &'a TransversalCertificate,
    nu_certificate: &'a PackingCertificate,
}

struct Outcome {
    report: RunReport,
    encoded: String,
    tau_cert: TransversalCertificate,
    nu_cert: PackingCertificate,
}

impl Family {
    fn tag(self) -> &'static str {
        match self {
            Family::Tw6 => "tw6",
            Family::Triangulation => "triangulation",
            Family::ThreeTree => "3tree",
        }
    }

    fn bound(self) -> &'static str {
        match self {
            Family::Tw6 => "tau<=2*nu",
            Family::Triangulation => "2*tau<=3*nu",
            Family::ThreeTree => "5*tau<=9*nu+1",
        }
    }

    /// Smallest order the family's bound is claimed for; K4 is the lone
    /// triangulation excluded from the 3/2 inequality, so that family
    /// starts at 5.
    fn floor(self) -> usize {
        match self {
            Family::Tw6 => 7,
            Family::Triangulation => 5,
            Family::ThreeTree => 3,
        }
    }

    fn default_range(self) -> (usize, usize) {
        match self {
            Family::Tw6 => (7, 12),
            Family::Triangulation => (5, 12),
            Family::ThreeTree => (4, 14),
        }
    }

    fn holds(self, tau: usize, nu: usize) -> bool {
        match self {
            Family::Tw6 => tau <= 2 * nu,
            Family::Triangulation => 2 * tau <= 3 * nu,
            Family::ThreeTree => 5 * tau <= 9 * nu + 1,
        }
    }

    fn sample(self, n: usize, seed: u64) -> Result<Graph, Failure> {
        let internal = |e: &dyn std::fmt::Display| Failure::Internal(e.to_string());
        match self {
            Family::Tw6 => fixtures::random_partial_six_tree(n, seed)
                .map(|(g, _)| g)
                .map_err(|e| internal(&e)),
            Family::Triangulation => fixtures::random_stacked_triangulation(n, seed)
                .map(|t| t.graph().clone())
                .map_err(|e| internal(&e)),
            Family::ThreeTree => ninefifths::generate_3tree(n, seed)
                .map(|s| s.to_graph())
                .map_err(|e| internal(&e)),
        }
    }
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let number = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Failure::Parse(format!("bad order range '{text}'")))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (number(a)?, number(b)?),
        None => {
            let v = number(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(Failure::Parse(format!("empty order range '{text}'")));
    }
    Ok((lo, hi))
}

fn sha_digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("certificate serializes");
    format!("sha256:{:x}", Sha256::digest(&bytes))
}

fn run_instance(family: Family, id: String, n: usize, seed: u64, budget: u64) -> Result<Outcome, Failure> {
    let g = family.sample(n, seed)?;
    let start = Instant::now();
    let tau_cert = tau_exact_with_budget(&g, budget).map_err(budget_failure)?;
    let nu_cert = nu_exact_with_budget(&g, budget).map_err(budget_failure)?;
    let wall_ms = start.elapsed().as_millis() as u64;
    let (tau, nu) = (tau_cert.size, nu_cert.size);
    let ratio = (nu > 0).then(|| {
        let r = Ratio::new(tau as i64, nu as i64);
        RatioJson { num: *r.numer(), den: *r.denom() }
    });
    let report = RunReport {
        id,
        family: family.tag(),
        n: g.n(),
        tau,
        nu,
        ratio,
        bound: family.bound(),
        holds: family.holds(tau, nu),
        wall_ms,
        tau_digest: sha_digest(&tau_cert),
        nu_digest: sha_digest(&nu_cert),
    };
    Ok(Outcome { report, encoded: graph6::encode(&g), tau_cert, nu_cert })
}

fn cmd_verify(
    family: Family,
    count: usize,
    n: Option<&str>,
    seed: u64,
    jobs: Option<usize>,
    budget: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let (lo, hi) = match n {
        Some(text) => parse_range(text)?,
        None => family.default_range(),
    };
    if lo < family.floor() {
        return Err(Failure::Parse(format!(
            "family {} needs n >= {}, got {lo}",
            family.tag(),
            family.floor()
        )));
    }

    // parameter draws are sequential so reports are independent of --jobs
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<(String, usize, u64)> = (1..=count)
        .map(|i| {
            let order = rng.gen_range(lo..=hi);
            let instance_seed: u64 = rng.gen();
            (format!("{}-{i:04}", family.tag()), order, instance_seed)
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Internal(e.to_string()))?;
    let results: Vec<Result<Outcome, Failure>> = pool.install(|| {
        params
            .par_iter()
            .map(|(id, order, s)| run_instance(family, id.clone(), *order, *s, budget))
            .collect()
    });

    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(
            fs::File::create(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    let mut violated: Option<Outcome> = None;
    for result in results {
        let outcome = result?;
        let line = serde_json::to_string(&outcome.report).expect("report serializes");
        writeln!(sink, "{line}").map_err(|e| Failure::Internal(e.to_string()))?;
        if !outcome.report.holds && violated.is_none() {
            violated = Some(outcome);
        }
    }
    drop(sink);

    if let Some(outcome) = violated {
        let r = &outcome.report;
        eprintln!("bound {} violated on {}: tau={} nu={}", r.bound, r.id, r.tau, r.nu);
        let dump = Counterexample {
            id: &r.id,
            family: r.family,
            n: r.n,
            graph6: &outcome.encoded,
            tau_certificate: &outcome.tau_cert,
            nu_certificate: &outcome.nu_cert,
        };
        eprintln!("{}", serde_json::to_string(&dump).expect("counterexample serializes"));
        return Err(Failure::Violation);
    }
    Ok(())
}

/// Runs a pipeline that must uphold its own postconditions; a panic inside
/// is an internal invariant breach, never a user error.
fn guarded<T>(f: impl FnOnce() -> T) -> Result<T, Failure> {
    catch_unwind(AssertUnwindSafe(f))
        .map_err(|_| Failure::Internal("construction violated its own postcondition".into()))
}

fn require_faces(inst: InstanceFile, pipeline: &str) -> Result<PlanarTriangulation, Failure> {
    match inst {
        InstanceFile::Faces(t) => Ok(t),
        _ => Err(Failure::Parse(format!("{pipeline} expects a face-list triangulation"))),
    }
}

fn cmd_construct(pipeline: Pipeline, input: &Path) -> Result<(), Failure> {
    let inst = load_instance(input)?;
    let line = match pipeline {
        Pipeline::MatchingTransversal => {
            let t = require_faces(inst, "matching-transversal")?;
            let cert = guarded(|| planar::transversal_via_matching(&t))?
                .map_err(|e| Failure::Parse(e.to_string()))?;
            cert.validate(t.graph()).map_err(|e| Failure::Internal(e.to_string()))?;
            serde_json::to_string(&cert)
        }
        Pipeline::ColoringPacking => {
            let t = require_faces(inst, "coloring-packing")?;
            let cert = guarded(|| planar::packing_via_coloring(&t))?
                .map_err(|e| Failure::Parse(e.to_string()))?;
            cert.validate(t.graph()).map_err(|e| Failure::Internal(e.to_string()))?;
            serde_json::to_string(&cert)
        }
        Pipeline::ExternalPacking => {
            let t = require_faces(inst, "external-packing")?;
            let cert = guarded(|| planar::packing_with_external(&t))?;
            cert.validate(t.graph()).map_err(|e| Failure::Internal(e.to_string()))?;
            if !cert.triangles.contains(&t.external_face()) {
                return Err(Failure::Internal("packing lost the external face".into()));
            }
            serde_json::to_string(&cert)
        }
        Pipeline::Ninetp => {
            let seq = match inst {
                InstanceFile::Stacking(s) => s,
                InstanceFile::Bare(g) => ninefifths::three_tree_sequence(&g)
                    .map_err(|e| Failure::Parse(e.to_string()))?,
                InstanceFile::Faces(t) => ninefifths::three_tree_sequence(t.graph())
                    .map_err(|e| Failure::Parse(e.to_string()))?,
            };
            let pair = guarded(|| ninefifths::nine_fifths_tp(&seq))?;
            pair.validate(&seq.to_graph()).map_err(|e| Failure::Internal(e.to_string()))?;
            serde_json::to_string(&pair)
        }
    };
    println!("{}", line.expect("certificate serializes"));
    Ok(())
}

impl GenFamily {
    fn tag(self) -> &'static str {
        match self {
            GenFamily::K6Apex => "k6-apex",
            GenFamily::NestedStack => "nested-stack",
            GenFamily::Strip => "strip",
            GenFamily::Tri => "tri",
            GenFamily::ThreeTree => "3tree",
            GenFamily::Tw6 => "tw6",
        }
    }
}

/// One rendered instance: file body (newline-terminated) plus extension.
fn render_instance(
    family: GenFamily,
    n: Option<usize>,
    len: Option<usize>,
    seed: u64,
    format: Option<FileFormat>,
) -> Result<(String, &'static str), Failure> {
    let need_n = |floor: usize| -> Result<usize, Failure> {
        let v = n.ok_or_else(|| Failure::Parse(format!("{} needs --n", family.tag())))?;
        if v < floor {
            return Err(Failure::Parse(format!("{} needs --n >= {floor}", family.tag())));
        }
        Ok(v)
    };
    let g6 = |g: &Graph| (graph6::encode(g) + "\n", "g6");
    let faces = |t: &PlanarTriangulation| {
        (serde_json::to_string(t).expect("face list serializes") + "\n", "faces.json")
    };
    let refuse_faces = |what: &str| {
        Failure::Parse(format!("{}: {what}, there is no face list to write", family.tag()))
    };

    Ok(match family {
        GenFamily::K6Apex => match format {
            Some(FileFormat::FacesJson) => return Err(refuse_faces("the fixture is not planar")),
            _ => g6(&fixtures::k6_three_apex_graph().0),
        },
        GenFamily::Tw6 => match format {
            Some(FileFormat::FacesJson) => return Err(refuse_faces("the family is not planar")),
            _ => {
                let v = need_n(7)?;
                let (g, _) = fixtures::random_partial_six_tree(v, seed)
                    .map_err(|e| Failure::Parse(e.to_string()))?;
                g6(&g)
            }
        },
        GenFamily::NestedStack => {
            let t = planar::nested_stellation();
            match format {
                Some(FileFormat::G6) => g6(t.graph()),
                _ => faces(&t),
            }
        }
        GenFamily::Strip => {
            let cols = len.ok_or_else(|| Failure::Parse("strip needs --len".into()))?;
            if cols < 2 {
                return Err(Failure::Parse("strip needs --len >= 2".into()));
            }
            let t = planar::strip_triangulation(cols);
            match format {
                Some(FileFormat::G6) => g6(t.graph()),
                _ => faces(&t),
            }
        }
        GenFamily::Tri => {
            let v = need_n(4)?;
            let t = fixtures::random_stacked_triangulation(v, seed)
                .map_err(|e| Failure::Parse(e.to_string()))?;
            match format {
                Some(FileFormat::G6) => g6(t.graph()),
                _ => faces(&t),
            }
        }
        GenFamily::ThreeTree => {
            let v = need_n(3)?;
            let seq = ninefifths::generate_3tree(v, seed)
                .map_err(|e| Failure::Parse(e.to_string()))?;
            match format {
                Some(FileFormat::G6) => g6(&seq.to_graph()),
                Some(FileFormat::FacesJson) => {
                    return Err(refuse_faces("stacking sequences are not face lists"))
                }
                None => (
                    serde_json::to_string(&seq).expect("sequence serializes") + "\n",
                    "json",
                ),
            }
        }
    })
}

fn cmd_gen(
    family: GenFamily,
    n: Option<usize>,
    len: Option<usize>,
    count: usize,
    seed: u64,
    format: Option<FileFormat>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..count).map(|_| rng.gen()).collect();

    for (i, instance_seed) in seeds.iter().enumerate() {
        let (body, ext) = render_instance(family, n, len, *instance_seed, format)?;
        let default_name = format!("{}.{ext}", family.tag());
        let path = if count == 1 {
            match &out {
                Some(p) if p.is_dir() => p.join(default_name),
                Some(p) => p.clone(),
                None => PathBuf::from(default_name),
            }
        } else {
            let dir = out.clone().unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir)
                .map_err(|e| Failure::Parse(format!("{}: {e}", dir.display())))?;
            dir.join(format!("{}-{:04}.{ext}", family.tag(), i + 1))
        };
        fs::write(&path, body).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}
