//! Command-line front end: graph generation, annealing search, verification,
//! exhaustive oracle queries, integer-program export, and benchmarks.
//!
//! Exit codes: 0 solved/accepted, 1 unsolved/rejected, 2 usage error,
//! 3 invalid input, 4 budget exceeded.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use maglab::anneal::{multi_start, AnnealParams};
use maglab::bench::{run_bench, BenchConfig, BenchFamily, CSV_HEADER};
use maglab::generators;
use maglab::graph::{ElementClass, Graph};
use maglab::ilp::{build_ilp, constant_sweep, write_model};
use maglab::io::{
    graph_to_string, labelling_file_to_string, read_graph, read_labelling_file, Attestation,
    LabellingFile,
};
use maglab::labelling::{
    progression_candidates, verify, BijectionCheck, DomainSelector, KindCheck, LabelKind,
    SuperCheck, TargetKind, VerifyReport,
};
use maglab::objectives::Objective;
use maglab::oracle::{
    achievable_values, oracle_search, CensusKey, OracleError, OracleMode, OracleOutcome,
    OracleQuery,
};

const EXIT_OK: u8 = 0;
const EXIT_UNSOLVED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "maglab",
    version,
    about = "Magic and antimagic graph labellings: annealing search, exhaustive oracle, ILP export"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family and write it as a graph file
    Gen(GenCmd),
    /// Search for a labelling with the annealing heuristic
    Solve(SolveCmd),
    /// Verify a labelling file against its graph
    Verify(VerifyCmd),
    /// Exhaustive search or parameter census on a small instance
    Oracle(OracleCmd),
    /// Export the magic-labelling integer program in LP format
    ExportIlp(ExportIlpCmd),
    /// Run an iteration-count benchmark family, emitting CSV
    Bench(BenchCmd),
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn budget(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_BUDGET,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(cmd) => cmd.run(),
        Command::Solve(cmd) => cmd.run(),
        Command::Verify(cmd) => cmd.run(),
        Command::Oracle(cmd) => cmd.run(),
        Command::ExportIlp(cmd) => cmd.run(),
        Command::Bench(cmd) => cmd.run(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

// ---------------------------------------------------------------------------
// shared argument groups

#[derive(Args)]
struct InstanceArgs {
    /// Graph file to load
    #[arg(long, value_name = "PATH", conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Inline generator spec: complete N | cycle N | path N | wheel N |
    /// petersen N K | grid-p2p3 R S | p3power K | tree N SEED
    #[arg(long, num_args = 1.., value_name = "FAMILY PARAMS")]
    gen: Option<Vec<String>>,
    /// Attach faces where the generator supports them (cycle, wheel)
    #[arg(long)]
    faces: bool,
}

impl InstanceArgs {
    fn load(&self) -> Result<Graph, Failure> {
        match (&self.graph, &self.gen) {
            (Some(path), None) => load_graph(path),
            (None, Some(spec)) => build_from_spec(spec, self.faces),
            _ => Err(Failure::usage("provide exactly one of --graph or --gen")),
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let file = fs::File::open(path)
        .map_err(|e| Failure::input(format!("cannot open {}: {e}", path.display())))?;
    read_graph(BufReader::new(file)).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn build_from_spec(spec: &[String], faces: bool) -> Result<Graph, Failure> {
    let usage = || {
        Failure::usage(
            "generator spec: complete N | cycle N | path N | wheel N | petersen N K | \
             grid-p2p3 R S | p3power K | tree N SEED",
        )
    };
    let arg = |i: usize| -> Result<usize, Failure> {
        spec.get(i)
            .ok_or_else(usage)?
            .parse::<usize>()
            .map_err(|_| usage())
    };
    let expect_len = |len: usize| -> Result<(), Failure> {
        if spec.len() == len {
            Ok(())
        } else {
            Err(usage())
        }
    };
    let family = spec.first().ok_or_else(usage)?.as_str();
    let graph = match family {
        "complete" => {
            expect_len(2)?;
            generators::complete_graph(arg(1)?)
        }
        "cycle" => {
            expect_len(2)?;
            generators::cycle(arg(1)?, faces)
        }
        "path" => {
            expect_len(2)?;
            generators::path(arg(1)?)
        }
        "wheel" => {
            expect_len(2)?;
            generators::wheel(arg(1)?, faces)
        }
        "petersen" => {
            expect_len(3)?;
            generators::generalized_petersen(arg(1)?, arg(2)?)
        }
        "grid-p2p3" => {
            expect_len(3)?;
            let (r, s) = (arg(1)?, arg(2)?);
            generators::path(2).and_then(|p2| {
                let left = generators::power(&p2, r)?;
                let p3 = generators::path(3)?;
                let right = generators::power(&p3, s)?;
                generators::cartesian_product(&left, &right)
            })
        }
        "p3power" => {
            expect_len(2)?;
            let k = arg(1)?;
            generators::path(3).and_then(|p3| generators::power(&p3, k))
        }
        "tree" => {
            expect_len(3)?;
            generators::random_labelled_tree(arg(1)?, arg(2)? as u64)
        }
        _ => return Err(usage()),
    };
    graph.map_err(|e| Failure::usage(format!("generator: {e}")))
}

#[derive(Args)]
struct SelectorArgs {
    /// Label the vertices
    #[arg(long = "v")]
    vertices: bool,
    /// Label the edges
    #[arg(long = "e")]
    edges: bool,
    /// Label the faces
    #[arg(long = "f")]
    label_faces: bool,
}

impl SelectorArgs {
    fn selector(&self) -> Result<DomainSelector, Failure> {
        let sel = DomainSelector::new(self.vertices, self.edges, self.label_faces);
        if sel.is_empty() {
            return Err(Failure::usage("select at least one class: --v, --e, --f"));
        }
        Ok(sel)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetOpt {
    Vertices,
    Edges,
    Faces,
}

impl TargetOpt {
    fn class(self) -> ElementClass {
        match self {
            TargetOpt::Vertices => ElementClass::Vertex,
            TargetOpt::Edges => ElementClass::Edge,
            TargetOpt::Faces => ElementClass::Face,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindOpt {
    Magic,
    Antimagic,
    /// Arithmetic-progression antimagic; needs --a and --d, or --detect-ad
    Ad,
}

#[derive(Args)]
struct TaskArgs {
    /// Target class whose weights the labelling constrains
    #[arg(long, value_enum)]
    target: TargetOpt,
    /// Labelling kind
    #[arg(long, value_enum)]
    kind: KindOpt,
    /// Progression anchor (first weight) for --kind ad
    #[arg(long)]
    a: Option<u64>,
    /// Progression step for --kind ad
    #[arg(long)]
    d: Option<u64>,
    /// Require a super labelling (vertex labels within [1, |V|])
    #[arg(long = "super")]
    super_labelling: bool,
}

impl TaskArgs {
    /// Resolves the task. Returns `None` when the kind is `ad` without
    /// parameters and the caller allows a sweep.
    fn task(
        &self,
        selector: DomainSelector,
        allow_missing_ad: bool,
    ) -> Result<Option<TargetKind>, Failure> {
        if self.super_labelling && !selector.vertices {
            return Err(Failure::usage("--super requires --v"));
        }
        if !matches!(self.kind, KindOpt::Ad) && (self.a.is_some() || self.d.is_some()) {
            return Err(Failure::usage("--a/--d only apply to --kind ad"));
        }
        let kind = match self.kind {
            KindOpt::Magic => LabelKind::Magic,
            KindOpt::Antimagic => LabelKind::Antimagic,
            KindOpt::Ad => match (self.a, self.d) {
                (Some(a), Some(d)) => {
                    if a < 1 {
                        return Err(Failure::usage("--a must be at least 1"));
                    }
                    LabelKind::Progression { a, d }
                }
                (None, None) if allow_missing_ad => return Ok(None),
                _ => {
                    return Err(Failure::usage(
                        "--kind ad needs both --a and --d (or --detect-ad when solving)",
                    ))
                }
            },
        };
        Ok(Some(TargetKind {
            target: self.target.class(),
            kind,
            super_labelling: self.super_labelling,
        }))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            std::io::stdout()
                .flush()
                .map_err(|e| Failure::input(format!("stdout: {e}")))
        }
    }
}

// ---------------------------------------------------------------------------
// gen

#[derive(Args)]
struct GenCmd {
    /// Generator spec, e.g. `wheel 5` or `petersen 5 2`
    #[arg(num_args = 1.., value_name = "FAMILY PARAMS")]
    spec: Vec<String>,
    /// Attach faces where supported (cycle, wheel)
    #[arg(long)]
    faces: bool,
    /// Output path (stdout when omitted)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl GenCmd {
    fn run(self) -> Result<u8, Failure> {
        let graph = build_from_spec(&self.spec, self.faces)?;
        write_output(self.output.as_deref(), &graph_to_string(&graph))?;
        Ok(EXIT_OK)
    }
}

// ---------------------------------------------------------------------------
// solve

#[derive(Args)]
struct SolveCmd {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    selector: SelectorArgs,
    #[command(flatten)]
    task: TaskArgs,
    /// Sweep feasible (a,d) pairs for --kind ad; needs a finite --max-iters
    #[arg(long)]
    detect_ad: bool,
    /// Miss threshold p (default n(n-1)/2 for n labels)
    #[arg(long)]
    p: Option<u64>,
    /// Worse-acceptance probability q in (0,1) (default 2/p)
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration cap per run; 0 runs unbounded until solved
    #[arg(long = "max-iters", default_value_t = 10_000_000)]
    max_iters: u64,
    /// Independent seeded restarts
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Labelling file output path (stdout when omitted)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl SolveCmd {
    fn run(self) -> Result<u8, Failure> {
        let graph = self.instance.load()?;
        let selector = self.selector.selector()?;
        if self.runs < 1 {
            return Err(Failure::usage("--runs must be at least 1"));
        }
        if self.detect_ad && !matches!(self.task.kind, KindOpt::Ad) {
            return Err(Failure::usage("--detect-ad only applies to --kind ad"));
        }
        if self.detect_ad && (self.task.a.is_some() || self.task.d.is_some()) {
            return Err(Failure::usage("--detect-ad replaces --a/--d; give one or the other"));
        }
        let params = AnnealParams {
            miss_threshold: self.p,
            worse_probability: self.q,
            max_iters: self.max_iters,
            seed: self.seed,
            report_every: 0,
            paranoid: false,
        };

        match self.task.task(selector, self.detect_ad)? {
            Some(task) => self.solve_task(&graph, selector, task, &params),
            None => self.sweep_progressions(&graph, selector, &params),
        }
    }

    fn solve_task(
        &self,
        graph: &Graph,
        selector: DomainSelector,
        task: TargetKind,
        params: &AnnealParams,
    ) -> Result<u8, Failure> {
        let objective =
            Objective::for_task(task).map_err(|e| Failure::usage(format!("objective: {e}")))?;
        let (outcome, _) = multi_start(graph, selector, task, objective, params, self.runs)
            .map_err(|e| Failure::input(format!("anneal: {e}")))?;

        if outcome.solved {
            let report = verify(graph, &outcome.labelling, selector, task)
                .map_err(|e| Failure::input(format!("verify: {e}")))?;
            let attestation = Attestation::from_report(&report)
                .ok_or_else(|| Failure::input("solved labelling failed verification"))?;
            let file = LabellingFile::new(
                graph,
                &outcome.labelling,
                task,
                attestation,
                Some(outcome.seed),
            );
            write_output(self.output.as_deref(), &labelling_file_to_string(&file))?;
            eprintln!(
                "solved: seed={} iterations={} {}",
                outcome.seed,
                outcome.iterations,
                describe_attestation(&attestation)
            );
            Ok(EXIT_OK)
        } else {
            let file = LabellingFile::new(
                graph,
                &outcome.labelling,
                task,
                Attestation::Unsolved {
                    value: outcome.value,
                },
                Some(outcome.seed),
            );
            write_output(self.output.as_deref(), &labelling_file_to_string(&file))?;
            eprintln!(
                "unsolved after {} iterations per run ({} runs); best value {}",
                self.max_iters, self.runs, outcome.value
            );
            Ok(EXIT_UNSOLVED)
        }
    }

    /// Anneals each feasible (a,d) candidate in turn until one solves.
    fn sweep_progressions(
        &self,
        graph: &Graph,
        selector: DomainSelector,
        params: &AnnealParams,
    ) -> Result<u8, Failure> {
        if self.max_iters == 0 {
            return Err(Failure::usage(
                "--detect-ad sweeps candidates and needs a finite --max-iters",
            ));
        }
        let target = self.task.target.class();
        let candidates = progression_candidates(graph, selector, target)
            .map_err(|e| Failure::input(format!("candidate sweep: {e}")))?;
        if candidates.is_empty() {
            eprintln!("no feasible (a,d) candidates for this instance");
            return Ok(EXIT_UNSOLVED);
        }
        eprintln!("sweeping {} (a,d) candidates", candidates.len());
        let mut best_unsolved: Option<(TargetKind, maglab::AnnealOutcome)> = None;
        for (a, d) in candidates {
            let task = TargetKind {
                target,
                kind: LabelKind::Progression { a, d },
                super_labelling: self.task.super_labelling,
            };
            let objective = Objective::for_task(task)
                .map_err(|e| Failure::usage(format!("objective: {e}")))?;
            let (outcome, _) = multi_start(graph, selector, task, objective, params, self.runs)
                .map_err(|e| Failure::input(format!("anneal: {e}")))?;
            if outcome.solved {
                return self.solve_task(graph, selector, task, params);
            }
            if best_unsolved.as_ref().map_or(true, |(_, b)| outcome.value < b.value) {
                best_unsolved = Some((task, outcome));
            }
        }
        let (task, outcome) = best_unsolved.expect("candidates were nonempty");
        let file = LabellingFile::new(
            graph,
            &outcome.labelling,
            task,
            Attestation::Unsolved {
                value: outcome.value,
            },
            Some(outcome.seed),
        );
        write_output(self.output.as_deref(), &labelling_file_to_string(&file))?;
        eprintln!("no candidate solved; best value {}", outcome.value);
        Ok(EXIT_UNSOLVED)
    }
}

fn describe_attestation(attestation: &Attestation) -> String {
    match attestation {
        Attestation::Magic { k } => format!("magic constant {k}"),
        Attestation::Distinct { count } => format!("{count} pairwise distinct weights"),
        Attestation::Progression { a, d } => format!("progression a={a} d={d}"),
        Attestation::Unsolved { value } => format!("unsolved, value {value}"),
    }
}

// ---------------------------------------------------------------------------
// verify

#[derive(Args)]
struct VerifyCmd {
    /// Labelling file to check
    #[arg(long, value_name = "PATH")]
    labelling: PathBuf,
    /// Graph the labelling refers to
    #[arg(long, value_name = "PATH")]
    graph: PathBuf,
}

impl VerifyCmd {
    fn run(self) -> Result<u8, Failure> {
        let graph = load_graph(&self.graph)?;
        let file = fs::File::open(&self.labelling).map_err(|e| {
            Failure::input(format!("cannot open {}: {e}", self.labelling.display()))
        })?;
        let record = read_labelling_file(BufReader::new(file))
            .map_err(|e| Failure::input(format!("{}: {e}", self.labelling.display())))?;
        let labelling = record
            .to_labelling(&graph)
            .map_err(|e| Failure::input(format!("labelling does not fit graph: {e}")))?;
        let report = verify(&graph, &labelling, record.selector, record.task)
            .map_err(|e| Failure::input(format!("verify: {e}")))?;
        print_report(&report);

        if !report.accepted() {
            println!("rejected");
            return Ok(EXIT_UNSOLVED);
        }
        let recomputed = Attestation::from_report(&report).expect("accepted report");
        if recomputed != record.attestation {
            println!(
                "attestation mismatch: file says {}, recomputed {}",
                describe_attestation(&record.attestation),
                describe_attestation(&recomputed)
            );
            return Ok(EXIT_UNSOLVED);
        }
        println!("accepted: {}", describe_attestation(&recomputed));
        Ok(EXIT_OK)
    }
}

fn print_report(report: &VerifyReport) {
    match &report.bijection {
        BijectionCheck::Ok => println!("bijection: ok"),
        BijectionCheck::DuplicateLabel {
            label,
            first,
            second,
        } => println!("bijection: label {label} used by both {first} and {second}"),
        BijectionCheck::OutOfRange { element, label } => {
            println!("bijection: {element} has out-of-range label {label}")
        }
    }
    match &report.super_check {
        None => {}
        Some(SuperCheck::Ok) => println!("super range: ok"),
        Some(SuperCheck::VertexLabelOutOfRange { vertex, label }) => println!(
            "super range: vertex {} has label {label} outside the vertex range",
            vertex.0
        ),
    }
    match &report.kind {
        KindCheck::Magic { constant } => println!("kind: magic with constant {constant}"),
        KindCheck::Antimagic => println!("kind: antimagic, all weights distinct"),
        KindCheck::Progression { a, d } => println!("kind: progression a={a} d={d}"),
        KindCheck::NotMagic { first, second } => println!(
            "kind: not magic; {} weighs {} but {} weighs {}",
            first.0, first.1, second.0, second.1
        ),
        KindCheck::DuplicateWeight { first, second } => println!(
            "kind: duplicate weight; {} and {} both weigh {}",
            first.0, second.0, first.1
        ),
        KindCheck::OffProgression { expected, found } => match found {
            Some((el, w)) => {
                println!("kind: off progression; expected weight {expected}, {el} weighs {w}")
            }
            None => println!("kind: off progression; expected weight {expected}"),
        },
    }
    if let Some((a, d)) = report.detected_progression {
        println!("progression detected: a={a} d={d}");
    }
}

// ---------------------------------------------------------------------------
// oracle

#[derive(Clone, Copy, ValueEnum)]
enum ModeOpt {
    First,
    Count,
    Enumerate,
    Census,
}

#[derive(Args)]
struct OracleCmd {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    selector: SelectorArgs,
    #[command(flatten)]
    task: TaskArgs,
    #[arg(long, value_enum, default_value = "first")]
    mode: ModeOpt,
    /// Labelling cap for --mode enumerate
    #[arg(long, default_value_t = 10)]
    limit: usize,
    /// Node-expansion budget (0 = unlimited)
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Output path for found labellings (stdout when omitted)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl OracleCmd {
    fn run(self) -> Result<u8, Failure> {
        let graph = self.instance.load()?;
        let selector = self.selector.selector()?;
        let task = self
            .task
            .task(selector, false)?
            .expect("parameters are complete");
        let mode = match self.mode {
            ModeOpt::First => OracleMode::First,
            ModeOpt::Count | ModeOpt::Census => OracleMode::Count,
            ModeOpt::Enumerate => OracleMode::Enumerate { limit: self.limit },
        };
        let query = OracleQuery {
            selector,
            task,
            mode,
            budget: (self.budget > 0).then_some(self.budget),
        };

        let map_err = |e: OracleError| match e {
            OracleError::BudgetExceeded { .. } => Failure::budget(e.to_string()),
            other => Failure::input(other.to_string()),
        };

        if matches!(self.mode, ModeOpt::Census) {
            let census = achievable_values(&graph, &query).map_err(map_err)?;
            if census.is_empty() {
                println!("census: empty (no labelling of this kind exists)");
                return Ok(EXIT_UNSOLVED);
            }
            println!("parameter count");
            for (key, count) in &census {
                match key {
                    CensusKey::Magic(k) => println!("k={k} {count}"),
                    CensusKey::Progression { a, d } => println!("a={a},d={d} {count}"),
                }
            }
            println!("total {}", census.values().sum::<u64>());
            return Ok(EXIT_OK);
        }

        match oracle_search(&graph, &query).map_err(map_err)? {
            OracleOutcome::Count(count) => {
                println!("count {count}");
                Ok(EXIT_OK)
            }
            OracleOutcome::ExhaustedNone => {
                println!("exhausted: no labelling of this kind exists for this instance");
                Ok(EXIT_UNSOLVED)
            }
            OracleOutcome::Found {
                labellings,
                complete,
            } => {
                let mut text = String::new();
                for l in &labellings {
                    let report = verify(&graph, l, selector, task)
                        .map_err(|e| Failure::input(format!("verify: {e}")))?;
                    let attestation = Attestation::from_report(&report)
                        .ok_or_else(|| Failure::input("oracle result failed verification"))?;
                    let file = LabellingFile::new(&graph, l, task, attestation, None);
                    text.push_str(&labelling_file_to_string(&file));
                }
                write_output(self.output.as_deref(), &text)?;
                eprintln!(
                    "found {} labelling(s){}",
                    labellings.len(),
                    if complete { ", search complete" } else { "" }
                );
                Ok(EXIT_OK)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// export-ilp

#[derive(Args)]
struct ExportIlpCmd {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    selector: SelectorArgs,
    /// Target class whose weights the constant constrains
    #[arg(long, value_enum)]
    target: TargetOpt,
    /// Magic constant K
    #[arg(long = "K", value_name = "K", conflicts_with = "sweep")]
    constant: Option<i64>,
    /// Export one model per feasible constant (requires --output)
    #[arg(long)]
    sweep: bool,
    /// Output path; with --sweep, a `-K<k>` suffix is added per model
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl ExportIlpCmd {
    fn run(self) -> Result<u8, Failure> {
        let graph = self.instance.load()?;
        let selector = self.selector.selector()?;
        let target = self.target.class();
        let task = TargetKind {
            target,
            kind: LabelKind::Magic,
            super_labelling: false,
        };

        let constants: Vec<i64> = if self.sweep {
            if self.output.is_none() {
                return Err(Failure::usage("--sweep needs --output to name the files"));
            }
            let Some((lo, hi)) = constant_sweep(&graph, selector, target) else {
                eprintln!("feasible constant interval is empty; nothing to export");
                return Ok(EXIT_UNSOLVED);
            };
            eprintln!("feasible constants: {lo}..={hi}");
            (lo..=hi).map(|k| k as i64).collect()
        } else {
            vec![self
                .constant
                .ok_or_else(|| Failure::usage("provide --K <int> or --sweep"))?]
        };

        for k in constants {
            let model = build_ilp(&graph, selector, task, k)
                .map_err(|e| Failure::input(format!("model: {e}")))?;
            let mut buf = Vec::new();
            write_model(&model, &mut buf).map_err(|e| Failure::input(format!("write: {e}")))?;
            let text = String::from_utf8(buf).expect("lp text is ascii");
            match (&self.output, self.sweep) {
                (Some(path), true) => {
                    let sweep_path = path_with_constant(path, k);
                    write_output(Some(&sweep_path), &text)?;
                    eprintln!("wrote {}", sweep_path.display());
                }
                (out, _) => write_output(out.as_deref(), &text)?,
            }
        }
        Ok(EXIT_OK)
    }
}

fn path_with_constant(path: &Path, k: i64) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("lp");
    path.with_file_name(format!("{stem}-K{k}.{ext}"))
}

// ---------------------------------------------------------------------------
// bench

#[derive(Args)]
struct BenchCmd {
    /// Benchmark family: kn-super-vmt or p3power-antimagic
    #[arg(long)]
    family: String,
    /// First parameter value
    #[arg(long)]
    from: u64,
    /// Last parameter value (inclusive)
    #[arg(long)]
    to: u64,
    /// Runs per parameter value
    #[arg(long, default_value_t = 8)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration cap per run
    #[arg(long = "max-iters", default_value_t = 1_000_000)]
    max_iters: u64,
    /// Override the desk-scale range guardrail
    #[arg(long)]
    force: bool,
    /// CSV output path (stdout when omitted)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl BenchCmd {
    fn run(self) -> Result<u8, Failure> {
        let family = BenchFamily::parse(&self.family)
            .ok_or_else(|| Failure::usage("--family must be kn-super-vmt or p3power-antimagic"))?;
        let config = BenchConfig {
            runs_per_point: self.runs,
            seed: self.seed,
            max_iters: self.max_iters,
            force: self.force,
        };
        let summary = run_bench(family, self.from, self.to, &config)
            .map_err(|e| Failure::usage(format!("bench: {e}")))?;

        let mut csv = String::from(CSV_HEADER);
        csv.push('\n');
        for point in &summary.points {
            for record in &point.records {
                csv.push_str(&record.csv_row());
                csv.push('\n');
            }
        }
        write_output(self.output.as_deref(), &csv)?;

        for point in &summary.points {
            eprintln!(
                "param={} edges={} solved {}/{} mean-iterations={:.1}",
                point.param,
                point.edge_count,
                point.solved_runs,
                point.records.len(),
                point.mean_iterations
            );
        }
        if let Some((amplitude, rate)) = summary.exponential_fit {
            eprintln!("fit exponential: y = {amplitude:.3} * exp({rate:.4} x)");
        }
        if let Some((slope, intercept)) = summary.linear_fit {
            eprintln!("fit linear: y = {slope:.4} x + {intercept:.3}");
        }
        Ok(EXIT_OK)
    }
}
