//! The `fibercheck` command line.
//!
//! Exit codes: 0 completed, 1 a verdict contradicts a corpus label, 2 input
//! could not be read or parsed, 3 a precondition was violated.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alexander::TwistedAlexanderResult;
use crate::fibering::{
    self, analyze_quotients, run_corpus, search_in, AnalysisOptions, CorpusOutcome, CorpusRun, FiberingReport,
    SearchOutcome,
};
use crate::presentation::{parse_presentation_file, CohomologyClass, CorpusLabel, PresentationFile};
use crate::quotients::{
    enumerate_cached, enumerate_quotients, Enumeration, EnumerationOptions, FiniteQuotient, QuotientDescriptor,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRADICTION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Config {
    /// Largest permutation degree searched.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub max_degree: u64,
    /// Largest quotient order kept.
    #[arg(long, default_value_t = 120, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub max_order: u64,
    /// Cap on enumeration search nodes.
    #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_nodes: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub threads: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub output: OutputFormat,
    /// JSON cache of enumerated quotients.
    #[arg(long = "cache", env = "FIBERCHECK_CACHE", global = true)]
    pub cache_path: Option<PathBuf>,
}

impl Config {
    fn analysis(&self) -> AnalysisOptions {
        AnalysisOptions {
            enumeration: EnumerationOptions {
                max_degree: self.max_degree as usize,
                max_order: self.max_order as usize,
                budget_nodes: self.budget_nodes,
            },
            cache_path: self.cache_path.clone(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fibercheck",
    version,
    about = "Twisted Alexander polynomials and fibering criteria"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Twisted Alexander polynomials over enumerated (or given) quotients.
    Compute {
        file: PathBuf,
        /// Generator images as a JSON array of 1-based permutations, or a
        /// path to a file holding one.
        #[arg(long)]
        quotient: Option<String>,
    },
    /// Monic and degree criteria across quotients.
    CheckFibered {
        file: PathBuf,
        /// Thurston norm of the class; defaults to the file's metadata.
        #[arg(long)]
        norm: Option<u64>,
    },
    /// Searches for a quotient with vanishing polynomial.
    SearchVanishing { file: PathBuf },
    /// Runs `check-fibered` on every `*.pres` file of a directory.
    Corpus { dir: PathBuf },
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

#[derive(Serialize)]
struct ComputeEntry {
    index: usize,
    quotient: QuotientDescriptor,
    vanishing: bool,
    result: Option<TwistedAlexanderResult>,
}

#[derive(Serialize)]
struct ComputeReport {
    schema: u32,
    name: String,
    phi: CohomologyClass,
    deficiency: i64,
    truncated: bool,
    search_nodes: u64,
    quotients: Vec<ComputeEntry>,
}

#[derive(Serialize)]
struct SearchReport {
    schema: u32,
    name: String,
    phi: CohomologyClass,
    #[serde(flatten)]
    outcome: SearchOutcome,
}

/// Parses `args` (including the program name) and runs; returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.config.threads {
        builder = builder.num_threads(n as usize);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_PRECONDITION;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path) -> Result<PresentationFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let mut f = parse_presentation_file(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    if f.presentation.name.is_empty() {
        f.presentation.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(f)
}

fn class_of(f: &PresentationFile) -> Result<CohomologyClass, Failure> {
    f.class().map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))
}

fn enumerate(f: &PresentationFile, config: &Config) -> Enumeration {
    let opts = config.analysis();
    match &opts.cache_path {
        Some(p) => enumerate_cached(&f.presentation, &opts.enumeration, p),
        None => enumerate_quotients(&f.presentation, &opts.enumeration),
    }
}

fn parse_quotient(f: &PresentationFile, arg: &str) -> Result<FiniteQuotient, Failure> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| fail(EXIT_PARSE, format!("{arg}: {e}")))?
    };
    let perms: Vec<Vec<usize>> = serde_json::from_str(&text).map_err(|e| fail(EXIT_PARSE, format!("quotient: {e}")))?;
    let perms = perms
        .into_iter()
        .map(|p| p.into_iter().map(|x| x.checked_sub(1)).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| fail(EXIT_PARSE, "quotient: permutation entries are 1-based"))?;
    FiniteQuotient::from_permutations(&f.presentation, perms).map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn perms_text(d: &QuotientDescriptor) -> String {
    let perms: Vec<String> = d
        .generator_perms
        .iter()
        .map(|p| format!("[{}]", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
        .collect();
    perms.join(" ")
}

fn dispatch(cli: &Cli) -> Result<(String, i32), Failure> {
    let config = &cli.config;
    let text = config.output == OutputFormat::Text;
    match &cli.command {
        Command::Compute { file, quotient } => {
            let f = load(file)?;
            let phi = class_of(&f)?;
            let e = match quotient {
                Some(arg) => Enumeration {
                    quotients: vec![parse_quotient(&f, arg)?],
                    truncated: false,
                    nodes: 0,
                },
                None => enumerate(&f, config),
            };
            let report = compute_report(&f, &phi, &e, config)?;
            Ok((if text { compute_text(&report) } else { json(&report) }, EXIT_OK))
        }
        Command::CheckFibered { file, norm } => {
            let f = load(file)?;
            let phi = class_of(&f)?;
            let e = enumerate(&f, config);
            let norm = norm.or(f.metadata.thurston_norm());
            let report = analyze_quotients(&f.presentation, &phi, norm, &e, &config.analysis())
                .map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))?;
            let code = if f.metadata.label == CorpusLabel::Fibered && report.overall.is_obstruction() {
                EXIT_CONTRADICTION
            } else {
                EXIT_OK
            };
            Ok((if text { report_text(&report) } else { json(&report) }, code))
        }
        Command::SearchVanishing { file } => {
            let f = load(file)?;
            let phi = class_of(&f)?;
            let e = enumerate(&f, config);
            let report = SearchReport {
                schema: 1,
                name: f.presentation.name.clone(),
                phi: phi.clone(),
                outcome: search_in(&f.presentation, &phi, &e),
            };
            Ok((if text { search_text(&report) } else { json(&report) }, EXIT_OK))
        }
        Command::Corpus { dir } => {
            let run =
                run_corpus(dir, &config.analysis()).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", dir.display())))?;
            let code = if run.contradictions() > 0 {
                EXIT_CONTRADICTION
            } else {
                EXIT_OK
            };
            Ok((if text { corpus_text(&run) } else { json(&run) }, code))
        }
    }
}

fn compute_report(
    f: &PresentationFile,
    phi: &CohomologyClass,
    e: &Enumeration,
    config: &Config,
) -> Result<ComputeReport, Failure> {
    let report = analyze_quotients(&f.presentation, phi, None, e, &config.analysis())
        .map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))?;
    Ok(ComputeReport {
        schema: 1,
        name: report.name,
        phi: phi.clone(),
        deficiency: report.deficiency,
        truncated: e.truncated,
        search_nodes: e.nodes,
        quotients: report
            .per_quotient
            .into_iter()
            .map(|c| ComputeEntry {
                index: c.index,
                quotient: c.quotient,
                vanishing: c.check.vanishing,
                result: c.check.result,
            })
            .collect(),
    })
}

fn compute_text(r: &ComputeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: phi = {:?}, deficiency {}", r.name, r.phi.images, r.deficiency);
    for q in &r.quotients {
        let _ = write!(
            s,
            "#{} |G|={} degree {} {}: ",
            q.index,
            q.quotient.order,
            q.quotient.degree,
            perms_text(&q.quotient)
        );
        match &q.result {
            Some(res) if !res.vanishing => {
                let _ = writeln!(
                    s,
                    "{} (degree {}, {}monic, div {})",
                    res.delta1,
                    res.degree.unwrap_or(0),
                    if res.monic == Some(true) { "" } else { "non" },
                    res.div_phi_alpha
                );
            }
            _ if q.vanishing => s.push_str("vanishes\n"),
            _ => s.push_str("nonvanishing (deficiency is not one)\n"),
        }
    }
    if r.truncated {
        s.push_str("warning: search budget exhausted; quotient list may be incomplete\n");
    }
    s
}

fn report_text(r: &FiberingReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: phi = {:?}, b3 = {}", r.name, r.phi.images, r.b3);
    for c in &r.per_quotient {
        let poly = c
            .check
            .result
            .as_ref()
            .map(|res| res.delta1.to_string())
            .unwrap_or_else(|| "-".into());
        let expected = c
            .check
            .expected_degree
            .map(|d| format!(" expected degree {d}"))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "#{} |G|={}: {:?} {poly}{expected}",
            c.index, c.quotient.order, c.check.verdict
        );
    }
    let _ = writeln!(s, "overall: {}", overall_text(&r.overall));
    if let Some(est) = &r.norm_lower_bound {
        let _ = writeln!(
            s,
            "degree-based norm estimate: {} (quotient #{})",
            est.value, est.quotient_index
        );
    }
    s
}

fn overall_text(o: &fibering::Overall) -> String {
    use fibering::Overall::*;
    match o {
        VanishingFound { quotient_index, order } => format!("VANISHING_FOUND at #{quotient_index} (|G| = {order})"),
        ObstructedNonmonic { quotient_index } => format!("OBSTRUCTED_NONMONIC at #{quotient_index}"),
        ObstructedDegree { quotient_index } => format!("OBSTRUCTED_DEGREE at #{quotient_index}"),
        ConsistentWithFibered { bound } | Inconclusive { bound } => format!(
            "{} (degree <= {}, order <= {}, {} quotients{})",
            o.name(),
            bound.max_degree,
            bound.max_order,
            bound.quotients_checked,
            if bound.truncated { ", truncated" } else { "" }
        ),
    }
}

fn search_text(r: &SearchReport) -> String {
    match &r.outcome {
        SearchOutcome::Found {
            quotient_index,
            quotient,
        } => format!(
            "{}: vanishing at #{quotient_index}, |G| = {} {}\n",
            r.name,
            quotient.order,
            perms_text(quotient)
        ),
        SearchOutcome::Exhausted {
            quotients_checked,
            truncated,
            ..
        } => format!(
            "{}: exhausted after {quotients_checked} quotients{}\n",
            r.name,
            if *truncated { " (budget exhausted)" } else { "" }
        ),
    }
}

fn corpus_text(run: &CorpusRun) -> String {
    let mut s = String::new();
    for e in &run.entries {
        let verdict = match &e.outcome {
            CorpusOutcome::Report(r) => overall_text(&r.overall),
            CorpusOutcome::Error { message } => format!("error: {message}"),
        };
        let label = format!("{:?}", e.label).to_lowercase();
        let flag = if e.contradiction { "  CONTRADICTS LABEL" } else { "" };
        let _ = writeln!(s, "{:<24} {:<10} {verdict}{flag}", e.file, label);
    }
    s
}
