use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use poincare::draw;
use poincare::io::{parse_word, Job, JobInput};
use poincare::pipeline::{self, Domain, VERIFY_SAMPLES};
use poincare::{Error, Point};

#[derive(Parser)]
#[command(name = "poincare", version, about = "Presentations of discontinuous isometry groups from fundamental polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute generators and relations.
    Present(Common),
    /// Compute the Dirichlet domain only.
    Dirichlet(Common),
    /// Check the local tessellation around the window.
    Verify(Common),
    /// Write a group element as a word in the side pairings.
    Factor {
        #[command(flatten)]
        common: Common,
        /// The element, as a word in the input generators.
        #[arg(long)]
        word: String,
    },
    /// Draw the tiling inside the window as SVG (2-D only).
    Draw(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Gap,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Point tolerance; the geometric tolerance is 100 times larger.
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated chart coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    window_center: Option<Vec<f64>>,
    #[arg(long)]
    window_radius: Option<f64>,
    #[arg(long)]
    word_radius: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// A failure with its exit status.
struct Failure {
    status: u8,
    diagnostics: Vec<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match e {
            Error::TileCap(_) => 3,
            _ => 2,
        };
        Failure { status, diagnostics: vec![diagnostic(&e)] }
    }
}

fn diagnostic(e: &Error) -> Value {
    let mut d = json!({ "code": e.code(), "message": e.to_string() });
    if let Some(s) = e.side() {
        d["side"] = json!(s);
    }
    d
}

fn io_failure(msg: String) -> Failure {
    Failure { status: 1, diagnostics: vec![json!({ "code": "IO", "message": msg })] }
}

fn load(c: &Common) -> Result<Job, Failure> {
    let text = fs::read_to_string(&c.input).map_err(|e| io_failure(format!("{}: {e}", c.input.display())))?;
    let mut input = JobInput::from_json(&text).map_err(|e| Failure { status: 1, diagnostics: vec![diagnostic(&e)] })?;
    if let Some(t) = c.tol {
        input.tolerance = Some(t);
    }
    if let Some(r) = c.word_radius {
        input.word_radius = Some(r);
    }
    if let Some(s) = c.seed {
        input.seed = Some(s);
    }
    let mut job = Job::from_input(&input)?;
    if c.window_center.is_some() || c.window_radius.is_some() {
        let center = match &c.window_center {
            Some(v) => Point::new(job.space, v.clone())?,
            None => job.window.as_ref().map_or_else(|| job.basepoint.clone(), |w| w.0.clone()),
        };
        let radius = c.window_radius.or(job.window.as_ref().map(|w| w.1)).unwrap_or(2.0);
        if !(radius > 0.0) {
            return Err(Error::Input("window radius must be positive".into()).into());
        }
        job.window = Some((center, radius));
    }
    Ok(job)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn present_json(d: &Domain, report: &poincare::tessellation::Report) -> Value {
    let mut v = d.presentation.to_json();
    v["verification"] = serde_json::to_value(report).expect("report serializes");
    if let Some(info) = &d.dirichlet {
        v["dirichlet"] = json!({ "stable": info.stable, "orbit_size": info.orbit_size });
    }
    v["warnings"] = json!(d.exploration.warnings);
    v
}

fn check_report(report: &poincare::tessellation::Report) -> Result<(), Failure> {
    if report.passed {
        return Ok(());
    }
    let diagnostics = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| json!({ "code": "VERIFICATION", "check": c.name, "message": c.detail, "witness": c.witness }))
        .collect();
    Err(Failure { status: 2, diagnostics })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Present(c) => {
            let job = load(&c)?;
            let d = pipeline::run(&job)?;
            let report = d.verify(VERIFY_SAMPLES);
            let json_text = pretty(&present_json(&d, &report));
            let gap_text = d.presentation.to_gap();
            let (primary, other, ext) = match c.format {
                Format::Json => (&json_text, &gap_text, "gap"),
                Format::Gap => (&gap_text, &json_text, "json"),
            };
            write_out(c.out.as_deref(), primary)?;
            if let Some(p) = &c.out {
                write_out(Some(&p.with_extension(ext)), other)?;
            }
            check_report(&report)
        }
        Command::Dirichlet(c) => {
            let job = load(&c)?;
            let (p, _, info, cands) = pipeline::fundamental_polyhedron(&job)?;
            let faces: Vec<Value> = p
                .halfspaces()
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    let word = cands.iter().find(|c| c.facet == i).map(|c| c.word.render(&job.names));
                    json!({ "halfspace": h.spec(), "word": word })
                })
                .collect();
            let v = json!({
                "faces": faces,
                "stable": info.as_ref().map(|i| i.stable),
                "orbit_size": info.as_ref().map(|i| i.orbit_size),
            });
            write_out(c.out.as_deref(), &pretty(&v))
        }
        Command::Verify(c) => {
            let job = load(&c)?;
            let d = pipeline::run(&job)?;
            let report = d.verify(VERIFY_SAMPLES);
            write_out(c.out.as_deref(), &pretty(&serde_json::to_value(&report).expect("report serializes")))?;
            check_report(&report)
        }
        Command::Factor { common: c, word } => {
            let job = load(&c)?;
            let w = parse_word(&word, &job.names)?;
            let d = pipeline::run(&job)?;
            let f = d.factor(&job.eval(&w), job.seed)?;
            let v = json!({
                "word": d.presentation.render(&f.word),
                "retries": f.retries,
                "generators": d.presentation.generators.iter().map(|g| json!({ "symbol": g.symbol, "word": g.source })).collect::<Vec<_>>(),
            });
            write_out(c.out.as_deref(), &pretty(&v))
        }
        Command::Draw(c) => {
            let job = load(&c)?;
            let d = pipeline::run(&job)?;
            write_out(c.out.as_deref(), &draw::svg(&d.exploration, Some(&d.presentation))?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("POINCARE_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            for d in &f.diagnostics {
                eprintln!("{d}");
            }
            ExitCode::from(f.status)
        }
    }
}
