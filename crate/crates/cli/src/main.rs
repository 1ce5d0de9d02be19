mod cache;
mod canon;
mod commands;
mod render;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hopfkit::io::Loader;
use hopfkit::{Descriptor, Error, PerfectMode, SearchOptions};
use rayon::prelude::*;
use serde_json::{json, Value};

use cache::Cache;
use commands::{FormChoice, Outcome};

const SCHEMA: &str = "hopfkit.report.v1";
const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exact computations with finite-dimensional Hopf algebras.
///
/// Inputs are spec files (JSON) or builtin descriptors such as `uqsl2(3)`.
/// Reports go to stdout, diagnostics to stderr. Exit status: 0 when every
/// check passed, 1 on a verification failure or inconsistency, 2 on usage,
/// parse or input errors.
#[derive(Parser, Debug)]
#[command(name = "hopfkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Report cache directory; HOPFKIT_CACHE takes precedence.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Perfect {
    Auto,
    Split,
    Assert,
    Skip,
}

impl From<Perfect> for PerfectMode {
    fn from(p: Perfect) -> Self {
        match p {
            Perfect::Auto => PerfectMode::Auto,
            Perfect::Split => PerfectMode::Split,
            Perfect::Assert => PerfectMode::Assert,
            Perfect::Skip => PerfectMode::Skip,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the Hopf algebra axioms.
    Verify {
        #[arg(required = true)]
        hopf: Vec<String>,
    },
    /// Integrals, cointegrals, modular function, distinguished grouplike.
    Invariants {
        #[arg(required = true)]
        hopf: Vec<String>,
        /// Candidate pivotal element, e.g. `K`; may be repeated.
        #[arg(long)]
        pivot: Vec<String>,
    },
    /// Emit the spec file of a builtin.
    Builtin {
        /// Builtin name, or a full descriptor such as `taft(3, 1)`.
        name: String,
        /// Parameter as key=value, e.g. `--param n=3`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, String)>,
    },
    /// Frobenius and tensor-Frobenius classification of a bialgebra map.
    ClassifyMap {
        map: String,
        #[arg(long, value_enum, default_value_t = Perfect::Auto)]
        perfect: Perfect,
    },
    /// Search for an f-Frobenius element of a comodule algebra.
    FFrobenius {
        map: String,
        comodule: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        attempts: usize,
    },
    /// The algebra of internal natural transformations and its Frobenius form.
    Nat {
        hopf: String,
        comodule: String,
        /// Bimodule spec file; defaults to L as a bimodule over itself.
        #[arg(long)]
        bimodule: Option<String>,
        /// Pivotal element for the symmetry check.
        #[arg(long)]
        pivot: Option<String>,
        #[arg(long, value_enum, default_value_t = FormChoice::Auto)]
        form: FormChoice,
    },
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

type Compute = Box<dyn Fn(&Loader) -> hopfkit::Result<Outcome> + Send + Sync>;

/// One report to produce: its cache identity and the computation.
struct Job {
    command: &'static str,
    inputs: Vec<(&'static str, String)>,
    options: BTreeMap<&'static str, Value>,
    compute: Compute,
}

struct Produced {
    body: String,
    ok: bool,
}

fn run_job(job: &Job, base: &Path, cache: Option<&Cache>) -> hopfkit::Result<Produced> {
    let inputs: Vec<Value> = job
        .inputs
        .iter()
        .map(|(role, r)| {
            let canonical = canon::canonical(r, base)?;
            Ok(json!({ "role": role, "ref": r, "sha256": canon::hash_value(&canonical) }))
        })
        .collect::<hopfkit::Result<_>>()?;
    let command = json!({
        "name": job.command,
        "args": job.inputs.iter().map(|(_, r)| r.as_str()).collect::<Vec<_>>(),
        "options": job.options,
    });
    let key = canon::hash_value(&json!({
        "schema": SCHEMA,
        "version": VERSION,
        "command": command,
        "inputs": inputs,
    }));
    if let Some(body) = cache.and_then(|c| c.get(&key)) {
        if let Ok(v) = serde_json::from_str::<Value>(&body) {
            eprintln!("hopfkit: cache hit {key}");
            return Ok(Produced { ok: v["ok"].as_bool() == Some(true), body });
        }
    }
    let loader = Loader::new(base);
    let outcome = (job.compute)(&loader).or_else(Outcome::from_error)?;
    let report = json!({
        "schema": SCHEMA,
        "version": VERSION,
        "command": command,
        "inputs": inputs,
        "ok": outcome.ok,
        "checks": outcome.checks,
        "result": outcome.result,
        "witnesses": outcome.witnesses,
        "warnings": outcome.warnings,
    });
    let body = render::json(&report);
    if let Some(c) = cache {
        if let Err(e) = c.put(&key, &body) {
            eprintln!("hopfkit: cache write failed: {e}");
        }
    }
    Ok(Produced { body, ok: outcome.ok })
}

fn jobs(cmd: &Cmd) -> Vec<Job> {
    match cmd {
        Cmd::Verify { hopf } => hopf
            .iter()
            .map(|r| {
                let r2 = r.clone();
                Job {
                    command: "verify",
                    inputs: vec![("hopf", r.clone())],
                    options: BTreeMap::new(),
                    compute: Box::new(move |l| commands::verify(l, &r2)),
                }
            })
            .collect(),
        Cmd::Invariants { hopf, pivot } => hopf
            .iter()
            .map(|r| {
                let (r2, pivots) = (r.clone(), pivot.clone());
                Job {
                    command: "invariants",
                    inputs: vec![("hopf", r.clone())],
                    options: BTreeMap::from([("pivot", json!(pivot))]),
                    compute: Box::new(move |l| commands::invariants(l, &r2, &pivots)),
                }
            })
            .collect(),
        Cmd::ClassifyMap { map, perfect } => {
            let (m, mode) = (map.clone(), *perfect);
            vec![Job {
                command: "classify-map",
                inputs: vec![("map", map.clone())],
                options: BTreeMap::from([("perfect", json!(format!("{mode:?}").to_lowercase()))]),
                compute: Box::new(move |l| commands::classify_map(l, &m, mode.into())),
            }]
        }
        Cmd::FFrobenius { map, comodule, seed, attempts } => {
            let (m, c) = (map.clone(), comodule.clone());
            let opts = SearchOptions { seed: *seed, attempts: *attempts };
            vec![Job {
                command: "f-frobenius",
                inputs: vec![("map", map.clone()), ("comodule", comodule.clone())],
                options: BTreeMap::from([("seed", json!(seed)), ("attempts", json!(attempts))]),
                compute: Box::new(move |l| commands::f_frobenius(l, &m, &c, opts)),
            }]
        }
        Cmd::Nat { hopf, comodule, bimodule, pivot, form } => {
            let (h, c, b, p, f) = (hopf.clone(), comodule.clone(), bimodule.clone(), pivot.clone(), *form);
            let mut inputs = vec![("hopf", hopf.clone()), ("comodule", comodule.clone())];
            if let Some(b) = bimodule {
                inputs.push(("bimodule", b.clone()));
            }
            vec![Job {
                command: "nat",
                inputs,
                options: BTreeMap::from([
                    ("pivot", json!(pivot)),
                    ("form", json!(format!("{form:?}").to_lowercase())),
                ]),
                compute: Box::new(move |l| commands::nat(l, &h, &c, b.as_deref(), p.as_deref(), f)),
            }]
        }
        Cmd::Builtin { .. } => unreachable!("builtin is not a report command"),
    }
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn builtin(name: &str, params: &[(String, String)]) -> hopfkit::Result<String> {
    let d = if name.contains('(') {
        if !params.is_empty() {
            return Err(Error::InvalidParameter("use either a full descriptor or --param".into()));
        }
        name.parse::<Descriptor>()?
    } else {
        Descriptor::from_params(name, params)?
    };
    Ok(render::json(&commands::builtin_spec(&d)?))
}

fn run(cli: &Cli) -> hopfkit::Result<bool> {
    if let Cmd::Builtin { name, params } = &cli.command {
        let spec = builtin(name, params)?;
        emit(cli.out.as_deref(), &spec).map_err(io_error)?;
        return Ok(true);
    }
    let cache_dir = std::env::var_os("HOPFKIT_CACHE")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| cli.cache_dir.clone());
    let cache = match cache_dir {
        Some(d) => Some(Cache::open(d).map_err(io_error)?),
        None => None,
    };
    let base = PathBuf::from(".");
    let jobs = jobs(&cli.command);
    let produced: Vec<Produced> = jobs
        .par_iter()
        .map(|j| run_job(j, &base, cache.as_ref()))
        .collect::<hopfkit::Result<_>>()?;
    let ok = produced.iter().all(|p| p.ok);
    let text = match (cli.format, produced.len()) {
        (Format::Json, 1) => produced[0].body.clone(),
        (Format::Json, _) => {
            let all: Vec<Value> = produced.iter().map(|p| serde_json::from_str(&p.body).expect("json")).collect();
            render::json(&Value::Array(all))
        }
        (Format::Text, _) => produced
            .iter()
            .map(|p| render::text(&serde_json::from_str(&p.body).expect("json")))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(cli.out.as_deref(), &text).map_err(io_error)?;
    Ok(ok)
}

fn io_error(e: std::io::Error) -> Error {
    Error::Parse { location: "io".into(), message: e.to_string() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hopfkit: {e}");
            ExitCode::from(2)
        }
    }
}
