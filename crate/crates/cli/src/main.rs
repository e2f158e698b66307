//! `semcompose` command-line tool.
//!
//! Exit status: 0 on success, 1 when no composition exists or a chain is
//! invalid, 2 on unreadable or malformed input. Reports go to stdout,
//! diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semcompose::codec::{
    load_chain, load_query, load_repository_from_openapi, load_repository_native, LoadOptions,
};
use semcompose::generator::{bench, generate, to_csv, GeneratorParams, TABLE_ROWS};
use semcompose::{
    find_composition, validate_chain, ComposeOptions, Ontology, Query, Repository, Strategy,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "semcompose",
    version,
    about = "Semantic web-service composition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a chain of services that reaches the goal of a query.
    Compose {
        #[command(flatten)]
        inputs: ProblemArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check whether a chain of service ids is a valid composition.
    Validate {
        #[command(flatten)]
        inputs: ProblemArgs,
        /// Chain file: `{"chain": [ids...]}`; the JSON report of `compose` works too.
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a random instance with a hidden valid composition.
    Generate {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Time compositions over generated instances and print a CSV report.
    Bench {
        /// A single custom row; all four size flags are needed. Without
        /// them the reference table rows are used.
        #[command(flatten)]
        size: OptionalSizeArgs,
        /// First seed of every row; instance `r` uses `seed + r`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        repetitions: usize,
        #[command(flatten)]
        search: SearchArgs,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    ontology: PathBuf,
    /// Repository in native JSON form.
    #[arg(long, conflicts_with = "openapi", required_unless_present = "openapi")]
    repo: Option<PathBuf>,
    /// OpenAPI 3 document; needs at least one `--annotations` file.
    #[arg(long, requires = "annotations")]
    openapi: Option<PathBuf>,
    /// JSON-LD annotation file (repeatable).
    #[arg(long, requires = "openapi")]
    annotations: Vec<PathBuf>,
    /// Skip operations that are not fully annotated instead of failing.
    #[arg(long)]
    lenient: bool,
    #[arg(long)]
    query: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::Fifo)]
    strategy: StrategyArg,
    /// Drop services whose removal keeps the chain valid.
    #[arg(long)]
    prune: bool,
}

#[derive(Args)]
struct SizeArgs {
    #[arg(long)]
    concepts: usize,
    #[arg(long)]
    properties: usize,
    #[arg(long)]
    services: usize,
    #[arg(long)]
    list_size: usize,
}

#[derive(Args)]
#[group(multiple = true, requires_all = ["concepts", "properties", "services", "list_size"])]
struct OptionalSizeArgs {
    #[arg(long)]
    concepts: Option<usize>,
    #[arg(long)]
    properties: Option<usize>,
    #[arg(long)]
    services: Option<usize>,
    #[arg(long)]
    list_size: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Fifo,
    Heuristic,
}

impl SearchArgs {
    fn options(&self) -> ComposeOptions {
        ComposeOptions {
            strategy: match self.strategy {
                StrategyArg::Fifo => Strategy::Fifo,
                StrategyArg::Heuristic => Strategy::Heuristic,
            },
            prune: self.prune,
        }
    }
}

/// A failure that maps to exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, InputError> {
    fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: semcompose::Result<T>) -> Result<T, InputError> {
    r.map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_problem(args: &ProblemArgs) -> Result<(Ontology, Repository, Query), InputError> {
    let ont = with_path(&args.ontology, Ontology::from_json(&read(&args.ontology)?))?;
    let repo = match (&args.repo, &args.openapi) {
        (Some(path), _) => with_path(path, load_repository_native(&read(path)?, &ont))?,
        (None, Some(path)) => {
            let annotations = args
                .annotations
                .iter()
                .map(|p| read(p))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&[u8]> = annotations.iter().map(Vec::as_slice).collect();
            let options = LoadOptions {
                strict: !args.lenient,
            };
            let load = with_path(
                path,
                load_repository_from_openapi(&read(path)?, &refs, &ont, options),
            )?;
            for w in &load.warnings {
                eprintln!("warning: {w}");
            }
            load.repository
        }
        (None, None) => return Err(InputError("either --repo or --openapi is required".into())),
    };
    let query = with_path(&args.query, load_query(&read(&args.query)?, &ont))?;
    Ok((ont, repo, query))
}

fn run(cli: Cli) -> Result<ExitCode, InputError> {
    match cli.command {
        Command::Compose {
            inputs,
            search,
            format,
        } => {
            let (ont, repo, query) = load_problem(&inputs)?;
            let found = find_composition(&ont, &repo, &query, search.options())?;
            let validated = match &found {
                Some(chain) => validate_chain(&ont, &repo, &query, chain)?,
                None => false,
            };
            match format {
                Format::Json => {
                    let ids = found.as_ref().map(|c| c.ids().to_vec()).unwrap_or_default();
                    let report = json!({ "solvable": found.is_some(), "chain": ids, "validated": validated });
                    println!("{}", serde_json::to_string_pretty(&report)?);
                }
                Format::Text => match &found {
                    None => println!("no valid composition"),
                    Some(chain) if chain.is_empty() => {
                        println!("goal already satisfied by the initial knowledge (empty chain)")
                    }
                    Some(chain) => {
                        for (i, id) in chain.ids().iter().enumerate() {
                            let name = repo.get(id).map_or("", |w| w.name.as_str());
                            println!("{}. {id} ({name})", i + 1);
                        }
                    }
                },
            }
            if found.is_some() && !validated {
                eprintln!("error: the composition failed independent validation");
                return Ok(ExitCode::from(1));
            }
            Ok(if found.is_some() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Validate {
            inputs,
            chain,
            format,
        } => {
            let (ont, repo, query) = load_problem(&inputs)?;
            let parsed = with_path(&chain, load_chain(&read(&chain)?))?;
            let valid = validate_chain(&ont, &repo, &query, &parsed)?;
            match format {
                Format::Json => println!("{}", json!({ "valid": valid, "chain": parsed.ids() })),
                Format::Text => println!("{}", if valid { "valid" } else { "invalid" }),
            }
            Ok(if valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Generate { size, seed, out } => {
            let params = GeneratorParams::new(
                size.concepts,
                size.properties,
                size.services,
                size.list_size,
                seed,
            );
            let inst = generate(&params)?;
            fs::create_dir_all(&out)?;
            let files = [
                ("ontology.json", inst.ontology_json()),
                ("repository.json", inst.repository_json()),
                ("query.json", inst.query_json()),
                ("dependency_list.json", inst.dependency_list_json()),
            ];
            for (name, body) in files {
                let path = out.join(name);
                fs::write(&path, body + "\n")
                    .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            }
            eprintln!("wrote instance (seed {seed}) to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            size,
            seed,
            repetitions,
            search,
            out,
        } => {
            let rows: Vec<GeneratorParams> = match size {
                OptionalSizeArgs {
                    concepts: Some(c),
                    properties: Some(p),
                    services: Some(s),
                    list_size: Some(l),
                } => vec![GeneratorParams::new(c, p, s, l, seed)],
                _ => TABLE_ROWS
                    .iter()
                    .map(|&(c, p, s, l)| GeneratorParams::new(c, p, s, l, seed))
                    .collect(),
            };
            for row in &rows {
                row.validate()?;
            }
            let report = bench(&rows, repetitions, search.options())?;
            for row in &report {
                let solved = row.instances.iter().filter(|i| i.solvable).count();
                let invalid = row
                    .instances
                    .iter()
                    .filter(|i| i.solvable && !i.validated)
                    .count();
                eprintln!(
                    "row {}+{} concepts+properties, {} services, list {}: {solved}/{} solved, {invalid} invalid",
                    row.params.num_concepts,
                    row.params.num_properties,
                    row.num_services,
                    row.dep_list_size,
                    row.instances.len()
                );
            }
            let csv = to_csv(&report);
            match out {
                Some(path) => fs::write(&path, csv)
                    .map_err(|e| InputError(format!("{}: {e}", path.display())))?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
