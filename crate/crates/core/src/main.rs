use std::fmt::Write as _;
use std::io::{ErrorKind, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use subspace_bounds::api;
use subspace_bounds::ef::{SearchBudget, SkeletonMode};
use subspace_bounds::engine::{self, CodeKind, Facts, GridConfig, RecordView, SweepOrder, TableView};
use subspace_bounds::mdc::EvMode;
use subspace_bounds::qcalc::is_prime_power;
use subspace_bounds::{Direction, Error};

#[derive(Parser)]
#[command(name = "subspace-bounds", version, about = "Bounds for constant and mixed dimension subspace codes")]
struct Cli {
    /// Cache file (defaults to $SUBSPACE_TABLES_CACHE or ./subspace-bounds-cache.tsv).
    #[arg(long, global = true, env = "SUBSPACE_TABLES_CACHE")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EfMode {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvChoice {
    Lp,
    Bb,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Run the fixpoint over the grid and write the cache.
    Compute {
        /// Largest field size; every prime power up to it is computed.
        #[arg(long, default_value_t = 2)]
        qmax: i64,
        #[arg(long, default_value_t = 13)]
        nmax: i64,
        /// Node budget of the exact skeleton search.
        #[arg(long, default_value_t = SearchBudget::default().max_nodes)]
        ef_budget: u64,
        #[arg(long, value_enum, default_value_t = EfMode::Exact)]
        ef_mode: EfMode,
        #[arg(long, value_enum, default_value_t = EvChoice::Off)]
        ev_mode: EvChoice,
        /// Node budget for `--ev-mode bb`.
        #[arg(long, default_value_t = 200_000)]
        ev_nodes: u64,
        /// Shuffle the evaluation order with this seed.
        #[arg(long)]
        shuffle: Option<u64>,
        /// Facts file replacing the built-in one.
        #[arg(long)]
        facts: Option<PathBuf>,
        /// Ignore all facts.
        #[arg(long, conflicts_with = "facts")]
        no_facts: bool,
    },
    /// Print the JSON document of one cell (omit k for mixed dimension codes).
    Query {
        q: i64,
        n: i64,
        d: i64,
        k: Option<i64>,
        #[arg(long, default_value = "all")]
        view: String,
    },
    /// Print a table.
    Table {
        #[arg(long, default_value_t = 2)]
        q: i64,
        /// Ambient dimension of a constant dimension table.
        #[arg(long, required_unless_present = "mdc")]
        n: Option<i64>,
        #[arg(long, default_value = "short")]
        view: String,
        /// Print the mixed dimension table instead.
        #[arg(long)]
        mdc: bool,
    },
    /// Rank constraints by how often they attain the best bound.
    Toplist {
        #[arg(long)]
        mdc: bool,
    },
    /// Serve the JSON API over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

/// Runs a command and returns what it prints on stdout.
fn run(cli: Cli) -> Result<String, Error> {
    let mut out = String::new();
    let cache = cli.cache.unwrap_or_else(engine::default_cache_path);
    match cli.command {
        Command::Compute { qmax, nmax, ef_budget, ef_mode, ev_mode, ev_nodes, shuffle, facts, no_facts } => {
            let qs: Vec<i64> = (2..=qmax).filter(|&q| is_prime_power(q)).collect();
            let mut config = GridConfig::new(qs, nmax);
            config.ef_budget.max_nodes = ef_budget;
            config.ef_mode = match ef_mode {
                EfMode::Exact => SkeletonMode::Exact,
                EfMode::Greedy => SkeletonMode::Greedy,
            };
            config.ev_mode = match ev_mode {
                EvChoice::Lp => Some(EvMode::Lp),
                EvChoice::Bb => Some(EvMode::BranchAndBound { max_nodes: ev_nodes }),
                EvChoice::Off => None,
            };
            if let Some(seed) = shuffle {
                config.order = SweepOrder::Permuted(seed);
            }
            let facts = match (facts, no_facts) {
                (_, true) => Facts::empty(),
                (Some(p), _) => Facts::load(&p)?,
                (None, _) => Facts::builtin(),
            };
            let start = Instant::now();
            let table = engine::fixpoint(&config, &facts)?;
            engine::write_cache(&table, &cache)?;
            eprintln!(
                "computed {} constant and {} mixed dimension cells for q in {:?}, n <= {} in {:.1}s; wrote {}",
                table.cdc.len(),
                table.mdc.len(),
                table.qs,
                table.nmax,
                start.elapsed().as_secs_f64(),
                cache.display()
            );
        }
        Command::Query { q, n, d, k, view } => {
            let table = engine::read_cache(&cache)?;
            let view: RecordView = view.parse()?;
            let doc = match k {
                Some(k) => api::cdc_document(&table, q, n, d, k, view)?,
                None => api::mdc_document(&table, q, n, d, view)?,
            };
            let _ = writeln!(out, "{doc}");
        }
        Command::Table { q, n, view, mdc } => {
            let table = engine::read_cache(&cache)?;
            let view: TableView = view.parse()?;
            let text = match (mdc, n) {
                (true, _) => engine::render_mdc_table(&table, q, view)?,
                (false, Some(n)) => engine::render_cdc_table(&table, q, n, view)?,
                (false, None) => unreachable!("clap requires --n"),
            };
            out = text;
        }
        Command::Toplist { mdc } => {
            let table = engine::read_cache(&cache)?;
            let kind = if mdc { CodeKind::Mdc } else { CodeKind::Cdc };
            for (title, dir) in [("lower bounds", Direction::Lower), ("upper bounds", Direction::Upper)] {
                let _ = writeln!(out, "{title}:");
                out.push_str(&engine::render_toplist(&engine::toplist(&table, kind, dir)));
            }
        }
        Command::Serve { port, host } => {
            let table = engine::read_cache(&cache)?;
            let addr = format!("{host}:{port}");
            eprintln!("serving {} on http://{addr}/api/", cache.display());
            api::serve(&table, &addr)?;
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
            _ => ExitCode::SUCCESS,
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
