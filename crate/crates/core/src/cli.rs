//! Command-line front end. `run` is the whole program minus process exit,
//! so tests can drive it with in-memory streams.

use std::ffi::OsString;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export;
use crate::instances::{self, InstanceSpec, RookPoset};
use crate::mutation::Mutation;
use crate::poset::{Chain, Length2Shape, DEFAULT_CHAIN_CUTOFF};
use crate::rook::{EdgeLabel, RookElement};
use crate::verify::{self, CampaignConfig, Scope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Bound used with `--unsafe-large-n`. `|R_8|` is about 1.4 million.
pub const UNSAFE_BOUND: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "rookmonoid", version, about = "Rook monoid posets and their EL-labeling")]
struct Cli {
    /// Allow n above 6 (up to 8). Memory grows quickly.
    #[arg(long, global = true)]
    unsafe_large_n: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the elements in canonical order with their lengths.
    Enumerate {
        #[command(flatten)]
        common: Common,
    },
    /// Export the labeled Hasse diagram.
    Hasse {
        #[command(flatten)]
        common: Common,
    },
    /// Inspect one interval [FROM, TO].
    Interval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ends: Ends,
        /// Print the lexicographically first maximal chain.
        #[arg(long)]
        lex_first: bool,
        /// Count maximal and increasing chains.
        #[arg(long)]
        count: bool,
        /// Print the Möbius value.
        #[arg(long)]
        mobius: bool,
        /// For length-2 intervals, report chain or diamond.
        #[arg(long)]
        classify: bool,
    },
    /// List the maximal chains of an interval.
    Chain {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ends: Ends,
        #[arg(long, value_enum, default_value_t = ChainFilter::All)]
        filter: ChainFilter,
        /// Refuse intervals with more maximal chains than this.
        #[arg(long, default_value_t = DEFAULT_CHAIN_CUTOFF)]
        cutoff: u64,
    },
    /// Möbius values.
    Mobius {
        #[command(flatten)]
        common: Common,
        /// Every comparable pair (the default when no endpoints are given).
        #[arg(long)]
        all_pairs: bool,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        /// Reduced Euler characteristic of the proper part.
        #[arg(long)]
        euler: bool,
    },
    /// Run a verification campaign. Exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated checks or groups: all, el, length2, mobius, ...
        #[arg(long, default_value = "all")]
        checks: String,
        /// all | length2 | maxlen:K | sample:COUNT[:SEED]
        #[arg(long)]
        scope: Option<String>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Refuse scopes with more intervals than this.
        #[arg(long)]
        max_intervals: Option<u64>,
        /// Corrupt the instance first: swap-labels:SEED, delete-cover:SEED, perturb-rank:SEED.
        #[arg(long)]
        mutate: Option<String>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// rook:n, sym:n or rook:n:k
    instance: String,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Ends {
    /// One-line notation, e.g. 0,1,0
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ChainFilter {
    All,
    Increasing,
    StrictlyIncreasing,
    StrictlyDecreasing,
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// exit status. Panics are caught and reported as status 3.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| execute(&cli, stdout, stderr)));
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let bound = if cli.unsafe_large_n {
        let _ = writeln!(
            stderr,
            "warning: --unsafe-large-n allows n up to {UNSAFE_BOUND}; R_7 and R_8 need gigabytes"
        );
        UNSAFE_BOUND
    } else {
        instances::DEFAULT_BOUND
    };
    match &cli.command {
        Command::Enumerate { common } => {
            let spec = parse_instance(&common.instance)?;
            let poset = spec.build(bound)?;
            let text = match common.format.unwrap_or(Format::Text) {
                Format::Text => {
                    let mut s = String::new();
                    for (i, x) in poset.elements().iter().enumerate() {
                        s.push_str(&format!("{x}\t{}\n", poset.rank(i)));
                    }
                    s
                }
                Format::Json => to_json_line(&element_rows(&poset))?,
                Format::Csv => export::elements_csv(&poset)?,
                Format::Dot => return Err(unsupported("enumerate", Format::Dot)),
            };
            emit(&text, common.output.as_deref(), stdout)?;
        }
        Command::Hasse { common } => {
            let spec = parse_instance(&common.instance)?;
            let poset = spec.build(bound)?;
            let name = spec.to_string();
            let text = match common.format.unwrap_or(Format::Dot) {
                Format::Dot => export::to_dot(&poset, &name),
                Format::Json => export::to_json(&poset, Some(&name))? + "\n",
                Format::Csv => export::edges_csv(&poset)?,
                Format::Text => {
                    let mut s = String::new();
                    for x in 0..poset.len() {
                        for e in poset.up_covers(x) {
                            let label = e.label.map(|l| l.to_string()).unwrap_or_default();
                            s.push_str(&format!("{} -> {} {label}\n", poset.element(x), poset.element(e.target)));
                        }
                    }
                    s
                }
            };
            emit(&text, common.output.as_deref(), stdout)?;
        }
        Command::Interval {
            common,
            ends,
            lex_first,
            count,
            mobius,
            classify,
        } => {
            let spec = parse_instance(&common.instance)?;
            let poset = spec.build(bound)?;
            let (x, y) = endpoints(&poset, &ends.from, &ends.to)?;
            let iv = poset.interval(x, y)?;
            let mut summary = IntervalSummary {
                bottom: poset.element(x).clone(),
                top: poset.element(y).clone(),
                length: poset.interval_length(&iv),
                size: iv.len(),
                lex_first: None,
                maximal_chains: None,
                increasing_chains: None,
                mobius: None,
                shape: None,
            };
            if *lex_first {
                summary.lex_first = Some(chain_record(&poset, &poset.lex_first_chain(&iv)?));
            }
            if *count {
                summary.maximal_chains = Some(poset.count_maximal_chains(&iv).to_string());
                summary.increasing_chains = Some(poset.count_increasing_chains(&iv)?.to_string());
            }
            if *mobius {
                summary.mobius = Some(poset.mobius(x, y)?);
            }
            if *classify {
                summary.shape = Some(match poset.classify_length2(&iv)? {
                    Length2Shape::Chain => "chain",
                    Length2Shape::Diamond => "diamond",
                });
            }
            let text = match common.format.unwrap_or(Format::Text) {
                Format::Text => summary.to_text(),
                Format::Json => to_json_line(&summary)?,
                other => return Err(unsupported("interval", other)),
            };
            emit(&text, common.output.as_deref(), stdout)?;
        }
        Command::Chain {
            common,
            ends,
            filter,
            cutoff,
        } => {
            let spec = parse_instance(&common.instance)?;
            let poset = spec.build(bound)?;
            let (x, y) = endpoints(&poset, &ends.from, &ends.to)?;
            let iv = poset.interval(x, y)?;
            let chains: Vec<ChainRecord> = poset
                .all_maximal_chains(&iv, *cutoff)?
                .iter()
                .filter(|c| match filter {
                    ChainFilter::All => true,
                    ChainFilter::Increasing => c.is_weakly_increasing(),
                    ChainFilter::StrictlyIncreasing => c.is_strictly_increasing(),
                    ChainFilter::StrictlyDecreasing => c.is_strictly_decreasing(),
                })
                .map(|c| chain_record(&poset, c))
                .collect();
            let text = match common.format.unwrap_or(Format::Text) {
                Format::Text => chains.iter().map(|c| c.labels_line() + "\n").collect(),
                Format::Json => to_json_line(&chains)?,
                other => return Err(unsupported("chain", other)),
            };
            emit(&text, common.output.as_deref(), stdout)?;
        }
        Command::Mobius {
            common,
            all_pairs,
            from,
            to,
            euler,
        } => {
            let spec = parse_instance(&common.instance)?;
            let poset = spec.build(bound)?;
            let mut text = String::new();
            match (from, to) {
                (Some(f), Some(t)) => {
                    if *all_pairs {
                        return Err(Error::Parse("--all-pairs conflicts with --from/--to".into()));
                    }
                    let (x, y) = endpoints(&poset, f, t)?;
                    let mu = poset.mobius(x, y)?;
                    text = match common.format.unwrap_or(Format::Text) {
                        Format::Text => format!("{mu}\n"),
                        Format::Json => to_json_line(&serde_json::json!({
                            "bottom": poset.element(x),
                            "top": poset.element(y),
                            "mu": mu,
                        }))?,
                        other => return Err(unsupported("mobius", other)),
                    };
                }
                (None, None) if !*euler || *all_pairs => {
                    let table = poset.mobius_table();
                    text = match common.format.unwrap_or(Format::Csv) {
                        Format::Csv => export::mobius_csv(&poset, &table)?,
                        Format::Json => {
                            let rows: Vec<_> = table
                                .iter()
                                .map(|(x, y, mu)| {
                                    serde_json::json!({
                                        "bottom": poset.element(x),
                                        "top": poset.element(y),
                                        "mu": mu,
                                    })
                                })
                                .collect();
                            to_json_line(&rows)?
                        }
                        other => return Err(unsupported("mobius --all-pairs", other)),
                    };
                }
                (None, None) => {}
                _ => return Err(Error::Parse("--from and --to go together".into())),
            }
            if *euler {
                text.push_str(&format!(
                    "reduced euler characteristic: {}\n",
                    poset.euler_characteristic_reduced()?
                ));
            }
            emit(&text, common.output.as_deref(), stdout)?;
        }
        Command::Verify {
            common,
            checks,
            scope,
            threads,
            max_intervals,
            mutate,
        } => {
            let spec = parse_instance(&common.instance)?;
            let mut config = CampaignConfig::new(spec)
                .with_checks(verify::parse_checks(checks)?)
                .with_threads(*threads);
            config.bound = bound;
            if let Some(scope) = scope {
                config = config.with_scope(scope.parse::<Scope>()?);
            }
            if let Some(budget) = max_intervals {
                config.interval_budget = *budget;
            }
            if let Some(m) = mutate {
                config = config.with_mutation(m.parse::<Mutation>()?);
            }
            let report = verify::run_campaign(&config)?;
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => report.to_json()? + "\n",
                Format::Text => report.to_text(),
                other => return Err(unsupported("verify", other)),
            };
            emit(&text, common.output.as_deref(), stdout)?;
            if !report.passed {
                let _ = writeln!(stderr, "verification failed");
                return Ok(EXIT_VERIFICATION_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn parse_instance(s: &str) -> Result<InstanceSpec> {
    s.parse()
}

fn unsupported(command: &str, format: Format) -> Error {
    let name = format.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    Error::Parse(format!("{command} does not support --format {name}"))
}

fn endpoints(poset: &RookPoset, from: &str, to: &str) -> Result<(usize, usize)> {
    let find = |s: &str| -> Result<usize> {
        let x: RookElement = s.parse()?;
        poset
            .index_of(&x)
            .ok_or_else(|| Error::Parse(format!("{x} is not an element of this instance")))
    };
    Ok((find(from)?, find(to)?))
}

fn emit(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn to_json_line<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Serialize)]
struct ElementRow<'a> {
    element: &'a RookElement,
    rank: u32,
    length: usize,
}

fn element_rows(poset: &RookPoset) -> Vec<ElementRow<'_>> {
    poset
        .elements()
        .iter()
        .enumerate()
        .map(|(i, x)| ElementRow {
            element: x,
            rank: poset.rank(i),
            length: x.length(),
        })
        .collect()
}

#[derive(Serialize)]
struct ChainRecord {
    vertices: Vec<RookElement>,
    labels: Vec<EdgeLabel>,
}

impl ChainRecord {
    fn labels_line(&self) -> String {
        self.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn chain_record(poset: &RookPoset, chain: &Chain) -> ChainRecord {
    ChainRecord {
        vertices: chain.vertices.iter().map(|&v| poset.element(v).clone()).collect(),
        labels: chain.labels.clone(),
    }
}

#[derive(Serialize)]
struct IntervalSummary {
    bottom: RookElement,
    top: RookElement,
    length: u32,
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    lex_first: Option<ChainRecord>,
    /// Strings, since counts can exceed what JSON numbers hold exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    maximal_chains: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    increasing_chains: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mobius: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shape: Option<&'static str>,
}

impl IntervalSummary {
    fn to_text(&self) -> String {
        let mut s = format!(
            "interval [{}, {}]: length {}, {} elements\n",
            self.bottom, self.top, self.length, self.size
        );
        if let Some(c) = &self.lex_first {
            s.push_str("lex-first chain:\n");
            s.push_str(&format!("  {}\n", c.vertices[0]));
            for (v, l) in c.vertices[1..].iter().zip(&c.labels) {
                s.push_str(&format!("  --{l}--> {v}\n"));
            }
            s.push_str(&format!("labels: {}\n", c.labels_line()));
        }
        if let Some(m) = &self.maximal_chains {
            s.push_str(&format!("maximal chains: {m}\n"));
        }
        if let Some(m) = &self.increasing_chains {
            s.push_str(&format!("increasing chains: {m}\n"));
        }
        if let Some(mu) = self.mobius {
            s.push_str(&format!("mobius: {mu}\n"));
        }
        if let Some(shape) = self.shape {
            s.push_str(&format!("shape: {shape}\n"));
        }
        s
    }
}
