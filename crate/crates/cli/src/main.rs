//! `graphchain` command-line front end.
//!
//! Exit status: 0 on success, 1 on usage or validation errors, 2 on I/O errors.

mod format;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphchain::analysis::{ctmc_equilibrium, dtmc_equilibrium, transient, Horizon};
use graphchain::chain::{ctmc_from_graph, dtmc_from_graph, validate_stochastic};
use graphchain::graph::{degree_pmf, generate, parse_edge_list, to_edge_list};
use graphchain::info::{channel_measures, entropy_trace, kl_trace, Axis, LogBase};
use graphchain::simulate::{simulate_walk, WalkLength};
use graphchain::structured::classify;
use graphchain::{Chain, DenseMatrix, Graph, GraphKind, Orientation, ProbabilityVector};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "graphchain", version, about = "Markov chains associated with graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a ring, complete or star graph as an edge list
    Generate {
        #[arg(long)]
        kind: GraphKind,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Emit the transition matrix P or generator Q as JSON
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        out: MatrixOutputArgs,
    },
    /// Equilibrium distribution
    Steady {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Transient distributions over a horizon
    Transient(TraceCmd),
    /// Shannon entropy of the transient distribution over a horizon
    EntropyTrace(TraceCmd),
    /// Divergence of the initial distribution from the transient one
    KlTrace(TraceCmd),
    /// Min/max pairwise divergence between rows or columns of a channel matrix
    Measures {
        /// CSV file, one row per line
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "rows")]
        axis: Axis,
        #[arg(long, default_value = "2")]
        log_base: LogBaseArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Degree-entropy classification as JSON
    Classify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo estimate of the distribution at the horizon
    Simulate {
        #[command(flatten)]
        common: TraceCmd,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Edge-list file
    #[arg(long, conflicts_with = "generate")]
    input: Option<PathBuf>,
    /// Generator spec `<ring|complete|star>:<m>`
    #[arg(long)]
    generate: Option<String>,
    /// Read edges as directed
    #[arg(long)]
    directed: bool,
    /// undirected | in | out (default: undirected, or `in` for directed graphs)
    #[arg(long)]
    orientation: Option<Orientation>,
}

#[derive(Debug, Args)]
struct ChainArgs {
    #[arg(long, value_enum, default_value = "dtmc")]
    chain: ChainKind,
}

#[derive(Debug, Args)]
struct HorizonArgs {
    /// DTMC horizon
    #[arg(long)]
    steps: Option<usize>,
    /// CTMC times `t1,t2,...`
    #[arg(long, conflicts_with = "linspace")]
    times: Option<String>,
    /// CTMC time grid `start:stop:count`
    #[arg(long)]
    linspace: Option<String>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Write to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatrixOutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Write to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

impl From<MatrixOutputArgs> for OutputArgs {
    fn from(a: MatrixOutputArgs) -> Self {
        OutputArgs { format: a.format, output: a.output }
    }
}

#[derive(Debug, Args)]
struct TraceCmd {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    chain: ChainArgs,
    /// uniform | degree | point:<k> | file:<path>
    #[arg(long, default_value = "degree")]
    init: String,
    #[command(flatten)]
    horizon: HorizonArgs,
    #[arg(long, default_value = "2")]
    log_base: LogBaseArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChainKind {
    Dtmc,
    Ctmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LogBaseArg {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

impl From<LogBaseArg> for LogBase {
    fn from(b: LogBaseArg) -> Self {
        match b {
            LogBaseArg::Two => LogBase::Bits,
            LogBaseArg::E => LogBase::Nats,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Io(String),
}

impl From<graphchain::Error> for CliError {
    fn from(e: graphchain::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_graph(args: &GraphArgs) -> CliResult<Graph> {
    match (&args.input, &args.generate) {
        (Some(path), None) => {
            let text = read_file(path)?;
            parse_edge_list(&text, args.directed)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
        }
        (None, Some(spec)) => {
            if args.directed {
                return Err(CliError::Validation("generated graphs are undirected".into()));
            }
            let (kind, m) = spec
                .split_once(':')
                .ok_or_else(|| CliError::Validation(format!("bad generator spec `{spec}`")))?;
            let kind: GraphKind = kind.parse().map_err(CliError::Validation)?;
            let m: usize = m
                .parse()
                .map_err(|_| CliError::Validation(format!("bad vertex count `{m}`")))?;
            Ok(generate(kind, m)?)
        }
        _ => Err(CliError::Validation("one of --input or --generate is required".into())),
    }
}

fn orientation(args: &GraphArgs, g: &Graph) -> Orientation {
    args.orientation.unwrap_or(if g.is_directed() {
        Orientation::In
    } else {
        Orientation::Undirected
    })
}

enum BuiltChain {
    Discrete(graphchain::StochasticMatrix),
    Continuous(graphchain::GeneratorMatrix),
}

impl BuiltChain {
    fn as_chain(&self) -> Chain<'_> {
        match self {
            BuiltChain::Discrete(p) => Chain::Discrete(p),
            BuiltChain::Continuous(q) => Chain::Continuous(q),
        }
    }

    fn matrix(&self) -> &DenseMatrix {
        match self {
            BuiltChain::Discrete(p) => p.matrix(),
            BuiltChain::Continuous(q) => q.matrix(),
        }
    }
}

fn build_chain(g: &Graph, o: Orientation, kind: ChainKind) -> CliResult<BuiltChain> {
    Ok(match kind {
        ChainKind::Dtmc => BuiltChain::Discrete(dtmc_from_graph(g, o)?),
        ChainKind::Ctmc => BuiltChain::Continuous(ctmc_from_graph(g, o)?),
    })
}

fn initial_pmf(spec: &str, g: &Graph, o: Orientation) -> CliResult<ProbabilityVector> {
    let m = g.num_vertices();
    let pmf = match spec {
        "uniform" => ProbabilityVector::uniform(m)?,
        "degree" => degree_pmf(g, o)?,
        _ => {
            if let Some(k) = spec.strip_prefix("point:") {
                let k: usize = k
                    .parse()
                    .map_err(|_| CliError::Validation(format!("bad point index `{k}`")))?;
                ProbabilityVector::point(m, k)?
            } else if let Some(path) = spec.strip_prefix("file:") {
                let text = read_file(Path::new(path))?;
                let values = parse_numbers(&text)?;
                if values.len() != m {
                    return Err(CliError::Validation(format!(
                        "initial distribution has {} entries, graph has {m} vertices",
                        values.len()
                    )));
                }
                ProbabilityVector::new(values)?
            } else {
                return Err(CliError::Validation(format!("unknown --init `{spec}`")));
            }
        }
    };
    Ok(pmf)
}

fn parse_numbers(text: &str) -> CliResult<Vec<f64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Validation(format!("bad number `{s}`")))
        })
        .collect()
}

fn horizon(args: &HorizonArgs, kind: ChainKind) -> CliResult<Horizon> {
    match kind {
        ChainKind::Dtmc => {
            if args.times.is_some() || args.linspace.is_some() {
                return Err(CliError::Validation("a DTMC horizon is given with --steps".into()));
            }
            let n = args
                .steps
                .ok_or_else(|| CliError::Validation("--steps is required for a DTMC".into()))?;
            Ok(Horizon::Steps(n))
        }
        ChainKind::Ctmc => {
            if args.steps.is_some() {
                return Err(CliError::Validation(
                    "a CTMC horizon is given with --times or --linspace".into(),
                ));
            }
            let times = match (&args.times, &args.linspace) {
                (Some(list), None) => parse_numbers(list)?,
                (None, Some(spec)) => linspace(spec)?,
                _ => {
                    return Err(CliError::Validation(
                        "--times or --linspace is required for a CTMC".into(),
                    ))
                }
            };
            if times.is_empty() {
                return Err(CliError::Validation("empty time grid".into()));
            }
            Ok(Horizon::Times(times))
        }
    }
}

fn linspace(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Validation(format!("bad --linspace `{spec}`, expected start:stop:count"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    Ok(match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    })
}

fn parse_matrix_csv(text: &str) -> CliResult<DenseMatrix> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Validation(format!("bad matrix entry `{}`", s.trim())))
                })
                .collect::<CliResult<Vec<f64>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(DenseMatrix::from_rows(&rows)?)
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn emit(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate { kind, m, out } => {
            let g = generate(kind, m)?;
            emit(&out, &format!("# {} graph on {m} vertices\n{}", kind.name(), to_edge_list(&g)))
        }
        Command::Build { graph, chain, out } => {
            let out = OutputArgs::from(out);
            let g = load_graph(&graph)?;
            let built = build_chain(&g, orientation(&graph, &g), chain.chain)?;
            let rows = built.matrix().to_rows();
            let text = match out.format {
                OutputFormat::Json => render_json(&format::json_matrix(&rows)),
                OutputFormat::Csv => rows
                    .iter()
                    .map(|r| r.iter().map(|&v| format::sig12(v)).collect::<Vec<_>>().join(",") + "\n")
                    .collect(),
            };
            emit(&out, &text)
        }
        Command::Steady { graph, chain, out } => {
            let g = load_graph(&graph)?;
            let pi = match build_chain(&g, orientation(&graph, &g), chain.chain)? {
                BuiltChain::Discrete(p) => dtmc_equilibrium(&p)?,
                BuiltChain::Continuous(q) => ctmc_equilibrium(&q)?,
            };
            let text = match out.format {
                OutputFormat::Csv => format::vector_csv(&pi),
                OutputFormat::Json => render_json(&format::vector_json(&pi)),
            };
            emit(&out, &text)
        }
        Command::Transient(cmd) => {
            let (built, pi0, h) = prepare(&cmd)?;
            let rows = transient(built.as_chain(), &pi0, &h)?;
            let text = match cmd.out.format {
                OutputFormat::Csv => format::distributions_csv(&rows),
                OutputFormat::Json => render_json(&format::distributions_json(&rows)),
            };
            emit(&cmd.out, &text)
        }
        Command::EntropyTrace(cmd) => trace_command(&cmd, entropy_trace),
        Command::KlTrace(cmd) => trace_command(&cmd, kl_trace),
        Command::Measures {
            input,
            axis,
            log_base,
            out,
        } => {
            let m = parse_matrix_csv(&read_file(&input)?)?;
            let b = validate_stochastic(m)?;
            let measures = channel_measures(&b, axis)?;
            let base = LogBase::from(log_base);
            let (m1, m2) = (base.from_bits(measures.m1), base.from_bits(measures.m2));
            let text = match out.format {
                OutputFormat::Csv => format!(
                    "measure,value\nm1,{}\nm2,{}\n",
                    format::sig12(m1),
                    format::sig12(m2)
                ),
                OutputFormat::Json => render_json(&json!({
                    "m1": format::json_num(m1),
                    "m2": format::json_num(m2),
                    "axis": axis.name(),
                })),
            };
            emit(&out, &text)
        }
        Command::Classify { graph, out } => {
            let g = load_graph(&graph)?;
            let c = classify(&g)?;
            emit(
                &out,
                &render_json(&json!({
                    "graph_entropy_bits": format::json_num(c.graph_entropy_bits),
                    "is_max_entropic": c.is_max_entropic,
                    "regularity_degree": c.regularity_degree,
                    "is_min_entropic_star": c.is_min_entropic_star,
                })),
            )
        }
        Command::Simulate {
            common,
            paths,
            seed,
        } => {
            let (built, pi0, h) = prepare(&common)?;
            let length = match h {
                Horizon::Steps(n) => WalkLength::Steps(n),
                Horizon::Times(ts) if ts.len() == 1 => WalkLength::Time(ts[0]),
                Horizon::Times(_) => {
                    return Err(CliError::Validation(
                        "simulate takes a single time in --times".into(),
                    ))
                }
            };
            let est = simulate_walk(built.as_chain(), &pi0, length, paths, seed)?;
            let text = match common.out.format {
                OutputFormat::Csv => format::vector_csv(&est),
                OutputFormat::Json => render_json(&format::vector_json(&est)),
            };
            emit(&common.out, &text)
        }
    }
}

fn prepare(cmd: &TraceCmd) -> CliResult<(BuiltChain, ProbabilityVector, Horizon)> {
    let g = load_graph(&cmd.graph)?;
    let o = orientation(&cmd.graph, &g);
    let built = build_chain(&g, o, cmd.chain.chain)?;
    let pi0 = initial_pmf(&cmd.init, &g, o)?;
    let h = horizon(&cmd.horizon, cmd.chain.chain)?;
    Ok((built, pi0, h))
}

fn trace_command(
    cmd: &TraceCmd,
    f: fn(Chain<'_>, &ProbabilityVector, &Horizon) -> graphchain::Result<graphchain::info::Trace>,
) -> CliResult<()> {
    let (built, pi0, h) = prepare(cmd)?;
    let base = LogBase::from(cmd.log_base);
    let trace = f(built.as_chain(), &pi0, &h)?.map_values(|v| base.from_bits(v));
    let text = match cmd.out.format {
        OutputFormat::Csv => format::trace_csv(&trace),
        OutputFormat::Json => render_json(&format::trace_json(&trace)),
    };
    emit(&cmd.out, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
