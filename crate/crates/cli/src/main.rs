/// `print!` that ignores write errors: a closed pipe (`| head`) must not
/// turn into a panic or change the exit code.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

mod lemma;
mod play;
mod source;

use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use cdgame_core::graph::{DotHighlights, GraphJson};
use cdgame_core::poscnf::{PosCnf, PosCnfPlayer};
use cdgame_core::reduction::{Reduction, Variant};
use cdgame_core::solver::{gamma_c, Budget, GameSolver, SolveResult, SolverConfig};
use cdgame_core::{GameState, Graph, Player};
use cdgame_server::ServerConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::lemma::{LemmaArgs, Status};
use crate::source::{gadget_spec, FormulaSource, GraphSource};

/// Connected domination game lab.
#[derive(Parser, Debug)]
#[command(name = "cdgame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Game value under optimal play (exit 2 if the budget ran out)
    Solve(SolveArgs),
    /// Connected domination number
    GammaC(GammaArgs),
    /// Emit a gadget or reduction graph
    #[command(subcommand)]
    Build(BuildCommand),
    /// Winner and principal variation of the POS-CNF game
    PosCnf(PosCnfArgs),
    /// Run a verification suite
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Play in the terminal against the engine
    Play(play::PlayArgs),
    /// Run the HTTP/JSON service
    Serve(ServeArgs),
    /// Graphviz rendering of a graph, optionally with a played sequence
    ExportDot(ExportArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetArgs {
    /// Stop after this many search nodes
    #[arg(long)]
    nodes: Option<u64>,
    /// Stop after this many seconds
    #[arg(long)]
    seconds: Option<f64>,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget::unlimited().with_nodes(self.nodes).with_time(self.seconds.map(Duration::from_secs_f64))
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value = "d")]
    starter: Player,
    /// Comma-separated moves already played
    #[arg(long, value_delimiter = ',')]
    prefix: Vec<String>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Plain memoized minimax without cutoffs
    #[arg(long)]
    no_pruning: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct GammaArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Comma-separated vertices exempt from domination
    #[arg(long, value_delimiter = ',')]
    predominate: Vec<String>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum BuildCommand {
    /// H_n, B, C(m) or A
    Gadget {
        /// h|b|c|a
        kind: String,
        /// n for h, m for c
        param: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// G_F (variant d) or G'_F (variant s) from a formula
    Reduction {
        #[command(flatten)]
        formula: FormulaSource,
        #[arg(long, default_value = "d")]
        variant: Variant,
        #[arg(long)]
        h_size: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Print vertex and edge counts and the target game lengths to stderr
        #[arg(long)]
        targets: bool,
    },
}

#[derive(Args, Debug)]
struct PosCnfArgs {
    #[command(flatten)]
    formula: FormulaSource,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Exit 0 if every check passed, 2 if some only ran out of budget, 1 on a failure
    Lemma(LemmaArgs),
}

#[derive(Args, Debug)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Solver node budget per engine move
    #[arg(long, default_value_t = ServerConfig::default().engine_nodes)]
    engine_nodes: u64,
    /// Solver node budget per hint
    #[arg(long, default_value_t = ServerConfig::default().hint_nodes)]
    hint_nodes: u64,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Comma-separated moves to highlight, replayed for legality
    #[arg(long, value_delimiter = ',')]
    moves: Vec<String>,
    #[arg(long, default_value = "d")]
    starter: Player,
    /// Render a live game from this server instead (needs --game)
    #[arg(long, value_name = "URL", requires = "game")]
    server: Option<String>,
    #[arg(long, value_name = "ID", requires = "server")]
    game: Option<String>,
}

fn print_solve(r: &SolveResult, json: bool) -> Result<ExitCode> {
    if json {
        outln!("{}", serde_json::to_string_pretty(r)?);
    } else {
        outln!("value: {}", r.value);
        outln!("exact: {}", r.exact);
        if !r.exact {
            outln!("bounds: [{}, {}]", r.lower, r.upper);
        }
        if !r.pv.is_empty() {
            outln!("pv: {}", r.pv.join(" "));
        }
        outln!("nodes: {}", r.nodes);
    }
    Ok(if r.exact { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn emit(g: &Graph, format: Format) -> Result<()> {
    match format {
        Format::Text => out!("{}", g.to_text()),
        Format::Json => outln!("{}", serde_json::to_string(&g.to_json())?),
        Format::Dot => out!("{}", g.to_dot(&DotHighlights::default())),
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let graph = args.source.load()?;
    let state = GameState::replay(graph.clone(), args.starter, &args.prefix)?;
    let config = SolverConfig { pruning: !args.no_pruning, ..Default::default() };
    let mut solver = GameSolver::new(graph)?.with_config(config);
    print_solve(&solver.solve(&state, args.budget.budget()), args.json)
}

fn gamma(args: GammaArgs) -> Result<ExitCode> {
    let g = args.source.load()?;
    let mut pre = g.empty_set();
    for v in g.ids(&args.predominate)? {
        pre.insert(v);
    }
    print_solve(&gamma_c(&g, &pre, args.budget.budget())?, args.json)
}

fn build(cmd: BuildCommand) -> Result<ExitCode> {
    match cmd {
        BuildCommand::Gadget { kind, param, format } => {
            let mut words = vec![kind];
            words.extend(param.map(|p| p.to_string()));
            emit(&gadget_spec(&words)?.build()?, format)?;
        }
        BuildCommand::Reduction { formula, variant, h_size, format, targets } => {
            let red = Reduction::build(&formula.load()?, variant, h_size)?;
            if targets {
                let t = red.targets();
                eprintln!(
                    "vertices {} edges {} h_size {} gamma_c {} p1_bound {} p2_bound {}",
                    red.graph.n(),
                    red.graph.edge_count(),
                    red.h_size,
                    t.gamma_c_expected.map_or("unknown".to_string(), |v| v.to_string()),
                    t.p1_bound,
                    t.p2_bound
                );
            }
            emit(&red.graph, format)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn pos_cnf(args: PosCnfArgs) -> Result<ExitCode> {
    let f = args.formula.load()?;
    let mut solver = PosCnf::new(&f)?;
    let outcome = solver.solve()?;
    let name = |p: PosCnfPlayer| if p == PosCnfPlayer::Player1 { "player1" } else { "player2" };
    outln!("formula: {f}");
    outln!("winner: {}", name(outcome.winner));
    let pv: Vec<String> = outcome.pv.iter().map(|i| format!("X{i}")).collect();
    outln!("pv: {}", pv.join(" "));
    Ok(ExitCode::SUCCESS)
}

fn verify(cmd: VerifyCommand) -> Result<ExitCode> {
    let VerifyCommand::Lemma(args) = cmd;
    let lines = lemma::run(&args)?;
    for l in &lines {
        let tag = match l.status {
            Status::Pass => "PASS",
            Status::Open => "OPEN",
            Status::Fail => "FAIL",
        };
        outln!("{tag} {}", l.text);
    }
    let worst = lines.iter().map(|l| l.status).max_by_key(|s| *s as u8).unwrap_or(Status::Pass);
    Ok(match worst {
        Status::Pass => ExitCode::SUCCESS,
        Status::Open => ExitCode::from(2),
        Status::Fail => ExitCode::FAILURE,
    })
}

async fn serve(args: ServeArgs) -> Result<ExitCode> {
    let addr = format!("{}:{}", args.host, args.port);
    let listener = tokio::net::TcpListener::bind(&addr).await.with_context(|| format!("cannot listen on {addr}"))?;
    outln!("listening on http://{}", listener.local_addr()?);
    let config = ServerConfig { engine_nodes: args.engine_nodes, hint_nodes: args.hint_nodes };
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    cdgame_server::serve(listener, config, shutdown).await?;
    Ok(ExitCode::SUCCESS)
}

async fn export_dot(args: ExportArgs) -> Result<ExitCode> {
    let (graph, played) = match (&args.server, &args.game) {
        (Some(url), Some(id)) => {
            let s = &args.source;
            if s.graph.is_some() || s.gadget.is_some() || s.formula.given() {
                bail!("--server renders the game's own graph; drop the graph source");
            }
            let client = cdgame_client::Client::new(url.clone());
            let view = client.game(id).await?;
            let doc = client.graph(&view.graph_id).await?;
            let g = Graph::from_json(&GraphJson { labels: doc.labels, edges: doc.edges })?;
            (g, view.played)
        }
        _ => {
            let g = args.source.load()?;
            (Graph::clone(&g), args.moves.clone())
        }
    };
    let graph = std::sync::Arc::new(graph);
    let state = GameState::replay(graph.clone(), args.starter, &played)?;
    let highlights = DotHighlights { played: state.played().to_vec(), dominated: Some(state.dominated().clone()) };
    out!("{}", graph.to_dot(&highlights));
    Ok(ExitCode::SUCCESS)
}

async fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(a) => solve(a),
        Command::GammaC(a) => gamma(a),
        Command::Build(c) => build(c),
        Command::PosCnf(a) => pos_cnf(a),
        Command::Verify(c) => verify(c),
        Command::Play(a) => play::run(a).await.map(|_| ExitCode::SUCCESS),
        Command::Serve(a) => serve(a).await,
        Command::ExportDot(a) => export_dot(a).await,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if matches!(cli.command, Command::Serve(_)) {
        tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    }
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    match runtime.block_on(dispatch(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
