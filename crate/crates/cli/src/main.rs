use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tokio::io::{AsyncBufReadExt, BufReader};

use modworld::api::{DatasetRequest, EvalRequest, NewSession, StatsRequest};
use modworld::dataset::{format_stats, STATS_EPISODES};
use modworld::harness::{format_report, AgentKind};
use modworld::{GameId, Split};
use modworld_client::{Client, ClientError};

/// Text games with symbolic-module actions, served over HTTP.
#[derive(Parser)]
#[command(name = "modworld", version)]
struct Cli {
    /// Talk to a running service instead of starting one in-process.
    #[arg(long, global = true, env = "MODWORLD_SERVER")]
    server: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service in the foreground.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
    },
    /// List the games and their modules.
    Games,
    /// Export behavior-cloning data for the oracle trajectories.
    Generate {
        /// All games when omitted.
        #[arg(long)]
        game: Option<GameId>,
        /// All splits when omitted.
        #[arg(long)]
        split: Option<Split>,
        #[command(flatten)]
        modules: Modules,
        #[arg(long)]
        out: PathBuf,
        /// Also write the knowledge base as kb.tsv.
        #[arg(long)]
        kb: bool,
    },
    /// Score a built-in agent on a split.
    Eval {
        #[arg(long, default_value = "oracle")]
        agent: AgentKind,
        #[arg(long)]
        game: Option<GameId>,
        #[arg(long, default_value = "test")]
        split: Split,
        #[command(flatten)]
        modules: Modules,
        #[arg(long)]
        episodes: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the summaries as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play one episode, reading actions from stdin.
    Play {
        #[arg(long)]
        game: GameId,
        #[arg(long)]
        split: Option<Split>,
        #[arg(long)]
        index: Option<usize>,
        /// Generate a fresh variation from this seed instead of a split.
        #[arg(long, conflicts_with_all = ["split", "index"])]
        seed: Option<u64>,
        #[command(flatten)]
        modules: Modules,
        /// Print the valid actions before every prompt.
        #[arg(long)]
        show_actions: bool,
    },
    /// Valid-action counts seen by a random agent, with and without modules.
    Stats {
        #[arg(long)]
        game: Option<GameId>,
        #[arg(long, default_value_t = STATS_EPISODES)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the rows as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct Modules {
    /// Leave the symbolic module out of the action space.
    #[arg(long)]
    no_modules: bool,
}

impl Modules {
    fn on(self) -> bool {
        !self.no_modules
    }
}

fn games(game: Option<GameId>) -> Vec<GameId> {
    game.map_or_else(|| GameId::ALL.to_vec(), |g| vec![g])
}

async fn connect(server: Option<String>) -> std::io::Result<Client> {
    match server {
        Some(url) => Ok(Client::new(url)),
        None => {
            let (addr, _) = modworld_server::spawn("127.0.0.1:0").await?;
            Ok(Client::new(format!("http://{addr}")))
        }
    }
}

#[derive(Debug)]
enum Failure {
    Client(ClientError),
    Io(std::io::Error),
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        Failure::Client(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<modworld::Error> for Failure {
    fn from(e: modworld::Error) -> Self {
        Failure::Io(std::io::Error::other(e))
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Client(e) => e.fmt(f),
            Failure::Io(e) => e.fmt(f),
        }
    }
}

async fn run(cli: Cli) -> Result<(), Failure> {
    if let Command::Serve { addr } = &cli.command {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        return Ok(modworld_server::serve(listener).await?);
    }
    let client = connect(cli.server).await?;
    match cli.command {
        Command::Serve { .. } => unreachable!("handled above"),
        Command::Games => {
            for g in client.games().await? {
                println!("{:<12} {:<12} {}", g.id, g.title, g.module);
            }
        }
        Command::Generate {
            game,
            split,
            modules,
            out,
            kb,
        } => {
            let splits = split.map_or_else(|| Split::ALL.to_vec(), |s| vec![s]);
            for g in games(game) {
                for &s in &splits {
                    let request = DatasetRequest {
                        game: g,
                        split: s,
                        modules: modules.on(),
                    };
                    let bundle = client.dataset(&request).await?;
                    for path in bundle.write_to(&out)? {
                        println!("{}", path.display());
                    }
                }
            }
            if kb {
                let path = out.join("kb.tsv");
                std::fs::write(&path, client.kb().await?)?;
                println!("{}", path.display());
            }
        }
        Command::Eval {
            agent,
            game,
            split,
            modules,
            episodes,
            seed,
            out,
        } => {
            let mut summaries = Vec::new();
            for g in games(game) {
                let request = EvalRequest {
                    agent,
                    game: g,
                    split,
                    modules: modules.on(),
                    episodes,
                    seed,
                };
                summaries.push(client.eval(&request).await?);
            }
            print!("{}", format_report(&summaries));
            write_json(out, &summaries)?;
        }
        Command::Play {
            game,
            split,
            index,
            seed,
            modules,
            show_actions,
        } => {
            let request = NewSession {
                game,
                split,
                index,
                seed,
                modules: modules.on(),
            };
            play(&client, &request, show_actions).await?;
        }
        Command::Stats {
            game,
            episodes,
            seed,
            out,
        } => {
            let mut rows = Vec::new();
            for g in games(game) {
                for modules in [false, true] {
                    let request = StatsRequest {
                        game: g,
                        modules,
                        episodes: Some(episodes),
                        seed,
                    };
                    rows.push(client.stats(&request).await?);
                }
            }
            print!("{}", format_stats(&rows));
            write_json(out, &rows)?;
        }
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(out: Option<PathBuf>, value: &T) -> Result<(), Failure> {
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(value).map_err(modworld::Error::from)?;
        std::fs::write(path, text + "\n")?;
    }
    Ok(())
}

async fn play(client: &Client, request: &NewSession, show_actions: bool) -> Result<(), Failure> {
    let session = client.new_session(request).await?;
    println!("{}\n", session.task);
    println!("{}", session.observation.text);
    let mut valid = session.valid_actions;
    let mut lines = BufReader::new(tokio::io::stdin()).lines();
    loop {
        if show_actions {
            println!("Valid actions: {}", valid.join(", "));
        }
        print!("> ");
        std::io::stdout().flush()?;
        let Some(line) = lines.next_line().await? else {
            break;
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "quit" || line == "exit" {
            break;
        }
        let reply = client.step(&session.id, line, false).await?;
        if reply.action != line {
            println!("({})", reply.action);
        }
        println!("{}", reply.observation.text);
        println!("Score: {:.2}  Steps: {}", reply.score, reply.steps);
        if reply.done {
            break;
        }
        valid = reply.valid_actions;
    }
    let end = client.session(&session.id).await?;
    println!("Final score: {:.2} after {} steps", end.score, end.steps);
    client.delete_session(&session.id).await?;
    Ok(())
}

#[tokio::main]
async fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
