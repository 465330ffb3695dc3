//! Terminal game against the service engine. Without `--server` a private
//! server is started on a loopback port for the duration of the game.

use anyhow::{bail, Context, Result};
use cdgame_client::Client;
use cdgame_proto::{GameView, GraphDoc, NewGame, Side};
use cdgame_server::ServerConfig;
use clap::Args;
use tokio::io::{AsyncBufReadExt, BufReader};
use tokio::net::TcpListener;

use crate::source::{gadget_spec, GraphSource};

#[derive(Args, Debug)]
pub struct PlayArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Who moves first
    #[arg(long, default_value = "d")]
    pub starter: cdgame_core::Player,
    /// The side you play; the engine takes the other one
    #[arg(long, default_value = "d")]
    pub human: cdgame_core::Player,
    /// Play both sides yourself
    #[arg(long)]
    pub no_engine: bool,
    /// Base URL of a running server
    #[arg(long, value_name = "URL")]
    pub server: Option<String>,
    /// Solver node budget per engine move
    #[arg(long)]
    pub engine_nodes: Option<u64>,
}

fn side(p: cdgame_core::Player) -> Side {
    match p {
        cdgame_core::Player::Dominator => Side::Dominator,
        cdgame_core::Player::Staller => Side::Staller,
    }
}

fn request(args: &PlayArgs) -> Result<NewGame> {
    let src = &args.source;
    let mut req = NewGame {
        starter: Some(side(args.starter)),
        engine: (!args.no_engine).then(|| side(args.human.other())),
        engine_nodes: args.engine_nodes,
        ..Default::default()
    };
    if let Some(words) = &src.gadget {
        let spec = gadget_spec(words)?;
        req.gadget = Some(words[0].clone());
        req.param = spec.param;
    } else if src.formula.given() {
        req.formula = Some(src.formula.text()?);
        req.variant = Some(match src.variant {
            cdgame_core::reduction::Variant::DGame => cdgame_proto::Variant::D,
            cdgame_core::reduction::Variant::SGame => cdgame_proto::Variant::S,
        });
        req.h_size = src.h_size;
    } else {
        let g = src.load()?;
        let json = g.to_json();
        req.graph = Some(GraphDoc { labels: json.labels, edges: json.edges });
    }
    Ok(req)
}

fn show(view: &GameView) {
    if !view.engine_moves.is_empty() {
        outln!("engine played {}", view.engine_moves.join(" "));
    }
    if view.over {
        outln!("Game over in {} moves: {}", view.moves, view.played.join(" "));
        return;
    }
    let to_move = match view.to_move {
        Some(Side::Dominator) => "Dominator",
        _ => "Staller",
    };
    outln!("move {} ({to_move}); legal: {}", view.moves + 1, view.legal.join(" "));
}

pub async fn run(args: PlayArgs) -> Result<()> {
    let req = request(&args)?;
    let client = match &args.server {
        Some(url) => Client::new(url.clone()),
        None => {
            let listener = TcpListener::bind("127.0.0.1:0").await?;
            let addr = listener.local_addr()?;
            tokio::spawn(cdgame_server::serve(listener, ServerConfig::default(), std::future::pending()));
            Client::new(format!("http://{addr}"))
        }
    };
    let mut view = client.new_game(&req).await.context("starting the game")?;
    outln!("game {} on graph {}; commands: <vertex>, hint, show, quit", view.id, view.graph_id);
    show(&view);
    let mut lines = BufReader::new(tokio::io::stdin()).lines();
    while !view.over {
        let Some(input) = lines.next_line().await? else {
            bail!("input ended before the game did");
        };
        let cmd = input.trim();
        match cmd {
            "" => continue,
            "quit" | "exit" => return Ok(()),
            "show" => show(&client.game(&view.id).await?),
            "hint" => {
                let h = client.hint(&view.id, None).await?;
                outln!("hint: {} (value {}{})", h.vertex, h.value, if h.exact { "" } else { ", not exact" });
            }
            vertex => match client.play(&view.id, vertex).await {
                Ok(next) => {
                    view = next;
                    show(&view);
                }
                Err(e) => match e.api() {
                    Some(body) => outln!("rejected: {body}"),
                    None => return Err(e.into()),
                },
            },
        }
    }
    Ok(())
}
