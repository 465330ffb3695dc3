use std::io::{BufRead, BufReader, Write};
use std::process::{Child, Command, Output, Stdio};

fn cdgame() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cdgame"))
}

fn run(args: &[&str]) -> Output {
    cdgame().args(args).current_dir(env!("CARGO_MANIFEST_DIR")).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn first_value(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

#[test]
fn solve_examples() {
    let d = run(&["solve", "--gadget", "h", "4", "--starter", "d"]);
    assert_eq!(d.status.code(), Some(0));
    assert!(stdout(&d).starts_with("value: 4\nexact: true\n"));
    assert_eq!(first_value(&run(&["solve", "--gadget", "h", "4", "--starter", "s"])), "value: 8");
    assert_eq!(first_value(&run(&["solve", "--graph", "tests/data/p4.g", "--starter", "s"])), "value: 3");
    let no_pruning = run(&["solve", "--graph", "tests/data/p4.g", "--starter", "s", "--no-pruning", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&no_pruning.stdout).unwrap();
    assert_eq!(json["value"], 3);
    let prefixed = run(&["solve", "--gadget", "a", "--prefix", "p1", "--starter", "d"]);
    assert_eq!(first_value(&prefixed), "value: 4");
}

#[test]
fn solve_exit_codes() {
    let partial = run(&["solve", "--cnf", "1", "--nodes", "1000"]);
    assert_eq!(partial.status.code(), Some(2));
    assert!(stdout(&partial).contains("exact: false"));
    let bad = run(&["solve", "--gadget", "q"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown gadget"));
    assert_eq!(run(&["solve", "--graph", "tests/data/missing.g"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--gadget", "h", "3", "--cnf", "1"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--gadget", "h", "3", "--prefix", "u0,u3"]).status.code(), Some(1));
}

#[test]
fn gamma_c_examples() {
    assert_eq!(first_value(&run(&["gamma-c", "--gadget", "b"])), "value: 3");
    assert_eq!(first_value(&run(&["gamma-c", "--gadget", "b", "--predominate", "a,b"])), "value: 3");
    assert_eq!(first_value(&run(&["gamma-c", "--gadget", "c", "3"])), "value: 4");
}

#[test]
fn build_outputs() {
    let h6 = run(&["build", "gadget", "h", "6"]);
    assert!(stdout(&h6).starts_with("n 18\n"));
    assert_eq!(stdout(&h6).lines().filter(|l| l.starts_with("e ")).count(), 27);
    let json = run(&["build", "gadget", "b", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["labels"].as_array().unwrap().len(), 10);
    let red = run(&["build", "reduction", "--formula", "tests/data/five_vars.cnf", "--format", "dot", "--targets"]);
    assert!(stdout(&red).starts_with("graph {"));
    assert!(String::from_utf8_lossy(&red.stderr).contains("vertices 120"));
    let prime = run(&["build", "reduction", "--cnf", "1 3/2 3 5/4 5", "--variant", "s"]);
    assert!(stdout(&prime).starts_with("n 99\n"));
}

#[test]
fn pos_cnf_reports_the_winner() {
    let o = run(&["pos-cnf", "--formula", "tests/data/five_vars.cnf"]);
    assert!(stdout(&o).contains("winner: player1"));
    assert!(stdout(&o).contains("pv: X3"));
    assert!(stdout(&run(&["pos-cnf", "--cnf", "1/2"])).contains("winner: player2"));
}

#[test]
fn verify_lemma_exit_codes() {
    let ok = run(&["verify", "lemma", "hn", "--max-n", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).lines().filter(|l| l.starts_with("PASS")).count(), 3);
    assert_eq!(run(&["verify", "lemma", "p1-wins"]).status.code(), Some(0));
    let open = run(&["verify", "lemma", "p1-wins", "--nodes", "10"]);
    assert_eq!(open.status.code(), Some(2));
    assert!(stdout(&open).starts_with("OPEN"));
    // Player 2 wins this formula, so the suite does not apply.
    assert_eq!(run(&["verify", "lemma", "p1-wins", "--cnf", "1/2"]).status.code(), Some(1));
    let s = run(&["verify", "lemma", "s-game"]);
    assert_eq!(s.status.code(), Some(0), "{}", stdout(&s));
    let bounds = run(&["verify", "lemma", "bounds", "--count", "40", "--seed", "5"]);
    assert_eq!(bounds.status.code(), Some(0));
}

#[test]
fn export_dot_replays_moves() {
    let o = run(&["export-dot", "--gadget", "h", "2", "--moves", "u1,u2"]);
    let text = stdout(&o);
    assert!(text.contains("\"u2\" [class=\"played\", fillcolor=\"#d62728\", xlabel=\"2\"]"));
    assert!(text.contains("\"u0\" [class=\"dominated\""));
    let illegal = run(&["export-dot", "--gadget", "h", "2", "--moves", "u1,u0"]);
    assert_eq!(illegal.status.code(), Some(1));
}

fn play(args: &[&str], input: &str) -> Output {
    let mut child = cdgame().args(["play"]).args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn play_against_a_private_server() {
    let o = play(&["--gadget", "h", "2", "--no-engine"], "u0\nu3\nhint\nu1\nu2\n");
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("rejected: illegal-move (disconnected)"));
    assert!(text.contains("hint: u1"));
    assert!(text.contains("Game over in 3 moves: u0 u1 u2"));

    // Staller moves first against the Dominator engine on H_3.
    let o = play(&["--gadget", "h", "3", "--starter", "s", "--human", "s"], "u0\nhint\nshow\nquit\n");
    let text = stdout(&o);
    assert!(text.contains("engine played"), "{text}");
    assert_eq!(o.status.code(), Some(0));
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

#[test]
fn serve_then_play_and_export_through_it() {
    let mut child = cdgame().args(["serve", "--port", "0"]).stdout(Stdio::piped()).stderr(Stdio::null()).spawn().unwrap();
    let mut first = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut first).unwrap();
    let _server = Server(child);
    let url = first.trim().strip_prefix("listening on ").unwrap().to_string();

    let o = play(&["--server", &url, "--gadget", "h", "2", "--no-engine"], "u1\nquit\n");
    let text = stdout(&o);
    let id = text.split_whitespace().nth(1).unwrap().to_string();
    let dot = run(&["export-dot", "--server", &url, "--game", &id]);
    assert!(stdout(&dot).contains("\"u1\" [class=\"played\""), "{}", stdout(&dot));
}

#[test]
fn serve_fails_on_a_busy_port() {
    let busy = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let o = run(&["serve", "--port", &port]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot listen"));
}
