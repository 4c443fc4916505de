//! `qbc zk`: the zero-knowledge coloring session, with ideal or simulated
//! quantum commitments.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use qbc::seeds::rng_for;
use qbc::zk::{
    greedy_coloring, is_proper, proper_edge_fraction, zk_session, Color, Graph, IdealLocker,
    ProverBehavior, QuantumCommitment, RoundVerdict,
};

use crate::config::FileConfig;
use crate::output::Sink;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    /// Perfectly binding locker.
    Ideal,
    /// Per-bit simulated quantum commitment sessions.
    Quantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    /// Three vertices, three colors: the smallest honest demo.
    Triangle,
    /// A dense 20-vertex graph with no proper 3-coloring in reach of the
    /// greedy prover; pair it with --cheat.
    Dense20,
}

#[derive(Args, Debug)]
pub struct ZkArgs {
    /// Edge-list file: a vertex-count header, then one `u v` pair per line.
    #[arg(long, conflicts_with = "demo")]
    graph: Option<PathBuf>,
    /// Built-in demo graph.
    #[arg(long, value_enum, default_value = "triangle")]
    demo: Demo,
    /// Challenge rounds.
    #[arg(long)]
    rounds: Option<u32>,
    /// Play the greedy cheating prover instead of requiring a proper
    /// coloring.
    #[arg(long)]
    cheat: bool,
    /// Re-choose colors after a conflicting challenge (caught by the
    /// commitment consistency check).
    #[arg(long)]
    rechoose: bool,
    #[arg(long, value_enum, default_value = "ideal")]
    backend: Backend,
    /// Master seed (required).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct RoundRow {
    round: u32,
    vertex_u: u32,
    vertex_v: u32,
    color_u: String,
    color_v: String,
    verdict: String,
}

fn color_name(c: Color) -> &'static str {
    match c {
        Color::R => "R",
        Color::Y => "Y",
        Color::B => "B",
    }
}

pub fn run(args: ZkArgs, file: &FileConfig, sink: &Sink) -> Result<(), CliError> {
    let seed = file
        .resolve_opt(args.seed, "seed")?
        .ok_or_else(|| CliError::usage("--seed is required for stochastic commands"))?;
    let rounds = file.resolve(args.rounds, "rounds", 20u32)?;

    let graph = match &args.graph {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("cannot read graph {}: {e}", path.display()))
            })?;
            Graph::from_edge_list(&text)?
        }
        None => match args.demo {
            Demo::Triangle => Graph::triangle(),
            Demo::Dense20 => Graph::random(20, 0.5, &mut rng_for(0xD20, "zk/demo-graph")),
        },
    };
    if graph.edges().is_empty() {
        return Err(CliError::usage("the graph has no edges to challenge"));
    }

    let coloring = greedy_coloring(&graph);
    if !args.cheat && !is_proper(&graph, &coloring) {
        return Err(CliError::validation(
            "no proper 3-coloring found by the greedy prover; pass --cheat to run anyway",
        ));
    }
    let p = proper_edge_fraction(&graph, &coloring);

    let behavior = if args.rechoose {
        ProverBehavior::RechooseOnConflict
    } else {
        ProverBehavior::Faithful
    };
    let mut rng = rng_for(seed, "zk/session");
    let log = match args.backend {
        Backend::Ideal => {
            zk_session(&graph, &coloring, rounds, &IdealLocker, behavior, &mut rng)?
        }
        Backend::Quantum => zk_session(
            &graph,
            &coloring,
            rounds,
            &QuantumCommitment::default(),
            behavior,
            &mut rng,
        )?,
    };

    let rows: Vec<RoundRow> = log
        .rounds
        .iter()
        .enumerate()
        .map(|(i, r)| RoundRow {
            round: i as u32 + 1,
            vertex_u: r.challenge.0,
            vertex_v: r.challenge.1,
            color_u: color_name(r.opened[0]).to_string(),
            color_v: color_name(r.opened[1]).to_string(),
            verdict: match r.verdict {
                RoundVerdict::Accept => "accept".to_string(),
                RoundVerdict::SameColor => "same-color".to_string(),
                RoundVerdict::BadOpening => "bad-opening".to_string(),
                RoundVerdict::InvalidEncoding => "invalid-encoding".to_string(),
            },
        })
        .collect();
    sink.write(&rows)?;
    eprintln!(
        "zk: {} over {} rounds (proper-edge fraction {:.3}{})",
        if log.accepted { "ACCEPT" } else { "REJECT" },
        log.rounds.len(),
        p,
        if log.vacuous { ", vacuous" } else { "" }
    );
    Ok(())
}
