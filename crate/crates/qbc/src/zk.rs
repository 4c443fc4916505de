//! Zero-knowledge graph-3-coloring authentication built on a bit
//! commitment primitive.
//!
//! Each round the prover permutes her secret coloring, commits to the
//! permuted colors as two bits per vertex, and answers a random edge
//! challenge by opening the two endpoint colors. A proper coloring passes
//! every round; a partial coloring with a fraction `p` of proper edges
//! survives `n` rounds with probability `p^n`. Fresh permutations keep the
//! verifier from learning anything beyond "the two colors differ".

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::protocol::{run_session_with_claim, ProtocolConfig, SessionTranscript, Strategy};
use crate::verifier::{accept_test, tally, Decision, Thresholds};
use crate::{Bit, Error, Result};

/// The three vertex colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    R,
    Y,
    B,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::Y, Color::B];

    /// Two-bit encoding: R = 00, Y = 01, B = 10. The pair 11 encodes no
    /// color and is rejected at opening.
    pub fn encode(self) -> [Bit; 2] {
        match self {
            Color::R => [0, 0],
            Color::Y => [0, 1],
            Color::B => [1, 0],
        }
    }

    pub fn decode(bits: [Bit; 2]) -> Option<Color> {
        match bits {
            [0, 0] => Some(Color::R),
            [0, 1] => Some(Color::Y),
            [1, 0] => Some(Color::B),
            _ => None,
        }
    }

    fn index(self) -> usize {
        match self {
            Color::R => 0,
            Color::Y => 1,
            Color::B => 2,
        }
    }
}

/// An undirected graph with no self-loops, vertices numbered from 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    vertex_count: u32,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new(vertex_count: u32, edges: Vec<(u32, u32)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v || u >= vertex_count || v >= vertex_count {
                return Err(Error::BadEdge(u, v, vertex_count));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        Ok(Self {
            vertex_count,
            edges: normalized,
        })
    }

    pub fn triangle() -> Self {
        Self::new(3, vec![(0, 1), (1, 2), (0, 2)]).expect("triangle is valid")
    }

    /// Erdos-Renyi style random graph: each pair becomes an edge with the
    /// given probability.
    pub fn random<R: Rng + ?Sized>(vertex_count: u32, edge_prob: f64, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for u in 0..vertex_count {
            for v in (u + 1)..vertex_count {
                if rng.gen::<f64>() < edge_prob {
                    edges.push((u, v));
                }
            }
        }
        Self {
            vertex_count,
            edges,
        }
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Parses the edge-list text format: a header line with the vertex
    /// count, then one `u v` pair per line. Blank lines and `#` comments
    /// are skipped.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut vertex_count: Option<u32> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if vertex_count.is_none() {
                vertex_count = Some(line.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    reason: format!("expected vertex count, got {line:?}"),
                })?);
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut field = |name: &str| -> Result<u32> {
                parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        reason: format!("expected {name} in edge line {line:?}"),
                    })
            };
            let u = field("vertex u")?;
            let v = field("vertex v")?;
            if parts.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    reason: "trailing fields in edge line".into(),
                });
            }
            edges.push((u, v));
        }
        let vertex_count = vertex_count.ok_or(Error::Parse {
            line: 0,
            reason: "missing vertex-count header".into(),
        })?;
        Self::new(vertex_count, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// A total assignment of colors to vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Self { colors }
    }

    pub fn color(&self, vertex: u32) -> Color {
        self.colors[vertex as usize]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Applies a color permutation, `C' = pi . C`.
    pub fn permuted(&self, pi: &[Color; 3]) -> Self {
        Self {
            colors: self.colors.iter().map(|c| pi[c.index()]).collect(),
        }
    }
}

/// True when no edge joins two vertices of the same color.
pub fn is_proper(graph: &Graph, coloring: &Coloring) -> bool {
    graph
        .edges()
        .iter()
        .all(|&(u, v)| coloring.color(u) != coloring.color(v))
}

/// Fraction of properly colored edges; the per-round pass probability of
/// a prover holding this coloring.
pub fn proper_edge_fraction(graph: &Graph, coloring: &Coloring) -> f64 {
    if graph.edges().is_empty() {
        return 1.0;
    }
    let good = graph
        .edges()
        .iter()
        .filter(|&&(u, v)| coloring.color(u) != coloring.color(v))
        .count();
    good as f64 / graph.edges().len() as f64
}

/// The cheating-prover model: color vertices greedily, each time picking
/// the color with the fewest conflicts among already-colored neighbors.
/// On graphs that need more than three colors this leaves a few bad edges,
/// and only the achieved proper fraction matters for the pass law.
pub fn greedy_coloring(graph: &Graph) -> Coloring {
    let n = graph.vertex_count() as usize;
    let mut colors: Vec<Option<Color>> = vec![None; n];
    for v in 0..n {
        let mut conflicts = [0u32; 3];
        for &(a, b) in graph.edges() {
            let other = if a as usize == v {
                b as usize
            } else if b as usize == v {
                a as usize
            } else {
                continue;
            };
            if let Some(c) = colors[other] {
                conflicts[c.index()] += 1;
            }
        }
        let best = (0..3).min_by_key(|&i| conflicts[i]).unwrap();
        colors[v] = Some(Color::ALL[best]);
    }
    Coloring::new(colors.into_iter().map(|c| c.unwrap()).collect())
}

/// Uniformly random permutation of the three colors.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R) -> [Color; 3] {
    let mut pi = Color::ALL;
    // Fisher-Yates over three entries.
    for i in (1..3).rev() {
        let j = rng.gen_range(0..=i);
        pi.swap(i, j);
    }
    pi
}

/// A backend that locks committed bits and later checks claimed openings.
pub trait CommitmentBackend {
    type Handle;

    /// The prover commits to a bit string.
    fn commit<R: Rng + ?Sized>(&self, bits: &[Bit], rng: &mut R) -> Result<Self::Handle>;

    /// The verifier checks one claimed bit against the commitment.
    fn verify_opening(&self, handle: &Self::Handle, position: usize, claimed: Bit) -> bool;
}

/// Perfectly binding, perfectly concealing locker for protocol-logic work.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdealLocker;

impl CommitmentBackend for IdealLocker {
    type Handle = Vec<Bit>;

    fn commit<R: Rng + ?Sized>(&self, bits: &[Bit], _rng: &mut R) -> Result<Vec<Bit>> {
        Ok(bits.to_vec())
    }

    fn verify_opening(&self, handle: &Vec<Bit>, position: usize, claimed: Bit) -> bool {
        handle.get(position) == Some(&claimed)
    }
}

/// Commitment backed by simulated quantum sessions: each bit is committed
/// by measuring the corresponding observable over one pulse train, and an
/// opening is checked with the statistical acceptance test. Binding holds
/// at the acceptance test's detection rates rather than absolutely.
#[derive(Debug, Clone)]
pub struct QuantumCommitment {
    pub cfg: ProtocolConfig,
    pub thresholds: Thresholds,
}

impl Default for QuantumCommitment {
    fn default() -> Self {
        // A short strong link keeps per-bit sessions cheap while leaving
        // enough counts for the acceptance test to bite.
        let mut cfg = ProtocolConfig {
            n_pulses: 600,
            ..ProtocolConfig::default()
        };
        cfg.link.mu_photon = 0.2;
        cfg.link.length_km = 1.0;
        Self {
            cfg,
            thresholds: Thresholds::default(),
        }
    }
}

impl CommitmentBackend for QuantumCommitment {
    type Handle = Vec<SessionTranscript>;

    fn commit<R: Rng + ?Sized>(&self, bits: &[Bit], rng: &mut R) -> Result<Vec<SessionTranscript>> {
        bits.iter()
            .map(|&bit| run_session_with_claim(&self.cfg, &Strategy::Honest { c: bit }, bit, rng))
            .collect()
    }

    fn verify_opening(&self, handle: &Vec<SessionTranscript>, position: usize, claimed: Bit) -> bool {
        let Some(transcript) = handle.get(position) else {
            return false;
        };
        let t = tally(transcript, &transcript.bob_bits);
        let (Ok(honest), Ok(cheat)) = (self.cfg.honest_probs(), self.cfg.cheat_probs()) else {
            return false;
        };
        let verdict = accept_test(
            &t,
            claimed,
            &honest,
            &cheat,
            &self.thresholds,
            Some(self.cfg.expected_detections()),
        );
        verdict.decision == Decision::Accept(claimed)
    }
}

/// How the prover behaves at the opening step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProverBehavior {
    /// Open exactly the committed bits.
    Faithful,
    /// On a conflicting challenge, claim a different color for the second
    /// vertex; the commitment consistency check is supposed to catch this.
    RechooseOnConflict,
}

/// The verifier's ruling on one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RoundVerdict {
    Accept,
    /// Opened colors were equal: the coloring fails on this edge.
    SameColor,
    /// A claimed bit was inconsistent with the commitment.
    BadOpening,
    /// The opened bit pair was not a color encoding.
    InvalidEncoding,
}

/// One challenge/response round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub challenge: (u32, u32),
    pub opened: [Color; 2],
    pub verdict: RoundVerdict,
}

/// Runs one round: commit to a freshly permuted coloring, answer a uniform
/// edge challenge, verify the opening.
pub fn zk_round<B: CommitmentBackend, R: Rng + ?Sized>(
    graph: &Graph,
    coloring: &Coloring,
    backend: &B,
    behavior: ProverBehavior,
    rng: &mut R,
) -> Result<RoundRecord> {
    if graph.edges().is_empty() {
        return Err(Error::EmptyGrid);
    }
    if coloring.len() != graph.vertex_count() as usize {
        return Err(Error::BadEdge(0, 0, graph.vertex_count()));
    }

    let pi = random_permutation(rng);
    let permuted = coloring.permuted(&pi);
    let mut bits = Vec::with_capacity(2 * permuted.len());
    for v in 0..graph.vertex_count() {
        bits.extend_from_slice(&permuted.color(v).encode());
    }
    let handle = backend.commit(&bits, rng)?;

    let challenge = graph.edges()[rng.gen_range(0..graph.edges().len())];
    let (u, v) = challenge;

    let mut claim_u = permuted.color(u).encode();
    let mut claim_v = permuted.color(v).encode();
    if behavior == ProverBehavior::RechooseOnConflict && permuted.color(u) == permuted.color(v) {
        // Swap in the next color for v and hope the locker does not notice.
        let next = Color::ALL[(permuted.color(v).index() + 1) % 3];
        claim_v = next.encode();
        let _ = &mut claim_u;
    }

    let mut consistent = true;
    for (vertex, claim) in [(u, claim_u), (v, claim_v)] {
        for (offset, &bit) in claim.iter().enumerate() {
            consistent &=
                backend.verify_opening(&handle, 2 * vertex as usize + offset, bit);
        }
    }
    let opened_u = Color::decode(claim_u);
    let opened_v = Color::decode(claim_v);

    let (verdict, opened) = if !consistent {
        (
            RoundVerdict::BadOpening,
            [
                opened_u.unwrap_or(Color::R),
                opened_v.unwrap_or(Color::R),
            ],
        )
    } else {
        match (opened_u, opened_v) {
            (Some(a), Some(b)) if a != b => (RoundVerdict::Accept, [a, b]),
            (Some(a), Some(b)) => (RoundVerdict::SameColor, [a, b]),
            _ => (RoundVerdict::InvalidEncoding, [Color::R, Color::R]),
        }
    };
    Ok(RoundRecord {
        challenge,
        opened,
        verdict,
    })
}

/// Log of a multi-round session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionLog {
    pub accepted: bool,
    /// Zero rounds were requested, so the accept is vacuous.
    pub vacuous: bool,
    pub rounds: Vec<RoundRecord>,
}

/// Runs `rounds` sequential rounds with fresh permutations, stopping at
/// the first failure.
pub fn zk_session<B: CommitmentBackend, R: Rng + ?Sized>(
    graph: &Graph,
    coloring: &Coloring,
    rounds: u32,
    backend: &B,
    behavior: ProverBehavior,
    rng: &mut R,
) -> Result<SessionLog> {
    let mut log = SessionLog {
        accepted: true,
        vacuous: rounds == 0,
        rounds: Vec::with_capacity(rounds as usize),
    };
    for _ in 0..rounds {
        let record = zk_round(graph, coloring, backend, behavior, rng)?;
        let ok = record.verdict == RoundVerdict::Accept;
        log.rounds.push(record);
        if !ok {
            log.accepted = false;
            break;
        }
    }
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::rng_for;

    fn proper_triangle() -> (Graph, Coloring) {
        (
            Graph::triangle(),
            Coloring::new(vec![Color::R, Color::Y, Color::B]),
        )
    }

    #[test]
    fn color_encoding_roundtrips_and_rejects_the_spare_pair() {
        for color in Color::ALL {
            assert_eq!(Color::decode(color.encode()), Some(color));
        }
        assert_eq!(Color::decode([1, 1]), None);
    }

    #[test]
    fn properness_checks() {
        let (g, c) = proper_triangle();
        assert!(is_proper(&g, &c));

        let bad = Coloring::new(vec![Color::R, Color::Y, Color::Y]);
        assert!(!is_proper(&g, &bad));
        assert!((proper_edge_fraction(&g, &bad) - 2.0 / 3.0).abs() < 1e-15);

        let empty = Graph::new(4, vec![]).unwrap();
        assert!(is_proper(
            &empty,
            &Coloring::new(vec![Color::R; 4])
        ));
    }

    #[test]
    fn graph_validation_and_parsing() {
        assert!(matches!(
            Graph::new(3, vec![(0, 0)]),
            Err(Error::BadEdge(0, 0, 3))
        ));
        assert!(matches!(
            Graph::new(3, vec![(0, 5)]),
            Err(Error::BadEdge(0, 5, 3))
        ));

        let text = "# demo\n3\n0 1\n1 2\n0 2\n";
        let g = Graph::from_edge_list(text).unwrap();
        assert_eq!(g, Graph::triangle());
        assert_eq!(Graph::from_edge_list(&g.to_edge_list()).unwrap(), g);

        let err = Graph::from_edge_list("3\n0 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn honest_prover_always_passes() {
        let (g, c) = proper_triangle();
        let mut rng = rng_for(1, "zk/honest");
        for _ in 0..200 {
            let r = zk_round(&g, &c, &IdealLocker, ProverBehavior::Faithful, &mut rng).unwrap();
            assert_eq!(r.verdict, RoundVerdict::Accept);
        }
        let log = zk_session(&g, &c, 50, &IdealLocker, ProverBehavior::Faithful, &mut rng).unwrap();
        assert!(log.accepted && !log.vacuous);
        assert_eq!(log.rounds.len(), 50);
    }

    #[test]
    fn one_bad_edge_is_caught_at_rate_one_third() {
        let g = Graph::triangle();
        let bad = Coloring::new(vec![Color::R, Color::Y, Color::Y]);
        let mut rng = rng_for(2, "zk/bad-edge");
        let trials = 6000;
        let mut caught = 0;
        for _ in 0..trials {
            let r = zk_round(&g, &bad, &IdealLocker, ProverBehavior::Faithful, &mut rng).unwrap();
            caught += u32::from(r.verdict == RoundVerdict::SameColor);
        }
        let rate = f64::from(caught) / f64::from(trials);
        let sd = ((1.0 / 3.0) * (2.0 / 3.0) / f64::from(trials)).sqrt();
        assert!((rate - 1.0 / 3.0).abs() < 3.0 * sd, "rate = {rate}");
    }

    #[test]
    fn zero_rounds_is_a_vacuous_accept() {
        let (g, c) = proper_triangle();
        let mut rng = rng_for(3, "zk/vacuous");
        let log = zk_session(&g, &c, 0, &IdealLocker, ProverBehavior::Faithful, &mut rng).unwrap();
        assert!(log.accepted && log.vacuous);
        assert!(log.rounds.is_empty());
    }

    #[test]
    fn opened_color_pairs_are_uniform_over_rounds() {
        // Fresh permutations hide the secret coloring: across accepted
        // rounds the ordered pair of opened colors covers all six
        // distinct-ordered pairs uniformly. Chi-squared at 1% with 5 dof.
        let (g, c) = proper_triangle();
        let mut rng = rng_for(4, "zk/uniform");
        let mut counts = std::collections::HashMap::new();
        let rounds = 6000;
        for _ in 0..rounds {
            let r = zk_round(&g, &c, &IdealLocker, ProverBehavior::Faithful, &mut rng).unwrap();
            assert_eq!(r.verdict, RoundVerdict::Accept);
            *counts.entry((r.opened[0], r.opened[1])).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = f64::from(rounds) / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&k| {
                let d = f64::from(k) - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 15.086, "chi2 = {chi2}");
    }

    #[test]
    fn rechoosing_is_caught_by_the_ideal_locker() {
        let g = Graph::triangle();
        let bad = Coloring::new(vec![Color::R, Color::Y, Color::Y]);
        let mut rng = rng_for(5, "zk/rechoose");
        let mut bad_openings = 0;
        let mut same_color = 0;
        for _ in 0..3000 {
            let r = zk_round(
                &g,
                &bad,
                &IdealLocker,
                ProverBehavior::RechooseOnConflict,
                &mut rng,
            )
            .unwrap();
            bad_openings += u32::from(r.verdict == RoundVerdict::BadOpening);
            same_color += u32::from(r.verdict == RoundVerdict::SameColor);
        }
        // Every conflicted challenge becomes a bad opening, never an
        // undetected pass.
        assert_eq!(same_color, 0);
        assert!(bad_openings > 800, "bad_openings = {bad_openings}");
    }

    #[test]
    fn greedy_cheat_leaves_bad_edges_on_dense_graphs() {
        let mut rng = rng_for(6, "zk/greedy");
        let g = Graph::random(20, 0.5, &mut rng);
        let c = greedy_coloring(&g);
        let p = proper_edge_fraction(&g, &c);
        assert!(p < 1.0, "greedy should fail somewhere on a dense graph");
        assert!(p > 0.5, "greedy should still do better than chance");

        // On the triangle greedy finds a proper coloring outright.
        let t = Graph::triangle();
        assert!(is_proper(&t, &greedy_coloring(&t)));
    }
}
