//! Reference rankers: degree ranking and PageRank on the flattened graph.

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, NodeId};
use crate::ranking::Ranking;

/// Rank nodes by distinct-neighbor degree, descending.
pub fn rank_by_degree(graph: &MultiGraph) -> Ranking {
    Ranking::from_scores(
        (0..graph.node_count() as NodeId)
            .map(|u| (graph.node_name(u).to_string(), graph.degree_of(u) as f64)),
    )
}

#[derive(Debug, Clone)]
pub struct PagerankConfig {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: u32,
    /// Keep parallel-edge multiplicity as edge weight instead of collapsing
    /// the flattened graph to simple unweighted edges.
    pub weighted: bool,
}

impl Default for PagerankConfig {
    fn default() -> PagerankConfig {
        PagerankConfig {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 200,
            weighted: false,
        }
    }
}

#[derive(Debug)]
pub struct PagerankOutcome {
    pub ranking: Ranking,
    /// Score per dense node id; sums to 1.
    pub scores: Vec<f64>,
    pub iterations: u32,
    pub converged: bool,
}

/// Power iteration on the dimension-collapsed graph. Undirected edges count
/// in both directions; nodes without outgoing edges redistribute their mass
/// uniformly.
pub fn pagerank(graph: &MultiGraph, config: &PagerankConfig) -> Result<PagerankOutcome> {
    if !(config.damping > 0.0 && config.damping < 1.0) {
        return Err(Error::InvalidInput(format!(
            "damping must lie in (0, 1), got {}",
            config.damping
        )));
    }
    if !(config.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }

    let n = graph.node_count();
    if n == 0 {
        return Ok(PagerankOutcome {
            ranking: Ranking::from_scores(Vec::new()),
            scores: Vec::new(),
            iterations: 0,
            converged: true,
        });
    }

    // Flattened sender-side structure: per node, (target, weight) pairs and
    // the total outgoing weight. Receiver-side iteration needs the reverse
    // view; build it directly.
    let out_adj = graph.out_adj();
    let mut out_weight = vec![0.0f64; n];
    let mut incoming: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
    let push = |incoming: &mut Vec<Vec<(NodeId, f64)>>,
                out_weight: &mut Vec<f64>,
                from: NodeId,
                to: NodeId,
                w: f64| {
        incoming[to as usize].push((from, w));
        out_weight[from as usize] += w;
    };
    for u in 0..n as NodeId {
        for slot in out_adj.slot_range(u) {
            let v = out_adj.neighbors[slot];
            let multiplicity = (out_adj.dim_offsets[slot + 1] - out_adj.dim_offsets[slot]) as f64;
            let w = if config.weighted { multiplicity } else { 1.0 };
            push(&mut incoming, &mut out_weight, u, v, w);
            if !graph.is_directed() {
                push(&mut incoming, &mut out_weight, v, u, w);
            }
        }
    }
    for senders in &mut incoming {
        senders.sort_unstable_by_key(|&(from, _)| from);
    }

    let uniform = 1.0 / n as f64;
    let base = (1.0 - config.damping) / n as f64;
    let mut scores = vec![uniform; n];
    let mut next = vec![0.0f64; n];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iter {
        iterations += 1;
        let dangling: f64 = (0..n)
            .filter(|&u| out_weight[u] == 0.0)
            .map(|u| scores[u])
            .sum();
        let dangling_share = config.damping * dangling * uniform;
        for u in 0..n {
            let inflow: f64 = incoming[u]
                .iter()
                .map(|&(v, w)| scores[v as usize] * w / out_weight[v as usize])
                .sum();
            next[u] = base + dangling_share + config.damping * inflow;
        }
        let diff: f64 = scores
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        std::mem::swap(&mut scores, &mut next);
        if diff < config.tol {
            converged = true;
            break;
        }
    }

    let ranking = Ranking::from_scores(
        scores
            .iter()
            .enumerate()
            .map(|(u, &s)| (graph.node_name(u as NodeId).to_string(), s)),
    );
    Ok(PagerankOutcome {
        ranking,
        scores,
        iterations,
        converged,
    })
}
