//! Ranking-comparison and structural metrics.

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, NodeId};
use crate::ranking::Ranking;

/// Paired ranks of the same nodes under two rankings: point (i, j) means the
/// node ranked i-th by the first ranking sits at rank j in the second.
#[derive(Debug, Clone)]
pub struct QQSeries {
    pairs: Vec<(u32, u32)>,
}

impl QQSeries {
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }
}

fn require_same_nodes(a: &Ranking, b: &Ranking) -> Result<()> {
    if a.same_node_set(b) {
        Ok(())
    } else {
        Err(Error::NodeSetMismatch)
    }
}

/// q-q pairs for the `top_n` nodes of `a`.
pub fn qq_series(a: &Ranking, b: &Ranking, top_n: usize) -> Result<QQSeries> {
    require_same_nodes(a, b)?;
    if top_n > a.len() {
        return Err(Error::InvalidInput(format!(
            "top_n {top_n} exceeds the {} ranked nodes",
            a.len()
        )));
    }
    let pairs = a
        .entries()
        .iter()
        .take(top_n)
        .enumerate()
        .map(|(i, (node, _))| (i as u32 + 1, b.rank_of(node).expect("same node set")))
        .collect();
    Ok(QQSeries { pairs })
}

/// Distance between two rankings over the same node set:
/// D = Σ_v |r_a(v) − r_b(v)| / |V|².
pub fn rank_distance(a: &Ranking, b: &Ranking) -> Result<f64> {
    require_same_nodes(a, b)?;
    let n = a.len();
    if n == 0 {
        return Ok(0.0);
    }
    let total: f64 = a
        .entries()
        .iter()
        .enumerate()
        .map(|(i, (node, _))| {
            let ra = i as f64 + 1.0;
            let rb = b.rank_of(node).expect("same node set") as f64;
            (ra - rb).abs()
        })
        .sum();
    Ok(total / (n as f64 * n as f64))
}

/// Mean absolute rank displacement, Σ_v |r_a(v) − r_b(v)| / |V|. Same sum as
/// [`rank_distance`] but scaled once, for when a size-comparable number is
/// wanted.
pub fn mean_rank_displacement(a: &Ranking, b: &Ranking) -> Result<f64> {
    let d = rank_distance(a, b)?;
    Ok(d * a.len() as f64)
}

/// Restrict both rankings to their common nodes, keeping each ranking's
/// relative order and re-densifying ranks. Used when a gold standard covers
/// only a subset of the network.
pub fn restrict_to_common(a: &Ranking, b: &Ranking) -> (Ranking, Ranking) {
    let keep = |from: &Ranking, other: &Ranking| {
        Ranking::from_scores(
            from.entries()
                .iter()
                .filter(|(node, _)| other.rank_of(node).is_some())
                .cloned()
                .collect::<Vec<_>>(),
        )
    };
    (keep(a, b), keep(b, a))
}

/// Local clustering coefficient on the flattened simple graph:
/// k(i) = 2·|edges among N(i)| / (|N(i)|·(|N(i)|−1)), 0 when |N(i)| < 2.
pub fn local_clustering(graph: &MultiGraph, node: &str) -> Result<f64> {
    let id = graph
        .node_id(node)
        .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
    Ok(local_clustering_of(graph, id))
}

pub fn local_clustering_of(graph: &MultiGraph, id: NodeId) -> f64 {
    let neighbors = graph.flat_neighbors(id);
    let deg = neighbors.len();
    if deg < 2 {
        return 0.0;
    }
    // count unordered neighbor pairs that are themselves connected
    let mut links = 0usize;
    for (i, &u) in neighbors.iter().enumerate() {
        let of_u = graph.flat_neighbors(u);
        for &v in &neighbors[i + 1..] {
            if of_u.binary_search(&v).is_ok() {
                links += 1;
            }
        }
    }
    2.0 * links as f64 / (deg as f64 * (deg - 1) as f64)
}

/// Over the `k` best-ranked nodes: the fraction whose local clustering
/// exceeds `threshold`, and their mean local clustering.
pub fn top_k_clustering_share(
    ranking: &Ranking,
    graph: &MultiGraph,
    k: usize,
    threshold: f64,
) -> (f64, f64) {
    let top = ranking.top(k);
    if top.is_empty() {
        return (0.0, 0.0);
    }
    let values: Vec<f64> = top
        .iter()
        .map(|(node, _)| {
            graph
                .node_id(node)
                .map(|id| local_clustering_of(graph, id))
                .unwrap_or(0.0)
        })
        .collect();
    let high = values.iter().filter(|&&v| v > threshold).count();
    let share = high as f64 / values.len() as f64;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (share, mean)
}
