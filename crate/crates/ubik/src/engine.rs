//! Skill propagation and ranking.
//!
//! Skills percolate outward from their holders: at iteration ℓ every node
//! receives, from each neighbor v over each connecting dimension d, the
//! amount
//!
//! ```text
//! (source(v, s) · r(d))^(1/(ℓ·α)) / (|N(u)| + |N(v)|)
//! ```
//!
//! where the source is the neighbor's original weight at ℓ = 1 and, for
//! later iterations, only what the neighbor gained in the previous iteration
//! minus what u itself handed it then (no-backflow). Increments are computed
//! from the previous iteration's state only and applied in one atomic update,
//! so results do not depend on node visit order. The loop stops when ℓ
//! reaches `delta`; afterwards each skill column is scaled into [0, 1] by its
//! maximum and summed into a combined per-node score.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, NodeId, NO_SLOT};
use crate::query::Query;
use crate::ranking::Ranking;
use crate::skills::SkillTable;

/// Pseudo-skill naming the combined (sum over the queried skills) column.
pub const COMBINED: &str = "__combined__";

/// Sources at or below this threshold are treated as zero. Values below 1
/// grow toward 1 under exponents < 1, which would manufacture skill out of
/// vanishing sources; the cutoff keeps dried-up flows dry.
pub const SOURCE_EPS: f64 = 1e-12;

/// Which form of the transfer rule to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    /// Degree normalization outside the exponent (the normative rule).
    Standard,
    /// Degree normalization inside the exponent, matching the worked
    /// two-hop figures of the original toy walkthrough. Compatibility mode.
    Toy,
}

impl Semantics {
    /// What a receiver gains from one neighbor over one dimension.
    ///
    /// `inv_degree_sum` is 1/(receiver degree + sender degree) and
    /// `exponent` is 1/(ℓ·α).
    pub fn contribution(
        self,
        source: f64,
        relevance: f64,
        inv_degree_sum: f64,
        exponent: f64,
    ) -> f64 {
        if source <= SOURCE_EPS {
            return 0.0;
        }
        match self {
            Semantics::Standard => (source * relevance).powf(exponent) * inv_degree_sum,
            Semantics::Toy => (source * relevance * inv_degree_sum).powf(exponent),
        }
    }
}

/// Knobs of a propagation run beyond the [`Query`] itself.
#[derive(Debug, Clone)]
pub struct EngineOptions {
    pub semantics: Semantics,
    /// Worker threads for the per-iteration increment pass. Results are
    /// bitwise identical for any thread count: each node's increment is
    /// accumulated sequentially in canonical (neighbor, dimension, skill)
    /// order by exactly one worker.
    pub threads: usize,
    /// Override of the node processing order, useful to demonstrate that
    /// visit order cannot influence the result. `None` means natural order.
    pub node_order: Option<Vec<NodeId>>,
}

impl Default for EngineOptions {
    fn default() -> EngineOptions {
        EngineOptions {
            semantics: Semantics::Standard,
            threads: 1,
            node_order: None,
        }
    }
}

/// Wall-clock cost of the propagation loop, excluding setup and I/O.
#[derive(Debug, Clone, Copy)]
pub struct EngineStats {
    pub loop_time: Duration,
    pub iterations: u32,
}

/// Per-node, per-skill scores of one run.
#[derive(Debug, Clone)]
pub struct SkillScores {
    skill_labels: Vec<String>,
    node_count: usize,
    raw: Vec<f64>,
    normalized: Vec<f64>,
    combined: Vec<f64>,
    iterations_run: u32,
}

impl SkillScores {
    pub(crate) fn from_parts(
        skill_labels: Vec<String>,
        node_count: usize,
        raw: Vec<f64>,
        normalized: Vec<f64>,
        combined: Vec<f64>,
        iterations_run: u32,
    ) -> SkillScores {
        SkillScores {
            skill_labels,
            node_count,
            raw,
            normalized,
            combined,
            iterations_run,
        }
    }

    /// Queried skills in canonical (table) order.
    pub fn skill_labels(&self) -> &[String] {
        &self.skill_labels
    }

    pub fn skill_index(&self, label: &str) -> Option<usize> {
        self.skill_labels.iter().position(|s| s == label)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// f(node, skill) after propagation, before normalization.
    pub fn raw(&self, node: NodeId, skill: usize) -> f64 {
        self.raw[node as usize * self.skill_labels.len() + skill]
    }

    /// Per-skill max-scaled score in [0, 1].
    pub fn normalized(&self, node: NodeId, skill: usize) -> f64 {
        self.normalized[node as usize * self.skill_labels.len() + skill]
    }

    /// u(*): sum of the normalized scores over the queried skills.
    pub fn combined(&self, node: NodeId) -> f64 {
        self.combined[node as usize]
    }

    /// Number of update iterations executed (delta − 1 for delta ≥ 1).
    pub fn iterations_run(&self) -> u32 {
        self.iterations_run
    }

    pub(crate) fn raw_slice(&self) -> &[f64] {
        &self.raw
    }
}

/// Resolve the queried skill subset against the table vocabulary, in
/// canonical table order. Empty subset means all skills.
pub(crate) fn resolve_skill_subset(table: &SkillTable, query: &Query) -> Result<Vec<u16>> {
    let selected: Vec<u16> = if query.skill_subset.is_empty() {
        (0..table.skill_count() as u16).collect()
    } else {
        let mut picked: Vec<u16> = query
            .skill_subset
            .iter()
            .filter_map(|label| table.skill_id(label))
            .collect();
        picked.sort_unstable();
        picked.dedup();
        picked
    };
    if selected.is_empty() {
        return Err(Error::InvalidQuery(
            "no queried skill exists in the skill table".into(),
        ));
    }
    Ok(selected)
}

/// Max-scale each skill column into [0, 1] (all-zero columns stay zero) and
/// sum the scaled columns into the combined score.
fn normalize_columns(raw: &[f64], node_count: usize, k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut normalized = vec![0.0; raw.len()];
    for s in 0..k {
        let mut max = 0.0f64;
        for u in 0..node_count {
            max = max.max(raw[u * k + s]);
        }
        if max > 0.0 {
            for u in 0..node_count {
                normalized[u * k + s] = raw[u * k + s] / max;
            }
        }
    }
    let combined = (0..node_count)
        .map(|u| normalized[u * k..(u + 1) * k].iter().sum())
        .collect();
    (normalized, combined)
}

/// Run the propagation with default options (standard semantics, one thread).
pub fn run_ubik(graph: &MultiGraph, skills: &SkillTable, query: &Query) -> Result<SkillScores> {
    run_ubik_with(graph, skills, query, &EngineOptions::default())
}

pub fn run_ubik_with(
    graph: &MultiGraph,
    skills: &SkillTable,
    query: &Query,
    options: &EngineOptions,
) -> Result<SkillScores> {
    run_ubik_timed(graph, skills, query, options).map(|(scores, _)| scores)
}

/// As [`run_ubik_with`], also reporting the wall-clock time of the iteration
/// loop alone (preprocessing excluded).
pub fn run_ubik_timed(
    graph: &MultiGraph,
    skills: &SkillTable,
    query: &Query,
    options: &EngineOptions,
) -> Result<(SkillScores, EngineStats)> {
    query.validate()?;
    let selected = resolve_skill_subset(skills, query)?;
    let n = graph.node_count();
    let k = selected.len();

    if let Some(order) = &options.node_order {
        if order.len() != n {
            return Err(Error::InvalidInput(
                "node order must list every node exactly once".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &u in order {
            let i = u as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(
                    "node order must list every node exactly once".into(),
                ));
            }
            seen[i] = true;
        }
    }

    // --- preprocessing ------------------------------------------------
    let adj = graph.receiver_adj();
    let relevance: Vec<f64> = graph
        .dimension_labels()
        .iter()
        .map(|label| query.relevance(label))
        .collect();

    // 1/(recv_degree(u) + send_degree(v)) per receiving slot.
    let slot_count = adj.neighbors.len();
    let mut inv_denom = vec![0.0f64; slot_count];
    for u in 0..n as NodeId {
        let recv_deg = graph.recv_degree_of(u) as f64;
        for slot in adj.slot_range(u) {
            let v = adj.neighbors[slot];
            inv_denom[slot] = 1.0 / (recv_deg + graph.send_degree_of(v) as f64);
        }
    }

    // Initial weights; delta_prev starts as the original weights so the
    // uniform source rule (delta_prev − backflow) yields w at ℓ = 1.
    let mut weights = vec![0.0f64; n * k];
    for u in 0..n {
        for (col, &s) in selected.iter().enumerate() {
            weights[u * k + col] = skills.weight(u as NodeId, s);
        }
    }

    let mut raw = weights.clone();
    let mut delta_prev = weights;
    let mut delta_next = vec![0.0f64; n * k];
    let mut recv_prev = vec![0.0f64; slot_count * k];
    let mut recv_next = vec![0.0f64; slot_count * k];

    let threads = options.threads.max(1).min(n.max(1));
    let semantics = options.semantics;
    let iterations = query.delta - 1;

    // --- propagation loop ----------------------------------------------
    let started = Instant::now();
    for ell in 1..query.delta {
        let exponent = 1.0 / (ell as f64 * query.alpha);

        if threads > 1 && options.node_order.is_none() {
            parallel_pass(
                n,
                k,
                threads,
                adj,
                &relevance,
                &inv_denom,
                &delta_prev,
                &recv_prev,
                semantics,
                exponent,
                &mut delta_next,
                &mut recv_next,
            );
        } else {
            let natural: Vec<NodeId>;
            let order: &[NodeId] = match &options.node_order {
                Some(o) => o,
                None => {
                    natural = (0..n as NodeId).collect();
                    &natural
                }
            };
            for &u in order {
                let ui = u as usize;
                let slots = adj.slot_range(u);
                let recv_out = &mut recv_next[slots.start * k..slots.end * k];
                let inc_out = &mut delta_next[ui * k..(ui + 1) * k];
                node_pass(
                    u, k, adj, &relevance, &inv_denom, &delta_prev, &recv_prev, semantics,
                    exponent, inc_out, recv_out,
                );
            }
        }

        for (r, d) in raw.iter_mut().zip(delta_next.iter()) {
            *r += d;
        }
        std::mem::swap(&mut delta_prev, &mut delta_next);
        std::mem::swap(&mut recv_prev, &mut recv_next);
        delta_next.fill(0.0);
        // recv_next is fully overwritten next iteration; no reset needed.
    }
    let loop_time = started.elapsed();

    let (normalized, combined) = normalize_columns(&raw, n, k);
    let labels = selected
        .iter()
        .map(|&s| skills.skills()[s as usize].clone())
        .collect();
    let scores = SkillScores::from_parts(labels, n, raw, normalized, combined, iterations);
    Ok((
        scores,
        EngineStats {
            loop_time,
            iterations,
        },
    ))
}

/// Compute one node's increments for the current iteration.
///
/// `inc_out` receives the per-skill increment of `u`; `recv_out` the per-slot
/// per-skill amount `u` received from each neighbor (slot-local layout).
/// Accumulation runs in ascending (neighbor, skill, dimension) order within
/// sorted adjacency, fixing the floating-point summation order.
#[allow(clippy::too_many_arguments)]
fn node_pass(
    u: NodeId,
    k: usize,
    adj: &crate::graph::Adjacency,
    relevance: &[f64],
    inv_denom: &[f64],
    delta_prev: &[f64],
    recv_prev: &[f64],
    semantics: Semantics,
    exponent: f64,
    inc_out: &mut [f64],
    recv_out: &mut [f64],
) {
    let slots = adj.slot_range(u);
    for (local, slot) in slots.enumerate() {
        let v = adj.neighbors[slot] as usize;
        let inv_d = inv_denom[slot];
        let reciprocal = adj.reciprocal[slot];
        let dims = &adj.dims[adj.dim_offsets[slot]..adj.dim_offsets[slot + 1]];
        for s in 0..k {
            // What v can pass to u: its previous gain, minus whatever part
            // of that gain u itself contributed (no-backflow), never < 0.
            let mut source = delta_prev[v * k + s];
            if reciprocal != NO_SLOT {
                source -= recv_prev[reciprocal as usize * k + s];
            }
            let gained = if source > SOURCE_EPS {
                let mut c = 0.0;
                for &d in dims {
                    c += semantics.contribution(source, relevance[d as usize], inv_d, exponent);
                }
                c
            } else {
                0.0
            };
            recv_out[local * k + s] = gained;
            inc_out[s] += gained;
        }
    }
}

/// Split the increment pass over `threads` scoped workers, each owning a
/// contiguous node range (and therefore a contiguous slice of both output
/// buffers). The update step is the join at the end of the scope.
#[allow(clippy::too_many_arguments)]
fn parallel_pass(
    n: usize,
    k: usize,
    threads: usize,
    adj: &crate::graph::Adjacency,
    relevance: &[f64],
    inv_denom: &[f64],
    delta_prev: &[f64],
    recv_prev: &[f64],
    semantics: Semantics,
    exponent: f64,
    delta_next: &mut [f64],
    recv_next: &mut [f64],
) {
    let per_worker = n.div_ceil(threads);
    std::thread::scope(|scope| {
        let mut delta_rest = delta_next;
        let mut recv_rest = recv_next;
        let mut start = 0usize;
        while start < n {
            let end = (start + per_worker).min(n);
            let slot_lo = adj.offsets[start];
            let slot_hi = adj.offsets[end];
            let (delta_chunk, dr) = delta_rest.split_at_mut((end - start) * k);
            let (recv_chunk, rr) = recv_rest.split_at_mut((slot_hi - slot_lo) * k);
            delta_rest = dr;
            recv_rest = rr;
            scope.spawn(move || {
                for u in start..end {
                    let slots = adj.slot_range(u as NodeId);
                    let recv_out =
                        &mut recv_chunk[(slots.start - slot_lo) * k..(slots.end - slot_lo) * k];
                    let inc_out = &mut delta_chunk[(u - start) * k..(u - start + 1) * k];
                    node_pass(
                        u as NodeId,
                        k,
                        adj,
                        relevance,
                        inv_denom,
                        delta_prev,
                        recv_prev,
                        semantics,
                        exponent,
                        inc_out,
                        recv_out,
                    );
                }
            });
            start = end;
        }
    });
}

/// Rank nodes by one skill column, or by the combined score when `target`
/// is [`COMBINED`].
pub fn rank_by_skill(scores: &SkillScores, graph: &MultiGraph, target: &str) -> Result<Ranking> {
    let column: Vec<f64> = if target == COMBINED {
        (0..graph.node_count() as NodeId)
            .map(|u| scores.combined(u))
            .collect()
    } else {
        let s = scores
            .skill_index(target)
            .ok_or_else(|| Error::UnknownSkill(target.to_string()))?;
        (0..graph.node_count() as NodeId)
            .map(|u| scores.normalized(u, s))
            .collect()
    };
    Ok(Ranking::from_scores(
        column
            .into_iter()
            .enumerate()
            .map(|(u, score)| (graph.node_name(u as NodeId).to_string(), score)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiGraph;

    fn k2() -> (MultiGraph, SkillTable) {
        let mut b = MultiGraph::builder(false);
        b.add_edge("u", "v", "d0").unwrap();
        let g = b.finish();
        let mut t = SkillTable::new();
        t.add(g.node_id("u").unwrap(), "a", 4.0).unwrap();
        (g, t)
    }

    fn query(alpha: f64, delta: u32) -> Query {
        Query {
            alpha,
            delta,
            ..Query::default()
        }
    }

    #[test]
    fn isolated_node_keeps_weight_and_normalizes_to_one() {
        let mut b = MultiGraph::builder(false);
        b.add_node("n");
        let g = b.finish();
        let mut t = SkillTable::new();
        t.add(0, "a", 5.0).unwrap();
        let scores = run_ubik(&g, &t, &query(2.0, 6)).unwrap();
        assert_eq!(scores.raw(0, 0), 5.0);
        assert_eq!(scores.normalized(0, 0), 1.0);
        assert_eq!(scores.combined(0), 1.0);
    }

    #[test]
    fn k2_hand_computed_values() {
        let (g, t) = k2();
        let scores = run_ubik(&g, &t, &query(1.0, 6)).unwrap();
        let u = g.node_id("u").unwrap();
        let v = g.node_id("v").unwrap();
        // iteration 1: v gains (4·1)^1 / (1+1) = 2; afterwards every source
        // is cancelled by backflow, so the state is stable.
        assert_eq!(scores.raw(v, 0), 2.0);
        assert_eq!(scores.raw(u, 0), 4.0);
        assert_eq!(scores.normalized(u, 0), 1.0);
        assert_eq!(scores.normalized(v, 0), 0.5);
        assert_eq!(scores.iterations_run(), 5);
    }

    #[test]
    fn k2_state_stable_for_all_deltas() {
        let (g, t) = k2();
        let base = run_ubik(&g, &t, &query(1.0, 2)).unwrap();
        for delta in 3..=6 {
            let s = run_ubik(&g, &t, &query(1.0, delta)).unwrap();
            assert_eq!(s.raw_slice(), base.raw_slice());
        }
    }

    #[test]
    fn delta_one_runs_no_iterations() {
        let (g, t) = k2();
        let scores = run_ubik(&g, &t, &query(1.0, 1)).unwrap();
        let v = g.node_id("v").unwrap();
        assert_eq!(scores.raw(v, 0), 0.0);
        assert_eq!(scores.iterations_run(), 0);
    }

    #[test]
    fn normalization_divides_by_column_max() {
        // two isolated nodes, no propagation: columns normalize independently
        let mut b = MultiGraph::builder(false);
        b.add_node("u");
        b.add_node("v");
        let g = b.finish();
        let mut t = SkillTable::new();
        t.add(0, "a", 4.0).unwrap();
        t.add(1, "a", 2.0).unwrap();
        t.add(0, "b", 1.0).unwrap();
        t.add(1, "b", 2.0).unwrap();
        let scores = run_ubik(&g, &t, &query(1.0, 1)).unwrap();
        assert_eq!(scores.normalized(0, 0), 1.0);
        assert_eq!(scores.normalized(1, 0), 0.5);
        // combined sums the normalized rows: u gets 1.0 + 0.5
        assert_eq!(scores.combined(0), 1.5);
        assert_eq!(scores.combined(1), 1.5);
    }

    #[test]
    fn all_zero_column_stays_zero() {
        let (g, mut t) = k2();
        t.add(0, "ghost", 0.0).unwrap();
        let scores = run_ubik(&g, &t, &query(1.0, 6)).unwrap();
        let s = scores.skill_index("ghost").unwrap();
        assert_eq!(scores.normalized(0, s), 0.0);
        assert_eq!(scores.normalized(1, s), 0.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        let (g, t) = k2();
        assert!(matches!(
            run_ubik(&g, &t, &query(0.0, 6)),
            Err(Error::InvalidQuery(_))
        ));
        assert!(matches!(
            run_ubik(&g, &t, &query(1.0, 0)),
            Err(Error::InvalidQuery(_))
        ));
        let q = Query {
            skill_subset: vec!["nope".into()],
            ..query(1.0, 6)
        };
        assert!(matches!(run_ubik(&g, &t, &q), Err(Error::InvalidQuery(_))));
    }

    #[test]
    fn skill_subset_restricts_columns() {
        let (g, mut t) = k2();
        t.add(0, "b", 7.0).unwrap();
        let q = Query {
            skill_subset: vec!["b".into()],
            ..query(1.0, 6)
        };
        let scores = run_ubik(&g, &t, &q).unwrap();
        assert_eq!(scores.skill_labels(), ["b".to_string()]);
        assert!(scores.skill_index("a").is_none());
    }

    #[test]
    fn directed_flow_follows_edge_direction() {
        let mut b = MultiGraph::builder(true);
        b.add_edge("a", "b", "x").unwrap();
        b.add_edge("b", "c", "x").unwrap();
        let g = b.finish();
        let mut t = SkillTable::new();
        t.add(g.node_id("a").unwrap(), "s", 8.0).unwrap();
        let scores = run_ubik(&g, &t, &query(1.0, 6)).unwrap();
        let (a, bb, c) = (
            g.node_id("a").unwrap(),
            g.node_id("b").unwrap(),
            g.node_id("c").unwrap(),
        );
        // ℓ=1: b gains 8 / (|N_out(a)| + |N_in(b)|) = 8/2 = 4
        // ℓ=2: c gains 4 / (|N_out(b)| + |N_in(c)|) = 4/2 = 2; a gains nothing
        assert_eq!(scores.raw(a, 0), 8.0);
        assert_eq!(scores.raw(bb, 0), 4.0);
        assert_eq!(scores.raw(c, 0), 2.0);
    }

    #[test]
    fn toy_semantics_moves_degrees_inside_the_root() {
        let c = Semantics::Toy.contribution(80.0, 0.5, 1.0 / 6.0, 0.5);
        assert!((c - (80.0f64 * 0.5 / 6.0).sqrt()).abs() < 1e-12);
        let std = Semantics::Standard.contribution(80.0, 0.5, 1.0 / 6.0, 0.5);
        assert!((std - (80.0f64 * 0.5).sqrt() / 6.0).abs() < 1e-12);
    }

    #[test]
    fn rank_by_skill_tie_break_and_errors() {
        let mut b = MultiGraph::builder(false);
        b.add_node("b");
        b.add_node("a");
        let g = b.finish();
        let mut t = SkillTable::new();
        t.add(0, "s", 3.0).unwrap();
        t.add(1, "s", 3.0).unwrap();
        let scores = run_ubik(&g, &t, &query(1.0, 1)).unwrap();
        let r = rank_by_skill(&scores, &g, "s").unwrap();
        assert_eq!(r.entries()[0].0, "a");
        assert_eq!(r.entries()[1].0, "b");
        assert!(matches!(
            rank_by_skill(&scores, &g, "zz"),
            Err(Error::UnknownSkill(_))
        ));
        let combined = rank_by_skill(&scores, &g, COMBINED).unwrap();
        assert_eq!(combined.len(), 2);
    }

    #[test]
    fn threads_produce_bitwise_identical_scores() {
        // small deterministic graph exercised with 1 and 3 workers
        let mut b = MultiGraph::builder(false);
        for (u, v, d) in [
            ("1", "2", "x"),
            ("2", "3", "y"),
            ("3", "4", "x"),
            ("4", "1", "y"),
            ("1", "3", "x"),
        ] {
            b.add_edge(u, v, d).unwrap();
        }
        let g = b.finish();
        let mut t = SkillTable::new();
        for u in 0..4 {
            t.add(u, "a", 1.0 + u as f64).unwrap();
            t.add(u, "b", 4.0 - u as f64).unwrap();
        }
        let q = query(2.0, 6);
        let seq = run_ubik(&g, &t, &q).unwrap();
        let par = run_ubik_with(
            &g,
            &t,
            &q,
            &EngineOptions {
                threads: 3,
                ..EngineOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq.raw_slice(), par.raw_slice());
    }
}
