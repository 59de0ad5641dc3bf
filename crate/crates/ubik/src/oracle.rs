//! Naive reference implementation of the propagation semantics.
//!
//! A deliberately literal transcription of the update rule: nested loops over
//! every node pair, dimension and skill, fresh full-state copies at every
//! iteration, explicit per-directed-edge bookkeeping of what was sent. It
//! shares only the domain types with the optimized engine — none of the
//! traversal code — so agreement between the two is meaningful evidence.
//! Test support only; guarded against use at scale.

use std::collections::{HashMap, HashSet};

use crate::engine::{Semantics, SkillScores};
use crate::error::{Error, Result};
use crate::graph::{DimId, MultiGraph, NodeId};
use crate::query::Query;
use crate::skills::SkillTable;

/// Largest instance the reference implementation accepts.
pub const MAX_ORACLE_NODES: usize = 64;

pub fn run_ubik_naive(
    graph: &MultiGraph,
    skills: &SkillTable,
    query: &Query,
    semantics: Semantics,
) -> Result<SkillScores> {
    let n = graph.node_count();
    if n > MAX_ORACLE_NODES {
        return Err(Error::SizeGuard {
            nodes: n,
            limit: MAX_ORACLE_NODES,
        });
    }
    query.validate()?;
    let selected = crate::engine::resolve_skill_subset(skills, query)?;
    let k = selected.len();
    let n_dims = graph.dimension_count();

    // Edge set, oriented sender -> receiver.
    let mut flows: HashSet<(NodeId, NodeId, DimId)> = HashSet::new();
    for &(u, v, d) in graph.edges() {
        flows.insert((u, v, d));
        if !graph.is_directed() {
            flows.insert((v, u, d));
        }
    }

    // Naive degrees, recomputed from the edge set.
    let mut send_degree = vec![0usize; n];
    let mut recv_degree = vec![0usize; n];
    for u in 0..n as NodeId {
        let mut targets = HashSet::new();
        let mut sources = HashSet::new();
        for &(a, b, _d) in &flows {
            if a == u {
                targets.insert(b);
            }
            if b == u {
                sources.insert(a);
            }
        }
        send_degree[u as usize] = targets.len();
        recv_degree[u as usize] = sources.len();
    }

    let relevance: Vec<f64> = (0..n_dims as DimId)
        .map(|d| query.relevance(graph.dimension_label(d)))
        .collect();

    let mut value: Vec<Vec<f64>> = (0..n)
        .map(|u| {
            selected
                .iter()
                .map(|&s| skills.weight(u as NodeId, s))
                .collect()
        })
        .collect();
    // Previous-iteration gains; the first iteration sources the original
    // weights, modeled as an initial "gain" of w with nothing sent yet.
    let mut gained_prev = value.clone();
    let mut sent_prev: HashMap<(NodeId, NodeId, usize), f64> = HashMap::new();

    let mut ell = 1;
    while ell < query.delta {
        let exponent = 1.0 / (ell as f64 * query.alpha);
        let mut gained_next: Vec<Vec<f64>> = vec![vec![0.0; k]; n];
        let mut sent_next: HashMap<(NodeId, NodeId, usize), f64> = HashMap::new();

        for u in 0..n as NodeId {
            for v in 0..n as NodeId {
                if u == v {
                    continue;
                }
                for s in 0..k {
                    let backflow = sent_prev.get(&(u, v, s)).copied().unwrap_or(0.0);
                    let source = gained_prev[v as usize][s] - backflow;
                    if source <= 1e-12 {
                        continue;
                    }
                    let mut received = 0.0;
                    for d in 0..n_dims as DimId {
                        if !flows.contains(&(v, u, d)) {
                            continue;
                        }
                        let inv_denom = 1.0
                            / (recv_degree[u as usize] as f64 + send_degree[v as usize] as f64);
                        let x = source * relevance[d as usize];
                        received += match semantics {
                            Semantics::Standard => x.powf(exponent) * inv_denom,
                            Semantics::Toy => (x * inv_denom).powf(exponent),
                        };
                    }
                    if received > 0.0 {
                        gained_next[u as usize][s] += received;
                        sent_next.insert((v, u, s), received);
                    }
                }
            }
        }

        for u in 0..n {
            for s in 0..k {
                value[u][s] += gained_next[u][s];
            }
        }
        gained_prev = gained_next;
        sent_prev = sent_next;
        ell += 1;
    }

    // Independent normalization: max-scale each skill column, sum into the
    // combined score.
    let mut raw = vec![0.0; n * k];
    for u in 0..n {
        for s in 0..k {
            raw[u * k + s] = value[u][s];
        }
    }
    let mut normalized = vec![0.0; n * k];
    for s in 0..k {
        let mut max = 0.0f64;
        for u in 0..n {
            if value[u][s] > max {
                max = value[u][s];
            }
        }
        if max > 0.0 {
            for u in 0..n {
                normalized[u * k + s] = value[u][s] / max;
            }
        }
    }
    let combined: Vec<f64> = (0..n)
        .map(|u| (0..k).map(|s| normalized[u * k + s]).sum())
        .collect();

    let labels = selected
        .iter()
        .map(|&s| skills.skills()[s as usize].clone())
        .collect();
    Ok(SkillScores::from_parts(
        labels,
        n,
        raw,
        normalized,
        combined,
        query.delta - 1,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_hand_values_via_the_independent_path() {
        let mut b = MultiGraph::builder(false);
        b.add_edge("u", "v", "d0").unwrap();
        let g = b.finish();
        let mut t = SkillTable::new();
        t.add(g.node_id("u").unwrap(), "a", 4.0).unwrap();
        let q = Query {
            alpha: 1.0,
            delta: 6,
            ..Query::default()
        };
        let scores = run_ubik_naive(&g, &t, &q, Semantics::Standard).unwrap();
        assert_eq!(scores.raw(g.node_id("v").unwrap(), 0), 2.0);
        assert_eq!(scores.raw(g.node_id("u").unwrap(), 0), 4.0);
    }

    #[test]
    fn isolated_node_normalizes_to_one() {
        let mut b = MultiGraph::builder(false);
        b.add_node("n");
        let g = b.finish();
        let mut t = SkillTable::new();
        t.add(0, "a", 3.0).unwrap();
        let scores = run_ubik_naive(&g, &t, &Query::default(), Semantics::Standard).unwrap();
        assert_eq!(scores.normalized(0, 0), 1.0);
    }

    #[test]
    fn size_guard_refuses_large_instances() {
        let mut b = MultiGraph::builder(false);
        for i in 0..65 {
            b.add_node(&i.to_string());
        }
        let g = b.finish();
        let mut t = SkillTable::new();
        t.add(0, "a", 1.0).unwrap();
        assert!(matches!(
            run_ubik_naive(&g, &t, &Query::default(), Semantics::Standard),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn matches_engine_on_a_seeded_instance() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(42);
        let mut b = MultiGraph::builder(false);
        for i in 0..8 {
            b.add_node(&i.to_string());
        }
        for _ in 0..14 {
            let u = rng.gen_range(0..8u32);
            let v = rng.gen_range(0..8u32);
            if u == v {
                continue;
            }
            let d = rng.gen_range(0..3);
            b.add_edge(&u.to_string(), &v.to_string(), &format!("d{d}"))
                .unwrap();
        }
        let g = b.finish();
        let mut t = SkillTable::new();
        for u in 0..8 {
            for s in 0..3 {
                t.add(u, &format!("s{s}"), rng.gen::<f64>() * 10.0).unwrap();
            }
        }
        let q = Query {
            alpha: 2.0,
            delta: 6,
            ..Query::default()
        };
        let naive = run_ubik_naive(&g, &t, &q, Semantics::Standard).unwrap();
        let fast = crate::engine::run_ubik(&g, &t, &q).unwrap();
        for u in 0..8u32 {
            for s in 0..3 {
                let (a, b) = (naive.raw(u, s), fast.raw(u, s));
                assert!(
                    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0),
                    "node {u} skill {s}: {a} vs {b}"
                );
            }
        }
    }
}
