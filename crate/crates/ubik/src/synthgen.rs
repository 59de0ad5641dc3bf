//! Seeded random multidimensional network and skill-table generator for
//! scaling benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MultiGraph, NodeId};
use crate::skills::SkillTable;

/// Shape of a generated benchmark instance.
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub n_nodes: usize,
    pub avg_degree: f64,
    pub n_dims: usize,
    pub n_skills: usize,
    pub seed: u64,
    /// Uniform range [lo, hi] for every (node, skill) weight.
    pub skill_weight_range: (f64, f64),
}

impl GenSpec {
    pub fn new(n_nodes: usize, avg_degree: f64, n_dims: usize, n_skills: usize, seed: u64) -> GenSpec {
        GenSpec {
            n_nodes,
            avg_degree,
            n_dims,
            n_skills,
            seed,
            skill_weight_range: (0.0, 100.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 1 {
            return Err(Error::InvalidInput("n_nodes must be at least 1".into()));
        }
        if self.n_dims < 1 || self.n_skills < 1 {
            return Err(Error::InvalidInput(
                "n_dims and n_skills must be at least 1".into(),
            ));
        }
        if !(self.avg_degree >= 0.0) {
            return Err(Error::InvalidInput("avg_degree must be non-negative".into()));
        }
        let (lo, hi) = self.skill_weight_range;
        if !(lo >= 0.0 && hi >= lo) {
            return Err(Error::InvalidInput(
                "skill weight range must satisfy 0 <= lo <= hi".into(),
            ));
        }
        Ok(())
    }

    /// Exact number of edges the generator will draw.
    pub fn edge_count(&self) -> usize {
        (self.n_nodes as f64 * self.avg_degree / 2.0).floor() as usize
    }
}

/// Generate an Erdős–Rényi-style network: `n_nodes·avg_degree/2` undirected
/// edges drawn uniformly over node pairs, each labeled with a uniformly
/// random dimension; every node gets every skill with a uniform weight.
/// Deterministic for a given seed.
pub fn generate(spec: &GenSpec) -> Result<(MultiGraph, SkillTable)> {
    spec.validate()?;
    let n = spec.n_nodes;
    let m = spec.edge_count();
    let capacity = n * (n - 1) / 2 * spec.n_dims;
    if m > capacity {
        return Err(Error::Capacity {
            requested: m,
            capacity,
        });
    }

    let mut rng = StdRng::seed_from_u64(spec.seed);
    let mut builder = GraphBuilder::new(false);
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    for name in &names {
        builder.add_node(name);
    }
    for d in 0..spec.n_dims {
        builder.add_dimension(&format!("d{d}"));
    }

    let mut accepted = 0usize;
    while accepted < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let d = rng.gen_range(0..spec.n_dims);
        if builder
            .add_edge(&names[u], &names[v], &format!("d{d}"))
            .expect("no self-loops generated")
        {
            accepted += 1;
        }
    }
    let graph = builder.finish();

    let (lo, hi) = spec.skill_weight_range;
    let mut table = SkillTable::new();
    for u in 0..n as NodeId {
        for s in 0..spec.n_skills {
            let w = lo + rng.gen::<f64>() * (hi - lo);
            table.add(u, &format!("s{s}"), w)?;
        }
    }
    Ok((graph, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_degree_yields_isolated_nodes() {
        let (g, t) = generate(&GenSpec::new(10, 0.0, 3, 2, 7)).unwrap();
        assert_eq!(g.node_count(), 10);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(t.skill_count(), 2);
    }

    #[test]
    fn same_seed_same_output() {
        let spec = GenSpec::new(200, 4.0, 3, 2, 42);
        let (g1, t1) = generate(&spec).unwrap();
        let (g2, t2) = generate(&spec).unwrap();
        assert_eq!(g1.edges(), g2.edges());
        for u in 0..g1.node_count() as NodeId {
            for s in 0..t1.skill_count() as u16 {
                assert_eq!(t1.weight(u, s), t2.weight(u, s));
            }
        }
    }

    #[test]
    fn different_seed_different_edges() {
        let (g1, _) = generate(&GenSpec::new(200, 4.0, 3, 2, 1)).unwrap();
        let (g2, _) = generate(&GenSpec::new(200, 4.0, 3, 2, 2)).unwrap();
        assert_ne!(g1.edges(), g2.edges());
    }

    #[test]
    fn exact_edge_count_at_benchmark_scale() {
        let (g, _) = generate(&GenSpec::new(50_000, 3.0, 5, 1, 9)).unwrap();
        assert_eq!(g.edge_count(), 75_000);
        assert_eq!(g.node_count(), 50_000);
    }

    #[test]
    fn dimension_distribution_roughly_uniform() {
        let spec = GenSpec::new(10_000, 4.0, 5, 1, 3);
        let (g, _) = generate(&spec).unwrap();
        let expected = g.edge_count() as f64 / 5.0;
        for d in 0..5 {
            let count = g.dim_edge_count(d) as f64;
            assert!(
                (count - expected).abs() / expected < 0.05,
                "dimension {d} has {count} edges, expected about {expected}"
            );
        }
    }

    #[test]
    fn capacity_exceeded_is_an_error() {
        // 3 nodes, 1 dimension: at most 3 edges, ask for 6
        let err = generate(&GenSpec::new(3, 4.0, 1, 1, 0)).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn weights_respect_range() {
        let mut spec = GenSpec::new(50, 2.0, 2, 3, 11);
        spec.skill_weight_range = (5.0, 6.0);
        let (g, t) = generate(&spec).unwrap();
        for u in 0..g.node_count() as NodeId {
            for s in 0..3 {
                let w = t.weight(u, s);
                assert!((5.0..=6.0).contains(&w));
            }
        }
    }
}
