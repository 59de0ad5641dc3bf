//! In-memory multidimensional network.
//!
//! A multidimensional network is a multigraph whose edges carry a dimension
//! label: between a pair of nodes there may be one edge per dimension, never
//! more. Node identifiers are opaque strings interned to dense integer ids in
//! order of first appearance; all public output uses the original strings.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Dense node index, assigned by first appearance.
pub type NodeId = u32;
/// Dense dimension index, assigned by first appearance.
pub type DimId = u16;

pub(crate) const NO_SLOT: u32 = u32::MAX;

/// One-directional adjacency in compressed form.
///
/// Each distinct (node, neighbor) pair occupies one *slot*; the slot owns the
/// sorted list of dimensions connecting the pair. Slots of a node are sorted
/// by neighbor id, which fixes the floating-point accumulation order used by
/// the propagation engine.
#[derive(Debug, Default)]
pub(crate) struct Adjacency {
    /// node -> slot range; length node_count + 1.
    pub offsets: Vec<usize>,
    /// slot -> neighbor id, ascending within each node's range.
    pub neighbors: Vec<NodeId>,
    /// slot -> range into `dims`; length slots + 1.
    pub dim_offsets: Vec<usize>,
    /// Dimension ids, ascending within each slot.
    pub dims: Vec<DimId>,
    /// slot (u, v) -> slot (v, u), or NO_SLOT when the reverse pair is absent.
    pub reciprocal: Vec<u32>,
}

impl Adjacency {
    pub fn slot_range(&self, u: NodeId) -> std::ops::Range<usize> {
        self.offsets[u as usize]..self.offsets[u as usize + 1]
    }

    pub fn slot_of(&self, u: NodeId, v: NodeId) -> Option<usize> {
        let range = self.slot_range(u);
        self.neighbors[range.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| range.start + i)
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.slot_range(u).len()
    }

    /// Build from (node, neighbor, dim) incidences; duplicates must already
    /// be removed by the caller.
    fn build(node_count: usize, mut incidences: Vec<(NodeId, NodeId, DimId)>) -> Adjacency {
        incidences.sort_unstable();
        let mut offsets = vec![0usize; node_count + 1];
        let mut neighbors = Vec::new();
        let mut dim_offsets = vec![0usize];
        let mut dims = Vec::with_capacity(incidences.len());

        let mut i = 0;
        for u in 0..node_count as u32 {
            while i < incidences.len() && incidences[i].0 == u {
                let v = incidences[i].1;
                neighbors.push(v);
                while i < incidences.len() && incidences[i].0 == u && incidences[i].1 == v {
                    dims.push(incidences[i].2);
                    i += 1;
                }
                dim_offsets.push(dims.len());
            }
            offsets[u as usize + 1] = neighbors.len();
        }

        let mut adj = Adjacency {
            offsets,
            neighbors,
            dim_offsets,
            dims,
            reciprocal: Vec::new(),
        };
        adj.reciprocal = (0..adj.neighbors.len() as u32)
            .map(|slot| {
                let u = adj.node_of_slot(slot as usize);
                let v = adj.neighbors[slot as usize];
                adj.slot_of(v, u).map_or(NO_SLOT, |s| s as u32)
            })
            .collect();
        adj
    }

    fn node_of_slot(&self, slot: usize) -> NodeId {
        // offsets is sorted; the owning node is the partition point minus one.
        (self.offsets.partition_point(|&o| o <= slot) - 1) as NodeId
    }
}

/// Immutable multidimensional network. Construct through [`GraphBuilder`] or
/// the loaders in [`crate::io`]; safe to share across threads once built.
#[derive(Debug)]
pub struct MultiGraph {
    names: Vec<String>,
    ids: HashMap<String, NodeId>,
    dim_labels: Vec<String>,
    dim_ids: HashMap<String, DimId>,
    directed: bool,
    /// Unique edge triples, sorted; undirected edges stored with u < v.
    edges: Vec<(NodeId, NodeId, DimId)>,
    /// Undirected: symmetric incidences. Directed: out-adjacency.
    adj: Adjacency,
    /// Directed only: in-adjacency (the receiving side of propagation).
    in_adj: Option<Adjacency>,
    /// Distinct neighbors ignoring direction, per node.
    union_degree: Vec<u32>,
    dim_edge_counts: Vec<usize>,
}

impl MultiGraph {
    pub fn builder(directed: bool) -> GraphBuilder {
        GraphBuilder::new(directed)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dimension_count(&self) -> usize {
        self.dim_labels.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.ids.get(name).copied()
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.names[id as usize]
    }

    pub fn node_names(&self) -> &[String] {
        &self.names
    }

    pub fn dimension_id(&self, label: &str) -> Option<DimId> {
        self.dim_ids.get(label).copied()
    }

    pub fn dimension_label(&self, dim: DimId) -> &str {
        &self.dim_labels[dim as usize]
    }

    pub fn dimension_labels(&self) -> &[String] {
        &self.dim_labels
    }

    /// Unique edge triples, sorted by (source, target, dimension).
    pub fn edges(&self) -> &[(NodeId, NodeId, DimId)] {
        &self.edges
    }

    /// Number of edges labeled with dimension `dim`.
    pub fn dim_edge_count(&self, dim: DimId) -> usize {
        self.dim_edge_counts[dim as usize]
    }

    /// |N(u)|: the number of distinct neighbors of `node` across all
    /// dimensions (direction ignored for directed graphs). A neighbor
    /// reachable through several dimensions counts once.
    pub fn degree(&self, node: &str) -> Result<usize> {
        let id = self
            .node_id(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        Ok(self.degree_of(id))
    }

    pub fn degree_of(&self, id: NodeId) -> usize {
        self.union_degree[id as usize] as usize
    }

    /// Number of neighbors of `node` reachable through dimension `dim`
    /// (equivalently, the number of incident edges labeled `dim`).
    pub fn degree_in_dim(&self, node: &str, dim: &str) -> Result<usize> {
        let id = self
            .node_id(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        let d = self
            .dimension_id(dim)
            .ok_or_else(|| Error::UnknownDimension(dim.to_string()))?;
        let mut count = self.count_dim_incidences(&self.adj, id, d);
        if let Some(in_adj) = &self.in_adj {
            count += self.count_dim_incidences(in_adj, id, d);
        }
        Ok(count)
    }

    fn count_dim_incidences(&self, adj: &Adjacency, id: NodeId, d: DimId) -> usize {
        adj.slot_range(id)
            .map(|slot| {
                adj.dims[adj.dim_offsets[slot]..adj.dim_offsets[slot + 1]]
                    .iter()
                    .filter(|&&x| x == d)
                    .count()
            })
            .sum()
    }

    /// Distinct neighbors of `id` on the flattened simple graph (direction
    /// ignored), sorted by id. For directed graphs the list is merged from
    /// both directions.
    pub fn flat_neighbors(&self, id: NodeId) -> Vec<NodeId> {
        let range = self.adj.slot_range(id);
        let out = &self.adj.neighbors[range];
        match &self.in_adj {
            None => out.to_vec(),
            Some(in_adj) => {
                let r = in_adj.slot_range(id);
                let inn = &in_adj.neighbors[r];
                let mut merged = Vec::with_capacity(out.len() + inn.len());
                let (mut i, mut j) = (0, 0);
                while i < out.len() || j < inn.len() {
                    let next = match (out.get(i), inn.get(j)) {
                        (Some(&a), Some(&b)) if a == b => {
                            i += 1;
                            j += 1;
                            a
                        }
                        (Some(&a), Some(&b)) if a < b => {
                            i += 1;
                            a
                        }
                        (Some(_), Some(&b)) => {
                            j += 1;
                            b
                        }
                        (Some(&a), None) => {
                            i += 1;
                            a
                        }
                        (None, Some(&b)) => {
                            j += 1;
                            b
                        }
                        (None, None) => unreachable!(),
                    };
                    merged.push(next);
                }
                merged
            }
        }
    }

    /// Distinct out-neighbor count (equal to [`Self::degree_of`] when
    /// undirected). This is the sender-side degree of the propagation rule.
    pub fn send_degree_of(&self, id: NodeId) -> usize {
        self.adj.degree(id)
    }

    /// Distinct in-neighbor count (equal to [`Self::degree_of`] when
    /// undirected). This is the receiver-side degree of the propagation rule.
    pub fn recv_degree_of(&self, id: NodeId) -> usize {
        match &self.in_adj {
            None => self.adj.degree(id),
            Some(in_adj) => in_adj.degree(id),
        }
    }

    /// Adjacency seen from the receiving side: for node u, the senders that
    /// can pass skills to u, with the connecting dimensions.
    pub(crate) fn receiver_adj(&self) -> &Adjacency {
        self.in_adj.as_ref().unwrap_or(&self.adj)
    }

    pub(crate) fn out_adj(&self) -> &Adjacency {
        &self.adj
    }
}

/// Incremental constructor for [`MultiGraph`].
pub struct GraphBuilder {
    directed: bool,
    names: Vec<String>,
    ids: HashMap<String, NodeId>,
    dim_labels: Vec<String>,
    dim_ids: HashMap<String, DimId>,
    edges: Vec<(NodeId, NodeId, DimId)>,
    seen: std::collections::HashSet<(NodeId, NodeId, DimId)>,
    duplicates: usize,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> GraphBuilder {
        GraphBuilder {
            directed,
            names: Vec::new(),
            ids: HashMap::new(),
            dim_labels: Vec::new(),
            dim_ids: HashMap::new(),
            edges: Vec::new(),
            seen: std::collections::HashSet::new(),
            duplicates: 0,
        }
    }

    /// Intern a node name, returning its dense id.
    pub fn add_node(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as NodeId;
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn add_dimension(&mut self, label: &str) -> DimId {
        if let Some(&d) = self.dim_ids.get(label) {
            return d;
        }
        let d = self.dim_labels.len() as DimId;
        self.dim_labels.push(label.to_string());
        self.dim_ids.insert(label.to_string(), d);
        d
    }

    /// Add an edge; returns false when the (pair, dimension) triple already
    /// exists (collapsed, counted as a duplicate). Self-loops are rejected.
    pub fn add_edge(&mut self, u: &str, v: &str, dim: &str) -> Result<bool> {
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop on node '{u}'")));
        }
        let a = self.add_node(u);
        let b = self.add_node(v);
        let d = self.add_dimension(dim);
        let key = if self.directed || a < b { (a, b, d) } else { (b, a, d) };
        if self.seen.insert(key) {
            self.edges.push(key);
            Ok(true)
        } else {
            self.duplicates += 1;
            Ok(false)
        }
    }

    /// Number of duplicate edge insertions collapsed so far.
    pub fn duplicate_count(&self) -> usize {
        self.duplicates
    }

    pub fn finish(mut self) -> MultiGraph {
        self.edges.sort_unstable();
        let n = self.names.len();

        let (adj, in_adj) = if self.directed {
            let out = Adjacency::build(n, self.edges.clone());
            let rev: Vec<_> = self.edges.iter().map(|&(u, v, d)| (v, u, d)).collect();
            (out, Some(Adjacency::build(n, rev)))
        } else {
            let mut sym = Vec::with_capacity(self.edges.len() * 2);
            for &(u, v, d) in &self.edges {
                sym.push((u, v, d));
                sym.push((v, u, d));
            }
            (Adjacency::build(n, sym), None)
        };

        let union_degree = (0..n as u32)
            .map(|id| match &in_adj {
                None => adj.degree(id) as u32,
                Some(ia) => {
                    let range = adj.slot_range(id);
                    let out = &adj.neighbors[range];
                    let r = ia.slot_range(id);
                    let inn = &ia.neighbors[r];
                    // both sorted; count distinct in the merge
                    let (mut i, mut j, mut count) = (0, 0, 0u32);
                    while i < out.len() || j < inn.len() {
                        count += 1;
                        match (out.get(i), inn.get(j)) {
                            (Some(&a), Some(&b)) if a == b => {
                                i += 1;
                                j += 1;
                            }
                            (Some(&a), Some(&b)) if a < b => i += 1,
                            (Some(_), Some(_)) => j += 1,
                            (Some(_), None) => i += 1,
                            (None, Some(_)) => j += 1,
                            (None, None) => unreachable!(),
                        }
                    }
                    count
                }
            })
            .collect();

        let mut dim_edge_counts = vec![0usize; self.dim_labels.len()];
        for &(_, _, d) in &self.edges {
            dim_edge_counts[d as usize] += 1;
        }

        MultiGraph {
            names: self.names,
            ids: self.ids,
            dim_labels: self.dim_labels,
            dim_ids: self.dim_ids,
            directed: self.directed,
            edges: self.edges,
            adj,
            in_adj,
            union_degree,
            dim_edge_counts,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(&str, &str, &str)]) -> MultiGraph {
        let mut b = MultiGraph::builder(false);
        for &(u, v, d) in edges {
            b.add_edge(u, v, d).unwrap();
        }
        b.finish()
    }

    #[test]
    fn basic_counts_and_degrees() {
        let g = graph(&[("1", "2", "x"), ("2", "3", "x"), ("1", "2", "y")]);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.dimension_count(), 2);
        assert_eq!(g.degree("1").unwrap(), 1);
        assert_eq!(g.degree("2").unwrap(), 2);
    }

    #[test]
    fn duplicates_collapse() {
        let mut b = MultiGraph::builder(false);
        b.add_edge("1", "2", "x").unwrap();
        b.add_edge("1", "2", "x").unwrap();
        b.add_edge("2", "1", "x").unwrap(); // same undirected edge
        assert_eq!(b.duplicate_count(), 2);
        let g = b.finish();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn self_loop_rejected() {
        let mut b = MultiGraph::builder(false);
        let err = b.add_edge("1", "1", "x").unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn star_center_counts_distinct_neighbors() {
        // center connected to 5 leaves, each through 2 dimensions
        let mut edges = Vec::new();
        for leaf in ["a", "b", "c", "d", "e"] {
            edges.push(("hub", leaf, "x"));
            edges.push(("hub", leaf, "y"));
        }
        let g = graph(&edges);
        assert_eq!(g.degree("hub").unwrap(), 5);
        assert_eq!(g.degree("a").unwrap(), 1);
    }

    #[test]
    fn per_dimension_counts_partition_incidences() {
        let g = graph(&[("n", "a", "x"), ("n", "a", "y"), ("n", "b", "x")]);
        assert_eq!(g.degree("n").unwrap(), 2);
        assert_eq!(g.degree_in_dim("n", "x").unwrap(), 2);
        assert_eq!(g.degree_in_dim("n", "y").unwrap(), 1);
    }

    #[test]
    fn unknown_node_and_dimension() {
        let g = graph(&[("1", "2", "x")]);
        assert!(matches!(g.degree("9"), Err(Error::UnknownNode(_))));
        assert!(matches!(
            g.degree_in_dim("1", "zz"),
            Err(Error::UnknownDimension(_))
        ));
    }

    #[test]
    fn degree_sums_match_edge_counts() {
        let g = graph(&[
            ("1", "2", "x"),
            ("2", "3", "x"),
            ("1", "2", "y"),
            ("3", "4", "y"),
            ("1", "4", "x"),
        ]);
        // distinct neighbor pairs: (1,2), (2,3), (3,4), (1,4)
        let total: usize = (0..g.node_count() as u32).map(|u| g.degree_of(u)).sum();
        assert_eq!(total, 2 * 4);
        for d in 0..g.dimension_count() as DimId {
            let label = g.dimension_label(d).to_string();
            let per_dim: usize = (0..g.node_count() as u32)
                .map(|u| g.degree_in_dim(g.node_name(u), &label).unwrap())
                .sum();
            assert_eq!(per_dim, 2 * g.dim_edge_count(d));
        }
    }

    #[test]
    fn directed_degrees() {
        let mut b = MultiGraph::builder(true);
        b.add_edge("a", "b", "x").unwrap();
        b.add_edge("b", "c", "x").unwrap();
        b.add_edge("c", "a", "y").unwrap();
        let g = b.finish();
        let a = g.node_id("a").unwrap();
        assert_eq!(g.send_degree_of(a), 1);
        assert_eq!(g.recv_degree_of(a), 1);
        assert_eq!(g.degree_of(a), 2);
        assert_eq!(g.flat_neighbors(a).len(), 2);
    }

    #[test]
    fn deterministic_id_assignment() {
        let build = || graph(&[("x", "y", "a"), ("y", "z", "b"), ("w", "x", "a")]);
        let g1 = build();
        let g2 = build();
        assert_eq!(g1.node_names(), g2.node_names());
        assert_eq!(g1.edges(), g2.edges());
        assert_eq!(g1.dimension_labels(), g2.dimension_labels());
    }
}
