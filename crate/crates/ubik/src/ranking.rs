//! Ordered ranking of nodes, the common output of every ranker.

use std::collections::HashMap;

/// Nodes ordered by descending score; ties broken by ascending node
/// identifier so every ranking is deterministic. Ranks are dense 1-based
/// positions in the order.
#[derive(Debug, Clone)]
pub struct Ranking {
    entries: Vec<(String, f64)>,
    positions: HashMap<String, u32>,
}

impl Ranking {
    pub fn from_scores<I>(scores: I) -> Ranking
    where
        I: IntoIterator<Item = (String, f64)>,
    {
        let mut entries: Vec<(String, f64)> = scores.into_iter().collect();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let positions = entries
            .iter()
            .enumerate()
            .map(|(i, (name, _))| (name.clone(), i as u32 + 1))
            .collect::<HashMap<_, _>>();
        debug_assert_eq!(positions.len(), entries.len(), "duplicate node in ranking");
        Ranking { entries, positions }
    }

    /// (node, score) pairs in rank order.
    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based rank of `node`, if present.
    pub fn rank_of(&self, node: &str) -> Option<u32> {
        self.positions.get(node).copied()
    }

    pub fn top(&self, k: usize) -> &[(String, f64)] {
        &self.entries[..k.min(self.entries.len())]
    }

    pub fn same_node_set(&self, other: &Ranking) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .all(|(name, _)| other.positions.contains_key(name))
    }
}
