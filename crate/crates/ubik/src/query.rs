//! Ranking-run parameters.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Parameters of one ranking run: which skills to rank, how relevant each
/// dimension is, the range parameter and the iteration cap.
#[derive(Debug, Clone)]
pub struct Query {
    /// Skills to rank; empty means every skill in the table.
    pub skill_subset: Vec<String>,
    /// Dimension relevance r(d); unlisted dimensions default to 1.0.
    pub dim_relevance: HashMap<String, f64>,
    /// Range parameter: transfers across ℓ degrees of separation are raised
    /// to 1/(ℓ·alpha).
    pub alpha: f64,
    /// Iteration cap; propagation runs while ℓ < delta, so skills travel at
    /// most delta − 1 hops.
    pub delta: u32,
}

impl Default for Query {
    fn default() -> Query {
        Query {
            skill_subset: Vec::new(),
            dim_relevance: HashMap::new(),
            alpha: 2.0,
            delta: 6,
        }
    }
}

impl Query {
    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::InvalidQuery(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.delta < 1 {
            return Err(Error::InvalidQuery("delta must be at least 1".into()));
        }
        for (label, &r) in &self.dim_relevance {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::InvalidQuery(format!(
                    "relevance of dimension '{label}' must be positive, got {r}"
                )));
            }
        }
        Ok(())
    }

    /// r(dimension label), defaulting to 1.0.
    pub fn relevance(&self, label: &str) -> f64 {
        self.dim_relevance.get(label).copied().unwrap_or(1.0)
    }
}
