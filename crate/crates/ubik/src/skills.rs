//! Weighted node skill labels.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Per-node weighted skill vector over a fixed skill vocabulary.
///
/// Nodes absent from the table implicitly hold weight 0 for every skill.
/// Skill labels are interned in order of first appearance; that order is the
/// canonical skill order used everywhere downstream.
#[derive(Debug, Default, Clone)]
pub struct SkillTable {
    skills: Vec<String>,
    skill_ids: HashMap<String, u16>,
    values: HashMap<(NodeId, u16), f64>,
}

impl SkillTable {
    pub fn new() -> SkillTable {
        SkillTable::default()
    }

    /// Add `weight` of `skill` to `node`; repeated additions accumulate.
    pub fn add(&mut self, node: NodeId, skill: &str, weight: f64) -> Result<()> {
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::InvalidInput(format!(
                "skill weight must be a finite non-negative number, got {weight}"
            )));
        }
        let s = self.intern(skill);
        *self.values.entry((node, s)).or_insert(0.0) += weight;
        Ok(())
    }

    fn intern(&mut self, skill: &str) -> u16 {
        if let Some(&s) = self.skill_ids.get(skill) {
            return s;
        }
        let s = self.skills.len() as u16;
        self.skills.push(skill.to_string());
        self.skill_ids.insert(skill.to_string(), s);
        s
    }

    /// Skill vocabulary in canonical order.
    pub fn skills(&self) -> &[String] {
        &self.skills
    }

    pub fn skill_count(&self) -> usize {
        self.skills.len()
    }

    pub fn skill_id(&self, label: &str) -> Option<u16> {
        self.skill_ids.get(label).copied()
    }

    /// w(node, skill); 0 when the pair is absent.
    pub fn weight(&self, node: NodeId, skill: u16) -> f64 {
        self.values.get(&(node, skill)).copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.skills.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_entries_sum() {
        let mut t = SkillTable::new();
        t.add(0, "a", 100.0).unwrap();
        t.add(0, "a", 15.0).unwrap();
        let a = t.skill_id("a").unwrap();
        assert_eq!(t.weight(0, a), 115.0);
    }

    #[test]
    fn negative_weight_rejected() {
        let mut t = SkillTable::new();
        assert!(t.add(0, "a", -5.0).is_err());
        assert!(t.add(0, "a", f64::NAN).is_err());
    }

    #[test]
    fn missing_entries_are_zero() {
        let mut t = SkillTable::new();
        t.add(0, "a", 1.0).unwrap();
        let a = t.skill_id("a").unwrap();
        assert_eq!(t.weight(7, a), 0.0);
    }
}
