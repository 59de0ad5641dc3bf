//! File formats: TAB-separated edge lists, skill tables, query files and the
//! output dumps. Lines starting with '#' and blank lines are ignored in all
//! inputs.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::engine::{SkillScores, COMBINED};
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MultiGraph, NodeId};
use crate::metrics::QQSeries;
use crate::query::Query;
use crate::ranking::Ranking;
use crate::skills::SkillTable;

/// A loaded graph plus the number of duplicate edge lines collapsed.
pub struct GraphLoad {
    pub graph: MultiGraph,
    pub duplicate_edges: usize,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = std::io::Result<(usize, String)>> {
    reader.lines().enumerate().filter_map(|(i, line)| {
        match line {
            Ok(text) => {
                let trimmed = text.trim_end_matches(['\r', '\n']);
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    None
                } else {
                    Some(Ok((i + 1, trimmed.to_string())))
                }
            }
            Err(e) => Some(Err(e)),
        }
    })
}

/// Load an edge list: one `source TAB target TAB dimension` triple per line.
pub fn load_graph<R: BufRead>(reader: R, directed: bool) -> Result<GraphLoad> {
    let mut builder = GraphBuilder::new(directed);
    for item in content_lines(reader) {
        let (lineno, line) = item?;
        let mut fields = line.split('\t');
        let (u, v, d) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(u), Some(v), Some(d), None) if !u.is_empty() && !v.is_empty() && !d.is_empty() => {
                (u, v, d)
            }
            _ => {
                return Err(parse_err(
                    lineno,
                    format!("expected 'source<TAB>target<TAB>dimension', got '{line}'"),
                ))
            }
        };
        if u == v {
            return Err(parse_err(lineno, format!("self-loop on node '{u}'")));
        }
        builder.add_edge(u, v, d)?;
    }
    let duplicate_edges = builder.duplicate_count();
    Ok(GraphLoad {
        graph: builder.finish(),
        duplicate_edges,
    })
}

pub fn load_graph_str(text: &str, directed: bool) -> Result<GraphLoad> {
    load_graph(text.as_bytes(), directed)
}

pub fn load_graph_path(path: &Path, directed: bool) -> Result<GraphLoad> {
    load_graph(BufReader::new(File::open(path)?), directed)
}

/// Load a skill table: one `node TAB skill TAB weight` triple per line.
/// Repeated (node, skill) lines sum their weights; every node must exist in
/// `graph`.
pub fn load_skills<R: BufRead>(reader: R, graph: &MultiGraph) -> Result<SkillTable> {
    let mut table = SkillTable::new();
    for item in content_lines(reader) {
        let (lineno, line) = item?;
        let mut fields = line.split('\t');
        let (node, skill, weight) = match (fields.next(), fields.next(), fields.next(), fields.next())
        {
            (Some(n), Some(s), Some(w), None) if !n.is_empty() && !s.is_empty() => (n, s, w),
            _ => {
                return Err(parse_err(
                    lineno,
                    format!("expected 'node<TAB>skill<TAB>weight', got '{line}'"),
                ))
            }
        };
        let weight: f64 = weight
            .parse()
            .map_err(|_| parse_err(lineno, format!("'{weight}' is not a number")))?;
        if !weight.is_finite() || weight < 0.0 {
            return Err(parse_err(
                lineno,
                format!("weight must be finite and non-negative, got {weight}"),
            ));
        }
        let id = graph
            .node_id(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        table.add(id, skill, weight)?;
    }
    Ok(table)
}

pub fn load_skills_str(text: &str, graph: &MultiGraph) -> Result<SkillTable> {
    load_skills(text.as_bytes(), graph)
}

pub fn load_skills_path(path: &Path, graph: &MultiGraph) -> Result<SkillTable> {
    load_skills(BufReader::new(File::open(path)?), graph)
}

/// Load a query file of `key=value` lines: `alpha=F`, `delta=N`,
/// `dim.<label>=<r>`, and bare `skill.<label>` lines marking membership in
/// the queried skill subset.
pub fn load_query<R: BufRead>(reader: R) -> Result<Query> {
    let mut query = Query::default();
    for item in content_lines(reader) {
        let (lineno, line) = item?;
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (line.trim(), None),
        };
        match (key, value) {
            ("alpha", Some(v)) => {
                query.alpha = v
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("alpha: '{v}' is not a number")))?;
            }
            ("delta", Some(v)) => {
                query.delta = v
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("delta: '{v}' is not an integer")))?;
            }
            (k, Some(v)) if k.starts_with("dim.") => {
                let r: f64 = v
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("{k}: '{v}' is not a number")))?;
                query.dim_relevance.insert(k["dim.".len()..].to_string(), r);
            }
            (k, None) if k.starts_with("skill.") => {
                let label = k["skill.".len()..].to_string();
                if !query.skill_subset.contains(&label) {
                    query.skill_subset.push(label);
                }
            }
            _ => return Err(parse_err(lineno, format!("unrecognized entry '{line}'"))),
        }
    }
    query.validate()?;
    Ok(query)
}

pub fn load_query_str(text: &str) -> Result<Query> {
    load_query(text.as_bytes())
}

pub fn load_query_path(path: &Path) -> Result<Query> {
    load_query(BufReader::new(File::open(path)?))
}

/// Write an edge list in the standard input format.
pub fn write_edges<W: Write>(mut w: W, graph: &MultiGraph) -> std::io::Result<()> {
    writeln!(w, "# source\ttarget\tdimension")?;
    for &(u, v, d) in graph.edges() {
        writeln!(
            w,
            "{}\t{}\t{}",
            graph.node_name(u),
            graph.node_name(v),
            graph.dimension_label(d)
        )?;
    }
    Ok(())
}

/// Write a skill table in the standard input format. Nodes without any edge
/// cannot appear in an edge list, so their rows are skipped to keep the file
/// pair loadable; the count of skipped nodes is returned.
pub fn write_skills<W: Write>(
    mut w: W,
    graph: &MultiGraph,
    table: &SkillTable,
) -> std::io::Result<usize> {
    writeln!(w, "# node\tskill\tweight")?;
    let mut skipped = 0usize;
    for u in 0..graph.node_count() as NodeId {
        if graph.degree_of(u) == 0 {
            skipped += 1;
            continue;
        }
        for s in 0..table.skill_count() as u16 {
            let weight = table.weight(u, s);
            if weight > 0.0 {
                writeln!(
                    w,
                    "{}\t{}\t{}",
                    graph.node_name(u),
                    table.skills()[s as usize],
                    weight
                )?;
            }
        }
    }
    Ok(skipped)
}

/// Full score dump: `node TAB skill TAB raw TAB normalized` rows plus one
/// `__combined__` pseudo-skill row per node carrying the combined score.
pub fn write_scores<W: Write>(
    mut w: W,
    graph: &MultiGraph,
    scores: &SkillScores,
) -> std::io::Result<()> {
    writeln!(w, "# node\tskill\traw\tnormalized")?;
    for u in 0..graph.node_count() as NodeId {
        for (s, label) in scores.skill_labels().iter().enumerate() {
            writeln!(
                w,
                "{}\t{}\t{}\t{}",
                graph.node_name(u),
                label,
                scores.raw(u, s),
                scores.normalized(u, s)
            )?;
        }
        let combined = scores.combined(u);
        writeln!(w, "{}\t{}\t{}\t{}", graph.node_name(u), COMBINED, combined, combined)?;
    }
    Ok(())
}

/// Ranking table: `rank TAB node TAB score`, best first.
pub fn write_ranking<W: Write>(mut w: W, ranking: &Ranking, top: usize) -> std::io::Result<()> {
    writeln!(w, "# rank\tnode\tscore")?;
    for (i, (node, score)) in ranking.top(top).iter().enumerate() {
        writeln!(w, "{}\t{}\t{}", i + 1, node, score)?;
    }
    Ok(())
}

/// q-q series: `i TAB j` pairs, plot-ready.
pub fn write_qq<W: Write>(mut w: W, series: &QQSeries) -> std::io::Result<()> {
    writeln!(w, "# i\tj")?;
    for &(i, j) in series.pairs() {
        writeln!(w, "{i}\t{j}")?;
    }
    Ok(())
}
