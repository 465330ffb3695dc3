//! Labeled undirected simple graphs, with the text/JSON file formats and DOT
//! export.
//!
//! Vertex ids are dense and assigned in label insertion order. Labels are the
//! stable external identity of a vertex; gadget builders rely on them to find
//! their structure again after embedding.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::GraphError;

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    adjacency: Vec<VertexSet>,
    closed: Vec<VertexSet>,
}

impl Graph {
    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<VertexId, GraphError> {
        self.id(label)
            .ok_or_else(|| GraphError::UnknownLabel(label.to_string()))
    }

    pub fn ids<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<VertexId>, GraphError> {
        labels.iter().map(|l| self.require(l.as_ref())).collect()
    }

    pub fn labels_of<I: IntoIterator<Item = VertexId>>(&self, ids: I) -> Vec<String> {
        ids.into_iter().map(|v| self.labels[v].clone()).collect()
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n())
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Open neighborhood. Panics on an out-of-range id.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &VertexSet {
        &self.adjacency[v]
    }

    /// `N[v]`. Panics on an out-of-range id; see [`Graph::closed_neighborhood`].
    #[inline]
    pub fn closed(&self, v: VertexId) -> &VertexSet {
        &self.closed[v]
    }

    /// `N[v] = {v} ∪ N(v)`.
    pub fn closed_neighborhood(&self, v: VertexId) -> Result<&VertexSet, GraphError> {
        self.check(v)?;
        Ok(&self.closed[v])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && self.adjacency[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.adjacency[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// `N[S]`, the set of vertices dominated by `s`.
    pub fn closed_neighborhood_of_set(&self, s: &VertexSet) -> VertexSet {
        let mut out = self.empty_set();
        for v in s {
            out.union_with(&self.closed[v]);
        }
        out
    }

    /// Whether the subgraph induced on `s` is connected. The empty set and
    /// singletons count as connected.
    pub fn is_connected_induced(&self, s: &VertexSet) -> Result<bool, GraphError> {
        if s.capacity() != self.n() {
            return Err(GraphError::SetCapacity { capacity: s.capacity(), n: self.n() });
        }
        let Some(start) = s.first() else {
            return Ok(true);
        };
        let mut seen = self.empty_set();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for w in &self.adjacency[u] {
                if s.contains(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        Ok(seen.len() == s.len())
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_induced(&self.all_vertices()).unwrap_or(false)
    }

    /// Breadth-first distances from `sources` through vertices of `allowed`.
    /// Unreachable vertices get `usize::MAX`.
    pub fn distances_within(&self, sources: &VertexSet, allowed: &VertexSet) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        for s in sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            for w in &self.adjacency[u] {
                if dist[w] == usize::MAX && allowed.contains(w) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Text form: `n <count>`, `v <id> <label>` lines, `e <label> <label>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n());
        for (id, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "v {id} {label}");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {} {}", self.labels[u], self.labels[v]);
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            labels: self.labels.clone(),
            edges: self
                .edges()
                .map(|(u, v)| [self.labels[u].clone(), self.labels[v].clone()])
                .collect(),
        }
    }

    /// Parses either the line-based text format or the JSON document form.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        if text.trim_start().starts_with('{') {
            let doc: GraphJson = serde_json::from_str(text)
                .map_err(|e| GraphError::Parse { line: e.line(), message: e.to_string() })?;
            Graph::from_json(&doc)
        } else {
            parse_text(text)
        }
    }

    pub fn from_json(doc: &GraphJson) -> Result<Graph, GraphError> {
        let mut b = GraphBuilder::new();
        for label in &doc.labels {
            b.add_vertex(label)?;
        }
        for [x, y] in &doc.edges {
            let u = b.require(x)?;
            let v = b.require(y)?;
            if b.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(x.clone(), y.clone()));
            }
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    /// Graphviz rendering with optional highlight classes.
    pub fn to_dot(&self, highlights: &DotHighlights) -> String {
        let mut out = String::from("graph {\n  node [shape=circle, style=filled, fillcolor=white];\n");
        for (v, label) in self.labels.iter().enumerate() {
            let played_at = highlights
                .played
                .iter()
                .position(|&p| p == v)
                .map(|i| i + 1);
            let attrs = if let Some(order) = played_at {
                format!(" [class=\"played\", fillcolor=\"#d62728\", xlabel=\"{order}\"]")
            } else if highlights.dominated.as_ref().is_some_and(|d| d.contains(v)) {
                " [class=\"dominated\", fillcolor=\"#bbbbbb\"]".to_string()
            } else {
                String::new()
            };
            let _ = writeln!(out, "  {}{attrs};", dot_id(label));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {} -- {};", dot_id(&self.labels[u]), dot_id(&self.labels[v]));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Highlights for [`Graph::to_dot`]. Played vertices are also annotated with
/// their move number.
#[derive(Clone, Debug, Default)]
pub struct DotHighlights {
    pub played: Vec<VertexId>,
    pub dominated: Option<VertexSet>,
}

/// The JSON graph document: `{"labels":[...],"edges":[["a","b"],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub labels: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

fn parse_text(text: &str) -> Result<Graph, GraphError> {
    let err = |line: usize, message: &str| GraphError::Parse { line, message: message.to_string() };
    let mut declared: Option<usize> = None;
    let mut slots: Vec<Option<String>> = Vec::new();
    let mut builder: Option<GraphBuilder> = None;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        match tag {
            "n" => {
                if declared.is_some() {
                    return Err(err(lineno, "duplicate `n` line"));
                }
                let [count] = rest[..] else {
                    return Err(err(lineno, "expected `n <count>`"));
                };
                let count: usize = count.parse().map_err(|_| err(lineno, "vertex count is not an integer"))?;
                declared = Some(count);
                slots = vec![None; count];
            }
            "v" => {
                let count = declared.ok_or_else(|| err(lineno, "`v` before `n`"))?;
                if builder.is_some() {
                    return Err(err(lineno, "`v` after the first `e` line"));
                }
                let [id, label] = rest[..] else {
                    return Err(err(lineno, "expected `v <id> <label>`"));
                };
                let id: usize = id.parse().map_err(|_| err(lineno, "vertex id is not an integer"))?;
                if id >= count {
                    return Err(err(lineno, &format!("vertex id {id} out of range 0..{count}")));
                }
                if slots[id].is_some() {
                    return Err(err(lineno, &format!("vertex id {id} declared twice")));
                }
                slots[id] = Some(label.to_string());
            }
            "e" => {
                if builder.is_none() {
                    builder = Some(vertices_from_slots(&slots, declared, lineno)?);
                }
                let b = builder.as_mut().expect("initialized above");
                let [x, y] = rest[..] else {
                    return Err(err(lineno, "expected `e <label> <label>`"));
                };
                let located = |e: GraphError| GraphError::Parse { line: lineno, message: e.to_string() };
                let u = b.require(x).map_err(located)?;
                let v = b.require(y).map_err(located)?;
                if u == v {
                    return Err(GraphError::Parse {
                        line: lineno,
                        message: GraphError::SelfLoop(x.to_string()).to_string(),
                    });
                }
                if b.has_edge(u, v) {
                    return Err(err(lineno, &format!("duplicate edge {x} {y}")));
                }
                b.add_edge(u, v).map_err(located)?;
            }
            other => return Err(err(lineno, &format!("unknown line tag `{other}`"))),
        }
    }
    let end = text.lines().count();
    match builder {
        Some(b) => Ok(b.build()),
        None => Ok(vertices_from_slots(&slots, declared, end)?.build()),
    }
}

fn vertices_from_slots(
    slots: &[Option<String>],
    declared: Option<usize>,
    lineno: usize,
) -> Result<GraphBuilder, GraphError> {
    if declared.is_none() {
        return Err(GraphError::Parse { line: lineno, message: "missing `n <count>` line".into() });
    }
    let mut b = GraphBuilder::new();
    for (id, slot) in slots.iter().enumerate() {
        let label = slot.as_ref().ok_or_else(|| GraphError::Parse {
            line: lineno,
            message: format!("vertex id {id} was never declared"),
        })?;
        b.add_vertex(label).map_err(|e| GraphError::Parse { line: lineno, message: e.to_string() })?;
    }
    Ok(b)
}

/// Incremental construction. Edges are stored as label-independent ids, so
/// vertices must exist before edges referencing them.
#[derive(Default, Clone, Debug)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Vec<VertexId>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: &str) -> Result<VertexId, GraphError> {
        if label.is_empty() || label.chars().any(char::is_whitespace) {
            return Err(GraphError::InvalidLabel(label.to_string()));
        }
        if self.index.contains_key(label) {
            return Err(GraphError::DuplicateLabel(label.to_string()));
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        self.edges.push(Vec::new());
        Ok(id)
    }

    pub fn require(&self, label: &str) -> Result<VertexId, GraphError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| GraphError::UnknownLabel(label.to_string()))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges[u].contains(&v)
    }

    /// Adds `uv`; repeated edges are ignored.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let n = self.labels.len();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.labels[u].clone()));
        }
        if !self.has_edge(u, v) {
            self.edges[u].push(v);
            self.edges[v].push(u);
        }
        Ok(())
    }

    pub fn add_edge_by_label(&mut self, x: &str, y: &str) -> Result<(), GraphError> {
        let u = self.require(x)?;
        let v = self.require(y)?;
        self.add_edge(u, v)
    }

    pub fn build(self) -> Graph {
        let n = self.labels.len();
        let adjacency: Vec<VertexSet> = self
            .edges
            .iter()
            .map(|nbrs| VertexSet::from_iter_with_capacity(n, nbrs.iter().copied()))
            .collect();
        let closed = adjacency
            .iter()
            .enumerate()
            .map(|(v, a)| {
                let mut c = a.clone();
                c.insert(v);
                c
            })
            .collect();
        Graph { labels: self.labels, index: self.index, adjacency, closed }
    }
}

/// Builds a graph from labels and label pairs. Convenience for tests and
/// small hand-written fixtures.
pub fn graph_from_edges(labels: &[&str], edges: &[(&str, &str)]) -> Result<Graph, GraphError> {
    let mut b = GraphBuilder::new();
    for l in labels {
        b.add_vertex(l)?;
    }
    for (x, y) in edges {
        b.add_edge_by_label(x, y)?;
    }
    Ok(b.build())
}

/// Path on the given labels, in order.
pub fn path(labels: &[&str]) -> Graph {
    let edges: Vec<_> = labels.windows(2).map(|w| (w[0], w[1])).collect();
    graph_from_edges(labels, &edges).expect("path labels must be distinct")
}
