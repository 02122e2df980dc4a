// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Simple undirected graphs, edge-list ingestion, and traversal primitives.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Immutable simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Graph on `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
            labels: None,
        }
    }

    /// Builds a graph from an edge iterator, dropping self-loops and duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut builder = GraphBuilder::new(n);
        for (u, v) in edges {
            builder.add_edge(u, v);
        }
        builder.build()
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Original node label, or the numeric id for generated graphs.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(labels) => labels[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn connected_components(&self) -> ComponentLabeling {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut component_sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = component_sizes.len();
            label[start] = id;
            queue.push_back(start);
            let mut size = 0;
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &w in &self.adjacency[v] {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            component_sizes.push(size);
        }
        ComponentLabeling {
            label,
            component_sizes,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.connected_components().component_sizes.len() == 1
    }

    /// Copy with nodes renamed by `perm` (old id `v` becomes `perm[v]`).
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.node_count());
        Graph::from_edges(
            self.node_count(),
            self.edges().map(|(u, v)| (perm[u], perm[v])),
        )
    }

    /// Serializes as one `u v` line per edge, using original labels when present.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.label(u), self.label(v));
        }
        out
    }
}

/// Per-node component ids with the size of each component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub label: Vec<usize>,
    pub component_sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.component_sizes.len()
    }
}

/// Mutable graph used by the generators. Rejects self-loops and parallel edges.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn add_node(&mut self) -> usize {
        self.adjacency.push(Vec::new());
        self.adjacency.len() - 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].contains(&b)
    }

    /// Returns `true` when the edge was inserted.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || self.has_edge(u, v) {
            return false;
        }
        self.add_edge_unchecked(u, v);
        true
    }

    /// Caller guarantees `u != v` and that the edge is absent.
    pub fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        self.edge_count += 1;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        let Some(i) = self.adjacency[u].iter().position(|&x| x == v) else {
            return false;
        };
        self.adjacency[u].swap_remove(i);
        let j = self.adjacency[v]
            .iter()
            .position(|&x| x == u)
            .expect("adjacency is symmetric");
        self.adjacency[v].swap_remove(j);
        self.edge_count -= 1;
        true
    }

    pub fn build(self) -> Graph {
        let mut adjacency = self.adjacency;
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Graph {
            adjacency,
            edge_count: self.edge_count,
            labels: None,
        }
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

/// Parses whitespace-separated edge-list text into a simple graph.
///
/// Self-loops and repeated edges are dropped, columns past the second are
/// ignored, and node tokens get dense ids in order of first appearance.
/// Nodes that only occur in self-loops do not survive.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut names: Vec<&str> = Vec::new();
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected two node tokens, found {line:?}"),
            });
        };
        let mut intern = |tok| {
            *ids.entry(tok).or_insert_with(|| {
                names.push(tok);
                names.len() - 1
            })
        };
        let u = intern(a);
        let v = intern(b);
        if u != v {
            pairs.push((u, v));
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut keep = vec![false; names.len()];
    for &(u, v) in &pairs {
        keep[u] = true;
        keep[v] = true;
    }
    let mut remap = vec![usize::MAX; names.len()];
    let mut labels = Vec::new();
    for (old, name) in names.iter().enumerate() {
        if keep[old] {
            remap[old] = labels.len();
            labels.push((*name).to_string());
        }
    }
    let mut graph = Graph::from_edges(
        labels.len(),
        pairs.into_iter().map(|(u, v)| (remap[u], remap[v])),
    );
    graph.labels = Some(labels);
    Ok(graph)
}
