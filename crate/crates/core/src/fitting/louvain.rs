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

//! Multi-level modularity optimization (Louvain).

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::seed::rng_from_seed;

/// Community assignment with its modularity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Dense ids `0..c`, numbered by first appearance in node order.
    pub community: Vec<usize>,
    pub modularity: f64,
}

impl Partition {
    pub fn from_labels(g: &Graph, labels: &[usize]) -> Self {
        let community = densify(labels);
        let modularity = modularity(g, &community);
        Partition {
            community,
            modularity,
        }
    }

    pub fn community_count(&self) -> usize {
        self.community.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count()];
        for &c in &self.community {
            sizes[c] += 1;
        }
        sizes
    }
}

fn densify(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// `Q = sum_c [ e_c / m - (d_c / 2m)^2 ]`; zero for edgeless graphs.
pub fn modularity(g: &Graph, community: &[usize]) -> f64 {
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let c = community.iter().max().map_or(0, |&c| c + 1);
    let mut inner = vec![0.0; c];
    let mut degree = vec![0.0; c];
    for v in 0..g.node_count() {
        degree[community[v]] += g.degree(v) as f64;
    }
    for (u, v) in g.edges() {
        if community[u] == community[v] {
            inner[community[u]] += 1.0;
        }
    }
    inner
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e / m - (d / (2.0 * m)).powi(2))
        .sum()
}

/// Weighted graph used between aggregation levels.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        Level {
            adj: (0..g.node_count())
                .map(|v| g.neighbors(v).iter().map(|&w| (w, 1.0)).collect())
                .collect(),
            self_loops: vec![0.0; g.node_count()],
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn strength(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[v]
    }

    /// Local moves until a full sweep changes nothing. Returns the assignment
    /// and whether any node moved.
    fn local_moves(&self, order: &[usize], two_m: f64) -> (Vec<usize>, bool) {
        let n = self.len();
        let strength: Vec<f64> = (0..n).map(|v| self.strength(v)).collect();
        let mut community: Vec<usize> = (0..n).collect();
        let mut total = strength.clone();
        let mut link_weight = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut moved_any = false;
        loop {
            let mut moved = false;
            for &v in order {
                let home = community[v];
                let kv = strength[v];
                touched.clear();
                for &(w, weight) in &self.adj[v] {
                    let c = community[w];
                    if link_weight[c] == 0.0 {
                        touched.push(c);
                    }
                    link_weight[c] += weight;
                }
                total[home] -= kv;
                let gain = |c: usize, links: f64| links - total[c] * kv / two_m;
                let mut best = home;
                let mut best_gain = gain(home, link_weight[home]);
                for &c in &touched {
                    let g = gain(c, link_weight[c]);
                    if g > best_gain + 1e-12 {
                        best = c;
                        best_gain = g;
                    }
                }
                total[best] += kv;
                if best != home {
                    community[v] = best;
                    moved = true;
                }
                for &c in &touched {
                    link_weight[c] = 0.0;
                }
                link_weight[home] = 0.0;
            }
            if !moved {
                break;
            }
            moved_any = true;
        }
        (community, moved_any)
    }

    fn aggregate(&self, community: &[usize], count: usize) -> Level {
        let mut adj: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); count];
        let mut self_loops = vec![0.0; count];
        for v in 0..self.len() {
            let cv = community[v];
            self_loops[cv] += self.self_loops[v];
            for &(w, weight) in &self.adj[v] {
                let cw = community[w];
                if cv == cw {
                    // Seen from both endpoints.
                    self_loops[cv] += weight / 2.0;
                } else {
                    *adj[cv].entry(cw).or_insert(0.0) += weight;
                }
            }
        }
        Level {
            adj: adj.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loops,
        }
    }
}

/// Louvain community detection at resolution 1. The node sweep order of each
/// level is shuffled by `seed`; the result is deterministic for a given seed.
pub fn louvain(g: &Graph, seed: u64) -> Partition {
    let n = g.node_count();
    let mut assignment: Vec<usize> = (0..n).collect();
    if g.edge_count() == 0 {
        return Partition::from_labels(g, &assignment);
    }
    let two_m = 2.0 * g.edge_count() as f64;
    let mut rng = rng_from_seed(seed);
    let mut level = Level::from_graph(g);
    loop {
        let mut order: Vec<usize> = (0..level.len()).collect();
        order.shuffle(&mut rng);
        let (community, moved) = level.local_moves(&order, two_m);
        if !moved {
            break;
        }
        let dense = densify(&community);
        let count = dense.iter().max().map_or(0, |&c| c + 1);
        for a in assignment.iter_mut() {
            *a = dense[*a];
        }
        level = level.aggregate(&dense, count);
    }
    Partition::from_labels(g, &assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn barbell() -> Graph {
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    }

    /// Best modularity over every partition of a small graph.
    fn brute_force_best(g: &Graph) -> (f64, Vec<usize>) {
        fn rec(
            v: usize,
            labels: &mut Vec<usize>,
            used: usize,
            g: &Graph,
            best: &mut (f64, Vec<usize>),
        ) {
            if v == labels.len() {
                let q = modularity(g, labels);
                if q > best.0 + 1e-12 {
                    *best = (q, labels.clone());
                }
                return;
            }
            for c in 0..=used {
                labels[v] = c;
                rec(v + 1, labels, used.max(c + 1), g, best);
            }
        }
        let mut best = (f64::NEG_INFINITY, Vec::new());
        rec(0, &mut vec![0; g.node_count()], 0, g, &mut best);
        best
    }

    #[test]
    fn splits_barbell_into_triangles() {
        let g = barbell();
        let (best_q, best) = brute_force_best(&g);
        assert_eq!(best, vec![0, 0, 0, 1, 1, 1]);
        for seed in 0..10 {
            let p = louvain(&g, seed);
            assert_eq!(p.community, vec![0, 0, 0, 1, 1, 1]);
            assert!((p.modularity - best_q).abs() < 1e-12);
        }
    }

    #[test]
    fn modularity_reference_values() {
        let g = barbell();
        assert!(modularity(&g, &[0; 6]).abs() < 1e-15);
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert!((modularity(&tri, &[0, 1, 2]) + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn finds_planted_groups() {
        let g = crate::generators::generate_community(&[30, 30, 30], 0.5, 0.01, 7).unwrap();
        let p = louvain(&g, 1);
        assert_eq!(p.community_count(), 3);
        assert!(p.modularity > 0.5);
        assert!(p.modularity <= 1.0);
    }
}
