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

use std::collections::BTreeSet;

use rand::Rng as _;

use crate::error::Result;
use crate::generators::ModelParams;
use crate::graph::{Graph, GraphBuilder};
use crate::seed::{rng_from_seed, Rng};

/// Clustered preferential attachment (Holme-Kim).
///
/// Starts from a complete graph on `m` nodes. Each newcomer adds `m` edges:
/// the first by preferential attachment, each later one by triad formation
/// with probability `p` (linking to a neighbour of an earlier attachment
/// target) and by preferential attachment otherwise. The result has
/// `m(m-1)/2 + (n-m)m` edges.
pub fn generate_cba(n: usize, m: usize, p: f64, seed: u64) -> Result<Graph> {
    ModelParams::Cba { n, m, p }.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut b = GraphBuilder::new(n);
    // Node `v` appears once per incident edge end.
    let mut pool: Vec<usize> = Vec::with_capacity(2 * (m * m + n * m));
    for u in 0..m {
        for v in u + 1..m {
            b.add_edge_unchecked(u, v);
            pool.push(u);
            pool.push(v);
        }
    }
    let mut linked = Vec::with_capacity(m);
    let mut attached = Vec::with_capacity(m);
    for v in m..n {
        linked.clear();
        attached.clear();
        for link in 0..m {
            let mut target = None;
            if link > 0 && rng.random::<f64>() < p {
                let candidates: BTreeSet<usize> = attached
                    .iter()
                    .flat_map(|&u| b.neighbors(u).iter().copied())
                    .filter(|&w| w != v && !linked.contains(&w))
                    .collect();
                if !candidates.is_empty() {
                    let idx = rng.random_range(0..candidates.len());
                    target = candidates.into_iter().nth(idx);
                }
            }
            let target = match target {
                Some(t) => t,
                None => {
                    let t = preferential_pick(&pool, v, &linked, &mut rng);
                    attached.push(t);
                    t
                }
            };
            b.add_edge_unchecked(v, target);
            linked.push(target);
        }
        for &t in &linked {
            pool.push(t);
            pool.push(v);
        }
    }
    Ok(b.build())
}

/// Degree-proportional choice among existing nodes `0..v` not yet linked.
fn preferential_pick(pool: &[usize], v: usize, linked: &[usize], rng: &mut Rng) -> usize {
    if pool.is_empty() {
        // Only reachable for m = 1 before the first edge exists.
        return rng.random_range(0..v);
    }
    loop {
        let t = pool[rng.random_range(0..pool.len())];
        if !linked.contains(&t) {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::average_clustering;

    fn triangles(g: &Graph) -> usize {
        g.edges()
            .map(|(u, v)| {
                g.neighbors(u)
                    .iter()
                    .filter(|&&w| w > v && g.has_edge(v, w))
                    .count()
            })
            .sum()
    }

    #[test]
    fn m1_grows_trees() {
        for seed in 0..100 {
            let g = generate_cba(5, 1, 0.7, seed).unwrap();
            assert_eq!(g.edge_count(), 4);
            assert!(g.is_connected());
            assert_eq!(triangles(&g), 0);
        }
    }

    #[test]
    fn three_nodes_m2_is_triangle() {
        for p in [0.0, 0.5, 1.0] {
            let g = generate_cba(3, 2, p, 4).unwrap();
            assert_eq!(g, Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]));
        }
    }

    #[test]
    fn edge_count_closed_form() {
        for (n, m) in [(10, 1), (50, 2), (80, 3), (30, 5)] {
            let g = generate_cba(n, m, 0.5, 8).unwrap();
            assert_eq!(g.node_count(), n);
            assert_eq!(g.edge_count(), m * (m - 1) / 2 + (n - m) * m);
        }
    }

    #[test]
    fn triad_formation_raises_clustering() {
        let mean = |p: f64| -> f64 {
            (0..30)
                .map(|s| average_clustering::<f64>(&generate_cba(50, 2, p, s).unwrap()))
                .sum::<f64>()
                / 30.0
        };
        assert!(mean(1.0) > mean(0.0));
    }
}
