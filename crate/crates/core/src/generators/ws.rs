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

use rand::Rng as _;

use crate::error::Result;
use crate::generators::ModelParams;
use crate::graph::{Graph, GraphBuilder};
use crate::seed::rng_from_seed;

/// Watts-Strogatz: a ring where each node links its `k/2` nearest neighbours on
/// each side, then every edge independently has its second endpoint moved to a
/// uniformly chosen node with probability `p`.
///
/// The replacement never creates a self-loop or a parallel edge; when the first
/// endpoint is already linked to everyone the edge stays put. The edge count is
/// always `n * k / 2`.
pub fn generate_ws(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    ModelParams::Ws { n, k, p }.validate()?;
    let half = k / 2;
    let mut rng = rng_from_seed(seed);
    let mut b = GraphBuilder::new(n);
    for offset in 1..=half {
        for u in 0..n {
            b.add_edge_unchecked(u, (u + offset) % n);
        }
    }
    for offset in 1..=half {
        for u in 0..n {
            let v = (u + offset) % n;
            if rng.random::<f64>() >= p {
                continue;
            }
            if !b.has_edge(u, v) || b.degree(u) >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !b.has_edge(u, w) {
                    break w;
                }
            };
            b.remove_edge(u, v);
            b.add_edge_unchecked(u, w);
        }
    }
    Ok(b.build())
}
