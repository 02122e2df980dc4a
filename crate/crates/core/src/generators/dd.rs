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

use crate::error::{Error, Result};
use crate::generators::ModelParams;
use crate::graph::{Graph, GraphBuilder};
use crate::seed::rng_from_seed;

/// Failed duplications allowed per target node before giving up.
const RETRY_BUDGET_PER_NODE: usize = 10_000;

/// Duplication-divergence, grown from a single edge.
///
/// A uniformly chosen node is copied together with its links; each copied link
/// survives with probability `p`, and a copy with no surviving link is discarded.
pub fn generate_dd(n: usize, p: f64, seed: u64) -> Result<Graph> {
    ModelParams::Dd { n, p }.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut b = GraphBuilder::new(2);
    b.add_edge_unchecked(0, 1);
    let budget = RETRY_BUDGET_PER_NODE * n;
    let mut failures = 0;
    let mut kept = Vec::new();
    while b.node_count() < n {
        let target = rng.random_range(0..b.node_count());
        kept.clear();
        for &w in b.neighbors(target) {
            if rng.random::<f64>() < p {
                kept.push(w);
            }
        }
        if kept.is_empty() {
            failures += 1;
            if failures > budget {
                return Err(Error::Construction(format!(
                    "duplication-divergence exceeded {budget} failed duplications"
                )));
            }
            continue;
        }
        let replica = b.add_node();
        for &w in &kept {
            b.add_edge_unchecked(replica, w);
        }
    }
    Ok(b.build())
}
