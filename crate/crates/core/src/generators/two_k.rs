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

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::generators::ModelParams;
use crate::graph::{Graph, GraphBuilder};
use crate::jdm::JointDegreeMatrix;
use crate::seed::{rng_from_seed, Rng};

struct Wiring {
    b: GraphBuilder,
    /// Stubs still free on each node.
    residual: Vec<usize>,
    /// Nodes with free stubs, per target degree.
    unsaturated: BTreeMap<usize, BTreeSet<usize>>,
    degree: Vec<usize>,
}

impl Wiring {
    /// Moves one edge off the saturated node `v` onto a same-degree node with a
    /// free stub, leaving the joint degree matrix of the wired edges unchanged.
    fn neighbour_switch(&mut self, v: usize, avoid: Option<usize>) -> Result<()> {
        let k = self.degree[v];
        let avoid = avoid.filter(|&a| self.residual[a] <= 1);
        let partner = self.unsaturated[&k]
            .iter()
            .copied()
            .find(|&w| w != v && Some(w) != avoid)
            .ok_or_else(|| {
                Error::Construction(format!(
                    "no degree-{k} node with a free stub to switch with"
                ))
            })?;
        let moved = self
            .b
            .neighbors(v)
            .iter()
            .copied()
            .find(|&t| t != partner && !self.b.has_edge(partner, t))
            .ok_or_else(|| Error::Construction(format!("node {v} has no switchable neighbour")))?;
        self.b.remove_edge(v, moved);
        self.b.add_edge_unchecked(partner, moved);
        self.residual[v] += 1;
        self.unsaturated.get_mut(&k).unwrap().insert(v);
        self.consume(partner);
        Ok(())
    }

    fn consume(&mut self, v: usize) {
        self.residual[v] -= 1;
        if self.residual[v] == 0 {
            self.unsaturated
                .get_mut(&self.degree[v])
                .unwrap()
                .remove(&v);
        }
    }

    fn connect(&mut self, v: usize, w: usize) -> Result<()> {
        if self.residual[v] == 0 {
            self.neighbour_switch(v, None)?;
        }
        if self.residual[w] == 0 {
            self.neighbour_switch(w, Some(v))?;
        }
        self.b.add_edge_unchecked(v, w);
        self.consume(v);
        self.consume(w);
        Ok(())
    }
}

/// Picks a random non-adjacent pair `(v, w)` from the two node groups, falling
/// back to enumeration once rejection sampling stalls.
fn pick_pair(
    b: &GraphBuilder,
    left: &[usize],
    right: &[usize],
    rng: &mut Rng,
) -> Option<(usize, usize)> {
    let limit = 64 + 4 * left.len() * right.len();
    for _ in 0..limit {
        let v = left[rng.random_range(0..left.len())];
        let w = right[rng.random_range(0..right.len())];
        if v != w && !b.has_edge(v, w) {
            return Some((v, w));
        }
    }
    let open: Vec<(usize, usize)> = left
        .iter()
        .flat_map(|&v| right.iter().map(move |&w| (v, w)))
        .filter(|&(v, w)| v < w || (v > w && !left.contains(&w)))
        .filter(|&(v, w)| v != w && !b.has_edge(v, w))
        .collect();
    if open.is_empty() {
        None
    } else {
        Some(open[rng.random_range(0..open.len())])
    }
}

/// Random simple graph whose joint degree matrix equals `jdm` exactly.
///
/// Nodes are laid out in increasing degree order. Degree classes `(k, l)` are
/// wired in decreasing `k + l`; for each required edge a random non-adjacent
/// pair is drawn from the two classes, and a saturated endpoint first gives up
/// an edge to a same-degree node through a neighbour switch.
pub fn generate_2k(jdm: &JointDegreeMatrix, seed: u64) -> Result<Graph> {
    ModelParams::TwoK { jdm: jdm.clone() }.validate()?;
    let counts = jdm
        .degree_counts()
        .expect("validated matrices have integral counts");
    let mut degree = Vec::new();
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&k, &count) in &counts {
        for _ in 0..count {
            members.entry(k).or_default().push(degree.len());
            degree.push(k);
        }
    }
    let n = degree.len();
    let mut unsaturated: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (&k, nodes) in &members {
        if k > 0 {
            unsaturated.insert(k, nodes.iter().copied().collect());
        }
    }
    let mut wiring = Wiring {
        b: GraphBuilder::new(n),
        residual: degree.clone(),
        unsaturated,
        degree,
    };

    let mut classes: Vec<((usize, usize), usize)> = jdm
        .entries()
        .iter()
        .map(|(&key, &count)| (key, count))
        .collect();
    classes.sort_by_key(|&((k, l), _)| (Reverse(k + l), k, l));

    let mut rng = rng_from_seed(seed);
    for ((k, l), count) in classes {
        let left = &members[&k];
        let right = &members[&l];
        for _ in 0..count {
            let (v, w) = pick_pair(&wiring.b, left, right, &mut rng).ok_or_else(|| {
                Error::Construction(format!("class ({k},{l}) has no open pair left"))
            })?;
            wiring.connect(v, w)?;
        }
    }
    if wiring.residual.iter().any(|&r| r != 0) {
        return Err(Error::Construction("stubs left unmatched".into()));
    }
    Ok(wiring.b.build())
}
