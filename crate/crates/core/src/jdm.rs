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

//! Joint degree matrices and their graphicality check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Sparse joint degree matrix: `(k, l)` with `k <= l` maps to the number of
/// edges joining a degree-`k` node to a degree-`l` node.
///
/// Degree-zero nodes cannot be recovered from the entries, so their count is
/// carried separately.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "JdmRepr", into = "JdmRepr")]
pub struct JointDegreeMatrix {
    entries: BTreeMap<(usize, usize), usize>,
    isolated: usize,
}

impl JointDegreeMatrix {
    /// Canonicalizes keys to `k <= l`, merges repeats, and drops zero counts.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), usize)>,
    {
        let mut map = BTreeMap::new();
        for ((k, l), count) in entries {
            if count > 0 {
                *map.entry((k.min(l), k.max(l))).or_insert(0) += count;
            }
        }
        JointDegreeMatrix {
            entries: map,
            isolated: 0,
        }
    }

    pub fn with_isolated(mut self, isolated: usize) -> Self {
        self.isolated = isolated;
        self
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.entries
    }

    pub fn get(&self, k: usize, l: usize) -> usize {
        self.entries
            .get(&(k.min(l), k.max(l)))
            .copied()
            .unwrap_or(0)
    }

    pub fn isolated(&self) -> usize {
        self.isolated
    }

    pub fn edge_count(&self) -> usize {
        self.entries.values().sum()
    }

    /// Stub count at each degree: `2 J(k,k) + sum_{l != k} J(k,l)`.
    fn stubs_per_degree(&self) -> BTreeMap<usize, usize> {
        let mut stubs = BTreeMap::new();
        for (&(k, l), &count) in &self.entries {
            if k == l {
                *stubs.entry(k).or_insert(0) += 2 * count;
            } else {
                *stubs.entry(k).or_insert(0) += count;
                *stubs.entry(l).or_insert(0) += count;
            }
        }
        stubs
    }

    /// Node count per degree implied by the entries. `None` if any count is fractional.
    pub fn degree_counts(&self) -> Option<BTreeMap<usize, usize>> {
        validate_jdm(self).degree_counts
    }

    pub fn node_count(&self) -> Option<usize> {
        self.degree_counts().map(|c| c.values().sum())
    }
}

#[derive(Serialize, Deserialize)]
struct JdmRepr {
    /// `[k, l, count]` triples.
    entries: Vec<[usize; 3]>,
    #[serde(default)]
    isolated: usize,
}

impl From<JdmRepr> for JointDegreeMatrix {
    fn from(repr: JdmRepr) -> Self {
        JointDegreeMatrix::from_entries(repr.entries.into_iter().map(|[k, l, c]| ((k, l), c)))
            .with_isolated(repr.isolated)
    }
}

impl From<JointDegreeMatrix> for JdmRepr {
    fn from(jdm: JointDegreeMatrix) -> Self {
        JdmRepr {
            entries: jdm.entries.iter().map(|(&(k, l), &c)| [k, l, c]).collect(),
            isolated: jdm.isolated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JdmViolation {
    ZeroDegreeEntry {
        k: usize,
        l: usize,
    },
    FractionalNodeCount {
        degree: usize,
        stubs: usize,
    },
    TooManyCrossEdges {
        k: usize,
        l: usize,
        count: usize,
        max: usize,
    },
    TooManyInnerEdges {
        k: usize,
        count: usize,
        max: usize,
    },
}

impl std::fmt::Display for JdmViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JdmViolation::ZeroDegreeEntry { k, l } => {
                write!(f, "entry ({k},{l}) involves degree 0")
            }
            JdmViolation::FractionalNodeCount { degree, stubs } => {
                write!(
                    f,
                    "degree {degree} has {stubs} stubs, not a multiple of {degree}"
                )
            }
            JdmViolation::TooManyCrossEdges { k, l, count, max } => {
                write!(f, "entry ({k},{l}) = {count} exceeds n_k*n_l = {max}")
            }
            JdmViolation::TooManyInnerEdges { k, count, max } => {
                write!(f, "entry ({k},{k}) = {count} exceeds n_k(n_k-1)/2 = {max}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JdmValidation {
    pub valid: bool,
    /// Implied node counts, present when every count is integral.
    pub degree_counts: Option<BTreeMap<usize, usize>>,
    pub violations: Vec<JdmViolation>,
}

/// Checks the conditions under which a simple graph with this joint degree
/// matrix exists: integral node counts per degree, `J(k,l) <= n_k n_l`, and
/// `J(k,k) <= C(n_k, 2)`.
pub fn validate_jdm(jdm: &JointDegreeMatrix) -> JdmValidation {
    let mut violations = Vec::new();
    for &(k, l) in jdm.entries.keys() {
        if k == 0 {
            violations.push(JdmViolation::ZeroDegreeEntry { k, l });
        }
    }
    let mut counts = BTreeMap::new();
    let mut integral = violations.is_empty();
    for (degree, stubs) in jdm.stubs_per_degree() {
        if degree == 0 {
            continue;
        }
        if stubs % degree != 0 {
            violations.push(JdmViolation::FractionalNodeCount { degree, stubs });
            integral = false;
        } else {
            counts.insert(degree, stubs / degree);
        }
    }
    if integral {
        for (&(k, l), &count) in &jdm.entries {
            let (nk, nl) = (counts[&k], counts[&l]);
            if k == l {
                let max = nk * (nk - 1) / 2;
                if count > max {
                    violations.push(JdmViolation::TooManyInnerEdges { k, count, max });
                }
            } else if count > nk * nl {
                violations.push(JdmViolation::TooManyCrossEdges {
                    k,
                    l,
                    count,
                    max: nk * nl,
                });
            }
        }
        if jdm.isolated > 0 {
            counts.insert(0, jdm.isolated);
        }
    }
    JdmValidation {
        valid: violations.is_empty(),
        degree_counts: integral.then_some(counts),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_matrix_is_valid() {
        let report = validate_jdm(&JointDegreeMatrix::from_entries([((2, 2), 3)]));
        assert!(report.valid);
        assert_eq!(report.degree_counts.unwrap(), BTreeMap::from([(2, 3)]));
    }

    #[test]
    fn fractional_count_is_invalid() {
        let report = validate_jdm(&JointDegreeMatrix::from_entries([((1, 2), 3)]));
        assert!(!report.valid);
        assert!(report.degree_counts.is_none());
        assert!(report
            .violations
            .contains(&JdmViolation::FractionalNodeCount {
                degree: 2,
                stubs: 3
            }));
    }

    #[test]
    fn two_disjoint_edges() {
        let report = validate_jdm(&JointDegreeMatrix::from_entries([((1, 1), 2)]));
        assert!(report.valid);
        assert_eq!(report.degree_counts.unwrap()[&1], 4);
    }

    #[test]
    fn capacity_violations() {
        // n_3 = 2, which leaves room for a single (3,3) edge.
        let jdm = JointDegreeMatrix::from_entries([((3, 3), 3)]);
        let report = validate_jdm(&jdm);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, JdmViolation::TooManyInnerEdges { .. })));

        let jdm = JointDegreeMatrix::from_entries([((2, 4), 4)]);
        let report = validate_jdm(&jdm);
        // n_2 = 2, n_4 = 1: 4 <= 2 is violated.
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, JdmViolation::TooManyCrossEdges { max: 2, .. })));
    }

    #[test]
    fn keys_are_canonicalized() {
        let jdm = JointDegreeMatrix::from_entries([((3, 1), 2), ((1, 3), 1), ((2, 2), 0)]);
        assert_eq!(jdm.entries().len(), 1);
        assert_eq!(jdm.get(3, 1), 3);
    }

    #[test]
    fn json_round_trip() {
        let jdm = JointDegreeMatrix::from_entries([((1, 2), 2)]).with_isolated(1);
        let text = serde_json::to_string(&jdm).unwrap();
        assert_eq!(text, r#"{"entries":[[1,2,2]],"isolated":1}"#);
        let back: JointDegreeMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, jdm);
    }
}
