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

mod common;

use netfit::classify::{roc_auc, stratified_kfold};
use netfit::dataset::{DatasetRow, DatasetTable, Domain, Subcategory};
use netfit::generators::{generate_2k, validate_jdm};
use netfit::gof::canberra_distance;
use netfit::metrics::{feature_vector, joint_degree_matrix};
use netfit::stability::summarize;
use netfit::{parse_edge_list, Graph};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 1..(3 * n))
            .prop_map(move |edges| Graph::from_edges(n, edges))
    })
}

fn with_edge(g: Graph) -> Option<Graph> {
    (g.edge_count() > 0).then_some(g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graphs_are_simple_and_symmetric(g in graph_strategy(30)) {
        let mut ends = 0;
        for v in 0..g.node_count() {
            let nb = g.neighbors(v);
            prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!nb.contains(&v));
            for &u in nb {
                prop_assert!(g.has_edge(u, v));
            }
            ends += nb.len();
        }
        prop_assert_eq!(ends, 2 * g.edge_count());
        let sizes = g.connected_components().component_sizes;
        prop_assert_eq!(sizes.iter().sum::<usize>(), g.node_count());
    }

    #[test]
    fn edge_list_round_trip(g in graph_strategy(25).prop_filter_map("needs an edge", with_edge)) {
        let h = parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(h.edge_count(), g.edge_count());
        for (u, v) in h.edges() {
            let a: usize = h.label(u).parse().unwrap();
            let b: usize = h.label(v).parse().unwrap();
            prop_assert!(g.has_edge(a, b));
        }
    }

    #[test]
    fn metrics_match_oracles(g in graph_strategy(20).prop_filter_map("needs an edge", with_edge)) {
        let got = feature_vector::<f64>(&g).unwrap().topology();
        let want = common::oracle_topology(&g);
        for k in 0..7 {
            prop_assert!((got[k] - want[k]).abs() < 1e-8, "metric {}: {} vs {}", k, got[k], want[k]);
        }
    }

    #[test]
    fn metrics_ignore_node_ids(
        g in graph_strategy(25).prop_filter_map("needs an edge", with_edge),
        seed in any::<u64>(),
    ) {
        let n = g.node_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = feature_vector::<f64>(&g).unwrap().topology();
        let b = feature_vector::<f64>(&g.relabeled(&perm)).unwrap().topology();
        for k in 0..7 {
            prop_assert!((a[k] - b[k]).abs() < 1e-9, "metric {}: {} vs {}", k, a[k], b[k]);
        }
    }

    #[test]
    fn jdm_of_a_graph_is_valid_and_reproducible(
        g in graph_strategy(30).prop_filter_map("needs an edge", with_edge),
        seed in any::<u64>(),
    ) {
        let jdm = joint_degree_matrix(&g);
        prop_assert!(validate_jdm(&jdm).valid);
        let h = generate_2k(&jdm, seed).unwrap();
        prop_assert_eq!(joint_degree_matrix(&h), jdm);
    }

    #[test]
    fn canberra_is_a_bounded_symmetric_distance(
        pair in (1usize..10).prop_flat_map(|d| (
            prop::collection::vec(-5.0f64..5.0, d),
            prop::collection::vec(-5.0f64..5.0, d),
        ))
    ) {
        let (x, y) = pair;
        let d = canberra_distance(&x, &y).unwrap();
        prop_assert!(d >= 0.0 && d <= x.len() as f64);
        prop_assert_eq!(d, canberra_distance(&y, &x).unwrap());
        prop_assert_eq!(canberra_distance(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn auc_complement_and_monotone_invariance(
        scores in prop::collection::hash_set(-1000i32..1000, 4..40),
        flips in prop::collection::vec(any::<bool>(), 40),
    ) {
        let scores: Vec<f64> = scores.into_iter().map(|s| s as f64 / 10.0).collect();
        let mut labels: Vec<bool> = flips[..scores.len()].to_vec();
        labels[0] = true;
        labels[1] = false;
        let auc = roc_auc(&scores, &labels).unwrap();
        prop_assert!((0.0..=1.0).contains(&auc));
        let negated: Vec<f64> = scores.iter().map(|s| -s).collect();
        prop_assert!((auc + roc_auc(&negated, &labels).unwrap() - 1.0).abs() < 1e-12);
        let warped: Vec<f64> = scores.iter().map(|s| (s / 50.0).exp() * 3.0 + 1.0).collect();
        prop_assert_eq!(auc, roc_auc(&warped, &labels).unwrap());
    }

    #[test]
    fn folds_partition_and_stratify(
        labels in prop::collection::vec(0usize..4, 6..60),
        k in 2usize..6,
        seed in any::<u64>(),
    ) {
        let folds = stratified_kfold(&labels, k, seed).unwrap();
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
        for c in 0..4 {
            let counts: Vec<usize> = folds.iter().map(|f| f.iter().filter(|&&i| labels[i] == c).count()).collect();
            prop_assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
        }
    }

    #[test]
    fn summaries_are_ordered(values in prop::collection::vec(-1e6f64..1e6, 2..50)) {
        let s = summarize(&values).unwrap();
        prop_assert!(s.min <= s.q1 && s.q1 <= s.median && s.median <= s.q3 && s.q3 <= s.max);
        prop_assert!(s.std >= 0.0);
        prop_assert!(s.min <= s.mean && s.mean <= s.max);
    }

    #[test]
    fn dataset_csv_round_trip(
        g in graph_strategy(15).prop_filter_map("needs an edge", with_edge),
        domain in 0usize..4,
        sub in 0usize..7,
    ) {
        let fv = feature_vector::<f64>(&g).unwrap();
        let table = DatasetTable::from_rows(vec![
            DatasetRow::new("g", fv).labeled(Domain::ALL[domain], Subcategory::ALL[sub]),
            DatasetRow::new("h", fv),
        ]).unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        prop_assert_eq!(DatasetTable::<f64>::read_csv(&buf[..]).unwrap(), table);
    }
}
