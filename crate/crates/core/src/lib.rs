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

//! Fit generative network models to real graphs, generate synthetic
//! counterparts, and compare them through a small set of topological metrics.
//!
//! The pipeline: parse an edge list ([`graph`]), measure it ([`metrics`]),
//! fit the Watts-Strogatz, clustered Barabasi-Albert, duplication-divergence,
//! community and 2K models ([`fitting`]), generate counterparts
//! ([`generators`]), then score goodness of fit ([`gof`]), replicate stability
//! ([`stability`]) and real-versus-model classification ([`classify`]).
//!
//! Numeric routines are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix them to `f64`, which is what the command-line tool uses.

pub mod classify;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod fitting;
pub mod generators;
pub mod gof;
pub mod graph;
pub mod jdm;
pub mod linalg;
pub mod metrics;
pub mod pipeline;
pub mod scalar;
pub mod seed;
pub mod stability;
pub mod synthetic;

pub use error::{Error, Result};
pub use graph::{parse_edge_list, ComponentLabeling, Graph, GraphBuilder};
pub use jdm::JointDegreeMatrix;
pub use scalar::Scalar;

pub type FeatureVector = metrics::FeatureVector<f64>;
pub type DatasetRow = dataset::DatasetRow<f64>;
pub type DatasetTable = dataset::DatasetTable<f64>;
pub type LabeledDataset = classify::LabeledDataset<f64>;
pub type TreeModel = classify::TreeModel<f64>;
pub type ForestModel = classify::ForestModel<f64>;
pub type StabilitySummary = stability::StabilitySummary<f64>;
pub type DistanceMatrix = gof::DistanceMatrix<f64>;
pub type CorrelationMatrix = gof::CorrelationMatrix<f64>;
pub type PcaResult = gof::PcaResult<f64>;
