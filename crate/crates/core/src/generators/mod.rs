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

//! Seeded random graph generators.

mod cba;
mod community;
mod dd;
mod two_k;
mod ws;

pub use cba::generate_cba;
pub use community::generate_community;
pub use dd::generate_dd;
pub use two_k::generate_2k;
pub use ws::generate_ws;

pub use crate::jdm::{validate_jdm, JdmValidation, JdmViolation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::jdm::JointDegreeMatrix;

/// Parameters of one of the five generative models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params")]
pub enum ModelParams {
    /// Watts-Strogatz ring of `n` nodes with `k` (even) initial neighbours per node.
    #[serde(rename = "WS")]
    Ws { n: usize, k: usize, p: f64 },
    /// Holme-Kim clustered preferential attachment.
    #[serde(rename = "CBA")]
    Cba { n: usize, m: usize, p: f64 },
    /// Duplication-divergence.
    #[serde(rename = "DD")]
    Dd { n: usize, p: f64 },
    /// Planted partition with arbitrary group sizes.
    #[serde(rename = "Com")]
    Community {
        sizes: Vec<usize>,
        p_in: f64,
        p_out: f64,
    },
    #[serde(rename = "2K")]
    TwoK { jdm: JointDegreeMatrix },
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Param(format!("{name} = {p} is not in [0, 1]")))
    }
}

impl ModelParams {
    pub fn model_name(&self) -> &'static str {
        match self {
            ModelParams::Ws { .. } => "WS",
            ModelParams::Cba { .. } => "CBA",
            ModelParams::Dd { .. } => "DD",
            ModelParams::Community { .. } => "Com",
            ModelParams::TwoK { .. } => "2K",
        }
    }

    /// Number of nodes the generated graph will have, if the parameters are valid.
    pub fn node_count(&self) -> Option<usize> {
        match self {
            ModelParams::Ws { n, .. } | ModelParams::Cba { n, .. } | ModelParams::Dd { n, .. } => {
                Some(*n)
            }
            ModelParams::Community { sizes, .. } => Some(sizes.iter().sum()),
            ModelParams::TwoK { jdm } => jdm.node_count(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::Ws { n, k, p } => {
                if *k < 2 || k % 2 != 0 || k >= n {
                    return Err(Error::Param(format!(
                        "WS needs an even K with 2 <= K < n (K = {k}, n = {n})"
                    )));
                }
                check_probability("p", *p)
            }
            ModelParams::Cba { n, m, p } => {
                if *m < 1 || m >= n {
                    return Err(Error::Param(format!(
                        "CBA needs 1 <= m < n (m = {m}, n = {n})"
                    )));
                }
                check_probability("p", *p)
            }
            ModelParams::Dd { n, p } => {
                if *n < 2 {
                    return Err(Error::Param(format!("DD needs n >= 2 (n = {n})")));
                }
                if !(*p > 0.0 && *p <= 1.0) {
                    return Err(Error::Param(format!("DD needs p in (0, 1] (p = {p})")));
                }
                Ok(())
            }
            ModelParams::Community { sizes, p_in, p_out } => {
                if sizes.is_empty() || sizes.contains(&0) {
                    return Err(Error::Param(
                        "community sizes must be non-empty and positive".into(),
                    ));
                }
                check_probability("p_in", *p_in)?;
                check_probability("p_out", *p_out)
            }
            ModelParams::TwoK { jdm } => {
                let report = validate_jdm(jdm);
                if report.valid {
                    Ok(())
                } else {
                    let reasons: Vec<String> =
                        report.violations.iter().map(ToString::to_string).collect();
                    Err(Error::Param(format!(
                        "joint degree matrix is not graphical: {}",
                        reasons.join("; ")
                    )))
                }
            }
        }
    }
}

/// Generates one graph from `params` with the given seed.
pub fn generate(params: &ModelParams, seed: u64) -> Result<Graph> {
    match params {
        ModelParams::Ws { n, k, p } => generate_ws(*n, *k, *p, seed),
        ModelParams::Cba { n, m, p } => generate_cba(*n, *m, *p, seed),
        ModelParams::Dd { n, p } => generate_dd(*n, *p, seed),
        ModelParams::Community { sizes, p_in, p_out } => {
            generate_community(sizes, *p_in, *p_out, seed)
        }
        ModelParams::TwoK { jdm } => generate_2k(jdm, seed),
    }
}

/// JSON request `{model, params, seed}` accepted by the `generate` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRequest {
    #[serde(flatten)]
    pub params: ModelParams,
    pub seed: u64,
}
