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

//! Fit every model to each real network, generate one counterpart per fit and
//! measure everything into a [`DatasetTable`].

use rayon::prelude::*;

use crate::dataset::{DatasetRow, DatasetTable, Domain, Subcategory};
use crate::error::Result;
use crate::fitting::{fit_model, FitConfig, FitReport, ModelKind};
use crate::generators::generate;
use crate::graph::Graph;
use crate::metrics::feature_vector;
use crate::seed::{derive, derive_named};

#[derive(Clone, Debug)]
pub struct NetworkInput {
    pub name: String,
    pub domain: Option<Domain>,
    pub graph: Graph,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub fit: FitConfig,
    pub models: Vec<ModelKind>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            fit: FitConfig::default(),
            models: ModelKind::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NetworkOutcome {
    pub name: String,
    pub domain: Option<Domain>,
    /// The real network first, then one row per successful counterpart.
    pub rows: Vec<DatasetRow<f64>>,
    pub fits: Vec<FitReport>,
    pub counterparts: Vec<(ModelKind, Graph)>,
    pub failures: Vec<String>,
}

/// Seed used for everything derived from the network called `name`.
pub fn network_seed(master: u64, name: &str) -> u64 {
    derive_named(master, name)
}

/// Seed of the counterpart generated from `model`'s fit.
pub fn counterpart_seed(network_seed: u64, model: ModelKind) -> u64 {
    derive(derive_named(network_seed, model.as_str()), 0)
}

/// Measures, fits and regenerates one network. Failures of single models are
/// recorded and the rest carry on.
pub fn process_network(
    input: &NetworkInput,
    config: &PipelineConfig,
    master: u64,
) -> NetworkOutcome {
    let seed = network_seed(master, &input.name);
    let mut out = NetworkOutcome {
        name: input.name.clone(),
        domain: input.domain,
        rows: Vec::new(),
        fits: Vec::new(),
        counterparts: Vec::new(),
        failures: Vec::new(),
    };
    let label = |row: DatasetRow<f64>, sub: Subcategory| match input.domain {
        Some(d) => row.labeled(d, sub),
        None => DatasetRow {
            category: Some(sub.category()),
            subcategory: Some(sub),
            ..row
        },
    };
    match feature_vector::<f64>(&input.graph) {
        Ok(fv) => out
            .rows
            .push(label(DatasetRow::new(&input.name, fv), Subcategory::Real)),
        Err(e) => {
            out.failures.push(format!("{}: measuring: {e}", input.name));
            return out;
        }
    }
    let fit_config = FitConfig { seed, ..config.fit };
    let results: Vec<Result<(FitReport, Graph, DatasetRow<f64>)>> = config
        .models
        .par_iter()
        .map(|&model| {
            let fit = fit_model(&input.graph, model, &fit_config)?;
            let g = generate(&fit.params, counterpart_seed(seed, model))?;
            let fv = feature_vector::<f64>(&g)?;
            let row = label(DatasetRow::new(&input.name, fv), Subcategory::Model(model));
            Ok((fit, g, row))
        })
        .collect();
    for (model, r) in config.models.iter().zip(results) {
        match r {
            Ok((fit, g, row)) => {
                out.fits.push(fit);
                out.counterparts.push((*model, g));
                out.rows.push(row);
            }
            Err(e) => out.failures.push(format!("{}: {model}: {e}", input.name)),
        }
    }
    out
}

/// Runs [`process_network`] over all inputs in parallel and collects the rows
/// in input order.
pub fn run_pipeline(
    inputs: &[NetworkInput],
    config: &PipelineConfig,
    master: u64,
) -> Result<(DatasetTable<f64>, Vec<NetworkOutcome>)> {
    let outcomes: Vec<NetworkOutcome> = inputs
        .par_iter()
        .map(|input| process_network(input, config, master))
        .collect();
    let mut table = DatasetTable::new();
    for o in &outcomes {
        for row in &o.rows {
            table.push(row.clone())?;
        }
    }
    Ok((table, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::proxy_graph;

    fn quick() -> PipelineConfig {
        PipelineConfig {
            fit: FitConfig {
                replicates: 2,
                budget: 12,
                seed: 0,
            },
            models: ModelKind::ALL.to_vec(),
        }
    }

    #[test]
    fn two_networks_give_fourteen_rows() {
        let inputs = vec![
            NetworkInput {
                name: "mol".into(),
                domain: Some(Domain::Chems),
                graph: proxy_graph(Domain::Chems, 20, 1).unwrap(),
            },
            NetworkInput {
                name: "web".into(),
                domain: Some(Domain::Food),
                graph: proxy_graph(Domain::Food, 30, 2).unwrap(),
            },
        ];
        let (table, outcomes) = run_pipeline(&inputs, &quick(), 9).unwrap();
        assert!(
            outcomes.iter().all(|o| o.failures.is_empty()),
            "{outcomes:?}"
        );
        assert_eq!(table.len(), 14);
        for o in &outcomes {
            let size = o.rows[0].features.size;
            assert!(o.rows.iter().all(|r| r.features.size == size), "{}", o.name);
        }
        let (again, _) = run_pipeline(&inputs, &quick(), 9).unwrap();
        assert_eq!(table, again);
    }

    #[test]
    fn seeds_depend_on_name_not_position() {
        let g = proxy_graph(Domain::Chems, 20, 1).unwrap();
        let one = |name: &str| NetworkInput {
            name: name.into(),
            domain: Some(Domain::Chems),
            graph: g.clone(),
        };
        let (a, _) = run_pipeline(&[one("x"), one("y")], &quick(), 4).unwrap();
        let (b, _) = run_pipeline(&[one("y"), one("x")], &quick(), 4).unwrap();
        let rows_of = |t: &DatasetTable<f64>, name: &str| {
            t.rows()
                .iter()
                .filter(|r| r.name == name)
                .cloned()
                .collect::<Vec<_>>()
        };
        assert_eq!(rows_of(&a, "x"), rows_of(&b, "x"));
    }
}
