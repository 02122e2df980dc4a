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

//! Writes the bundled sample corpus: five stand-in networks per domain plus a
//! `name,path,domain` manifest.
//!
//!     cargo run --example make_sample -- data/sample

use std::fs;
use std::path::PathBuf;

use netfit::dataset::Domain;
use netfit::seed::derive_named;
use netfit::synthetic::random_proxy_graph;

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "data/sample".into()),
    );
    fs::create_dir_all(&dir)?;
    let mut manifest = csv::Writer::from_path(dir.join("manifest.csv"))?;
    manifest.write_record(["name", "path", "domain"])?;
    for domain in Domain::ALL {
        for i in 1..=5 {
            let name = format!("{domain}_{i:02}");
            let g = random_proxy_graph(domain, derive_named(2024, &name))?;
            let file = format!("{name}.edges");
            let header = format!(
                "# stand-in {domain} network, {} nodes, {} edges\n",
                g.node_count(),
                g.edge_count()
            );
            fs::write(dir.join(&file), header + &g.to_edge_list())?;
            manifest.write_record([name.as_str(), file.as_str(), domain.as_str()])?;
        }
    }
    manifest.flush()?;
    Ok(())
}
