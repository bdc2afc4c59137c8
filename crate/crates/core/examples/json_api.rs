//! JSON documents as served over HTTP, including record views and aliases.
//!
//! Run with `--serve` to start the service on 127.0.0.1:8080.

use subspace_bounds::api::{cdc_document, route, serve};
use subspace_bounds::engine::{fixpoint, Facts, GridConfig, RecordView};

fn main() -> Result<(), subspace_bounds::Error> {
    let table = fixpoint(&GridConfig::new(vec![2], 8), &Facts::builtin())?;
    let doc = cdc_document(&table, 2, 6, 4, 3, RecordView::Dominance)?;
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    for url in ["/api/2/6/4/4/?view=short", "/api/2/7/5/", "/api/6/6/4/3/", "/api/2/30/4/3/"] {
        let (status, body) = route(&table, url);
        println!("{url} -> {status} {}", &body[..body.len().min(120)]);
    }
    if std::env::args().any(|a| a == "--serve") {
        serve(&table, "127.0.0.1:8080")?;
    }
    Ok(())
}
