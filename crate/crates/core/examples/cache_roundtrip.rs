//! Writes a converged grid to the text cache and reads it back.

use subspace_bounds::engine::{cache_text, fixpoint, parse_cache, read_cache_for, write_cache, Facts, GridConfig};

fn main() -> Result<(), subspace_bounds::Error> {
    let config = GridConfig::new(vec![2, 3], 7);
    let facts = Facts::builtin();
    let table = fixpoint(&config, &facts)?;
    let path = std::env::temp_dir().join("subspace-bounds-example-cache.tsv");
    write_cache(&table, &path)?;
    let back = read_cache_for(&path, &config, &facts)?;
    assert_eq!(cache_text(&back), cache_text(&table));
    println!("{} lines, config {}", cache_text(&table).lines().count(), table.config_hash);
    let other = GridConfig::new(vec![2], 7);
    println!("different config: {}", read_cache_for(&path, &other, &facts).unwrap_err());
    parse_cache(&cache_text(&table))?;
    Ok(())
}
