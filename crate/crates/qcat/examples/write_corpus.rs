//! Regenerates the sample corpus: `cargo run --example write_corpus -- corpus`.

use qcat::corpus::{check_expected, entries, manifest};
use qcat::sset::to_json_string;
use std::path::PathBuf;

fn main() -> qcat::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "corpus".into()));
    std::fs::create_dir_all(&dir)?;
    for e in entries() {
        let x = e.recipe.build(None)?;
        check_expected(&x, &e.expected).map_err(qcat::QcError::Malformed)?;
        std::fs::write(dir.join(format!("{}.json", e.name)), to_json_string(&x))?;
        println!("{:<18} {:?}", e.name, x.level_sizes());
    }
    let m = serde_json::to_string_pretty(&manifest()).expect("manifest") + "\n";
    std::fs::write(dir.join("manifest.json"), m)?;
    Ok(())
}
