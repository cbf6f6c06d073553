use qcat::corpus::{check_expected, entries, manifest};
use qcat::sset::{load, to_json_string};
use std::path::PathBuf;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn files_are_exactly_the_recipes() {
    for e in entries() {
        let path = dir().join(format!("{}.json", e.name));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|err| panic!("{}: {err}", path.display()));
        let built = e.recipe.build(None).unwrap();
        assert!(text == to_json_string(&built), "{} differs from its recipe", e.name);
        let x = load(&path).unwrap();
        x.audit().unwrap();
        check_expected(&x, &e.expected).unwrap_or_else(|m| panic!("{}: {m}", e.name));
    }
}

#[test]
fn manifest_is_current() {
    let text = std::fs::read_to_string(dir().join("manifest.json")).unwrap();
    let on_disk: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(on_disk, manifest());
    let listed = on_disk["entries"].as_array().unwrap().len();
    let files = std::fs::read_dir(dir()).unwrap().filter(|f| f.as_ref().unwrap().file_name() != "manifest.json").count();
    assert_eq!(listed, files);
}
