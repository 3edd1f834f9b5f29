use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 8] =
    ["enumerate", "esp_map", "rooted_bijections", "series", "sequences", "colors", "conjectures", "oeis"];

fn examples_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("examples")
}

#[test]
fn every_example_runs() {
    for name in EXAMPLES {
        let path = examples_dir().join(name);
        let out = Command::new(&path).output().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}
