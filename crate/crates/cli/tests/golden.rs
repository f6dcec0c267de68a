//! Table outputs against checked-in files. `UPDATE_GOLDEN=1` rewrites them.

use std::path::PathBuf;
use std::process::Command;

const TABLES: [&str; 7] = ["table1", "table2", "table3", "table4", "table4-osc", "table5", "table6"];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_microswim")).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn tables_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1");
    let mut stale = Vec::new();
    for table in TABLES {
        for scenario in ["low", "high"] {
            let got = run(&[table, "--scenario", scenario]);
            let path = golden_dir().join(format!("{table}_{scenario}.csv"));
            if update {
                std::fs::write(&path, &got).unwrap();
                continue;
            }
            let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
            if got != want {
                stale.push(path.display().to_string());
            }
        }
    }
    assert!(stale.is_empty(), "outputs differ from golden files: {stale:?}");
}
