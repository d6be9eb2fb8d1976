#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn golden(name: &str) -> String {
    std::fs::read_to_string(fixtures().join("golden").join(name)).expect("golden file")
}

/// Runs the built binary from inside the fixtures directory.
pub fn bineval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bineval"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("spawn bineval")
}
