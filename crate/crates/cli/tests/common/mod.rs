#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

pub fn occ(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_occ"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("occ runs")
}

/// Every `.occ` fixture, sorted by name.
pub fn occ_files() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures())
        .expect("fixtures directory")
        .filter_map(|e| {
            let name = e.ok()?.file_name().into_string().ok()?;
            name.ends_with(".occ").then_some(name)
        })
        .collect();
    names.sort();
    names
}

/// (a, b, plan) for every shipped plan.
pub const SEWINGS: [(&str, &str, &str); 5] = [
    ("coproduct.occ", "pants.occ", "coproduct_to_pants.plan"),
    ("window_cap.occ", "pants.occ", "window_cap_to_pants.plan"),
    ("strip.occ", "strip.occ", "strip_twice.plan"),
    ("open_window.occ", "open_window.occ", "open_window_twice.plan"),
    ("type2_closed_out.occ", "type4_piece.occ", "type2_to_piece.plan"),
];

/// Every report the CLI produces over the fixture corpus, in text and JSON.
pub fn corpus_commands() -> Vec<Vec<String>> {
    let mut cmds: Vec<Vec<&str>> = Vec::new();
    let files = occ_files();
    for f in &files {
        cmds.push(vec!["invariants", f]);
        cmds.push(vec!["classify", f]);
        cmds.push(vec!["classify", f, "--strict-dims", "--d", "1"]);
        cmds.push(vec!["canonical", f]);
        cmds.push(vec!["eval", f]);
        cmds.push(vec!["eval", f, "--d", "3"]);
    }
    for (a, b, p) in SEWINGS {
        cmds.push(vec!["sew", a, b, "--plan", p, "--check"]);
        cmds.push(vec!["sew", a, b, "--plan", p, "--check", "--d", "3"]);
    }
    cmds.push(vec!["sew", "type2_closed_out.occ", "type5_piece.occ", "--plan", "type2_to_piece.plan", "--check"]);
    cmds.push(vec!["eval", "window_cap.occ", "--assignment", "models/window_cup.assign"]);
    cmds.push(vec!["verify-transfers"]);
    cmds.push(vec!["verify-transfers", "--model", "models/t2.model", "--embedding", "diagonal"]);
    cmds.push(vec!["verify-transfers", "--embedding", "models/s1_in_t2.embedding"]);
    cmds.push(vec!["enumerate", "--bound", "4"]);
    cmds.push(vec!["enumerate", "--bound", "2", "--family", "--genus", "1", "--circles", "3", "--arcs", "4"]);
    let mut out = Vec::new();
    for c in cmds {
        let owned: Vec<String> = c.iter().map(|s| s.to_string()).collect();
        let mut json = owned.clone();
        json.push("--json".into());
        out.push(owned);
        out.push(json);
    }
    out
}
