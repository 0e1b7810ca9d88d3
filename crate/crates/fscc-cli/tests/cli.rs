//! Runs the `fscc` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fscc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fscc"))
        .args(args)
        .env_remove("FSCC_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fscc-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn eval_unit_circle_det() {
    let o = fscc(&["eval", "--cycle", "1,0,0,-1", "--sig", "-1", "--query", "det"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn eval_queries() {
    let run = |q: &str| stdout(&fscc(&["eval", "--cycle", "2,2,4,-6", "--sig", "-1", "--query", q]));
    assert_eq!(run("center").trim(), "(1, 2)");
    // det normalised to k = 1: 1 + 4 + 3
    assert_eq!(run("det").trim(), "8");
    // u^2 - 2u - 3 = 0 on the line v = 0
    assert_eq!(run("roots").trim(), "(-1, 3)");
}

#[test]
fn yaglom_passes() {
    let o = fscc(&["verify", "--checks", "yaglom", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains(": true"), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fscc(&["verify", "--checks", "no_such_check"]).status.code(), Some(2));
    assert_eq!(fscc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fscc(&["eval", "--cycle", "1,0,0", "--query", "det"]).status.code(), Some(2));
    assert_eq!(fscc(&["render", "--figure", "no-such-figure"]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_3() {
    let o = fscc(&["render", "--figure", "first-ort-ee", "--out", "/nonexistent/dir/f.asy"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--checks", "k_orbit,ortho_formulas,yaglom", "--seed", "11", "--report", "json"];
    let a = fscc(&args);
    let b = fscc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = fscc(&["verify", "--checks", "k_orbit", "--seed", "11"]);
    let again = fscc(&["verify", "--checks", "k_orbit", "--seed", "11"]);
    assert_eq!(text.stdout, again.stdout);
}

#[test]
fn seed_from_environment() {
    let flag = fscc(&["verify", "--checks", "k_orbit", "--seed", "5", "--report", "json"]);
    let env = Command::new(env!("CARGO_BIN_EXE_fscc"))
        .args(["verify", "--checks", "k_orbit", "--report", "json"])
        .env("FSCC_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    assert!(stdout(&env).contains("\"seed\": 5"));
}

#[test]
fn render_figure_file() {
    let dir = scratch_dir("one");
    let path = dir.join("f.asy");
    let o = fscc(&["render", "--figure", "first-ort-ee", "--format", "asy", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("draw("));
    for l in ["a", "b", "c", "d"] {
        assert!(text.contains(&format!("label(\"${l}$\"")), "label {l}");
    }
    let first = text.clone();
    fscc(&["render", "--figure", "first-ort-ee", "--format", "asy", "--out", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn render_whole_corpus_as_svg() {
    let dir = scratch_dir("all");
    let o = fscc(&["render", "--figure", "all", "--format", "svg", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let listed = stdout(&fscc(&["render", "--list"]));
    let names: Vec<&str> = listed.lines().collect();
    assert!(names.len() >= 30);
    for n in names {
        let svg = std::fs::read_to_string(dir.join(format!("{n}.svg"))).unwrap();
        assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"), "{n}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn render_cycle_to_stdout() {
    let o = fscc(&["render", "--cycle", "1,1,2,5", "--sig", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dot((1.00,2.00)*u"));
}
