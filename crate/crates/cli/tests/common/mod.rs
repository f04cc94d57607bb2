//! Golden-file corpus for the `ultragh` binary.
//!
//! Every case runs in `tests/fixtures` with a fresh temporary directory
//! substituted for `{tmp}` in its arguments. The snapshot records the exit
//! code, stdout, stderr, and every file the command wrote into `{tmp}`.
//! Set `BLESS=1` to rewrite the snapshots in `tests/golden`.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

const fn case(name: &'static str, args: &'static [&'static str]) -> Case {
    Case { name, args }
}

pub const CASES: &[Case] = &[
    case("validate_ok", &["validate", "isosceles.json"]),
    case("validate_triangle", &["validate", "bad_triangle.json"]),
    case("validate_duplicates", &["validate", "dupes.json"]),
    case("validate_merge", &["validate", "dupes.json", "--merge-duplicates"]),
    case("validate_garbage", &["validate", "garbage.json"]),
    case("validate_missing_file", &["validate", "no_such_file.json"]),
    case("spectrum", &["spectrum", "isosceles.json"]),
    case("quotient", &["quotient", "isosceles.json", "--t", "1"]),
    case("quotient_bad_rational", &["quotient", "isosceles.json", "--t", "abc"]),
    case("quotient_missing_flag", &["quotient", "isosceles.json"]),
    case("hausdorff_file", &["hausdorff", "isosceles.json", "--a", "@subset_ac.json", "--b", "b"]),
    case("hausdorff_inline", &["hausdorff", "isosceles.json", "--a", "[\"a\"]", "--b", "a,b"]),
    case("hausdorff_unknown", &["hausdorff", "isosceles.json", "--a", "z", "--b", "a"]),
    case("net", &["net", "isosceles.json", "--eps", "1"]),
    case("net_restrict", &["net", "isosceles.json", "--eps", "1", "--restrict"]),
    case("glue", &["glue", "glue_spec.json"]),
    case("glue_mismatch", &["glue", "glue_mismatch.json"]),
    case("chain", &["chain", "chain.json"]),
    case("amalgam", &["amalgam", "x_half.json", "point.json", "--s", "1/2"]),
    case("amalgam_too_small", &["amalgam", "isosceles.json", "point.json", "--s", "1"]),
    case("ugh_self", &["ugh", "isosceles.json", "isosceles.json"]),
    case("ugh_half_threequarters", &[
        "ugh",
        "x_half.json",
        "x_threequarters.json",
        "--oracle",
        "--certificate",
        "{tmp}/cert.json",
    ]),
    case("ugh_isosceles_pair", &["ugh", "isosceles.json", "pair_two.json", "--oracle"]),
    case("ugh_to_file", &["ugh", "point.json", "x_half.json", "-o", "{tmp}/out.json"]),
    case("ugh_missing_operand", &["ugh", "isosceles.json"]),
    case("pairwise", &[
        "pairwise",
        "point.json",
        "x_half.json",
        "x_threequarters.json",
        "isosceles.json",
        "pair_two.json",
        "--jobs",
        "3",
    ]),
    case("isometric_yes", &["isometric", "x_half.json", "x_half.json"]),
    case("isometric_no", &["isometric", "x_half.json", "x_threequarters.json"]),
    case("dendrogram", &["dendrogram", "isosceles.json"]),
    case("flatten", &["flatten", "tree.json"]),
    case("flatten_bad", &["flatten", "tree_bad.json"]),
    case("gen_two_point", &["gen", "two-point", "--c", "1/2"]),
    case("gen_two_point_zero", &["gen", "two-point", "--c", "0"]),
    case("gen_crowd", &["gen", "crowd", "--space", "pair_two.json", "--base", "u", "--c", "1/4", "--n", "2"]),
    case("gen_cauchy", &["gen", "cauchy", "--depth", "3"]),
    case("gen_random", &["gen", "random", "--n", "6", "--k", "0,1/4,1/2,1", "--seed", "5"]),
    case("gen_unknown_family", &["gen", "spiral"]),
    case("cluster", &["cluster", "--input", "metric.json"]),
    case("cluster_not_metric", &["cluster", "--input", "bad_metric.json"]),
    case("in_uk_member", &["in-uk", "isosceles.json", "--k", "0,1,2,3"]),
    case("in_uk_violation", &["in-uk", "x_half.json", "--k", "0,1/4"]),
    case("unknown_verb", &["frobnicate"]),
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures() -> PathBuf {
    manifest_dir().join("tests").join("fixtures")
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests").join("golden").join(format!("{name}.txt"))
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_binary(args: &[&str], stdin: Option<&str>) -> Outcome {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ultragh"));
    cmd.args(args)
        .current_dir(fixtures())
        .env("NO_COLOR", "1")
        .stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn ultragh");
    if let Some(input) = stdin {
        use std::io::Write;
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().expect("wait for ultragh");
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Runs a case and renders its snapshot text.
pub fn snapshot(case: &Case) -> (Outcome, String) {
    let tmp = tempfile::tempdir().expect("temp dir");
    let tmp_str = tmp.path().to_str().expect("utf-8 temp path").to_string();
    let args: Vec<String> = case.args.iter().map(|a| a.replace("{tmp}", &tmp_str)).collect();
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = run_binary(&argv, None);

    let mut text = format!(
        "$ ultragh {}\nexit: {}\n--- stdout\n{}--- stderr\n{}",
        case.args.join(" "),
        out.code,
        out.stdout,
        out.stderr
    );
    let mut files: Vec<PathBuf> = fs::read_dir(tmp.path()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for f in files {
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        text.push_str(&format!("--- file {{tmp}}/{name}\n{}", fs::read_to_string(&f).unwrap()));
    }
    (out, text)
}

/// Compares a case against its golden file; returns a description of the
/// first difference.
pub fn check_case(case: &Case) -> Result<Outcome, String> {
    let (out, text) = snapshot(case);
    let path = golden_path(case.name);
    if std::env::var_os("BLESS").is_some() {
        fs::write(&path, &text).unwrap();
        return Ok(out);
    }
    let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != text {
        return Err(format!("{}: snapshot differs\n--- expected\n{expected}--- actual\n{text}", case.name));
    }
    Ok(out)
}

pub fn is_space_json(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .map(|v| v.get("points").is_some() && v.get("dist").is_some())
        .unwrap_or(false)
}

/// Runs the whole corpus: snapshot equality, a second run for byte-level
/// determinism, and `validate` on every emitted space.
pub fn check_corpus() -> Result<usize, String> {
    let mut exit_codes = std::collections::BTreeSet::new();
    for case in CASES {
        let first = check_case(case)?;
        let (second, _) = snapshot(case);
        if first.stdout != second.stdout || first.stderr != second.stderr || first.code != second.code {
            return Err(format!("{}: output differs between runs", case.name));
        }
        if first.code == 0 && is_space_json(&first.stdout) {
            let v = run_binary(&["validate", "-"], Some(&first.stdout));
            if v.code != 0 || v.stdout != first.stdout {
                return Err(format!("{}: emitted space does not re-validate: {}", case.name, v.stderr));
            }
        }
        exit_codes.insert(first.code);
    }
    for required in [0, 1, 2] {
        if !exit_codes.contains(&required) {
            return Err(format!("corpus has no case with exit code {required}"));
        }
    }
    Ok(CASES.len())
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(&fixtures()).join(name)
}
