use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use silt_cli::run_with;
use silt_core::{Color, Dissection, DissectionFile, MarkedDisk};

fn silt(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("silt").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_fan(dir: &Path, n: usize) -> String {
    let (_, d) = silt_core::fan_dissection_linear_an(n).unwrap();
    let path = dir.join(format!("fan{}.json", n + 1));
    fs::write(
        &path,
        serde_json::to_string(&DissectionFile::from(&d)).unwrap() + "\n",
    )
    .unwrap();
    path.to_string_lossy().into_owned()
}

fn count_class(svg: &str, class: &str) -> usize {
    let doc = roxmltree::Document::parse(svg).expect("well-formed svg");
    doc.descendants()
        .filter(|n| n.attribute("class") == Some(class))
        .count()
}

#[test]
fn count_reports() {
    let (code, out, _) = silt(&[
        "an",
        "count",
        "--n",
        "2",
        "--d",
        "2",
        "--brute-force",
        "--json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "{\"n\":2,\"d\":2,\"methods\":{\"brute_force\":5,\"recursion\":5,\"closed_form\":5,\"tree_dp\":5},\"agree\":true}\n"
    );
    let (code, out, _) = silt(&["an", "count", "--n", "1", "--d", "5"]);
    assert_eq!(code, 0);
    assert!(out
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["recursion", "5"]));
    let (code, out, _) = silt(&["an", "verify", "--n", "40", "--d", "3", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["agree"], true);
}

#[test]
fn guard_is_a_domain_error() {
    let (code, _, err) = silt(&["an", "count", "--n", "9", "--d", "4", "--brute-force"]);
    assert_eq!(code, 1);
    assert!(err.contains("count-only"), "{err}");
    let (code, out, _) = silt(&[
        "--max-slaloms",
        "200",
        "--max-collections",
        "10000000",
        "an",
        "count",
        "--n",
        "6",
        "--d",
        "4",
        "--brute-force",
        "--json",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"brute_force\":53820"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(silt(&["an", "count", "--n", "2"]).0, 2);
    assert_eq!(silt(&["an", "count", "--n", "2", "--d", "0"]).0, 2);
    assert_eq!(silt(&["frobnicate"]).0, 2);
    assert_eq!(silt(&[]).0, 2);
    assert_eq!(silt(&["--help"]).0, 0);
}

#[test]
fn slalom_check_statuses() {
    let (code, out, _) = silt(&[
        "slalom",
        "check",
        "--n",
        "2",
        "--d",
        "2",
        "--arc",
        "(1,-1)-(2,0)",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("slalom       yes"));
    let (code, _, err) = silt(&[
        "slalom",
        "check",
        "--n",
        "2",
        "--d",
        "2",
        "--arc",
        "(0,0)-(1,-1)",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("not a slalom"));
    assert_eq!(
        silt(&["slalom", "check", "--n", "2", "--d", "2", "--arc", "(0,0)"]).0,
        1
    );
    assert_eq!(
        silt(&[
            "slalom",
            "check",
            "--n",
            "2",
            "--d",
            "2",
            "--arc",
            "(1,0)-(1,-1)"
        ])
        .0,
        1
    );
    let (code, out, _) = silt(&[
        "slalom",
        "check",
        "--n",
        "3",
        "--d",
        "3",
        "--arc",
        "(1,-2)-(3,-1)",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["slalom"], true);
    assert_eq!(v["in_window"], true);
}

#[test]
fn listings() {
    let (code, out, _) = silt(&["an", "slaloms", "--n", "1", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(0,-1)-(1,-1)\n(0,0)-(1,0)\n");
    let (code, out, _) = silt(&["an", "enumerate", "--n", "2", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    let (_, json, _) = silt(&["an", "enumerate", "--n", "2", "--d", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
}

#[test]
fn thread_count_does_not_change_output() {
    let (_, one, _) = silt(&["--threads", "1", "an", "enumerate", "--n", "4", "--d", "3"]);
    let (_, four, _) = silt(&["--threads", "4", "an", "enumerate", "--n", "4", "--d", "3"]);
    assert_eq!(one, four);
    assert_eq!(one.lines().count(), 273);
}

#[test]
fn dissection_commands() {
    let dir = tempfile::tempdir().unwrap();
    let fan4 = write_fan(dir.path(), 3);
    let (code, out, _) = silt(&["dissection", "algebra", "--in", &fan4]);
    assert_eq!(code, 0);
    assert!(out.contains("  1 -> 2;\n  2 -> 3;\n"));
    assert!(!out.contains("dashed"));

    let (code, out, _) = silt(&["dissection", "algebra", "--in", &fan4, "--json"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "{\"vertices\":3,\"arrows\":[[1,2],[2,3]],\"relations\":[]}\n"
    );

    let dual_path = dir.path().join("dual.json");
    let (code, _, _) = silt(&[
        "dissection",
        "dual",
        "--in",
        &fan4,
        "--out",
        dual_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let dual: DissectionFile =
        serde_json::from_str(&fs::read_to_string(&dual_path).unwrap()).unwrap();
    assert_eq!(dual.kind, Color::Bullet);
    assert_eq!(dual.arcs.len(), 3);

    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"m":4,"arcs":[[0,0,2,0],[1,0,3,0]],"kind":"circ"}"#,
    )
    .unwrap();
    let (code, _, err) = silt(&["dissection", "validate", "--in", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("cross"), "{err}");
    let partial = dir.path().join("partial.json");
    fs::write(&partial, r#"{"m":3,"arcs":[[0,0,1,0]],"kind":"circ"}"#).unwrap();
    assert_eq!(
        silt(&["dissection", "validate", "--in", partial.to_str().unwrap()]).0,
        0
    );
    assert_eq!(
        silt(&["dissection", "dual", "--in", partial.to_str().unwrap()]).0,
        1
    );
    assert_eq!(
        silt(&["dissection", "validate", "--in", "/nonexistent/x.json"]).0,
        1
    );
}

#[test]
fn json_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in 1..=10 {
        let d = Dissection::random_maximal(MarkedDisk::new(m).unwrap(), Color::Circ, &mut rng);
        let text = serde_json::to_string(&DissectionFile::from(&d)).unwrap() + "\n";
        let path = dir.path().join(format!("d{m}.json"));
        fs::write(&path, &text).unwrap();
        let (code, out, _) = silt(&[
            "dissection",
            "validate",
            "--in",
            path.to_str().unwrap(),
            "--json",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, text);
    }
    // scrambled arc order comes back sorted
    let path = dir.path().join("scrambled.json");
    fs::write(
        &path,
        r#"{"m":4,"arcs":[[3,0,0,0],[0,2,1,0],[0,1,2,0]],"kind":"circ"}"#,
    )
    .unwrap();
    let (_, out, _) = silt(&[
        "dissection",
        "validate",
        "--in",
        path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(
        out,
        "{\"m\":4,\"arcs\":[[0,0,3,0],[0,1,2,0],[0,2,1,0]],\"kind\":\"circ\"}\n"
    );
}

#[test]
fn svg_exports() {
    let dir = tempfile::tempdir().unwrap();
    let fan4 = write_fan(dir.path(), 3);
    let out = dir.path().join("fan.svg");
    assert_eq!(
        silt(&[
            "export",
            "svg",
            "--in",
            &fan4,
            "--out",
            out.to_str().unwrap()
        ])
        .0,
        0
    );
    let svg = fs::read_to_string(&out).unwrap();
    assert_eq!(count_class(&svg, "circ"), 4);
    assert_eq!(count_class(&svg, "bullet"), 4);
    assert_eq!(count_class(&svg, "chord"), 3);
    assert_eq!(count_class(&svg, "boundary"), 1);

    let empty = dir.path().join("empty.json");
    fs::write(&empty, r#"{"m":3,"arcs":[],"kind":"circ"}"#).unwrap();
    let out2 = dir.path().join("empty.svg");
    assert_eq!(
        silt(&[
            "export",
            "svg",
            "--in",
            empty.to_str().unwrap(),
            "--out",
            out2.to_str().unwrap()
        ])
        .0,
        0
    );
    let svg = fs::read_to_string(&out2).unwrap();
    assert_eq!(count_class(&svg, "chord"), 0);
    assert_eq!(count_class(&svg, "circ"), 3);

    let coll = dir.path().join("coll.json");
    fs::write(
        &coll,
        r#"{"n":2,"d":2,"slaloms":["(0,0)-(1,0)","(0,0)-(2,0)"]}"#,
    )
    .unwrap();
    let out3 = dir.path().join("coll.svg");
    assert_eq!(
        silt(&[
            "export",
            "svg",
            "--in",
            coll.to_str().unwrap(),
            "--out",
            out3.to_str().unwrap()
        ])
        .0,
        0
    );
    let svg = fs::read_to_string(&out3).unwrap();
    assert_eq!(count_class(&svg, "cross"), 6);
    assert_eq!(count_class(&svg, "chord"), 2);

    // deterministic bytes
    let out4 = dir.path().join("again.svg");
    silt(&[
        "export",
        "svg",
        "--in",
        coll.to_str().unwrap(),
        "--out",
        out4.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&out3).unwrap(), fs::read(&out4).unwrap());

    assert_eq!(
        silt(&[
            "export",
            "svg",
            "--in",
            &fan4,
            "--out",
            "/nonexistent/dir/x.svg"
        ])
        .0,
        1
    );

    let dot = dir.path().join("q.dot");
    assert_eq!(
        silt(&[
            "export",
            "dot",
            "--in",
            &fan4,
            "--out",
            dot.to_str().unwrap()
        ])
        .0,
        0
    );
    assert!(fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph quiver {"));
}

#[test]
fn sweep_exit_status() {
    let (code, out, _) = silt(&["verify", "--sweep", "--max-n", "5", "--max-d", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 6 * 3);
    assert!(!out.contains("NO"));
}

#[test]
fn thread_variable_overrides_the_flag() {
    let bin = env!("CARGO_BIN_EXE_silt");
    let run = |var: &str| {
        std::process::Command::new(bin)
            .args([
                "--threads",
                "2",
                "an",
                "count",
                "--n",
                "3",
                "--d",
                "2",
                "--brute-force",
            ])
            .env("SILT_THREADS", var)
            .output()
            .unwrap()
    };
    let bad = run("many");
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("SILT_THREADS"));
    let good = run("1");
    assert_eq!(good.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&good.stdout).contains("brute_force  14"));
}
