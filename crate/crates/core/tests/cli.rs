use std::path::PathBuf;
use std::process::{Command, Output};

fn primdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primdeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_wielandt_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.tns");
    let g = primdeg(&[
        "generate",
        "wielandt",
        "--n",
        "3",
        "--m",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(g.status.code(), Some(0));
    let o = primdeg(&["analyze", path.to_str().unwrap(), "--trace", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("primitive: yes\ngamma: 5\nbound: 5\n"));
    assert!(text.contains("H: {1,2}\ns: 2\n"));
    assert!(text.contains("# j\tgamma_j\n1\t4\n2\t3\n3\t5\n"));
    assert!(text.contains("1\t{2}\n2\t{1,3}\n3\t{1,2}\n4\t{1,2,3}\n# end: full\n"));
}

#[test]
fn frozen_random_instances() {
    // the generator stream is part of the contract: same seed, same file
    for (density, seed, file) in [
        ("0.2", "42", "random_n3_m3_d0.2_s42.tns"),
        ("0.5", "2", "random_n3_m3_d0.5_s2.tns"),
    ] {
        let g = primdeg(&[
            "generate",
            "random",
            "--n",
            "3",
            "--m",
            "3",
            "--density",
            density,
            "--seed",
            seed,
        ]);
        assert_eq!(stdout(&g), std::fs::read_to_string(data(file)).unwrap());
    }

    let o = primdeg(&[
        "analyze",
        data("random_n3_m3_d0.2_s42.tns").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("primitive: no\n"));
    assert!(text.contains(
        "violation: column 3 of the majorization matrix has no positive off-diagonal entry\n"
    ));
    assert!(text.ends_with("1\t-\n2\t-\n3\t-\n"));

    let o = primdeg(&[
        "analyze",
        data("random_n3_m3_d0.5_s2.tns").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("primitive: yes\ngamma: 3\n"));
    assert!(text.ends_with("1\t3\n2\t1\n3\t2\n"));
}

#[test]
fn oracle_check_passes_on_frozen_instances() {
    for file in ["random_n3_m3_d0.2_s42.tns", "random_n3_m3_d0.5_s2.tns"] {
        let o = primdeg(&["oracle-check", data(file).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
    let o = primdeg(&["oracle-check", "--kind", "wielandt", "--n", "4", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS matrix-lift"));
}

#[test]
fn experiment_regression_table() {
    let o = primdeg(&[
        "experiment",
        "--n-range",
        "4",
        "--m",
        "3",
        "--densities",
        "0.1,0.2,0.4",
        "--trials",
        "200",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(data("experiment_n4_m3_seed1.tsv")).unwrap()
    );
}

#[test]
fn experiment_with_wielandt_hits_the_bound() {
    let o = primdeg(&[
        "experiment",
        "--n-range",
        "2..5",
        "--m",
        "3",
        "--densities",
        "0.3",
        "--trials",
        "5",
        "--seed",
        "9",
        "--include-wielandt",
    ]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines().skip(1) {
        let f: Vec<&str> = line.split('\t').collect();
        assert_eq!(f[5], f[6], "{line}");
        assert!(f[7].parse::<usize>().unwrap() >= 1);
    }
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tns");
    std::fs::write(&bad, "tns v1\norder 3 dim 2\n1 2 3 1\n").unwrap();
    let o = primdeg(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(
        primdeg(&["analyze", "/nonexistent/x.tns"]).status.code(),
        Some(2)
    );
    assert_eq!(
        primdeg(&[
            "generate",
            "random",
            "--n",
            "3",
            "--m",
            "3",
            "--density",
            "0.5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        primdeg(&[
            "experiment",
            "--n-range",
            "3",
            "--m",
            "3",
            "--densities",
            "0.5",
            "--trials",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(primdeg(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn pretty_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.tns");
    std::fs::write(
        &path,
        stdout(&primdeg(&["generate", "wielandt", "--n", "4", "--m", "4"])),
    )
    .unwrap();
    let text = stdout(&primdeg(&["analyze", path.to_str().unwrap(), "--pretty"]));
    assert!(text.contains("Primitive with primitive degree 10 (bound 10)"));
}
