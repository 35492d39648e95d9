use std::io::Write as _;
use std::process::{Command, Output, Stdio};

use ectff_core::designs::DifferenceFamily;
use ectff_core::frames::FusionFrame;
use ectff_core::groups::AbelianGroup;

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ectff"));
    cmd.args(args)
        .env_remove("ECTFF_CATALOG")
        .stdin(if stdin.is_some() {
            Stdio::piped()
        } else {
            Stdio::null()
        })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn ectff");
    if let Some(bytes) = stdin {
        child.stdin.as_mut().unwrap().write_all(bytes).unwrap();
    }
    child.wait_with_output().expect("wait for ectff")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn df_13_3_1_json() -> String {
    let z13 = AbelianGroup::cyclic(13).unwrap();
    let df = DifferenceFamily::new(z13, vec![vec![1, 3, 9], vec![2, 6, 5]])
        .unwrap()
        .unwrap();
    serde_json::to_string(&df).unwrap()
}

#[test]
fn orbit_window_matches_reference() {
    let out = run(&["orbit", "3", "7", "1", "--window", "6", "--json"], None);
    let got: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let want = serde_json::json!([
        {"d": 11, "n": 7, "r": 9},
        {"d": 11, "n": 7, "r": 2},
        {"d": 3, "n": 7, "r": 2},
        {"d": 3, "n": 7, "r": 1},
        {"d": 4, "n": 7, "r": 1},
        {"d": 4, "n": 7, "r": 3},
        {"d": 17, "n": 7, "r": 3},
    ]);
    assert_eq!(got, want);
}

#[test]
fn orbit_human_and_plot_modes() {
    let human = stdout_of(&run(&["orbit", "3", "7", "1", "--window", "6"], None));
    assert!(human.contains("K in [-3, 3]"));
    assert!(human.contains("(11,7,9)"));
    assert!(human.contains("(17,7,3)"));

    let plot = stdout_of(&run(
        &["orbit", "3", "7", "1", "--window", "6", "--emit-plot-data"],
        None,
    ));
    let lines: Vec<&str> = plot.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], "11 9");
    assert_eq!(lines[6], "17 3");
}

#[test]
fn classify_and_exists_records() {
    let out = stdout_of(&run(&["classify", "49", "7", "9", "--json"], None));
    let record: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(record["class"], "positive");
    assert_eq!(record["minimal_point"]["d"], 14);
    assert_eq!(record["minimal_point"]["r"], 5);

    let out = stdout_of(&run(&["exists", "5", "4", "2", "--json"], None));
    let record: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(record["exists"], true);
    assert_eq!(record["seed"]["d"], 1);
    assert_eq!(
        record["chain"],
        serde_json::json!(["naimark", "spatial", "naimark"])
    );

    let out = stdout_of(&run(&["exists", "7", "4", "2", "--json"], None));
    let record: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(record["exists"], false);
}

#[test]
fn from_df_pipeline_verifies_equichordal() {
    let dir = tempfile::tempdir().unwrap();
    let df_path = dir.path().join("df13.json");
    std::fs::write(&df_path, df_13_3_1_json()).unwrap();

    let frame_out = run(&["construct", "from-df", df_path.to_str().unwrap()], None);
    let frame_json = stdout_of(&frame_out);

    let verify_out = run(
        &["verify", "--tol", "1e-9", "--json"],
        Some(frame_json.as_bytes()),
    );
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&verify_out)).unwrap();
    assert_eq!(report["dim"], 6);
    assert_eq!(report["num_blocks"], 13);
    assert_eq!(report["subspace_dim"], 2);
    assert_eq!(report["tight"], true);
    assert_eq!(report["equichordal"], true);
    assert_eq!(report["equiisoclinic"], false);

    // The emitted JSON round-trips into the library and re-verifies the same.
    let frame = FusionFrame::from_json(&frame_json).unwrap();
    let rep = frame.verify(1e-9);
    assert!(rep.tight && rep.equichordal && !rep.equiisoclinic);
    assert_eq!(frame.to_json(), frame_json.trim_end());
}

#[test]
fn complement_pipeline_reaches_20_13_2() {
    let dir = tempfile::tempdir().unwrap();
    let df_path = dir.path().join("df13.json");
    std::fs::write(&df_path, df_13_3_1_json()).unwrap();
    let frame_json = stdout_of(&run(
        &["construct", "from-df", df_path.to_str().unwrap()],
        None,
    ));

    let comp_json = stdout_of(&run(
        &["complement", "naimark"],
        Some(frame_json.as_bytes()),
    ));
    let report_out = run(&["verify", "--json"], Some(comp_json.as_bytes()));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&report_out)).unwrap();
    assert_eq!(report["dim"], 20);
    assert_eq!(report["num_blocks"], 13);
    assert_eq!(report["subspace_dim"], 2);
    assert_eq!(report["tight"], true);
    assert_eq!(report["equichordal"], true);
}

#[test]
fn certify_single_and_batch() {
    let single = stdout_of(&run(&["certify", "9", "19", "3"], None));
    assert!(single.starts_with("verdict: novel"));
    assert!(single.contains("invariant: f = 261"));
    assert!(single.contains("C-vi-dds"));

    let batch_in = b"9 19 3\n6 13 2\n7 4 2\n";
    let batch = stdout_of(&run(&["certify", "--json"], Some(batch_in)));
    let verdicts: Vec<String> = batch
        .lines()
        .map(|line| {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            v["verdict"].as_str().unwrap().to_string()
        })
        .collect();
    assert_eq!(verdicts, ["Novel", "CoveredByCatalog", "SettledByFNeg"]);
}

#[test]
fn certify_honors_catalog_path_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema\":\"ectff-catalog/9\"}").unwrap();

    let out = run(
        &[
            "certify",
            "9",
            "19",
            "3",
            "--catalog",
            bad.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ectff"));
    let out = cmd
        .args(["certify", "9", "19", "3"])
        .env("ECTFF_CATALOG", bad.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn identical_invocations_are_bit_identical() {
    for args in [
        vec!["certify", "9", "19", "3", "--json"],
        vec!["construct", "zauner", "--v", "4", "--k", "2"],
        vec![
            "search-df",
            "--group",
            "Z13",
            "--k",
            "3",
            "--lambda",
            "1",
            "--json",
        ],
    ] {
        let first = run(&args, None);
        let second = run(&args, None);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "output drifted for {args:?}");
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    // Usage errors: unparsable argument, conflicting flags.
    let out = run(&["orbit", "three", "7", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["orbit", "3", "7", "1", "--json", "--pretty"], None);
    assert_eq!(out.status.code(), Some(2));

    // Domain errors: malformed frame JSON, rejected construction.
    let out = run(&["verify"], Some(b"{\"schema\":\"nope\"}"));
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["construct", "c2r4r", "1", "--field", "real"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));

    // Success, including a negative existence answer.
    let out = run(&["exists", "7", "4", "2"], None);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn construct_kinds_cover_the_menu() {
    // trivial, f0, c2r4r complex, zauner, dsum, hoggar all emit parseable frames.
    let trivial = stdout_of(&run(&["construct", "trivial", "4", "4", "1"], None));
    let frame = FusionFrame::from_json(&trivial).unwrap();
    assert_eq!(
        (frame.dim(), frame.num_blocks(), frame.subspace_dim()),
        (4, 4, 1)
    );

    let f0 = stdout_of(&run(&["construct", "f0", "2"], None));
    let frame = FusionFrame::from_json(&f0).unwrap();
    assert_eq!((frame.dim(), frame.num_blocks()), (4, 4));

    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, stdout_of(&run(&["construct", "c2r4r", "2"], None))).unwrap();
    std::fs::write(
        &b,
        stdout_of(&run(&["construct", "zauner", "--v", "4", "--k", "2"], None)),
    )
    .unwrap();
    let dsum = stdout_of(&run(
        &[
            "construct",
            "dsum",
            "--a",
            a.to_str().unwrap(),
            "--b",
            b.to_str().unwrap(),
        ],
        None,
    ));
    let frame = FusionFrame::from_json(&dsum).unwrap();
    assert_eq!(
        (frame.dim(), frame.num_blocks(), frame.subspace_dim()),
        (10, 4, 5)
    );
    let rep = frame.verify(1e-9);
    assert!(rep.tight && rep.equichordal && !rep.equiisoclinic);

    let c2 = stdout_of(&run(&["construct", "c2r4r", "1"], None));
    let hoggar = stdout_of(&run(&["construct", "hoggar"], Some(c2.as_bytes())));
    let frame = FusionFrame::from_json(&hoggar).unwrap();
    assert_eq!(
        (frame.dim(), frame.num_blocks(), frame.subspace_dim()),
        (4, 4, 2)
    );
    let rep = frame.verify(1e-9);
    assert!(rep.tight && rep.equiisoclinic);
}

#[test]
fn harmonic_construct_from_group_literals() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.json");
    std::fs::write(&set, "[[0,0],[1,0],[4,0],[0,1],[2,1],[7,1]]").unwrap();
    let out = stdout_of(&run(
        &[
            "construct",
            "harmonic",
            "--group",
            "Z13xZ2",
            "--subgroup",
            "Z13x{0}",
            "--set",
            set.to_str().unwrap(),
        ],
        None,
    ));
    let frame = FusionFrame::from_json(&out).unwrap();
    assert_eq!(
        (frame.dim(), frame.num_blocks(), frame.subspace_dim()),
        (6, 13, 2)
    );
    let rep = frame.verify(1e-9);
    assert!(rep.tight && rep.equichordal);
}
