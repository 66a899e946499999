use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hkoty").chain(args.iter().copied());
    let code = hkoty::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out:?} {err:?}"));
    (code, v)
}

#[test]
fn msum_of_four_spin_halves() {
    let (code, v) = json(&["msum", "--algebra", "A1", "--k", "2", "--lambda", "0", "--n", "1:4,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["M"], 2);
    let (_, v) = json(&["nsum", "--algebra", "A1", "--k", "2", "--lambda", "0", "--n", "1:4,0"]);
    assert_eq!(v["N"], 2);
}

#[test]
fn g2_grid_has_no_failures() {
    let (code, v) = json(&["verify-mn", "--algebra", "G2", "--k", "1", "--max-n", "2", "--max-lambda", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["failures"], 0);
    assert!(v["checked"].as_u64().unwrap() > 0);
    assert_eq!(v["algebra"]["name"], "G2");
    assert!(v["version"].is_string());
}

#[test]
fn third_chebyshev_entry() {
    let (code, v) = json(&["qsystem", "--algebra", "A1", "--levels", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["entries"]["Q_(1,3)"], "t^3 - 2*t");
    let (code, text, _) = run(&["qsystem", "--algebra", "A1", "--levels", "3", "--text"]);
    assert_eq!(code, 0);
    assert!(text.contains("Q_(1,3) = t^3 - 2*t"), "{text}");
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        vec!["msum", "--algebra", "B2", "--k", "1", "--n", "2:1"],
        vec!["msum", "--algebra", "X9"],
        vec!["msum", "--algebra", "A1", "--k", "0"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn malformed_instance_file_names_the_field() {
    let dir = std::env::temp_dir().join(format!("hkoty-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"algebra":"B2","k":1,"lambda":[0,0],"n":{"2":[1,"x"]}}"#).unwrap();
    let (code, _, err) = run(&["msum", "--instance", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("/n/2/1"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn instance_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("hkoty-roundtrip-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let inst = hkoty::instance::from_flags(
        hkoty::instance::parse_algebra("C2").unwrap(),
        2,
        Some("0,1"),
        &["1:1,0,0,0;2:0,1".into()],
    )
    .unwrap();
    let text = hkoty::instance::canonical(&hkoty::instance::to_json(&inst));
    let path = dir.join("c2.json");
    std::fs::write(&path, &text).unwrap();
    let again = hkoty::instance::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(hkoty::instance::canonical(&hkoty::instance::to_json(&again)), text);
    let (code, v) = json(&["nsum", "--instance", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["instance"], serde_json::from_str::<Value>(&text).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_do_not_depend_on_jobs() {
    let args = ["sweep", "--algebra", "A2,B2", "--levels", "1,2", "--max-n", "2", "--max-lambda", "2"];
    let one: Vec<&str> = ["--jobs", "1"].iter().chain(args.iter()).copied().collect();
    let four: Vec<&str> = ["--jobs", "4"].iter().chain(args.iter()).copied().collect();
    let (c1, a, _) = run(&one);
    let (c4, b, _) = run(&four);
    assert_eq!((c1, c4), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn out_writes_the_report() {
    let path = std::env::temp_dir().join(format!("hkoty-out-{}.json", std::process::id()));
    let (code, stdout, _) =
        run(&["--out", path.to_str().unwrap(), "nsum", "--algebra", "A2", "--lambda", "1,1", "--n", "1:1;2:1"]);
    assert_eq!(code, 0);
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let v: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["N"], 1);
    assert!(stdout.is_empty() || stdout == written);
}

#[test]
fn identity_commands_pass_on_small_instances() {
    let (code, v) = json(&["verify", "--algebra", "A2", "--k", "2", "--n", "1:2,0", "--window", "3"]);
    assert_eq!(code, 0, "{v}");
    assert!(v["checks"].as_array().unwrap().len() > 3);
    let (code, v) = json(&["ps-check", "--algebra", "B2", "--k", "1", "--n", "2:1,0", "--window", "3"]);
    assert_eq!(code, 0, "{v}");
    let (code, _, err) = run(&["verify", "--statement", "zkone", "--algebra", "A1", "--k", "2"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn oracle_and_deformed_commands() {
    let (code, v) = json(&["oracle-check", "--grid", "sl2", "--max-weight", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["failures"], 0);
    let (code, v) = json(&["deformed", "--algebra", "B2", "--levels", "2", "--verify-recursion"]);
    assert_eq!(code, 0, "{v}");
}
