use bilinear_poisson::cli::{catalog_listing, run_scenario, strip_timing, Scenario, Status};
use std::path::{Path, PathBuf};
use std::process::Command;

const BUNDLED: &[&str] = &["casimirs", "classical-core", "dirac", "groupoid", "quantum-identities"];

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.toml"))
}

fn bpcheck(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bpcheck")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("bpcheck-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn untimed(name: &str, jobs: usize) -> String {
    run_scenario(&Scenario::load(&scenario_path(name)).unwrap(), jobs).unwrap().to_json_untimed()
}

#[test]
fn classical_core_matches_golden_report() {
    let got = untimed("classical-core", 0);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/classical-core.json");
    if std::env::var_os("BLESS").is_some() {
        std::fs::write(&golden, &got).unwrap();
    }
    assert_eq!(got, std::fs::read_to_string(golden).unwrap());
}

#[test]
fn classical_core_exits_zero_and_writes_report() {
    let dir = temp_dir("cc");
    let path = dir.join("nested/report.json");
    let (code, stdout, _) = bpcheck(&["run", scenario_path("classical-core").to_str().unwrap(), "--report", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with("}\n"));
    assert_eq!(strip_timing(&text), strip_timing(&untimed("classical-core", 0)));
    let leftovers: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}

#[test]
fn quantum_identities_records_r_perm_as_expected_fail() {
    let (code, stdout, _) = bpcheck(&["run", scenario_path("quantum-identities").to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let rec = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == "identity[R-perm,N=2]").unwrap();
    assert_eq!(rec["status"], "expected-fail");
    let minus = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == "identity[R-perm-minus,N=2]").unwrap();
    assert_eq!(minus["status"], "pass");
}

#[test]
fn every_bundled_scenario_matches_its_expectations() {
    for name in BUNDLED {
        let rep = run_scenario(&Scenario::load(&scenario_path(name)).unwrap(), 0).unwrap();
        let bad: Vec<_> = rep.checks.iter().filter(|c| !c.matched).map(|c| &c.id).collect();
        assert!(bad.is_empty(), "{name}: {bad:?}");
    }
}

#[test]
fn records_are_sorted_and_witnesses_only_on_fail_or_error() {
    for name in BUNDLED {
        let rep = run_scenario(&Scenario::load(&scenario_path(name)).unwrap(), 0).unwrap();
        assert!(rep.checks.windows(2).all(|w| w[0].id < w[1].id), "{name}");
        for c in &rep.checks {
            assert_eq!(c.witness.is_some(), matches!(c.status, Status::Fail | Status::Error), "{}", c.id);
        }
    }
}

#[test]
fn serial_and_parallel_runs_are_identical() {
    for name in BUNDLED {
        assert_eq!(untimed(name, 1), untimed(name, 4), "{name}");
    }
}

#[test]
fn unknown_check_id_exits_two() {
    let dir = temp_dir("unknown");
    let p = dir.join("s.toml");
    std::fs::write(&p, "name = \"x\"\n[[checks]]\nid = \"jacobi\"\nalgebra = { family = \"A\", n = 2 }\n[[checks]]\nid = \"no-such-check\"\n").unwrap();
    let (code, stdout, stderr) = bpcheck(&["run", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("no-such-check"));
}

#[test]
fn schema_errors_exit_two() {
    let dir = temp_dir("schema");
    for (i, body) in [
        "name = \"x\"\n[[checks]]\nid = \"jacobi\"\n",
        "name = \"x\"\n[[checks]]\nid = \"jacobi\"\nalgebra = { family = \"A\", n = 2 }\ncolour = \"red\"\n",
        "name = \"x\"\n[[checks]]\nid = \"identity\"\nentry = \"R-none\"\nn = 2\n",
        "this is not toml",
    ]
    .iter()
    .enumerate()
    {
        let p = dir.join(format!("s{i}.toml"));
        std::fs::write(&p, body).unwrap();
        assert_eq!(bpcheck(&["run", p.to_str().unwrap()]).0, 2, "{body}");
    }
    assert_eq!(bpcheck(&["run", dir.join("missing.toml").to_str().unwrap()]).0, 2);
    assert_eq!(bpcheck(&["run", scenario_path("classical-core").to_str().unwrap(), "--backend", "x"]).0, 2);
}

#[test]
fn mismatch_exits_one() {
    let dir = temp_dir("mismatch");
    let p = dir.join("s.toml");
    std::fs::write(&p, "name = \"x\"\n[[checks]]\nid = \"jacobi\"\nexpect = \"fail\"\nalgebra = { family = \"A\", n = 2 }\n").unwrap();
    let (code, stdout, _) = bpcheck(&["run", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["summary"]["mismatched"], 1);
}

#[test]
fn unwritable_report_exits_three() {
    let dir = temp_dir("unwritable");
    let blocker = dir.join("file");
    std::fs::write(&blocker, "").unwrap();
    let target = blocker.join("report.json");
    let (code, _, _) = bpcheck(&["run", scenario_path("groupoid").to_str().unwrap(), "--report", target.to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn flags_override_the_scenario() {
    let (code, stdout, _) = bpcheck(&[
        "run",
        scenario_path("casimirs").to_str().unwrap(),
        "--seed",
        "99",
        "--trials",
        "2",
        "--jobs",
        "2",
        "--prime",
        "4294967311",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["scenario"]["seed"], 99);
    assert_eq!(v["scenario"]["trials"], 2);
    assert_eq!(v["scenario"]["prime"], 4294967311u64);
    let (code, _, stderr) = bpcheck(&["run", scenario_path("casimirs").to_str().unwrap(), "--prime", "1000"]);
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn list_is_sorted_stable_and_complete() {
    let (code, a, _) = bpcheck(&["list"]);
    assert_eq!(code, 0);
    assert_eq!(a, bpcheck(&["list"]).1);
    assert_eq!(a, catalog_listing());
    assert!(a.contains("AB(ii)") && a.contains("YB-MN"));
    let section = |name: &str| -> Vec<String> {
        a.split(&format!("{name}:\n"))
            .nth(1)
            .unwrap()
            .lines()
            .take_while(|l| l.starts_with("  "))
            .map(|l| l.split_whitespace().next().unwrap().to_string())
            .collect()
    };
    for s in ["families", "checks", "maps", "identities"] {
        let xs = section(s);
        let mut sorted = xs.clone();
        sorted.sort();
        assert_eq!(xs, sorted, "{s}");
    }
    assert!(section("identities").len() >= 12);
}
