use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::{json, Value as Json};
use xcore::{Domain, Expr, InstanceBuilder};
use xcore_generators::{build_instance, manifest};
use xcore_io::cli::{run, EXIT_FAILED, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE};
use xcore_io::{write_instance, SolutionDoc};

fn xcore(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_xcore")).args(args).env_remove("XCORE_COLOR").output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("xcore").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn error_object(stderr: &str) -> Json {
    let line = stderr.lines().last().expect("an error line");
    serde_json::from_str(line).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_solve_check() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("ams3.json");
    let (code, _, err) = xcore(&["generate", "AnotherMagicSquare", "3", "-o", p(&inst)]);
    assert_eq!(code, EXIT_OK, "{err}");

    let (code, out, _) = xcore(&["solve", p(&inst)]);
    assert_eq!(code, EXIT_OK);
    let (status, doc) = out.split_once('\n').unwrap();
    assert_eq!(status, "SATISFIABLE");
    let sol = dir.path().join("sol.json");
    std::fs::write(&sol, doc).unwrap();
    let (code, out, _) = xcore(&["check", p(&inst), p(&sol)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(serde_json::from_str::<Json>(&out).unwrap()["ok"], true);

    let mut bad = SolutionDoc::parse(doc).unwrap();
    let v = bad.assignment["x[0][1]"];
    bad.assignment.insert("x[0][0]".into(), v);
    std::fs::write(&sol, bad.to_text()).unwrap();
    let (code, out, _) = xcore(&["check", p(&inst), p(&sol)]);
    assert_eq!(code, EXIT_FAILED);
    let report: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(report["ok"], false);
    assert!(!report["violated"].as_array().unwrap().is_empty());
    assert!(report["violated"][0]["index"].is_u64());
}

#[test]
fn objective_claims_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("km.json");
    let params = r#"{"distances":[[0,1,2],[1,0,3],[2,3,0]],"k":1}"#;
    let (code, _, err) = in_process(&["generate", "KMedian", params, "-o", p(&inst)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, out, _) = in_process(&["solve", p(&inst)]);
    assert_eq!(code, EXIT_OK);
    let (status, doc) = out.split_once('\n').unwrap();
    assert_eq!(status, "OPTIMUM FOUND");
    let mut sol = SolutionDoc::parse(doc).unwrap();
    assert_eq!(sol.objective, Some(3));
    sol.objective = Some(2);
    let file = dir.path().join("sol.json");
    std::fs::write(&file, sol.to_text()).unwrap();
    let (code, out, _) = in_process(&["check", p(&inst), p(&file)]);
    assert_eq!(code, EXIT_FAILED);
    let report: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(report["claimedObjective"], 2);
    assert_eq!(report["objective"], 3);
}

#[test]
fn usage_and_input_errors() {
    let (code, _, err) = xcore(&[]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(error_object(&err)["error"]["kind"], "usage");

    let (code, _, err) = xcore(&["solve", "/no/such/file.json"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(error_object(&err)["error"]["kind"], "input");

    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.json");
    std::fs::write(&inst, r#"{"format":"xcore-json/1","variables":[],"constraints":[{"type":"circle"}]}"#).unwrap();
    let (code, _, err) = xcore(&["solve", p(&inst)]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(error_object(&err)["error"]["path"], "$.constraints[0].type");

    let (code, _, err) = xcore(&["solve", p(&inst), "--cpu-limit=0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--cpu-limit"));

    let (code, _, err) = xcore(&["generate", "CoveringArray", "3", "4"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("expected 4 integer"));

    let (code, out, _) = xcore(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("generate"));
}

#[test]
fn fast_cop_preset_limits() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("jugs.json");
    assert_eq!(in_process(&["generate", "BeerJugs", "1,2", "-o", p(&inst)]).0, EXIT_OK);
    let (code, out, err) = in_process(&["solve", p(&inst), "--preset", "fast-cop"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("limits cpu=240s wall=720s"), "{err}");
    assert!(out.starts_with("OPTIMUM FOUND\n"));
    let (_, _, err) = in_process(&["solve", p(&inst)]);
    assert!(err.contains("limits cpu=2400s wall=7200s"), "{err}");
    let (_, _, err) = in_process(&["solve", p(&inst), "--preset", "fast-cop", "--wall-limit", "30"]);
    assert!(err.contains("limits cpu=240s wall=30s"), "{err}");
}

#[test]
fn optimize_log_records_improvements() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("km.json");
    let params = r#"{"distances":[[0,4,1,9],[4,0,2,3],[1,2,0,5],[9,3,5,0]],"k":2}"#;
    assert_eq!(in_process(&["generate", "KMedian", params, "-o", p(&inst)]).0, EXIT_OK);
    let log = dir.path().join("log.jsonl");
    let (code, _, _) = in_process(&["solve", p(&inst), "--optimize-log", p(&log), "--heuristic", "wdeg"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<Json> =
        std::fs::read_to_string(&log).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    let bounds: Vec<i64> = lines.iter().map(|l| l["bound"].as_i64().unwrap()).collect();
    assert!(bounds.windows(2).all(|w| w[1] < w[0]));
    assert!(lines.iter().all(|l| l["elapsed"].as_f64().unwrap() >= 0.0));
}

/// Twelve pigeons, eleven holes, pairwise disequalities only.
fn pigeonhole_text() -> String {
    let mut b = InstanceBuilder::new();
    let x = b.array("p", 12, |_| Domain::range(0, 10));
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            b.post(xcore::Constraint::Intension(Expr::ne(Expr::Var(x[i]), Expr::Var(x[j]))));
        }
    }
    write_instance(&b.build().unwrap())
}

#[test]
fn cpu_limit_gives_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("php.json");
    std::fs::write(&inst, pigeonhole_text()).unwrap();
    let start = Instant::now();
    let (code, out, _) = xcore(&["solve", p(&inst), "--cpu-limit", "1"]);
    assert_eq!(code, EXIT_UNKNOWN);
    assert_eq!(out, "UNKNOWN\n");
    assert!(start.elapsed() < Duration::from_secs(10), "took {:?}", start.elapsed());
}

#[test]
fn solutions_printed_by_solve_pass_check() {
    let dir = tempfile::tempdir().unwrap();
    let mut solved = 0;
    for (k, entry) in manifest().into_iter().filter(|e| e.desk).enumerate() {
        let inst = dir.path().join(format!("i{k}.json"));
        std::fs::write(&inst, write_instance(&build_instance(&entry.data).unwrap())).unwrap();
        let (code, out, err) = in_process(&["solve", p(&inst), "--wall-limit", "3"]);
        assert!(code == EXIT_OK || code == EXIT_UNKNOWN, "{:?}: {err}", entry.data.id());
        let Some((_, doc)) = out.split_once('\n').filter(|(_, d)| !d.is_empty()) else { continue };
        let sol = dir.path().join(format!("s{k}.json"));
        std::fs::write(&sol, doc).unwrap();
        let (code, report, _) = in_process(&["check", p(&inst), p(&sol)]);
        assert_eq!(code, EXIT_OK, "{:?}: {report}", entry.data.id());
        solved += 1;
    }
    assert!(solved > 0);
}

fn runs_file(dir: &Path) -> std::path::PathBuf {
    let run = |s: &str, i: &str, st: &str, b: Option<i64>| {
        let mut r = json!({"solver": s, "instance": i, "track": "COP", "status": st, "sense": "minimize", "elapsed": 1.0});
        if let Some(b) = b {
            r["bound"] = json!(b);
        }
        r.to_string()
    };
    let lines = [
        run("A", "opt-vs-best", "OPT", Some(10)),
        run("B", "opt-vs-best", "BEST", Some(10)),
        run("A", "dominated", "BEST", Some(8)),
        run("B", "dominated", "BEST", Some(10)),
        run("A", "unsat", "UNSAT", None),
        run("B", "unsat", "UNKNOWN", None),
    ];
    let path = dir.join("runs.jsonl");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    path
}

#[test]
fn score_reproduces_the_point_rules() {
    let dir = tempfile::tempdir().unwrap();
    let runs = runs_file(dir.path());
    let (code, out, err) = xcore(&["score", p(&runs)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Json = serde_json::from_str(&out).unwrap();
    let pts = &v["table"]["points"];
    assert_eq!(pts["A"], json!({"dominated": 1.0, "opt-vs-best": 1.0, "unsat": 1.0}));
    assert_eq!(pts["B"], json!({"dominated": 0.0, "opt-vs-best": 0.5, "unsat": 0.0}));
    assert_eq!(v["table"]["totals"], json!({"A": 3.0, "B": 0.5}));
    assert_eq!(v["ranking"][0], json!({"position": 1, "solver": "A", "points": 3.0, "medal": "gold"}));

    let (code, out, _) = xcore(&["score", p(&runs), "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("solver,instance,points\nA,dominated,1\n"));
    assert!(out.ends_with("solver,total\nA,3\nB,0.5\n"));

    let flags = dir.path().join("flags.json");
    std::fs::write(&flags, r#"{"A": {"off_competition": true}}"#).unwrap();
    let (_, out, _) = xcore(&["score", p(&runs), "--flags", p(&flags)]);
    let v: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ranking"].as_array().unwrap().len(), 1);
    assert_eq!(v["ranking"][0]["solver"], "B");

    let truth = dir.path().join("truth.json");
    std::fs::write(&truth, r#"{"dominated": 9}"#).unwrap();
    let (_, out, _) = xcore(&["score", p(&runs), "--truth", p(&truth)]);
    let v: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(v["table"]["points"]["A"]["dominated"], 0.0);
    assert_eq!(v["table"]["flags"][0]["kind"], "wrong-answer");

    let (code, _, err) = xcore(&["score", p(&runs), "--track", "mini-COP"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("no runs for track"));
}

#[test]
fn score_surfaces_contradictions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.jsonl");
    std::fs::write(
        &path,
        concat!(
            r#"{"solver":"A","instance":"i","track":"CSP","status":"UNSAT","elapsed":1}"#,
            "\n",
            r#"{"solver":"B","instance":"i","track":"CSP","status":"SAT","elapsed":1}"#,
            "\n"
        ),
    )
    .unwrap();
    let (code, _, err) = xcore(&["score", p(&path)]);
    assert_eq!(code, EXIT_FAILED);
    assert_eq!(error_object(&err)["error"]["kind"], "integrity");
}
