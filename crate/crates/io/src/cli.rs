//! The `xcore` command line: `generate`, `solve`, `check` and `score`.
//!
//! Exit codes: 0 ok, 1 check failed or inconsistent runs, 2 usage or bad
//! input, 3 internal error, 10 no answer within the limits.

use std::collections::BTreeMap;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use xcore::{check_instance, Instance, Status};
use xcore_generators::{build_instance, ProblemData, ProblemId};
use xcore_scoring::{rank, read_runs, score_runs, GroundTruth, RunRecord, ScoreError, SolverFlags};
use xcore_search::{solve, Heuristic, Limits, SolveError};

use crate::doc::{parse_document, write_instance, DocError, Mode};
use crate::json::to_compact;
use crate::solution::SolutionDoc;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 10;

/// Standard CSP and COP tracks.
pub const DEFAULT_LIMITS: (f64, f64) = (2400.0, 7200.0);
/// Fast optimization track.
pub const FAST_COP_LIMITS: (f64, f64) = (240.0, 720.0);

#[derive(Parser, Debug)]
#[command(name = "xcore", version, about = "Generate, solve, check and score constraint instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Csp,
    Cop,
    FastCop,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum HeuristicName {
    Dom,
    Wdeg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an instance of a problem model.
    Generate {
        problem: String,
        /// Integers, a JSON object, or a file holding either.
        #[arg(required = true, num_args = 1..)]
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve an instance and print the status line and a solution.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        preset: Option<Preset>,
        #[arg(long, value_name = "SECONDS")]
        cpu_limit: Option<f64>,
        #[arg(long, value_name = "SECONDS")]
        wall_limit: Option<f64>,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, value_enum, default_value = "dom")]
        heuristic: HeuristicName,
        /// Luby restarts with this many failures per unit.
        #[arg(long)]
        restarts: Option<u64>,
        /// Write every improving bound as a JSON line.
        #[arg(long, value_name = "FILE")]
        optimize_log: Option<PathBuf>,
        /// Search is deterministic; the seed is only recorded.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep unknown fields instead of rejecting the document.
        #[arg(long)]
        lax: bool,
    },
    /// Verify a solution against an instance.
    Check {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        lax: bool,
    },
    /// Score solver runs and rank the solvers of a track.
    Score {
        runs: PathBuf,
        /// Only runs of this track.
        #[arg(long)]
        track: Option<String>,
        /// Solver flags: name -> {off_competition, main_rank, team, variant_group}.
        #[arg(long)]
        flags: Option<PathBuf>,
        /// Known answers: instance -> "SAT" | "UNSAT" | optimum value.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// Failure carried to the exit code and the stderr error object.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    path: Option<String>,
}

impl Failure {
    fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Failure {
        Failure { code, kind, message: message.into(), path: None }
    }

    fn input(message: impl Into<String>) -> Failure {
        Failure::new(EXIT_USAGE, "input", message)
    }

    fn io(path: &Path, e: std::io::Error) -> Failure {
        Failure::input(format!("{}: {e}", path.display()))
    }

    fn doc(file: &Path, e: DocError) -> Failure {
        let mut f = Failure::input(format!("{}: {e}", file.display()));
        f.path = e.path().map(str::to_string);
        f
    }

    fn to_json(&self) -> Json {
        let mut e = json!({"kind": self.kind, "message": self.message, "exit": self.code});
        if let Some(p) = &self.path {
            e["path"] = json!(p);
        }
        json!({ "error": e })
    }
}

/// Effective limits: the preset (by instance type when absent), then explicit overrides.
pub fn resolve_limits(preset: Option<Preset>, is_cop: bool, cpu: Option<f64>, wall: Option<f64>, nodes: Option<u64>) -> Limits {
    let preset = preset.unwrap_or(if is_cop { Preset::Cop } else { Preset::Csp });
    let (c, w) = match preset {
        Preset::Csp | Preset::Cop => DEFAULT_LIMITS,
        Preset::FastCop => FAST_COP_LIMITS,
    };
    let mut l = Limits::cpu_secs(cpu.unwrap_or(c)).with_wall_secs(wall.unwrap_or(w));
    if let Some(n) = nodes {
        l = l.with_nodes(n);
    }
    l
}

pub fn status_line(status: Status, bound: Option<xcore::Value>) -> String {
    match (status, bound) {
        (Status::Sat, _) => "SATISFIABLE".into(),
        (Status::Unsat, _) => "UNSATISFIABLE".into(),
        (Status::Opt, _) => "OPTIMUM FOUND".into(),
        (Status::Best, Some(b)) => format!("SATISFIABLE (bound={b})"),
        (Status::Best, None) => "SATISFIABLE".into(),
        (Status::Unknown, _) => "UNKNOWN".into(),
    }
}

struct Streams<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

impl Streams<'_> {
    fn note(&mut self, msg: &str) {
        let _ = if self.color {
            writeln!(self.err, "\x1b[2mc {msg}\x1b[0m")
        } else {
            writeln!(self.err, "c {msg}")
        };
    }

    fn print(&mut self, text: &str) -> Result<(), Failure> {
        self.out.write_all(text.as_bytes()).map_err(|e| Failure::new(EXIT_INTERNAL, "internal", e.to_string()))
    }
}

fn color_enabled() -> bool {
    match std::env::var("XCORE_COLOR") {
        Ok(v) => !matches!(v.as_str(), "" | "0" | "never" | "false"),
        Err(_) => false,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn load_instance(path: &Path, lax: bool, s: &mut Streams) -> Result<Instance, Failure> {
    let mode = if lax { Mode::Lax } else { Mode::Strict };
    let doc = parse_document(&read(path)?, mode).map_err(|e| Failure::doc(path, e))?;
    for x in &doc.extras {
        s.note(&format!("unknown field kept: {}", x.path()));
    }
    Ok(doc.instance)
}

fn generate(problem: &str, params: &[String], output: Option<&Path>, s: &mut Streams) -> Result<i32, Failure> {
    let id = ProblemId::from_name(problem).ok_or_else(|| {
        let names: Vec<&str> = ProblemId::ALL.iter().map(|p| p.name()).collect();
        Failure::new(EXIT_USAGE, "usage", format!("unknown problem `{problem}`; known: {}", names.join(", ")))
    })?;
    let text = match params {
        [one] if Path::new(one).is_file() => read(Path::new(one))?,
        _ => params.join(" "),
    };
    let data = ProblemData::parse(id, &text).map_err(|e| Failure::input(e.to_string()))?;
    let inst = build_instance(&data).map_err(|e| Failure::input(e.to_string()))?;
    let text = write_instance(&inst);
    match output {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::io(p, e))?;
            s.note(&format!("wrote {} ({} variables, {} constraints)", p.display(), inst.n_vars(), inst.constraints.len()));
        }
        None => s.print(&text)?,
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn run_solve(
    path: &Path,
    preset: Option<Preset>,
    cpu: Option<f64>,
    wall: Option<f64>,
    nodes: Option<u64>,
    heuristic: HeuristicName,
    restarts: Option<u64>,
    log: Option<&Path>,
    seed: u64,
    lax: bool,
    s: &mut Streams,
) -> Result<i32, Failure> {
    for (name, v) in [("--cpu-limit", cpu), ("--wall-limit", wall)] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::new(EXIT_USAGE, "usage", format!("{name} must be a positive number of seconds")));
            }
        }
    }
    let inst = load_instance(path, lax, s)?;
    let limits = resolve_limits(preset, inst.is_cop(), cpu, wall, nodes);
    let mut h = match heuristic {
        HeuristicName::Dom => Heuristic::default(),
        HeuristicName::Wdeg => Heuristic::wdeg(),
    };
    if let Some(r) = restarts {
        h = h.with_restarts(r);
    }
    let secs = |d: Option<std::time::Duration>| d.map_or("none".to_string(), |d| format!("{}s", d.as_secs_f64()));
    s.note(&format!("limits cpu={} wall={} seed={seed}", secs(limits.cpu), secs(limits.wall)));
    let outcome = solve(&inst, &limits, &h).map_err(|e| match e {
        SolveError::Usage(m) => Failure::new(EXIT_USAGE, "usage", m),
        SolveError::Model(m) => Failure::input(m.to_string()),
        other => Failure::new(EXIT_INTERNAL, "internal", other.to_string()),
    })?;
    let st = &outcome.stats;
    s.note(&format!(
        "nodes={} fails={} restarts={} solutions={} wall={:.3}s cpu={:.3}s",
        st.nodes,
        st.fails,
        st.restarts,
        st.solutions,
        st.wall.as_secs_f64(),
        st.cpu.as_secs_f64()
    ));
    if let Some(p) = log {
        let lines: String = outcome
            .bound_log
            .iter()
            .map(|(t, b)| to_compact(&json!({"bound": b, "elapsed": t.as_secs_f64()})) + "\n")
            .collect();
        std::fs::write(p, lines).map_err(|e| Failure::io(p, e))?;
    }
    s.print(&(status_line(outcome.status, outcome.bound) + "\n"))?;
    if let Some(a) = &outcome.solution {
        let label = path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
        s.print(&SolutionDoc::from_assignment(&label, &inst, a).to_text())?;
    }
    Ok(if outcome.status == Status::Unknown { EXIT_UNKNOWN } else { EXIT_OK })
}

fn check(inst_path: &Path, sol_path: &Path, lax: bool, s: &mut Streams) -> Result<i32, Failure> {
    let inst = load_instance(inst_path, lax, s)?;
    let sol = SolutionDoc::parse(&read(sol_path)?).map_err(|e| Failure::doc(sol_path, e))?;
    let a = sol.to_assignment(&inst).map_err(|e| {
        let mut f = Failure::new(EXIT_FAILED, "solution", format!("{}: {e}", sol_path.display()));
        f.path = e.path().map(str::to_string);
        f
    })?;
    let v = check_instance(&inst, &a).map_err(|e| Failure::new(EXIT_INTERNAL, "internal", e.to_string()))?;
    let objective_ok = match (sol.objective, v.objective) {
        (Some(claimed), actual) => actual == Some(claimed),
        (None, _) => true,
    };
    let violated: Vec<Json> = v
        .violated
        .iter()
        .map(|&i| {
            let p = &inst.constraints[i];
            json!({"index": i, "type": p.constraint.kind().name(), "group": p.group})
        })
        .collect();
    let ok = v.ok && objective_ok;
    let mut report = json!({
        "ok": ok,
        "violated": violated,
        "outOfDomain": v.out_of_domain.iter().map(|&x| inst.name(x)).collect::<Vec<_>>(),
        "objective": v.objective,
    });
    if !objective_ok {
        report["claimedObjective"] = json!(sol.objective);
    }
    s.print(&(to_compact(&report) + "\n"))?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn score_failure(e: ScoreError) -> Failure {
    match e {
        ScoreError::Integrity { .. } => Failure::new(EXIT_FAILED, "integrity", e.to_string()),
        other => Failure::input(other.to_string()),
    }
}

fn parse_truth(text: &str, path: &Path) -> Result<BTreeMap<String, GroundTruth>, Failure> {
    let v: BTreeMap<String, Json> =
        serde_json::from_str(text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    v.into_iter()
        .map(|(k, x)| {
            let t = match &x {
                Json::String(s) if s == "SAT" => GroundTruth::Sat,
                Json::String(s) if s == "UNSAT" => GroundTruth::Unsat,
                Json::Number(n) if n.is_i64() => GroundTruth::Optimum(n.as_i64().unwrap()),
                _ => {
                    return Err(Failure::input(format!(
                        "{}: truth for `{k}` must be \"SAT\", \"UNSAT\" or an integer optimum",
                        path.display()
                    )))
                }
            };
            Ok((k, t))
        })
        .collect()
}

fn score(
    runs_path: &Path,
    track: Option<&str>,
    flags: Option<&Path>,
    truth: Option<&Path>,
    format: Format,
    s: &mut Streams,
) -> Result<i32, Failure> {
    let file = std::fs::File::open(runs_path).map_err(|e| Failure::io(runs_path, e))?;
    let mut runs: Vec<RunRecord> = read_runs(BufReader::new(file)).map_err(score_failure)?;
    if let Some(t) = track {
        runs.retain(|r| r.track == t);
        if runs.is_empty() {
            return Err(Failure::input(format!("no runs for track `{t}`")));
        }
    }
    let flags: BTreeMap<String, SolverFlags> = match flags {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => BTreeMap::new(),
    };
    let truth = match truth {
        Some(p) => parse_truth(&read(p)?, p)?,
        None => BTreeMap::new(),
    };
    let table = score_runs(&runs, &truth).map_err(score_failure)?;
    let ranking = rank(&table.track, &table.totals, &flags).map_err(score_failure)?;
    for f in &table.flags {
        s.note(&format!("flagged: {}", to_compact(&serde_json::to_value(f).unwrap_or(Json::Null))));
    }
    let text = match format {
        Format::Json => {
            let v = json!({"table": table.to_json(), "ranking": serde_json::to_value(&ranking).unwrap_or(Json::Null)});
            to_compact(&v) + "\n"
        }
        Format::Csv => format!("{}\n{}", table.to_csv(), table.totals_csv()),
    };
    s.print(&text)?;
    Ok(EXIT_OK)
}

/// Runs one command line (`argv[0]` is the program name) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let f = Failure::new(EXIT_USAGE, "usage", e.to_string().trim_end().to_string());
            let _ = writeln!(err, "{}", to_compact(&f.to_json()));
            return EXIT_USAGE;
        }
    };
    let mut s = Streams { out, err, color: color_enabled() };
    let result = match cli.command {
        Command::Generate { problem, params, output } => generate(&problem, &params, output.as_deref(), &mut s),
        Command::Solve { instance, preset, cpu_limit, wall_limit, node_limit, heuristic, restarts, optimize_log, seed, lax } => {
            run_solve(
                &instance,
                preset,
                cpu_limit,
                wall_limit,
                node_limit,
                heuristic,
                restarts,
                optimize_log.as_deref(),
                seed,
                lax,
                &mut s,
            )
        }
        Command::Check { instance, solution, lax } => check(&instance, &solution, lax, &mut s),
        Command::Score { runs, track, flags, truth, format } => {
            score(&runs, track.as_deref(), flags.as_deref(), truth.as_deref(), format, &mut s)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(s.err, "{}", to_compact(&f.to_json()));
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    #[test]
    fn presets() {
        let l = resolve_limits(Some(Preset::FastCop), true, None, None, None);
        assert_eq!((l.cpu, l.wall), (Some(Duration::from_secs(240)), Some(Duration::from_secs(720))));
        let l = resolve_limits(None, false, None, None, Some(5));
        assert_eq!((l.cpu, l.wall, l.nodes), (Some(Duration::from_secs(2400)), Some(Duration::from_secs(7200)), Some(5)));
        let l = resolve_limits(Some(Preset::FastCop), true, Some(1.0), None, None);
        assert_eq!((l.cpu, l.wall), (Some(Duration::from_secs(1)), Some(Duration::from_secs(720))));
    }

    #[test]
    fn status_lines() {
        assert_eq!(status_line(Status::Best, Some(-4)), "SATISFIABLE (bound=-4)");
        assert_eq!(status_line(Status::Opt, Some(3)), "OPTIMUM FOUND");
        assert_eq!(status_line(Status::Unknown, None), "UNKNOWN");
    }

    #[test]
    fn usage_errors_are_json() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["xcore", "frobnicate"], &mut out, &mut err), EXIT_USAGE);
        let v: Json = serde_json::from_slice(&err).unwrap();
        assert_eq!(v["error"]["kind"], "usage");
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["xcore", "generate", "NoSuchProblem", "3"], &mut out, &mut err), EXIT_USAGE);
        assert!(String::from_utf8(err).unwrap().contains("unknown problem"));
    }
}
