//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits non-zero when any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xcore::{check_constraint, check_instance, Assignment, ConstraintKind, Instance, Sense, Status, Value, VarId};
use xcore_generators::*;
use xcore_propagate::{propagate_one, DomainStore, PropagationResult};
use xcore_scoring::{rank, score_cop, score_csp, RunRecord, SolverFlags};
use xcore_search::{solve, Heuristic, Limits};
use xcore_testkit::{all_kinds, cartesian, models as oracle, naive_holds, random_case, Case};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const CASES_PER_FORM: usize = 200;

fn corpus(kind: ConstraintKind) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce ^ kind as u64);
    (0..CASES_PER_FORM).map(|_| random_case(kind, &mut rng)).collect()
}

fn semantics() -> Outcome {
    let kinds = all_kinds();
    ensure!(kinds.len() >= 24, "only {} forms in the corpus", kinds.len());
    let mut checked = 0usize;
    for kind in kinds {
        for case in corpus(kind) {
            for a in case.assignments() {
                let got = check_constraint(&case.constraint, &a);
                let want = naive_holds(&case.constraint, &a);
                ensure!(got == want, "{kind:?} on {a:?}: checker {got}, reference {want}: {:?}", case.constraint);
                checked += 1;
            }
        }
    }
    ensure!(checked > 0, "no assignments checked");
    Ok(())
}

fn propagation() -> Outcome {
    for kind in all_kinds() {
        for case in corpus(kind) {
            let sols = case.naive_solutions();
            let mut s = DomainStore::new(&case.domains);
            let r = propagate_one(&case.constraint, &mut s);
            if matches!(r, PropagationResult::Inconsistent(_)) {
                ensure!(sols.is_empty(), "{kind:?} failed with solutions: {:?}", case.constraint);
            } else {
                let scope: BTreeSet<VarId> = case.constraint.scope().into_iter().collect();
                for (i, d) in case.domains.iter().enumerate() {
                    let v = VarId(i as u32);
                    if !scope.contains(&v) {
                        ensure!(s.domain(v) == *d, "{kind:?} touched {v} outside its scope");
                    }
                    for sol in &sols {
                        ensure!(s.contains(v, sol[i]), "{kind:?} removed supported {} from {v}: {:?}", sol[i], case.constraint);
                    }
                }
            }
            for a in case.assignments() {
                let doms: Vec<_> = a.iter().map(|&x| xcore::Domain::singleton(x)).collect();
                let mut s = DomainStore::new(&doms);
                let kept = !matches!(propagate_one(&case.constraint, &mut s), PropagationResult::Inconsistent(_));
                ensure!(kept == check_constraint(&case.constraint, &a), "{kind:?} fixed at {a:?}: {:?}", case.constraint);
            }
        }
    }
    Ok(())
}

fn accepted(inst: &Instance) -> BTreeSet<Vec<Value>> {
    let domains: Vec<_> = inst.variables.iter().map(|v| v.domain.clone()).collect();
    cartesian(&domains).into_iter().filter(|a| check_instance(inst, &Assignment(a.clone())).unwrap().ok).collect()
}

fn parse(id: ProblemId, text: &str) -> ProblemData {
    ProblemData::parse(id, text).unwrap()
}

fn solved(p: &ProblemData) -> (Instance, xcore_search::SolveOutcome) {
    let inst = build_instance(p).unwrap();
    let out = solve(&inst, &Limits::unbounded(), &Heuristic::default()).unwrap();
    if let Some(a) = &out.solution {
        assert!(check_instance(&inst, a).unwrap().ok, "unverified solution");
    }
    (inst, out)
}

fn optimum_of(p: &ProblemData) -> Result<Value, String> {
    let (_, out) = solved(p);
    ensure!(out.status == Status::Opt, "{:?} ended with {:?}", p.id(), out.status);
    out.bound.ok_or_else(|| "optimum without a bound".to_string())
}

fn solver_vs_enumeration() -> Outcome {
    use ProblemId::*;

    let ams = parse(AnotherMagicSquare, "2");
    let want: BTreeSet<_> = oracle::another_magic_squares(2).into_iter().collect();
    ensure!(accepted(&build_instance(&ams).unwrap()) == want, "AnotherMagicSquare 2: model and enumeration differ");
    let status = solved(&ams).1.status;
    ensure!(status == if want.is_empty() { Status::Unsat } else { Status::Sat }, "AnotherMagicSquare 2: {status:?}");

    ensure!(oracle::antimagic_squares(3).is_empty(), "antimagic 3 enumeration found squares");
    let status = solved(&parse(AntimagicSquare, "3")).1.status;
    ensure!(status == Status::Unsat, "AntimagicSquare 3: {status:?}");

    for n in [5, 12, 15] {
        let p = parse(PythagoreanTriples, &n.to_string());
        let want: BTreeSet<_> = oracle::pythagorean_colourings(n).into_iter().collect();
        ensure!(accepted(&build_instance(&p).unwrap()) == want, "PythagoreanTriples {n}: solution sets differ");
        let (_, out) = solved(&p);
        match out.solution {
            Some(a) => ensure!(want.contains(&a.0), "PythagoreanTriples {n}: solver answer not enumerated"),
            None => ensure!(want.is_empty() && out.status == Status::Unsat, "PythagoreanTriples {n}: {:?}", out.status),
        }
    }

    let want: BTreeSet<_> = oracle::binary_puzzle_grids(4).into_iter().collect();
    for variant in ["4", "4 regular"] {
        let got = accepted(&build_instance(&parse(BinaryPuzzle, variant)).unwrap());
        ensure!(got == want, "BinaryPuzzle {variant}: {} solutions, enumeration has {}", got.len(), want.len());
    }

    let jugs = optimum_of(&parse(BeerJugs, "1,2"))?;
    let walk = oracle::longest_jug_walk(1, 2) as Value;
    ensure!(jugs == walk, "BeerJugs 1,2: solver {jugs}, state graph {walk}");

    let dist = vec![vec![0, 2, 4], vec![2, 0, 1], vec![4, 1, 0]];
    let km = optimum_of(&ProblemData::KMedian(KMedianData { distances: dist.clone(), k: 1 }))?;
    ensure!(km == 3 && oracle::k_median_optimum(&dist, 1) == 3, "KMedian: solver {km}");

    let (profits, wmatrix, capacities) = (vec![5, 3], vec![vec![2, 2]], vec![3]);
    let brute = oracle::gmkp_optimum(&profits, &wmatrix, &capacities, std::slice::from_ref(&profits));
    let gmkp = optimum_of(&ProblemData::GeneralizedMkp(GmkpData { profits, wmatrix, capacities, pmatrix: None }))?;
    ensure!(gmkp == 5 && brute == 5, "GeneralizedMKP: solver {gmkp}, enumeration {brute}");
    Ok(())
}

fn known_feasible() -> Outcome {
    let inst = build_instance(&ProblemData::CoveringArray(CoveringParams { t: 3, k: 4, g: 2, b: 8 })).unwrap();
    let rows: Vec<Vec<Value>> = cartesian(&vec![xcore::Domain::range(0, 1); 4])
        .into_iter()
        .filter(|r| r.iter().sum::<Value>() % 2 == 0)
        .collect();
    ensure!(rows.len() == 8, "expected 8 even-parity rows");
    let mut a = vec![0; inst.n_vars()];
    for (i, co) in (0..4usize).combinations(3).enumerate() {
        for (col, row) in rows.iter().enumerate() {
            let code = co.iter().fold(0, |acc, &p| acc * 2 + row[p]);
            let v = inst.var_by_name(&format!("v[{i}][{col}]")).ok_or("missing v variable")?;
            let p = inst.var_by_name(&format!("p[{i}][{code}]")).ok_or("missing p variable")?;
            a[v.index()] = code;
            a[p.index()] = col as Value;
        }
    }
    let verdict = check_instance(&inst, &Assignment(a)).unwrap();
    ensure!(verdict.ok, "covering array rejected: {verdict:?}");

    let tri = parse(ProblemId::Coloring, r#"{"n": 3, "nColors": 3, "edges": [[0,1],[1,2],[0,2]]}"#);
    let inst = build_instance(&tri).unwrap();
    let mut a = vec![0; inst.n_vars()];
    for i in 0..3 {
        a[inst.var_by_name(&format!("x[{i}]")).ok_or("missing colour variable")?.index()] = i as Value;
    }
    let verdict = check_instance(&inst, &Assignment(a)).unwrap();
    ensure!(verdict.ok, "triangle colouring rejected: {verdict:?}");
    Ok(())
}

fn word_list() -> Outcome {
    // A=0 C=1 G=2 T=3; Watson-Crick pairs A-T and C-G
    const COMPLEMENT: [Value; 4] = [3, 2, 1, 0];
    let mut want = Vec::new();
    for code in 0..65536u32 {
        let w: Vec<Value> = (0..8).map(|k| ((code >> (14 - 2 * k)) & 3) as Value).collect();
        let gc = w.iter().filter(|&&c| c == 1 || c == 2).count();
        let rev: Vec<Value> = w.iter().rev().copied().collect();
        let comp: Vec<Value> = w.iter().map(|&c| COMPLEMENT[c as usize]).collect();
        let distance = rev.iter().zip(&comp).filter(|(a, b)| a != b).count();
        if gc == 4 && distance >= 4 {
            want.push(w);
        }
    }
    let got: Vec<Vec<Value>> = word_design_words().into_iter().map(|w| w.to_vec()).collect();
    ensure!(got == want, "word list has {} entries, brute force {}", got.len(), want.len());
    let head = [[0, 0, 0, 0, 1, 1, 1, 1], [0, 0, 0, 0, 1, 1, 1, 2], [0, 0, 0, 0, 1, 1, 2, 1], [0, 0, 0, 0, 1, 1, 2, 2]];
    for (k, w) in head.iter().enumerate() {
        ensure!(got[k] == w, "word {k} is {:?}, expected {w:?}", got[k]);
    }
    Ok(())
}

fn scoring() -> Outcome {
    let pts = |s: &xcore_scoring::InstanceScore| -> Vec<(String, f64)> { s.points.clone().into_iter().collect() };
    let csp = |s: &str, st| RunRecord::new(s, "c", "CSP", st, None, None);
    let cop = |s: &str, st, b| RunRecord::new(s, "o", "COP", st, b, Some(Sense::Minimize));
    let want = |v: &[(&str, f64)]| -> Vec<(String, f64)> { v.iter().map(|(s, p)| (s.to_string(), *p)).collect() };

    let s = score_csp(&[csp("A", Status::Sat), csp("B", Status::Unknown)], None).map_err(|e| e.to_string())?;
    ensure!(pts(&s) == want(&[("A", 1.0), ("B", 0.0)]), "SAT/UNKNOWN: {:?}", s.points);
    let s = score_csp(&[csp("A", Status::Unsat), csp("B", Status::Unsat)], None).map_err(|e| e.to_string())?;
    ensure!(pts(&s) == want(&[("A", 1.0), ("B", 1.0)]), "UNSAT/UNSAT: {:?}", s.points);
    let s = score_csp(&[], None).map_err(|e| e.to_string())?;
    ensure!(s.points.is_empty(), "empty run set scored");

    let s = score_cop(&[cop("A", Status::Opt, Some(10)), cop("B", Status::Best, Some(10))], None).map_err(|e| e.to_string())?;
    ensure!(pts(&s) == want(&[("A", 1.0), ("B", 0.5)]), "OPT 10 / BEST 10: {:?}", s.points);
    let s = score_cop(&[cop("A", Status::Best, Some(8)), cop("B", Status::Best, Some(10))], None).map_err(|e| e.to_string())?;
    ensure!(pts(&s) == want(&[("A", 1.0), ("B", 0.0)]), "BEST 8 / BEST 10: {:?}", s.points);
    let s = score_cop(&[cop("A", Status::Unsat, None), cop("B", Status::Unknown, None)], None).map_err(|e| e.to_string())?;
    ensure!(pts(&s) == want(&[("A", 1.0), ("B", 0.0)]), "UNSAT / UNKNOWN: {:?}", s.points);

    let totals = |v: &[(&str, f64)]| -> BTreeMap<String, f64> { v.iter().map(|(s, p)| (s.to_string(), *p)).collect() };
    let order = |r: Vec<xcore_scoring::Ranked>| -> Vec<String> { r.into_iter().map(|x| x.solver).collect() };

    let mut flags = BTreeMap::new();
    flags.insert("top".to_string(), SolverFlags { off_competition: true, ..Default::default() });
    let r = rank("COP", &totals(&[("top", 50.0), ("a", 40.0), ("b", 30.0)]), &flags).map_err(|e| e.to_string())?;
    ensure!(order(r) == ["a", "b"], "off-competition solver ranked");

    let mut flags = BTreeMap::new();
    flags.insert("a".to_string(), SolverFlags { main_rank: Some(2), ..Default::default() });
    flags.insert("b".to_string(), SolverFlags { main_rank: Some(5), ..Default::default() });
    let r = rank("mini-COP", &totals(&[("a", 30.0), ("b", 29.0), ("c", 10.0)]), &flags).map_err(|e| e.to_string())?;
    ensure!(order(r) == ["b", "c"], "main-track runner-up kept in the mini track");

    let variant = SolverFlags { team: "t".into(), variant_group: Some("s".into()), ..Default::default() };
    let flags: BTreeMap<String, SolverFlags> =
        [("s1".to_string(), variant.clone()), ("s2".to_string(), variant)].into_iter().collect();
    let r = rank("CSP", &totals(&[("s1", 20.0), ("s2", 25.0), ("o", 22.0)]), &flags).map_err(|e| e.to_string())?;
    ensure!(order(r) == ["s2", "o"], "weaker variant kept");
    Ok(())
}

fn manifest_regeneration() -> Outcome {
    let entries = manifest();
    let mut counts: BTreeMap<ProblemId, usize> = BTreeMap::new();
    for e in &entries {
        let inst = build_instance(&e.data).map_err(|err| format!("{:?}: {err}", e.data))?;
        let (got, want) = (Shape::of(&inst), expected_shape(&e.data));
        ensure!(got == want, "{:?}: shape {got:?}, expected {want:?}", e.data);
        *counts.entry(e.data.id()).or_default() += 1;
    }
    use ProblemId::*;
    let listed = [
        (AnotherMagicSquare, 10),
        (AntimagicSquare, 10),
        (BinaryPuzzle, 12),
        (CalvinPuzzle, 14),
        (CoveringArray, 12),
        (NonTransitiveDice, 12),
        (PythagoreanTriples, 8),
        (SquarePacking, 10),
        (WordDesign, 10),
        (BeerJugs, 8),
    ];
    for (id, n) in listed {
        ensure!(counts.get(&id) == Some(&n), "{id}: {:?} entries, expected {n}", counts.get(&id));
    }

    let covering: Vec<(Value, Value, Value, Value)> = entries
        .iter()
        .filter_map(|e| match &e.data {
            ProblemData::CoveringArray(c) => Some((c.t, c.k, c.g, c.b)),
            _ => None,
        })
        .collect();
    let listed = [
        (3, 4, 2, 8),
        (3, 5, 2, 10),
        (3, 6, 2, 12),
        (3, 7, 2, 12),
        (3, 8, 2, 12),
        (3, 9, 2, 12),
        (3, 10, 2, 12),
        (3, 11, 2, 12),
        (4, 6, 2, 21),
        (4, 7, 2, 38),
        (4, 8, 2, 42),
        (4, 9, 2, 50),
    ];
    ensure!(covering == listed, "covering tuples {covering:?}");

    let dice: Vec<(Value, Value, Value)> = entries
        .iter()
        .filter_map(|e| match &e.data {
            ProblemData::NonTransitiveDice(d) => Some((d.n, d.m, d.d)),
            _ => None,
        })
        .collect();
    let listed = [
        (6, 6, 0),
        (8, 8, 0),
        (8, 8, 3),
        (10, 10, 0),
        (10, 10, 3),
        (15, 15, 3),
        (15, 15, 4),
        (20, 20, 3),
        (20, 20, 4),
        (30, 30, 3),
        (30, 30, 4),
        (40, 40, 0),
    ];
    ensure!(dice == listed, "dice tuples {dice:?}");
    Ok(())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("constraint semantics vs reference predicates", semantics, Duration::from_secs(30)),
        ("propagator soundness and fixed-scope verdicts", propagation, Duration::from_secs(120)),
        ("solver answers vs enumeration", solver_vs_enumeration, Duration::from_secs(300)),
        ("known-feasible constructions accepted", known_feasible, Duration::from_secs(60)),
        ("word design list vs brute force", word_list, Duration::from_secs(5)),
        ("scoring rules and ranking discards", scoring, Duration::from_secs(10)),
        ("manifest regeneration and shape conformance", manifest_regeneration, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let result = result.and_then(|()| {
            if took <= budget {
                Ok(())
            } else {
                Err(format!("took {took:.1?}, budget {budget:?}"))
            }
        });
        match result {
            Ok(()) => println!("PASS {} {name} ({took:.2?})", k + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name} ({took:.2?}): {e}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
