use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xcore::{
    check_instance, Assignment, Constraint, Instance, Objective, ObjectiveForm, Posted, Sense, Status, Value, VarId,
};
use xcore_search::{solve_decision, solve_optimize, Heuristic, Limits, SolveError};
use xcore_testkit::{all_kinds, cartesian, random_case};

/// Two random constraints over a shared set of variables.
fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let kinds = all_kinds();
    let a = random_case(kinds[rng.gen_range(0..kinds.len())], rng);
    let b = random_case(kinds[rng.gen_range(0..kinds.len())], rng);
    let n = a.domains.len() as u32;
    let mut inst = a.instance();
    inst.constraints.push(Posted::new(b.constraint.map_vars(&|v| VarId(v.0 % n))));
    inst
}

fn solutions(inst: &Instance) -> Vec<Vec<Value>> {
    let doms: Vec<_> = inst.variables.iter().map(|v| v.domain.clone()).collect();
    cartesian(&doms)
        .into_iter()
        .filter(|a| check_instance(inst, &Assignment(a.clone())).unwrap().ok)
        .collect()
}

fn heuristics() -> Vec<Heuristic> {
    vec![Heuristic::default(), Heuristic::wdeg(), Heuristic::wdeg().with_restarts(2)]
}

#[test]
fn satisfiability_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    for _ in 0..400 {
        let inst = random_instance(&mut rng);
        let sols = solutions(&inst);
        for h in heuristics() {
            let out = solve_decision(&inst, &Limits::unbounded(), &h).unwrap();
            match out.status {
                Status::Sat => {
                    assert!(!sols.is_empty());
                    assert!(sols.contains(&out.solution.unwrap().0));
                }
                Status::Unsat => assert!(sols.is_empty(), "missed a solution: {:?}", inst.constraints),
                s => panic!("unexpected {s}"),
            }
        }
    }
}

#[test]
fn optimum_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b7);
    for round in 0..300 {
        let mut inst = random_instance(&mut rng);
        let n = inst.n_vars();
        let scope: Vec<VarId> = (0..n as u32).map(VarId).collect();
        let coeffs: Vec<Value> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let sense = if round % 2 == 0 { Sense::Minimize } else { Sense::Maximize };
        let form = match round % 3 {
            0 => ObjectiveForm::Sum { scope, coeffs },
            1 => ObjectiveForm::Var(VarId(0)),
            _ => ObjectiveForm::Maximum(scope.iter().map(|&v| xcore::Expr::var(v)).collect()),
        };
        inst.objective = Some(Objective { sense, form });
        let obj = inst.objective.clone().unwrap();
        let best = solutions(&inst)
            .iter()
            .map(|a| obj.evaluate(a).unwrap())
            .reduce(|a, b| if sense.better(a, b) { a } else { b });
        for h in heuristics() {
            let out = solve_optimize(&inst, &Limits::unbounded(), &h).unwrap();
            match best {
                Some(b) => {
                    assert_eq!(out.status, Status::Opt);
                    assert_eq!(out.bound, Some(b));
                    assert_eq!(out.bound_log.last().map(|x| x.1), Some(b));
                    for w in out.bound_log.windows(2) {
                        assert!(sense.better(w[1].1, w[0].1), "bound log not improving");
                    }
                }
                None => assert_eq!(out.status, Status::Unsat),
            }
        }
    }
}

#[test]
fn node_limit_reports_unknown() {
    // pigeonhole: 7 pigeons, 6 holes, pairwise disequalities
    let mut b = xcore::InstanceBuilder::new();
    let xs = b.array("x", 7, |_| xcore::Domain::range(0, 5));
    for i in 0..7 {
        for j in i + 1..7 {
            b.post(Constraint::Intension(xcore::Expr::ne(xcore::Expr::var(xs[i]), xcore::Expr::var(xs[j]))));
        }
    }
    let inst = b.build().unwrap();
    let out = solve_decision(&inst, &Limits::nodes(20), &Heuristic::default()).unwrap();
    assert_eq!(out.status, Status::Unknown);
    assert_eq!(out.stats.limit, Some(xcore_search::LimitHit::Nodes));
    assert!(out.stats.nodes >= 20);
    let full = solve_decision(&inst, &Limits::unbounded(), &Heuristic::default()).unwrap();
    assert_eq!(full.status, Status::Unsat);
}

#[test]
fn mismatched_problem_kind_is_a_usage_error() {
    let mut b = xcore::InstanceBuilder::new();
    let x = b.var("x", xcore::Domain::range(0, 3));
    let csp = b.build().unwrap();
    assert!(matches!(solve_optimize(&csp, &Limits::unbounded(), &Heuristic::default()), Err(SolveError::Usage(_))));
    let mut b = xcore::InstanceBuilder::new();
    let y = b.var("x", xcore::Domain::range(0, 3));
    assert_eq!(x, y);
    b.objective(Sense::Minimize, ObjectiveForm::Var(y));
    let cop = b.build().unwrap();
    assert!(matches!(solve_decision(&cop, &Limits::unbounded(), &Heuristic::default()), Err(SolveError::Usage(_))));
    let none = Limits { cpu: None, wall: None, nodes: None, unbounded: false };
    assert!(matches!(solve_optimize(&cop, &none, &Heuristic::default()), Err(SolveError::Usage(_))));
}
