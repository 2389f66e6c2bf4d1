//! Solver answers on small parameter points, checked against brute-force
//! answers computed straight from the puzzle statements.

use std::collections::BTreeSet;

use itertools::Itertools;
use xcore::{check_instance, Assignment, Instance, Status, Value};
use xcore_generators::*;
use xcore_search::{solve, Heuristic, Limits, SolveOutcome};
use xcore_testkit::models as oracle;

fn data(id: ProblemId, s: &str) -> ProblemData {
    ProblemData::parse(id, s).unwrap()
}

fn run(p: &ProblemData) -> (Instance, SolveOutcome) {
    let inst = build_instance(p).unwrap();
    let out = solve(&inst, &Limits::unbounded(), &Heuristic::default()).unwrap();
    (inst, out)
}

fn val(inst: &Instance, a: &Assignment, name: &str) -> Value {
    a[inst.var_by_name(name).unwrap_or_else(|| panic!("no variable {name}"))]
}

fn grid(inst: &Instance, a: &Assignment, name: &str, rows: usize, cols: usize) -> Vec<Vec<Value>> {
    (0..rows).map(|i| (0..cols).map(|j| val(inst, a, &format!("{name}[{i}][{j}]"))).collect()).collect()
}

/// Every full assignment over the declared domains that the checker accepts.
fn accepted(inst: &Instance) -> BTreeSet<Vec<Value>> {
    let domains: Vec<Vec<Value>> = (0..inst.n_vars()).map(|i| inst.domain(xcore::VarId(i as u32)).iter().collect()).collect();
    domains
        .into_iter()
        .multi_cartesian_product()
        .filter(|a| check_instance(inst, &Assignment(a.clone())).unwrap().ok)
        .collect()
}

fn optimum(p: &ProblemData) -> Option<Value> {
    let (inst, out) = run(p);
    match out.status {
        Status::Opt => {
            let a = out.solution.unwrap();
            assert!(check_instance(&inst, &a).unwrap().ok);
            out.bound
        }
        Status::Unsat => None,
        s => panic!("unexpected status {s:?}"),
    }
}

#[test]
fn another_magic_square_solutions() {
    let inst = build_instance(&data(ProblemId::AnotherMagicSquare, "2")).unwrap();
    let expected: BTreeSet<Vec<Value>> = oracle::another_magic_squares(2).into_iter().collect();
    assert_eq!(accepted(&inst), expected);
    assert_eq!(run(&data(ProblemId::AnotherMagicSquare, "2")).1.status, Status::Unsat);
}

#[test]
fn antimagic_three_is_unsat() {
    assert!(oracle::antimagic_squares(3).is_empty());
    assert_eq!(run(&data(ProblemId::AntimagicSquare, "3")).1.status, Status::Unsat);
}

#[test]
fn pythagorean_solutions() {
    for n in [5, 12, 15] {
        let p = data(ProblemId::PythagoreanTriples, &n.to_string());
        let inst = build_instance(&p).unwrap();
        let expected: BTreeSet<Vec<Value>> = oracle::pythagorean_colourings(n).into_iter().collect();
        assert_eq!(accepted(&inst), expected, "n = {n}");
        assert_eq!(run(&p).1.status, Status::Sat);
    }
}

#[test]
fn binary_puzzle_variants_agree() {
    let main = build_instance(&data(ProblemId::BinaryPuzzle, "4")).unwrap();
    let regular = build_instance(&data(ProblemId::BinaryPuzzle, "4 regular")).unwrap();
    let expected: BTreeSet<Vec<Value>> = oracle::binary_puzzle_grids(4).into_iter().collect();
    assert!(!expected.is_empty());
    assert_eq!(accepted(&main), expected);
    assert_eq!(accepted(&regular), expected);

    let grids = oracle::binary_puzzle_grids(6);
    assert!(!grids.is_empty());
    for variant in ["6", "6 regular"] {
        let inst = build_instance(&data(ProblemId::BinaryPuzzle, variant)).unwrap();
        for g in &grids {
            assert!(check_instance(&inst, &Assignment(g.clone())).unwrap().ok, "{variant}: {g:?}");
        }
        let out = solve(&inst, &Limits::unbounded(), &Heuristic::default()).unwrap();
        assert!(grids.contains(&out.solution.unwrap().0));
    }
}

fn calvin_tour_ok(g: &[Vec<Value>]) -> bool {
    let n = g.len();
    let mut at = vec![(0usize, 0usize); n * n + 1];
    for i in 0..n {
        for j in 0..n {
            at[g[i][j] as usize] = (i, j);
        }
    }
    g[0][0] == 1
        && (1..n * n).all(|v| {
            let (a, b) = at[v];
            let (c, d) = at[v + 1];
            let (di, dj) = (a.abs_diff(c), b.abs_diff(d));
            matches!((di, dj), (3, 0) | (0, 3) | (2, 2))
        })
}

#[test]
fn calvin_variants_agree() {
    for n in [3, 4] {
        let (ia, a) = run(&data(ProblemId::CalvinPuzzle, &n.to_string()));
        let (ib, b) = run(&data(ProblemId::CalvinPuzzle, &format!("{n} table")));
        assert_eq!(a.status, b.status, "n = {n}");
        if a.status == Status::Sat {
            let nu = n as usize;
            assert!(calvin_tour_ok(&grid(&ia, a.solution.as_ref().unwrap(), "x", nu, nu)));
            assert!(calvin_tour_ok(&grid(&ib, b.solution.as_ref().unwrap(), "x", nu, nu)));
        }
    }
}

#[test]
fn beer_jugs_longest_walk() {
    for (a, b) in [(1, 2), (2, 3)] {
        let want = oracle::longest_jug_walk(a, b) as Value;
        assert_eq!(optimum(&data(ProblemId::BeerJugs, &format!("{a},{b}"))), Some(want), "jugs {a},{b}");
    }
}

#[test]
fn k_median_optima() {
    for (dist, k) in [
        (vec![vec![0, 2, 4], vec![2, 0, 1], vec![4, 1, 0]], 1),
        (vec![vec![0, 2, 4], vec![2, 0, 1], vec![4, 1, 0]], 2),
        (vec![vec![0, 3, 4, 5], vec![3, 0, 1, 2], vec![4, 1, 0, 6], vec![5, 2, 6, 0]], 2),
    ] {
        let p = ProblemData::KMedian(KMedianData { distances: dist.clone(), k: k as i64 });
        assert_eq!(optimum(&p), Some(oracle::k_median_optimum(&dist, k)));
    }
    let toy = ProblemData::KMedian(KMedianData { distances: vec![vec![0, 2, 4], vec![2, 0, 1], vec![4, 1, 0]], k: 1 });
    assert_eq!(optimum(&toy), Some(3));
}

#[test]
fn gmkp_optima() {
    let cases = [
        (vec![5, 3], vec![vec![2, 2]], vec![3], None),
        (vec![5, 3, 4], vec![vec![2, 2, 1], vec![1, 3, 2]], vec![3, 4], None),
        (vec![1, 2], vec![vec![1, 1], vec![2, 2]], vec![1, 2], Some(vec![vec![2, 2], vec![1, 3]])),
        (vec![4, 4, 1], vec![vec![1, 1, 1]], vec![2], Some(vec![vec![1, 9, 9]])),
    ];
    for (profits, wmatrix, capacities, pmatrix) in cases {
        let pm = pmatrix.clone().unwrap_or_else(|| vec![profits.clone(); wmatrix.len()]);
        let want = oracle::gmkp_optimum(&profits, &wmatrix, &capacities, &pm);
        let p = ProblemData::GeneralizedMkp(GmkpData { profits, wmatrix, capacities, pmatrix });
        assert_eq!(optimum(&p), Some(want));
    }
}

#[test]
fn gmkp_toy_objective() {
    let p = data(ProblemId::GeneralizedMkp, r#"{"profits": [5,3], "wmatrix": [[2,2]], "capacities": [3]}"#);
    let inst = build_instance(&p).unwrap();
    let mut a = vec![0; inst.n_vars()];
    a[inst.var_by_name("x[0]").unwrap().index()] = 1;
    a[inst.var_by_name("w[0]").unwrap().index()] = 2;
    a[inst.var_by_name("z").unwrap().index()] = 5;
    let v = check_instance(&inst, &Assignment(a)).unwrap();
    assert!(v.ok, "{v:?}");
    assert_eq!(v.objective, Some(5));
}

#[test]
fn kidney_optima() {
    let weights = vec![vec![0, 2, -1, 1], vec![1, 0, 3, -1], vec![4, -1, 0, 2], vec![-1, 5, 1, 0]];
    for k in 1..=4 {
        let want = oracle::kidney_optimum(&weights, k);
        let p = ProblemData::KidneyExchange(KidneyData { weights: weights.clone(), k: k as i64 });
        assert_eq!(optimum(&p), want, "k = {k}");
    }
}

#[test]
fn tsptw_optima() {
    let cases: Vec<(Vec<Vec<Value>>, Vec<(Value, Value)>)> = vec![
        (vec![vec![0, 2, 3], vec![2, 0, 4], vec![3, 4, 0]], vec![(0, 50), (0, 50), (0, 50)]),
        (vec![vec![0, 1], vec![1, 0]], vec![(0, 10), (1, 5)]),
        (
            vec![vec![0, 1, 2, 3], vec![1, 0, 1, 2], vec![2, 1, 0, 1], vec![3, 2, 1, 0]],
            vec![(0, 40), (1, 9), (2, 20), (0, 30)],
        ),
        (
            vec![vec![0, 1, 2, 3], vec![1, 0, 1, 2], vec![2, 1, 0, 1], vec![3, 2, 1, 0]],
            vec![(0, 40), (6, 9), (0, 2), (0, 30)],
        ),
        (vec![vec![0, 5, 5], vec![5, 0, 5], vec![5, 5, 0]], vec![(0, 20), (0, 4), (0, 20)]),
    ];
    for (distances, windows) in cases {
        let want = oracle::tsptw_optimum(&distances, &windows);
        let p = ProblemData::Tsptw(TsptwData { distances, windows });
        assert_eq!(optimum(&p), want);
    }
}

#[test]
fn sonet_optima() {
    for (n, m, r, demands) in [
        (3, 2, 2, vec![(0, 1), (1, 2)]),
        (4, 3, 3, vec![(0, 1), (1, 2), (2, 3), (0, 3)]),
        (4, 2, 2, vec![(0, 1), (1, 2), (2, 3)]),
    ] {
        let want = oracle::sonet_optimum(n, m, r, &demands);
        let connections = demands.iter().map(|&(u, v)| (u as i64, v as i64)).collect();
        let p = ProblemData::Sonet(SonetData { n: n as i64, m: m as i64, r: r as i64, connections });
        assert_eq!(optimum(&p), want);
    }
}

#[test]
fn scheduling_optima() {
    for (limit, durations, heights) in
        [(2, vec![2, 1, 2], vec![1, 1, 2]), (3, vec![1, 2, 2, 1], vec![2, 1, 2, 3]), (1, vec![3, 1], vec![1, 1])]
    {
        let horizon = durations.iter().sum::<Value>() + 1;
        let want = oracle::scheduling_optimum(limit, &durations, &heights, horizon);
        let p = ProblemData::LargeScaleScheduling(SchedulingData { limit, durations, heights });
        assert_eq!(optimum(&p), want);
    }
}

#[test]
fn rip_optima() {
    let jobs = |rows: &[(Value, Vec<i64>, Vec<Value>)]| -> Vec<Job> {
        rows.iter().map(|(d, s, r)| Job { duration: *d, successors: s.clone(), requirements: r.clone() }).collect()
    };
    let cases = [
        (6, vec![2, 1], jobs(&[(2, vec![1], vec![1, 0]), (1, vec![], vec![1, 2]), (2, vec![], vec![2, 1])])),
        (4, vec![1, 3], jobs(&[(2, vec![], vec![1, 1]), (2, vec![], vec![1, 1]), (1, vec![0], vec![0, 2])])),
        (3, vec![1], jobs(&[(2, vec![1], vec![1]), (2, vec![], vec![1])])),
    ];
    for (horizon, costs, jobs) in cases {
        let durations: Vec<Value> = jobs.iter().map(|j| j.duration).collect();
        let succ: Vec<Vec<usize>> = jobs.iter().map(|j| j.successors.iter().map(|&s| s as usize).collect()).collect();
        let req: Vec<Vec<Value>> = jobs.iter().map(|j| j.requirements.clone()).collect();
        let want = oracle::rip_optimum(horizon, &costs, &durations, &succ, &req);
        let p = ProblemData::Rip(RipData { horizon, costs, jobs });
        assert_eq!(optimum(&p), want);
    }
}

#[test]
fn coloring_triangle() {
    let p = data(ProblemId::Coloring, r#"{"n": 3, "nColors": 3, "edges": [[0,1],[1,2],[0,2]]}"#);
    let (inst, out) = run(&p);
    assert_eq!(out.status, Status::Sat);
    let a = out.solution.unwrap();
    let c: Vec<Value> = (0..3).map(|i| val(&inst, &a, &format!("x[{i}]"))).collect();
    assert!(c[0] != c[1] && c[1] != c[2] && c[0] != c[2]);
    let two = data(ProblemId::Coloring, r#"{"n": 3, "nColors": 2, "edges": [[0,1],[1,2],[0,2]]}"#);
    assert_eq!(run(&two).1.status, Status::Unsat);
}

/// Rows of a `b x k` array over `0..g` recovered from the per-combination
/// codes, most significant position first.
fn decode_covering(codes: &[Vec<Value>], t: usize, k: usize, g: Value, b: usize) -> Vec<Vec<Value>> {
    let combos: Vec<Vec<usize>> = (0..k).combinations(t).collect();
    (0..b)
        .map(|col| {
            std::iter::repeat_n(0..g, k)
                .multi_cartesian_product()
                .find(|row| {
                    combos.iter().enumerate().all(|(i, co)| {
                        let code = co.iter().fold(0, |acc, &p| acc * g + row[p]);
                        code == codes[i][col]
                    })
                })
                .expect("column matches some row")
        })
        .collect()
}

#[test]
fn covering_array_is_covering() {
    let (t, k, g, b) = (3usize, 4usize, 2, 8usize);
    let parity = data(ProblemId::CoveringArray, "3,4,2,8");
    let inst = build_instance(&parity).unwrap();
    // the eight even-parity rows cover every triple of positions
    let rows: Vec<Vec<Value>> =
        std::iter::repeat_n(0..2, 4).multi_cartesian_product().filter(|r| r.iter().sum::<Value>() % 2 == 0).collect();
    let combos: Vec<Vec<usize>> = (0..k).combinations(t).collect();
    let mut a = vec![0; inst.n_vars()];
    for (i, co) in combos.iter().enumerate() {
        for (col, row) in rows.iter().enumerate() {
            let code = co.iter().fold(0, |acc, &p| acc * g + row[p]);
            a[inst.var_by_name(&format!("v[{i}][{col}]")).unwrap().index()] = code;
            a[inst.var_by_name(&format!("p[{i}][{code}]")).unwrap().index()] = col as Value;
        }
    }
    assert!(check_instance(&inst, &Assignment(a)).unwrap().ok);

    let out = solve(&inst, &Limits::unbounded(), &Heuristic::default()).unwrap();
    assert_eq!(out.status, Status::Sat);
    let codes = grid(&inst, out.solution.as_ref().unwrap(), "v", combos.len(), b);
    let array = decode_covering(&codes, t, k, g, b);
    for co in &combos {
        let seen: BTreeSet<Vec<Value>> = array.iter().map(|r| co.iter().map(|&p| r[p]).collect()).collect();
        assert_eq!(seen.len(), 8, "{co:?}");
    }
    // fewer rows than value combinations cannot cover
    assert!(build_instance(&data(ProblemId::CoveringArray, "3,4,2,7")).is_err());
}

#[test]
fn dominoes_tiling() {
    let g = vec![vec![0, 0, 1], vec![0, 1, 1]];
    let (inst, out) = run(&ProblemData::Dominoes(Grid { grid: g.clone() }));
    assert_eq!(out.status, Status::Sat);
    let a = out.solution.unwrap();
    let mut used = BTreeSet::new();
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let (p, q) = (val(&inst, &a, &format!("x[{i}][{j}]")), val(&inst, &a, &format!("y[{i}][{j}]")));
        let (pr, pc, qr, qc) = (p / 3, p % 3, q / 3, q % 3);
        assert_eq!(g[pr as usize][pc as usize], i as Value);
        assert_eq!(g[qr as usize][qc as usize], j as Value);
        assert_eq!((pr - qr).abs() + (pc - qc).abs(), 1);
        assert!(used.insert(p) && used.insert(q));
    }
}

fn slant_ok(clues: &[Vec<Value>], e: &[Vec<Value>]) -> bool {
    let n = clues.len();
    let mut parent: Vec<usize> = (0..n * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut degree = vec![0; n * n];
    for (r, row) in e.iter().enumerate() {
        for (c, &d) in row.iter().enumerate() {
            // 0 joins top-left to bottom-right, 1 joins bottom-left to top-right
            let (u, v) = if d == 0 { (r * n + c, (r + 1) * n + c + 1) } else { ((r + 1) * n + c, r * n + c + 1) };
            degree[u] += 1;
            degree[v] += 1;
            let (fu, fv) = (find(&mut parent, u), find(&mut parent, v));
            if fu == fv {
                return false;
            }
            parent[fu] = fv;
        }
    }
    (0..n * n).all(|i| clues[i / n][i % n] == -1 || clues[i / n][i % n] == degree[i])
}

#[test]
fn slant_solutions_are_acyclic() {
    for text in [
        r#"{"grid": [[-1,-1],[-1,-1]]}"#,
        r#"{"grid": [[-1,1,-1],[1,-1,1],[-1,1,-1]]}"#,
        r#"{"grid": [[1,-1,-1,0],[-1,-1,3,-1],[-1,2,-1,-1],[0,-1,-1,1]]}"#,
    ] {
        let p = data(ProblemId::Slant, text);
        let ProblemData::Slant(g) = &p else { unreachable!() };
        let n = g.grid.len();
        let (inst, out) = run(&p);
        assert_eq!(out.status, Status::Sat, "{text}");
        let e = grid(&inst, out.solution.as_ref().unwrap(), "e", n - 1, n - 1);
        assert!(slant_ok(&g.grid, &e), "{text}: {e:?}");
    }
    // a node with clue 4 on the border cannot be satisfied
    let bad = data(ProblemId::Slant, r#"{"grid": [[4,-1],[-1,-1]]}"#);
    assert_eq!(run(&bad).1.status, Status::Unsat);
}

#[test]
fn non_transitive_dice_cycle() {
    let p = data(ProblemId::NonTransitiveDice, "3,3,0");
    let (inst, out) = run(&p);
    assert_eq!(out.status, Status::Sat);
    let x = grid(&inst, out.solution.as_ref().unwrap(), "x", 3, 3);
    let wins = |a: &[Value], b: &[Value]| a.iter().cartesian_product(b).filter(|(p, q)| p > q).count();
    for i in 0..3 {
        let next = &x[(i + 1) % 3];
        assert!(wins(&x[i], next) > wins(next, &x[i]), "{x:?}");
    }
    // two dice cannot beat each other in turn
    assert_eq!(run(&data(ProblemId::NonTransitiveDice, "2,3,0")).1.status, Status::Unsat);
}

#[test]
fn word_design_words_are_far_apart() {
    let n = 4;
    let (inst, out) = run(&data(ProblemId::WordDesign, &n.to_string()));
    assert_eq!(out.status, Status::Sat);
    let a = out.solution.unwrap();
    let x = grid(&inst, &a, "x", n, 8);
    let words: BTreeSet<Vec<Value>> = word_design_words().into_iter().map(|w| w.to_vec()).collect();
    let diff = |p: &[Value], q: &[Value]| p.iter().zip(q).filter(|(a, b)| a != b).count();
    for w in &x {
        assert!(words.contains(w));
    }
    for i in 0..n {
        for j in 0..n {
            if i < j {
                assert!(diff(&x[i], &x[j]) >= 4);
            }
            if i != j {
                let rc: Vec<Value> = x[j].iter().rev().map(|v| 3 - v).collect();
                assert!(diff(&x[i], &rc) >= 4, "{i} {j}");
            }
        }
    }
}

#[test]
fn square_packing_small_is_sat() {
    let (inst, out) = run(&data(ProblemId::SquarePacking, "6"));
    assert_eq!(out.status, Status::Sat);
    let a = out.solution.unwrap();
    let sq: Vec<(Value, Value, Value)> =
        (0..6).map(|i| (val(&inst, &a, &format!("x[{i}]")), val(&inst, &a, &format!("y[{i}]")), i as Value + 1)).collect();
    for &(x, y, s) in &sq {
        assert!(x >= 0 && y >= 0 && x + s <= 9 && y + s <= 11);
    }
    for (p, q) in sq.iter().tuple_combinations() {
        let apart = p.0 + p.2 <= q.0 || q.0 + q.2 <= p.0 || p.1 + p.2 <= q.1 || q.1 + q.2 <= p.1;
        assert!(apart, "{p:?} {q:?}");
    }
}
