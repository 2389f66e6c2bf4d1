//! Satisfaction models.

use std::sync::Arc;

use itertools::Itertools;
use xcore::{
    BinaryOp, ChannelTarget, CmpOp, Condition, Constraint, Direction, Domain, Expr, InstanceBuilder, NaryOp, Term,
    Value, VarId, REDUNDANT, SYMMETRY_BREAKING,
};

use crate::data::{ColoringData, CoveringParams, DiceParams, Grid};
use crate::tables::{binary_puzzle_automaton, binomial, calvin_table, covering_table, pythagorean_conflicts};
use crate::{e, k, BuildError, ProblemId};

fn sum_eq(scope: Vec<VarId>, rhs: Term) -> Constraint {
    let coeffs = vec![1; scope.len()];
    Constraint::Sum { scope, coeffs, condition: Condition::eq(rhs) }
}

fn extension(scope: Vec<VarId>, tuples: Arc<Vec<Vec<Value>>>, starred: bool) -> Constraint {
    Constraint::Extension { scope, tuples, supports: true, starred }
}

fn column(x: &[Vec<VarId>], j: usize) -> Vec<VarId> {
    x.iter().map(|r| r[j]).collect()
}

pub(crate) fn another_magic_square(b: &mut InstanceBuilder, n: i64) -> Result<(), BuildError> {
    if n < 2 {
        return Err(BuildError::guard(ProblemId::AnotherMagicSquare, "n >= 2"));
    }
    let nu = n as usize;
    let x = b.grid("x", nu, nu, |_, _| Domain::range(1, n * n));
    b.group("all-different", &[]);
    b.post(Constraint::AllDifferent { scope: x.concat(), except: None });
    b.group("neighbour-sums", &[]);
    for i in 0..nu {
        for j in 0..nu {
            let around: Vec<Expr> = (-1i64..=1)
                .cartesian_product(-1i64..=1)
                .filter(|&d| d != (0, 0))
                .map(|(di, dj)| (i as i64 + di, j as i64 + dj))
                .filter(|&(a, c)| (0..n).contains(&a) && (0..n).contains(&c))
                .map(|(a, c)| e(x[a as usize][c as usize]))
                .collect();
            let rem = Expr::binary(BinaryOp::Mod, Expr::add(around), e(x[i][j]));
            b.post(Constraint::Intension(Expr::eq(rem, k(0))));
        }
    }
    Ok(())
}

pub(crate) fn antimagic_square(b: &mut InstanceBuilder, n: i64) -> Result<(), BuildError> {
    if n < 2 {
        return Err(BuildError::guard(ProblemId::AntimagicSquare, "n >= 2"));
    }
    let nu = n as usize;
    let (lb, ub) = (n * (n + 1) / 2, n * n * (n * n + 1) / 2);
    let x = b.grid("x", nu, nu, |_, _| Domain::range(1, n * n));
    let y = b.array("y", 2 * nu + 2, |_| Domain::range(lb, ub));
    b.group("all-different", &[]);
    b.post(Constraint::AllDifferent { scope: x.concat(), except: None });
    b.group("line-sums", &[]);
    for i in 0..nu {
        b.post(sum_eq(x[i].clone(), Term::Var(y[i])));
    }
    for j in 0..nu {
        b.post(sum_eq(column(&x, j), Term::Var(y[nu + j])));
    }
    b.post(sum_eq((0..nu).map(|i| x[i][i]).collect(), Term::Var(y[2 * nu])));
    b.post(sum_eq((0..nu).map(|i| x[nu - 1 - i][i]).collect(), Term::Var(y[2 * nu + 1])));
    b.group("consecutive-sums", &[]);
    b.post(Constraint::AllDifferent { scope: y.clone(), except: None });
    let ys: Vec<Expr> = y.iter().map(|&v| e(v)).collect();
    let spread = Expr::sub(Expr::nary(NaryOp::Max, ys.clone()), Expr::nary(NaryOp::Min, ys));
    b.post(Constraint::Intension(Expr::eq(spread, k(2 * n + 1))));
    b.group("frenicle", &[SYMMETRY_BREAKING]);
    let last = nu - 1;
    for (a, c) in [(x[0][0], x[0][last]), (x[0][0], x[last][0]), (x[0][0], x[last][last]), (x[0][1], x[1][0])] {
        b.post(Constraint::Intension(Expr::lt(e(a), e(c))));
    }
    Ok(())
}

pub(crate) fn binary_puzzle(b: &mut InstanceBuilder, n: i64, variant: &str) -> Result<(), BuildError> {
    if n < 2 || n % 2 != 0 {
        return Err(BuildError::guard(ProblemId::BinaryPuzzle, "n % 2 == 0"));
    }
    let nu = n as usize;
    let m = n / 2;
    let x = b.grid("x", nu, nu, |_, _| Domain::range(0, 1));
    let cols: Vec<Vec<VarId>> = (0..nu).map(|j| column(&x, j)).collect();
    match variant {
        "" | "main" => {
            b.group("row-balance", &[]);
            for row in &x {
                b.post(sum_eq(row.clone(), Term::Val(m)));
            }
            b.group("column-balance", &[]);
            for col in &cols {
                b.post(sum_eq(col.clone(), Term::Val(m)));
            }
            let window = |scope: &[VarId]| Constraint::Sum {
                scope: scope.to_vec(),
                coeffs: vec![1; 3],
                condition: Condition::In(Domain::range(1, 2)),
            };
            b.group("row-runs", &[]);
            for row in &x {
                for j in 0..nu - 2 {
                    b.post(window(&row[j..j + 3]));
                }
            }
            b.group("column-runs", &[]);
            for col in &cols {
                for i in 0..nu - 2 {
                    b.post(window(&col[i..i + 3]));
                }
            }
        }
        "regular" => {
            let a = Arc::new(binary_puzzle_automaton(nu));
            b.group("valid-rows", &[]);
            for row in &x {
                b.post(Constraint::Regular { scope: row.clone(), automaton: a.clone() });
            }
            b.group("valid-columns", &[]);
            for col in &cols {
                b.post(Constraint::Regular { scope: col.clone(), automaton: a.clone() });
            }
        }
        other => return Err(BuildError::data(ProblemId::BinaryPuzzle, format!("unknown variant `{other}`"))),
    }
    b.group("distinct-rows", &[]);
    b.post(Constraint::AllDifferentList { lists: x.clone() });
    b.group("distinct-columns", &[]);
    b.post(Constraint::AllDifferentList { lists: cols });
    Ok(())
}

pub(crate) fn calvin_puzzle(b: &mut InstanceBuilder, n: i64, variant: &str) -> Result<(), BuildError> {
    if n < 1 {
        return Err(BuildError::guard(ProblemId::CalvinPuzzle, "n >= 1"));
    }
    let nu = n as usize;
    let x = b.grid("x", nu, nu, |_, _| Domain::range(1, n * n));
    let offsets = [(-3, 0), (3, 0), (0, -3), (0, 3), (-2, -2), (-2, 2), (2, -2), (2, 2)];
    let neighbours = |i: usize, j: usize| -> Vec<VarId> {
        offsets
            .iter()
            .map(|&(oi, oj)| (i as i64 + oi, j as i64 + oj))
            .filter(|&(a, c)| (0..n).contains(&a) && (0..n).contains(&c))
            .map(|(a, c)| x[a as usize][c as usize])
            .collect()
    };
    b.group("all-different", &[]);
    b.post(Constraint::AllDifferent { scope: x.concat(), except: None });
    b.group("start", &[SYMMETRY_BREAKING]);
    b.post(Constraint::Intension(Expr::eq(e(x[0][0]), k(1))));
    match variant {
        "" | "main" => {
            b.group("links", &[]);
            for i in 0..nu {
                for j in 0..nu {
                    let cell = e(x[i][j]);
                    let next: Vec<Expr> =
                        neighbours(i, j).into_iter().map(|y| Expr::eq(e(y), Expr::add(vec![cell.clone(), k(1)]))).collect();
                    let c = if next.is_empty() {
                        Expr::eq(cell, k(n * n))
                    } else {
                        Expr::imp(Expr::lt(cell, k(n * n)), Expr::or(next))
                    };
                    b.post(Constraint::Intension(c));
                }
            }
        }
        "table" => {
            b.group("links", &[]);
            for i in 0..nu {
                for j in 0..nu {
                    let nb = neighbours(i, j);
                    let tuples = Arc::new(calvin_table(n, nb.len()));
                    let mut scope = vec![x[i][j]];
                    scope.extend(nb);
                    b.post(extension(scope, tuples, true));
                }
            }
        }
        other => return Err(BuildError::data(ProblemId::CalvinPuzzle, format!("unknown variant `{other}`"))),
    }
    Ok(())
}

pub(crate) fn coloring(b: &mut InstanceBuilder, d: &ColoringData) -> Result<(), BuildError> {
    let id = ProblemId::Coloring;
    if d.n < 1 || d.n_colors < 1 {
        return Err(BuildError::data(id, "n and nColors must be positive".into()));
    }
    if let Some(&(i, j)) = d.edges.iter().find(|&&(i, j)| !(0..d.n).contains(&i) || !(0..d.n).contains(&j)) {
        return Err(BuildError::data(id, format!("edge ({i}, {j}) refers to a missing node")));
    }
    let x = b.array("x", d.n as usize, |_| Domain::range(0, d.n_colors - 1));
    b.group("edges", &[]);
    for &(i, j) in &d.edges {
        b.post(Constraint::Intension(Expr::ne(e(x[i as usize]), e(x[j as usize]))));
    }
    b.group("colour-order", &[SYMMETRY_BREAKING]);
    for i in 0..d.n.min(d.n_colors) {
        b.post(Constraint::Intension(Expr::le(e(x[i as usize]), k(i))));
    }
    Ok(())
}

pub(crate) fn covering_array(b: &mut InstanceBuilder, p: &CoveringParams) -> Result<(), BuildError> {
    let id = ProblemId::CoveringArray;
    if p.t < 1 || p.k < p.t || p.g < 1 || p.b < 1 {
        return Err(BuildError::data(id, "need 1 <= t <= k, g >= 1 and b >= 1".into()));
    }
    if p.g.checked_pow(p.k as u32).is_none_or(|v| v > 1 << 20) {
        return Err(BuildError::data(id, "g^k too large to tabulate".into()));
    }
    let n = binomial(p.k, p.t) as usize;
    let d = p.g.pow(p.t as u32);
    let pv = b.grid("p", n, d as usize, |_, _| Domain::range(0, p.b - 1));
    let v = b.grid("v", n, p.b as usize, |_, _| Domain::range(0, d - 1));
    b.group("all-present", &[]);
    for row in &pv {
        b.post(Constraint::AllDifferent { scope: row.clone(), except: None });
    }
    b.group("channel", &[]);
    for (pr, vr) in pv.iter().zip(&v) {
        b.post(Constraint::Channel { list: pr.clone(), target: ChannelTarget::List(vr.clone()) });
    }
    b.group("columns", &[]);
    let table = Arc::new(covering_table(p.t as usize, p.k as usize, p.g));
    for j in 0..p.b as usize {
        b.post(extension(column(&v, j), table.clone(), false));
    }
    Ok(())
}

pub(crate) fn dominoes(b: &mut InstanceBuilder, g: &Grid) -> Result<(), BuildError> {
    let id = ProblemId::Dominoes;
    let n_rows = g.grid.len();
    let n_cols = g.grid.first().map_or(0, Vec::len);
    if n_rows == 0 || n_cols == 0 || g.grid.iter().any(|r| r.len() != n_cols) {
        return Err(BuildError::data(id, "grid must be a non-empty rectangle".into()));
    }
    let n_values = n_rows;
    let cells = (n_rows * n_cols) as Value;
    let positions: Vec<Vec<Vec<Value>>> = (0..n_values as Value)
        .map(|v| {
            (0..n_rows)
                .flat_map(|i| (0..n_cols).map(move |j| (i, j)))
                .filter(|&(i, j)| g.grid[i][j] == v)
                .map(|(i, j)| vec![(i * n_cols + j) as Value])
                .collect()
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n_values).flat_map(|i| (i..n_values).map(move |j| (i, j))).collect();
    let x = b.matrix("x", n_values, n_values, |i, j| (i <= j).then(|| Domain::range(0, cells - 1)));
    let y = b.matrix("y", n_values, n_values, |i, j| (i <= j).then(|| Domain::range(0, cells - 1)));
    let flat = |m: &Vec<Vec<Option<VarId>>>| -> Vec<VarId> { m.iter().flatten().flatten().copied().collect() };
    b.group("distinct-cells", &[]);
    let mut all = flat(&x);
    all.extend(flat(&y));
    b.post(Constraint::AllDifferent { scope: all, except: None });
    b.group("unary", &[]);
    let tables: Vec<Arc<Vec<Vec<Value>>>> = positions.into_iter().map(Arc::new).collect();
    for &(i, j) in &pairs {
        b.post(extension(vec![x[i][j].unwrap()], tables[i].clone(), false));
        b.post(extension(vec![y[i][j].unwrap()], tables[j].clone(), false));
    }
    b.group("adjacency", &[]);
    let nc = n_cols as Value;
    for &(i, j) in &pairs {
        let (xi, yi) = (e(x[i][j].unwrap()), e(y[i][j].unwrap()));
        let dist = Expr::binary(BinaryOp::Dist, xi.clone(), yi.clone());
        let row = |t: Expr| Expr::binary(BinaryOp::Div, t, k(nc));
        let then = Expr::and(vec![Expr::eq(dist.clone(), k(1)), Expr::eq(row(xi), row(yi))]);
        b.post(Constraint::Intension(Expr::imp(Expr::ne(dist, k(nc)), then)));
    }
    Ok(())
}

pub(crate) fn non_transitive_dice(b: &mut InstanceBuilder, p: &DiceParams) -> Result<(), BuildError> {
    let id = ProblemId::NonTransitiveDice;
    if p.n < 1 || p.m < 1 || p.d < 0 {
        return Err(BuildError::data(id, "need n >= 1, m >= 1 and d >= 0".into()));
    }
    let (n, m) = (p.n as usize, p.m as usize);
    let d = if p.d == 0 { 2 * p.m } else { p.d };
    let x = b.grid("x", n, m, |_, _| Domain::range(0, d - 1));
    let y = b.grid("y", n, 2, |_, _| Domain::range(0, p.m * p.m));
    let gap = b.array("gap", n, |_| Domain::range(1, p.m * p.m));
    let z = b.var("z", Domain::range(0, d - 1));
    b.group("sorted-faces", &[SYMMETRY_BREAKING]);
    for row in &x {
        b.post(Constraint::Ordered { scope: row.clone(), strict: false, direction: Direction::Increasing });
    }
    b.group("dominance", &[]);
    let wins = |a: &[VarId], c: &[VarId]| -> Expr {
        Expr::add((0..m).cartesian_product(0..m).map(|(r1, r2)| Expr::gt(e(a[r1]), e(c[r2]))).collect())
    };
    for i in 0..n {
        let nx = &x[(i + 1) % n];
        b.post(Constraint::Intension(Expr::eq(e(y[i][0]), wins(&x[i], nx))));
        b.post(Constraint::Intension(Expr::eq(e(y[i][1]), wins(nx, &x[i]))));
    }
    b.group("gaps", &[]);
    for i in 0..n {
        b.post(Constraint::Intension(Expr::eq(e(gap[i]), Expr::sub(e(y[i][0]), e(y[i][1])))));
    }
    b.group("largest-face", &[]);
    b.post(Constraint::Maximum { scope: x.concat(), condition: Condition::eq(Term::Var(z)) });
    Ok(())
}

pub(crate) fn pythagorean_triples(b: &mut InstanceBuilder, n: i64) -> Result<(), BuildError> {
    if n < 1 {
        return Err(BuildError::guard(ProblemId::PythagoreanTriples, "n >= 1"));
    }
    let x = b.array("x", n as usize + 1, |_| Domain::range(0, 1));
    b.group("anchor", &[]);
    b.post(Constraint::Intension(Expr::eq(e(x[0]), k(0))));
    b.group("triples", &[]);
    for (i, j, c) in pythagorean_conflicts(n) {
        b.post(Constraint::NValues {
            scope: vec![x[i as usize], x[j as usize], x[c as usize]],
            condition: Condition::Cmp(CmpOp::Gt, Term::Val(1)),
        });
    }
    Ok(())
}

const DOWN_DIAG: Value = 0;
const UP_DIAG: Value = 1;

/// `(k, l, a, ii, jj)`: node `(ii, jj)` is reached from `(i, j)` through
/// diagonal `a` of cell `(k, l)`.
fn slant_connections(n: usize, i: usize, j: usize) -> Vec<(usize, usize, Value, usize, usize)> {
    let mut t = Vec::new();
    if i > 0 {
        if j > 0 {
            t.push((i - 1, j - 1, DOWN_DIAG, i - 1, j - 1));
        }
        if j < n - 1 {
            t.push((i - 1, j, UP_DIAG, i - 1, j + 1));
        }
    }
    if i < n - 1 {
        if j > 0 {
            t.push((i, j - 1, UP_DIAG, i + 1, j - 1));
        }
        if j < n - 1 {
            t.push((i, j, DOWN_DIAG, i + 1, j + 1));
        }
    }
    t
}

pub(crate) fn slant(b: &mut InstanceBuilder, g: &Grid) -> Result<(), BuildError> {
    let id = ProblemId::Slant;
    let n = g.grid.len();
    if n < 2 || g.grid.iter().any(|r| r.len() != n) {
        return Err(BuildError::data(id, "grid must be square with at least 2 rows".into()));
    }
    if let Some(v) = g.grid.iter().flatten().find(|&&v| !(-1..=4).contains(&v)) {
        return Err(BuildError::data(id, format!("clue {v} outside -1..=4")));
    }
    let nn = (n * n) as Value;
    let edge = b.grid("e", n - 1, n - 1, |_, _| Domain::range(DOWN_DIAG, UP_DIAG));
    let x = b.grid("x", n, n, |i, j| match g.grid[i][j] {
        -1 => Domain::range(0, 4),
        v => Domain::singleton(v),
    });
    let d = b.grid("d", n, n, |_, _| Domain::range(0, nn));
    let nodes: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).collect();
    let uses = |kk: usize, l: usize, a: Value| Expr::eq(e(edge[kk][l]), k(a));
    b.group("degrees", &[]);
    for &(i, j) in &nodes {
        let s = Expr::add(slant_connections(n, i, j).into_iter().map(|(kk, l, a, _, _)| uses(kk, l, a)).collect());
        b.post(Constraint::Intension(Expr::eq(e(x[i][j]), s)));
    }
    b.group("isolated-roots", &[]);
    for &(i, j) in &nodes {
        b.post(Constraint::Intension(Expr::imp(Expr::eq(e(x[i][j]), k(0)), Expr::eq(e(d[i][j]), k(0)))));
    }
    b.group("inner-not-roots", &[]);
    for &(i, j) in &nodes {
        b.post(Constraint::Intension(Expr::imp(Expr::gt(e(x[i][j]), k(1)), Expr::ne(e(d[i][j]), k(0)))));
    }
    b.group("one-parent", &[]);
    for &(i, j) in &nodes {
        let parents = Expr::add(
            slant_connections(n, i, j)
                .into_iter()
                .map(|(kk, l, a, ii, jj)| {
                    Expr::and(vec![uses(kk, l, a), Expr::eq(e(d[i][j]), Expr::add(vec![e(d[ii][jj]), k(1)]))])
                })
                .collect(),
        );
        b.post(Constraint::Intension(Expr::imp(Expr::gt(e(x[i][j]), k(1)), Expr::eq(parents, k(1)))));
    }
    b.group("unit-distance", &[]);
    for &(i, j) in &nodes {
        for (kk, l, a, ii, jj) in slant_connections(n, i, j) {
            let gap = Expr::binary(BinaryOp::Dist, e(d[i][j]), e(d[ii][jj]));
            b.post(Constraint::Intension(Expr::imp(uses(kk, l, a), Expr::eq(gap, k(1)))));
        }
    }
    Ok(())
}

/// Enclosing containers for `n` in `6..=27`.
pub const SQUARE_CONTAINERS: [(Value, Value); 22] = [
    (9, 11),
    (7, 22),
    (14, 15),
    (15, 20),
    (15, 27),
    (19, 27),
    (23, 29),
    (22, 38),
    (23, 45),
    (23, 55),
    (27, 56),
    (39, 46),
    (31, 69),
    (47, 53),
    (34, 85),
    (38, 88),
    (39, 98),
    (64, 68),
    (56, 88),
    (43, 129),
    (70, 89),
    (47, 148),
];

/// Forbidden coordinates per square, from the classical initial reduction.
pub fn square_reductions() -> Vec<Vec<Value>> {
    let mut t: Vec<Vec<Value>> = vec![vec![], vec![1, 2], vec![2, 3], vec![2]];
    for (v, times) in [(3, 4), (4, 3), (5, 6), (6, 4), (7, 8), (8, 5), (9, 11), (10, 1)] {
        t.extend(std::iter::repeat_n(vec![v], times));
    }
    t
}

pub(crate) fn square_packing(b: &mut InstanceBuilder, n: i64) -> Result<(), BuildError> {
    if !(6..=27).contains(&n) {
        return Err(BuildError::guard(ProblemId::SquarePacking, "6 <= n <= 27"));
    }
    let nu = n as usize;
    let (width, height) = SQUARE_CONTAINERS[nu - 6];
    let x = b.array("x", nu, |i| Domain::range(0, width - i as Value - 1));
    let y = b.array("y", nu, |i| Domain::range(0, height - i as Value - 1));
    let sizes: Vec<Value> = (1..=n).collect();
    b.group("no-overlap", &[]);
    b.post(Constraint::NoOverlap {
        origins: (0..nu).map(|i| vec![x[i], y[i]]).collect(),
        lengths: sizes.iter().map(|&s| vec![s, s]).collect(),
        zero_ignored: true,
    });
    b.group("profiles", &[REDUNDANT]);
    for (o, cap) in [(&x, height), (&y, width)] {
        b.post(Constraint::Cumulative {
            origins: o.clone(),
            lengths: sizes.clone(),
            heights: sizes.clone(),
            condition: Condition::le(Term::Val(cap)),
        });
    }
    b.group("reductions", &[SYMMETRY_BREAKING]);
    b.post(Constraint::Intension(Expr::le(e(x[nu - 1]), k((width - n).div_euclid(2)))));
    b.post(Constraint::Intension(Expr::le(e(y[nu - 1]), k((height - n).div_euclid(2)))));
    let t = square_reductions();
    for o in [&x, &y] {
        for i in 0..nu {
            for &v in &t[i] {
                b.post(Constraint::Intension(Expr::ne(e(o[i]), k(v))));
            }
        }
    }
    Ok(())
}

pub(crate) fn word_design(b: &mut InstanceBuilder, n: i64, words: Arc<Vec<Vec<Value>>>) -> Result<(), BuildError> {
    if n < 1 {
        return Err(BuildError::guard(ProblemId::WordDesign, "n >= 1"));
    }
    let nu = n as usize;
    let x = b.grid("x", nu, 8, |_, _| Domain::range(0, 3));
    let y = b.grid("y", nu, 8, |_, _| Domain::range(0, 3));
    b.group("complements", &[]);
    for i in 0..nu {
        for c in 0..8 {
            b.post(Constraint::Intension(Expr::eq(Expr::add(vec![e(x[i][c]), e(y[i][c])]), k(3))));
        }
    }
    b.group("well-formed", &[]);
    for row in &x {
        b.post(extension(row.clone(), words.clone(), false));
    }
    b.group("word-order", &[SYMMETRY_BREAKING]);
    b.post(Constraint::Lex { lists: x.clone(), strict: true, direction: Direction::Increasing });
    let differ = |pairs: Vec<(VarId, VarId)>| {
        let s = Expr::add(pairs.into_iter().map(|(a, c)| Expr::ne(e(a), e(c))).collect());
        Constraint::Intension(Expr::ge(s, k(4)))
    };
    b.group("distance", &[]);
    for (i, j) in (0..nu).tuple_combinations() {
        b.post(differ((0..8).map(|c| (x[i][c], x[j][c])).collect()));
    }
    b.group("reverse-complement", &[]);
    for i in 0..nu {
        for j in 0..nu {
            if i != j {
                b.post(differ((0..8).map(|c| (x[i][7 - c], y[j][c])).collect()));
            }
        }
    }
    Ok(())
}
