//! Optimization models.

use std::sync::Arc;

use itertools::Itertools;
use xcore::{
    BinLoads, Condition, Constraint, Direction, Domain, Expr, InstanceBuilder, ObjectiveForm, Sense, Term, Value,
    VarId, SYMMETRY_BREAKING,
};

use crate::data::{GmkpData, KMedianData, KidneyData, RipData, SchedulingData, SonetData, TsptwData};
use crate::tables::{beer_jugs_transitions, STOP};
use crate::{e, k, BuildError, ProblemId};

/// Label of the constraints linking auxiliary objective terms.
pub const OBJECTIVE_GROUP: &str = "objective-terms";

fn square(id: ProblemId, name: &str, m: &[Vec<Value>]) -> Result<usize, BuildError> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(BuildError::data(id, format!("{name} must be a non-empty square matrix")));
    }
    Ok(n)
}

/// Auxiliary `aux[i] = row[i][index[i]]` over constant rows.
fn element_terms(b: &mut InstanceBuilder, name: &str, rows: &[Vec<Value>], index: &[VarId]) -> Vec<VarId> {
    let aux: Vec<VarId> =
        rows.iter().enumerate().map(|(i, r)| b.var(format!("{name}[{i}]"), Domain::from_values(r.iter().copied()))).collect();
    for ((r, &ix), &a) in rows.iter().zip(index).zip(&aux) {
        b.post(Constraint::Element {
            list: r.iter().map(|&v| Term::Val(v)).collect(),
            index: ix,
            value: Term::Var(a),
        });
    }
    aux
}

/// Horizon of the jug process.
pub const JUG_STEPS: usize = 70;

pub(crate) fn beer_jugs(b: &mut InstanceBuilder, a: Value, cap_b: Value) -> Result<(), BuildError> {
    if a < 1 || cap_b < 1 {
        return Err(BuildError::guard(ProblemId::BeerJugs, "A >= 1 and B >= 1"));
    }
    let table = Arc::new(beer_jugs_transitions(a, cap_b).into_iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let x = b.grid("x", JUG_STEPS + 1, 2, |t, j| {
        if t == 0 {
            Domain::singleton(0)
        } else {
            Domain::range(-1, if j == 0 { a } else { cap_b })
        }
    });
    let y = b.array("y", JUG_STEPS, |_| Domain::range(STOP, 5));
    let z = b.var("z", Domain::range(0, JUG_STEPS as Value - 1));
    b.group("distinct-states", &[]);
    for (s1, s2) in x.iter().tuple_combinations() {
        let differ = Expr::or(vec![Expr::ne(e(s1[0]), e(s2[0])), Expr::ne(e(s1[1]), e(s2[1]))]);
        b.post(Constraint::Intension(Expr::imp(Expr::ne(e(s1[0]), k(-1)), differ)));
    }
    b.group("transitions", &[]);
    for t in 0..JUG_STEPS {
        let scope = vec![x[t][0], x[t][1], y[t], x[t + 1][0], x[t + 1][1]];
        b.post(Constraint::Extension { scope, tuples: table.clone(), supports: true, starred: false });
    }
    b.group("stop", &[]);
    for (t, &yt) in y.iter().enumerate() {
        b.post(Constraint::Intension(Expr::eq(Expr::lt(k(t as Value), e(z)), Expr::ne(e(yt), k(STOP)))));
    }
    b.objective(Sense::Maximize, ObjectiveForm::Var(z));
    Ok(())
}

pub(crate) fn sonet(b: &mut InstanceBuilder, d: &SonetData) -> Result<(), BuildError> {
    let id = ProblemId::Sonet;
    if d.n < 1 || d.m < 1 || d.r < 0 {
        return Err(BuildError::data(id, "need n >= 1, m >= 1 and r >= 0".into()));
    }
    if let Some(c) = d.connections.iter().find(|c| !(0..d.n).contains(&c.0) || !(0..d.n).contains(&c.1)) {
        return Err(BuildError::data(id, format!("connection {c:?} refers to a missing node")));
    }
    let (n, m) = (d.n as usize, d.m as usize);
    let x = b.grid("x", m, n, |_, _| Domain::range(0, 1));
    let star = xcore::STAR;
    let table: Vec<Vec<Value>> =
        (0..m).map(|i| (0..2 * m).map(|j| if j / 2 == i { 1 } else { star }).collect()).collect();
    let table = Arc::new(table);
    b.group("demands", &[]);
    for &(u, v) in &d.connections {
        let scope = (0..m).flat_map(|i| [x[i][u as usize], x[i][v as usize]]).collect();
        b.post(Constraint::Extension { scope, tuples: table.clone(), supports: true, starred: true });
    }
    b.group("ring-capacity", &[]);
    for row in &x {
        b.post(Constraint::Sum { scope: row.clone(), coeffs: vec![1; n], condition: Condition::le(Term::Val(d.r)) });
    }
    b.group("ring-order", &[SYMMETRY_BREAKING]);
    b.post(Constraint::Lex { lists: x.clone(), strict: false, direction: Direction::Increasing });
    b.objective(Sense::Minimize, ObjectiveForm::Sum { scope: x.concat(), coeffs: vec![1; n * m] });
    Ok(())
}

pub(crate) fn k_median(b: &mut InstanceBuilder, d: &KMedianData) -> Result<(), BuildError> {
    let id = ProblemId::KMedian;
    let n = square(id, "distances", &d.distances)?;
    if d.k < 1 || d.k as usize > n {
        return Err(BuildError::data(id, format!("k must lie in 1..={n}")));
    }
    let kk = d.k as usize;
    let all = Domain::from_values(d.distances.iter().flatten().copied());
    let x = b.array("x", kk, |_| Domain::range(0, n as Value - 1));
    let dist = b.grid("d", kk, n, |_, _| all.clone());
    b.group("distinct-centres", &[]);
    b.post(Constraint::AllDifferent { scope: x.clone(), except: None });
    b.group("centre-order", &[SYMMETRY_BREAKING]);
    b.post(Constraint::Ordered { scope: x.clone(), strict: true, direction: Direction::Increasing });
    b.group("distances", &[]);
    for i in 0..kk {
        for j in 0..n {
            b.post(Constraint::Element {
                list: d.distances.iter().map(|r| Term::Val(r[j])).collect(),
                index: x[i],
                value: Term::Var(dist[i][j]),
            });
        }
    }
    let nearest = b.array("nearest", n, |_| all.clone());
    b.group(OBJECTIVE_GROUP, &[]);
    for j in 0..n {
        b.post(Constraint::Minimum {
            scope: dist.iter().map(|r| r[j]).collect(),
            condition: Condition::eq(Term::Var(nearest[j])),
        });
    }
    b.objective(Sense::Minimize, ObjectiveForm::Sum { scope: nearest, coeffs: vec![1; n] });
    Ok(())
}

pub(crate) fn generalized_mkp(b: &mut InstanceBuilder, d: &GmkpData) -> Result<(), BuildError> {
    let id = ProblemId::GeneralizedMkp;
    let items = d.profits.len();
    let bins = d.capacities.len();
    if d.wmatrix.len() != bins || d.wmatrix.iter().any(|r| r.len() != items) {
        return Err(BuildError::data(id, "wmatrix must have one row of item weights per capacity".into()));
    }
    let pm: Vec<Vec<Value>> = d.pmatrix.clone().unwrap_or_else(|| vec![d.profits.clone(); bins]);
    if pm.len() != bins || pm.iter().any(|r| r.len() != items) {
        return Err(BuildError::data(id, "pmatrix must match the shape of wmatrix".into()));
    }
    if d.capacities.iter().any(|&c| c < 0) {
        return Err(BuildError::data(id, "capacities must be non-negative".into()));
    }
    let x = b.array("x", items, |_| Domain::range(0, 1));
    let w = b.array("w", bins, |j| Domain::range(0, d.capacities[j]));
    let total: Value = d.profits.iter().sum();
    let z = b.var("z", Domain::range(0, total.max(0)));
    b.group("knapsacks", &[]);
    for j in 0..bins {
        b.post(Constraint::Knapsack {
            scope: x.clone(),
            weights: d.wmatrix[j].clone(),
            profits: pm[j].clone(),
            limit: Term::Var(w[j]),
            condition: Condition::ge(Term::Var(z)),
        });
    }
    b.group("profit", &[]);
    b.post(Constraint::Sum { scope: x, coeffs: d.profits.clone(), condition: Condition::eq(Term::Var(z)) });
    b.objective(Sense::Maximize, ObjectiveForm::Var(z));
    Ok(())
}

pub(crate) fn tsptw(b: &mut InstanceBuilder, d: &TsptwData) -> Result<(), BuildError> {
    let id = ProblemId::Tsptw;
    let n = square(id, "distances", &d.distances)?;
    if d.windows.len() != n || d.windows.iter().any(|&(lo, hi)| lo > hi) {
        return Err(BuildError::data(id, "one non-empty time window per node required".into()));
    }
    let x = b.array("x", n, |_| Domain::range(0, n as Value - 1));
    let a = b.array("a", n, |i| Domain::range(d.windows[i].0, d.windows[i].1));
    b.group("depot", &[]);
    b.post(Constraint::Intension(Expr::eq(e(a[0]), k(0))));
    b.group("no-self-loops", &[]);
    for (i, &xi) in x.iter().enumerate() {
        b.post(Constraint::Intension(Expr::ne(e(xi), k(i as Value))));
    }
    b.group("circuit", &[]);
    b.post(Constraint::Circuit { scope: x.clone() });
    // a[x[i]] and distances[i][x[i]] as auxiliary element terms
    b.group("arrival-terms", &[]);
    let times = Domain::from_intervals(d.windows.iter().copied());
    let next_arrival: Vec<VarId> = (0..n).map(|i| b.var(format!("next_a[{i}]"), times.clone())).collect();
    for (&xi, &na) in x.iter().zip(&next_arrival) {
        b.post(Constraint::Element { list: a.iter().map(|&v| Term::Var(v)).collect(), index: xi, value: Term::Var(na) });
    }
    b.group(OBJECTIVE_GROUP, &[]);
    let leg = element_terms(b, "leg", &d.distances, &x);
    b.group("time-windows", &[]);
    for i in 0..n {
        let later = Expr::ge(e(next_arrival[i]), Expr::add(vec![e(a[i]), e(leg[i])]));
        b.post(Constraint::Intension(Expr::imp(Expr::ne(e(x[i]), k(0)), later)));
    }
    b.objective(Sense::Minimize, ObjectiveForm::Sum { scope: leg, coeffs: vec![1; n] });
    Ok(())
}

pub(crate) fn rip(b: &mut InstanceBuilder, d: &RipData) -> Result<(), BuildError> {
    let id = ProblemId::Rip;
    let n_res = d.costs.len();
    let n_tasks = d.jobs.len();
    if d.horizon < 0 {
        return Err(BuildError::data(id, "horizon must be non-negative".into()));
    }
    for (i, job) in d.jobs.iter().enumerate() {
        if job.requirements.len() != n_res {
            return Err(BuildError::data(id, format!("job {i} lists {} requirements", job.requirements.len())));
        }
        if let Some(s) = job.successors.iter().find(|&&s| !(0..n_tasks as i64).contains(&s)) {
            return Err(BuildError::data(id, format!("job {i} has unknown successor {s}")));
        }
        if job.duration < 0 || job.requirements.iter().any(|&r| r < 0) {
            return Err(BuildError::data(id, format!("job {i} has a negative duration or requirement")));
        }
    }
    let req: Vec<Vec<Value>> = (0..n_res).map(|r| d.jobs.iter().map(|j| j.requirements[r]).collect()).collect();
    let durations: Vec<Value> = d.jobs.iter().map(|j| j.duration).collect();
    let s = b.array("s", n_tasks, |_| Domain::range(0, d.horizon));
    let u = b.array("u", n_res, |r| {
        let lb = req[r].iter().copied().max().unwrap_or(0);
        Domain::range(lb, req[r].iter().sum())
    });
    b.group("deadline", &[]);
    for i in 0..n_tasks {
        b.post(Constraint::Intension(Expr::le(Expr::add(vec![e(s[i]), k(durations[i])]), k(d.horizon))));
    }
    b.group("precedences", &[]);
    for (i, job) in d.jobs.iter().enumerate() {
        for &j in &job.successors {
            b.post(Constraint::Intension(Expr::le(Expr::add(vec![e(s[i]), k(durations[i])]), e(s[j as usize]))));
        }
    }
    b.group("resources", &[]);
    for r in 0..n_res {
        b.post(Constraint::Cumulative {
            origins: s.clone(),
            lengths: durations.clone(),
            heights: req[r].clone(),
            condition: Condition::le(Term::Var(u[r])),
        });
    }
    b.objective(Sense::Minimize, ObjectiveForm::Sum { scope: u, coeffs: d.costs.clone() });
    Ok(())
}

pub(crate) fn large_scale_scheduling(b: &mut InstanceBuilder, d: &SchedulingData) -> Result<(), BuildError> {
    let id = ProblemId::LargeScaleScheduling;
    if d.durations.len() != d.heights.len() || d.durations.is_empty() {
        return Err(BuildError::data(id, "durations and heights must be non-empty and of equal length".into()));
    }
    if d.durations.iter().chain(&d.heights).any(|&v| v < 0) {
        return Err(BuildError::data(id, "durations and heights must be non-negative".into()));
    }
    let horizon: Value = d.durations.iter().sum::<Value>() + 1;
    let x = b.array("x", d.durations.len(), |_| Domain::range(0, horizon - 1));
    b.group("resource", &[]);
    b.post(Constraint::Cumulative {
        origins: x.clone(),
        lengths: d.durations.clone(),
        heights: d.heights.clone(),
        condition: Condition::le(Term::Val(d.limit)),
    });
    let ends = x.iter().zip(&d.durations).map(|(&v, &du)| Expr::add(vec![e(v), k(du)])).collect();
    b.objective(Sense::Minimize, ObjectiveForm::Maximum(ends));
    Ok(())
}

pub(crate) fn kidney_exchange(b: &mut InstanceBuilder, d: &KidneyData) -> Result<(), BuildError> {
    let id = ProblemId::KidneyExchange;
    let n = square(id, "weights", &d.weights)?;
    if d.k < 1 {
        return Err(BuildError::data(id, "k must be positive".into()));
    }
    let x = b.array("x", n, |_| Domain::range(0, n as Value - 1));
    let y = b.array("y", n, |_| Domain::range(0, n as Value - 1));
    b.group("successors", &[]);
    b.post(Constraint::AllDifferent { scope: x.clone(), except: None });
    b.group("cycles", &[]);
    for i in 0..n {
        b.post(Constraint::Element { list: y.iter().map(|&v| Term::Var(v)).collect(), index: x[i], value: Term::Var(y[i]) });
    }
    b.group("infeasible-arcs", &[]);
    for i in 0..n {
        for j in 0..n {
            if i != j && d.weights[i][j] < 0 {
                b.post(Constraint::Intension(Expr::ne(e(x[i]), k(j as Value))));
            }
        }
    }
    b.group("cycle-length", &[]);
    b.post(Constraint::BinPacking {
        scope: y.clone(),
        sizes: vec![1; n],
        loads: BinLoads::Condition(Condition::le(Term::Val(d.k))),
    });
    b.group("cycle-numbering", &[SYMMETRY_BREAKING]);
    b.post(Constraint::Precedence { scope: y.clone(), values: (0..n as Value).collect(), covered: false });
    b.group(OBJECTIVE_GROUP, &[]);
    let gain = element_terms(b, "gain", &d.weights, &x);
    b.objective(Sense::Maximize, ObjectiveForm::Sum { scope: gain, coeffs: vec![1; n] });
    Ok(())
}
