use xcore::{CmpOp, Condition, Constraint, ConstraintKind, Domain, Expr, Term, VarId};
use xcore_propagate::{fixpoint, propagate_one, propagator_strength_report, DomainStore, PropagationResult};

fn v(i: u32) -> VarId {
    VarId(i)
}

#[test]
fn alldifferent_singleton_elimination() {
    let mut s = DomainStore::new(&[Domain::singleton(1), Domain::range(1, 2)]);
    let c = Constraint::AllDifferent { scope: vec![v(0), v(1)], except: None };
    assert!(matches!(propagate_one(&c, &mut s), PropagationResult::Changed(_)));
    assert_eq!(s.values(v(1)), vec![2]);
}

#[test]
fn sum_bounds() {
    let mut s = DomainStore::new(&[Domain::range(0, 5), Domain::singleton(4)]);
    let c = Constraint::Sum {
        scope: vec![v(0), v(1)],
        coeffs: vec![1, 1],
        condition: Condition::Cmp(CmpOp::Eq, Term::Val(5)),
    };
    propagate_one(&c, &mut s);
    assert_eq!(s.values(v(0)), vec![1]);
}

#[test]
fn positive_table_follows_supports() {
    // oracle: the only support with first value 2 is (2,3)
    let mut s = DomainStore::new(&[Domain::singleton(2), Domain::range(1, 3)]);
    let c = Constraint::Extension {
        scope: vec![v(0), v(1)],
        tuples: std::sync::Arc::new(vec![vec![1, 2], vec![2, 3]]),
        supports: true,
        starred: false,
    };
    propagate_one(&c, &mut s);
    assert_eq!(s.values(v(1)), vec![3]);
}

#[test]
fn empty_set_is_a_fixpoint() {
    let doms = [Domain::range(0, 3)];
    let mut s = DomainStore::new(&doms);
    assert_eq!(fixpoint(&[], &mut s), PropagationResult::Fixpoint);
    assert_eq!(s.domains(), doms.to_vec());
}

#[test]
fn chain_of_strict_orders() {
    let lt = |a, b| Constraint::Intension(Expr::lt(Expr::var(v(a)), Expr::var(v(b))));
    let mut s = DomainStore::new(&[Domain::range(0, 2), Domain::range(0, 2), Domain::range(0, 2)]);
    let r = fixpoint(&[lt(0, 1), lt(1, 2)], &mut s);
    assert!(matches!(r, PropagationResult::Changed(_)));
    // arc-consistency oracle over all 27 triples
    let mut keep = vec![std::collections::BTreeSet::new(); 3];
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                if x < y && y < z {
                    keep[0].insert(x);
                    keep[1].insert(y);
                    keep[2].insert(z);
                }
            }
        }
    }
    for i in 0..3 {
        assert_eq!(s.values(v(i)), keep[i as usize].iter().copied().collect::<Vec<_>>());
    }
    assert_eq!(s.values(v(0)), vec![0]);
    assert_eq!(s.values(v(2)), vec![2]);
}

#[test]
fn disequality_on_equal_singletons_fails() {
    let mut s = DomainStore::new(&[Domain::singleton(1), Domain::singleton(1)]);
    let c = Constraint::Intension(Expr::ne(Expr::var(v(0)), Expr::var(v(1))));
    assert_eq!(fixpoint(&[c], &mut s), PropagationResult::Inconsistent(0));
}

#[test]
fn strength_report_levels() {
    let r = propagator_strength_report();
    let level = |k| r.iter().find(|(f, _)| *f == k).unwrap().1;
    assert_eq!(level(ConstraintKind::Extension), "generalized arc consistency");
    assert_eq!(level(ConstraintKind::Sum), "bounds consistency");
    assert_eq!(level(ConstraintKind::Cumulative), "time-table filtering");
    assert_eq!(r.len(), ConstraintKind::KERNEL.len() + 1);
}
