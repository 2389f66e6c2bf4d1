use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use xcore::{Condition, Constraint, Domain, Instance, InstanceBuilder, Term, STAR};
use xcore_generators::{build_instance, manifest, Order, ProblemData};
use xcore_io::{parse_document, parse_instance, write_instance, DocError, Mode};
use xcore_testkit::{all_kinds, random_case};

#[test]
fn manifest_round_trips() {
    for entry in manifest() {
        let inst = build_instance(&entry.data).unwrap();
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap_or_else(|e| panic!("{:?}: {e}", entry.data.id()));
        assert!(back == inst, "{:?} changed on the way back", entry.data.id());
        assert_eq!(write_instance(&back), text);
    }
}

#[test]
fn magic_square_parses_back_equal() {
    let inst = build_instance(&ProblemData::AnotherMagicSquare(Order { n: 3 })).unwrap();
    assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
}

#[test]
fn every_form_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in all_kinds() {
        for _ in 0..50 {
            let inst = random_case(kind, &mut rng).instance();
            let text = write_instance(&inst);
            assert_eq!(parse_instance(&text).unwrap(), inst, "{kind:?}");
        }
    }
}

fn two_vars() -> InstanceBuilder {
    let mut b = InstanceBuilder::new();
    b.var("a", Domain::range(0, 3));
    b.var("b", Domain::range(0, 3));
    b
}

#[test]
fn construction_order_does_not_matter() {
    let mut one = two_vars();
    one.meta("z", json!(1));
    one.meta("a", json!({"y": [1, 2], "x": null}));
    let mut two = two_vars();
    two.meta("a", json!({"x": null, "y": [1, 2]}));
    two.meta("z", json!(1));
    assert_eq!(write_instance(&one.build().unwrap()), write_instance(&two.build().unwrap()));
}

#[test]
fn metadata_is_kept_verbatim() {
    let mut b = two_vars();
    let meta = json!({"nested": {"list": [1, "two", 3.5, null, true]}, "unicode": "h\u{e9}llo"});
    b.meta("data", meta.clone());
    let back = parse_instance(&write_instance(&b.build().unwrap())).unwrap();
    assert_eq!(back.metadata["data"], meta);
}

fn sum_doc(coeffs: &str) -> String {
    format!(
        r#"{{"format":"xcore-json/1","variables":[{{"name":"a","domain":[[0,3]]}},{{"name":"b","domain":[0,1,2]}}],
            "constraints":[{{"type":"sum","scope":["a","b"],"coeffs":{coeffs},"condition":{{"op":"le","rhs":4}}}}],
            "metadata":{{}}}}"#
    )
}

#[test]
fn length_mismatch_names_the_path() {
    assert!(parse_instance(&sum_doc("[1,2]")).is_ok());
    let e = parse_instance(&sum_doc("[1]")).unwrap_err();
    assert_eq!(e.path(), Some("$.constraints[0].coeffs"));
    assert!(e.to_string().contains("length mismatch"));
}

#[test]
fn star_needs_a_starred_table() {
    let doc = |starred: bool| {
        format!(
            r#"{{"format":"xcore-json/1","variables":[{{"name":"a","domain":[[0,3]]}}],
                "constraints":[{{"type":"extension","scope":["a"],"tuples":[["*"]],"supports":true,"starred":{starred}}}]}}"#
        )
    };
    let inst = parse_instance(&doc(true)).unwrap();
    assert!(matches!(&inst.constraints[0].constraint, Constraint::Extension { tuples, .. } if tuples[0] == [STAR]));
    let e = parse_instance(&doc(false)).unwrap_err();
    assert_eq!(e.path(), Some("$.constraints[0].tuples[0][0]"));
}

#[test]
fn structural_errors() {
    let bad_var = sum_doc("[1,2]").replace(r#""scope":["a","b"]"#, r#""scope":["a","c"]"#);
    assert_eq!(parse_instance(&bad_var).unwrap_err().path(), Some("$.constraints[0].scope[1]"));
    let dup = sum_doc("[1,2]").replace(r#""name":"b""#, r#""name":"a""#);
    assert!(parse_instance(&dup).unwrap_err().to_string().contains("duplicate"));
    let empty = sum_doc("[1,2]").replace("[[0,3]]", "[[3,0]]");
    assert_eq!(parse_instance(&empty).unwrap_err().path(), Some("$.variables[0].domain[0]"));
    assert!(matches!(parse_instance("not json"), Err(DocError::Syntax { .. })));
    let no_objective_sense = sum_doc("[1,2]").replace(r#""metadata""#, r#""objective":{"kind":"var","var":"a"},"metadata""#);
    assert_eq!(parse_instance(&no_objective_sense).unwrap_err().path(), Some("$.objective.sense"));
}

#[test]
fn lax_mode_keeps_and_rewrites_extras() {
    let text = sum_doc("[1,2]")
        .replace(r#""op":"le""#, r#""op":"le","note":"x""#)
        .replace(r#""metadata":{}"#, r#""metadata":{},"generator":{"v":2}"#);
    let strict = parse_instance(&text).unwrap_err();
    assert_eq!(strict.path(), Some("$.generator"));
    let doc = parse_document(&text, Mode::Lax).unwrap();
    let paths: Vec<String> = doc.extras.iter().map(|x| x.path()).collect();
    assert_eq!(paths, ["$.generator", "$.constraints[0].condition.note"]);
    let out = doc.to_text();
    assert!(out.contains(r#""generator":{"v":2}"#));
    assert!(out.contains(r#""note":"x""#));
    assert_eq!(parse_document(&out, Mode::Lax).unwrap(), doc);
}

fn arb_instance() -> impl Strategy<Value = Instance> {
    (
        proptest::collection::vec((-5i64..5, 0i64..4), 1..5),
        proptest::collection::vec((any::<bool>(), -3i64..3), 0..4),
    )
        .prop_map(|(vars, cons)| {
            let mut b = InstanceBuilder::new();
            let xs: Vec<_> = vars.iter().enumerate().map(|(i, &(lo, w))| b.var(format!("v{i}"), Domain::range(lo, lo + w))).collect();
            for (k, (table, c)) in cons.into_iter().enumerate() {
                let x = xs[k % xs.len()];
                if table {
                    b.post(Constraint::Extension {
                        scope: vec![x],
                        tuples: Arc::new(vec![vec![c], vec![STAR]]),
                        supports: true,
                        starred: true,
                    });
                } else {
                    b.post(Constraint::Sum {
                        scope: xs.clone(),
                        coeffs: vec![c; xs.len()],
                        condition: Condition::Cmp(xcore::CmpOp::Ge, Term::Var(x)),
                    });
                }
            }
            b.build().unwrap()
        })
}

proptest! {
    #[test]
    fn writing_is_idempotent(inst in arb_instance()) {
        let once = write_instance(&inst);
        let back = parse_instance(&once).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), once);
    }
}
