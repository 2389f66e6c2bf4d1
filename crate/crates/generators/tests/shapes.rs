//! Variable and constraint-form counts against closed forms, over several
//! parameter points per model and over the whole published manifest.

use xcore::{ConstraintKind as K, SYMMETRY_BREAKING};
use xcore_generators::*;

fn ints(id: ProblemId, s: &str) -> ProblemData {
    ProblemData::parse(id, s).unwrap()
}

fn json(id: ProblemId, s: &str) -> ProblemData {
    ProblemData::parse(id, s).unwrap()
}

fn points() -> Vec<ProblemData> {
    use ProblemId::*;
    vec![
        ints(AnotherMagicSquare, "2"),
        ints(AnotherMagicSquare, "3"),
        ints(AnotherMagicSquare, "5"),
        ints(AntimagicSquare, "3"),
        ints(AntimagicSquare, "4"),
        ints(AntimagicSquare, "6"),
        ints(BinaryPuzzle, "4"),
        ints(BinaryPuzzle, "6 regular"),
        ints(BinaryPuzzle, "8"),
        ints(BinaryPuzzle, "8 regular"),
        ints(CalvinPuzzle, "3"),
        ints(CalvinPuzzle, "4 table"),
        ints(CalvinPuzzle, "5"),
        ints(CalvinPuzzle, "5 table"),
        json(Coloring, r#"{"n": 3, "nColors": 3, "edges": [[0,1],[1,2],[0,2]]}"#),
        json(Coloring, r#"{"n": 5, "nColors": 2, "edges": [[0,1],[1,2],[2,3],[3,4]]}"#),
        json(Coloring, r#"{"n": 2, "nColors": 4, "edges": []}"#),
        ints(CoveringArray, "3,4,2,8"),
        ints(CoveringArray, "3,5,2,10"),
        ints(CoveringArray, "2,3,3,9"),
        json(Dominoes, r#"{"grid": [[0,0,1],[0,1,1]]}"#),
        json(Dominoes, r#"{"grid": [[0,1,2,2],[0,0,1,1],[2,2,0,1]]}"#),
        json(Dominoes, r#"{"grid": [[0,0]]}"#),
        ints(NonTransitiveDice, "3,3,0"),
        ints(NonTransitiveDice, "4,5,3"),
        ints(NonTransitiveDice, "6,6,0"),
        ints(PythagoreanTriples, "5"),
        ints(PythagoreanTriples, "12"),
        ints(PythagoreanTriples, "100"),
        json(Slant, r#"{"grid": [[-1,-1],[-1,-1]]}"#),
        json(Slant, r#"{"grid": [[-1,1,-1],[1,-1,1],[-1,1,-1]]}"#),
        ProblemData::parse(Slant, "3\n-1 -1 -1 -1\n-1 2 2 -1\n-1 -1 -1 -1\n0 -1 -1 -1").unwrap(),
        ints(SquarePacking, "6"),
        ints(SquarePacking, "10"),
        ints(SquarePacking, "27"),
        ints(WordDesign, "2"),
        ints(WordDesign, "5"),
        ints(WordDesign, "9"),
        ints(BeerJugs, "1,2"),
        ints(BeerJugs, "3,10"),
        ints(BeerJugs, "9,10"),
        json(Sonet, r#"{"n": 3, "m": 2, "r": 2, "connections": [[0,1],[1,2]]}"#),
        json(Sonet, r#"{"n": 4, "m": 3, "r": 3, "connections": [[0,1],[1,2],[2,3],[0,3]]}"#),
        json(Sonet, r#"{"n": 6, "m": 10, "r": 3, "connections": [[0,1],[0,2],[0,3],[2,3],[2,5],[4,5]]}"#),
        json(KMedian, r#"{"distances": [[0,2,4],[2,0,1],[4,1,0]], "k": 1}"#),
        json(KMedian, r#"{"distances": [[0,2,4],[2,0,1],[4,1,0]], "k": 2}"#),
        json(KMedian, r#"{"distances": [[0,3,4,5],[3,0,1,2],[4,1,0,6],[5,2,6,0]], "k": 2}"#),
        json(GeneralizedMkp, r#"{"profits": [5,3], "wmatrix": [[2,2]], "capacities": [3]}"#),
        json(GeneralizedMkp, r#"{"profits": [5,3,4], "wmatrix": [[2,2,1],[1,3,2]], "capacities": [3,4]}"#),
        json(
            GeneralizedMkp,
            r#"{"profits": [1,2], "wmatrix": [[1,1],[2,2]], "capacities": [1,2], "pmatrix": [[2,2],[1,3]]}"#,
        ),
        json(Tsptw, r#"{"distances": [[0,2,3],[2,0,4],[3,4,0]], "windows": [[0,50],[0,50],[0,50]]}"#),
        json(Tsptw, r#"{"distances": [[0,1],[1,0]], "windows": [[0,10],[1,5]]}"#),
        json(
            Tsptw,
            r#"{"distances": [[0,1,2,3],[1,0,1,2],[2,1,0,1],[3,2,1,0]], "windows": [[0,40],[1,9],[2,20],[0,30]]}"#,
        ),
        json(
            Rip,
            r#"{"horizon": 6, "costs": [2,1], "jobs": [
                {"duration": 2, "successors": [1], "requirements": [1,0]},
                {"duration": 1, "successors": [], "requirements": [2,1]},
                {"duration": 3, "successors": [], "requirements": [0,2]}]}"#,
        ),
        json(
            Rip,
            r#"{"horizon": 4, "costs": [1], "jobs": [
                {"duration": 2, "successors": [], "requirements": [1]},
                {"duration": 2, "successors": [], "requirements": [1]}]}"#,
        ),
        json(
            Rip,
            r#"{"horizon": 9, "costs": [3,1,2], "jobs": [
                {"duration": 1, "successors": [1,2], "requirements": [1,1,1]},
                {"duration": 2, "successors": [3], "requirements": [0,1,0]},
                {"duration": 2, "successors": [3], "requirements": [2,0,0]},
                {"duration": 1, "successors": [], "requirements": [0,0,3]}]}"#,
        ),
        json(LargeScaleScheduling, r#"{"limit": 2, "durations": [3,1], "heights": [1,2]}"#),
        json(LargeScaleScheduling, r#"{"limit": 3, "durations": [2,2,2], "heights": [2,2,1]}"#),
        json(LargeScaleScheduling, r#"{"limit": 1, "durations": [1], "heights": [1]}"#),
        json(KidneyExchange, r#"{"weights": [[-1,2,-1],[3,-1,-1],[-1,-1,-1]], "k": 2}"#),
        json(KidneyExchange, r#"{"weights": [[0,1],[1,0]], "k": 2}"#),
        json(KidneyExchange, r#"{"weights": [[-1,1,-1,-1],[-1,-1,1,-1],[1,-1,-1,2],[-1,-1,3,-1]], "k": 3}"#),
    ]
}

#[test]
fn every_model_has_three_points() {
    let pts = points();
    for id in ProblemId::ALL {
        assert!(pts.iter().filter(|d| d.id() == id).count() >= 3, "{id}");
    }
}

#[test]
fn shapes_follow_closed_forms() {
    for d in points() {
        let inst = build_instance(&d).unwrap_or_else(|e| panic!("{d:?}: {e}"));
        assert_eq!(Shape::of(&inst), expected_shape(&d), "{d:?}");
        assert_eq!(inst.is_cop(), d.id().is_cop());
    }
}

#[test]
fn builds_are_deterministic() {
    for d in points() {
        assert_eq!(build_instance(&d).unwrap(), build_instance(&d).unwrap());
    }
}

#[test]
fn manifest_builds_with_expected_shapes() {
    for entry in manifest() {
        let inst = build_instance(&entry.data).unwrap_or_else(|e| panic!("{:?}: {e}", entry.data));
        assert_eq!(Shape::of(&inst), expected_shape(&entry.data), "{:?}", entry.data.id());
    }
}

#[test]
fn guards_name_the_assertion() {
    let e = build_instance(&ProblemData::BinaryPuzzle(Variant { n: 5, variant: String::new() })).unwrap_err();
    assert!(e.to_string().contains("n % 2 == 0"), "{e}");
    let e = build_instance(&ProblemData::SquarePacking(Order { n: 5 })).unwrap_err();
    assert!(e.to_string().contains("6 <= n <= 27"), "{e}");
    assert!(build_instance(&ProblemData::SquarePacking(Order { n: 28 })).is_err());
    assert!(build_instance(&ProblemData::SquarePacking(Order { n: 6 })).is_ok());
}

#[test]
fn malformed_data_is_rejected() {
    use ProblemId::*;
    for (id, text) in [
        (Coloring, r#"{"n": 2, "nColors": 2, "edges": [[0,2]]}"#),
        (KMedian, r#"{"distances": [[0,1],[1]], "k": 1}"#),
        (KMedian, r#"{"distances": [[0,1],[1,0]], "k": 3}"#),
        (GeneralizedMkp, r#"{"profits": [1,2], "wmatrix": [[1]], "capacities": [1]}"#),
        (Tsptw, r#"{"distances": [[0,1],[1,0]], "windows": [[0,1]]}"#),
        (Rip, r#"{"horizon": 3, "costs": [1], "jobs": [{"duration": 1, "successors": [4], "requirements": [1]}]}"#),
        (Sonet, r#"{"n": 2, "m": 1, "r": 1, "connections": [[0,5]]}"#),
        (Dominoes, r#"{"grid": [[0,1],[0]]}"#),
        (Slant, r#"{"grid": [[-1,7],[-1,-1]]}"#),
    ] {
        let d = ProblemData::parse(id, text).unwrap();
        assert!(build_instance(&d).is_err(), "{id} accepted {text}");
    }
    assert!(ProblemData::parse(Coloring, r#"{"n": 2, "colors": 2, "edges": []}"#).is_err());
}

#[test]
fn spec_counts() {
    // another magic square of order 2
    let inst = build_instance(&ProblemData::AnotherMagicSquare(Order { n: 2 })).unwrap();
    assert_eq!(inst.n_vars(), 4);
    assert!(inst.variables.iter().all(|v| v.domain.min() == Some(1) && v.domain.max() == Some(4)));
    assert_eq!(inst.form_counts()[&K::AllDifferent], 1);
    assert_eq!(inst.form_counts()[&K::Intension], 4);

    // antimagic square of order 3: sums range over 6..=45
    let inst = build_instance(&ProblemData::AntimagicSquare(Order { n: 3 })).unwrap();
    let y = inst.var_by_name("y[0]").unwrap();
    assert_eq!((inst.domain(y).min(), inst.domain(y).max()), (Some(6), Some(45)));
    assert_eq!(inst.form_counts()[&K::Sum], 8);
    assert_eq!(inst.constraints.iter().filter(|p| p.has_tag(SYMMETRY_BREAKING)).count(), 4);

    // covering array (3,4,2,8)
    let inst = build_instance(&ProblemData::CoveringArray(CoveringParams { t: 3, k: 4, g: 2, b: 8 })).unwrap();
    assert_eq!(inst.n_vars(), 4 * 8 + 4 * 8);
    let p = inst.var_by_name("p[3][7]").unwrap();
    assert_eq!(inst.domain(p).max(), Some(7));
    let counts = inst.form_counts();
    assert_eq!((counts[&K::AllDifferent], counts[&K::Channel], counts[&K::Extension]), (4, 4, 8));

    // non-transitive dice (6,6,0) uses 12 face values
    let inst = build_instance(&ProblemData::NonTransitiveDice(DiceParams { n: 6, m: 6, d: 0 })).unwrap();
    let x = inst.var_by_name("x[0][0]").unwrap();
    assert_eq!(inst.domain(x).size(), 12);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn integer_models_match_closed_forms(n in 2i64..9, which in 0usize..5) {
            let p = match which {
                0 => ints(ProblemId::AnotherMagicSquare, &n.to_string()),
                1 => ints(ProblemId::AntimagicSquare, &n.to_string()),
                2 => ints(ProblemId::BinaryPuzzle, &(2 * n).to_string()),
                3 => ints(ProblemId::PythagoreanTriples, &(n * 5).to_string()),
                _ => ints(ProblemId::WordDesign, &n.to_string()),
            };
            let inst = build_instance(&p).unwrap();
            prop_assert_eq!(Shape::of(&inst), expected_shape(&p));
            prop_assert_eq!(&Shape::of(&build_instance(&p).unwrap()), &Shape::of(&inst));
        }

        #[test]
        fn covering_models_match_closed_forms(t in 1i64..4, extra in 0i64..3, g in 2i64..4, b in 1i64..12) {
            let p = ProblemData::CoveringArray(CoveringParams { t, k: t + extra, g, b });
            match build_instance(&p) {
                Ok(inst) => prop_assert_eq!(Shape::of(&inst), expected_shape(&p)),
                Err(_) => prop_assert!(b < g.pow(t as u32)),
            }
        }
    }
}
