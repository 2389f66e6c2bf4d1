//! Precomputed tables, automata and triples used by the models.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_integer::Roots;
use xcore::{Automaton, Value, STAR};

/// Eight-letter words over A=0, C=1, G=2, T=3 with exactly four letters in
/// {C, G} whose reverse differs from their complement in at least four places.
pub fn word_design_words() -> Vec<[Value; 8]> {
    let mut out = Vec::new();
    for code in 0..4u32.pow(8) {
        let mut w = [0 as Value; 8];
        for (k, cell) in w.iter_mut().enumerate() {
            *cell = ((code >> (2 * (7 - k))) & 3) as Value;
        }
        let cg = w.iter().filter(|&&v| v == 1 || v == 2).count();
        let differ = (0..8).filter(|&k| w[7 - k] != 3 - w[k]).count();
        if cg == 4 && differ >= 4 {
            out.push(w);
        }
    }
    // codes were enumerated in lexicographic order already
    out
}

pub const STOP: Value = -1;
pub const FILL_A: Value = 0;
pub const FILL_B: Value = 1;
pub const DROP_A: Value = 2;
pub const DROP_B: Value = 3;
pub const A_TO_B: Value = 4;
pub const B_TO_A: Value = 5;

/// Effect of one action on the jug contents, `None` when it changes nothing.
pub fn jug_step(a: Value, b: Value, q1: Value, q2: Value, action: Value) -> Option<(Value, Value)> {
    match action {
        STOP => Some((-1, -1)),
        FILL_A => (q1 != a).then_some((a, q2)),
        FILL_B => (q2 != b).then_some((q1, b)),
        DROP_A => (q1 > 0).then_some((0, q2)),
        DROP_B => (q2 > 0).then_some((q1, 0)),
        A_TO_B => {
            let pour = q1.min(b - q2);
            (pour > 0).then_some((q1 - pour, q2 + pour))
        }
        B_TO_A => {
            let pour = (a - q1).min(q2);
            (pour > 0).then_some((q1 + pour, q2 - pour))
        }
        _ => None,
    }
}

/// Rows `(q1, q2, action, q1', q2')`, led by the absorbing stop row.
pub fn beer_jugs_transitions(a: Value, b: Value) -> Vec<[Value; 5]> {
    let mut t = vec![[-1; 5]];
    for q1 in 0..=a {
        for q2 in 0..=b {
            for act in STOP..=B_TO_A {
                if let Some((r1, r2)) = jug_step(a, b, q1, q2, act) {
                    t.push([q1, q2, act, r1, r2]);
                }
            }
        }
    }
    t
}

/// Triples `(i, j, k)` with `i < j`, `i² + j² = k²` and `k <= n`.
pub fn pythagorean_conflicts(n: i64) -> Vec<(i64, i64, i64)> {
    let mut t = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let s = i * i + j * j;
            if s > n * n {
                break;
            }
            let r = s.sqrt();
            if r * r == s {
                t.push((i, j, r));
            }
        }
    }
    t
}

/// Number of combinations `C(k, t)`.
pub fn binomial(k: i64, t: i64) -> i64 {
    if t < 0 || t > k {
        return 0;
    }
    (0..t).fold(1i64, |acc, i| acc * (k - i) / (i + 1))
}

/// For every column pattern over `k` rows, the code of each `t`-row
/// combination (first row of the combination most significant), deduplicated
/// and sorted.
pub fn covering_table(t: usize, k: usize, g: Value) -> Vec<Vec<Value>> {
    let combos: Vec<Vec<usize>> = (0..k).combinations(t).collect();
    let mut set = BTreeSet::new();
    for pr in std::iter::repeat_n(0..g, k).multi_cartesian_product() {
        let row: Vec<Value> = combos
            .iter()
            .map(|co| co.iter().rev().enumerate().map(|(i, &a)| pr[a] * g.pow(i as u32)).sum())
            .collect();
        set.insert(row);
    }
    set.into_iter().collect()
}

/// Rows of length `n` with `n/2` ones and never three equal symbols in a row.
/// State `q(i,j,k)`: `i` ones so far, current run of `j` zeros or `k` ones.
pub fn binary_puzzle_automaton(n: usize) -> Automaton {
    let m = n / 2;
    let q = |i: usize, j: usize, k: usize| format!("q({i},{j},{k})");
    let pairs: Vec<(usize, usize)> =
        (0..3).cartesian_product(0..3).filter(|&(j, k)| (j == 0 && k > 0) || (j > 0 && k == 0)).collect();
    let mut t = vec![(q(0, 0, 0), 0, q(0, 1, 0)), (q(0, 0, 0), 1, q(1, 0, 1))];
    for i in 0..=m {
        for &(j, k) in &pairs {
            if j < 2 {
                t.push((q(i, j, k), 0, q(i, j + 1, 0)));
            }
        }
    }
    for i in 0..m {
        for &(j, k) in &pairs {
            if k < 2 {
                t.push((q(i, j, k), 1, q(i + 1, 0, k + 1)));
            }
        }
    }
    let finals: Vec<String> = pairs.iter().map(|&(j, k)| q(m, j, k)).collect();
    Automaton::from_named(&q(0, 0, 0), &finals, &t)
}

/// Starred table over `(cell, neighbours...)`: the cell holds `v < n²` and
/// some neighbour holds `v + 1`, or the cell holds `n²`.
pub fn calvin_table(n: Value, neighbours: usize) -> Vec<Vec<Value>> {
    let r = neighbours + 1;
    let mut t = Vec::new();
    for v in 1..n * n {
        for j in 1..r {
            t.push((0..r).map(|i| if i == 0 { v } else if i == j { v + 1 } else { STAR }).collect());
        }
    }
    let mut last = vec![STAR; r];
    last[0] = n * n;
    t.push(last);
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conflicts_small() {
        assert_eq!(pythagorean_conflicts(5), vec![(3, 4, 5)]);
        assert_eq!(pythagorean_conflicts(12), vec![(3, 4, 5), (6, 8, 10)]);
        assert!(pythagorean_conflicts(2).is_empty());
    }

    #[test]
    fn jug_actions() {
        assert_eq!(jug_step(3, 5, 0, 0, FILL_A), Some((3, 0)));
        assert_eq!(jug_step(3, 5, 3, 2, FILL_A), None);
        assert_eq!(jug_step(3, 5, 3, 4, A_TO_B), Some((2, 5)));
        let t = beer_jugs_transitions(1, 2);
        assert_eq!(t[0], [-1; 5]);
        assert!(t.contains(&[0, 0, FILL_A, 1, 0]));
    }

    #[test]
    fn words_start_with_listed_word() {
        let w = word_design_words();
        assert_eq!(w[0], [0, 0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(w[1], [0, 0, 0, 0, 1, 1, 1, 2]);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn binary_rows() {
        let a = binary_puzzle_automaton(4);
        assert!(a.validate().is_ok());
        assert!(a.accepts(&[0, 1, 0, 1]));
        assert!(!a.accepts(&[0, 0, 0, 1]));
        assert!(!a.accepts(&[1, 1, 1, 0]));
        assert!(a.accepts(&[0, 0, 1, 1]));
    }

    #[test]
    fn covering_table_counts() {
        // every 3-subset of 4 binary rows: 16 patterns, one row each
        let t = covering_table(3, 4, 2);
        assert_eq!(t.len(), 16);
        assert!(t.iter().all(|r| r.len() == 4));
        assert_eq!(binomial(4, 3), 4);
        assert_eq!(binomial(9, 4), 126);
    }
}
