//! Closed-form variable and constraint counts per model, written from the
//! model definitions rather than from the builders.

use std::collections::BTreeMap;

use num_integer::Integer;
use xcore::{ConstraintKind as K, Instance, SYMMETRY_BREAKING};

use crate::data::ProblemData;
use crate::puzzles::square_reductions;
use crate::tables::binomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub vars: usize,
    pub forms: BTreeMap<K, usize>,
    pub symmetry_breaking: usize,
}

impl Shape {
    pub fn of(inst: &Instance) -> Shape {
        Shape {
            vars: inst.n_vars(),
            forms: inst.form_counts(),
            symmetry_breaking: inst.constraints.iter().filter(|p| p.has_tag(SYMMETRY_BREAKING)).count(),
        }
    }
}

fn forms(pairs: &[(K, usize)]) -> BTreeMap<K, usize> {
    pairs.iter().copied().filter(|&(_, c)| c > 0).collect()
}

/// Pythagorean triples with hypotenuse at most `n`, by Euclid's formula.
fn triples_up_to(n: i64) -> usize {
    let mut count = 0;
    let mut m = 2;
    while m * m < n {
        for q in 1..m {
            if (m - q) % 2 == 1 && m.gcd(&q) == 1 {
                let c = m * m + q * q;
                if c <= n {
                    count += (n / c) as usize;
                }
            }
        }
        m += 1;
    }
    count
}

/// Expected shape for a valid parameter record.
pub fn expected_shape(data: &ProblemData) -> Shape {
    let (vars, f, sb): (i64, BTreeMap<K, usize>, i64) = match data {
        ProblemData::AnotherMagicSquare(d) => {
            let n = d.n;
            (n * n, forms(&[(K::AllDifferent, 1), (K::Intension, (n * n) as usize)]), 0)
        }
        ProblemData::AntimagicSquare(d) => {
            let n = d.n;
            let lines = (2 * n + 2) as usize;
            (n * n + 2 * n + 2, forms(&[(K::AllDifferent, 2), (K::Sum, lines), (K::Intension, 5)]), 4)
        }
        ProblemData::BinaryPuzzle(d) => {
            let n = d.n;
            let f = if d.variant == "regular" {
                forms(&[(K::Regular, (2 * n) as usize), (K::AllDifferentList, 2)])
            } else {
                forms(&[(K::Sum, (2 * n + 2 * n * (n - 2)) as usize), (K::AllDifferentList, 2)])
            };
            (n * n, f, 0)
        }
        ProblemData::CalvinPuzzle(d) => {
            let cells = (d.n * d.n) as usize;
            let f = if d.variant == "table" {
                forms(&[(K::AllDifferent, 1), (K::Intension, 1), (K::Extension, cells)])
            } else {
                forms(&[(K::AllDifferent, 1), (K::Intension, 1 + cells)])
            };
            (d.n * d.n, f, 1)
        }
        ProblemData::Coloring(d) => {
            let sb = d.n.min(d.n_colors);
            (d.n, forms(&[(K::Intension, d.edges.len() + sb as usize)]), sb)
        }
        ProblemData::CoveringArray(p) => {
            let n = binomial(p.k, p.t);
            let d = p.g.pow(p.t as u32);
            let f = forms(&[(K::AllDifferent, n as usize), (K::Channel, n as usize), (K::Extension, p.b as usize)]);
            (n * d + n * p.b, f, 0)
        }
        ProblemData::Dominoes(g) => {
            let v = g.grid.len() as i64;
            let pairs = v * (v + 1) / 2;
            let f = forms(&[(K::AllDifferent, 1), (K::Extension, 2 * pairs as usize), (K::Intension, pairs as usize)]);
            (2 * pairs, f, 0)
        }
        ProblemData::NonTransitiveDice(p) => {
            let f = forms(&[(K::Ordered, p.n as usize), (K::Intension, 3 * p.n as usize), (K::Maximum, 1)]);
            (p.n * p.m + 3 * p.n + 1, f, p.n)
        }
        ProblemData::PythagoreanTriples(d) => {
            (d.n + 1, forms(&[(K::Intension, 1), (K::NValues, triples_up_to(d.n))]), 0)
        }
        ProblemData::Slant(g) => {
            let n = g.grid.len() as i64;
            let incidences = 4 * (n - 1) * (n - 1);
            ((n - 1) * (n - 1) + 2 * n * n, forms(&[(K::Intension, (4 * n * n + incidences) as usize)]), 0)
        }
        ProblemData::SquarePacking(d) => {
            let t = square_reductions();
            let removed: usize = t.iter().take(d.n as usize).map(Vec::len).sum();
            let sb = 2 + 2 * removed;
            let f = forms(&[(K::NoOverlap, 1), (K::Cumulative, 2), (K::Intension, sb)]);
            (2 * d.n, f, sb as i64)
        }
        ProblemData::WordDesign(d) => {
            let n = d.n;
            let f = forms(&[
                (K::Intension, (8 * n + n * (n - 1) / 2 + n * (n - 1)) as usize),
                (K::Extension, n as usize),
                (K::Lex, 1),
            ]);
            (16 * n, f, 1)
        }
        ProblemData::BeerJugs(_) => {
            let s = crate::JUG_STEPS as i64;
            let states = s + 1;
            let f = forms(&[(K::Intension, (states * (states - 1) / 2 + s) as usize), (K::Extension, s as usize)]);
            (2 * states + s + 1, f, 0)
        }
        ProblemData::Sonet(d) => {
            let f = forms(&[(K::Extension, d.connections.len()), (K::Sum, d.m as usize), (K::Lex, 1)]);
            (d.n * d.m, f, 1)
        }
        ProblemData::KMedian(d) => {
            let n = d.distances.len() as i64;
            let f = forms(&[
                (K::AllDifferent, 1),
                (K::Ordered, 1),
                (K::Element, (d.k * n) as usize),
                (K::Minimum, n as usize),
            ]);
            (d.k + d.k * n + n, f, 1)
        }
        ProblemData::GeneralizedMkp(d) => {
            let f = forms(&[(K::Knapsack, d.capacities.len()), (K::Sum, 1)]);
            ((d.profits.len() + d.capacities.len() + 1) as i64, f, 0)
        }
        ProblemData::Tsptw(d) => {
            let n = d.distances.len();
            let f = forms(&[(K::Intension, 1 + 2 * n), (K::Circuit, 1), (K::Element, 2 * n)]);
            (4 * n as i64, f, 0)
        }
        ProblemData::Rip(d) => {
            let succ: usize = d.jobs.iter().map(|j| j.successors.len()).sum();
            let f = forms(&[(K::Intension, d.jobs.len() + succ), (K::Cumulative, d.costs.len())]);
            ((d.jobs.len() + d.costs.len()) as i64, f, 0)
        }
        ProblemData::LargeScaleScheduling(d) => (d.durations.len() as i64, forms(&[(K::Cumulative, 1)]), 0),
        ProblemData::KidneyExchange(d) => {
            let n = d.weights.len();
            let disabled = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j && d.weights[i][j] < 0).count();
            let f = forms(&[
                (K::AllDifferent, 1),
                (K::Element, 2 * n),
                (K::Intension, disabled),
                (K::BinPacking, 1),
                (K::Precedence, 1),
            ]);
            (3 * n as i64, f, 1)
        }
    };
    Shape { vars: vars as usize, forms: f, symmetry_breaking: sb as usize }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclid_count_matches_direct_listing() {
        for n in [1, 5, 12, 25, 100, 300] {
            assert_eq!(triples_up_to(n), crate::pythagorean_conflicts(n).len(), "n = {n}");
        }
    }
}
