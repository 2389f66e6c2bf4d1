//! Brute-force reference answers for small problem instances, written from
//! the puzzle statements rather than from any constraint model.

use std::collections::HashSet;

use itertools::Itertools;
use xcore::Value;

/// Rearranges `a` into the next lexicographic permutation; `false` after the last.
fn next_permutation(a: &mut [Value]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn each_permutation(n: usize, mut f: impl FnMut(&[Value])) {
    let mut a: Vec<Value> = (1..=n as Value).collect();
    loop {
        f(&a);
        if !next_permutation(&mut a) {
            break;
        }
    }
}

/// Row-major `n x n` grids of `1..=n²` in which the up-to-eight surrounding
/// numbers of every cell add up to a multiple of it.
pub fn another_magic_squares(n: usize) -> Vec<Vec<Value>> {
    let mut out = Vec::new();
    each_permutation(n * n, |g| {
        let ok = (0..n).cartesian_product(0..n).all(|(i, j)| {
            let mut s = 0;
            for a in i.saturating_sub(1)..=(i + 1).min(n - 1) {
                for b in j.saturating_sub(1)..=(j + 1).min(n - 1) {
                    if (a, b) != (i, j) {
                        s += g[a * n + b];
                    }
                }
            }
            s % g[i * n + j] == 0
        });
        if ok {
            out.push(g.to_vec());
        }
    });
    out
}

/// Row-major antimagic squares: the `2n + 2` line sums are consecutive integers.
pub fn antimagic_squares(n: usize) -> Vec<Vec<Value>> {
    let mut out = Vec::new();
    each_permutation(n * n, |g| {
        let mut sums = Vec::with_capacity(2 * n + 2);
        for i in 0..n {
            sums.push((0..n).map(|j| g[i * n + j]).sum::<Value>());
            sums.push((0..n).map(|j| g[j * n + i]).sum::<Value>());
        }
        sums.push((0..n).map(|i| g[i * n + i]).sum());
        sums.push((0..n).map(|i| g[(n - 1 - i) * n + i]).sum());
        sums.sort_unstable();
        if sums.windows(2).all(|w| w[1] == w[0] + 1) {
            out.push(g.to_vec());
        }
    });
    out
}

/// 0/1 colourings of `0..=n` with 0 coloured 0 and no monochromatic
/// Pythagorean triple.
pub fn pythagorean_colourings(n: usize) -> Vec<Vec<Value>> {
    let mut triples = Vec::new();
    for c in 1..=n {
        for a in 1..c {
            for b in a + 1..c {
                if a * a + b * b == c * c {
                    triples.push((a, b, c));
                }
            }
        }
    }
    let mut out = Vec::new();
    for mask in 0u64..1 << n {
        let col: Vec<Value> = std::iter::once(0).chain((0..n).map(|i| ((mask >> i) & 1) as Value)).collect();
        if triples.iter().all(|&(a, b, c)| !(col[a] == col[b] && col[b] == col[c])) {
            out.push(col);
        }
    }
    out
}

fn balanced_without_triples(line: &[Value]) -> bool {
    let ones = line.iter().filter(|&&v| v == 1).count();
    2 * ones == line.len() && line.windows(3).all(|w| !(w[0] == w[1] && w[1] == w[2]))
}

/// Completed binary puzzles: balanced rows and columns, no three equal
/// neighbours in a line, and all rows and all columns distinct.
pub fn binary_puzzle_grids(n: usize) -> Vec<Vec<Value>> {
    let rows: Vec<Vec<Value>> = (0u32..1 << n)
        .map(|m| (0..n).map(|k| ((m >> (n - 1 - k)) & 1) as Value).collect::<Vec<_>>())
        .filter(|r| balanced_without_triples(r))
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn go(rows: &[Vec<Value>], n: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<Value>>) {
        if chosen.len() == n {
            let cols: Vec<Vec<Value>> = (0..n).map(|j| chosen.iter().map(|&r| rows[r][j]).collect()).collect();
            let distinct: HashSet<&Vec<Value>> = cols.iter().collect();
            if distinct.len() == n && cols.iter().all(|c| balanced_without_triples(c)) {
                out.push(chosen.iter().flat_map(|&r| rows[r].clone()).collect());
            }
            return;
        }
        for r in 0..rows.len() {
            if chosen.contains(&r) {
                continue;
            }
            chosen.push(r);
            // prune on column prefixes: no triple and at most n/2 of each symbol
            let depth = chosen.len();
            let ok = (0..n).all(|j| {
                let col: Vec<Value> = chosen.iter().map(|&c| rows[c][j]).collect();
                let ones = col.iter().filter(|&&v| v == 1).count();
                ones <= n / 2 && depth - ones <= n / 2 && col.windows(3).all(|w| !(w[0] == w[1] && w[1] == w[2]))
            });
            if ok {
                go(rows, n, chosen, out);
            }
            chosen.pop();
        }
    }
    go(&rows, n, &mut chosen, &mut out);
    out
}

/// Number of actions on the longest walk from two empty jugs that never
/// revisits a configuration.
pub fn longest_jug_walk(a: Value, b: Value) -> usize {
    let moves = |(p, q): (Value, Value)| -> Vec<(Value, Value)> {
        let mut m = Vec::new();
        if p < a {
            m.push((a, q));
        }
        if q < b {
            m.push((p, b));
        }
        if p > 0 {
            m.push((0, q));
        }
        if q > 0 {
            m.push((p, 0));
        }
        let ab = p.min(b - q);
        if ab > 0 {
            m.push((p - ab, q + ab));
        }
        let ba = q.min(a - p);
        if ba > 0 {
            m.push((p + ba, q - ba));
        }
        m
    };
    fn dfs(s: (Value, Value), seen: &mut HashSet<(Value, Value)>, moves: &dyn Fn((Value, Value)) -> Vec<(Value, Value)>) -> usize {
        let mut best = 0;
        for t in moves(s) {
            if seen.insert(t) {
                best = best.max(1 + dfs(t, seen, moves));
                seen.remove(&t);
            }
        }
        best
    }
    let mut seen = HashSet::from([(0, 0)]);
    dfs((0, 0), &mut seen, &moves)
}

/// Smallest total distance from every node to its nearest of `k` centres.
pub fn k_median_optimum(distances: &[Vec<Value>], k: usize) -> Value {
    let n = distances.len();
    (0..n)
        .combinations(k)
        .map(|cs| (0..n).map(|j| cs.iter().map(|&c| distances[c][j]).min().unwrap()).sum())
        .min()
        .unwrap()
}

/// Best total profit of a 0/1 selection within every weight capacity, where
/// each dimension's alternative profit must also reach the total.
pub fn gmkp_optimum(profits: &[Value], wmatrix: &[Vec<Value>], capacities: &[Value], pmatrix: &[Vec<Value>]) -> Value {
    let n = profits.len();
    let dot = |w: &[Value], mask: u32| (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| w[i]).sum::<Value>();
    (0u32..1 << n)
        .filter(|&m| wmatrix.iter().zip(capacities).all(|(w, &c)| dot(w, m) <= c))
        .filter(|&m| pmatrix.iter().all(|p| dot(p, m) >= dot(profits, m)))
        .map(|m| dot(profits, m))
        .max()
        .unwrap()
}

fn cycles(succ: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; succ.len()];
    let mut out = Vec::new();
    for s in 0..succ.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            c.push(v);
            v = succ[v];
        }
        out.push(c);
    }
    out
}

/// Best total weight of a successor permutation avoiding negative arcs
/// between distinct nodes, with every cycle at most `k` long.
pub fn kidney_optimum(weights: &[Vec<Value>], k: usize) -> Option<Value> {
    let n = weights.len();
    (0..n)
        .permutations(n)
        .filter(|p| (0..n).all(|i| p[i] == i || weights[i][p[i]] >= 0))
        .filter(|p| cycles(p).iter().all(|c| c.len() <= k))
        .map(|p| (0..n).map(|i| weights[i][p[i]]).sum())
        .max()
}

/// Shortest tour from node 0 visiting every node within its time window,
/// waiting allowed.
pub fn tsptw_optimum(distances: &[Vec<Value>], windows: &[(Value, Value)]) -> Option<Value> {
    let n = distances.len();
    if !(windows[0].0..=windows[0].1).contains(&0) {
        return None;
    }
    (1..n)
        .permutations(n - 1)
        .filter_map(|order| {
            let mut t = 0;
            let mut prev = 0;
            let mut length = 0;
            for &v in &order {
                t = (t + distances[prev][v]).max(windows[v].0);
                if t > windows[v].1 {
                    return None;
                }
                length += distances[prev][v];
                prev = v;
            }
            Some(length + distances[prev][0])
        })
        .min()
}

/// Fewest node installations over `m` rings of at most `r` nodes such that
/// both ends of every demand share a ring.
pub fn sonet_optimum(n: usize, m: usize, r: usize, demands: &[(usize, usize)]) -> Option<Value> {
    let rings: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() as usize <= r).collect();
    let mut best: Option<Value> = None;
    for choice in std::iter::repeat_n(rings.iter(), m).multi_cartesian_product() {
        let served = demands.iter().all(|&(u, v)| choice.iter().any(|&&s| s >> u & 1 == 1 && s >> v & 1 == 1));
        if served {
            let cost: Value = choice.iter().map(|s| s.count_ones() as Value).sum();
            best = Some(best.map_or(cost, |b| b.min(cost)));
        }
    }
    best
}

fn peak_usage(starts: &[Value], durations: &[Value], heights: &[Value]) -> Value {
    let end = starts.iter().zip(durations).map(|(s, d)| s + d).max().unwrap_or(0);
    (0..end)
        .map(|t| {
            (0..starts.len()).filter(|&i| starts[i] <= t && t < starts[i] + durations[i]).map(|i| heights[i]).sum()
        })
        .max()
        .unwrap_or(0)
}

/// Smallest makespan with resource usage within `limit` at every instant,
/// trying start times below `horizon`.
pub fn scheduling_optimum(limit: Value, durations: &[Value], heights: &[Value], horizon: Value) -> Option<Value> {
    std::iter::repeat_n(0..horizon, durations.len())
        .multi_cartesian_product()
        .filter(|s| peak_usage(s, durations, heights) <= limit)
        .map(|s| s.iter().zip(durations).map(|(a, d)| a + d).max().unwrap())
        .min()
}

/// Cheapest resource levels for a schedule that finishes by `horizon` and
/// respects the precedences. Levels never go below the largest single
/// requirement of the resource.
pub fn rip_optimum(
    horizon: Value,
    costs: &[Value],
    durations: &[Value],
    successors: &[Vec<usize>],
    requirements: &[Vec<Value>],
) -> Option<Value> {
    let n = durations.len();
    std::iter::repeat_n(0..=horizon, n)
        .multi_cartesian_product()
        .filter(|s| (0..n).all(|i| s[i] + durations[i] <= horizon))
        .filter(|s| (0..n).all(|i| successors[i].iter().all(|&j| s[i] + durations[i] <= s[j])))
        .map(|s| {
            costs
                .iter()
                .enumerate()
                .map(|(r, &c)| {
                    let h: Vec<Value> = requirements.iter().map(|req| req[r]).collect();
                    let floor = h.iter().copied().max().unwrap_or(0);
                    c * peak_usage(&s, durations, &h).max(floor)
                })
                .sum()
        })
        .min()
}
