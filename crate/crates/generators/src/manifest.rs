//! Parameter points of the published instance series.

use crate::data::*;

#[derive(Clone, Debug)]
pub struct ManifestEntry {
    pub data: ProblemData,
    /// Small enough to solve at desk scale; the rest are build-only.
    pub desk: bool,
}

const DOMINOES_GRID: [[i64; 8]; 7] = [
    [0, 5, 2, 2, 5, 4, 6, 5],
    [3, 6, 2, 2, 4, 4, 4, 1],
    [3, 6, 1, 2, 3, 4, 6, 1],
    [0, 1, 4, 3, 0, 2, 2, 1],
    [3, 5, 3, 0, 3, 1, 5, 6],
    [6, 4, 0, 3, 6, 0, 4, 1],
    [1, 6, 0, 0, 2, 5, 5, 5],
];

pub const SLANT_SAMPLE: &str = "7
-1 1 -1 -1 -1 -1 1 -1
-1 3 1 1 -1 2 -1 -1
-1 2 -1 1 -1 3 1 1
-1 -1 1 -1 -1 2 1 -1
-1 -1 -1 2 -1 -1 -1 -1
1 -1 1 1 -1 2 1 -1
1 -1 2 2 2 3 -1 -1
-1 1 -1 -1 -1 1 1 -1
";

fn entry(data: ProblemData, desk: bool) -> ManifestEntry {
    ManifestEntry { data, desk }
}

/// Every parameter point listed for the in-scope series, in listing order.
pub fn manifest() -> Vec<ManifestEntry> {
    let mut m = Vec::new();
    for n in [2, 3, 4, 5, 6, 7, 8, 9, 10, 12] {
        m.push(entry(ProblemData::AnotherMagicSquare(Order { n }), n <= 3));
    }
    for n in 3..=12 {
        m.push(entry(ProblemData::AntimagicSquare(Order { n }), n == 3));
    }
    for variant in ["", "regular"] {
        for n in [20, 40, 60, 80, 100, 120] {
            m.push(entry(ProblemData::BinaryPuzzle(Variant { n, variant: variant.into() }), n == 20));
        }
    }
    for variant in ["", "table"] {
        for n in [5, 6, 7, 8, 9, 10, 12] {
            m.push(entry(ProblemData::CalvinPuzzle(Variant { n, variant: variant.into() }), n == 5));
        }
    }
    for (t, k, g, b) in [
        (3, 4, 2, 8),
        (3, 5, 2, 10),
        (3, 6, 2, 12),
        (3, 7, 2, 12),
        (3, 8, 2, 12),
        (3, 9, 2, 12),
        (3, 10, 2, 12),
        (3, 11, 2, 12),
        (4, 6, 2, 21),
        (4, 7, 2, 38),
        (4, 8, 2, 42),
        (4, 9, 2, 50),
    ] {
        m.push(entry(ProblemData::CoveringArray(CoveringParams { t, k, g, b }), (t, k) == (3, 4)));
    }
    m.push(entry(
        ProblemData::Dominoes(Grid { grid: DOMINOES_GRID.iter().map(|r| r.to_vec()).collect() }),
        true,
    ));
    for (n, mm, d) in [
        (6, 6, 0),
        (8, 8, 0),
        (8, 8, 3),
        (10, 10, 0),
        (10, 10, 3),
        (15, 15, 3),
        (15, 15, 4),
        (20, 20, 3),
        (20, 20, 4),
        (30, 30, 3),
        (30, 30, 4),
        (40, 40, 0),
    ] {
        m.push(entry(ProblemData::NonTransitiveDice(DiceParams { n, m: mm, d }), n == 6));
    }
    for n in [2000, 4000, 5000, 6000, 7000, 7500, 7824, 7825] {
        m.push(entry(ProblemData::PythagoreanTriples(Order { n }), false));
    }
    m.push(entry(ProblemData::Slant(parse_slant_text(SLANT_SAMPLE).expect("sample grid parses")), true));
    for n in [15, 18, 20, 21, 22, 23, 24, 25, 26, 27] {
        m.push(entry(ProblemData::SquarePacking(Order { n }), false));
    }
    for n in [5, 15, 25, 35, 45, 55, 65, 75, 85, 100] {
        m.push(entry(ProblemData::WordDesign(Order { n }), n == 5));
    }
    for (a, b) in [(3, 10), (9, 10), (7, 12), (11, 12), (11, 14), (11, 16), (13, 16), (15, 16)] {
        m.push(entry(ProblemData::BeerJugs(Jugs { a, b }), false));
    }
    m.push(entry(
        ProblemData::Sonet(SonetData {
            n: 6,
            m: 10,
            r: 3,
            connections: vec![(0, 1), (0, 2), (0, 3), (2, 3), (2, 5), (4, 5)],
        }),
        true,
    ));
    m
}
