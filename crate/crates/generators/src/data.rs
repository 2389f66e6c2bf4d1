//! Problem identifiers and their parameter records.

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use xcore::Value;

use crate::BuildError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    AnotherMagicSquare,
    AntimagicSquare,
    BinaryPuzzle,
    CalvinPuzzle,
    Coloring,
    CoveringArray,
    Dominoes,
    NonTransitiveDice,
    PythagoreanTriples,
    Slant,
    SquarePacking,
    WordDesign,
    BeerJugs,
    Sonet,
    KMedian,
    GeneralizedMkp,
    Tsptw,
    Rip,
    LargeScaleScheduling,
    KidneyExchange,
}

impl ProblemId {
    pub const ALL: [ProblemId; 20] = [
        ProblemId::AnotherMagicSquare,
        ProblemId::AntimagicSquare,
        ProblemId::BinaryPuzzle,
        ProblemId::CalvinPuzzle,
        ProblemId::Coloring,
        ProblemId::CoveringArray,
        ProblemId::Dominoes,
        ProblemId::NonTransitiveDice,
        ProblemId::PythagoreanTriples,
        ProblemId::Slant,
        ProblemId::SquarePacking,
        ProblemId::WordDesign,
        ProblemId::BeerJugs,
        ProblemId::Sonet,
        ProblemId::KMedian,
        ProblemId::GeneralizedMkp,
        ProblemId::Tsptw,
        ProblemId::Rip,
        ProblemId::LargeScaleScheduling,
        ProblemId::KidneyExchange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::AnotherMagicSquare => "AnotherMagicSquare",
            ProblemId::AntimagicSquare => "AntimagicSquare",
            ProblemId::BinaryPuzzle => "BinaryPuzzle",
            ProblemId::CalvinPuzzle => "CalvinPuzzle",
            ProblemId::Coloring => "Coloring",
            ProblemId::CoveringArray => "CoveringArray",
            ProblemId::Dominoes => "Dominoes",
            ProblemId::NonTransitiveDice => "NonTransitiveDice",
            ProblemId::PythagoreanTriples => "PythagoreanTriples",
            ProblemId::Slant => "Slant",
            ProblemId::SquarePacking => "SquarePacking",
            ProblemId::WordDesign => "WordDesign",
            ProblemId::BeerJugs => "BeerJugs",
            ProblemId::Sonet => "Sonet",
            ProblemId::KMedian => "KMedian",
            ProblemId::GeneralizedMkp => "GeneralizedMKP",
            ProblemId::Tsptw => "TSPTW",
            ProblemId::Rip => "RIP",
            ProblemId::LargeScaleScheduling => "LargeScaleScheduling",
            ProblemId::KidneyExchange => "KidneyExchange",
        }
    }

    /// Case-insensitive lookup; `-` and `_` are ignored.
    pub fn from_name(s: &str) -> Option<ProblemId> {
        let key: String = s.chars().filter(|c| *c != '-' && *c != '_').collect::<String>().to_lowercase();
        ProblemId::ALL.into_iter().find(|p| p.name().to_lowercase() == key)
    }

    pub fn is_cop(self) -> bool {
        matches!(
            self,
            ProblemId::BeerJugs
                | ProblemId::Sonet
                | ProblemId::KMedian
                | ProblemId::GeneralizedMkp
                | ProblemId::Tsptw
                | ProblemId::Rip
                | ProblemId::LargeScaleScheduling
                | ProblemId::KidneyExchange
        )
    }

    /// Problems whose parameters are a few integers (plus a variant name).
    pub fn takes_integers(self) -> bool {
        matches!(
            self,
            ProblemId::AnotherMagicSquare
                | ProblemId::AntimagicSquare
                | ProblemId::BinaryPuzzle
                | ProblemId::CalvinPuzzle
                | ProblemId::CoveringArray
                | ProblemId::NonTransitiveDice
                | ProblemId::PythagoreanTriples
                | ProblemId::SquarePacking
                | ProblemId::WordDesign
                | ProblemId::BeerJugs
        )
    }
}

impl std::fmt::Display for ProblemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Order {
    pub n: i64,
}

/// Order plus model variant; an empty variant is the main model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variant {
    pub n: i64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub variant: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringParams {
    pub t: i64,
    pub k: i64,
    pub g: i64,
    pub b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiceParams {
    pub n: i64,
    pub m: i64,
    pub d: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Jugs {
    #[serde(rename = "A")]
    pub a: i64,
    #[serde(rename = "B")]
    pub b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringData {
    pub n: i64,
    #[serde(rename = "nColors")]
    pub n_colors: i64,
    pub edges: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub grid: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SonetData {
    pub n: i64,
    pub m: i64,
    pub r: i64,
    pub connections: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KMedianData {
    pub distances: Vec<Vec<Value>>,
    pub k: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GmkpData {
    pub profits: Vec<Value>,
    pub wmatrix: Vec<Vec<Value>>,
    pub capacities: Vec<Value>,
    /// Defaults to `profits` for every dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmatrix: Option<Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TsptwData {
    pub distances: Vec<Vec<Value>>,
    pub windows: Vec<(Value, Value)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub duration: Value,
    pub successors: Vec<i64>,
    pub requirements: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RipData {
    pub horizon: Value,
    pub costs: Vec<Value>,
    pub jobs: Vec<Job>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchedulingData {
    pub limit: Value,
    pub durations: Vec<Value>,
    pub heights: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KidneyData {
    pub weights: Vec<Vec<Value>>,
    pub k: i64,
}

/// Parameters of one problem instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemData {
    AnotherMagicSquare(Order),
    AntimagicSquare(Order),
    BinaryPuzzle(Variant),
    CalvinPuzzle(Variant),
    Coloring(ColoringData),
    CoveringArray(CoveringParams),
    Dominoes(Grid),
    NonTransitiveDice(DiceParams),
    PythagoreanTriples(Order),
    Slant(Grid),
    SquarePacking(Order),
    WordDesign(Order),
    BeerJugs(Jugs),
    Sonet(SonetData),
    KMedian(KMedianData),
    GeneralizedMkp(GmkpData),
    Tsptw(TsptwData),
    Rip(RipData),
    LargeScaleScheduling(SchedulingData),
    KidneyExchange(KidneyData),
}

fn from_json<T: serde::de::DeserializeOwned>(id: ProblemId, v: &Json) -> Result<T, BuildError> {
    serde_json::from_value(v.clone()).map_err(|e| BuildError::data(id, e.to_string()))
}

fn to_json<T: Serialize>(t: &T) -> Json {
    serde_json::to_value(t).expect("parameter records serialize")
}

impl ProblemData {
    pub fn id(&self) -> ProblemId {
        match self {
            ProblemData::AnotherMagicSquare(_) => ProblemId::AnotherMagicSquare,
            ProblemData::AntimagicSquare(_) => ProblemId::AntimagicSquare,
            ProblemData::BinaryPuzzle(_) => ProblemId::BinaryPuzzle,
            ProblemData::CalvinPuzzle(_) => ProblemId::CalvinPuzzle,
            ProblemData::Coloring(_) => ProblemId::Coloring,
            ProblemData::CoveringArray(_) => ProblemId::CoveringArray,
            ProblemData::Dominoes(_) => ProblemId::Dominoes,
            ProblemData::NonTransitiveDice(_) => ProblemId::NonTransitiveDice,
            ProblemData::PythagoreanTriples(_) => ProblemId::PythagoreanTriples,
            ProblemData::Slant(_) => ProblemId::Slant,
            ProblemData::SquarePacking(_) => ProblemId::SquarePacking,
            ProblemData::WordDesign(_) => ProblemId::WordDesign,
            ProblemData::BeerJugs(_) => ProblemId::BeerJugs,
            ProblemData::Sonet(_) => ProblemId::Sonet,
            ProblemData::KMedian(_) => ProblemId::KMedian,
            ProblemData::GeneralizedMkp(_) => ProblemId::GeneralizedMkp,
            ProblemData::Tsptw(_) => ProblemId::Tsptw,
            ProblemData::Rip(_) => ProblemId::Rip,
            ProblemData::LargeScaleScheduling(_) => ProblemId::LargeScaleScheduling,
            ProblemData::KidneyExchange(_) => ProblemId::KidneyExchange,
        }
    }

    /// Parameters as a JSON object, in the shape [`ProblemData::from_json`] reads.
    pub fn to_json(&self) -> Json {
        match self {
            ProblemData::AnotherMagicSquare(d)
            | ProblemData::AntimagicSquare(d)
            | ProblemData::PythagoreanTriples(d)
            | ProblemData::SquarePacking(d)
            | ProblemData::WordDesign(d) => to_json(d),
            ProblemData::BinaryPuzzle(d) | ProblemData::CalvinPuzzle(d) => to_json(d),
            ProblemData::Coloring(d) => to_json(d),
            ProblemData::CoveringArray(d) => to_json(d),
            ProblemData::Dominoes(d) | ProblemData::Slant(d) => to_json(d),
            ProblemData::NonTransitiveDice(d) => to_json(d),
            ProblemData::BeerJugs(d) => to_json(d),
            ProblemData::Sonet(d) => to_json(d),
            ProblemData::KMedian(d) => to_json(d),
            ProblemData::GeneralizedMkp(d) => to_json(d),
            ProblemData::Tsptw(d) => to_json(d),
            ProblemData::Rip(d) => to_json(d),
            ProblemData::LargeScaleScheduling(d) => to_json(d),
            ProblemData::KidneyExchange(d) => to_json(d),
        }
    }

    pub fn from_json(id: ProblemId, v: &Json) -> Result<ProblemData, BuildError> {
        Ok(match id {
            ProblemId::AnotherMagicSquare => ProblemData::AnotherMagicSquare(from_json(id, v)?),
            ProblemId::AntimagicSquare => ProblemData::AntimagicSquare(from_json(id, v)?),
            ProblemId::BinaryPuzzle => ProblemData::BinaryPuzzle(from_json(id, v)?),
            ProblemId::CalvinPuzzle => ProblemData::CalvinPuzzle(from_json(id, v)?),
            ProblemId::Coloring => ProblemData::Coloring(from_json(id, v)?),
            ProblemId::CoveringArray => ProblemData::CoveringArray(from_json(id, v)?),
            ProblemId::Dominoes => ProblemData::Dominoes(from_json(id, v)?),
            ProblemId::NonTransitiveDice => ProblemData::NonTransitiveDice(from_json(id, v)?),
            ProblemId::PythagoreanTriples => ProblemData::PythagoreanTriples(from_json(id, v)?),
            ProblemId::Slant => ProblemData::Slant(from_json(id, v)?),
            ProblemId::SquarePacking => ProblemData::SquarePacking(from_json(id, v)?),
            ProblemId::WordDesign => ProblemData::WordDesign(from_json(id, v)?),
            ProblemId::BeerJugs => ProblemData::BeerJugs(from_json(id, v)?),
            ProblemId::Sonet => ProblemData::Sonet(from_json(id, v)?),
            ProblemId::KMedian => ProblemData::KMedian(from_json(id, v)?),
            ProblemId::GeneralizedMkp => ProblemData::GeneralizedMkp(from_json(id, v)?),
            ProblemId::Tsptw => ProblemData::Tsptw(from_json(id, v)?),
            ProblemId::Rip => ProblemData::Rip(from_json(id, v)?),
            ProblemId::LargeScaleScheduling => ProblemData::LargeScaleScheduling(from_json(id, v)?),
            ProblemId::KidneyExchange => ProblemData::KidneyExchange(from_json(id, v)?),
        })
    }

    /// Parses command-line style parameters: a JSON object, a Slant text
    /// grid, or integers separated by commas or spaces (optionally bracketed)
    /// with a trailing variant name for the two puzzles that have one.
    pub fn parse(id: ProblemId, text: &str) -> Result<ProblemData, BuildError> {
        let text = text.trim();
        if text.starts_with('{') {
            let v: Json = serde_json::from_str(text).map_err(|e| BuildError::data(id, e.to_string()))?;
            return ProblemData::from_json(id, &v);
        }
        if id == ProblemId::Slant {
            return Ok(ProblemData::Slant(parse_slant_text(text).map_err(|m| BuildError::data(id, m))?));
        }
        if !id.takes_integers() {
            return Err(BuildError::data(id, "expected a JSON object".into()));
        }
        let tokens: Vec<&str> = text
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let mut ints = Vec::new();
        let mut variant = String::new();
        for (k, t) in tokens.iter().enumerate() {
            match t.parse::<i64>() {
                Ok(v) => ints.push(v),
                Err(_) if k + 1 == tokens.len() && matches!(id, ProblemId::BinaryPuzzle | ProblemId::CalvinPuzzle) => {
                    variant = t.to_string()
                }
                Err(_) => return Err(BuildError::data(id, format!("`{t}` is not an integer"))),
            }
        }
        let arity = match id {
            ProblemId::CoveringArray => 4,
            ProblemId::NonTransitiveDice => 3,
            ProblemId::BeerJugs => 2,
            _ => 1,
        };
        if ints.len() != arity {
            return Err(BuildError::data(id, format!("expected {arity} integer(s), got {}", ints.len())));
        }
        let n = ints[0];
        Ok(match id {
            ProblemId::AnotherMagicSquare => ProblemData::AnotherMagicSquare(Order { n }),
            ProblemId::AntimagicSquare => ProblemData::AntimagicSquare(Order { n }),
            ProblemId::PythagoreanTriples => ProblemData::PythagoreanTriples(Order { n }),
            ProblemId::SquarePacking => ProblemData::SquarePacking(Order { n }),
            ProblemId::WordDesign => ProblemData::WordDesign(Order { n }),
            ProblemId::BinaryPuzzle => ProblemData::BinaryPuzzle(Variant { n, variant }),
            ProblemId::CalvinPuzzle => ProblemData::CalvinPuzzle(Variant { n, variant }),
            ProblemId::CoveringArray => {
                ProblemData::CoveringArray(CoveringParams { t: ints[0], k: ints[1], g: ints[2], b: ints[3] })
            }
            ProblemId::NonTransitiveDice => ProblemData::NonTransitiveDice(DiceParams { n, m: ints[1], d: ints[2] }),
            ProblemId::BeerJugs => ProblemData::BeerJugs(Jugs { a: n, b: ints[1] }),
            _ => unreachable!("non-integer problems handled above"),
        })
    }
}

/// Slant puzzle text: the number of cells per side, then one row of node
/// clues per line with `-1` for blanks.
pub fn parse_slant_text(text: &str) -> Result<Grid, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let size: usize = lines
        .next()
        .ok_or("empty input")?
        .parse()
        .map_err(|_| "first line must be the grid size".to_string())?;
    let grid: Vec<Vec<Value>> = lines
        .map(|l| l.split_whitespace().map(|t| t.parse::<Value>().map_err(|_| format!("bad clue `{t}`"))).collect())
        .collect::<Result<_, _>>()?;
    if grid.len() != size + 1 {
        return Err(format!("expected {} rows of nodes, got {}", size + 1, grid.len()));
    }
    Ok(Grid { grid })
}
