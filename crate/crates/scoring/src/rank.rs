use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ScoreError;

/// Per-solver facts the ranking needs beyond points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverFlags {
    #[serde(default)]
    pub off_competition: bool,
    /// Position in the corresponding main track, when the solver took part.
    #[serde(default)]
    pub main_rank: Option<u32>,
    #[serde(default)]
    pub team: String,
    /// Solvers sharing this id are variations of one solver by one team.
    #[serde(default)]
    pub variant_group: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Medal {
    Gold,
    Silver,
    Bronze,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ranked {
    pub position: usize,
    pub solver: String,
    pub points: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub medal: Option<Medal>,
}

pub fn is_mini_track(track: &str) -> bool {
    track.to_ascii_lowercase().starts_with("mini")
}

/// Orders the solvers of a track after dropping off-competition entrants,
/// main-track medallists in mini tracks, and all but the best of each
/// variant group. Equal points share a position.
pub fn rank(
    track: &str,
    totals: &BTreeMap<String, f64>,
    flags: &BTreeMap<String, SolverFlags>,
) -> Result<Vec<Ranked>, ScoreError> {
    let none = SolverFlags::default();
    let flag = |s: &str| flags.get(s).unwrap_or(&none);
    let mut alive: Vec<(&String, f64)> =
        totals.iter().filter(|(s, _)| !flag(s).off_competition).map(|(s, &p)| (s, p)).collect();

    if is_mini_track(track) {
        if !flags.values().any(|f| f.main_rank.is_some()) {
            return Err(ScoreError::MissingMainRanks(track.into()));
        }
        alive.retain(|(s, _)| !matches!(flag(s).main_rank, Some(1..=3)));
    }

    let mut groups: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for f in flags.values() {
        if let Some(g) = &f.variant_group {
            groups.entry(g.as_str()).or_default().insert(f.team.as_str());
        }
    }
    if let Some((g, teams)) = groups.iter().find(|(_, t)| t.len() > 1) {
        return Err(ScoreError::MixedTeams { group: g.to_string(), teams: teams.iter().map(|t| t.to_string()).collect() });
    }
    let mut best: BTreeMap<&str, (&String, f64)> = BTreeMap::new();
    for &(s, p) in &alive {
        if let Some(g) = &flag(s).variant_group {
            let e = best.entry(g.as_str()).or_insert((s, p));
            if p > e.1 {
                *e = (s, p);
            }
        }
    }
    alive.retain(|(s, _)| match &flag(s).variant_group {
        Some(g) => best[g.as_str()].0 == *s,
        None => true,
    });

    alive.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut out: Vec<Ranked> = Vec::with_capacity(alive.len());
    for (i, (s, p)) in alive.into_iter().enumerate() {
        let position = match out.last() {
            Some(prev) if prev.points == p => prev.position,
            _ => i + 1,
        };
        let medal = match position {
            1 => Some(Medal::Gold),
            2 => Some(Medal::Silver),
            3 => Some(Medal::Bronze),
            _ => None,
        };
        out.push(Ranked { position, solver: s.clone(), points: p, medal });
    }
    Ok(out)
}
