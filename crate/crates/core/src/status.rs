use std::fmt;
use std::str::FromStr;

/// Outcome reported for one run.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Sat,
    Unsat,
    /// Optimum found and proved.
    Opt,
    /// A solution without an optimality proof.
    Best,
    Unknown,
}

impl Status {
    pub const ALL: [Status; 5] = [Status::Sat, Status::Unsat, Status::Opt, Status::Best, Status::Unknown];

    pub fn name(self) -> &'static str {
        match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::Opt => "OPT",
            Status::Best => "BEST",
            Status::Unknown => "UNKNOWN",
        }
    }

    /// Whether the run carries a solution.
    pub fn has_solution(self) -> bool {
        matches!(self, Status::Sat | Status::Opt | Status::Best)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Status, String> {
        Status::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown status `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for st in Status::ALL {
            assert_eq!(st.name().parse::<Status>().unwrap(), st);
        }
        assert!("MAYBE".parse::<Status>().is_err());
    }
}
