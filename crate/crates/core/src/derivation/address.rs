use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One edge from a conclusion to one of its premises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Premise,
    Minor,
    Major,
}

/// Path of child selectors from the conclusion to a formula occurrence.
/// The empty path addresses the conclusion itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccAddress(pub Vec<Step>);

impl OccAddress {
    pub fn root() -> OccAddress {
        OccAddress(Vec::new())
    }

    pub fn child(&self, step: Step) -> OccAddress {
        let mut v = self.0.clone();
        v.push(step);
        OccAddress(v)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    /// Number of inference edges between the conclusion and the occurrence.
    pub fn level(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for OccAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(match s {
                Step::Premise => "premise",
                Step::Minor => "minor",
                Step::Major => "major",
            })?;
        }
        Ok(())
    }
}

impl FromStr for OccAddress {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "root" {
            return Ok(OccAddress::root());
        }
        s.split('.')
            .map(|part| match part {
                "premise" => Ok(Step::Premise),
                "minor" => Ok(Step::Minor),
                "major" => Ok(Step::Major),
                other => Err(format!("unknown address step `{other}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(OccAddress)
    }
}
