//! Named verification suites with deterministic reports.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Report;

pub mod bar;
pub mod geom;
pub mod operads;
pub mod pairs;
pub mod partitions;
pub mod sets;
pub mod trees;

pub use bar::bar_suite;
pub use geom::{geom_operad_axioms, geom_suite};
pub use operads::operads_suite;
pub use pairs::pairs_suite;
pub use partitions::partitions_suite;
pub use sets::sets_suite;
pub use trees::trees_suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Sets,
    Trees,
    Partitions,
    Operads,
    Pairs,
    Bar,
    Geom,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Sets, Suite::Trees, Suite::Partitions, Suite::Operads, Suite::Pairs, Suite::Bar, Suite::Geom];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sets => "sets",
            Suite::Trees => "trees",
            Suite::Partitions => "partitions",
            Suite::Operads => "operads",
            Suite::Pairs => "pairs",
            Suite::Bar => "bar",
            Suite::Geom => "geom",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Deliberately broken fixtures that the matching suite must catch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Free operad composition swaps two leaves of equal color.
    FreeSwap,
    /// `End(X)` composition corrupts one table entry.
    EndTable,
    /// `(Com, Com)` drops singleton factors.
    ComPairUnit,
    /// The semiring sum drops its last summand.
    SemiringTheta,
    /// Bar degeneracies reverse the leaves.
    BarDegeneracy,
    /// Extraction maps send ties to the next coordinate.
    PartitionMerge,
}

impl Fault {
    pub const ALL: [Fault; 6] = [
        Fault::FreeSwap,
        Fault::EndTable,
        Fault::ComPairUnit,
        Fault::SemiringTheta,
        Fault::BarDegeneracy,
        Fault::PartitionMerge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fault::FreeSwap => "free-swap",
            Fault::EndTable => "end-table",
            Fault::ComPairUnit => "com-pair-unit",
            Fault::SemiringTheta => "semiring-theta",
            Fault::BarDegeneracy => "bar-degeneracy",
            Fault::PartitionMerge => "partition-merge",
        }
    }

    /// The suite that detects the fault.
    pub fn suite(self) -> Suite {
        match self {
            Fault::FreeSwap | Fault::EndTable => Suite::Operads,
            Fault::ComPairUnit | Fault::SemiringTheta => Suite::Pairs,
            Fault::BarDegeneracy => Suite::Bar,
            Fault::PartitionMerge => Suite::Partitions,
        }
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fault::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Parse(format!("unknown fault {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Relative tolerance for sampled numeric comparisons.
    pub tolerance: f64,
    /// Largest set size in exhaustive enumerations.
    pub bound: usize,
    pub fault: Option<Fault>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 0, tolerance: 1e-9, bound: 4, fault: None }
    }
}

impl RunConfig {
    pub const MAX_BOUND: usize = 5;

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Parse(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.bound == 0 || self.bound > Self::MAX_BOUND {
            return Err(Error::Parse(format!("bound must lie in 1..={}, got {}", Self::MAX_BOUND, self.bound)));
        }
        Ok(())
    }

    pub(crate) fn has(&self, fault: Fault) -> bool {
        self.fault == Some(fault)
    }
}

fn run_one(suite: Suite, cfg: &RunConfig) -> Report {
    match suite {
        Suite::Sets => sets_suite(cfg),
        Suite::Trees => trees_suite(cfg),
        Suite::Partitions => partitions_suite(cfg),
        Suite::Operads => operads_suite(cfg),
        Suite::Pairs => pairs_suite(cfg),
        Suite::Bar => bar_suite(cfg),
        Suite::Geom => geom_suite(cfg),
        Suite::All => unreachable!("expanded by run"),
    }
}

/// Run a suite; `all` runs every suite in parallel and concatenates the
/// reports in a fixed order.
pub fn run(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    if suite != Suite::All {
        return Ok(run_one(suite, cfg).sorted());
    }
    let parts: Vec<Report> = Suite::EACH.par_iter().map(|&s| run_one(s, cfg).sorted()).collect();
    let mut report = Report::new("all");
    for (s, r) in Suite::EACH.iter().zip(parts) {
        report.extend(s.name(), r);
    }
    Ok(report)
}
