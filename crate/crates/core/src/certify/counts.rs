//! Outcome-by-stencil count tables and their CSV form.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Success counts `X[i][j]` for outcome `i` on stencil `j`, with `N[j]`
/// trials per stencil.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    outcomes: Vec<String>,
    stencils: Vec<String>,
    successes: Vec<Vec<u64>>,
    trials: Vec<u64>,
    exclusive: bool,
}

#[derive(Debug, Deserialize, Serialize)]
struct Row {
    outcome: String,
    stencil: String,
    successes: u64,
    trials: u64,
}

impl CountTable {
    /// `exclusive` requires the outcomes of each stencil to be disjoint
    /// events, so their counts cannot exceed the trials.
    pub fn new(
        outcomes: Vec<String>,
        stencils: Vec<String>,
        successes: Vec<Vec<u64>>,
        trials: Vec<u64>,
        exclusive: bool,
    ) -> Result<Self> {
        if outcomes.is_empty() || stencils.is_empty() {
            return Err(Error::InvalidCounts("table needs at least one outcome and one stencil".into()));
        }
        if successes.len() != outcomes.len() || successes.iter().any(|r| r.len() != stencils.len()) {
            return Err(Error::InvalidCounts("success matrix shape does not match labels".into()));
        }
        if trials.len() != stencils.len() {
            return Err(Error::InvalidCounts("one trial count per stencil required".into()));
        }
        for (j, &n) in trials.iter().enumerate() {
            if n == 0 {
                return Err(Error::InvalidCounts(format!("stencil {} has zero trials", stencils[j])));
            }
            let mut column = 0u64;
            for (i, row) in successes.iter().enumerate() {
                if row[j] > n {
                    return Err(Error::InvalidCounts(format!(
                        "successes {} exceed trials {n} for outcome {}, stencil {}",
                        row[j], outcomes[i], stencils[j]
                    )));
                }
                column += row[j];
            }
            if exclusive && column > n {
                return Err(Error::InvalidCounts(format!(
                    "exclusive outcomes on stencil {} sum to {column} > {n}",
                    stencils[j]
                )));
            }
        }
        Ok(Self {
            outcomes,
            stencils,
            successes,
            trials,
            exclusive,
        })
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn stencils(&self) -> &[String] {
        &self.stencils
    }

    /// Number of outcomes m.
    pub fn m(&self) -> usize {
        self.outcomes.len()
    }

    pub fn successes(&self, outcome: usize, stencil: usize) -> u64 {
        self.successes[outcome][stencil]
    }

    pub fn trials(&self, stencil: usize) -> u64 {
        self.trials[stencil]
    }

    pub fn exclusive(&self) -> bool {
        self.exclusive
    }

    /// Parses `outcome,stencil,successes,trials` rows. Labels are ordered by
    /// first appearance; every (outcome, stencil) cell must occur exactly once
    /// and all rows of a stencil must agree on the trial count.
    pub fn from_csv<R: Read>(reader: R, exclusive: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::InvalidCounts(e.to_string()))?.clone();
        let expected = ["outcome", "stencil", "successes", "trials"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::InvalidCounts(format!(
                "expected header `{}`, got `{}`",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut outcomes: Vec<String> = Vec::new();
        let mut stencils: Vec<String> = Vec::new();
        let mut cells: HashMap<(usize, usize), u64> = HashMap::new();
        let mut trials: HashMap<usize, u64> = HashMap::new();
        for (line, rec) in rdr.deserialize::<Row>().enumerate() {
            let row = rec.map_err(|e| Error::InvalidCounts(format!("row {}: {e}", line + 1)))?;
            let i = index_of(&mut outcomes, &row.outcome);
            let j = index_of(&mut stencils, &row.stencil);
            if cells.insert((i, j), row.successes).is_some() {
                return Err(Error::InvalidCounts(format!(
                    "duplicate row for outcome {}, stencil {}",
                    row.outcome, row.stencil
                )));
            }
            match trials.get(&j) {
                Some(&n) if n != row.trials => {
                    return Err(Error::InvalidCounts(format!(
                        "stencil {} has inconsistent trial counts {n} and {}",
                        row.stencil, row.trials
                    )))
                }
                _ => {
                    trials.insert(j, row.trials);
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::InvalidCounts("no data rows".into()));
        }
        let mut successes = vec![vec![0u64; stencils.len()]; outcomes.len()];
        for (i, row) in successes.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = *cells.get(&(i, j)).ok_or_else(|| {
                    Error::InvalidCounts(format!("missing row for outcome {}, stencil {}", outcomes[i], stencils[j]))
                })?;
            }
        }
        let trials = (0..stencils.len()).map(|j| trials[&j]).collect();
        Self::new(outcomes, stencils, successes, trials, exclusive)
    }

    /// Writes the table in the format read by [`CountTable::from_csv`],
    /// outcome-major.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
        for (i, o) in self.outcomes.iter().enumerate() {
            for (j, s) in self.stencils.iter().enumerate() {
                w.serialize(Row {
                    outcome: o.clone(),
                    stencil: s.clone(),
                    successes: self.successes[i][j],
                    trials: self.trials[j],
                })
                .map_err(|e| Error::InvalidCounts(e.to_string()))?;
            }
        }
        w.flush().map_err(|e| Error::InvalidCounts(e.to_string()))
    }
}

fn index_of(labels: &mut Vec<String>, label: &str) -> usize {
    match labels.iter().position(|l| l == label) {
        Some(k) => k,
        None => {
            labels.push(label.to_string());
            labels.len() - 1
        }
    }
}
