//! Result types shared by the solvers.

use std::fmt;

use crate::netcore::{Flow, VertexId};
use crate::num::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Success,
    Infeasible,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Success => "success",
            SolveStatus::Infeasible => "infeasible",
        })
    }
}

/// Ordered key/value counters reported by a solver.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    entries: Vec<(String, String)>,
}

impl SolveStats {
    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn extend(&mut self, other: &SolveStats) {
        for (k, v) in &other.entries {
            self.set(k, v);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Present on success.
    pub flow: Option<Flow>,
    /// Present on success.
    pub cost: Option<Rational>,
    /// Saturated residual cut around an unsatisfiable supply vertex, when the
    /// solver can name one.
    pub witness: Option<Vec<VertexId>>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn success(flow: Flow, cost: Rational, stats: SolveStats) -> Self {
        SolveResult {
            status: SolveStatus::Success,
            flow: Some(flow),
            cost: Some(cost),
            witness: None,
            stats,
        }
    }

    pub fn infeasible(witness: Option<Vec<VertexId>>, stats: SolveStats) -> Self {
        SolveResult {
            status: SolveStatus::Infeasible,
            flow: None,
            cost: None,
            witness,
            stats,
        }
    }

    pub fn is_success(&self) -> bool {
        self.status == SolveStatus::Success
    }
}
