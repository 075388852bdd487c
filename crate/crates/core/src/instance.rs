//! Text instance format, solver dispatch and result reporting.
//!
//! ```text
//! c name: tiny
//! p min 2 1
//! n 1 2
//! n 2 -2
//! a 1 2 3 4
//! ```
//!
//! `p min <n> <m>` comes first and exactly once. `n <vertex> <balance>` sets
//! a balance (vertices are 1-based, omitted vertices get 0). `a <src> <dst>
//! <cap|inf> <cost>` adds an edge and must appear exactly `m` times. Lines
//! starting with `c` or `#` are comments. Numbers are integers, `p/q`
//! fractions or decimals.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::error::FlowError;
use crate::flowtheory::verify_optimal;
use crate::netcore::{Balances, Flow, Network};
use crate::num::{parse_rational, ExtRational, Rational};
use crate::oracle::{brute_force_min_cost_flow, OracleResult};
use crate::orlins::{solve_orlins, OrlinsConfig};
use crate::reduce::{has_neg_infty_cycle, reduce_to_uncapacitated, restore_flow};
use crate::scaling::solve_scaling;
use crate::solve::{SolveStats, SolveStatus};
use crate::ssp::solve_ssp;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub net: Network,
    pub balances: Balances,
    pub name: Option<String>,
    pub comments: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut name = None;
    let mut comments = Vec::new();
    let mut balances: Vec<Option<Rational>> = Vec::new();
    let mut arcs = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let comment = if let Some(rest) = trimmed.strip_prefix('#') {
            Some(rest)
        } else if trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t") {
            Some(&trimmed[1..])
        } else {
            None
        };
        if let Some(body) = comment {
            let body = body.trim();
            match body.strip_prefix("name:") {
                Some(n) if name.is_none() => name = Some(n.trim().to_string()),
                _ => comments.push(body.to_string()),
            }
            continue;
        }

        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(err(line, "duplicate problem line"));
                }
                if fields.len() != 4 || fields[1] != "min" {
                    return Err(err(line, "expected `p min <vertices> <arcs>`"));
                }
                let n: usize = fields[2]
                    .parse()
                    .map_err(|_| err(line, format!("bad vertex count `{}`", fields[2])))?;
                let m: usize = fields[3]
                    .parse()
                    .map_err(|_| err(line, format!("bad arc count `{}`", fields[3])))?;
                if n == 0 {
                    return Err(err(line, "an instance needs at least one vertex"));
                }
                header = Some((n, m));
                balances = vec![None; n];
            }
            "n" => {
                let (n, _) = header.ok_or_else(|| err(line, "`n` line before the problem line"))?;
                if fields.len() != 3 {
                    return Err(err(line, "expected `n <vertex> <balance>`"));
                }
                let v = vertex(fields[1], n, line)?;
                let value = parse_rational(fields[2]).map_err(|e| err(line, e.to_string()))?;
                if balances[v].is_some() {
                    return Err(err(line, format!("vertex {} already has a balance", v + 1)));
                }
                balances[v] = Some(value);
            }
            "a" => {
                let (n, m) = header.ok_or_else(|| err(line, "`a` line before the problem line"))?;
                if fields.len() != 5 {
                    return Err(err(line, "expected `a <src> <dst> <cap|inf> <cost>`"));
                }
                if arcs.len() == m {
                    return Err(err(line, format!("more than the declared {m} arcs")));
                }
                let src = vertex(fields[1], n, line)?;
                let dst = vertex(fields[2], n, line)?;
                let cap = ExtRational::from_str(fields[3]).map_err(|e| err(line, e.to_string()))?;
                if matches!(&cap, ExtRational::Finite(c) if c.is_negative()) {
                    return Err(err(line, format!("negative capacity {cap}")));
                }
                let cost = parse_rational(fields[4]).map_err(|e| err(line, e.to_string()))?;
                arcs.push((src, dst, cap, cost));
            }
            other => return Err(err(line, format!("unknown line tag `{other}`"))),
        }
    }

    let (n, m) = header.ok_or_else(|| err(last_line.max(1), "missing problem line"))?;
    if arcs.len() != m {
        return Err(err(
            last_line,
            format!("declared {m} arcs but found {}", arcs.len()),
        ));
    }
    let net = Network::new(n, arcs).map_err(|e| err(last_line, e.to_string()))?;
    Ok(InstanceFile {
        net,
        balances: Balances(balances.into_iter().map(Option::unwrap_or_default).collect()),
        name,
        comments,
    })
}

fn vertex(text: &str, n: usize, line: usize) -> Result<usize, ParseError> {
    match text.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
        _ => Err(err(line, format!("vertex `{text}` is not in 1..{n}"))),
    }
}

pub fn render_instance(inst: &InstanceFile) -> String {
    let mut out = String::new();
    if let Some(name) = &inst.name {
        let _ = writeln!(out, "c name: {name}");
    }
    for c in &inst.comments {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            let _ = writeln!(out, "c {c}");
        }
    }
    let _ = writeln!(out, "p min {} {}", inst.net.vertex_count(), inst.net.edge_count());
    for v in inst.net.vertices() {
        let b = &inst.balances[v];
        if !num_traits::Zero::is_zero(b) {
            let _ = writeln!(out, "n {} {b}", v + 1);
        }
    }
    for e in inst.net.edges() {
        let _ = writeln!(
            out,
            "a {} {} {} {}",
            e.src + 1,
            e.dst + 1,
            inst.net.capacity(e.id),
            inst.net.cost(e.id)
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Solver {
    Ssp,
    Scaling,
    #[default]
    Orlins,
}

impl FromStr for Solver {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ssp" => Ok(Solver::Ssp),
            "scaling" => Ok(Solver::Scaling),
            "orlins" => Ok(Solver::Orlins),
            other => Err(FlowError::InvalidArgument(format!("unknown solver `{other}`"))),
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Ssp => "ssp",
            Solver::Scaling => "scaling",
            Solver::Orlins => "orlins",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub solver: Solver,
    /// Re-certify successful results with the augmenting-cycle test.
    pub check: bool,
    /// Compare against the brute-force oracle.
    pub oracle: bool,
    pub epsilon: Option<Rational>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            solver: Solver::Orlins,
            check: true,
            oracle: false,
            epsilon: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunStatus {
    Success,
    Infeasible,
    /// Costs are unbounded below along a cycle of infinite capacity.
    Unbounded,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Success => "success",
            RunStatus::Infeasible => "infeasible",
            RunStatus::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub status: RunStatus,
    pub cost: Option<Rational>,
    pub flow: Option<Flow>,
    pub stats: SolveStats,
    pub certified: bool,
    pub oracle: Option<OracleResult>,
}

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const INFEASIBLE: i32 = 2;
    pub const UNBOUNDED: i32 = 3;
    pub const PARSE: i32 = 4;
    pub const PRECONDITION: i32 = 5;
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            RunStatus::Success => exit::SUCCESS,
            RunStatus::Infeasible => exit::INFEASIBLE,
            RunStatus::Unbounded => exit::UNBOUNDED,
        }
    }

    /// `status`, `cost` and 1-based `flow` lines, then `stat` lines if asked.
    pub fn render(&self, with_stats: bool) -> String {
        let mut out = format!("status {}\n", self.status);
        if let Some(cost) = &self.cost {
            let _ = writeln!(out, "cost {cost}");
        }
        if let Some(flow) = &self.flow {
            for (e, x) in flow.values().iter().enumerate() {
                let _ = writeln!(out, "flow {} {x}", e + 1);
            }
        }
        if with_stats {
            for (k, v) in self.stats.entries() {
                let _ = writeln!(out, "stat {k} {v}");
            }
        }
        out
    }
}

pub fn exit_code_for_error(e: &FlowError) -> i32 {
    match e {
        FlowError::NonzeroBalanceSum(_)
        | FlowError::NonIntegral(_)
        | FlowError::NegativeCycle
        | FlowError::Precondition(_)
        | FlowError::Capacitated(_)
        | FlowError::InvalidArgument(_)
        | FlowError::SearchSpaceTooLarge { .. } => exit::PRECONDITION,
        FlowError::NegativeInfiniteCycle => exit::UNBOUNDED,
        _ => exit::INTERNAL,
    }
}

/// Solves an instance with the chosen solver. Instances with a negative
/// cycle of infinite-capacity edges are reported unbounded before any
/// solver runs; Orlin's algorithm runs on the uncapacitated reduction when
/// some capacity is finite.
pub fn run(inst: &InstanceFile, opts: &RunOptions) -> Result<RunReport, FlowError> {
    let (net, b) = (&inst.net, &inst.balances);
    net.check_zero_sum(b)?;
    let mut stats = SolveStats::default();
    stats.set("solver", opts.solver);
    if has_neg_infty_cycle(net) {
        return Ok(RunReport {
            status: RunStatus::Unbounded,
            cost: None,
            flow: None,
            stats,
            certified: false,
            oracle: None,
        });
    }

    let result = match opts.solver {
        Solver::Ssp => solve_ssp(net, b)?,
        Solver::Scaling => solve_scaling(net, b)?,
        Solver::Orlins => {
            let cfg = OrlinsConfig {
                epsilon: opts.epsilon.clone(),
            };
            if net.is_uncapacitated() {
                solve_orlins(net, b, &cfg)?
            } else {
                let reduced = reduce_to_uncapacitated(net, b)?;
                stats.set("reduced_vertices", reduced.net.vertex_count());
                stats.set("reduced_edges", reduced.net.edge_count());
                let mut r = solve_orlins(&reduced.net, &reduced.balances, &cfg)?;
                if let Some(f) = &r.flow {
                    let restored = restore_flow(&reduced, f)?;
                    r.cost = Some(net.flow_cost(&restored));
                    r.flow = Some(restored);
                }
                r
            }
        }
    };
    stats.extend(&result.stats);
    if let Some(w) = &result.witness {
        let ids: Vec<String> = w.iter().map(|v| (v + 1).to_string()).collect();
        stats.set("witness", ids.join(","));
    }

    let status = match result.status {
        SolveStatus::Success => RunStatus::Success,
        SolveStatus::Infeasible => RunStatus::Infeasible,
    };
    let mut certified = false;
    if let (true, Some(f)) = (opts.check, &result.flow) {
        if !verify_optimal(net, f, b) {
            return Err(FlowError::Internal(format!(
                "{} returned a flow that fails the optimality check",
                opts.solver
            )));
        }
        certified = true;
        stats.set("certified", "yes");
    }

    let oracle = if opts.oracle {
        let bound = if net.capacities().iter().any(|c| !c.is_finite()) {
            let supply: Rational = b.values().iter().filter(|x| x.is_positive()).sum();
            Some(supply.ceil().to_integer().to_u64().unwrap_or(u64::MAX))
        } else {
            None
        };
        let o = brute_force_min_cost_flow(net, b, bound)?;
        if o.cost() != result.cost.as_ref() {
            return Err(FlowError::Internal(format!(
                "oracle disagrees: solver {:?}, oracle {:?}",
                result.cost.as_ref().map(ToString::to_string),
                o.cost().map(ToString::to_string)
            )));
        }
        stats.set(
            "oracle_cost",
            o.cost().map_or("infeasible".to_string(), ToString::to_string),
        );
        Some(o)
    } else {
        None
    };

    Ok(RunReport {
        status,
        cost: result.cost,
        flow: result.flow,
        stats,
        certified,
        oracle,
    })
}
