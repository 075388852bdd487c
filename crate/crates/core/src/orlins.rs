//! Orlin's strongly polynomial algorithm for uncapacitated networks.
//!
//! The state carries a growing spanning forest of edges with large flow.
//! Each forest component has one representative that holds the whole
//! component's remaining balance; edges inside a component are deactivated
//! and simulated by forest paths. Flow moves in units of a threshold `γ`
//! that shrinks every outer iteration.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{FlowError, Result};
use crate::flowtheory::verify_optimal;
use crate::netcore::{reverse_path, Balances, EdgeId, Flow, Network, ResidualEdge, VertexId};
use crate::num::{ceil_log2, int, Rational};
use crate::pathsel::{
    bellman_ford, dfs_forest_path, extract_path, project_residual, vertex_path_to_residual, Forest,
};
use crate::solve::{SolveResult, SolveStats};
use crate::ssp::validate;

const SEND_FLOW_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrlinsConfig {
    /// Slack in `(0, 1/n]`; `None` means `1/n`.
    pub epsilon: Option<Rational>,
}

impl OrlinsConfig {
    pub fn with_epsilon(epsilon: Rational) -> Self {
        OrlinsConfig {
            epsilon: Some(epsilon),
        }
    }

    pub fn resolve_epsilon(&self, n: usize) -> Result<Rational> {
        let upper = Rational::new(BigInt::one(), BigInt::from(n));
        match &self.epsilon {
            None => Ok(upper),
            Some(e) if e.is_positive() && *e <= upper => Ok(e.clone()),
            Some(e) => Err(FlowError::InvalidArgument(format!(
                "epsilon {e} outside (0, 1/{n}]"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flag {
    Success,
    Infeasible,
    NotYetTerm,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Counters {
    pub outer_iters: u64,
    pub send_flow_augmentations: u64,
    pub forest_merges: u64,
    /// Per threshold update, the forest components of all important vertices.
    pub comps_log: Vec<Vec<BTreeSet<VertexId>>>,
}

impl Counters {
    /// Distinct components over the whole log.
    pub fn important_family(&self) -> BTreeSet<BTreeSet<VertexId>> {
        self.comps_log.iter().flatten().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrlinsState {
    pub flow: Flow,
    /// Remaining balances (b′).
    pub remaining: Balances,
    pub forest: Forest,
    pub rep: Vec<VertexId>,
    pub comp_size: Vec<usize>,
    pub actives: BTreeSet<EdgeId>,
    pub gamma: Rational,
    pub epsilon: Rational,
    pub flag: Flag,
    pub counters: Counters,
}

impl OrlinsState {
    /// Zero flow, singleton components, every non-loop edge active and
    /// `γ = max |b(v)|`.
    pub fn initial(net: &Network, b: &Balances, epsilon: Rational) -> Self {
        let n = net.vertex_count();
        let gamma = b.values().iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero);
        OrlinsState {
            flow: Flow::zero(net.edge_count()),
            remaining: b.clone(),
            forest: Forest::new(n),
            rep: (0..n).collect(),
            comp_size: vec![1; n],
            actives: net.edges().iter().filter(|e| e.src != e.dst).map(|e| e.id).collect(),
            gamma,
            epsilon,
            flag: Flag::NotYetTerm,
            counters: Counters::default(),
        }
    }

    fn not_blocked(&self, e: EdgeId) -> bool {
        self.actives.contains(&e) || self.forest.contains_edge(e)
    }

    /// `|b′(v)| > (1 − ε)·γ`.
    pub fn is_important(&self, v: VertexId) -> bool {
        self.remaining[v].abs() > (Rational::one() - &self.epsilon) * &self.gamma
    }

    pub fn component(&self, v: VertexId) -> BTreeSet<VertexId> {
        let r = self.rep[v];
        (0..self.rep.len()).filter(|&x| self.rep[x] == r).collect()
    }

    fn record_components(&mut self) {
        let comps = (0..self.rep.len())
            .filter(|&v| self.is_important(v))
            .map(|v| self.component(v))
            .collect();
        self.counters.comps_log.push(comps);
    }

    /// Smallest flow on a forest edge, if the forest has edges.
    pub fn min_forest_flow(&self) -> Option<Rational> {
        self.forest.edges().map(|e| self.flow[e].clone()).min()
    }

    /// Checks the state invariants that hold between subprocedures:
    /// representatives match the forest, only representatives carry
    /// balance, inactive edges lie inside a component, active flows are
    /// multiples of `γ` and the flow is optimal for the satisfied balances.
    pub fn check_invariants(&self, net: &Network, b: &Balances) -> std::result::Result<(), String> {
        if self.gamma.is_zero() && !b.all_zero() {
            return Err("threshold is zero".into());
        }
        for v in net.vertices() {
            let r = self.rep[v];
            if self.rep[r] != r {
                return Err(format!("representative {r} of {v} is not its own representative"));
            }
            if dfs_forest_path(&self.forest, v, r).is_none() {
                return Err(format!("{v} is not connected to its representative {r}"));
            }
            if self.comp_size[v] != self.component(v).len() {
                return Err(format!("component size of {v} is stale"));
            }
            if !self.remaining[v].is_zero() && r != v {
                return Err(format!("non-representative {v} carries balance"));
            }
        }
        for edge in net.edges() {
            let e = edge.id;
            if self.forest.contains_edge(e) {
                continue;
            }
            if self.actives.contains(&e) {
                if !self.gamma.is_zero() && !(&self.flow[e] / &self.gamma).is_integer() {
                    return Err(format!("active edge {e} flow is not a multiple of the threshold"));
                }
            } else if self.rep[edge.src] != self.rep[edge.dst] {
                return Err(format!("inactive edge {e} joins two components"));
            }
        }
        if !verify_optimal(net, &self.flow, &b.minus(&self.remaining)) {
            return Err("flow is not optimal for the satisfied balances".into());
        }
        Ok(())
    }
}

/// Hooks into a run; every variant borrows the state at that moment.
#[derive(Debug)]
pub enum OrlinsEvent<'a> {
    /// After a threshold update (and once for the initial threshold).
    Gamma(&'a OrlinsState),
    /// One forest merge, with the forest path used to move balance.
    Merge {
        before: &'a OrlinsState,
        after: &'a OrlinsState,
        path: &'a [ResidualEdge],
    },
    /// Entering send-flow; `outer` is false for the initial call.
    SendFlowEntry { state: &'a OrlinsState, outer: bool },
    Augment {
        before: &'a OrlinsState,
        after: &'a OrlinsState,
        path: &'a [ResidualEdge],
    },
    SendFlowExit(&'a OrlinsState),
}

pub type Observer<'o> = dyn FnMut(&OrlinsEvent<'_>) + 'o;

/// `Σ_v ⌈|b′(v)|/γ − (1 − ε)⌉`.
pub fn phi(remaining: &Balances, gamma: &Rational, epsilon: &Rational) -> Result<BigInt> {
    if !gamma.is_positive() {
        return Err(FlowError::InvalidArgument(format!("threshold {gamma} is not positive")));
    }
    let slack = Rational::one() - epsilon;
    Ok(remaining
        .values()
        .iter()
        .map(|x| (x.abs() / gamma - &slack).ceil().to_integer())
        .sum())
}

/// `min{γ/2, max |b′|}` when every active edge is empty, `γ/2` otherwise.
pub fn new_gamma(state: &OrlinsState) -> Rational {
    let half = &state.gamma / int(2);
    if state.actives.iter().all(|&e| state.flow[e].is_zero()) {
        let max = state
            .remaining
            .values()
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        half.min(max)
    } else {
        half
    }
}

/// `(k, ℓ, n·(k + ℓ + 2))` with `k = ⌈log₂ n⌉ + 3` and
/// `ℓ = ⌈log₂((4mn + 1 − ε)/ε)⌉ + 1`.
pub fn iteration_bounds(n: usize, m: usize, epsilon: &Rational) -> Result<(i64, i64, i64)> {
    if n == 0 {
        return Err(FlowError::InvalidArgument("no vertices".into()));
    }
    let upper = Rational::new(BigInt::one(), BigInt::from(n));
    if !epsilon.is_positive() || *epsilon > upper {
        return Err(FlowError::InvalidArgument(format!("epsilon {epsilon} outside (0, 1/{n}]")));
    }
    let k = ceil_log2(&int(n as i64)) + 3;
    let inner = (int(4 * (m as i64) * (n as i64)) + Rational::one() - epsilon) / epsilon;
    let l = ceil_log2(&inner) + 1;
    Ok((k, l, (n as i64) * (k + l + 2)))
}

fn forest_residual_path(net: &Network, forest: &Forest, vpath: &[VertexId]) -> Result<Vec<ResidualEdge>> {
    vpath
        .windows(2)
        .map(|p| {
            let e = forest
                .edge_between(p[0], p[1])
                .ok_or_else(|| FlowError::Internal(format!("no forest edge between {} and {}", p[0], p[1])))?;
            let edge = net.edge(e)?;
            Ok(if edge.src == p[0] && edge.dst == p[1] {
                ResidualEdge::Forward(e)
            } else {
                ResidualEdge::Backward(e)
            })
        })
        .collect()
}

/// Adds every active edge with `f(e) > 8nγ` to the forest, merging the
/// smaller component into the larger and moving its representative's
/// balance along the forest path.
pub fn maintain_forest(net: &Network, state: &OrlinsState) -> Result<OrlinsState> {
    maintain_forest_observed(net, state, &mut |_| {})
}

pub fn maintain_forest_observed(
    net: &Network,
    state: &OrlinsState,
    observe: &mut Observer<'_>,
) -> Result<OrlinsState> {
    if let Some(e) = (0..net.edge_count()).find(|&e| net.capacity(e).is_finite()) {
        return Err(FlowError::Capacitated(e));
    }
    let mut state = state.clone();
    let threshold = int(8 * net.vertex_count() as i64) * &state.gamma;
    loop {
        let Some(e) = state.actives.iter().copied().find(|&e| state.flow[e] > threshold) else {
            return Ok(state);
        };
        let before = state.clone();
        let edge = net.edge(e)?;
        let (mut x, mut y) = (edge.src, edge.dst);
        if state.comp_size[y] < state.comp_size[x] {
            std::mem::swap(&mut x, &mut y);
        }
        let (xr, yr) = (state.rep[x], state.rep[y]);
        state.forest.add_edge(x, y, e)?;
        state.actives.remove(&e);
        let vpath = dfs_forest_path(&state.forest, xr, yr)
            .ok_or_else(|| FlowError::Internal("merged components are not connected".into()))?;
        let q = forest_residual_path(net, &state.forest, &vpath)?;
        let moved = state.remaining[xr].clone();
        if moved.is_positive() {
            state.flow = net.augment(&state.flow, &moved, &q)?;
        } else if moved.is_negative() {
            state.flow = net.augment(&state.flow, &-moved.clone(), &reverse_path(&q))?;
        }
        state.remaining[yr] += &moved;
        state.remaining[xr] = Rational::zero();
        let size = state.comp_size[xr] + state.comp_size[yr];
        for v in 0..state.rep.len() {
            if state.rep[v] == xr || state.rep[v] == yr {
                state.rep[v] = yr;
                state.comp_size[v] = size;
            }
        }
        let rep = &state.rep;
        state
            .actives
            .retain(|&a| rep[net.edges()[a].src] != rep[net.edges()[a].dst]);
        state.counters.forest_merges += 1;
        observe(&OrlinsEvent::Merge {
            before: &before,
            after: &state,
            path: &q,
        });
    }
}

/// Moves `γ` units at a time between vertices with large remaining
/// balances until none is left above `(1 − ε)·γ`.
pub fn send_flow(net: &Network, state: &OrlinsState) -> Result<OrlinsState> {
    send_flow_observed(net, state, &mut |_| {})
}

pub fn send_flow_observed(
    net: &Network,
    state: &OrlinsState,
    observe: &mut Observer<'_>,
) -> Result<OrlinsState> {
    let mut state = state.clone();
    let slack = Rational::one() - &state.epsilon;
    let high = &slack * &state.gamma;
    let low = &state.epsilon * &state.gamma;
    for _ in 0..SEND_FLOW_CAP {
        if state.remaining.all_zero() {
            state.flag = Flag::Success;
            break;
        }
        let source = net.vertices().find(|&v| state.remaining[v] > high);
        let (projection, start) = match source {
            Some(s) => (project_residual(net, &state.flow, |e| state.not_blocked(e), false), s),
            None => match net.vertices().find(|&v| state.remaining[v] < -high.clone()) {
                Some(t) => (project_residual(net, &state.flow, |e| state.not_blocked(e), true), t),
                None => {
                    state.flag = Flag::NotYetTerm;
                    break;
                }
            },
        };
        let table = bellman_ford(projection.weights().clone(), start)?;
        let forward = source.is_some();
        let other = net.vertices().find(|&v| {
            table.dist(v).is_finite()
                && if forward {
                    state.remaining[v] < -low.clone()
                } else {
                    state.remaining[v] > low
                }
        });
        let Some(other) = other else {
            state.flag = Flag::Infeasible;
            break;
        };
        let path = vertex_path_to_residual(&projection, &extract_path(&table, other)?)?;
        let (s, t) = if forward { (start, other) } else { (other, start) };
        let before = state.clone();
        state.flow = net.augment(&state.flow, &state.gamma, &path)?;
        state.remaining[s] -= &state.gamma;
        state.remaining[t] += &state.gamma;
        state.counters.send_flow_augmentations += 1;
        observe(&OrlinsEvent::Augment {
            before: &before,
            after: &state,
            path: &path,
        });
    }
    if state.flag == Flag::NotYetTerm && net.vertices().any(|v| state.remaining[v].abs() > high) {
        return Err(FlowError::Internal("send-flow exceeded its iteration cap".into()));
    }
    observe(&OrlinsEvent::SendFlowExit(&state));
    Ok(state)
}

pub fn solve_orlins(net: &Network, b: &Balances, cfg: &OrlinsConfig) -> Result<SolveResult> {
    solve_orlins_observed(net, b, cfg, &mut |_| {}).map(|(r, _)| r)
}

/// Runs send-flow once, then repeats threshold update, forest maintenance
/// and send-flow until send-flow reports success or infeasibility.
pub fn solve_orlins_observed(
    net: &Network,
    b: &Balances,
    cfg: &OrlinsConfig,
    observe: &mut Observer<'_>,
) -> Result<(SolveResult, OrlinsState)> {
    if let Some(e) = (0..net.edge_count()).find(|&e| net.capacity(e).is_finite()) {
        return Err(FlowError::Capacitated(e));
    }
    let epsilon = cfg.resolve_epsilon(net.vertex_count())?;
    validate(net, b, false)?;
    let (_, _, bound) = iteration_bounds(net.vertex_count(), net.edge_count(), &epsilon)?;
    let outer_cap = 4 * bound as u64 + 64;

    let mut state = OrlinsState::initial(net, b, epsilon.clone());
    state.record_components();
    observe(&OrlinsEvent::Gamma(&state));
    observe(&OrlinsEvent::SendFlowEntry { state: &state, outer: false });
    state = send_flow_observed(net, &state, observe)?;
    while state.flag == Flag::NotYetTerm {
        if state.counters.outer_iters >= outer_cap {
            return Err(FlowError::Internal("outer loop exceeded its iteration cap".into()));
        }
        state.counters.outer_iters += 1;
        state.gamma = new_gamma(&state);
        if !state.gamma.is_positive() {
            return Err(FlowError::Internal("threshold dropped to zero".into()));
        }
        state.record_components();
        observe(&OrlinsEvent::Gamma(&state));
        state = maintain_forest_observed(net, &state, observe)?;
        observe(&OrlinsEvent::SendFlowEntry { state: &state, outer: true });
        state = send_flow_observed(net, &state, observe)?;
    }

    let mut stats = SolveStats::default();
    stats.set("outer_iterations", state.counters.outer_iters);
    stats.set("outer_bound", bound);
    stats.set("send_flow_augmentations", state.counters.send_flow_augmentations);
    stats.set("forest_merges", state.counters.forest_merges);
    stats.set("epsilon", &epsilon);
    let result = match state.flag {
        Flag::Success => SolveResult::success(state.flow.clone(), net.flow_cost(&state.flow), stats),
        _ => SolveResult::infeasible(None, stats),
    };
    Ok((result, state))
}
