//! Capacity scaling: successive shortest paths that only move `γ` units at a
//! time, with `γ` halving from the largest power of two below the total
//! supply down to 1.

use std::collections::VecDeque;

use num_traits::{One, Signed};

use crate::error::{FlowError, Result};
use crate::flowtheory::rescut;
use crate::netcore::{Balances, Flow, Network, ResidualEdge, VertexId};
use crate::num::{floor_log2, int, pow2, ExtRational, Rational};
use crate::pathsel::{bellman_ford, project_residual};
use crate::solve::{SolveResult, SolveStats};
use crate::ssp::{validate, AugmentStep};

/// `max{1, ½ Σ |b(v)|}`, the total supply.
pub fn supply_bound(b: &Balances) -> Rational {
    let half: Rational = b.values().iter().map(|x| x.abs()).sum::<Rational>() / int(2);
    half.max(Rational::one())
}

/// Per-phase augmentation counts, largest `γ` first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhaseLog {
    pub phases: Vec<(Rational, u64)>,
}

pub fn solve_scaling(net: &Network, b: &Balances) -> Result<SolveResult> {
    solve_scaling_observed(net, b, &mut |_| {}).map(|(r, _)| r)
}

/// Minimum-cost paths from `s` whose residual edges all have capacity at
/// least `gamma`: BFS over edges that are tight for the unrestricted
/// shortest-path distances. Returns the lowest reachable vertex accepted by
/// `is_target` and the residual path to it.
fn cheapest_wide_path(
    net: &Network,
    f: &Flow,
    s: VertexId,
    gamma: &Rational,
    is_target: impl Fn(VertexId) -> bool,
) -> Result<Option<(VertexId, Vec<ResidualEdge>)>> {
    let projection = project_residual(net, f, |_| true, false);
    let table = bellman_ford(projection.weights().clone(), s)?;
    let n = net.vertex_count();
    let mut via: Vec<Option<ResidualEdge>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    let wide = ExtRational::Finite(gamma.clone());
    while let Some(x) = queue.pop_front() {
        let dx = table.dist(x);
        let candidates = net
            .outgoing(x)
            .iter()
            .map(|&e| ResidualEdge::Forward(e))
            .chain(net.incoming(x).iter().map(|&e| ResidualEdge::Backward(e)));
        let mut next = Vec::new();
        for r in candidates {
            let y = net.head(r)?;
            if seen[y] || net.residual_capacity(f, r)? < wide {
                continue;
            }
            if &dx.plus(&net.residual_cost(r)?) == table.dist(y) {
                next.push((y, r));
            }
        }
        next.sort_by_key(|&(y, r)| (y, r));
        for (y, r) in next {
            if !seen[y] {
                seen[y] = true;
                via[y] = Some(r);
                queue.push_back(y);
            }
        }
    }
    let Some(t) = (0..n).find(|&v| seen[v] && v != s && is_target(v)) else {
        return Ok(None);
    };
    let mut path = Vec::new();
    let mut cur = t;
    while cur != s {
        let r = via[cur].ok_or_else(|| FlowError::Internal("broken BFS tree".into()))?;
        path.push(r);
        cur = net.tail(r)?;
    }
    path.reverse();
    Ok(Some((t, path)))
}

/// As [`solve_scaling`], calling `observe` after every augmentation and also
/// returning the phase log.
pub fn solve_scaling_observed(
    net: &Network,
    b: &Balances,
    observe: &mut dyn FnMut(&AugmentStep<'_>),
) -> Result<(SolveResult, PhaseLog)> {
    validate(net, b, true)?;
    let mut f = Flow::zero(net.edge_count());
    let mut remaining = b.clone();
    let mut log = PhaseLog::default();
    let mut exponent = floor_log2(&supply_bound(b));
    let mut augmentations = 0u64;
    loop {
        let gamma = pow2(exponent);
        let mut count = 0u64;
        loop {
            let mut found = None;
            for s in net.vertices().filter(|&v| remaining[v] >= gamma) {
                let is_target = |v: VertexId| remaining[v] <= -gamma.clone();
                if let Some((t, path)) = cheapest_wide_path(net, &f, s, &gamma, is_target)? {
                    found = Some((s, t, path));
                    break;
                }
            }
            let Some((s, t, path)) = found else { break };
            f = net.augment(&f, &gamma, &path)?;
            remaining[s] -= &gamma;
            remaining[t] += &gamma;
            count += 1;
            observe(&AugmentStep {
                flow: &f,
                remaining: &remaining,
                source: s,
                target: t,
                amount: &gamma,
                path: &path,
            });
        }
        augmentations += count;
        log.phases.push((gamma, count));
        if exponent == 0 {
            break;
        }
        exponent -= 1;
    }

    let mut stats = SolveStats::default();
    stats.set("phases", log.phases.len());
    stats.set("augmentations", augmentations);
    stats.set("initial_gamma", &log.phases[0].0);
    let result = match net.vertices().find(|&v| remaining[v].is_positive()) {
        None if remaining.all_zero() => {
            let cost = net.flow_cost(&f);
            SolveResult::success(f, cost, stats)
        }
        None => return Err(FlowError::Internal("demand left without supply".into())),
        Some(s) => {
            let witness = rescut(net, &f, s)?;
            SolveResult::infeasible(Some(witness.into_iter().collect()), stats)
        }
    };
    Ok((result, log))
}
