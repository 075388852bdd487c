//! Successive shortest paths.

use num_traits::{Signed, Zero};

use crate::error::{FlowError, Result};
use crate::flowtheory::rescut;
use crate::netcore::{Balances, Flow, Network, ResidualEdge, VertexId};
use crate::num::{ExtRational, Rational};
use crate::pathsel::{
    bellman_ford, edge_weights, extract_path, find_negative_cycle, project_residual,
    vertex_path_to_residual,
};
use crate::solve::{SolveResult, SolveStats};

/// State after one augmentation, handed to observers.
#[derive(Debug)]
pub struct AugmentStep<'a> {
    pub flow: &'a Flow,
    /// Balances not yet satisfied (b′).
    pub remaining: &'a Balances,
    pub source: VertexId,
    pub target: VertexId,
    pub amount: &'a Rational,
    pub path: &'a [ResidualEdge],
}

/// Zero sum, optional integrality of balances and finite capacities, and no
/// negative-cost cycle among all edges.
pub(crate) fn validate(net: &Network, b: &Balances, integral: bool) -> Result<()> {
    net.check_zero_sum(b)?;
    if integral {
        if let Some(v) = net.vertices().find(|&v| !b[v].is_integer()) {
            return Err(FlowError::NonIntegral(format!("balance of vertex {v} is {}", b[v])));
        }
        for e in 0..net.edge_count() {
            if let ExtRational::Finite(c) = net.capacity(e) {
                if !c.is_integer() {
                    return Err(FlowError::NonIntegral(format!("capacity of edge {e} is {c}")));
                }
            }
        }
    }
    if find_negative_cycle(&edge_weights(net, |_| true)).is_some() {
        return Err(FlowError::NegativeCycle);
    }
    Ok(())
}

/// Exact minimum-cost flow by successive shortest paths.
pub fn solve_ssp(net: &Network, b: &Balances) -> Result<SolveResult> {
    solve_ssp_observed(net, b, &mut |_| {})
}

/// As [`solve_ssp`], calling `observe` after every augmentation.
///
/// Each round takes the lowest vertex with positive remaining balance as
/// source, finds cheapest residual paths from it, picks the lowest reachable
/// vertex with negative remaining balance as target and augments by the
/// largest amount both balances and the path allow.
pub fn solve_ssp_observed(
    net: &Network,
    b: &Balances,
    observe: &mut dyn FnMut(&AugmentStep<'_>),
) -> Result<SolveResult> {
    validate(net, b, true)?;
    let mut f = Flow::zero(net.edge_count());
    let mut remaining = b.clone();
    let mut augmentations = 0u64;
    let mut stats = SolveStats::default();
    loop {
        let Some(s) = net.vertices().find(|&v| remaining[v].is_positive()) else {
            stats.set("augmentations", augmentations);
            let cost = net.flow_cost(&f);
            return Ok(SolveResult::success(f, cost, stats));
        };
        let projection = project_residual(net, &f, |_| true, false);
        let table = bellman_ford(projection.weights().clone(), s)?;
        let target = net
            .vertices()
            .find(|&v| remaining[v].is_negative() && table.dist(v).is_finite());
        let Some(t) = target else {
            stats.set("augmentations", augmentations);
            let witness = rescut(net, &f, s)?;
            return Ok(SolveResult::infeasible(Some(witness.into_iter().collect()), stats));
        };
        let path = vertex_path_to_residual(&projection, &extract_path(&table, t)?)?;
        let capacity = net.path_residual_capacity(&f, &path)?;
        let mut gamma = remaining[s].clone().min(-remaining[t].clone());
        if let ExtRational::Finite(c) = capacity {
            gamma = gamma.min(c);
        }
        if gamma.is_zero() {
            return Err(FlowError::Internal("zero augmentation amount".into()));
        }
        f = net.augment(&f, &gamma, &path)?;
        remaining[s] -= &gamma;
        remaining[t] += &gamma;
        augmentations += 1;
        observe(&AugmentStep {
            flow: &f,
            remaining: &remaining,
            source: s,
            target: t,
            amount: &gamma,
            path: &path,
        });
    }
}
