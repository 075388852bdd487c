//! Cuts, residual cuts, circulation decomposition and the augmenting-cycle
//! optimality test.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::error::{FlowError, Result};
use crate::netcore::{Balances, EdgeId, Flow, Network, ResidualEdge, VertexId};
use crate::num::{ExtRational, Rational};
use crate::pathsel::{find_negative_cycle, project_residual};

/// The ordered bipartition `(X, V \ X)`, stored as `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub inside: BTreeSet<VertexId>,
}

impl Cut {
    pub fn new(inside: impl IntoIterator<Item = VertexId>) -> Self {
        Cut {
            inside: inside.into_iter().collect(),
        }
    }

    /// Edges leaving `X` (Δ⁺).
    pub fn out_edges(&self, net: &Network) -> Vec<EdgeId> {
        net.edges()
            .iter()
            .filter(|e| self.inside.contains(&e.src) && !self.inside.contains(&e.dst))
            .map(|e| e.id)
            .collect()
    }

    /// Edges entering `X` (Δ⁻).
    pub fn in_edges(&self, net: &Network) -> Vec<EdgeId> {
        net.edges()
            .iter()
            .filter(|e| !self.inside.contains(&e.src) && self.inside.contains(&e.dst))
            .map(|e| e.id)
            .collect()
    }

    /// Total capacity of Δ⁺(X).
    pub fn capacity(&self, net: &Network) -> ExtRational {
        self.out_edges(net)
            .into_iter()
            .fold(ExtRational::zero(), |acc, e| &acc + net.capacity(e))
    }

    /// Total capacity of Δ⁻(X).
    pub fn anti_capacity(&self, net: &Network) -> ExtRational {
        self.in_edges(net)
            .into_iter()
            .fold(ExtRational::zero(), |acc, e| &acc + net.capacity(e))
    }

    pub fn balance(&self, b: &Balances) -> Rational {
        self.inside.iter().map(|&v| &b[v]).sum()
    }
}

/// `(Σ_X b, Σ_{Δ⁺X} f − Σ_{Δ⁻X} f)`; the two agree for every feasible flow.
pub fn cut_flow_balance(
    net: &Network,
    f: &Flow,
    b: &Balances,
    cut: &Cut,
) -> Result<(Rational, Rational)> {
    if !net.is_feasible(f, b) {
        return Err(FlowError::Precondition("flow is not feasible for the balances".into()));
    }
    if let Some(&v) = cut.inside.iter().find(|&&v| v >= net.vertex_count()) {
        return Err(FlowError::UnknownVertex(v));
    }
    let out: Rational = cut.out_edges(net).into_iter().map(|e| &f[e]).sum();
    let inn: Rational = cut.in_edges(net).into_iter().map(|e| &f[e]).sum();
    Ok((cut.balance(b), out - inn))
}

/// Vertices reachable from `v` over residual edges of positive capacity.
pub fn rescut(net: &Network, f: &Flow, v: VertexId) -> Result<BTreeSet<VertexId>> {
    if v >= net.vertex_count() {
        return Err(FlowError::UnknownVertex(v));
    }
    let mut seen = vec![false; net.vertex_count()];
    seen[v] = true;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let forward = net
            .outgoing(x)
            .iter()
            .filter(|&&e| net.capacity(e).minus(&f[e]).is_positive())
            .map(|&e| net.edges()[e].dst);
        let backward = net
            .incoming(x)
            .iter()
            .filter(|&&e| f[e].is_positive())
            .map(|&e| net.edges()[e].src);
        for y in forward.chain(backward).collect::<Vec<_>>() {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok(net.vertices().filter(|&x| seen[x]).collect())
}

/// Cycles (as edge lists) with positive weights.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<(Vec<EdgeId>, Rational)>,
}

impl CycleDecomposition {
    /// Sums the weighted cycles back into a flow on `edge_count` edges.
    pub fn recompose(&self, edge_count: usize) -> Flow {
        let mut g = Flow::zero(edge_count);
        for (cycle, w) in &self.cycles {
            for &e in cycle {
                g[e] += w;
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// Splits a circulation into weighted directed cycles. Each cycle is found
/// by walking along the lowest-id outgoing edge with remaining flow until a
/// vertex repeats; its minimum remaining flow becomes the weight.
pub fn decompose_circulation(net: &Network, g: &Flow) -> Result<CycleDecomposition> {
    if g.len() != net.edge_count() || g.values().iter().any(|x| x.is_negative()) {
        return Err(FlowError::Precondition("not a nonnegative flow on the network".into()));
    }
    for v in net.vertices() {
        if !net.excess(g, v)?.is_zero() {
            return Err(FlowError::Precondition(format!("vertex {v} has nonzero excess")));
        }
    }
    let n = net.vertex_count();
    let mut rest = g.clone();
    let mut out = CycleDecomposition::default();
    while let Some(start) = (0..net.edge_count()).find(|&e| rest[e].is_positive()) {
        let mut v = net.edges()[start].src;
        let mut position = vec![None; n];
        let mut walk: Vec<EdgeId> = Vec::new();
        let cycle = loop {
            if let Some(i) = position[v] {
                break walk[i..].to_vec();
            }
            if walk.len() > n {
                return Err(FlowError::Internal("cycle walk did not close".into()));
            }
            position[v] = Some(walk.len());
            let e = *net
                .outgoing(v)
                .iter()
                .find(|&&e| rest[e].is_positive())
                .ok_or_else(|| FlowError::Internal(format!("walk stuck at vertex {v}")))?;
            walk.push(e);
            v = net.edges()[e].dst;
        };
        let weight = cycle
            .iter()
            .map(|&e| rest[e].clone())
            .min()
            .expect("cycle is nonempty");
        for &e in &cycle {
            rest[e] -= &weight;
        }
        out.cycles.push((cycle, weight));
    }
    Ok(out)
}

/// A residual cycle of negative cost and positive capacity, if any.
pub fn find_augmenting_cycle(net: &Network, f: &Flow) -> Option<Vec<ResidualEdge>> {
    let projection = project_residual(net, f, |_| true, false);
    let cycle = find_negative_cycle(projection.weights())?;
    let k = cycle.len();
    Some(
        (0..k)
            .map(|i| {
                projection
                    .realizer(cycle[i], cycle[(i + 1) % k])
                    .expect("cycle uses finite projection weights")
            })
            .collect(),
    )
}

/// Feasible and free of augmenting cycles, i.e. a minimum-cost flow.
pub fn verify_optimal(net: &Network, f: &Flow, b: &Balances) -> bool {
    net.is_feasible(f, b) && find_augmenting_cycle(net, f).is_none()
}
