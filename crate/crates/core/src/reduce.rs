//! Reduction of networks with finite capacities to uncapacitated networks.
//!
//! A finite-capacity edge `e = (x, y)` becomes a new vertex `w_e` with supply
//! `u(e)` and two uncapacitated edges `w_e → x` (cost 0) and `w_e → y` (cost
//! `c(e)`); `x` loses `u(e)` of its balance. Flow `f(e)` on the original edge
//! corresponds to `f(e)` units on `w_e → y` and `u(e) − f(e)` on `w_e → x`.

use num_traits::Zero;

use crate::error::{FlowError, Result};
use crate::netcore::{Balances, EdgeId, Flow, Network, VertexId};
use crate::num::{ExtRational, Rational};
use crate::pathsel::{edge_weights, find_negative_cycle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Original(VertexId),
    /// Stands for a finite-capacity edge.
    EdgeVertex(EdgeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// Edge vertex to the original tail, cost 0.
    Out(EdgeId),
    /// Edge vertex to the original head, original cost.
    In(EdgeId),
    /// An original infinite-capacity edge, copied unchanged.
    VToV(EdgeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub net: Network,
    pub balances: Balances,
    /// Kind of every reduced edge, indexed by reduced edge id.
    pub edge_kinds: Vec<EdgeKind>,
    /// Reduced edge ids of each original edge: `(in or vtov, out if finite)`.
    pub image: Vec<(EdgeId, Option<EdgeId>)>,
    original: Network,
    original_balances: Balances,
}

impl ReducedInstance {
    pub fn original(&self) -> &Network {
        &self.original
    }

    pub fn original_balances(&self) -> &Balances {
        &self.original_balances
    }

    pub fn vertex_kind(&self, v: VertexId) -> VertexKind {
        let n = self.original.vertex_count();
        if v < n {
            VertexKind::Original(v)
        } else {
            let e = self
                .image
                .iter()
                .position(|(i, _)| self.net.edges()[*i].src == v)
                .expect("edge vertex has an in-edge");
            VertexKind::EdgeVertex(e)
        }
    }
}

pub fn reduce_to_uncapacitated(net: &Network, b: &Balances) -> Result<ReducedInstance> {
    net.check_zero_sum(b)?;
    let n = net.vertex_count();
    let finite: Vec<EdgeId> = (0..net.edge_count())
        .filter(|&e| net.capacity(e).is_finite())
        .collect();
    let mut edge_vertex = vec![None; net.edge_count()];
    for (i, &e) in finite.iter().enumerate() {
        edge_vertex[e] = Some(n + i);
    }

    let mut balances = b.values().to_vec();
    balances.extend(finite.iter().map(|&e| net.capacity(e).finite().expect("finite").clone()));
    for &e in &finite {
        let cap = net.capacity(e).finite().expect("finite");
        balances[net.edges()[e].src] -= cap;
    }

    let mut edges = Vec::new();
    let mut kinds = Vec::new();
    let mut image: Vec<(EdgeId, Option<EdgeId>)> = vec![(0, None); net.edge_count()];
    for &e in &finite {
        let w = edge_vertex[e].expect("finite");
        image[e].1 = Some(edges.len());
        edges.push((w, net.edges()[e].src, ExtRational::Infinity, Rational::zero()));
        kinds.push(EdgeKind::Out(e));
    }
    for &e in &finite {
        let w = edge_vertex[e].expect("finite");
        image[e].0 = edges.len();
        edges.push((w, net.edges()[e].dst, ExtRational::Infinity, net.cost(e).clone()));
        kinds.push(EdgeKind::In(e));
    }
    for e in (0..net.edge_count()).filter(|&e| !net.capacity(e).is_finite()) {
        let edge = net.edges()[e];
        image[e].0 = edges.len();
        edges.push((edge.src, edge.dst, ExtRational::Infinity, net.cost(e).clone()));
        kinds.push(EdgeKind::VToV(e));
    }

    Ok(ReducedInstance {
        net: Network::new(n + finite.len(), edges)?,
        balances: Balances(balances),
        edge_kinds: kinds,
        image,
        original: net.clone(),
        original_balances: b.clone(),
    })
}

/// Maps a feasible original flow onto the reduced network.
pub fn lift_flow(inst: &ReducedInstance, f: &Flow) -> Result<Flow> {
    if !inst.original.is_feasible(f, &inst.original_balances) {
        return Err(FlowError::Precondition("flow is not feasible for the original instance".into()));
    }
    let mut out = Flow::zero(inst.net.edge_count());
    for (e, &(main, out_edge)) in inst.image.iter().enumerate() {
        out[main] = f[e].clone();
        if let Some(o) = out_edge {
            out[o] = inst.original.capacity(e).finite().expect("finite") - &f[e];
        }
    }
    Ok(out)
}

/// Maps a feasible reduced flow back onto the original network.
pub fn restore_flow(inst: &ReducedInstance, f: &Flow) -> Result<Flow> {
    if !inst.net.is_feasible(f, &inst.balances) {
        return Err(FlowError::Precondition("flow is not feasible for the reduced instance".into()));
    }
    Ok(Flow(inst.image.iter().map(|&(main, _)| f[main].clone()).collect()))
}

/// Whether some cycle of infinite-capacity edges has negative total cost.
pub fn has_neg_infty_cycle(net: &Network) -> bool {
    find_negative_cycle(&edge_weights(net, |e| !net.capacity(e).is_finite())).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::fixtures::*;
    use crate::num::int;

    #[test]
    fn two_edge_network_gets_edge_vertices() {
        let (net, f) = two_edge();
        let b = Balances(vec![int(1), int(-1)]);
        let inst = reduce_to_uncapacitated(&net, &b).unwrap();
        assert_eq!(inst.net.vertex_count(), 4);
        assert_eq!(inst.net.edge_count(), 4);
        assert!(inst.net.is_uncapacitated());
        // edge vertex of e1 is vertex 2, of e2 vertex 3
        assert_eq!(inst.balances, Balances(vec![int(1 - 8), int(-1 - 6), int(8), int(6)]));
        assert_eq!(inst.edge_kinds[0], EdgeKind::Out(E1));
        let out = inst.net.edges()[0];
        assert_eq!((out.src, out.dst), (2, U));
        assert_eq!(inst.net.cost(0), &int(0));
        let inn = inst.net.edges()[2];
        assert_eq!((inn.src, inn.dst), (2, V));
        assert_eq!(inst.net.cost(2), &int(2));
        assert_eq!(inst.vertex_kind(3), VertexKind::EdgeVertex(E2));

        let lifted = lift_flow(&inst, &f).unwrap();
        assert_eq!(lifted[0], int(3));
        assert_eq!(lifted[2], int(5));
        assert_eq!(inst.net.flow_cost(&lifted), net.flow_cost(&f));
        assert_eq!(restore_flow(&inst, &lifted).unwrap(), f);
    }

    #[test]
    fn uncapacitated_instances_are_copied() {
        let net = Network::new(2, [(0, 1, ExtRational::Infinity, int(3))]).unwrap();
        let b = Balances::zero(2);
        let inst = reduce_to_uncapacitated(&net, &b).unwrap();
        assert_eq!(inst.net, net);
        assert_eq!(inst.balances, b);
        assert_eq!(lift_flow(&inst, &Flow::zero(1)).unwrap(), Flow::zero(1));
        assert!(restore_flow(&inst, &Flow(vec![int(1)])).is_err());
    }

    #[test]
    fn negative_infinite_cycles() {
        let inf = || ExtRational::Infinity;
        let net = Network::new(2, [(0, 1, inf(), int(1)), (1, 0, inf(), int(-3))]).unwrap();
        assert!(has_neg_infty_cycle(&net));
        let capped = Network::new(2, [(0, 1, inf(), int(1)), (1, 0, ExtRational::Finite(int(1)), int(-3))]).unwrap();
        assert!(!has_neg_infty_cycle(&capped));
        let (two_edge_net, _) = two_edge();
        assert!(!has_neg_infty_cycle(&two_edge_net));
    }
}
