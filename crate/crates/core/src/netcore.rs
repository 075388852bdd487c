//! Problem instances, flows, residual edges and augmentation.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{Signed, Zero};

use crate::error::{FlowError, Result};
use crate::num::{ExtRational, Rational};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub src: VertexId,
    pub dst: VertexId,
}

/// A directed multigraph with capacities and unit costs.
///
/// Vertices are `0..vertex_count`, edges are `0..edge_count` in insertion
/// order. Parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    vertex_count: usize,
    edges: Vec<Edge>,
    capacity: Vec<ExtRational>,
    cost: Vec<Rational>,
    outgoing: Vec<Vec<EdgeId>>,
    incoming: Vec<Vec<EdgeId>>,
}

impl Network {
    /// Builds a network from `(src, dst, capacity, cost)` tuples.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, ExtRational, Rational)>,
    {
        if vertex_count == 0 {
            return Err(FlowError::InvalidNetwork("a network needs at least one vertex".into()));
        }
        let mut net = Network {
            vertex_count,
            edges: Vec::new(),
            capacity: Vec::new(),
            cost: Vec::new(),
            outgoing: vec![Vec::new(); vertex_count],
            incoming: vec![Vec::new(); vertex_count],
        };
        for (src, dst, capacity, cost) in edges {
            let id = net.edges.len();
            if src >= vertex_count || dst >= vertex_count {
                return Err(FlowError::InvalidNetwork(format!(
                    "edge {id} ({src}, {dst}) leaves the vertex range 0..{vertex_count}"
                )));
            }
            if let ExtRational::Finite(c) = &capacity {
                if c.is_negative() {
                    return Err(FlowError::InvalidNetwork(format!(
                        "edge {id} has negative capacity {c}"
                    )));
                }
            }
            net.edges.push(Edge { id, src, dst });
            net.capacity.push(capacity);
            net.cost.push(cost);
            net.outgoing[src].push(id);
            net.incoming[dst].push(id);
        }
        Ok(net)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(e).ok_or(FlowError::UnknownEdge(e))
    }

    pub fn capacity(&self, e: EdgeId) -> &ExtRational {
        &self.capacity[e]
    }

    pub fn cost(&self, e: EdgeId) -> &Rational {
        &self.cost[e]
    }

    pub fn capacities(&self) -> &[ExtRational] {
        &self.capacity
    }

    pub fn costs(&self) -> &[Rational] {
        &self.cost
    }

    /// Edges leaving `v` (δ⁺).
    pub fn outgoing(&self, v: VertexId) -> &[EdgeId] {
        &self.outgoing[v]
    }

    /// Edges entering `v` (δ⁻).
    pub fn incoming(&self, v: VertexId) -> &[EdgeId] {
        &self.incoming[v]
    }

    pub fn is_uncapacitated(&self) -> bool {
        self.capacity.iter().all(|c| !c.is_finite())
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(FlowError::UnknownVertex(v))
        }
    }

    fn check_flow(&self, f: &Flow) -> Result<()> {
        if f.len() == self.edge_count() {
            Ok(())
        } else {
            Err(FlowError::InvalidArgument(format!(
                "flow has {} entries for {} edges",
                f.len(),
                self.edge_count()
            )))
        }
    }

    fn check_balances(&self, b: &Balances) -> Result<()> {
        if b.len() == self.vertex_count {
            Ok(())
        } else {
            Err(FlowError::InvalidArgument(format!(
                "balances have {} entries for {} vertices",
                b.len(),
                self.vertex_count
            )))
        }
    }

    pub fn tail(&self, r: ResidualEdge) -> Result<VertexId> {
        let e = self.edge(r.edge())?;
        Ok(match r {
            ResidualEdge::Forward(_) => e.src,
            ResidualEdge::Backward(_) => e.dst,
        })
    }

    pub fn head(&self, r: ResidualEdge) -> Result<VertexId> {
        let e = self.edge(r.edge())?;
        Ok(match r {
            ResidualEdge::Forward(_) => e.dst,
            ResidualEdge::Backward(_) => e.src,
        })
    }

    /// `u(e) − f(e)` for `Forward e`, `f(e)` for `Backward e`.
    pub fn residual_capacity(&self, f: &Flow, r: ResidualEdge) -> Result<ExtRational> {
        let e = self.edge(r.edge())?.id;
        self.check_flow(f)?;
        Ok(match r {
            ResidualEdge::Forward(_) => self.capacity[e].minus(&f[e]),
            ResidualEdge::Backward(_) => ExtRational::Finite(f[e].clone()),
        })
    }

    pub fn residual_cost(&self, r: ResidualEdge) -> Result<Rational> {
        let e = self.edge(r.edge())?.id;
        Ok(match r {
            ResidualEdge::Forward(_) => self.cost[e].clone(),
            ResidualEdge::Backward(_) => -self.cost[e].clone(),
        })
    }

    fn check_path(&self, path: &[ResidualEdge]) -> Result<()> {
        if path.is_empty() {
            return Err(FlowError::InvalidArgument("empty residual path".into()));
        }
        for pair in path.windows(2) {
            if self.head(pair[0])? != self.tail(pair[1])? {
                return Err(FlowError::Precondition(format!(
                    "residual edges {} and {} are not consecutive",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }

    pub fn path_residual_capacity(&self, f: &Flow, path: &[ResidualEdge]) -> Result<ExtRational> {
        self.check_path(path)?;
        let mut min = ExtRational::Infinity;
        for &r in path {
            let cap = self.residual_capacity(f, r)?;
            if cap < min {
                min = cap;
            }
        }
        Ok(min)
    }

    pub fn path_residual_cost(&self, path: &[ResidualEdge]) -> Result<Rational> {
        self.check_path(path)?;
        path.iter()
            .try_fold(Rational::zero(), |acc, &r| Ok(acc + self.residual_cost(r)?))
    }

    /// Inflow minus outflow at `v`.
    pub fn excess(&self, f: &Flow, v: VertexId) -> Result<Rational> {
        self.check_vertex(v)?;
        self.check_flow(f)?;
        let inflow: Rational = self.incoming[v].iter().map(|&e| &f[e]).sum();
        let outflow: Rational = self.outgoing[v].iter().map(|&e| &f[e]).sum();
        Ok(inflow - outflow)
    }

    pub fn respects_capacities(&self, f: &Flow) -> bool {
        f.len() == self.edge_count()
            && f.0
                .iter()
                .zip(&self.capacity)
                .all(|(x, cap)| !x.is_negative() && ExtRational::Finite(x.clone()) <= *cap)
    }

    /// `0 ≤ f ≤ u` and `−ex_f(v) = b(v)` everywhere.
    pub fn is_feasible(&self, f: &Flow, b: &Balances) -> bool {
        if !self.respects_capacities(f) || b.len() != self.vertex_count {
            return false;
        }
        self.vertices()
            .all(|v| -self.excess(f, v).expect("validated") == b[v])
    }

    pub fn flow_cost(&self, f: &Flow) -> Rational {
        f.0.iter().zip(&self.cost).map(|(x, c)| x * c).sum()
    }

    /// Moves `gamma` units along `path`: forward edges gain, backward edges
    /// lose flow on their underlying edge.
    pub fn augment(&self, f: &Flow, gamma: &Rational, path: &[ResidualEdge]) -> Result<Flow> {
        self.check_flow(f)?;
        if gamma.is_negative() {
            return Err(FlowError::InvalidArgument(format!("negative augmentation amount {gamma}")));
        }
        if path.is_empty() {
            return Ok(f.clone());
        }
        let mut seen = HashSet::with_capacity(path.len());
        if !path.iter().all(|r| seen.insert(*r)) {
            return Err(FlowError::Precondition("augmenting path repeats a residual edge".into()));
        }
        let cap = self.path_residual_capacity(f, path)?;
        if ExtRational::Finite(gamma.clone()) > cap {
            return Err(FlowError::Precondition(format!(
                "augmentation by {gamma} exceeds path capacity {cap}"
            )));
        }
        let mut out = f.clone();
        for &r in path {
            match r {
                ResidualEdge::Forward(e) => out[e] += gamma,
                ResidualEdge::Backward(e) => out[e] -= gamma,
            }
        }
        Ok(out)
    }

    /// Checks `Σ b = 0`.
    pub fn check_zero_sum(&self, b: &Balances) -> Result<()> {
        self.check_balances(b)?;
        let total: Rational = b.0.iter().sum();
        if total.is_zero() {
            Ok(())
        } else {
            Err(FlowError::NonzeroBalanceSum(total.to_string()))
        }
    }
}

/// Residual counterpart of an edge: `F e` runs along `e`, `B e` against it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResidualEdge {
    Forward(EdgeId),
    Backward(EdgeId),
}

impl ResidualEdge {
    pub fn edge(self) -> EdgeId {
        match self {
            ResidualEdge::Forward(e) | ResidualEdge::Backward(e) => e,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            ResidualEdge::Forward(e) => ResidualEdge::Backward(e),
            ResidualEdge::Backward(e) => ResidualEdge::Forward(e),
        }
    }

    pub fn is_forward(self) -> bool {
        matches!(self, ResidualEdge::Forward(_))
    }
}

impl fmt::Display for ResidualEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidualEdge::Forward(e) => write!(f, "F{e}"),
            ResidualEdge::Backward(e) => write!(f, "B{e}"),
        }
    }
}

/// Reverses every residual edge and their order.
pub fn reverse_path(path: &[ResidualEdge]) -> Vec<ResidualEdge> {
    path.iter().rev().map(|r| r.reverse()).collect()
}

/// Per-edge flow values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flow(pub Vec<Rational>);

impl Flow {
    pub fn zero(edge_count: usize) -> Self {
        Flow(vec![Rational::zero(); edge_count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v.is_integer())
    }
}

impl Index<EdgeId> for Flow {
    type Output = Rational;

    fn index(&self, e: EdgeId) -> &Rational {
        &self.0[e]
    }
}

impl IndexMut<EdgeId> for Flow {
    fn index_mut(&mut self, e: EdgeId) -> &mut Rational {
        &mut self.0[e]
    }
}

/// Per-vertex supply (positive) or demand (negative).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Balances(pub Vec<Rational>);

impl Balances {
    pub fn zero(vertex_count: usize) -> Self {
        Balances(vec![Rational::zero(); vertex_count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn all_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v.is_integer())
    }

    /// Pointwise `self − other`.
    pub fn minus(&self, other: &Balances) -> Balances {
        Balances(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Index<VertexId> for Balances {
    type Output = Rational;

    fn index(&self, v: VertexId) -> &Rational {
        &self.0[v]
    }
}

impl IndexMut<VertexId> for Balances {
    fn index_mut(&mut self, v: VertexId) -> &mut Rational {
        &mut self.0[v]
    }
}
