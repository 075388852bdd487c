//! Trace checkers and random instance builders shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use minflow::flowtheory::verify_optimal;
use minflow::netcore::{Balances, Network, ResidualEdge, VertexId};
use minflow::num::{int, ExtRational, Rational};
use minflow::orlins::{phi, Flag, OrlinsEvent, OrlinsState};
use minflow::pathsel::{bellman_ford, project_residual};
use minflow::ssp::AugmentStep;
use num_traits::{Signed, Zero};

/// Violations collected while observing a solver run.
#[derive(Debug, Default)]
pub struct Violations(pub Vec<String>);

impl Violations {
    pub fn push(&mut self, what: impl Into<String>) {
        if self.0.len() < 20 {
            self.0.push(what.into());
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Checks one augmentation of ssp or scaling: optimal for `b − b′`, zero
/// sum, integrality and a strictly shrinking `Σ|b′|`.
pub struct SequentialChecker<'a> {
    pub net: &'a Network,
    pub b: &'a Balances,
    pub last_total: Rational,
    pub last_amount: Option<Rational>,
    pub scaling: bool,
    pub violations: Violations,
}

impl<'a> SequentialChecker<'a> {
    pub fn new(net: &'a Network, b: &'a Balances, scaling: bool) -> Self {
        SequentialChecker {
            net,
            b,
            last_total: b.values().iter().map(|x| x.abs()).sum(),
            last_amount: None,
            scaling,
            violations: Violations::default(),
        }
    }

    pub fn observe(&mut self, step: &AugmentStep<'_>) {
        let satisfied = self.b.minus(step.remaining);
        if !verify_optimal(self.net, step.flow, &satisfied) {
            self.violations.push("flow not optimal for b - b'");
        }
        if !step.remaining.values().iter().sum::<Rational>().is_zero() {
            self.violations.push("remaining balances do not sum to zero");
        }
        if !step.flow.is_integral() || !step.remaining.is_integral() {
            self.violations.push("non-integral intermediate value");
        }
        let total: Rational = step.remaining.values().iter().map(|x| x.abs()).sum();
        if total >= self.last_total {
            self.violations.push("sum of |b'| did not decrease");
        }
        self.last_total = total;
        if self.scaling {
            if let Some(prev) = &self.last_amount {
                if step.amount > prev {
                    self.violations.push("augmentation amount grew");
                }
            }
            if !is_power_of_two(step.amount) {
                self.violations.push("augmentation amount is not a power of two");
            }
            self.last_amount = Some(step.amount.clone());
        }
    }
}

fn is_power_of_two(x: &Rational) -> bool {
    x.is_integer() && x.is_positive() && {
        let n = x.to_integer();
        (&n & (&n - num_bigint::BigInt::from(1))).is_zero()
    }
}

/// Checks every event of an Orlin run against the state invariants, the
/// send-flow postconditions, the potential bounds and the forest paths.
pub struct OrlinsChecker<'a> {
    pub net: &'a Network,
    pub b: &'a Balances,
    pub violations: Violations,
    entry: Option<OrlinsState>,
    premise_6n: bool,
    /// Threshold observations that are not acceptance criteria.
    pub forest_above_8n_after_gamma: (u64, u64),
    pub forest_above_6n_at_entry: (u64, u64),
    pub forest_above_4n_after_send_flow: (u64, u64),
    pub tighter_bound_violations: u64,
}

impl<'a> OrlinsChecker<'a> {
    pub fn new(net: &'a Network, b: &'a Balances) -> Self {
        OrlinsChecker {
            net,
            b,
            violations: Violations::default(),
            entry: None,
            premise_6n: false,
            forest_above_8n_after_gamma: (0, 0),
            forest_above_6n_at_entry: (0, 0),
            forest_above_4n_after_send_flow: (0, 0),
            tighter_bound_violations: 0,
        }
    }

    fn forest_above(&self, state: &OrlinsState, factor: i64) -> bool {
        let bound = int(factor * self.net.vertex_count() as i64) * &state.gamma;
        state.forest.edges().all(|e| state.flow[e] > bound)
    }

    fn tally(counter: &mut (u64, u64), ok: bool) {
        counter.1 += 1;
        if ok {
            counter.0 += 1;
        }
    }

    fn invariants(&mut self, state: &OrlinsState, when: &str) {
        if let Err(e) = state.check_invariants(self.net, self.b) {
            self.violations.push(format!("{when}: {e}"));
        }
    }

    fn phi_of(&self, state: &OrlinsState) -> Option<num_bigint::BigInt> {
        phi(&state.remaining, &state.gamma, &state.epsilon).ok()
    }

    pub fn observe(&mut self, event: &OrlinsEvent<'_>) {
        match event {
            OrlinsEvent::Gamma(state) => {
                if !state.gamma.is_positive() && !self.b.all_zero() {
                    self.violations.push("threshold not positive");
                }
                self.invariants(state, "after threshold update");
                let ok = self.forest_above(state, 8);
                Self::tally(&mut self.forest_above_8n_after_gamma, ok);
            }
            OrlinsEvent::Merge { before, after, path } => {
                self.invariants(after, "after merge");
                if let (Some(p0), Some(p1)) = (self.phi_of(before), self.phi_of(after)) {
                    if p1 > p0 + 1 {
                        self.violations.push("merge raised the potential by more than 1");
                    }
                }
                if after.forest.edge_count() != before.forest.edge_count() + 1 {
                    self.violations.push("merge did not add exactly one forest edge");
                }
                self.check_forest_path(before, path);
            }
            OrlinsEvent::SendFlowEntry { state, outer } => {
                self.invariants(state, "send-flow entry");
                if *outer && !self.forest_above(state, 4) {
                    self.violations.push("forest edge at or below 4n*gamma at the send-flow call");
                }
                self.premise_6n = self.forest_above(state, 6);
                if *outer {
                    let ok = self.premise_6n;
                    Self::tally(&mut self.forest_above_6n_at_entry, ok);
                }
                self.entry = Some((*state).clone());
            }
            OrlinsEvent::Augment { before, after, .. } => {
                if self.premise_6n {
                    if let (Some(p0), Some(p1)) = (self.phi_of(before), self.phi_of(after)) {
                        if p1 + 1 > p0 {
                            self.violations.push("send-flow augmentation did not lower the potential");
                        }
                    }
                }
            }
            OrlinsEvent::SendFlowExit(state) => {
                self.invariants(state, "send-flow exit");
                let slack = Rational::from_integer(1.into()) - &state.epsilon;
                match state.flag {
                    Flag::Success if !state.remaining.all_zero() => {
                        self.violations.push("success with remaining balance")
                    }
                    Flag::NotYetTerm
                        if state.remaining.values().iter().any(|x| x.abs() > &slack * &state.gamma) =>
                    {
                        self.violations.push("send-flow left an important vertex")
                    }
                    _ => {}
                }
                if let Some(entry) = self.entry.take() {
                    if !state.gamma.is_zero() {
                        let multiple = (0..self.net.edge_count()).all(|e| {
                            ((&state.flow[e] - &entry.flow[e]) / &state.gamma).is_integer()
                        });
                        if !multiple {
                            self.violations.push("send-flow changed a flow by a non-multiple of gamma");
                        }
                    }
                }
                let ok = self.forest_above(state, 4);
                Self::tally(&mut self.forest_above_4n_after_send_flow, ok);
            }
        }
    }

    fn check_forest_path(&mut self, before: &OrlinsState, path: &[ResidualEdge]) {
        if path.is_empty() {
            return;
        }
        let net = self.net;
        let (Ok(x), Ok(y)) = (net.tail(path[0]), net.head(*path.last().unwrap())) else {
            self.violations.push("forest path has unknown edges");
            return;
        };
        let projection = project_residual(net, &before.flow, |_| true, false);
        let cost = net.path_residual_cost(path).unwrap();
        for (from, to, want) in [(x, y, cost.clone()), (y, x, -cost)] {
            let table = bellman_ford(projection.weights().clone(), from).unwrap();
            if table.dist(to) != &ExtRational::Finite(want) {
                self.violations.push("forest path is not a cheapest residual path");
            }
        }
    }

    /// Final checks on a finished run.
    pub fn finish(&mut self, state: &OrlinsState, outer_bound: i64) {
        let n = self.net.vertex_count();
        if state.counters.forest_merges as usize > n.saturating_sub(1) {
            self.violations.push("more than n - 1 forest merges");
        }
        if state.counters.outer_iters as i64 > outer_bound {
            self.violations.push("outer iterations exceed n(k + l + 2)");
        }
        let tighter = (n as i64 - 1) * (outer_bound / n as i64);
        if state.counters.outer_iters as i64 > tighter {
            self.tighter_bound_violations += 1;
        }
        if state.flag == Flag::Success && state.remaining.values().iter().any(|x| !x.is_zero()) {
            self.violations.push("final balances not zero");
        }
    }
}

/// Any two members nested or disjoint.
pub fn is_laminar(family: &BTreeSet<BTreeSet<VertexId>>) -> bool {
    let sets: Vec<_> = family.iter().collect();
    sets.iter().enumerate().all(|(i, a)| {
        sets[i + 1..]
            .iter()
            .all(|b| a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b))
    })
}
