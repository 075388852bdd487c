use minflow::flowtheory::{decompose_circulation, verify_optimal, Cut};
use minflow::instance::{parse_instance, render_instance, InstanceFile};
use minflow::netcore::{reverse_path, Balances, Flow, Network, ResidualEdge};
use minflow::num::{int, ExtRational, Rational};
use minflow::oracle::brute_force_min_cost_flow;
use minflow::pathsel::project_residual;
use minflow::reduce::{lift_flow, reduce_to_uncapacitated, restore_flow};
use minflow::scaling::solve_scaling;
use minflow::ssp::solve_ssp;
use minflow::SolveStatus;
use num_traits::Zero;
use proptest::prelude::*;

/// A small network with a flow inside the capacities.
fn network_with_flow() -> impl Strategy<Value = (Network, Flow)> {
    (2usize..=5).prop_flat_map(|n| {
        let edge = (0..n, 0..n, prop::option::of(0i64..=6), -4i64..=6, 0i64..=6);
        prop::collection::vec(edge, 1..=7).prop_map(move |raw| {
            let mut flows = Vec::new();
            let edges: Vec<_> = raw
                .into_iter()
                .map(|(u, v, cap, cost, x)| {
                    let (cap, x) = match cap {
                        Some(c) => (ExtRational::Finite(int(c)), x.min(c)),
                        None => (ExtRational::Infinity, x),
                    };
                    flows.push(int(x));
                    (u, v, cap, int(cost))
                })
                .collect();
            (Network::new(n, edges).unwrap(), Flow(flows))
        })
    })
}

fn residual_edges(net: &Network) -> Vec<ResidualEdge> {
    (0..net.edge_count())
        .flat_map(|e| [ResidualEdge::Forward(e), ResidualEdge::Backward(e)])
        .collect()
}

/// A walk of consecutive residual edges starting at a chosen edge.
fn residual_walk(net: &Network, picks: &[usize]) -> Vec<ResidualEdge> {
    let all = residual_edges(net);
    let mut path = vec![all[picks[0] % all.len()]];
    for &p in &picks[1..] {
        let at = net.head(*path.last().unwrap()).unwrap();
        let next: Vec<_> = all
            .iter()
            .copied()
            .filter(|&r| net.tail(r).unwrap() == at && !path.iter().any(|q| q.edge() == r.edge()))
            .collect();
        if next.is_empty() {
            break;
        }
        path.push(next[p % next.len()]);
    }
    path
}

fn excess_sum(net: &Network, f: &Flow) -> Rational {
    net.vertices().map(|v| net.excess(f, v).unwrap()).sum()
}

proptest! {
    #[test]
    fn forward_plus_backward_is_capacity((net, f) in network_with_flow()) {
        for e in 0..net.edge_count() {
            let fwd = net.residual_capacity(&f, ResidualEdge::Forward(e)).unwrap();
            let bwd = net.residual_capacity(&f, ResidualEdge::Backward(e)).unwrap();
            prop_assert_eq!(bwd.clone(), ExtRational::Finite(f[e].clone()));
            prop_assert_eq!(fwd.plus(&f[e]), net.capacity(e).clone());
            prop_assert_eq!(
                net.residual_cost(ResidualEdge::Backward(e)).unwrap(),
                -net.residual_cost(ResidualEdge::Forward(e)).unwrap()
            );
        }
    }

    #[test]
    fn excesses_sum_to_zero((net, f) in network_with_flow()) {
        prop_assert!(excess_sum(&net, &f).is_zero());
    }

    #[test]
    fn augmenting_and_undoing_restores_the_flow(
        (net, f) in network_with_flow(),
        picks in prop::collection::vec(0usize..100, 1..5),
        frac in 0u32..=4,
    ) {
        let path = residual_walk(&net, &picks);
        let cap = net.path_residual_capacity(&f, &path).unwrap();
        let gamma = match cap {
            ExtRational::Finite(c) => c * Rational::new(frac.into(), 4.into()),
            ExtRational::Infinity => int(frac as i64),
        };
        let g = net.augment(&f, &gamma, &path).unwrap();
        prop_assert!(net.respects_capacities(&g));
        prop_assert_eq!(
            net.flow_cost(&g) - net.flow_cost(&f),
            &gamma * net.path_residual_cost(&path).unwrap()
        );
        let src = net.tail(path[0]).unwrap();
        let dst = net.head(*path.last().unwrap()).unwrap();
        for v in net.vertices() {
            let mut expected = net.excess(&f, v).unwrap();
            if v == src && src != dst {
                expected -= &gamma;
            }
            if v == dst && src != dst {
                expected += &gamma;
            }
            prop_assert_eq!(net.excess(&g, v).unwrap(), expected);
        }
        let back = net.augment(&g, &gamma, &reverse_path(&path)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn projection_keeps_the_cheapest_residual_edge((net, f) in network_with_flow()) {
        let proj = project_residual(&net, &f, |_| true, false);
        for r in residual_edges(&net) {
            let (u, v) = (net.tail(r).unwrap(), net.head(r).unwrap());
            let open = net.residual_capacity(&f, r).unwrap().is_positive();
            if open && u != v {
                let w = proj.weight(u, v);
                prop_assert!(w <= &ExtRational::Finite(net.residual_cost(r).unwrap()));
                let chosen = proj.realizer(u, v).unwrap();
                prop_assert_eq!(ExtRational::Finite(net.residual_cost(chosen).unwrap()), w.clone());
            }
        }
        let rev = project_residual(&net, &f, |_| true, true);
        for u in net.vertices() {
            for v in net.vertices() {
                prop_assert_eq!(rev.weight(u, v), proj.weight(v, u));
            }
        }
    }

    #[test]
    fn cut_flow_equals_cut_balance((net, f) in network_with_flow(), mask in 0u32..32) {
        let inside = net.vertices().filter(|v| mask & (1 << v) != 0).collect();
        let cut = Cut { inside };
        let b: Vec<_> = net.vertices().map(|v| net.excess(&f, v).unwrap()).collect();
        let out: Rational = cut.out_edges(&net).iter().map(|&e| f[e].clone()).sum();
        let inn: Rational = cut.in_edges(&net).iter().map(|&e| f[e].clone()).sum();
        prop_assert_eq!(inn - out, cut.balance(&Balances(b)));
    }

    #[test]
    fn lift_and_restore_are_inverse((net, f) in network_with_flow()) {
        let b = Balances(net.vertices().map(|v| -net.excess(&f, v).unwrap()).collect());
        let red = reduce_to_uncapacitated(&net, &b).unwrap();
        let lifted = lift_flow(&red, &f).unwrap();
        prop_assert!(red.net.is_feasible(&lifted, &red.balances));
        prop_assert_eq!(red.net.flow_cost(&lifted), net.flow_cost(&f));
        prop_assert_eq!(&restore_flow(&red, &lifted).unwrap(), &f);
        prop_assert!(red.net.vertex_count() + red.net.edge_count() <= net.vertex_count() + 3 * net.edge_count());
    }

    #[test]
    fn instance_files_round_trip((net, f) in network_with_flow()) {
        let b = Balances(net.vertices().map(|v| -net.excess(&f, v).unwrap()).collect());
        let file = InstanceFile { net, balances: b, name: Some("p".into()), comments: Vec::new() };
        let text = render_instance(&file);
        prop_assert_eq!(parse_instance(&text).unwrap(), file);
    }
}

/// Circulations spanned by random cycles on a fixed vertex count.
fn circulation() -> impl Strategy<Value = (Network, Flow)> {
    prop::collection::vec((prop::collection::vec(0usize..5, 2..=5), 1i64..=4), 1..=3).prop_map(|cycles| {
        let mut edges = Vec::new();
        let mut g = Vec::new();
        for (mut verts, w) in cycles {
            verts.dedup();
            if verts.len() < 2 || verts[0] == *verts.last().unwrap() {
                continue;
            }
            let mut seen = std::collections::BTreeSet::new();
            if !verts.iter().all(|v| seen.insert(*v)) {
                continue;
            }
            for k in 0..verts.len() {
                edges.push((verts[k], verts[(k + 1) % verts.len()], ExtRational::Infinity, int(0)));
                g.push(int(w));
            }
        }
        (Network::new(5, edges).unwrap(), Flow(g))
    })
}

proptest! {
    #[test]
    fn decomposition_recomposes((net, g) in circulation()) {
        let d = decompose_circulation(&net, &g).unwrap();
        prop_assert_eq!(d.recompose(net.edge_count()), g);
        prop_assert!(d.cycles.iter().all(|(_, w)| w.is_integer()));
    }
}

/// Random balanced instances small enough for the oracle.
fn small_instance() -> impl Strategy<Value = (Network, Balances)> {
    (2usize..=4).prop_flat_map(|n| {
        let edges = prop::collection::vec((0..n, 0..n, 0i64..=3, 0i64..=4), 1..=5);
        let balances = prop::collection::vec(-2i64..=2, n - 1);
        (edges, balances).prop_map(move |(edges, mut bs)| {
            bs.push(-bs.iter().sum::<i64>());
            let net = Network::new(
                n,
                edges.into_iter().map(|(u, v, c, w)| (u, v, ExtRational::Finite(int(c)), int(w))),
            )
            .unwrap();
            (net, Balances(bs.into_iter().map(int).collect()))
        })
    })
}

proptest! {
    #[test]
    fn sequential_solvers_match_the_oracle((net, b) in small_instance()) {
        let oracle = brute_force_min_cost_flow(&net, &b, None).unwrap();
        for result in [solve_ssp(&net, &b).unwrap(), solve_scaling(&net, &b).unwrap()] {
            prop_assert_eq!(result.cost.as_ref(), oracle.cost());
            match result.status {
                SolveStatus::Success => {
                    let f = result.flow.unwrap();
                    prop_assert!(net.is_feasible(&f, &b));
                    prop_assert!(verify_optimal(&net, &f, &b));
                }
                SolveStatus::Infeasible => {
                    let w: std::collections::BTreeSet<_> = result.witness.unwrap().into_iter().collect();
                    let cut = Cut { inside: w.clone() };
                    // more supply inside the cut than can leave it
                    prop_assert!(cut.capacity(&net) < ExtRational::Finite(cut.balance(&b)));
                }
            }
        }
    }
}
