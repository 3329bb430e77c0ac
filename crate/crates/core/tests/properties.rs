mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use cmmbp::formulation::Tag;
use cmmbp::solvers::{
    brute_force_solve_with, feasible_bisections, BranchAndBound, BruteForceOptions,
};
use cmmbp::{
    branch_and_bound_solve, brute_force_solve, build_certificate, build_model, check_assignment,
    decode_assignment, emit_lp, extend_graph, local_search_solve, parse_instance, parse_lp,
    random_instance, verify_lemma1, write_instance, EdgeKey, GeneratorConfig, Graph, Status,
    VariableId, VertexSet,
};

fn graph(max_half: usize) -> impl Strategy<Value = Graph> {
    (1..=max_half, 0.05f64..=1.0, 1usize..=3, any::<u64>()).prop_map(|(h, p, k, seed)| {
        random_instance(&GeneratorConfig {
            n: 2 * h,
            edge_probability: p,
            k,
            weight_range: (1, 20),
            seed,
        })
        .unwrap()
    })
}

fn graph_and_subset(max_half: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph(max_half).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), proptest::collection::vec(any::<bool>(), n)).prop_map(|(g, bits)| {
            let s = (1..=g.vertex_count()).filter(|&v| bits[v - 1]).collect();
            (g, s)
        })
    })
}

/// Independent connectivity check by union-find over the induced edges.
fn connected_by_union_find(g: &Graph, s: &VertexSet) -> bool {
    let mut parent: Vec<usize> = (0..=g.vertex_count()).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for e in g.edges() {
        if s.contains(&e.tail) && s.contains(&e.head) {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            parent[a] = b;
        }
    }
    let roots: VertexSet = s.iter().map(|&v| find(&mut parent, v)).collect();
    roots.len() == 1
}

fn complement(g: &Graph, s: &VertexSet) -> VertexSet {
    g.vertices().filter(|v| !s.contains(v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cut_is_symmetric((g, s) in graph_and_subset(8)) {
        let a = g.cut_weight(&s).unwrap();
        let b = g.cut_weight(&complement(&g, &s)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn weight_is_min_coordinate((g, s) in graph_and_subset(8)) {
        let r = g.cut_weight(&s).unwrap();
        prop_assert_eq!(r.coordinate_sums.len(), g.dimension());
        for &c in &r.coordinate_sums {
            prop_assert!(r.weight <= c);
        }
        if r.cut_edges.is_empty() {
            prop_assert_eq!(r.weight, 0.0);
        } else {
            prop_assert!(r.coordinate_sums.contains(&r.weight));
        }
    }

    #[test]
    fn single_coordinate_restriction((g, s) in graph_and_subset(8)) {
        let full = g.cut_weight(&s).unwrap();
        for l in 0..g.dimension() {
            let projected = Graph::new(
                g.vertex_count(),
                g.edges().iter().map(|e| (e.tail, e.head, vec![e.weight.values()[l]])),
            )
            .unwrap();
            let r = projected.cut_weight(&s).unwrap();
            prop_assert_eq!(r.cut_edges.clone(), full.cut_edges.clone());
            prop_assert_eq!(r.coordinate_sums[0], full.coordinate_sums[l]);
        }
    }

    #[test]
    fn instance_text_round_trip(g in graph(10)) {
        let text = write_instance(&g);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn lp_round_trip(g in graph(6)) {
        let model = build_model(&extend_graph(&g)).unwrap();
        let text = emit_lp(&model);
        let back = parse_lp(&text).unwrap();
        prop_assert_eq!(&back, &model);
        prop_assert_eq!(emit_lp(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn connectivity_matches_union_find((g, s) in graph_and_subset(8)) {
        match g.is_connected(&s) {
            Ok(c) => prop_assert_eq!(c, connected_by_union_find(&g, &s)),
            Err(_) => prop_assert!(s.is_empty()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_are_exact(g in graph(5), pick in any::<prop::sample::Index>()) {
        let feasible = feasible_bisections(&g).unwrap();
        prop_assume!(!feasible.is_empty());
        let b = pick.get(&feasible);
        let n = g.vertex_count();
        let half = (n / 2) as f64;
        let eg = extend_graph(&g);
        let model = build_model(&eg).unwrap();
        let cert = build_certificate(&eg, b).unwrap();
        let a = &cert.assignment;

        prop_assert!(check_assignment(&model, a, 0.0).unwrap().is_feasible());
        prop_assert!(verify_lemma1(&cert));
        let (decoded, cut) = decode_assignment(&model, a).unwrap();
        prop_assert!(decoded.same_partition(b));
        prop_assert_eq!(a.get(VariableId::Objective), Some(cut.weight));

        // both trees span their side: n/2 - 1 original edges plus one star edge
        prop_assert_eq!(cert.trees.0.len(), n / 2);
        prop_assert_eq!(cert.trees.1.len(), n / 2);
        let star_total: f64 = (1..=n).map(|v| a.get(VariableId::Flow(EdgeKey::star(v))).unwrap()).sum();
        prop_assert_eq!(star_total, n as f64);
        for (id, value) in a.iter() {
            if let VariableId::Flow(_) = id {
                prop_assert!(value.abs() <= half);
            }
        }

        // summing conservation rows over V1 telescopes to the root flow
        let p = cert.roots.0;
        let telescoped: f64 = b
            .side_one
            .iter()
            .map(|v| model.constraint(&format!("c17_{v}")).unwrap().lhs(a).unwrap())
            .sum();
        prop_assert_eq!(telescoped, a.get(VariableId::Flow(EdgeKey::star(p))).unwrap());
        prop_assert_eq!(telescoped, half);
    }

    #[test]
    fn flipping_one_member_is_caught(g in graph(5), pick in any::<prop::sample::Index>(), v in any::<prop::sample::Index>()) {
        let feasible = feasible_bisections(&g).unwrap();
        prop_assume!(!feasible.is_empty());
        let eg = extend_graph(&g);
        let model = build_model(&eg).unwrap();
        let mut a = build_certificate(&eg, pick.get(&feasible)).unwrap().assignment;
        let vertex = v.index(g.vertex_count()) + 1;
        let x = a.get(VariableId::Member(vertex)).unwrap();
        a.set(VariableId::Member(vertex), 1.0 - x);
        let report = check_assignment(&model, &a, 0.0).unwrap();
        prop_assert!(report.tags().contains(&Tag::Balance));
    }

    #[test]
    fn oracle_results_are_feasible(g in graph(5)) {
        let r = brute_force_solve(&g).unwrap();
        let feasible = feasible_bisections(&g).unwrap();
        match &r.best {
            Some(best) => {
                prop_assert_eq!(r.status, Status::Optimal);
                prop_assert!(g.is_feasible_bisection(&best.bisection));
                prop_assert_eq!(&g.cut_weight(&best.bisection.side_one).unwrap(), &best.cut);
                for b in &feasible {
                    prop_assert!(g.cut_weight(&b.side_one).unwrap().weight <= best.weight());
                }
            }
            None => {
                prop_assert_eq!(r.status, Status::Infeasible);
                prop_assert!(feasible.is_empty());
            }
        }
    }

    #[test]
    fn bnb_matches_oracle(g in graph(5)) {
        let oracle = brute_force_solve(&g).unwrap();
        let bnb = branch_and_bound_solve(&g, None).unwrap();
        prop_assert_eq!(bnb.status, oracle.status);
        prop_assert_eq!(bnb.weight(), oracle.weight());
        if let Some(best) = &bnb.best {
            prop_assert!(g.is_feasible_bisection(&best.bisection));
        }
    }

    #[test]
    fn bnb_bounds_are_valid(g in graph(4)) {
        // best feasible weight for every V1, keyed by membership of 1..=n
        let n = g.vertex_count();
        let completions: BTreeMap<Vec<bool>, f64> = feasible_bisections(&g)
            .unwrap()
            .into_iter()
            .map(|b| {
                let key = (1..=n).map(|v| b.side_one.contains(&v)).collect();
                (key, g.cut_weight(&b.side_one).unwrap().weight)
            })
            .collect();
        let mut violations = Vec::new();
        BranchAndBound::new(&g)
            .observe(|node| {
                let best = completions
                    .iter()
                    .filter(|(key, _)| {
                        (1..=n).all(|v| match node.sides[v] {
                            Some(side) => key[v - 1] == (side == cmmbp::graph::Side::One),
                            None => true,
                        })
                    })
                    .map(|(_, &w)| w)
                    .fold(f64::NEG_INFINITY, f64::max);
                if node.upper_bound < best {
                    violations.push((node.sides.to_vec(), node.upper_bound, best));
                }
            })
            .solve()
            .unwrap();
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }

    #[test]
    fn relaxation_dominates(g in graph(5)) {
        let relaxed = brute_force_solve_with(&g, BruteForceOptions { require_connectivity: false }).unwrap();
        prop_assert_eq!(relaxed.status, Status::Optimal);
        if let Some(w) = brute_force_solve(&g).unwrap().weight() {
            prop_assert!(w <= relaxed.weight().unwrap());
        }
    }

    #[test]
    fn local_search_is_sound(g in graph(5), seed in any::<u64>(), iterations in 0usize..30) {
        let oracle = brute_force_solve(&g).unwrap();
        let r = local_search_solve(&g, seed, iterations).unwrap();
        match &r.best {
            Some(best) => {
                prop_assert_eq!(r.status, Status::Feasible);
                prop_assert!(g.is_feasible_bisection(&best.bisection));
                prop_assert_eq!(&g.cut_weight(&best.bisection.side_one).unwrap(), &best.cut);
                prop_assert!(best.weight() <= oracle.weight().unwrap());
            }
            None => prop_assert_eq!(r.status, Status::Infeasible),
        }
    }
}
