use proptest::prelude::*;

use wdm_core::bounds::{audit, SeedFacts};
use wdm_core::cascade::{greedy_cascade, processing_time_range, verify_wdm_partition};
use wdm_core::graph::{random_graph, Graph, Thresholds};
use wdm_core::io::{emit_graph, emit_minrep, parse_graph, parse_minrep, GraphFile};
use wdm_core::reduction::{
    extract_solution, lift_solution, random_minrep, reduce_to_wdm, solve_minrep_bruteforce,
    verify_minrep,
};
use wdm_core::solvers::{min_dyn, min_mono, min_wdm, SolveOptions};

fn graph_and_tau() -> impl Strategy<Value = (Graph, Thresholds)> {
    (1usize..=9, 0.0f64..=1.0, any::<u64>(), any::<u64>()).prop_map(|(n, p, gs, ts)| {
        let g = random_graph(n, p, gs).unwrap();
        let mut x = ts;
        let tau = (0..n)
            .map(|v| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                1 + (x >> 33) as u32 % g.degree(v).max(1) as u32
            })
            .collect();
        let tau = Thresholds::explicit(&g, tau).unwrap();
        (g, tau)
    })
}

fn count_in(g: &Graph, v: usize, layer: &[usize]) -> u32 {
    layer.iter().filter(|&&u| g.has_edge(u, v)).count() as u32
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_round_trip((g, tau) in graph_and_tau()) {
        let f = GraphFile::new(g.clone(), Some(tau.clone())).named("sample");
        let text = emit_graph(&f);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back.graph, &g);
        prop_assert_eq!(back.tau.as_ref().map(|t| t.as_slice().to_vec()), Some(tau.as_slice().to_vec()));
        prop_assert_eq!(back.name.as_deref(), Some("sample"));
        prop_assert_eq!(emit_graph(&back), text);
    }

    #[test]
    fn greedy_layers_fire_at_first_opportunity((g, tau) in graph_and_tau(), seed_bits in any::<u16>()) {
        let seed: Vec<usize> = (0..g.n()).filter(|&v| seed_bits >> v & 1 == 1).collect();
        prop_assume!(!seed.is_empty());
        let out = greedy_cascade(&g, &tau, &seed).unwrap();
        let layers = out.partition.layers();
        for (i, layer) in layers.iter().enumerate().skip(1) {
            for &v in layer {
                prop_assert!(count_in(&g, v, &layers[i - 1]) >= tau.get(v));
                for earlier in &layers[..i - 1] {
                    prop_assert!(count_in(&g, v, earlier) < tau.get(v));
                }
            }
        }
        for &v in &out.unactivated {
            for layer in layers {
                prop_assert!(count_in(&g, v, layer) < tau.get(v));
            }
        }
        if out.complete {
            prop_assert!(verify_wdm_partition(&g, &tau, &out.partition).is_ok());
            let r = processing_time_range(&g, &tau, &seed).unwrap().unwrap();
            prop_assert!(r.t_min <= out.partition.t() && out.partition.t() <= r.t_max);
        }
    }

    #[test]
    fn minimum_sizes_are_ordered((g, tau) in graph_and_tau()) {
        let d = min_dyn(&g, &tau).unwrap();
        let w = min_wdm(&g, &tau).unwrap();
        let m = min_mono(&g, &tau).unwrap();
        prop_assert!(d.size <= w.size && w.size <= m.size);
        let p = w.partition.unwrap();
        prop_assert!(verify_wdm_partition(&g, &tau, &p).is_ok());
        prop_assert_eq!(p.seed(), w.witness.as_slice());
    }

    #[test]
    fn audit_never_reports_a_violation((g, tau) in graph_and_tau()) {
        let facts = SeedFacts::minimum(&g, &tau, &SolveOptions::default()).unwrap();
        let report = audit(&g, &tau, Some(&facts));
        prop_assert!(report.is_ok(), "{:?}", report.err());
        prop_assert!(report.unwrap().violations().is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn minrep_text_round_trip(seed in any::<u64>()) {
        let inst = random_minrep(4, seed).unwrap();
        let text = emit_minrep(&inst);
        let back = parse_minrep(&text).unwrap();
        prop_assert_eq!(emit_minrep(&back), text);
        prop_assert_eq!(back.edges(), inst.edges());
    }

    #[test]
    fn reduction_round_trip(seed in 0u64..1000) {
        let inst = random_minrep(3, seed).unwrap();
        let red = reduce_to_wdm(&inst).unwrap();
        prop_assert!(red.audit_structure().is_ok());
        let opt = solve_minrep_bruteforce(&inst).unwrap();
        let lift = lift_solution(&red, &opt).unwrap();
        prop_assert!(lift.outcome.complete);
        prop_assert_eq!(lift.seed.len(), opt.size());
        let back = extract_solution(&red, &lift.seed, &lift.outcome.partition).unwrap();
        prop_assert!(verify_minrep(&inst, &back));
        prop_assert!(back.size() <= 2 * opt.size());
    }
}
