use popmatch::certificate::{
    build_clone_graph, build_dual_witness, check_dual, max_weight_complete_matching, realize_matching, untight_edges,
    verify_popular, Verdict,
};
use popmatch::instance::{
    is_pairwise_stable, max_matching_size, parse_instance, random_instance, write_instance, RawInstance,
};
use popmatch::oracle::{enumerate_matchings, spectrum_of, EnumerationBudget, MatchingSpace};
use popmatch::solvers::{max_size_popular, stable_matching, LevelMatching};
use popmatch::votes::{big_delta, compare_sets, delta_u, delta_u_bruteforce, Candidate};
use popmatch::{Instance, VertexId};
use proptest::prelude::*;

/// Small random instance with at most `max_edges` edges.
fn small(max_cap: u32, max_edges: usize) -> impl Strategy<Value = Instance> {
    (1usize..=4, 1usize..=4, 1u32..=max_cap, 0.1f64..=1.0, any::<u64>())
        .prop_map(|(s, c, cap, d, seed)| random_instance(s, c, cap, d, seed))
        .prop_filter("too many edges", move |inst| inst.num_edges() <= max_edges)
}

/// One vertex with `degree` neighbors, capacity `cap`, and two sets within capacity.
fn set_pair() -> impl Strategy<Value = (Instance, Vec<usize>, Vec<usize>)> {
    (1usize..=9)
        .prop_flat_map(|d| {
            (
                Just(d),
                1usize..=d.min(7),
                Just((0..d).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_flat_map(|(d, cap, prefs)| {
            let set = proptest::sample::subsequence((0..d).collect::<Vec<_>>(), 0..=cap).prop_shuffle();
            (Just((d, cap, prefs)), set.clone(), set)
        })
        .prop_map(|((d, cap, prefs), s0, s1)| {
            let raw = RawInstance {
                students: vec!["u".into()],
                courses: (0..d).map(|i| format!("c{i}")).collect(),
                student_caps: vec![cap as i64],
                course_caps: vec![1; d],
                student_prefs: vec![prefs],
                course_prefs: vec![vec![0]; d],
            };
            (Instance::from_raw(raw).unwrap(), s0, s1)
        })
}

const U: VertexId = VertexId {
    side: popmatch::Side::Student,
    index: 0,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn delta_matches_bruteforce((inst, s0, s1) in set_pair()) {
        let cmp = compare_sets(&inst, U, &s0, &s1).unwrap();
        let k = cmp.k() as i32;
        prop_assert_eq!(cmp.score, delta_u_bruteforce(&inst, U, &s0, &s1).unwrap());
        prop_assert!(cmp.score.abs() <= k);
        prop_assert_eq!((cmp.score - k).rem_euclid(2), 0);
        prop_assert!(!cmp.s0.iter().zip(&cmp.pairing).any(|(a, &j)| *a == Candidate::Null && cmp.s1[j] == Candidate::Null));
        prop_assert!(cmp.score + delta_u(&inst, U, &s1, &s0).unwrap() <= 0);
    }

    #[test]
    fn instance_text_round_trip(inst in small(3, 16)) {
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(back.to_raw(), inst.to_raw());
    }

    #[test]
    fn matching_sizes(inst in small(2, 12)) {
        let all = enumerate_matchings(&inst, &EnumerationBudget::default()).unwrap();
        let brute = all.iter().map(|m| m.len()).max().unwrap();
        let mmax = max_matching_size(&inst);
        prop_assert_eq!(mmax, brute);
        let stable = stable_matching(&inst);
        prop_assert!(is_pairwise_stable(&inst, &stable).unwrap().0);
        prop_assert!(2 * stable.len() >= mmax);
        let m0 = max_size_popular(&inst).into_projection();
        prop_assert!(stable.len() <= m0.len());
        prop_assert!(3 * m0.len() >= 2 * mmax);
    }

    #[test]
    fn unit_capacities_make_delta_antisymmetric(inst in small(1, 12)) {
        let all = enumerate_matchings(&inst, &EnumerationBudget::default()).unwrap();
        for (i, m0) in all.iter().enumerate().step_by(3) {
            for m1 in all.iter().skip(i).step_by(2) {
                prop_assert_eq!(big_delta(&inst, m0, m1).unwrap(), -big_delta(&inst, m1, m0).unwrap());
            }
        }
    }

    #[test]
    fn clone_graph_weights(inst in small(3, 12), pick in any::<prop::sample::Index>()) {
        let all = enumerate_matchings(&inst, &EnumerationBudget::default()).unwrap();
        let n = &all[pick.index(all.len())];
        let cg = build_clone_graph(&inst, n).unwrap();
        prop_assert_eq!(cg.n_star().weight(&cg), 0);
        let (_, blocking) = is_pairwise_stable(&inst, n).unwrap();
        for e in inst.edges() {
            let sa = cg.clones_of(VertexId::student(e.student));
            let plus_two = cg
                .edges()
                .iter()
                .any(|ce| sa.contains(&ce.student) && cg.origin(ce.course).index == e.course && ce.weight == 2);
            let blocks = blocking.iter().any(|b| (b.student, b.course) == (e.student, e.course));
            prop_assert_eq!(plus_two, blocks);
        }
        prop_assert!(cg.edges().iter().all(|e| [-2, 0, 2].contains(&e.weight)));
        for t in all.iter().step_by(5) {
            let tstar = realize_matching(&cg, t).unwrap();
            prop_assert_eq!(tstar.weight(&cg), -big_delta(&inst, n, t).unwrap());
        }
    }

    #[test]
    fn certificate_agrees_with_oracle(inst in small(2, 10)) {
        let space = MatchingSpace::new(&inst, &EnumerationBudget::default()).unwrap();
        let (popular, weak) = space.classify();
        for i in 0..space.len() {
            prop_assert!(!popular[i] || weak[i]);
            let n = space.matching(i);
            let cg = build_clone_graph(&inst, &n).unwrap();
            let sol = max_weight_complete_matching(&cg);
            prop_assert_eq!(sol.matching.weight(&cg), sol.value);
            let dual = popmatch::certificate::DualWitness { alpha: sol.alpha.clone(), partition: None };
            let check = check_dual(&cg, &dual).unwrap();
            prop_assert!(check.feasible);
            prop_assert_eq!(check.objective, sol.value);
            match verify_popular(&inst, &n).unwrap() {
                Verdict::Popular { .. } => prop_assert!(popular[i]),
                Verdict::NotPopular { delta, witness, .. } => {
                    prop_assert!(!popular[i]);
                    prop_assert_eq!(delta, big_delta(&inst, &n, &witness).unwrap());
                }
                Verdict::Inconclusive { .. } => {}
            }
            if !popular[i] {
                prop_assert!(sol.value > 0);
            }
        }
    }

    #[test]
    fn level_output_structure(inst in small(3, 14)) {
        let lm = max_size_popular(&inst);
        let rebuilt = LevelMatching::from_edges(&inst, lm.edges().iter().copied()).unwrap();
        prop_assert_eq!(&rebuilt, &lm);
        let m0 = lm.projection();
        let cg = build_clone_graph(&inst, m0).unwrap();
        let w = build_dual_witness(&inst, &lm).unwrap();
        let check = check_dual(&cg, &w).unwrap();
        prop_assert!(check.feasible, "{:?}", check.violated);
        prop_assert_eq!(check.objective, 0);
        prop_assert!(untight_edges(&cg, &w, &cg.n_star()).is_empty());
        if let Some(len) = cg.shortest_augmenting_path() {
            prop_assert!(len >= 5, "augmenting path of length {}", len);
        }
    }

    #[test]
    fn popular_matchings_share_degrees(inst in small(2, 12)) {
        let space = MatchingSpace::new(&inst, &EnumerationBudget::default()).unwrap();
        let spectrum = spectrum_of(&space).unwrap();
        let m0 = max_size_popular(&inst).into_projection();
        prop_assert_eq!(m0.len(), spectrum.max_popular);
        prop_assert_eq!(m0.len(), spectrum.max_weakly_popular);
        prop_assert_eq!(stable_matching(&inst).len(), spectrum.min_weakly_popular);
        for m in &spectrum.all_max_popular {
            prop_assert_eq!(m.degree_profile(), m0.degree_profile());
        }
    }
}
