//! Randomised invariants over small cubes.

mod common;

use common::*;
use proptest::prelude::*;
use stlattice::concepts::{enumerate_slice_concepts, DEFAULT_ORACLE_BUDGET};
use stlattice::io::{export, export_axes, parse, AxisDecl, InputFormat};
use stlattice::rules::{confidence, support, Implication};
use stlattice::{
    build_lattice, check_isomorphic, enumerate_agro_triples, filter_rules, generate_rules,
    is_maximal_box, oracle_enumerate, AxisLabels, DataCube, DimSet, Fraction, LocSet, Orientation,
    RuleOptions, SupportDenominator, TimeSet,
};

fn cube_strategy(max_axis: usize) -> impl Strategy<Value = DataCube> {
    (1..=max_axis, 1..=max_axis, 1..=max_axis)
        .prop_flat_map(|(n, k, t)| {
            (
                Just((n, k, t)),
                proptest::collection::vec(any::<bool>(), n * k * t),
            )
        })
        .prop_map(|((n, k, t), cells)| {
            let facts = (0..n)
                .flat_map(|l| (0..k).flat_map(move |j| (0..t).map(move |s| (l, j, s))))
                .zip(cells)
                .filter(|(_, on)| *on)
                .map(|(f, _)| f);
            DataCube::from_facts(AxisLabels::numbered(n, k, t).unwrap(), facts).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_oracle(cube in cube_strategy(5)) {
        let fast = enumerate_agro_triples(&cube);
        let slow = oracle_enumerate(&cube, DEFAULT_ORACLE_BUDGET).unwrap();
        prop_assert_eq!(&fast, &slow);
        for t in &fast {
            prop_assert!(t.is_box_of(&cube));
            prop_assert!(is_maximal_box(&cube, t));
        }
    }

    #[test]
    fn orientation_invariance(cube in cube_strategy(5)) {
        let a = enumerate_agro_triples(&cube);
        let rotated = cube.reorient(Orientation::ByDimension);
        prop_assert_eq!(rotated.facts(), cube.facts());
        let b = enumerate_agro_triples(&rotated);
        prop_assert_eq!(&a, &b);
        prop_assert!(check_isomorphic(&build_lattice(&a), &build_lattice(&b)));
    }

    #[test]
    fn slice_concepts_are_closed_pairs(cube in cube_strategy(6), pick in any::<prop::sample::Index>()) {
        let t = pick.index(cube.n_times());
        let slice = cube.slice_at(t).unwrap();
        let facts = fact_set(&cube);
        let concepts = enumerate_slice_concepts(&slice);
        // Every closed location set with a non-empty intent appears exactly once.
        let mut closed_extents = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << cube.n_locs()) {
            let locs: Vec<usize> = (0..cube.n_locs()).filter(|l| mask & (1 << l) != 0).collect();
            let dims: Vec<usize> = (0..cube.n_dims())
                .filter(|&j| locs.iter().all(|&l| facts.contains(&(l, j, t))))
                .collect();
            let ext: Vec<usize> = (0..cube.n_locs())
                .filter(|&l| dims.iter().all(|&j| facts.contains(&(l, j, t))))
                .collect();
            if !ext.is_empty() && !dims.is_empty() {
                closed_extents.insert(ext);
            }
        }
        let got: std::collections::BTreeSet<Vec<usize>> = concepts.iter().map(|(e, _)| e.to_vec()).collect();
        prop_assert_eq!(got.len(), concepts.len());
        prop_assert_eq!(got, closed_extents);
        for (e, i) in &concepts {
            prop_assert_eq!(&slice.up(e), i);
            prop_assert_eq!(&slice.down(i), e);
        }
    }

    #[test]
    fn rule_invariants(cube in cube_strategy(5)) {
        let facts = fact_set(&cube);
        let triples = enumerate_agro_triples(&cube);
        let rules = generate_rules(&cube, &triples, &RuleOptions::default());
        let mut previous: Option<&Implication> = None;
        for r in &rules {
            if let Some(p) = previous {
                prop_assert!(p < &r.items, "rules not sorted and unique");
            }
            previous = Some(&r.items);
            let source = &triples.as_slice()[r.source_triple];
            prop_assert_eq!(r.items.itemset(), source.intent.clone());
            prop_assert_eq!(&r.items.times, &source.times);
            prop_assert_eq!(r.items.consequent.len(), 1);
            prop_assert!(!r.items.antecedent.is_empty());
            prop_assert!(r.items.antecedent.is_disjoint(&r.items.consequent));

            let itemset = r.items.itemset().to_vec();
            let times = r.items.times.to_vec();
            let both = ref_holders(&facts, cube.n_locs(), &itemset, &times);
            let body = ref_holders(&facts, cube.n_locs(), &r.items.antecedent.to_vec(), &times);
            prop_assert_eq!(r.support, Fraction::new(both, cube.n_locs() as u64));
            prop_assert_eq!(r.confidence, Fraction::new(both, body));
            prop_assert!(r.support <= Fraction::ONE && r.support > Fraction::ZERO);
            prop_assert!(r.confidence <= Fraction::ONE && r.confidence > Fraction::ZERO);
            prop_assert_eq!(support(&cube, &r.items, SupportDenominator::Dimensions),
                Fraction::new(both, cube.n_dims() as u64));
            prop_assert_eq!(confidence(&cube, &r.items).unwrap(), r.confidence);
        }
        prop_assert_eq!(filter_rules(&rules, Fraction::ZERO, Fraction::ZERO), rules.clone());
        let strict = filter_rules(&rules, Fraction::new(1, 2), Fraction::new(1, 2));
        let stricter = filter_rules(&rules, Fraction::new(3, 4), Fraction::new(3, 4));
        prop_assert!(stricter.iter().all(|r| strict.find(&r.items).is_some()));
    }

    #[test]
    fn target_filters(cube in cube_strategy(5), dim_pick in any::<prop::sample::Index>(), time_pick in any::<prop::sample::Index>()) {
        let triples = enumerate_agro_triples(&cube);
        let all = generate_rules(&cube, &triples, &RuleOptions::default());
        let d = dim_pick.index(cube.n_dims());
        let t = time_pick.index(cube.n_times());
        let opts = RuleOptions {
            target_dims: Some(DimSet::from_indices(cube.n_dims(), [d])),
            target_times: Some(TimeSet::from_indices(cube.n_times(), [t])),
            ..Default::default()
        };
        let narrowed = generate_rules(&cube, &triples, &opts);
        let expected: Vec<&Implication> = all
            .iter()
            .map(|r| &r.items)
            .filter(|i| i.consequent.contains(d) && i.times.contains(t))
            .collect();
        let got: Vec<&Implication> = narrowed.iter().map(|r| &r.items).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn ingest_round_trip(cube in cube_strategy(6)) {
        for format in [InputFormat::LongCsv, InputFormat::WideCsv, InputFormat::CubeJson] {
            let axes = AxisDecl::parse(&export_axes(&cube)).unwrap();
            let back = parse(&export(&cube, format), format, Some(axes)).unwrap();
            prop_assert_eq!(back.labels(), cube.labels());
            prop_assert_eq!(back.facts(), cube.facts());
        }
        // Wide and JSON layouts carry every axis member on their own.
        for format in [InputFormat::WideCsv, InputFormat::CubeJson] {
            let back = parse(&export(&cube, format), format, None).unwrap();
            prop_assert_eq!(back.facts(), cube.facts());
        }
    }

    #[test]
    fn box_closure_reaches_a_mined_triple(cube in cube_strategy(5), seed in any::<u64>()) {
        // Any full box extends to some maximal box in the mined set.
        let mut rng = rng(seed);
        let facts = cube.facts();
        prop_assume!(!facts.is_empty());
        let (l, j, t) = facts[rand::Rng::gen_range(&mut rng, 0..facts.len())];
        let mut locs = LocSet::from_indices(cube.n_locs(), [l]);
        let mut dims = DimSet::from_indices(cube.n_dims(), [j]);
        let mut times = TimeSet::from_indices(cube.n_times(), [t]);
        loop {
            let next_locs = cube.locs_with_box(&dims, &times);
            let next_dims = cube.dims_with_box(&next_locs, &times);
            let next_times = cube.times_with_box(&next_locs, &next_dims);
            if next_locs == locs && next_dims == dims && next_times == times {
                break;
            }
            (locs, dims, times) = (next_locs, next_dims, next_times);
        }
        let triple = stlattice::AgroTriple::new(locs, dims, times);
        prop_assert!(enumerate_agro_triples(&cube).contains(&triple));
    }
}
