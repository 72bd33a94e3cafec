use std::collections::BTreeSet;

use gapkit::exact::{brute_force_cut, exact_interdiction, exact_min_length_bounded_cut};
use gapkit::gadgets::{build_gadget, GadgetParams, Limits, VertexParams};
use gapkit::graph::min_st_cut;
use gapkit::io::{instance_from_json, instance_to_json};
use gapkit::prob::{efron_stein_parts, FiniteProbSpace, ProductFunction};
use gapkit::random::{random_instance, RandomKind, RandomSpec};
use gapkit::scalar::ratio;
use gapkit::ug::{compose, synth_ug, SynthMode};
use gapkit::{CutInstance, CutMode, Error, Problem, Rational};
use proptest::prelude::*;

fn mode() -> impl Strategy<Value = CutMode> {
    prop_oneof![Just(CutMode::Vertex), Just(CutMode::Edge)]
}

fn kind() -> impl Strategy<Value = RandomKind> {
    prop_oneof![Just(RandomKind::Multicut), Just(RandomKind::Bicut), Just(RandomKind::LengthBound)]
}

fn instance(kind: RandomKind, mode: CutMode, seed: u64) -> CutInstance<Rational> {
    random_instance(RandomSpec { kind, mode, max_cuttable: 8 }, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cost_is_the_sum_of_weights(k in kind(), m in mode(), seed in any::<u64>(), mask in any::<u32>()) {
        let inst = instance(k, m, seed);
        let space = inst.space();
        let chosen: BTreeSet<_> = (0..space.len()).filter(|i| mask >> i & 1 == 1).map(|i| space.element(i)).collect();
        let expected: Rational = chosen.iter().map(|&el| inst.graph.weight_of(el).finite().unwrap().clone()).sum();
        prop_assert_eq!(inst.graph.cost_of(&chosen).unwrap(), expected);
    }

    #[test]
    fn min_st_cut_matches_enumeration(m in mode(), seed in any::<u64>()) {
        let base = instance(RandomKind::LengthBound, m, seed);
        let inst = CutInstance::new(base.graph.clone(), m, Problem::Multicut { pairs: vec![(0, 1)] }).unwrap();
        let flow = min_st_cut(&inst.graph, 0, 1, m);
        let brute = brute_force_cut(&inst, None);
        match (flow, brute) {
            (Ok((cost, set)), Ok(best)) => {
                prop_assert_eq!(&cost, &best.cost);
                prop_assert_eq!(inst.graph.cost_of(&set).unwrap(), cost);
            }
            (Err(Error::NoFiniteCut(_)), Err(Error::Infeasible(_))) => {}
            (a, b) => prop_assert!(false, "flow {:?} vs enumeration {:?}", a.map(|x| x.0), b.map(|x| x.cost)),
        }
    }

    #[test]
    fn length_bounded_cut_is_monotone_in_the_bound(m in mode(), seed in any::<u64>()) {
        let inst = instance(RandomKind::LengthBound, m, seed);
        let mut last: Option<Rational> = Some(ratio(0, 1));
        for bound in 1..=8 {
            let cost = match exact_min_length_bounded_cut(&inst, bound) {
                Ok(sol) => Some(sol.cost),
                Err(Error::Infeasible(_)) => None,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            match (&last, &cost) {
                (Some(a), Some(b)) => prop_assert!(a <= b),
                (None, Some(_)) => prop_assert!(false, "feasible again at bound {}", bound),
                _ => {}
            }
            last = cost;
        }
    }

    #[test]
    fn interdiction_is_monotone_in_the_budget(m in mode(), seed in any::<u64>()) {
        let inst = instance(RandomKind::LengthBound, m, seed);
        let mut last = None;
        for twice in 0..=12 {
            let (dist, cut) = exact_interdiction(&inst, &ratio(twice, 2)).unwrap();
            prop_assert!(cut.verified);
            if let Some(prev) = last {
                prop_assert!(prev <= dist);
            }
            last = Some(dist);
        }
    }

    #[test]
    fn efron_stein_parts_sum_to_the_second_moment(
        n in 2usize..=3,
        r in 1usize..=3,
        star in any::<bool>(),
        raw in prop::collection::vec(0i64..=6, 64),
    ) {
        let base = if star {
            FiniteProbSpace::star(n, 0, &ratio(1, 7)).unwrap()
        } else {
            FiniteProbSpace::uniform(n).unwrap()
        };
        let size = base.len().pow(r as u32);
        let values: Vec<Rational> = raw[..size].iter().map(|&v| ratio(v, 6)).collect();
        let f = ProductFunction::new(base, r, values).unwrap();
        let second: Rational = f
            .values()
            .iter()
            .zip(f.base().product_table(r))
            .map(|(v, p)| v.clone() * v.clone() * p)
            .sum();
        prop_assert_eq!(efron_stein_parts(&f).unwrap().total(), second);
    }

    #[test]
    fn instance_json_round_trips(k in kind(), m in mode(), seed in any::<u64>()) {
        let inst = instance(k, m, seed);
        let text = serde_json::to_string(&instance_to_json(&inst, None)).unwrap();
        let back = instance_from_json::<Rational>(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, inst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn composition_preserves_total_weight(seed in any::<u64>(), n in 1usize..=3, eta in 0usize..2) {
        let p = GadgetParams::Vertex(VertexParams { a: 2, b: 2, r: 2, big_r: 2, eps: ratio(1, 20) });
        let gadget = build_gadget::<Rational>(&p, &Limits::default()).unwrap();
        let syn = synth_ug(n, n, 1, 2, SynthMode::Planted { eta: eta as f64 / 2.0 }, seed).unwrap();
        let comp = compose(&syn.instance, &gadget, &Limits::default()).unwrap();
        prop_assert_eq!(comp.instance.graph.total_weight(comp.instance.mode), gadget.total_weight());
    }
}
