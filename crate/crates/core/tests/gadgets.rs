use gapkit::gadgets::{
    build_gadget, build_saks_gap, dictator_cut, harmonic_thresholds, verify_completeness, DictatorCut, EdgeParams,
    GadgetParams, Limits, MulticutParams, RmfcParams, VertexParams,
};
use gapkit::graph::Distance;
use gapkit::scalar::ratio;
use gapkit::solution::distance_after;
use gapkit::{CutMode, Error, Rational};

fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

fn limits() -> Limits {
    Limits::default()
}

#[test]
fn saks_sizes() {
    let g = build_saks_gap::<Rational>(3, 2, &limits()).unwrap();
    assert_eq!(g.instance.graph.node_count(), 13);
    assert_eq!(g.instance.mode, CutMode::Vertex);
}

#[test]
fn dict_e_weight_sums_to_b() {
    let p = GadgetParams::Edge(EdgeParams { a: 4, b: 3, r: 2, big_r: 1 });
    let g = build_gadget::<Rational>(&p, &limits()).unwrap();
    assert_eq!(g.total_weight(), q(3, 1));
}

#[test]
fn multicut_dictator_cut_disconnects() {
    for (r, k, big_r) in [(2, 2, 1), (3, 2, 1), (2, 2, 2)] {
        let p = GadgetParams::Multicut(MulticutParams { r, k, big_r, eps: q(1, 20) });
        let g = build_gadget::<Rational>(&p, &limits()).unwrap();
        for coord in 0..big_r {
            let (cut, check) = verify_completeness(&g, coord).unwrap();
            assert!(check.passed(), "{p} q={coord}: {check:?}");
            let DictatorCut::Cut(sol) = cut else { panic!() };
            // r^k (eps + (1 - eps)/r)
            let rk = (r as i64).pow(k as u32);
            assert_eq!(sol.cost, q(rk, 1) * (q(1, 20) + q(19, 20) / q(r as i64, 1)));
        }
    }
    let p = GadgetParams::Multicut(MulticutParams { r: 2, k: 2, big_r: 1, eps: q(1, 20) });
    let g = build_gadget::<Rational>(&p, &limits()).unwrap();
    let DictatorCut::Cut(sol) = dictator_cut(&g, 0).unwrap() else { panic!() };
    assert_eq!(sol.cost, q(21, 10));
}

#[test]
fn edge_dictator_cut_keeps_paths_long() {
    for (a, b, r, need) in [(4u64, 3, 2, 8u64), (4, 5, 3, 12)] {
        let p = GadgetParams::Edge(EdgeParams { a, b, r, big_r: 1 });
        let g = build_gadget::<Rational>(&p, &limits()).unwrap();
        let (cut, check) = verify_completeness(&g, 0).unwrap();
        assert!(check.passed(), "{p}: {check:?}");
        let DictatorCut::Cut(sol) = cut else { panic!() };
        let (s, t, _) = g.instance.length_bound().unwrap();
        assert!(distance_after(&g.instance.graph, s, t, &sol.elements).unwrap().at_least(need));
        assert!(sol.cost <= q(2 * b as i64, r as i64));
    }
    // b (2(r-1)/r^2 + 1/r^3) for (4, 3, 2, 1)
    let p = GadgetParams::Edge(EdgeParams { a: 4, b: 3, r: 2, big_r: 1 });
    let g = build_gadget::<Rational>(&p, &limits()).unwrap();
    let DictatorCut::Cut(sol) = dictator_cut(&g, 0).unwrap() else { panic!() };
    assert_eq!(sol.cost, q(15, 8));
}

#[test]
fn vertex_dictator_cut_value() {
    let p = GadgetParams::Vertex(VertexParams { a: 4, b: 4, r: 3, big_r: 1, eps: q(1, 20) });
    let g = build_gadget::<Rational>(&p, &limits()).unwrap();
    let (cut, check) = verify_completeness(&g, 0).unwrap();
    assert!(check.passed(), "{check:?}");
    let DictatorCut::Cut(sol) = cut else { panic!() };
    assert_eq!(sol.cost, q(11, 6));
    let (s, t, _) = g.instance.length_bound().unwrap();
    assert!(distance_after(&g.instance.graph, s, t, &sol.elements).unwrap().at_least(12));
}

#[test]
fn removing_one_dictator_vertex_breaks_completeness() {
    let p = GadgetParams::Vertex(VertexParams { a: 4, b: 4, r: 3, big_r: 1, eps: q(1, 20) });
    let g = build_gadget::<Rational>(&p, &limits()).unwrap();
    let DictatorCut::Cut(mut sol) = dictator_cut(&g, 0).unwrap() else { panic!() };
    let first = *sol.elements.iter().next().unwrap();
    sol.elements.remove(&first);
    let sol = gapkit::CutSolution::priced(&g.instance.graph, sol.elements).unwrap();
    let check = gapkit::gadgets::check_completeness(&g, &g.instance, &DictatorCut::Cut(sol)).unwrap();
    assert!(!check.passed());
}

#[test]
fn rmfc_harmonic_schedule() {
    assert_eq!(harmonic_thresholds(2), vec![0, 4, 6]);
    let p = GadgetParams::Rmfc(RmfcParams { b: 2, big_r: 1, eps: q(1, 100) });
    let g = build_gadget::<Rational>(&p, &limits()).unwrap();
    let (cut, check) = verify_completeness(&g, 0).unwrap();
    assert!(check.passed(), "{check:?}");
    assert_eq!(check.bound, q(1, 50) + q(2, 3));
    let DictatorCut::Schedule(s) = cut else { panic!() };
    assert_eq!(s.per_day_cost, vec![q(67, 100), q(68, 100)]);
}

#[test]
fn float_gadgets_agree_with_rationals() {
    let p = GadgetParams::Vertex(VertexParams { a: 4, b: 4, r: 3, big_r: 1, eps: 0.05f64 });
    let g = build_gadget::<f64>(&p, &limits()).unwrap();
    let (_, check) = verify_completeness(&g, 0).unwrap();
    assert!(check.passed());
    assert!((check.cost - 11.0 / 6.0).abs() < 1e-9);
}

#[test]
fn parameter_errors() {
    let p = GadgetParams::<Rational>::Saks(gapkit::gadgets::SaksParams { r: 1, k: 2 });
    assert!(matches!(build_gadget(&p, &limits()), Err(Error::ParamOutOfRange(_))));
    let p = GadgetParams::Vertex(VertexParams { a: 4, b: 4, r: 3, big_r: 1, eps: q(1, 20) });
    let g = build_gadget::<Rational>(&p, &limits()).unwrap();
    assert!(matches!(dictator_cut(&g, 1), Err(Error::CoordinateOutOfRange(1))));
    let big = GadgetParams::Vertex(VertexParams { a: 4, b: 4, r: 3, big_r: 12, eps: q(1, 20) });
    assert!(matches!(build_gadget::<Rational>(&big, &limits()), Err(Error::SizeGuard { .. })));
}

#[test]
fn uncut_gadgets_have_short_paths() {
    let p = GadgetParams::Vertex(VertexParams { a: 4, b: 4, r: 3, big_r: 1, eps: q(1, 20) });
    let g = build_gadget::<Rational>(&p, &limits()).unwrap();
    let (s, t, bound) = g.instance.length_bound().unwrap();
    let d = distance_after(&g.instance.graph, s, t, &Default::default()).unwrap();
    assert!(matches!(d, Distance::Finite(x) if x < bound));
}
