use std::collections::BTreeSet;

use gapkit::gadgets::{
    build_gadget, dictator_cut, DictatorCut, EdgeParams, GadgetParams, Limits, MulticutParams, RmfcParams, VertexParams,
};
use gapkit::graph::shortest_distances;
use gapkit::scalar::ratio;
use gapkit::solution::distance_after;
use gapkit::ug::{
    compose, completeness_cut, decode_labeling, reachable_set_influences, identity_ug, synth_ug, Labeling, SynthMode, UgEdge,
    UniqueGamesInstance,
};
use gapkit::{Error, Rational};

fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

fn vertex(b: usize, big_r: usize) -> GadgetParams<Rational> {
    GadgetParams::Vertex(VertexParams { a: 4, b, r: 3, big_r, eps: q(1, 20) })
}

#[test]
fn identity_composition_matches_the_gadget() {
    let gadget = build_gadget::<Rational>(&vertex(4, 1), &Limits::default()).unwrap();
    let ug = identity_ug(1);
    let comp = compose(&ug, &gadget, &Limits::default()).unwrap();
    let (g0, g1) = (&gadget.instance.graph, &comp.instance.graph);
    assert_eq!(g0.node_count(), g1.node_count());
    for v in 0..g0.node_count() {
        assert_eq!(g0.node(v).weight, g1.node(v).weight, "node {v}");
    }
    let (s, t, ell) = gadget.instance.length_bound().unwrap();
    assert_eq!(comp.instance.length_bound().unwrap(), (s, t, ell));
    assert_eq!(shortest_distances(g0, s, None), shortest_distances(g1, s, None));

    let lab = Labeling { u: vec![0], w: vec![0] };
    let cert = completeness_cut(&comp, &ug, &lab, &[0].into_iter().collect()).unwrap();
    assert!(cert.passed(), "{cert:?}");
    assert_eq!(cert.cost, q(11, 6));
    assert_eq!(cert.eta, q(0, 1));
    let DictatorCut::Cut(raw) = dictator_cut(&gadget, 0).unwrap() else { panic!() };
    let DictatorCut::Cut(ours) = &cert.cut else { panic!() };
    assert_eq!(raw.elements, ours.elements);
    let dist = distance_after(g1, s, t, &ours.elements).unwrap();
    assert_eq!(dist, distance_after(g0, s, t, &raw.elements).unwrap());
    assert!(dist.at_least(12));
}

#[test]
fn planted_vertex_composition() {
    let gadget = build_gadget::<Rational>(&vertex(4, 2), &Limits::default()).unwrap();
    for seed in 0..3 {
        let syn = synth_ug(3, 3, 2, 2, SynthMode::Planted { eta: 0.0 }, seed).unwrap();
        assert_eq!(syn.w_prime.len(), 3);
        let lab = syn.labeling.clone().unwrap();
        assert_eq!(lab.satisfied_fraction(&syn.instance), q(1, 1));
        let comp = compose(&syn.instance, &gadget, &Limits::default()).unwrap();
        assert_eq!(comp.copies(), 3);
        let g = &comp.instance.graph;
        // node weights are divided by |W|, so the total is unchanged
        assert_eq!(g.total_weight(comp.instance.mode), gadget.total_weight());
        let cert = completeness_cut(&comp, &syn.instance, &lab, &syn.w_prime).unwrap();
        assert!(cert.passed(), "seed {seed}: {cert:?}");
        // (b+1)(eps + (1-eps)/r)
        assert_eq!(cert.bound, q(5, 1) * (q(1, 20) + q(19, 60)));
        assert!(cert.cost <= cert.bound);
        let (s, t, _) = comp.instance.length_bound().unwrap();
        let DictatorCut::Cut(sol) = &cert.cut else { panic!() };
        assert!(distance_after(g, s, t, &sol.elements).unwrap().at_least(12));
    }
}

#[test]
fn edge_weights_split_over_constraint_triples() {
    let p = GadgetParams::Edge(EdgeParams { a: 2, b: 2, r: 2, big_r: 2 });
    let gadget = build_gadget::<Rational>(&p, &Limits::default()).unwrap();
    let syn = synth_ug(2, 2, 2, 2, SynthMode::Planted { eta: 0.0 }, 5).unwrap();
    let comp = compose(&syn.instance, &gadget, &Limits::default()).unwrap();
    assert_eq!(comp.instance.graph.total_weight(comp.instance.mode), gadget.total_weight());
    // every merged cuttable weight is a multiple of wt / (|U| deg^2)
    let unit = q(1, 2 * 2 * 2);
    let finite: BTreeSet<Rational> = gadget
        .instance
        .graph
        .edges()
        .iter()
        .filter_map(|e| e.weight.finite().cloned())
        .collect();
    for e in comp.instance.graph.edges() {
        if let Some(w) = e.weight.finite() {
            assert!(finite.iter().any(|base| {
                let m = w.clone() / (base.clone() * unit.clone());
                m.is_integer()
            }), "{w}");
        }
    }
    let cert = completeness_cut(&comp, &syn.instance, syn.labeling.as_ref().unwrap(), &syn.w_prime).unwrap();
    assert!(cert.passed(), "{cert:?}");
}

#[test]
fn completeness_for_every_family() {
    let lim = Limits::default();
    let families: Vec<GadgetParams<Rational>> = vec![
        GadgetParams::Multicut(MulticutParams { r: 2, k: 2, big_r: 2, eps: q(1, 20) }),
        GadgetParams::Edge(EdgeParams { a: 2, b: 3, r: 2, big_r: 2 }),
        GadgetParams::Vertex(VertexParams { a: 2, b: 2, r: 2, big_r: 2, eps: q(1, 20) }),
        GadgetParams::Rmfc(RmfcParams { b: 2, big_r: 2, eps: q(1, 100) }),
    ];
    for p in families {
        let gadget = build_gadget(&p, &lim).unwrap();
        for eta in [0.0, 0.5] {
            let syn = synth_ug(2, 2, 2, 2, SynthMode::Planted { eta }, 11).unwrap();
            let comp = compose(&syn.instance, &gadget, &lim).unwrap();
            let cert = completeness_cut(&comp, &syn.instance, syn.labeling.as_ref().unwrap(), &syn.w_prime).unwrap();
            assert!(cert.passed(), "{p} eta {eta}: {cert:?}");
            assert_eq!(cert.eta, q(2 - syn.w_prime.len() as i64, 2));
        }
    }
}

#[test]
fn random_instances_are_not_satisfiable_by_accident() {
    let syn = synth_ug(6, 6, 3, 4, SynthMode::Random, 3).unwrap();
    assert!(syn.labeling.is_none());
    let ug = &syn.instance;
    assert_eq!((ug.degree_u(), ug.degree_w()), (3, 3));
    let mut best = q(0, 1);
    for lw in 0..4usize.pow(6) {
        let w: Vec<usize> = (0..6).map(|i| lw / 4usize.pow(i) % 4).collect();
        // each u takes its best label given w
        let u = (0..6)
            .map(|u| {
                (0..4)
                    .max_by_key(|&l| ug.edges.iter().filter(|e| e.u == u && e.perm[w[e.w]] == l).count())
                    .unwrap()
            })
            .collect();
        let frac = Labeling { u, w }.satisfied_fraction(ug);
        if frac > best {
            best = frac;
        }
    }
    assert!(best < q(1, 1), "{best}");
}

#[test]
fn influences_recover_the_planted_labels() {
    let gadget = build_gadget::<Rational>(&vertex(2, 2), &Limits::default()).unwrap();
    let syn = synth_ug(2, 2, 2, 2, SynthMode::Planted { eta: 0.0 }, 4).unwrap();
    let lab = syn.labeling.clone().unwrap();
    let comp = compose(&syn.instance, &gadget, &Limits::default()).unwrap();
    let cert = completeness_cut(&comp, &syn.instance, &lab, &syn.w_prime).unwrap();
    let DictatorCut::Cut(sol) = &cert.cut else { panic!() };
    let report = reachable_set_influences(&comp.instance, &comp.layout, &comp.space, &sol.elements, 2, &q(1, 100)).unwrap();
    assert!(!report.flagged().is_empty());
    let decoded = decode_labeling(&syn.instance, &comp, &report);
    assert_eq!(decoded.w, lab.w);
    assert_eq!(decoded.satisfied_fraction(&syn.instance), q(1, 1));
}

#[test]
fn errors() {
    assert!(matches!(synth_ug(3, 2, 1, 2, SynthMode::Random, 0), Err(Error::InfeasibleDegrees(_))));
    assert!(matches!(synth_ug(2, 2, 3, 2, SynthMode::Random, 0), Err(Error::InfeasibleDegrees(_))));
    let gadget = build_gadget::<Rational>(&vertex(2, 2), &Limits::default()).unwrap();
    let syn = synth_ug(2, 2, 2, 2, SynthMode::Planted { eta: 0.0 }, 9).unwrap();
    let comp = compose(&syn.instance, &gadget, &Limits::default()).unwrap();
    let mut lab = syn.labeling.clone().unwrap();
    lab.w[0] = 1 - lab.w[0];
    assert!(matches!(
        completeness_cut(&comp, &syn.instance, &lab, &syn.w_prime),
        Err(Error::LabelingNotPerfectOnWPrime { .. })
    ));
    let bad = UniqueGamesInstance::new(
        vec!["u".into()],
        vec!["w".into()],
        2,
        vec![UgEdge { u: 0, w: 0, perm: vec![0, 0] }],
    );
    assert!(bad.is_err());
}
