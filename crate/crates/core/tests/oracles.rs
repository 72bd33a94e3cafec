use std::collections::BTreeSet;

use gapkit::approx::{bicut_2approx, threshold_round_lbc, trivial_multicut};
use gapkit::exact::{
    brute_force_cut, brute_force_interdiction, exact_interdiction, exact_min_length_bounded_cut, exact_min_multicut,
    exact_rmfc_decision,
};
use gapkit::lp::{multicut_lp, short_path_cover_lp, simplex_solve, LpProblem};
use gapkit::random::{random_instance, random_suite, RandomKind, RandomSpec};
use gapkit::scalar::ratio;
use gapkit::solution::is_feasible_cut;
use gapkit::{CutInstance, CutMode, Element, Error, NodeId, Problem, Rational, Weight, WeightedGraph};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

fn is_infeasible<T>(r: &Result<T, Error>) -> bool {
    matches!(r, Err(Error::Infeasible(_)))
}

#[test]
fn branch_and_bound_matches_subset_enumeration() {
    let suite = random_suite::<Rational>(300, 11).unwrap();
    let mut compared = 0;
    for (spec, inst) in &suite {
        assert!(inst.space().len() <= 10);
        match spec.kind {
            RandomKind::Multicut | RandomKind::Bicut => {
                let bb = exact_min_multicut(inst);
                let bf = brute_force_cut(inst, None);
                if is_infeasible(&bf) {
                    assert!(is_infeasible(&bb));
                    continue;
                }
                let (bb, bf) = (bb.unwrap(), bf.unwrap());
                assert_eq!(bb.cost, bf.cost);
                assert!(bb.verified && is_feasible_cut(inst, &bb.elements).unwrap());
                let lp = multicut_lp(inst).unwrap();
                assert!(lp.value <= bb.cost);
            }
            RandomKind::LengthBound => {
                let (_, _, bound) = inst.length_bound().unwrap();
                let bb = exact_min_length_bounded_cut(inst, bound);
                let bf = brute_force_cut(inst, Some(bound));
                if is_infeasible(&bf) {
                    assert!(is_infeasible(&bb));
                } else {
                    let (bb, bf) = (bb.unwrap(), bf.unwrap());
                    assert_eq!(bb.cost, bf.cost);
                    assert!(bb.verified);
                    let lp = short_path_cover_lp(inst, bound).unwrap();
                    assert!(lp.value <= bb.cost);
                }
                for budget in [q(0, 1), q(1, 1), q(5, 2), q(6, 1)] {
                    let (d, cut) = exact_interdiction(inst, &budget).unwrap();
                    assert_eq!(d, brute_force_interdiction(inst, &budget).unwrap());
                    assert!(cut.verified && cut.cost <= budget);
                }
            }
        }
        compared += 1;
    }
    assert!(compared >= 200, "only {compared} feasible instances");
}

#[test]
fn approximation_ratios_hold() {
    for (spec, inst) in random_suite::<Rational>(240, 5).unwrap() {
        match spec.kind {
            RandomKind::Multicut | RandomKind::Bicut => {
                let Ok(opt) = exact_min_multicut(&inst) else { continue };
                let k = inst.pairs().unwrap().len() as i64;
                let triv = trivial_multicut(&inst).unwrap();
                assert!(triv.verified && is_feasible_cut(&inst, &triv.elements).unwrap());
                assert!(triv.cost <= q(k, 1) * opt.cost.clone());
                if spec.kind == RandomKind::Bicut {
                    let bi = bicut_2approx(&inst).unwrap();
                    assert!(bi.verified);
                    assert!(bi.cost <= q(2, 1) * opt.cost);
                }
            }
            RandomKind::LengthBound => {
                let (_, _, bound) = inst.length_bound().unwrap();
                let Ok(lp) = short_path_cover_lp(&inst, bound) else { continue };
                let sol = threshold_round_lbc(&inst, bound, &lp.x).unwrap();
                assert!(is_feasible_cut(&inst, &sol.elements).unwrap());
                assert!(sol.cost <= q(bound.saturating_sub(1).max(1) as i64, 1) * lp.value);
            }
        }
    }
}

/// Every simple `s`-`t` path with length `< bound`, as sets of LP variables.
fn simple_paths(inst: &CutInstance<Rational>, s: NodeId, t: NodeId, bound: u64) -> Vec<Vec<usize>> {
    let g = &inst.graph;
    let space = inst.space();
    let mut out = Vec::new();
    let mut on = vec![false; g.node_count()];
    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &WeightedGraph<Rational>,
        space: &gapkit::graph::CutSpace,
        v: NodeId,
        t: NodeId,
        left: u64,
        on: &mut Vec<bool>,
        vars: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == t {
            out.push(vars.clone());
            return;
        }
        for &(e, w) in g.neighbours(v) {
            let len = g.edge(e).length;
            if on[w] || len >= left {
                continue;
            }
            let before = vars.len();
            vars.extend(space.var_of(Element::Edge(e)));
            vars.extend(space.var_of(Element::Node(w)));
            on[w] = true;
            walk(g, space, w, t, left - len, on, vars, out);
            on[w] = false;
            vars.truncate(before);
        }
    }
    on[s] = true;
    walk(g, &space, s, t, bound, &mut on, &mut Vec::new(), &mut out);
    out
}

fn enumerated_lp(inst: &CutInstance<Rational>, paths: &[Vec<usize>]) -> Option<Rational> {
    let space = inst.space();
    let mut lp = LpProblem::new(space.weights(&inst.graph));
    for p in paths {
        if p.is_empty() {
            return None;
        }
        lp.add_row(p.iter().map(|&v| (v, Rational::one())).collect(), Rational::one()).unwrap();
    }
    Some(simplex_solve(&lp).unwrap().value)
}

#[test]
fn cutting_planes_match_full_path_enumeration() {
    for seed in 0..60 {
        let kind = if seed % 2 == 0 { RandomKind::LengthBound } else { RandomKind::Multicut };
        let mode = if seed % 3 == 0 { CutMode::Vertex } else { CutMode::Edge };
        let inst = random_instance::<Rational>(RandomSpec { kind, mode, max_cuttable: 8 }, 1000 + seed).unwrap();
        match &inst.problem {
            Problem::LengthBound { s, t, bound } => {
                let paths = simple_paths(&inst, *s, *t, *bound);
                match enumerated_lp(&inst, &paths) {
                    Some(v) => assert_eq!(short_path_cover_lp(&inst, *bound).unwrap().value, v),
                    None => assert!(is_infeasible(&short_path_cover_lp(&inst, *bound))),
                }
            }
            Problem::Multicut { pairs } => {
                let paths: Vec<Vec<usize>> =
                    pairs.iter().flat_map(|&(s, t)| simple_paths(&inst, s, t, u64::MAX)).collect();
                match enumerated_lp(&inst, &paths) {
                    Some(v) => assert_eq!(multicut_lp(&inst).unwrap().value, v),
                    None => assert!(is_infeasible(&multicut_lp(&inst))),
                }
            }
            Problem::Rmfc { .. } => unreachable!(),
        }
    }
}

/// Solve a square system exactly; `None` if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone() / a[col][col].clone();
                let pivot = a[col].clone();
                for (c, p) in pivot.iter().enumerate().skip(col) {
                    let v = p.clone() * f.clone();
                    a[r][c] -= v;
                }
                let v = b[col].clone() * f;
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

/// Minimum over all basic feasible points of `{x >= 0, A x >= 1}`.
fn vertex_enumeration(c: &[Rational], rows: &[Vec<Rational>]) -> Rational {
    let n = c.len();
    let mut all: Vec<(Vec<Rational>, Rational)> = rows.iter().map(|r| (r.clone(), Rational::one())).collect();
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        all.push((e, Rational::zero()));
    }
    let mut best: Option<Rational> = None;
    for mask in 0u32..1 << all.len() {
        if mask.count_ones() as usize != n {
            continue;
        }
        let chosen: Vec<&(Vec<Rational>, Rational)> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| &all[i]).collect();
        let Some(x) = solve_square(chosen.iter().map(|r| r.0.clone()).collect(), chosen.iter().map(|r| r.1.clone()).collect()) else {
            continue;
        };
        let feasible = all.iter().all(|(a, b)| a.iter().zip(&x).map(|(p, v)| p * v).sum::<Rational>() >= *b);
        if feasible {
            let val: Rational = c.iter().zip(&x).map(|(p, v)| p * v).sum();
            if best.as_ref().is_none_or(|b| val < *b) {
                best = Some(val);
            }
        }
    }
    best.expect("covering LP with non-empty rows is feasible")
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let n = rng.random_range(1..=4);
        let m = rng.random_range(1..=4);
        let c: Vec<Rational> = (0..n).map(|_| q(rng.random_range(1..=5), rng.random_range(1..=3))).collect();
        let rows: Vec<Vec<Rational>> = (0..m)
            .map(|_| {
                let mut row: Vec<Rational> = (0..n).map(|_| q(rng.random_range(0..=2), rng.random_range(1..=2))).collect();
                if row.iter().all(Zero::is_zero) {
                    row[rng.random_range(0..n)] = Rational::one();
                }
                row
            })
            .collect();
        let mut lp = LpProblem::new(c.clone());
        for r in &rows {
            lp.add_row(r.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect(), Rational::one()).unwrap();
        }
        let sol = simplex_solve(&lp).unwrap();
        assert!(lp.is_feasible(&sol.x));
        assert_eq!(sol.value, vertex_enumeration(&c, &rows));
    }
}

/// Plain recursion over every affordable save set, no memo and no pruning.
fn rmfc_brute(adj: &[Vec<usize>], weight: &[Option<i64>], targets: &BTreeSet<usize>, k: i64, burning: Vec<bool>, saved: Vec<bool>) -> bool {
    let n = adj.len();
    let free: Vec<usize> = (0..n).filter(|&v| !burning[v] && !saved[v] && weight[v].is_some()).collect();
    for mask in 0u32..1 << free.len() {
        let set: Vec<usize> = (0..free.len()).filter(|i| mask >> i & 1 == 1).map(|i| free[i]).collect();
        if set.iter().map(|&v| weight[v].unwrap()).sum::<i64>() > k {
            continue;
        }
        let mut sv = saved.clone();
        for &v in &set {
            sv[v] = true;
        }
        let mut next = burning.clone();
        for v in 0..n {
            if burning[v] {
                for &w in &adj[v] {
                    if !sv[w] {
                        next[w] = true;
                    }
                }
            }
        }
        if targets.iter().any(|&t| next[t]) {
            continue;
        }
        if next == burning || rmfc_brute(adj, weight, targets, k, next, sv) {
            return true;
        }
    }
    false
}

#[test]
fn rmfc_decision_matches_brute_force_on_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let n = 6;
        let mut g = WeightedGraph::<Rational>::new();
        let mut weight = vec![None];
        g.add_node("s", Weight::Uncuttable).unwrap();
        for i in 1..n {
            let w = rng.random_range(1..=3);
            weight.push(Some(w));
            g.add_node(format!("v{i}"), Weight::Finite(q(w, 1))).unwrap();
        }
        let mut adj = vec![Vec::new(); n];
        for v in 1..n {
            let p = rng.random_range(0..v);
            g.add_edge(p, v, false, 1, Weight::Uncuttable).unwrap();
            adj[p].push(v);
            adj[v].push(p);
        }
        let targets: BTreeSet<usize> = (0..rng.random_range(1..=2)).map(|_| rng.random_range(1..n)).collect();
        let k = rng.random_range(0..=3);
        let inst = CutInstance::new(g, CutMode::Vertex, Problem::Rmfc { s: 0, targets: targets.clone() }).unwrap();
        let (ok, sched) = exact_rmfc_decision(&inst, &q(k, 1)).unwrap();
        let mut burning = vec![false; n];
        burning[0] = true;
        assert_eq!(ok, rmfc_brute(&adj, &weight, &targets, k, burning, vec![false; n]));
        if let Some(sched) = sched {
            let trace = gapkit::exact::rmfc_simulate(&inst, &sched.days, Some(&q(k, 1))).unwrap();
            assert!(!trace.target_burnt);
        }
    }
}
