use gapkit::prob::{
    connectedness_bound, efron_stein_influences, efron_stein_parts, gamma_rho, maximal_correlation, points,
    shift_noise_space, star_shift_space, FiniteProbSpace, ProductFunction,
};
use gapkit::scalar::ratio;
use gapkit::Rational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

/// `E_x[Var_{x_i}(f | x_{-i})]` by direct summation over the table.
fn conditional_variance_influence(f: &ProductFunction<Rational>, i: usize) -> Rational {
    let base = f.base();
    let n = base.len();
    let r = f.arity();
    let mut total = Rational::zero();
    for rest in points(n, r - 1) {
        let weight: Rational = rest.iter().map(|&a| base.mass(a).clone()).product();
        let at = |a: usize| {
            let mut p = rest.clone();
            p.insert(i, a);
            f.value(&p).clone()
        };
        let mean: Rational = (0..n).map(|a| base.mass(a).clone() * at(a)).sum();
        let var: Rational = (0..n).map(|a| base.mass(a).clone() * (at(a) - mean.clone()) * (at(a) - mean.clone())).sum();
        total += weight * var;
    }
    total
}

fn spaces() -> Vec<FiniteProbSpace<Rational>> {
    vec![
        FiniteProbSpace::uniform(2).unwrap(),
        FiniteProbSpace::uniform(3).unwrap(),
        FiniteProbSpace::star(3, 0, &q(1, 4)).unwrap(),
        FiniteProbSpace::new((0..4).map(|i| i.to_string()).collect(), vec![q(1, 10), q(2, 10), q(3, 10), q(4, 10)]).unwrap(),
    ]
}

#[test]
fn influences_match_conditional_variances() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for base in spaces() {
        let n = base.len();
        for r in 1..=3 {
            let mut funcs: Vec<ProductFunction<Rational>> = vec![
                ProductFunction::from_fn(base.clone(), r, |x| if x[0] == 0 { Rational::one() } else { Rational::zero() }).unwrap(),
                ProductFunction::from_fn(base.clone(), r, |_| q(1, 2)).unwrap(),
                ProductFunction::from_fn(base.clone(), r, |x| q((x.iter().sum::<usize>() % 2) as i64, 1)).unwrap(),
            ];
            let values: Vec<Rational> = (0..n.pow(r as u32)).map(|_| q(rng.random_range(0..=4), 4)).collect();
            funcs.push(ProductFunction::new(base.clone(), r, values).unwrap());
            for f in funcs {
                let parts = efron_stein_parts(&f).unwrap();
                assert_eq!(parts.norms[0], f.expectation() * f.expectation());
                assert_eq!(parts.total() - parts.norms[0].clone(), f.variance());
                let infl = efron_stein_influences(&f, r).unwrap();
                for (i, (all, low)) in infl.iter().enumerate() {
                    assert_eq!(*all, conditional_variance_influence(&f, i));
                    assert_eq!(all, low);
                }
            }
        }
    }
}

#[test]
fn named_influence_values() {
    let base = FiniteProbSpace::<Rational>::uniform(3).unwrap();
    // dictator indicator of symbol 0 on coordinate 0: variance 2/9
    let dict = ProductFunction::from_fn(base, 2, |x| if x[0] == 0 { Rational::one() } else { Rational::zero() }).unwrap();
    let infl = efron_stein_influences(&dict, 1).unwrap();
    assert_eq!(infl[0], (q(2, 9), q(2, 9)));
    assert_eq!(infl[1], (q(0, 1), q(0, 1)));
    // parity on two fair bits: all weight on degree 2
    let bits = FiniteProbSpace::<Rational>::uniform(2).unwrap();
    let xor = ProductFunction::from_fn(bits, 2, |x| q(((x[0] + x[1]) % 2) as i64, 1)).unwrap();
    let infl = efron_stein_influences(&xor, 1).unwrap();
    assert_eq!(infl[0], (q(1, 4), q(0, 1)));
    let constant = ProductFunction::from_fn(FiniteProbSpace::<Rational>::uniform(4).unwrap(), 3, |_| q(1, 3)).unwrap();
    assert!(efron_stein_influences(&constant, 3).unwrap().iter().all(|(a, b)| a.is_zero() && b.is_zero()));
}

#[test]
fn sheppard_values() {
    let s = 3f64.sqrt() / 2.0;
    assert!((gamma_rho(s, 0.5, 0.5) - 1.0 / 12.0).abs() < 1e-4);
    assert!((gamma_rho(0.5, 0.5, 0.5) - 1.0 / 6.0).abs() < 1e-4);
    for rho in [-0.6, -0.1, 0.0, 0.3, 0.9] {
        let closed = 0.25 - f64::asin(rho) / (2.0 * std::f64::consts::PI);
        assert!((gamma_rho(rho, 0.5, 0.5) - closed).abs() < 1e-6, "rho {rho}");
    }
    // independent case factorises
    assert!((gamma_rho(0.0, 0.3, 0.2) - 0.06).abs() < 1e-6);
}

#[test]
fn correlation_bounds() {
    let nu = shift_noise_space::<Rational>(2).unwrap();
    assert!((maximal_correlation(&nu).unwrap() - 0.5).abs() < 1e-6);
    for r in 2..=6 {
        let rho = maximal_correlation(&shift_noise_space::<Rational>(r).unwrap()).unwrap();
        assert!(rho <= (1.0 - 1.0 / r as f64).sqrt() + 1e-12, "r {r}: {rho}");
    }
    for eps in [q(1, 4), q(1, 20)] {
        for r in 2..=4 {
            let cs = star_shift_space(r, &eps).unwrap();
            let e4 = eps.clone() * eps.clone() * eps.clone() * eps.clone();
            let target = Rational::one() - e4 / q(2, 1);
            let bound = connectedness_bound(&cs).unwrap();
            // the smallest atom is eps^2 once eps <= 1/(2r)
            if eps.clone() * q(2 * r as i64, 1) <= Rational::one() {
                assert_eq!(bound, target);
            }
            assert!(bound >= target);
            let rho = maximal_correlation(&cs).unwrap();
            let as_f64 = |x: &Rational| num_traits::ToPrimitive::to_f64(x).unwrap();
            assert!(rho <= as_f64(&target) + 1e-12);
            assert!(rho <= as_f64(&bound) + 1e-12);
        }
    }
}
