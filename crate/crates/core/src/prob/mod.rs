//! Finite probability spaces, correlated pairs of spaces and functions on
//! product spaces.

mod gaussian;
mod influence;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub use gaussian::{gamma_rho, normal_quantile};
pub use influence::{efron_stein_influences, efron_stein_parts, EfronStein};

/// Label of the noise atom shared by the star spaces.
pub const STAR: &str = "*";

/// Atoms with masses summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteProbSpace<T> {
    atoms: Vec<String>,
    mass: Vec<T>,
}

impl<T: Scalar> FiniteProbSpace<T> {
    pub fn new(atoms: Vec<String>, mass: Vec<T>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != mass.len() {
            return Err(Error::InvalidSpace("need one mass per atom and at least one atom".into()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(Error::InvalidSpace(format!("duplicate atom {a:?}")));
            }
        }
        if let Some(m) = mass.iter().find(|m| **m < T::zero() && !m.is_negligible()) {
            return Err(Error::InvalidSpace(format!("negative mass {m}")));
        }
        let total: T = scalar::sum(&mass);
        if !scalar::is_one(&total) {
            return Err(Error::InvalidSpace(format!("masses sum to {total}")));
        }
        Ok(FiniteProbSpace { atoms, mass })
    }

    /// Uniform measure on `0..n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("empty space".into()));
        }
        let atoms = (0..n).map(|i| i.to_string()).collect();
        Self::new(atoms, vec![T::from_ratio(1, n as i64); n])
    }

    /// `{*, first, .., first+n-1}` with `mu(*) = eps` and the rest uniform.
    pub fn star(n: usize, first: usize, eps: &T) -> Result<Self> {
        if n == 0 || *eps < T::zero() || *eps > T::one() {
            return Err(Error::InvalidSpace(format!("bad star space n={n}, eps={eps}")));
        }
        let mut atoms = vec![STAR.to_string()];
        atoms.extend((first..first + n).map(|i| i.to_string()));
        let rest = (T::one() - eps.clone()) / T::from_count(n);
        let mut mass = vec![eps.clone()];
        mass.extend(std::iter::repeat_n(rest, n));
        Self::new(atoms, mass)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn masses(&self) -> &[T] {
        &self.mass
    }

    pub fn mass(&self, atom: usize) -> &T {
        &self.mass[atom]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.atoms
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::UnknownAtom(label.to_string()))
    }

    /// Product mass of a point given by atom indices.
    pub fn point_mass(&self, point: &[usize]) -> Result<T> {
        let mut out = T::one();
        for &a in point {
            let m = self.mass.get(a).ok_or_else(|| Error::UnknownAtom(format!("#{a}")))?;
            out = out * m.clone();
        }
        Ok(out)
    }

    /// Product mass of a point given by atom labels; `R` is the point's length.
    pub fn product_mass(&self, point: &[&str]) -> Result<T> {
        let idx = point.iter().map(|a| self.index_of(a)).collect::<Result<Vec<_>>>()?;
        self.point_mass(&idx)
    }

    /// The product measure on `Omega^r` as a flat table (first coordinate most significant).
    pub fn product_table(&self, r: usize) -> Vec<T> {
        let mut table = vec![T::one()];
        for _ in 0..r {
            table = table
                .iter()
                .flat_map(|p| self.mass.iter().map(move |m| p.clone() * m.clone()))
                .collect();
        }
        table
    }
}

/// Iterate the points of `[n]^r` in lexicographic order.
pub fn points(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.checked_pow(r as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut code| {
        let mut p = vec![0; r];
        for slot in p.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        p
    })
}

/// Flat index of a point (first coordinate most significant).
pub fn point_index(n: usize, point: &[usize]) -> usize {
    point.iter().fold(0, |acc, &a| acc * n + a)
}

/// Joint distribution on `left x right` with matching marginals.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatedSpace<T> {
    left: FiniteProbSpace<T>,
    right: FiniteProbSpace<T>,
    joint: Vec<Vec<T>>,
}

impl<T: Scalar> CorrelatedSpace<T> {
    pub fn new(left: FiniteProbSpace<T>, right: FiniteProbSpace<T>, joint: Vec<Vec<T>>) -> Result<Self> {
        if joint.len() != left.len() || joint.iter().any(|row| row.len() != right.len()) {
            return Err(Error::InvalidSpace("joint table has the wrong shape".into()));
        }
        if joint.iter().flatten().any(|m| *m < T::zero() && !m.is_negligible()) {
            return Err(Error::InvalidSpace("negative joint mass".into()));
        }
        for (a, row) in joint.iter().enumerate() {
            let m: T = scalar::sum(row);
            if !scalar::approx_eq(&m, left.mass(a)) {
                return Err(Error::InvalidSpace(format!(
                    "row marginal of {} is {m}, expected {}",
                    left.atoms[a],
                    left.mass(a)
                )));
            }
        }
        for b in 0..right.len() {
            let m: T = joint.iter().map(|row| row[b].clone()).sum();
            if !scalar::approx_eq(&m, right.mass(b)) {
                return Err(Error::InvalidSpace(format!(
                    "column marginal of {} is {m}, expected {}",
                    right.atoms[b],
                    right.mass(b)
                )));
            }
        }
        Ok(CorrelatedSpace { left, right, joint })
    }

    /// Build the joint from a table and derive both marginals from it.
    pub fn from_joint(left_atoms: Vec<String>, right_atoms: Vec<String>, joint: Vec<Vec<T>>) -> Result<Self> {
        let lm = joint.iter().map(|row| scalar::sum(row)).collect();
        let rm = (0..right_atoms.len())
            .map(|b| joint.iter().map(|row| row.get(b).cloned().unwrap_or_else(T::zero)).sum())
            .collect();
        Self::new(FiniteProbSpace::new(left_atoms, lm)?, FiniteProbSpace::new(right_atoms, rm)?, joint)
    }

    pub fn left(&self) -> &FiniteProbSpace<T> {
        &self.left
    }

    pub fn right(&self) -> &FiniteProbSpace<T> {
        &self.right
    }

    pub fn joint(&self, a: usize, b: usize) -> &T {
        &self.joint[a][b]
    }

    pub fn joint_table(&self) -> &[Vec<T>] {
        &self.joint
    }

    /// Smallest nonzero joint mass.
    pub fn alpha(&self) -> T {
        self.joint
            .iter()
            .flatten()
            .filter(|m| !m.is_negligible())
            .cloned()
            .reduce(scalar::min_of)
            .unwrap_or_else(T::zero)
    }

    /// Same joint with the atoms of each side reordered.
    pub fn permuted(&self, left_order: &[usize], right_order: &[usize]) -> Result<Self> {
        let pick = |space: &FiniteProbSpace<T>, order: &[usize]| {
            FiniteProbSpace::new(
                order.iter().map(|&i| space.atoms[i].clone()).collect(),
                order.iter().map(|&i| space.mass[i].clone()).collect(),
            )
        };
        let joint = left_order
            .iter()
            .map(|&a| right_order.iter().map(|&b| self.joint[a][b].clone()).collect())
            .collect();
        Self::new(pick(&self.left, left_order)?, pick(&self.right, right_order)?, joint)
    }

    /// `nu^{⊗r}(x, y)` for atom-index tuples.
    pub fn product_joint(&self, x: &[usize], y: &[usize]) -> T {
        x.iter()
            .zip(y)
            .fold(T::one(), |acc, (&a, &b)| acc * self.joint[a][b].clone())
    }
}

/// `nu` of the shift test: `y = x + 1 mod r`, kept with probability `1 - 1/r`,
/// otherwise both coordinates resampled independently.
pub fn shift_noise_space<T: Scalar>(r: usize) -> Result<CorrelatedSpace<T>> {
    if r < 2 {
        return Err(Error::ParamOutOfRange(format!("r = {r} < 2")));
    }
    let rr = T::from_count(r);
    let keep = (T::one() - T::one() / rr.clone()) / rr.clone();
    let mix = T::one() / (rr.clone() * rr.clone() * rr);
    let joint = (0..r)
        .map(|x| {
            (0..r)
                .map(|y| if y == (x + 1) % r { keep.clone() + mix.clone() } else { mix.clone() })
                .collect()
        })
        .collect();
    CorrelatedSpace::new(FiniteProbSpace::uniform(r)?, FiniteProbSpace::uniform(r)?, joint)
}

/// Star-noise space: sample `x` uniform on `n` symbols, set `y = step(x)`,
/// then replace each side by `*` independently with probability `eps`.
fn star_noise<T: Scalar>(n: usize, first: usize, eps: &T, step: impl Fn(usize) -> usize) -> Result<CorrelatedSpace<T>> {
    let space = FiniteProbSpace::star(n, first, eps)?;
    let k = n + 1;
    let nn = T::from_count(n);
    let keep = T::one() - eps.clone();
    let mut joint = vec![vec![T::zero(); k]; k];
    for x in 0..n {
        let y = step(x);
        let base = T::one() / nn.clone();
        let (xi, yi) = (x + 1, y + 1);
        joint[xi][yi] = joint[xi][yi].clone() + base.clone() * keep.clone() * keep.clone();
        joint[xi][0] = joint[xi][0].clone() + base.clone() * keep.clone() * eps.clone();
        joint[0][yi] = joint[0][yi].clone() + base.clone() * eps.clone() * keep.clone();
        joint[0][0] = joint[0][0].clone() + base * eps.clone() * eps.clone();
    }
    CorrelatedSpace::new(space.clone(), space, joint)
}

/// `nu` for the multicut and vertex tests: atoms `(*, 0, .., r-1)`, shift by one mod `r`.
pub fn star_shift_space<T: Scalar>(r: usize, eps: &T) -> Result<CorrelatedSpace<T>> {
    if r < 2 {
        return Err(Error::ParamOutOfRange(format!("r = {r} < 2")));
    }
    star_noise(r, 0, eps, |x| (x + 1) % r)
}

/// `nu` for the firefighter test: atoms `(*, 1, .., B)`, identity correlation.
pub fn star_copy_space<T: Scalar>(big_b: usize, eps: &T) -> Result<CorrelatedSpace<T>> {
    star_noise(big_b, 1, eps, |x| x)
}

/// Largest singular value of `Q - sqrt(mu1) sqrt(mu2)^T` with
/// `Q(a,b) = nu(a,b) / sqrt(mu1(a) mu2(b))`, which is the second singular
/// value of `Q`.
pub fn maximal_correlation<T: Scalar>(cs: &CorrelatedSpace<T>) -> Result<f64> {
    let m1: Vec<f64> = cs.left.mass.iter().map(Scalar::to_f64_lossy).collect();
    let m2: Vec<f64> = cs.right.mass.iter().map(Scalar::to_f64_lossy).collect();
    for (space, masses) in [(&cs.left, &m1), (&cs.right, &m2)] {
        if let Some(i) = masses.iter().position(|&m| m <= 0.0) {
            return Err(Error::DegenerateMarginal(space.atoms[i].clone()));
        }
    }
    let q = nalgebra::DMatrix::from_fn(m1.len(), m2.len(), |a, b| {
        cs.joint[a][b].to_f64_lossy() / (m1[a] * m2[b]).sqrt() - m1[a].sqrt() * m2[b].sqrt()
    });
    Ok(q.singular_values().iter().cloned().fold(0.0, f64::max))
}

/// `1 - alpha^2 / 2`, valid when the support graph is connected.
pub fn connectedness_bound<T: Scalar>(cs: &CorrelatedSpace<T>) -> Result<T> {
    let (n1, n2) = (cs.left.len(), cs.right.len());
    let mut parent: Vec<usize> = (0..n1 + n2).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for a in 0..n1 {
        for b in 0..n2 {
            if !cs.joint[a][b].is_negligible() {
                let (x, y) = (root(&mut parent, a), root(&mut parent, n1 + b));
                parent[x] = y;
            }
        }
    }
    let r0 = root(&mut parent, 0);
    if (1..n1 + n2).any(|v| root(&mut parent, v) != r0) {
        return Err(Error::DisconnectedSupport);
    }
    let alpha = cs.alpha();
    Ok(T::one() - alpha.clone() * alpha / T::from_count(2))
}

/// Correlation bound for a mixture that follows a space of correlation `rho1`
/// with probability `delta` and one of correlation `rho2` otherwise.
pub fn mixture_correlation_bound(rho1: f64, rho2: f64, delta: f64) -> f64 {
    (delta * rho1 * rho1 + (1.0 - delta) * rho2 * rho2).sqrt()
}

/// A `[0,1]`-valued function on `Omega^R`, tabulated in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFunction<T> {
    base: FiniteProbSpace<T>,
    r: usize,
    values: Vec<T>,
}

impl<T: Scalar> ProductFunction<T> {
    pub fn new(base: FiniteProbSpace<T>, r: usize, values: Vec<T>) -> Result<Self> {
        let expected = base.len().checked_pow(r as u32);
        if r == 0 || expected != Some(values.len()) {
            return Err(Error::InvalidSpace(format!(
                "table of {} values does not match |Omega|^R",
                values.len()
            )));
        }
        if let Some(v) = values
            .iter()
            .find(|v| (**v < T::zero() && !v.is_negligible()) || !scalar::le(*v, &T::one()))
        {
            return Err(Error::InvalidSpace(format!("value {v} outside [0, 1]")));
        }
        Ok(ProductFunction { base, r, values })
    }

    pub fn from_fn(base: FiniteProbSpace<T>, r: usize, f: impl Fn(&[usize]) -> T) -> Result<Self> {
        crate::error::guard("product table size", (base.len() as u128).pow(r as u32), 1 << 24)?;
        let values = points(base.len(), r).map(|p| f(&p)).collect();
        Self::new(base, r, values)
    }

    pub fn base(&self) -> &FiniteProbSpace<T> {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.r
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, point: &[usize]) -> &T {
        &self.values[point_index(self.base.len(), point)]
    }

    pub fn expectation(&self) -> T {
        self.base
            .product_table(self.r)
            .into_iter()
            .zip(&self.values)
            .map(|(m, v)| m * v.clone())
            .sum()
    }

    pub fn variance(&self) -> T {
        let mean = self.expectation();
        let second: T = self
            .base
            .product_table(self.r)
            .into_iter()
            .zip(&self.values)
            .map(|(m, v)| m * v.clone() * v.clone())
            .sum();
        second - mean.clone() * mean
    }
}

/// `E[f(x) g(y)]` with `(x, y)` drawn from `nu^{⊗R}`.
pub fn joint_expectation<T: Scalar>(
    cs: &CorrelatedSpace<T>,
    f: &ProductFunction<T>,
    g: &ProductFunction<T>,
) -> Result<T> {
    if f.r != g.r || f.base.len() != cs.left.len() || g.base.len() != cs.right.len() {
        return Err(Error::InvalidSpace("functions do not live on the correlated space".into()));
    }
    crate::error::guard(
        "joint expectation terms",
        (f.values.len() as u128) * (g.values.len() as u128),
        1 << 26,
    )?;
    let mut total = T::zero();
    for x in points(cs.left.len(), f.r) {
        let fx = f.value(&x);
        if fx.is_negligible() {
            continue;
        }
        for y in points(cs.right.len(), g.r) {
            let gy = g.value(&y);
            if !gy.is_negligible() {
                total = total + cs.product_joint(&x, &y) * fx.clone() * gy.clone();
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn product_mass_examples() {
        let u = FiniteProbSpace::<Q>::uniform(3).unwrap();
        assert_eq!(u.product_mass(&["0", "2"]).unwrap(), ratio(1, 9));
        let s = FiniteProbSpace::star(3, 0, &ratio(1, 20)).unwrap();
        assert_eq!(s.product_mass(&["*", "0"]).unwrap(), ratio(19, 1200));
        assert!(matches!(s.product_mass(&["9"]), Err(Error::UnknownAtom(_))));
        let total: Q = s.product_table(3).into_iter().sum();
        assert_eq!(total, ratio(1, 1));
    }

    #[test]
    fn rejects_unnormalised_spaces() {
        let bad = FiniteProbSpace::new(vec!["a".into(), "b".into()], vec![ratio(1, 2), ratio(1, 3)]);
        assert!(matches!(bad, Err(Error::InvalidSpace(_))));
    }

    #[test]
    fn shift_space_for_two_symbols() {
        let cs = shift_noise_space::<Q>(2).unwrap();
        assert_eq!(cs.joint(0, 1), &ratio(3, 8));
        assert_eq!(cs.joint(1, 0), &ratio(3, 8));
        assert_eq!(cs.joint(0, 0), &ratio(1, 8));
        let rho = maximal_correlation(&cs).unwrap();
        assert!((rho - 0.5).abs() < 1e-12);
    }

    #[test]
    fn star_space_alpha_is_eps_squared() {
        let eps = ratio(1, 20);
        let cs = star_shift_space::<Q>(3, &eps).unwrap();
        assert_eq!(cs.alpha(), ratio(1, 400));
        assert_eq!(connectedness_bound(&cs).unwrap(), ratio(319_999, 320_000));
    }

    #[test]
    fn independent_joint_has_zero_correlation() {
        let u = FiniteProbSpace::<Q>::uniform(3).unwrap();
        let joint = vec![vec![ratio(1, 9); 3]; 3];
        let cs = CorrelatedSpace::new(u.clone(), u, joint).unwrap();
        assert!(maximal_correlation(&cs).unwrap() < 1e-12);
    }

    #[test]
    fn disconnected_support_is_rejected() {
        let u = FiniteProbSpace::<Q>::uniform(2).unwrap();
        let joint = vec![vec![ratio(1, 2), ratio(0, 1)], vec![ratio(0, 1), ratio(1, 2)]];
        let cs = CorrelatedSpace::new(u.clone(), u, joint).unwrap();
        assert!(matches!(connectedness_bound(&cs), Err(Error::DisconnectedSupport)));
        assert!((maximal_correlation(&cs).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixture_bound_examples() {
        assert!((mixture_correlation_bound(0.3, 0.9, 1.0) - 0.3).abs() < 1e-15);
        assert!((mixture_correlation_bound(1.0, 0.0, 0.75) - 0.75f64.sqrt()).abs() < 1e-15);
    }
}
