use crate::error::{guard, Result};
use crate::prob::ProductFunction;
use crate::scalar::Scalar;

/// Squared norms of the Efron–Stein parts `f_S`, indexed by the bitmask of `S`
/// (bit `j` stands for coordinate `j`).
#[derive(Clone, Debug, PartialEq)]
pub struct EfronStein<T> {
    pub arity: usize,
    pub norms: Vec<T>,
}

impl<T: Scalar> EfronStein<T> {
    /// `(Inf_i, Inf_i^{<=d})` for every coordinate `i`.
    pub fn influences(&self, d: usize) -> Vec<(T, T)> {
        (0..self.arity)
            .map(|i| {
                let mut all = T::zero();
                let mut low = T::zero();
                for (mask, norm) in self.norms.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        all = all + norm.clone();
                        if (mask.count_ones() as usize) <= d {
                            low = low + norm.clone();
                        }
                    }
                }
                (all, low)
            })
            .collect()
    }

    /// `sum_S ||f_S||^2`, equal to `E[f^2]`.
    pub fn total(&self) -> T {
        self.norms.iter().cloned().sum()
    }
}

/// Decompose `f` over its (possibly non-uniform) product measure.
///
/// Conditional expectations `E[f | x_T]` are computed for every `T` by
/// averaging out one coordinate at a time; the parts follow by Möbius
/// inversion over the subset lattice.
pub fn efron_stein_parts<T: Scalar>(f: &ProductFunction<T>) -> Result<EfronStein<T>> {
    let r = f.arity();
    let n = f.base().len();
    let size = f.values().len();
    guard("Efron-Stein table entries", (size as u128) << r, 1 << 22)?;
    let mu = f.base().masses();
    let full = (1usize << r) - 1;
    let stride = |j: usize| n.pow((r - 1 - j) as u32);

    let mut tables: Vec<Vec<T>> = vec![Vec::new(); 1 << r];
    tables[full] = f.values().to_vec();
    for mask in (0..full).rev() {
        let j = (0..r).find(|&j| mask >> j & 1 == 0).expect("mask is not full");
        let src = &tables[mask | 1 << j];
        let st = stride(j);
        let mut out = Vec::with_capacity(size);
        for idx in 0..size {
            let digit = idx / st % n;
            let base = idx - digit * st;
            let avg: T = (0..n).map(|a| mu[a].clone() * src[base + a * st].clone()).sum();
            out.push(avg);
        }
        tables[mask] = out;
    }
    for j in 0..r {
        for mask in 0..=full {
            if mask >> j & 1 == 1 {
                let (lo, hi) = tables.split_at_mut(mask);
                let sub = &lo[mask ^ 1 << j];
                for (x, y) in hi[0].iter_mut().zip(sub) {
                    *x = x.clone() - y.clone();
                }
            }
        }
    }
    let weights = f.base().product_table(r);
    let norms = tables
        .iter()
        .map(|part| weights.iter().zip(part).map(|(w, v)| w.clone() * v.clone() * v.clone()).sum())
        .collect();
    Ok(EfronStein { arity: r, norms })
}

/// Per-coordinate `(Inf_i[f], Inf_i^{<=d}[f])`.
pub fn efron_stein_influences<T: Scalar>(f: &ProductFunction<T>, d: usize) -> Result<Vec<(T, T)>> {
    Ok(efron_stein_parts(f)?.influences(d))
}
