use statrs::distribution::{ContinuousCDF, Normal};

/// Truncation box half-width; the Gaussian mass outside is below 1e-15.
const BOX: f64 = 8.0;
const TOLERANCE: f64 = 1e-7;
const MAX_PANELS: usize = 2048;

// 8-point Gauss–Legendre rule on [-1, 1].
const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Nodes and weights of a composite rule with `panels` panels on `[lo, hi]`.
fn composite(lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * 8);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            out.push((mid - 0.5 * h * x, 0.5 * h * w));
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

fn box_integral(rho: f64, x_hi: f64, y_lo: f64, panels: usize) -> f64 {
    let det = 1.0 - rho * rho;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
    let xs = composite(-BOX, x_hi, panels);
    let ys = composite(y_lo, BOX, panels);
    let mut total = 0.0;
    for &(x, wx) in &xs {
        let mut row = 0.0;
        for &(y, wy) in &ys {
            row += wy * (-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * det)).exp();
        }
        total += wx * row;
    }
    total * norm
}

/// `Pr[X <= Phi^{-1}(a), Y >= Phi^{-1}(1-b)]` for standard Gaussians with correlation `rho`.
///
/// Tensor-product Gauss–Legendre on the truncated box, doubling the panel
/// count until two successive values agree to 1e-7.
pub fn gamma_rho(rho: f64, a: f64, b: f64) -> f64 {
    let x_hi = normal_quantile(a).min(BOX);
    let y_lo = normal_quantile(1.0 - b).max(-BOX);
    if x_hi <= -BOX || y_lo >= BOX {
        return 0.0;
    }
    let mut panels = 4;
    let mut prev = box_integral(rho, x_hi, y_lo, panels);
    while panels < MAX_PANELS {
        panels *= 2;
        let next = box_integral(rho, x_hi, y_lo, panels);
        if (next - prev).abs() < TOLERANCE {
            return next;
        }
        prev = next;
    }
    prev
}
