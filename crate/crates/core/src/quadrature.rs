//! One-dimensional quadrature rules and deterministic summation.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| (mid + half * xi, half * wi))
        .collect()
}

/// Composite Gauss–Legendre: `panels` equal panels of `n` nodes each.
pub fn composite_gauss(n: usize, panels: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    (0..panels)
        .flat_map(|k| gauss_legendre_on(n, a + k as f64 * h, a + (k + 1) as f64 * h))
        .collect()
}

/// Uniform periodic rule on `[0, period)`; exact for trigonometric
/// polynomials of degree below `n`.
pub fn periodic(n: usize, period: f64) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| (period * k as f64 / n as f64, period / n as f64))
        .collect()
}

/// Pairwise summation; the result does not depend on how the terms were
/// produced, only on their order.
pub fn tree_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            tree_sum(a) + tree_sum(b)
        }
    }
}

pub fn tree_sum_complex(xs: &[num_complex::Complex64]) -> num_complex::Complex64 {
    let re: Vec<f64> = xs.iter().map(|z| z.re).collect();
    let im: Vec<f64> = xs.iter().map(|z| z.im).collect();
    num_complex::Complex64::new(tree_sum(&re), tree_sum(&im))
}

/// Radial grid for integrals over the closed chamber of a rank-one group.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RadialGrid {
    pub lower: f64,
    pub upper: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
}

impl RadialGrid {
    pub fn new(lower: f64, upper: f64, panels: usize, nodes_per_panel: usize) -> Self {
        Self { lower, upper, panels, nodes_per_panel }
    }

    pub fn rule(&self) -> Vec<(f64, f64)> {
        composite_gauss(self.nodes_per_panel, self.panels, self.lower, self.upper)
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self.rule().into_iter().map(|(x, w)| w * f(x)).collect();
        tree_sum(&terms)
    }
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self::new(0.0, 16.0, 64, 16)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_low_degree() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg} got={got}");
            }
        }
    }

    #[test]
    fn gaussian_on_half_line() {
        let g = RadialGrid::new(0.0, 12.0, 24, 12);
        let v = g.integrate(|x| (-x * x).exp());
        assert!((v - PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn periodic_rule_kills_low_frequencies() {
        let rule = periodic(7, 2.0 * PI);
        for k in 1..7 {
            let s: f64 = rule.iter().map(|(t, w)| w * (k as f64 * t).cos()).sum();
            assert!(s.abs() < 1e-14);
        }
    }
}
