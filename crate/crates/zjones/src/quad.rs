//! Quadrature rules for the numeric half: Gauss–Legendre nodes by Newton
//! iteration, composite panels along complex segments, and the
//! Chebyshev–Gauss rule for the (1-u^2)^{-1/2} weight.

use num::complex::Complex64;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite Gauss–Legendre integration of a complex function along the
/// straight segment from 0 to `end`, split into `panels` equal panels.
pub fn integrate_segment<F>(mut f: F, end: Complex64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> Complex64
where
    F: FnMut(Complex64) -> Complex64,
{
    let (nodes, weights) = rule;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let a = end * (k as f64 / panels as f64);
        let b = end * ((k + 1) as f64 / panels as f64);
        let mid = (a + b) * 0.5;
        let half = (b - a) * 0.5;
        for (x, w) in nodes.iter().zip(weights) {
            total += f(mid + half * x) * *w * half;
        }
    }
    total
}

/// Same but over a real interval [a, b].
pub fn integrate_real<F>(mut f: F, a: f64, b: f64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let (nodes, weights) = rule;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let pa = a + (b - a) * (k as f64 / panels as f64);
        let pb = a + (b - a) * ((k + 1) as f64 / panels as f64);
        let mid = 0.5 * (pa + pb);
        let half = 0.5 * (pb - pa);
        for (x, w) in nodes.iter().zip(weights) {
            total += f(mid + half * x) * *w * half;
        }
    }
    total
}

/// Chebyshev–Gauss nodes in (0, 1) for integrals of the form
/// int_0^1 g(u) (1-u^2)^{-1/2} du ≈ (pi/(2n)) sum_i g(u_i),
/// valid when the same rule on [-1,1] sees the even extension of g.
pub fn chebyshev_gauss_01(n: usize) -> (Vec<f64>, f64) {
    let nodes =
        (1..=n).map(|i| ((2 * i - 1) as f64 * std::f64::consts::PI / (4 * n) as f64).cos()).collect();
    (nodes, std::f64::consts::PI / (2 * n) as f64)
}

/// Kahan-compensated sum of complex terms.
#[derive(Debug, Clone, Default)]
pub struct KahanSum {
    sum: Complex64,
    comp: Complex64,
    pub max_term_abs: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self { sum: Complex64::new(0.0, 0.0), comp: Complex64::new(0.0, 0.0), max_term_abs: 0.0 }
    }

    pub fn add(&mut self, term: Complex64) {
        self.max_term_abs = self.max_term_abs.max(term.norm());
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }

    /// A posteriori roundoff estimate: eps times the largest intermediate.
    pub fn roundoff_estimate(&self, n_terms: usize) -> f64 {
        f64::EPSILON * self.max_term_abs * (n_terms as f64).sqrt().max(1.0)
    }
}
