//! Formal Borel transform, Gevrey-1 diagnostics, analytic continuation for
//! torus knots, and directional Laplace resummation.
//!
//! Conventions: a series sum a_n h^n is wrapped as sum a_n h^{n+1} before the
//! Borel transform, so the transform is the ordinary function
//! B(xi) = sum a_n xi^n / n! and no delta term ever materialises; the
//! resummation divides the Laplace transform by h to undo the wrap.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::rat::{factorial, Rat};

pub mod kernel;
pub mod resum;

pub use kernel::BorelEvaluator;
pub use resum::{branch_scan, direction_components, incomplete_resum, resum, ResumConfig, ResumResult};

/// Borel coefficients b_n = a_n/n! of a numeric series.
#[derive(Debug, Clone)]
pub struct BorelCoefficients {
    pub b: Vec<Complex64>,
    pub source_trunc: usize,
}

impl BorelCoefficients {
    /// Partial sum of the Borel series at xi.
    pub fn taylor_eval(&self, xi: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for c in &self.b {
            acc += c * pw;
            pw *= xi;
        }
        acc
    }
}

/// b_n = a_n / n!.
pub fn formal_borel(a: &[Complex64]) -> BorelCoefficients {
    let mut b = Vec::with_capacity(a.len());
    let mut fact = 1.0f64;
    for (n, an) in a.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        b.push(an / fact);
    }
    BorelCoefficients { b, source_trunc: a.len().saturating_sub(1) }
}

/// Exact-rational variant.
pub fn formal_borel_rational(a: &[Rat]) -> Vec<Rat> {
    a.iter().enumerate().map(|(n, an)| an / Rat::from_integer(factorial(n))).collect()
}

/// Fit report for Gevrey-1 growth |a_n| <= C^n n!.
#[derive(Debug, Clone)]
pub struct GevreyReport {
    /// fitted C from log|a_n| - log n! ~ n log C
    pub c_fit: f64,
    /// Cauchy–Hadamard radius estimate for the Borel transform
    pub radius_estimate: f64,
    /// median of |b_n/b_{n+1}| over the tail window (second estimator)
    pub radius_ratio_estimate: f64,
    /// per-n residuals of the log-linear fit
    pub residuals: Vec<f64>,
    /// |b_n|^{1/n} root-test sequence (undefined entries are NaN)
    pub root_test: Vec<f64>,
    /// the Borel transform looks entire (b_n decays superexponentially)
    pub superconvergent: bool,
}

/// Diagnose Gevrey-1 growth of a numeric coefficient sequence.
pub fn gevrey_diagnose(a: &[Complex64]) -> Result<GevreyReport> {
    if a.len() < 10 {
        return Err(Error::UndefinedFit(format!("need >= 10 coefficients, got {}", a.len())));
    }
    if a.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::UndefinedFit("all-zero series".into()));
    }
    let b = formal_borel(a);
    // least-squares fit of y_n = log|a_n| - log n! against n (nonzero entries)
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut logfact = 0.0f64;
    for (n, an) in a.iter().enumerate() {
        if n > 0 {
            logfact += (n as f64).ln();
        }
        if an.norm() > 0.0 && n >= 2 {
            pts.push((n as f64, an.norm().ln() - logfact));
        }
    }
    if pts.len() < 4 {
        return Err(Error::UndefinedFit("too few nonzero coefficients".into()));
    }
    let (slope, intercept) = least_squares(&pts);
    let c_fit = slope.exp();
    let residuals = pts.iter().map(|(x, y)| y - (slope * x + intercept)).collect();

    let root_test: Vec<f64> = b
        .b
        .iter()
        .enumerate()
        .map(
            |(n, bn)| {
                if n == 0 || bn.norm() == 0.0 {
                    f64::NAN
                } else {
                    bn.norm().powf(1.0 / n as f64)
                }
            },
        )
        .collect();

    // radius from a tail-window log-linear fit of log|b_n| (estimates the
    // limsup through the algebraic prefactor), plus a ratio cross-check
    let tail_start = a.len() / 2;
    let tail: Vec<(f64, f64)> = b
        .b
        .iter()
        .enumerate()
        .skip(tail_start)
        .filter(|(_, bn)| bn.norm() > 0.0)
        .map(|(n, bn)| (n as f64, bn.norm().ln()))
        .collect();
    let (radius_estimate, superconvergent) = if tail.len() < 4 {
        (f64::INFINITY, true)
    } else {
        let (bslope, _) = least_squares(&tail);
        // a 1/n!-type tail has local slope ~ -log n; anything steeper than
        // half of that cannot have a finite Cauchy–Hadamard radius
        let log_fact_rate = (tail.last().unwrap().0).ln();
        if bslope < -0.5 * log_fact_rate {
            (f64::INFINITY, true)
        } else {
            ((-bslope).exp(), false)
        }
    };

    let mut ratios: Vec<f64> = (tail_start..b.b.len().saturating_sub(1))
        .filter(|&n| b.b[n + 1].norm() > 0.0 && b.b[n].norm() > 0.0)
        .map(|n| b.b[n].norm() / b.b[n + 1].norm())
        .collect();
    ratios.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let radius_ratio_estimate =
        if ratios.is_empty() { f64::INFINITY } else { ratios[ratios.len() / 2] };

    Ok(GevreyReport {
        c_fit,
        radius_estimate,
        radius_ratio_estimate,
        residuals,
        root_test,
        superconvergent,
    })
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (slope, (sy - slope * sx) / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat_int;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn borel_of_constant() {
        let b = formal_borel(&[c(1.0), c(0.0), c(0.0)]);
        assert_eq!(b.b[0], c(1.0));
        assert_eq!(b.b[1], c(0.0));
    }

    #[test]
    fn borel_of_factorials_is_geometric() {
        let mut a = Vec::new();
        let mut f = 1.0;
        for n in 0..20 {
            if n > 0 {
                f *= n as f64;
            }
            a.push(c(f));
        }
        let b = formal_borel(&a);
        for bn in &b.b {
            assert!((bn.re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn borel_rational_round_trip() {
        // termwise Laplace L(xi^n) = n! h^{n+1} inverts the transform
        let a: Vec<Rat> = (0..8).map(|n| rat_int(2 * n as i64 + 1)).collect();
        let b = formal_borel_rational(&a);
        for (n, bn) in b.iter().enumerate() {
            assert_eq!(bn * Rat::from_integer(factorial(n)), a[n]);
        }
    }

    #[test]
    fn gevrey_synthetic_growth() {
        // a_n = n! 3^n: C_fit ~ 3, radius ~ 1/3
        let mut a = Vec::new();
        let mut f = 1.0f64;
        for n in 0..40 {
            if n > 0 {
                f *= n as f64;
            }
            a.push(c(f * 3.0f64.powi(n as i32)));
        }
        let r = gevrey_diagnose(&a).unwrap();
        assert!((r.c_fit - 3.0).abs() / 3.0 < 0.05, "C_fit = {}", r.c_fit);
        assert!((r.radius_estimate - 1.0 / 3.0).abs() / (1.0 / 3.0) < 0.05);
        assert!(!r.superconvergent);
    }

    #[test]
    fn gevrey_superconvergent_flagged() {
        let mut a = Vec::new();
        let mut f = 1.0f64;
        for n in 0..30 {
            if n > 0 {
                f *= n as f64;
            }
            a.push(c(1.0 / f));
        }
        let r = gevrey_diagnose(&a).unwrap();
        assert!(r.superconvergent);
        assert!(r.radius_estimate.is_infinite());
    }

    #[test]
    fn gevrey_rejects_degenerate_input() {
        assert!(matches!(gevrey_diagnose(&[c(1.0); 5]), Err(Error::UndefinedFit(_))));
        assert!(matches!(gevrey_diagnose(&[c(0.0); 20]), Err(Error::UndefinedFit(_))));
    }
}
