//! Torus-knot engine: exact expansion coefficients, the Gamma-weighted
//! series, and the Gaussian-integral evaluation in closed form (integer
//! colour) and by quadrature (any colour).
//!
//! The generating function, with A = sqrt(mp), a = sqrt(m/p), b = sqrt(p/m):
//!
//!   F(y) = sinh(s A y) sinh(a y) sinh(b y) / (s sinh(A y)),
//!
//! an even entire-or-meromorphic function of y whose expansion
//! F(sqrt(h) x) = sum_{k>=1} Q[k] h^k x^{2k} has coefficients Q[k] that are
//! exact polynomials in s^2 with rational coefficients: every irrational
//! square root cancels because only even combinations appear. The series
//!
//!   J(h) = e^{-(h/4)(p/m + m/p)} · [ sum_k (2k)!/(4^k k!) Q[k] h^k ] / sinh(h/2)
//!
//! uses the rationalised Gaussian moment (1/sqrt(pi))·Gamma(k+1/2)
//! = (2k)!/(4^k k!); the constant is pinned by the exact identity J === 1 at
//! s = 1 (the Gaussian integral then cancels the prefactor termwise).

use num::complex::Complex64;
use num::One;

use crate::error::{Error, Result};
use crate::exact::mpoly::{MPoly, VarSet};
use crate::exact::rat::{factorial, gcd_i64, rat, rat_int, rat_to_f64, Rat};
use crate::exact::series::HSeries;
use crate::knot::{JonesSeries, KnotKind, KnotSpec};
use crate::quad::{gauss_legendre, integrate_real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusParams {
    m: i64,
    p: i64,
}

impl TorusParams {
    pub fn new(m: i64, p: i64) -> Result<TorusParams> {
        if m < 2 || p < 2 || gcd_i64(m, p) != 1 {
            return Err(Error::NonCoprime { m, p });
        }
        Ok(TorusParams { m, p })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn mp(&self) -> i64 {
        self.m * self.p
    }

    /// p/m + m/p as an exact rational.
    pub fn curvature(&self) -> Rat {
        rat(self.p, self.m) + rat(self.m, self.p)
    }

    /// Location of the nearest Borel-plane singularity: pi^2/(mp).
    pub fn borel_radius(&self) -> f64 {
        std::f64::consts::PI * std::f64::consts::PI / self.mp() as f64
    }
}

/// Exact expansion coefficients Q[1..=kmax]; Q[k] is even in s of degree
/// <= 2k-2 and Q[1] = 1. Index 0 is a zero placeholder.
#[derive(Debug, Clone)]
pub struct QTable {
    pub q: Vec<MPoly>,
}

/// Build the Q table from the x = y^2 expansions of the two even factors:
///   sinh(s A y)/(s sinh(A y)) = [sum_j s^{2j} (mp)^j x^j/(2j+1)!]
///                             / [sum_j (mp)^j x^j/(2j+1)!]
///   sinh(a y) sinh(b y) = (1/2) sum_j [(c+2)^j - (c-2)^j] x^j/(2j)!,
/// with c = m/p + p/m, so all arithmetic stays rational.
pub fn f_coeffs(tp: TorusParams, kmax: usize) -> QTable {
    let ring = VarSet::S;
    let mp = rat_int(tp.mp());
    let s2 = crate::knot::s_poly().mul(&crate::knot::s_poly()).expect("ring");

    let mut num = Vec::with_capacity(kmax + 1);
    let mut den = Vec::with_capacity(kmax + 1);
    let mut s_pow = MPoly::one(ring);
    let mut mp_pow = Rat::one();
    for j in 0..=kmax {
        let inv_fact = Rat::from_integer(factorial(2 * j + 1)).recip();
        num.push(s_pow.scale(&(&mp_pow * &inv_fact)));
        den.push(MPoly::constant(ring, &mp_pow * &inv_fact));
        if j < kmax {
            s_pow = s_pow.mul(&s2).expect("ring");
            mp_pow *= &mp;
        }
    }
    let ratio = HSeries::from_coeffs(ring, num).div(&HSeries::from_coeffs(ring, den)).expect("unit");

    let cplus = tp.curvature() + rat_int(2);
    let cminus = tp.curvature() - rat_int(2);
    let mut prod = Vec::with_capacity(kmax + 1);
    let mut pw_plus = Rat::one();
    let mut pw_minus = Rat::one();
    for j in 0..=kmax {
        let c = (&pw_plus - &pw_minus) * Rat::from_integer(factorial(2 * j)).recip() * rat(1, 2);
        prod.push(MPoly::constant(ring, c));
        if j < kmax {
            pw_plus *= &cplus;
            pw_minus *= &cminus;
        }
    }
    let f = ratio.mul(&HSeries::from_coeffs(ring, prod)).expect("ring");
    QTable { q: f.coeffs().to_vec() }
}

/// The exact colour-s series of the (m,p)-torus knot in the normalisation
/// that carries the expansion's intrinsic framing (measured +2mp relative to
/// the zero-framed cyclotomic series; see the trefoil identification test).
pub fn jones_torus(tp: TorusParams, order: i64) -> Result<JonesSeries> {
    if order < 0 {
        return Err(Error::InvalidOrder(format!("jones_torus order {order}")));
    }
    let n = order as usize;
    let qt = f_coeffs(tp, n + 1);
    let ring = VarSet::S;
    let mut num = vec![MPoly::zero(ring); n + 2];
    for (k, q) in qt.q.iter().enumerate().skip(1) {
        // (2k)!/(4^k k!)
        let w = Rat::new(factorial(2 * k), factorial(k) << (2 * k));
        num[k] = q.scale(&w);
    }
    let series = HSeries::from_coeffs(ring, num);
    let expf = HSeries::exp_h(&MPoly::constant(ring, -tp.curvature() * rat(1, 4)), 0, (n + 1) as i64)?;
    let sinh_half = HSeries::two_sinh_half(&MPoly::one(ring), n + 2)?.scale(&rat(1, 2));
    let j = expf.mul(&series)?.div(&sinh_half)?.truncate(n);
    let knot = KnotSpec::new(KnotKind::Torus(tp.m, tp.p));
    Ok(JonesSeries { series: j, knot, normalized: false })
}

/// F(y) for complex y at a complex colour.
pub fn f_eval(tp: TorusParams, s: Complex64, y: Complex64) -> Complex64 {
    let a_big = (tp.mp() as f64).sqrt();
    let a = (tp.m as f64 / tp.p as f64).sqrt();
    let b = (tp.p as f64 / tp.m as f64).sqrt();
    if y.norm() < 1e-8 {
        // F(y) = y^2 (1 + O(y^2)) uniformly in s
        return y * y;
    }
    let ratio = if s.norm() < 1e-12 {
        // sinh(s A y)/s -> A y
        y * a_big / (a_big * y).sinh()
    } else {
        (s * a_big * y).sinh() / (s * (a_big * y).sinh())
    };
    ratio * (a * y).sinh() * (b * y).sinh()
}

/// dF/dy for complex y.
pub fn f_prime_eval(tp: TorusParams, s: Complex64, y: Complex64) -> Complex64 {
    let a_big = (tp.mp() as f64).sqrt();
    let a = (tp.m as f64 / tp.p as f64).sqrt();
    let b = (tp.p as f64 / tp.m as f64).sqrt();
    if y.norm() < 1e-8 {
        return 2.0 * y;
    }
    let (sh, ch) = ((a_big * y).sinh(), (a_big * y).cosh());
    let (ratio, dratio) = if s.norm() < 1e-12 {
        let r = y * a_big / sh;
        (r, (a_big * sh - a_big * a_big * y * ch) / (sh * sh))
    } else {
        let (shs, chs) = ((s * a_big * y).sinh(), (s * a_big * y).cosh());
        let r = shs / (s * sh);
        let dr = (s * a_big * chs * sh - a_big * ch * shs) / (s * sh * sh);
        (r, dr)
    };
    let (pa, pb) = ((a * y).sinh(), (b * y).sinh());
    let dp = a * (a * y).cosh() * pb + b * pa * (b * y).cosh();
    dratio * pa * pb + ratio * dp
}

/// Closed-form value at nonzero integer colour n = 2z+1: the sinh ratio
/// telescopes into |n| exponentials and every Gaussian integral is
/// e^{gamma^2 h/4} with gamma^2 rational, so the only floating steps are the
/// final exponentials.
pub fn kashaev_closed(tp: TorusParams, n: i64, h: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::RepDomain("colour 2z+1 must be a nonzero integer".into()));
    }
    if h.norm() == 0.0 || (h / 2.0).sinh().norm() < 1e-300 {
        return Err(Error::SingularPrefactor(format!("sinh(h/2) vanishes at h = {h}")));
    }
    let nn = n.unsigned_abs() as i64;
    let c = tp.curvature();
    // gamma^2 = (n'-1-2j)^2 mp + 2 (n'-1-2j) (m ± p) + (c ± 2), all rational
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..nn {
        let d = nn - 1 - 2 * j;
        let base = rat_int(d * d * tp.mp());
        for (cross, extra, sign) in [
            (rat_int(d * (tp.m + tp.p)), &c + rat_int(2), 1.0),
            (rat_int(d * (tp.m - tp.p)), &c - rat_int(2), -1.0),
            (rat_int(-d * (tp.m - tp.p)), &c - rat_int(2), -1.0),
            (rat_int(-d * (tp.m + tp.p)), &c + rat_int(2), 1.0),
        ] {
            let gamma2 = &base + rat_int(2) * cross + extra;
            let expo = h * (rat_to_f64(&gamma2) / 4.0);
            total += expo.exp() * sign;
        }
    }
    total /= 4.0 * nn as f64;
    let pref = (-h * (rat_to_f64(&c) / 4.0)).exp() / (h / 2.0).sinh();
    Ok(pref * total)
}

/// Configuration for the direct Gaussian-integral evaluation.
#[derive(Debug, Clone, Copy)]
pub struct GaussQuadConfig {
    pub tol: f64,
    pub max_doublings: usize,
    /// rotate the x-contour to e^{i phi} R (needed when Re h <= 0)
    pub contour_angle: f64,
}

impl Default for GaussQuadConfig {
    fn default() -> Self {
        GaussQuadConfig { tol: 1e-12, max_doublings: 8, contour_angle: 0.0 }
    }
}

/// Evaluate the Gaussian-integral formula
///   J = prefactor · (1/sqrt(pi)) ∫_R e^{-x^2} F(sqrt(h) x) dx
/// by adaptive composite Gauss–Legendre on a truncated, possibly rotated
/// contour. Returns the value and an a posteriori error estimate.
pub fn kashaev_quadrature(
    tp: TorusParams,
    s0: Complex64,
    h: Complex64,
    cfg: &GaussQuadConfig,
) -> Result<(Complex64, f64)> {
    if h.norm() == 0.0 {
        return Err(Error::SingularPrefactor("h = 0".into()));
    }
    let phi = cfg.contour_angle;
    if h.re <= 0.0 && phi == 0.0 {
        return Err(Error::ContourPole(
            "Re(h) <= 0 puts the poles of F on the real contour; supply a rotated contour".into(),
        ));
    }
    // poles of F(sqrt(h) x e^{i phi}) sit where sqrt(h) x e^{i phi} is purely
    // imaginary; require the contour direction to stay away from them
    let sqrt_h = h.sqrt();
    let dir = sqrt_h.arg() + phi;
    if dir.cos().abs() < 0.05 {
        return Err(Error::ContourPole(format!(
            "contour direction {:.3} rad nearly parallel to the pole line",
            dir
        )));
    }
    // the rotated Gaussian must still decay
    if (2.0 * phi).cos() <= 0.05 {
        return Err(Error::ContourPole(format!("rotation {phi:.3} destroys Gaussian decay")));
    }

    // growth constant per the bound |F(y)| <= A e^{C|y|}
    let big_c = (s0.re.abs() + 2.0) * (tp.mp() as f64).sqrt() * sqrt_h.norm();
    let ln_tol = (cfg.tol * 1e-2).ln();
    let x_max = 0.5 * (big_c + (big_c * big_c - 4.0 * ln_tol).sqrt()).max(6.0);
    let tail = (-x_max * x_max * (2.0 * phi).cos() + big_c * x_max).exp();

    let w = Complex64::new(phi.cos(), phi.sin());
    let rule = gauss_legendre(16);
    let integrand = |x: f64| {
        let xx = w * x;
        (-(xx * xx)).exp() * f_eval(tp, s0, sqrt_h * xx) * w
    };
    let mut panels = 8usize;
    let mut prev = integrate_real(&integrand, -x_max, x_max, panels, &rule);
    let mut best = prev;
    let mut err = f64::INFINITY;
    for _ in 0..cfg.max_doublings {
        panels *= 2;
        best = integrate_real(&integrand, -x_max, x_max, panels, &rule);
        err = (best - prev).norm();
        prev = best;
        if err < cfg.tol * 0.5 {
            break;
        }
    }
    let achieved = err + tail;
    if achieved > cfg.tol {
        return Err(Error::ToleranceNotMet { requested: cfg.tol, achieved });
    }
    let pref = (-h * (rat_to_f64(&tp.curvature()) / 4.0)).exp() / (h / 2.0).sinh();
    let value = pref * best / std::f64::consts::PI.sqrt();
    Ok((value, achieved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::mpoly::Var;
    use crate::knot::series_at_colour;
    use num::Zero;

    #[test]
    fn params_validated() {
        assert!(TorusParams::new(2, 3).is_ok());
        assert!(TorusParams::new(2, 4).is_err());
        assert!(TorusParams::new(1, 3).is_err());
    }

    #[test]
    fn q_table_first_entries() {
        let tp = TorusParams::new(2, 3).unwrap();
        let qt = f_coeffs(tp, 3);
        assert_eq!(qt.q[1].to_string(), "1");
        // Q[2] = s^2 - 23/36
        assert_eq!(qt.q[2].to_string(), "s^2 - 23/36");
    }

    #[test]
    fn q_table_parity_and_degree() {
        for (m, p) in [(2, 3), (2, 5), (3, 4), (3, 5), (5, 7)] {
            let tp = TorusParams::new(m, p).unwrap();
            let qt = f_coeffs(tp, 8);
            for (k, q) in qt.q.iter().enumerate().skip(1) {
                assert!(q.is_even_in(Var::S), "Q[{k}] odd for ({m},{p})");
                assert!(q.degree_in(Var::S) <= 2 * k as i64 - 2, "degree Q[{k}] for ({m},{p})");
            }
            assert_eq!(qt.q[1].to_string(), "1");
        }
    }

    #[test]
    fn q_table_at_trivial_colour_is_product_series() {
        // at s=1 the ratio factor is identically 1, so Q[k] reduces to the
        // Taylor coefficients of sinh(a y) sinh(b y) in x = y^2
        let tp = TorusParams::new(2, 3).unwrap();
        let qt = f_coeffs(tp, 5);
        let c = tp.curvature();
        let mut pw_plus = Rat::one();
        let mut pw_minus = Rat::one();
        for k in 0..=5usize {
            let expect = (&pw_plus - &pw_minus) * Rat::from_integer(factorial(2 * k)).recip()
                * rat(1, 2);
            let mut assign = std::collections::BTreeMap::new();
            assign.insert(Var::S, rat_int(1));
            assert_eq!(qt.q[k].eval_rat(&assign).unwrap(), expect, "k={k}");
            pw_plus *= &c + rat_int(2);
            pw_minus *= &c - rat_int(2);
        }
    }

    #[test]
    fn torus_series_normalisation() {
        let tp = TorusParams::new(2, 3).unwrap();
        let j = jones_torus(tp, 8).unwrap();
        assert_eq!(j.series.coeff(0).to_string(), "1");
        // h^1 coefficient 3(s^2-1)/2
        assert_eq!(j.series.coeff(1).to_string(), "3/2*s^2 - 3/2");
    }

    #[test]
    fn torus_trivial_colour_identity() {
        for (m, p) in [(2, 3), (3, 4)] {
            let tp = TorusParams::new(m, p).unwrap();
            let j = jones_torus(tp, 12).unwrap();
            let at1 = series_at_colour(&j.series, rat_int(1)).unwrap();
            assert_eq!(at1[0], rat_int(1));
            assert!(at1[1..].iter().all(|c| c.is_zero()), "({m},{p}) at s=1");
        }
    }

    #[test]
    fn closed_form_trivial_colour_is_one() {
        let tp = TorusParams::new(2, 3).unwrap();
        for h in [Complex64::new(0.2, 0.0), Complex64::new(0.7, 0.3), Complex64::new(-0.4, 0.1)] {
            let v = kashaev_closed(tp, 1, h).unwrap();
            assert!((v - 1.0).norm() < 1e-12, "h={h}: {v}");
        }
    }

    #[test]
    fn closed_form_even_in_colour() {
        let tp = TorusParams::new(2, 5).unwrap();
        let h = Complex64::new(0.15, 0.05);
        let a = kashaev_closed(tp, 3, h).unwrap();
        let b = kashaev_closed(tp, -3, h).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn closed_form_rejects_singular_prefactor() {
        let tp = TorusParams::new(2, 3).unwrap();
        assert!(matches!(
            kashaev_closed(tp, 2, Complex64::new(0.0, 0.0)),
            Err(Error::SingularPrefactor(_))
        ));
        assert!(matches!(kashaev_closed(tp, 0, Complex64::new(0.1, 0.0)), Err(Error::RepDomain(_))));
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let tp = TorusParams::new(2, 3).unwrap();
        let h = Complex64::new(0.2, 0.0);
        let closed = kashaev_closed(tp, 2, h).unwrap();
        let (quad, err) =
            kashaev_quadrature(tp, Complex64::new(2.0, 0.0), h, &GaussQuadConfig::default())
                .unwrap();
        assert!(err < 1e-10);
        assert!((closed - quad).norm() < 1e-10, "closed {closed} vs quad {quad}");
    }

    #[test]
    fn quadrature_trivial_colour() {
        let tp = TorusParams::new(3, 4).unwrap();
        let (v, _) = kashaev_quadrature(
            tp,
            Complex64::new(1.0, 0.0),
            Complex64::new(0.35, 0.0),
            &GaussQuadConfig::default(),
        )
        .unwrap();
        assert!((v - 1.0).norm() < 1e-10);
    }

    #[test]
    fn quadrature_contour_validation() {
        let tp = TorusParams::new(2, 3).unwrap();
        let r = kashaev_quadrature(
            tp,
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.2, 0.0),
            &GaussQuadConfig::default(),
        );
        assert!(matches!(r, Err(Error::ContourPole(_))));
    }
}
