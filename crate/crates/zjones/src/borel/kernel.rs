//! Analytic continuation of the Borel transform of the torus-knot series.
//!
//! Writing the series as J(h) = g(h)·S(h) with the colour-independent
//! prefactor g(h) = (1/sqrt(pi)) e^{-(h/4)(p/m+m/p)} / sinh(h/2) and
//! S(h) = sum_k Gamma(k+1/2) Q[k] h^k, the Borel transform of h·J factors
//! through a convolution of two concretely computable functions:
//!
//!   B(h·J)(xi) = u0 · It(xi) + integral_0^xi Ht(xi - t) It(t) dt,
//!
//! where u(h) = h·g(h) = u0 + u1 h + ..., u0 = 2/sqrt(pi),
//! Ht(xi) = sum_{n>=0} u_{n+1} xi^n / n! is the regular (delta-free) part of
//! the Borel transform of h·g, an entire function of exponential order
//! 1/(2 pi), and It = B(S) with Taylor series
//! It(x) = sum_{k>=1} Gamma(k+1/2) Q[k] x^{k-1} / (k-1)!.
//!
//! It is twice the derivative of the convolution
//! I = Gamma(1/2)^{-1}/sqrt(x) * F(sqrt(x))/(2 sqrt(x)); both have the
//! quadrature forms used here,
//!
//!   I(x)  = (1/sqrt(pi)) integral_0^1 F (sqrt(x) u) (1-u^2)^{-1/2} du,
//!   It(x) = (1/sqrt(pi)) integral_0^1 F'(sqrt(x) u) u (1-u^2)^{-1/2} du / sqrt(x),
//!
//! single-valued in x because the integrands are even functions of sqrt(x).
//! Their singularities sit exactly on the cut (-inf, -pi^2/(mp)]. The
//! u0·It + convolution assembly is pinned by the Taylor cross-check against
//! the formal Borel coefficients of the series itself (see tests).

use num::complex::Complex64;


use crate::error::{Error, Result};
use crate::exact::mpoly::{MPoly, VarSet};
use crate::exact::rat::{rat, rat_to_f64};
use crate::exact::series::HSeries;
use crate::quad::{chebyshev_gauss_01, gauss_legendre, integrate_segment, KahanSum};
use crate::torus::{f_eval, f_prime_eval, TorusParams};

const PREFACTOR_ORDER: usize = 100;

/// Numeric machinery for one (m, p, colour) triple: evaluates Ht, I, It and
/// the continued Borel transform.
#[derive(Debug, Clone)]
pub struct BorelEvaluator {
    tp: TorusParams,
    s0: Complex64,
    /// u_{n+1}/n! for the Ht Taylor sum, from the exact prefactor series
    ht_coeffs: Vec<f64>,
    pub u0: f64,
    cheb: (Vec<f64>, f64),
    cheb_fine: (Vec<f64>, f64),
    gl: (Vec<f64>, Vec<f64>),
}

impl BorelEvaluator {
    pub fn new(tp: TorusParams, s0: Complex64) -> BorelEvaluator {
        // exact series of h·e^{-h c/4}/sinh(h/2); the 1/sqrt(pi) joins in floats
        let ring = VarSet::EMPTY;
        let n = PREFACTOR_ORDER;
        let expf = HSeries::exp_h(
            &MPoly::constant(ring, -tp.curvature() * rat(1, 4)),
            0,
            (n + 2) as i64,
        )
        .expect("order ok");
        let sinh_half =
            HSeries::two_sinh_half(&MPoly::one(ring), n + 2).expect("ring").scale(&rat(1, 2));
        let u = expf.shift_up(1).div(&sinh_half).expect("valuation 1 over 1");
        let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
        let mut fact = 1.0f64;
        let mut ht_coeffs = Vec::with_capacity(n);
        for k in 0..u.trunc() {
            if k > 0 {
                fact *= k as f64;
            }
            let uk1 = u.coeff(k + 1).as_constant().expect("constant ring");
            ht_coeffs.push(rat_to_f64(&uk1) * inv_sqrt_pi / fact);
        }
        let u0 = rat_to_f64(&u.coeff(0).as_constant().expect("constant")) * inv_sqrt_pi;
        BorelEvaluator {
            tp,
            s0,
            ht_coeffs,
            u0,
            cheb: chebyshev_gauss_01(96),
            cheb_fine: chebyshev_gauss_01(192),
            gl: gauss_legendre(16),
        }
    }

    pub fn params(&self) -> TorusParams {
        self.tp
    }

    pub fn colour(&self) -> Complex64 {
        self.s0
    }

    /// Regular part of the Borel transform of the wrapped prefactor, by
    /// Taylor summation. Fails loudly when the f64 budget cannot deliver
    /// `tol_rel`, instead of returning silently rounded garbage.
    pub fn h_eval(&self, xi: Complex64, tol_rel: f64) -> Result<Complex64> {
        let mut sum = KahanSum::new();
        let mut pw = Complex64::new(1.0, 0.0);
        let mut n_used = 0usize;
        let mut last = f64::INFINITY;
        for (n, c) in self.ht_coeffs.iter().enumerate() {
            let term = pw * *c;
            sum.add(term);
            pw *= xi;
            n_used = n;
            last = term.norm();
            if last < 1e-22 * sum.value().norm().max(1e-300) && n as f64 > xi.norm() / 4.0 {
                break;
            }
        }
        let value = sum.value();
        let round = sum.roundoff_estimate(n_used + 1);
        // tail estimate: remaining terms of an exponentially dominated series
        let tail = last * 2.0;
        let err = round + tail;
        if err > tol_rel * value.norm().max(1e-30) {
            return Err(Error::PrecisionExceeded(format!(
                "Ht({xi}): estimated error {err:.2e} exceeds budget (|sum| = {:.2e})",
                value.norm()
            )));
        }
        Ok(value)
    }

    fn cut_radius(&self) -> f64 {
        self.tp.borel_radius()
    }

    /// Nonzero integer colour makes F entire: no poles, no cut.
    pub fn integer_colour(&self) -> bool {
        self.s0.im == 0.0
            && self.s0.re.round() != 0.0
            && (self.s0.re - self.s0.re.round()).abs() < 1e-12
    }

    fn check_off_cut(&self, x: Complex64) -> Result<()> {
        if self.integer_colour() {
            return Ok(());
        }
        let r = self.cut_radius();
        if x.im == 0.0 && x.re <= -r + 1e-12 {
            return Err(Error::BranchCut(format!(
                "x = {x} lies on the cut (-inf, {:.6}]",
                -r
            )));
        }
        Ok(())
    }

    fn cheb_integral<G>(&self, g: G, fine: bool) -> Complex64
    where
        G: Fn(f64) -> Complex64,
    {
        let (nodes, w) = if fine { &self.cheb_fine } else { &self.cheb };
        let mut acc = Complex64::new(0.0, 0.0);
        for &u in nodes {
            acc += g(u);
        }
        acc * *w
    }

    /// The convolution function I(x) with Taylor series
    /// sum_k Q[k] Gamma(k+1/2) x^k / (2 k!), evaluated by Chebyshev–Gauss
    /// quadrature; analytic off the cut.
    pub fn i_eval(&self, x: Complex64) -> Result<Complex64> {
        self.check_off_cut(x)?;
        Ok(self.i_eval_unchecked(x, false))
    }

    /// One-sided limit of I on the cut: side +1 approaches from Im > 0.
    ///
    /// Under u = sin(phi) the integral becomes a phi-integral over [0, pi/2];
    /// approaching from x + i·eps moves the integrand's poles off the real
    /// u-axis upward, so the limit equals the integral along a path detoured
    /// into the lower half plane (and mirrored for the other side). Refuses
    /// points too close to a branch point, where the pole pins the endpoint.
    pub fn i_eval_one_sided(&self, x_re: f64, side: i8) -> Result<Complex64> {
        let x = Complex64::new(x_re, 0.0);
        self.check_branch_point_distance(x_re)?;
        let sx = x.sqrt();
        let tp = self.tp;
        let s0 = self.s0;
        let v = self.phi_detour_integral(|u| f_eval(tp, s0, sx * u), side)?;
        Ok(v / std::f64::consts::PI.sqrt())
    }

    /// One-sided limit of It on the cut, same contract as `i_eval_one_sided`.
    pub fn i_tilde_one_sided(&self, x_re: f64, side: i8) -> Result<Complex64> {
        let x = Complex64::new(x_re, 0.0);
        self.check_branch_point_distance(x_re)?;
        let sx = x.sqrt();
        let tp = self.tp;
        let s0 = self.s0;
        let v = self.phi_detour_integral(|u| f_prime_eval(tp, s0, sx * u) * u, side)?;
        Ok(v / sx / std::f64::consts::PI.sqrt())
    }

    fn check_branch_point_distance(&self, x_re: f64) -> Result<()> {
        if self.integer_colour() {
            return Ok(());
        }
        let r = self.cut_radius();
        let mut k = 1.0;
        while k * k * r <= x_re.abs() * 1.2 {
            if (x_re.abs() - k * k * r).abs() < 0.03 * k * k * r {
                return Err(Error::ContourPole(format!(
                    "x = {x_re} within 3% of the branch point {}",
                    -k * k * r
                )));
            }
            k += 1.0;
        }
        Ok(())
    }

    /// Gauss–Legendre integral of g(sin(phi)) over the polyline
    /// 0 -> pi/4 - i·side·0.4 -> pi/2 in the phi plane.
    fn phi_detour_integral<G>(&self, mut g: G, side: i8) -> Result<Complex64>
    where
        G: FnMut(Complex64) -> Complex64,
    {
        if side == 0 {
            return Err(Error::BranchCut("side must be +1 or -1".into()));
        }
        let eta = -0.4 * side as f64;
        let mid = Complex64::new(std::f64::consts::FRAC_PI_4, eta);
        let endpoints =
            [Complex64::new(0.0, 0.0), mid, Complex64::new(std::f64::consts::FRAC_PI_2, 0.0)];
        let mut total = Complex64::new(0.0, 0.0);
        for seg in endpoints.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let (nodes, weights) = &self.gl;
            for panel in 0..8 {
                let pa = a + (b - a) * (panel as f64 / 8.0);
                let pb = a + (b - a) * ((panel + 1) as f64 / 8.0);
                let mid2 = (pa + pb) * 0.5;
                let half = (pb - pa) * 0.5;
                for (t, w) in nodes.iter().zip(weights) {
                    let phi = mid2 + half * t;
                    total += g(phi.sin()) * *w * half;
                }
            }
        }
        Ok(total)
    }

    fn i_eval_unchecked(&self, x: Complex64, fine: bool) -> Complex64 {
        let sx = x.sqrt();
        let tp = self.tp;
        let s0 = self.s0;
        let v = self.cheb_integral(|u| f_eval(tp, s0, sx * u), fine);
        v / std::f64::consts::PI.sqrt()
    }

    /// It(x) = 2 I'(x), the Borel transform of the Gamma-weighted series,
    /// with Taylor series sum_k Gamma(k+1/2) Q[k] x^{k-1}/(k-1)!.
    pub fn i_tilde(&self, x: Complex64) -> Result<Complex64> {
        self.check_off_cut(x)?;
        Ok(self.i_tilde_unchecked(x, false))
    }

    fn i_tilde_unchecked(&self, x: Complex64, fine: bool) -> Complex64 {
        let tp = self.tp;
        let s0 = self.s0;
        if x.norm() < 1e-12 {
            // leading Taylor value Gamma(3/2) Q[1] / 0! = sqrt(pi)/2 / sqrt(pi)...
            // computed directly: integrand -> 2 u^2, integral pi/4, value sqrt(pi)/2
            return Complex64::new(0.5 * std::f64::consts::PI.sqrt(), 0.0);
        }
        let sx = x.sqrt();
        let v = self.cheb_integral(|u| f_prime_eval(tp, s0, sx * u) * u, fine);
        v / sx / std::f64::consts::PI.sqrt()
    }

    /// The analytically continued Borel transform of h·J at xi, together with
    /// an a posteriori error estimate. The straight segment [0, xi] must stay
    /// off the cut.
    pub fn borel_eval(&self, xi: Complex64) -> Result<(Complex64, f64)> {
        self.check_off_cut(xi)?;
        if xi.norm() == 0.0 {
            // B(hJ)(0) = a_0 = u0 · It(0)
            return Ok((self.i_tilde_unchecked(xi, false) * self.u0, 0.0));
        }
        let tol = 1e-11;
        let direct = self.i_tilde_unchecked(xi, false) * self.u0;
        let panels = (xi.norm() * 1.2).ceil() as usize + 2;
        let conv = |fine: bool, panels: usize| -> Result<Complex64> {
            let mut err: Option<Error> = None;
            let v = integrate_segment(
                |t| {
                    let ht = match self.h_eval(xi - t, 1e-9) {
                        Ok(v) => v,
                        Err(e) => {
                            err = Some(e);
                            Complex64::new(0.0, 0.0)
                        }
                    };
                    ht * self.i_tilde_unchecked(t, fine)
                },
                xi,
                panels,
                &self.gl,
            );
            match err {
                Some(e) => Err(e),
                None => Ok(v),
            }
        };
        let coarse = conv(false, panels)?;
        let refined = conv(true, panels * 2)?;
        let est = (refined - coarse).norm();
        let value = direct + refined;
        if est > tol * value.norm().max(1.0) * 100.0 {
            // one more refinement level before giving up
            let finer = conv(true, panels * 4)?;
            let est2 = (finer - refined).norm();
            return Ok((direct + finer, est2));
        }
        Ok((value, est))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borel::formal_borel_rational;
    use crate::exact::rat::{rat, rat_int, rat_to_f64};
    use crate::knot::series_at_colour;
    use crate::quad::integrate_segment;
    use crate::torus::jones_torus;

    fn ev(m: i64, p: i64, s: f64) -> BorelEvaluator {
        let tp = TorusParams::new(m, p).unwrap();
        BorelEvaluator::new(tp, Complex64::new(s, 0.0))
    }

    #[test]
    fn ht_at_zero_is_first_order_coefficient() {
        // Ht(0) = u_1: the h^1 coefficient of the wrapped prefactor series
        let e = ev(2, 3, 0.5);
        let got = e.h_eval(Complex64::new(0.0, 0.0), 1e-12).unwrap();
        // u(h) = h e^{-13h/24}/(sqrt(pi) sinh(h/2)): u1 = -13/(12 sqrt(pi))...
        // computed independently: u(h) = (1/sqrt(pi))(2 - 13h/12 + ...)
        let expect = (2.0 - 13.0 / 12.0 * 1.0) - 2.0; // placeholder, replaced below
        let _ = expect;
        // independent finite-difference of h·g(h) at 0: u1 = d/dh [h g(h)] |_0
        let g = |h: f64| {
            h * (-h * 13.0 / 24.0).exp() / (h / 2.0).sinh() / std::f64::consts::PI.sqrt()
        };
        let u1 = (g(1e-5) - g(-1e-5)) / 2e-5;
        assert!((got.re - u1).abs() < 1e-8, "got {} expect {}", got.re, u1);
    }

    #[test]
    fn ht_laplace_round_trip() {
        // u0 + L(Ht)(h) = u(h) at h = 0.3: the numeric Laplace transform on a
        // truncated contour recovers the source prefactor function
        let e = ev(2, 3, 0.5);
        let h = Complex64::new(0.3, 0.0);
        let rule = gauss_legendre(24);
        let end = Complex64::new(12.0, 0.0);
        let lap = integrate_segment(
            |xi| (-xi / h).exp() * e.h_eval(xi, 1e-9).unwrap(),
            end,
            40,
            &rule,
        );
        let source = 0.3 * (-0.3 * 13.0 / 24.0_f64).exp()
            / (0.15_f64).sinh()
            / std::f64::consts::PI.sqrt();
        assert!((lap.re - (source - e.u0)).abs() < 1e-8, "lap {} vs {}", lap.re, source - e.u0);
    }

    #[test]
    fn ht_growth_is_subexponential_over_pi() {
        // log|Ht(R e^{i theta})| / R <= 1/pi + margin, R up to 30
        let e = ev(2, 3, 0.5);
        for theta in [0.0, 1.0, 2.5, 3.1, 4.0] {
            for r in [10.0, 20.0, 30.0] {
                let xi = Complex64::from_polar(r, theta);
                let v = e.h_eval(xi, 1e-6).unwrap();
                let rate = v.norm().ln() / r;
                assert!(
                    rate <= 1.0 / std::f64::consts::PI + 0.05,
                    "rate {rate} at R={r}, theta={theta}"
                );
            }
        }
    }

    #[test]
    fn i_taylor_cross_check() {
        // I(x) = sum Q[k] Gamma(k+1/2) x^k / (2 k!) for small |x|
        let tp = TorusParams::new(2, 3).unwrap();
        let e = ev(2, 3, 0.5);
        let qt = crate::torus::f_coeffs(tp, 12);
        for x in [0.05, 0.1, -0.08] {
            let xc = Complex64::new(x, 0.0);
            let quad = e.i_eval(xc).unwrap();
            let mut taylor = 0.0;
            let mut gamma_half = std::f64::consts::PI.sqrt(); // Gamma(1/2)
            let mut fact = 1.0;
            for k in 1..=12usize {
                gamma_half *= k as f64 - 0.5; // Gamma(k+1/2)
                fact *= k as f64;
                let mut assign = std::collections::BTreeMap::new();
                assign.insert(crate::exact::mpoly::Var::S, rat(1, 2));
                let qk = rat_to_f64(&qt.q[k].eval_rat(&assign).unwrap());
                taylor += qk * gamma_half / (2.0 * fact) * x.powi(k as i32);
            }
            assert!((quad.re - taylor).abs() < 1e-10, "x={x}: {quad} vs {taylor}");
        }
    }

    #[test]
    fn i_tilde_taylor_cross_check() {
        let tp = TorusParams::new(2, 3).unwrap();
        let e = ev(2, 3, 0.5);
        let qt = crate::torus::f_coeffs(tp, 12);
        for x in [0.05, -0.1] {
            let xc = Complex64::new(x, 0.0);
            let quad = e.i_tilde(xc).unwrap();
            let mut taylor = 0.0;
            let mut gamma_half = std::f64::consts::PI.sqrt();
            let mut fact_km1 = 1.0;
            for k in 1..=12usize {
                gamma_half *= k as f64 - 0.5;
                if k >= 2 {
                    fact_km1 *= (k - 1) as f64;
                }
                let mut assign = std::collections::BTreeMap::new();
                assign.insert(crate::exact::mpoly::Var::S, rat(1, 2));
                let qk = rat_to_f64(&qt.q[k].eval_rat(&assign).unwrap());
                taylor += qk * gamma_half / fact_km1 * x.powi(k as i32 - 1);
            }
            assert!((quad.re - taylor).abs() < 1e-9, "x={x}: {quad} vs {taylor}");
        }
    }

    #[test]
    fn i_vanishes_at_zero_and_cut_is_enforced() {
        let e = ev(2, 3, 0.5);
        let v = e.i_eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14);
        let r = e.params().borel_radius();
        assert!(e.i_eval(Complex64::new(-r - 1.0, 0.0)).is_err());
        // one-sided limits across the cut: a visible jump, conjugate to each
        // other (the integrand data is real), each consistent with nearby
        // off-axis values
        let above = e.i_eval_one_sided(-r - 1.0, 1).unwrap();
        let below = e.i_eval_one_sided(-r - 1.0, -1).unwrap();
        assert!((above - below).norm() > 1e-3, "jump {}", (above - below).norm());
        assert!((above - below.conj()).norm() < 1e-8);
        // continuity ladder towards the cut from above
        let far = e.i_eval(Complex64::new(-r - 1.0, 0.8)).unwrap();
        let near = e.i_eval(Complex64::new(-r - 1.0, 0.4)).unwrap();
        let jump = (above - below).norm();
        assert!((near - above).norm() < (far - above).norm() + 1e-9);
        assert!((near - above).norm() < jump, "side labelling: {near} vs {above}");
    }

    #[test]
    fn integer_colour_entire_through_the_cut() {
        // at s = 2 the function is entire: one-sided limits coincide and the
        // on-axis value is real
        let e = ev(2, 3, 2.0);
        let above = e.i_eval_one_sided(-5.0, 1).unwrap();
        let below = e.i_eval_one_sided(-5.0, -1).unwrap();
        assert!((above - below).norm() < 1e-9, "diff {}", (above - below).norm());
        let on_axis = e.i_eval(Complex64::new(-5.0, 0.0)).unwrap();
        assert!(on_axis.im.abs() < 1e-10);
        assert!((above - on_axis).norm() < 1e-8);
    }

    #[test]
    fn borel_eval_matches_taylor_near_zero() {
        let tp = TorusParams::new(2, 3).unwrap();
        let e = ev(2, 3, 0.5);
        let j = jones_torus(tp, 40).unwrap();
        let a = series_at_colour(&j.series, rat(1, 2)).unwrap();
        let b = formal_borel_rational(&a);
        for xi in [0.1, 0.3, -0.3] {
            let xic = Complex64::new(xi, 0.0);
            let (conv, _) = e.borel_eval(xic).unwrap();
            let mut taylor = 0.0;
            for (n, bn) in b.iter().enumerate() {
                taylor += rat_to_f64(bn) * xi.powi(n as i32);
            }
            assert!((conv.re - taylor).abs() < 1e-8, "xi={xi}: {} vs {taylor}", conv.re);
        }
    }

    #[test]
    fn borel_eval_value_at_zero_is_one() {
        // a_0 = 1 for the torus series, and B(hJ)(0) = a_0
        let e = ev(2, 5, 0.5);
        let (v, _) = e.borel_eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn borel_growth_bound_along_rays() {
        let e = ev(2, 3, 0.5);
        for (r, theta) in [(5.0, 0.0), (10.0, 0.0), (8.0, 1.2), (8.0, -2.0)] {
            let xi = Complex64::from_polar(r, theta);
            let (v, _) = e.borel_eval(xi).unwrap();
            let rate = v.norm().max(1e-12).ln() / r;
            assert!(rate < 1.0 / std::f64::consts::PI + 0.1, "rate {rate} at R={r} theta={theta}");
        }
    }

    #[test]
    fn integer_colour_no_cut_sensitivity() {
        // at s = 2 the Borel transform is entire: the on-axis value at -5 is
        // real, and xi = -5 ± 0.01i differ from it only by the analytic
        // derivative term (shrinking linearly in the offset), not by a jump
        let e = ev(2, 3, 2.0);
        let on_axis = e.borel_eval(Complex64::new(-5.0, 0.0)).unwrap().0;
        assert!(on_axis.im.abs() < 1e-8, "Im {}", on_axis.im);
        let above = e.borel_eval(Complex64::new(-5.0, 0.01)).unwrap().0;
        let below = e.borel_eval(Complex64::new(-5.0, -0.01)).unwrap().0;
        assert!((above - below.conj()).norm() < 1e-8);
        let d1 = (above - below).norm();
        let above2 = e.borel_eval(Complex64::new(-5.0, 0.005)).unwrap().0;
        let below2 = e.borel_eval(Complex64::new(-5.0, -0.005)).unwrap().0;
        let d2 = (above2 - below2).norm();
        // analytic: halving the offset halves the difference; a cut would
        // leave a constant-size jump
        assert!((d1 - 2.0 * d2).abs() < 0.1 * d1 + 1e-9, "d1 {d1} d2 {d2}");
    }

    #[test]
    fn rational_borel_of_torus_series() {
        // spot value: b_0 = a_0 = 1 and b_1 = a_1
        let tp = TorusParams::new(2, 3).unwrap();
        let j = jones_torus(tp, 6).unwrap();
        let a = series_at_colour(&j.series, rat(1, 2)).unwrap();
        let b = formal_borel_rational(&a);
        assert_eq!(b[0], rat_int(1));
        assert_eq!(b[1], a[1]);
        assert_eq!(b[2], &a[2] / rat_int(2));
    }
}
