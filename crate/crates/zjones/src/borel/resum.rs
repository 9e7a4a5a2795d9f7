//! Directional Laplace resummation of the torus-knot Borel transform, the
//! incomplete (truncated-contour) variant, and branch scans across the two
//! components of the admissible direction set.
//!
//! For |h| < pi the admissible directions are
//! D(h) = { e^{i theta} != -1 : Re(e^{i theta}/h) > 1/pi },
//! the arc theta in arg(h) ± arccos(|h|/pi). The arc contains the cut
//! direction theta = pi exactly when Re(h) < 0 (for |h| small), splitting
//! D(h) into two components; resummations from the two sides differ by the
//! discontinuity across the cut and give conjugate values for real data.

use num::complex::Complex64;

use crate::borel::kernel::BorelEvaluator;
use crate::borel::BorelCoefficients;
use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, integrate_segment};
use crate::torus::TorusParams;

#[derive(Debug, Clone, Copy)]
pub struct ResumConfig {
    /// Laplace direction angle (radians)
    pub theta: f64,
    /// contour truncation radius; None = choose from the tail bound
    pub r: Option<f64>,
    /// Gauss–Legendre nodes per panel
    pub nodes: usize,
    /// requested absolute tolerance
    pub tol: f64,
    /// working precision in bits (53 = f64; larger requests are refused
    /// rather than silently rounded)
    pub precision_bits: u32,
}

impl Default for ResumConfig {
    fn default() -> Self {
        ResumConfig { theta: 0.0, r: None, nodes: 16, tol: 1e-8, precision_bits: 53 }
    }
}

#[derive(Debug, Clone)]
pub struct ResumResult {
    pub value: Complex64,
    pub error_estimate: f64,
    /// which component of D(h) the direction lies in (0 = the component on
    /// the +Im side of the cut when split; 0 for connected D(h))
    pub branch_id: u8,
    pub theta: f64,
    pub r_used: f64,
    pub tail_bound: f64,
    pub panels: usize,
}

/// Half-opening of the admissible arc around arg(h).
fn arc_half_width(h: Complex64) -> Result<f64> {
    let ratio = h.norm() / std::f64::consts::PI;
    if ratio >= 1.0 {
        return Err(Error::RepDomain(format!("|h| = {} not inside B(pi)", h.norm())));
    }
    Ok(ratio.acos())
}

fn wrap_angle(t: f64) -> f64 {
    let mut t = t % (2.0 * std::f64::consts::PI);
    if t > std::f64::consts::PI {
        t -= 2.0 * std::f64::consts::PI;
    }
    if t < -std::f64::consts::PI {
        t += 2.0 * std::f64::consts::PI;
    }
    t
}

/// Number of connected components of D(h) (1 or 2), and whether a given
/// direction is admissible.
pub fn direction_components(h: Complex64) -> Result<u8> {
    let alpha = arc_half_width(h)?;
    let centre = h.arg();
    // the arc (centre-alpha, centre+alpha) is split iff it contains pi
    let d = wrap_angle(std::f64::consts::PI - centre).abs();
    Ok(if d < alpha { 2 } else { 1 })
}

fn check_direction(h: Complex64, theta: f64) -> Result<u8> {
    let alpha = arc_half_width(h)?;
    let centre = h.arg();
    let off = wrap_angle(theta - centre);
    if off.abs() >= alpha {
        return Err(Error::RepDomain(format!(
            "theta = {theta:.4} outside D(h): need |theta - arg h| < {alpha:.4}"
        )));
    }
    if wrap_angle(theta - std::f64::consts::PI).abs() < 1e-9 {
        return Err(Error::BranchCut("theta = pi runs along the cut".into()));
    }
    let components = direction_components(h)?;
    if components == 1 {
        return Ok(0);
    }
    // split arc: component 0 = the side of theta=pi reached counterclockwise
    // from the centre (positive-Im side of the cut)
    let cut_off = wrap_angle(std::f64::consts::PI - centre);
    Ok(if (off - cut_off) * cut_off.signum() < 0.0 { 0 } else { 1 })
}

/// Laplace resummation of the torus-knot series at colour `ev.colour()`:
/// (1/h) · integral_0^{R e^{i theta}} e^{-xi/h} B(h J)(xi) dxi
/// with an explicit exponential tail bound from the e^{|xi|/pi} growth.
pub fn resum(ev: &BorelEvaluator, h: Complex64, cfg: &ResumConfig) -> Result<ResumResult> {
    if cfg.precision_bits > 53 {
        return Err(Error::PrecisionExceeded(format!(
            "{} bits requested; this build evaluates at 53",
            cfg.precision_bits
        )));
    }
    let branch_id = check_direction(h, cfg.theta)?;
    let w = Complex64::from_polar(1.0, cfg.theta);
    // decay rate of e^{-xi/h} relative against the e^{|xi|/pi} growth
    let decay = (w / h).re - 1.0 / std::f64::consts::PI;
    debug_assert!(decay > 0.0);

    // growth amplitude: sample |B| e^{-|xi|/pi} along the ray
    let mut amp = 0.0f64;
    for t in [0.5, 2.0, 4.0] {
        let (v, _) = ev.borel_eval(w * t)?;
        amp = amp.max(v.norm() * (-t / std::f64::consts::PI).exp());
    }
    let amp = amp.max(1e-3);
    let r_used = cfg.r.unwrap_or_else(|| {
        let target = cfg.tol * 0.1 * h.norm() * decay / amp;
        ((-target.ln()) / decay).clamp(4.0, 80.0)
    });
    let tail_bound = amp * (-r_used * decay).exp() / (decay * h.norm());

    let rule = gauss_legendre(cfg.nodes.max(4));
    let end = w * r_used;
    let integrand = |xi: Complex64| -> Result<Complex64> {
        let (b, _) = ev.borel_eval(xi)?;
        Ok((-xi / h).exp() * b)
    };
    // adaptive panel doubling with explicit failure propagation
    let run = |panels: usize| -> Result<Complex64> {
        let mut err: Option<Error> = None;
        let v = integrate_segment(
            |xi| match integrand(xi) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    Complex64::new(0.0, 0.0)
                }
            },
            end,
            panels,
            &rule,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    };
    let mut panels = (r_used * 2.0).ceil() as usize + 4;
    let mut prev = run(panels)?;
    let mut quad_err = f64::INFINITY;
    let mut value = prev;
    for _ in 0..4 {
        panels *= 2;
        value = run(panels)?;
        quad_err = (value - prev).norm() / h.norm();
        prev = value;
        if quad_err < cfg.tol * 0.2 {
            break;
        }
    }
    let value = value / h;
    let error_estimate = quad_err + tail_bound;
    if error_estimate > cfg.tol {
        return Err(Error::ToleranceNotMet { requested: cfg.tol, achieved: error_estimate });
    }
    Ok(ResumResult {
        value,
        error_estimate,
        branch_id,
        theta: cfg.theta,
        r_used,
        tail_bound,
        panels,
    })
}

/// Incomplete Laplace transform of a truncated Borel series along a ray:
/// integral_0^{a e^{i theta}} e^{-xi/h} (sum b_n xi^n) dxi / h.
/// `a` must stay strictly inside the Borel disk of convergence.
pub fn incomplete_resum(
    b: &BorelCoefficients,
    a_len: f64,
    theta: f64,
    h: Complex64,
) -> Result<Complex64> {
    let w = Complex64::from_polar(1.0, theta);
    if (w / h).re <= 0.0 {
        return Err(Error::RepDomain("need Re(e^{i theta}/h) > 0".into()));
    }
    if a_len < 0.0 {
        return Err(Error::RepDomain("negative integration length".into()));
    }
    // divergence guard: the truncated Taylor terms must still be decaying at
    // the contour end, otherwise a is outside the disk of convergence
    let n = b.b.len();
    if n >= 4 && a_len > 0.0 {
        let last = b.b[n - 1].norm() * a_len.powi(n as i32 - 1);
        let mid = b.b[n / 2].norm() * a_len.powi(n as i32 / 2);
        if last > mid.max(1e-300) * 1e3 {
            return Err(Error::BranchCut(format!(
                "length {a_len} reaches outside the Borel disk (divergent Taylor tail)"
            )));
        }
    }
    if a_len == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rule = gauss_legendre(24);
    let panels = (a_len * 4.0).ceil() as usize + 4;
    let v = integrate_segment(|xi| (-xi / h).exp() * b.taylor_eval(xi), w * a_len, panels, &rule);
    Ok(v / h)
}

/// One resummation per component of D(h). For Re(h) >= 0 a single result at
/// the requested (or central) direction; for Re(h) < 0 one per side of the
/// cut, at the mid-angle of each component unless cfg.theta picks a side.
pub fn branch_scan(
    tp: TorusParams,
    s0: Complex64,
    h: Complex64,
    cfg: &ResumConfig,
) -> Result<Vec<ResumResult>> {
    let ev = BorelEvaluator::new(tp, s0);
    let components = direction_components(h)?;
    if components == 1 {
        let theta = if check_direction(h, cfg.theta).is_ok() { cfg.theta } else { h.arg() };
        let mut c = *cfg;
        c.theta = theta;
        return Ok(vec![resum(&ev, h, &c)?]);
    }
    let alpha = arc_half_width(h)?;
    let centre = h.arg();
    let cut_off = wrap_angle(std::f64::consts::PI - centre);
    // mid-angles of the two sub-arcs on each side of theta = pi
    let (lo, hi) = (centre - alpha, centre + alpha);
    let cut = centre + cut_off;
    let mids = [0.5 * (cut + hi), 0.5 * (lo + cut)];
    let mut out = Vec::with_capacity(2);
    for mid in mids {
        let mut c = *cfg;
        c.theta = wrap_angle(mid);
        out.push(resum(&ev, h, &c)?);
    }
    out.sort_by_key(|r| r.branch_id);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{kashaev_closed, kashaev_quadrature, GaussQuadConfig};

    fn tp23() -> TorusParams {
        TorusParams::new(2, 3).unwrap()
    }

    #[test]
    fn direction_domain_geometry() {
        assert_eq!(direction_components(Complex64::new(0.2, 0.0)).unwrap(), 1);
        assert_eq!(direction_components(Complex64::new(0.1, 0.3)).unwrap(), 1);
        assert_eq!(direction_components(Complex64::new(-0.15, 0.0)).unwrap(), 2);
        assert_eq!(direction_components(Complex64::new(-0.1, 0.05)).unwrap(), 2);
        assert!(direction_components(Complex64::new(3.0, 1.5)).is_err());
    }

    #[test]
    fn rejected_directions() {
        let ev = BorelEvaluator::new(tp23(), Complex64::new(0.5, 0.0));
        let h = Complex64::new(0.2, 0.0);
        let cfg = ResumConfig { theta: 2.0, ..Default::default() };
        assert!(matches!(resum(&ev, h, &cfg), Err(Error::RepDomain(_))));
    }

    #[test]
    fn integer_colour_matches_closed_form() {
        let ev = BorelEvaluator::new(tp23(), Complex64::new(2.0, 0.0));
        let h = Complex64::new(0.2, 0.0);
        let r = resum(&ev, h, &ResumConfig { tol: 1e-7, ..Default::default() }).unwrap();
        let closed = kashaev_closed(tp23(), 2, h).unwrap();
        assert!(
            (r.value - closed).norm() < 1e-5,
            "resum {} vs closed {closed}, err est {}",
            r.value,
            r.error_estimate
        );
    }

    #[test]
    fn half_colour_matches_gaussian_quadrature() {
        let ev = BorelEvaluator::new(tp23(), Complex64::new(0.5, 0.0));
        let h = Complex64::new(0.2, 0.0);
        let r = resum(&ev, h, &ResumConfig { tol: 1e-7, ..Default::default() }).unwrap();
        let (q, _) = kashaev_quadrature(
            tp23(),
            Complex64::new(0.5, 0.0),
            h,
            &GaussQuadConfig::default(),
        )
        .unwrap();
        assert!((r.value - q).norm() < 1e-4, "resum {} vs quad {q}", r.value);
    }

    #[test]
    fn theta_independence_within_component() {
        let ev = BorelEvaluator::new(tp23(), Complex64::new(0.5, 0.0));
        let h = Complex64::new(0.2, 0.0);
        let r0 = resum(&ev, h, &ResumConfig { theta: 0.0, tol: 1e-8, ..Default::default() })
            .unwrap();
        let r1 = resum(&ev, h, &ResumConfig { theta: 0.35, tol: 1e-8, ..Default::default() })
            .unwrap();
        assert!((r0.value - r1.value).norm() < 1e-6, "{} vs {}", r0.value, r1.value);
    }

    #[test]
    fn incomplete_gap_is_exponentially_small() {
        let ev = BorelEvaluator::new(tp23(), Complex64::new(0.5, 0.0));
        let h = Complex64::new(0.2, 0.0);
        let full = resum(&ev, h, &ResumConfig { tol: 1e-8, ..Default::default() }).unwrap();
        // truncated Borel series from the exact torus coefficients
        let tp = tp23();
        let j = crate::torus::jones_torus(tp, 40).unwrap();
        let a = crate::knot::series_at_colour(&j.series, crate::exact::rat::rat(1, 2)).unwrap();
        let af: Vec<Complex64> = a
            .iter()
            .map(|r| Complex64::new(crate::exact::rat::rat_to_f64(r), 0.0))
            .collect();
        let b = crate::borel::formal_borel(&af);
        let radius = tp.borel_radius();
        let a_len = 0.8 * radius;
        let inc = incomplete_resum(&b, a_len, 0.0, h).unwrap();
        let gap = (inc - full.value).norm();
        let bound = 10.0 * (-a_len / h.norm()).exp();
        assert!(gap <= bound, "gap {gap} vs bound {bound}");
        assert!(gap > 0.0);
        // zero-length contour integrates to zero
        let z = incomplete_resum(&b, 0.0, 0.0, h).unwrap();
        assert_eq!(z, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn incomplete_rejects_beyond_radius() {
        let tp = tp23();
        let j = crate::torus::jones_torus(tp, 40).unwrap();
        let a = crate::knot::series_at_colour(&j.series, crate::exact::rat::rat(1, 2)).unwrap();
        let af: Vec<Complex64> = a
            .iter()
            .map(|r| Complex64::new(crate::exact::rat::rat_to_f64(r), 0.0))
            .collect();
        let b = crate::borel::formal_borel(&af);
        let r = incomplete_resum(&b, 3.0 * tp.borel_radius(), 0.0, Complex64::new(0.2, 0.0));
        assert!(matches!(r, Err(Error::BranchCut(_))));
    }

    #[test]
    fn branch_scan_conjugate_pair() {
        let h = Complex64::new(-0.15, 0.0);
        let out = branch_scan(
            tp23(),
            Complex64::new(0.5, 0.0),
            h,
            &ResumConfig { tol: 1e-7, ..Default::default() },
        )
        .unwrap();
        assert_eq!(out.len(), 2);
        let (v0, v1) = (out[0].value, out[1].value);
        assert!((v0 - v1.conj()).norm() < 1e-5, "v0 {v0} v1 {v1}");
        assert!(v0.im.abs() > 1e-6, "branch ambiguity should be visible: {v0}");
        assert_ne!(out[0].branch_id, out[1].branch_id);
    }

    #[test]
    fn branch_scan_integer_colour_agrees() {
        let h = Complex64::new(-0.15, 0.0);
        let out = branch_scan(
            tp23(),
            Complex64::new(2.0, 0.0),
            h,
            &ResumConfig { tol: 1e-8, ..Default::default() },
        )
        .unwrap();
        assert_eq!(out.len(), 2);
        assert!((out[0].value - out[1].value).norm() < 1e-6);
    }

    #[test]
    fn branch_scan_positive_h_single() {
        let out = branch_scan(
            tp23(),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.2, 0.0),
            &ResumConfig::default(),
        )
        .unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].branch_id, 0);
    }

    #[test]
    fn excessive_precision_is_refused() {
        let ev = BorelEvaluator::new(tp23(), Complex64::new(0.5, 0.0));
        let cfg = ResumConfig { precision_bits: 128, ..Default::default() };
        assert!(matches!(
            resum(&ev, Complex64::new(0.2, 0.0), &cfg),
            Err(Error::PrecisionExceeded(_))
        ));
    }
}
