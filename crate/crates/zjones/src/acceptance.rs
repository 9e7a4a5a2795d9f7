//! The acceptance suite: every criterion the build must satisfy, runnable as
//! a batch (`selftest` subcommand or the `acceptance` integration test).
//!
//! Each criterion returns a deterministic detail string (no timings, no
//! addresses); wall-clock is carried separately so byte-comparison of two
//! runs stays meaningful.

use std::fmt::Write as _;
use std::time::Instant;

use num::complex::Complex64;
use num::Zero;

use crate::borel::{
    branch_scan, gevrey_diagnose, resum, BorelEvaluator, ResumConfig,
};
use crate::chord::weight::{cv_weight, weight_character, WeightCache};
use crate::chord::{all_matching_words, four_t_generate, verma_oracle_bounded, ChordDiagram};
use crate::exact::mpoly::{MPoly, Var, VarSet};
use crate::exact::rat::{rat, rat_int, rat_to_f64, Rat};
use crate::exact::series::HSeries;
use crate::knot::bracket::{calibrate_bracket_sign, kauffman_jones_oracle, PlanarDiagram, BRACKET_H_SIGN};
use crate::knot::mm::mmr_product;
use crate::knot::{
    jones_habiro, measured_framing, mirror_and_frame, normalize_by_unknot, series_at_colour, KnotKind, KnotSpec,
};
use crate::lorentz::{g_expansion, lorentz_series};
use crate::torus::{jones_torus, kashaev_closed, kashaev_quadrature, GaussQuadConfig, TorusParams};

/// Frozen regression constants, measured once and asserted thereafter.
pub mod frozen {
    /// trefoil identification: jones_torus(2,3) = frame_shift(habiro trefoil, F)
    /// with no mirror
    pub const TREFOIL_TORUS_MIRROR: bool = false;
    pub const TREFOIL_TORUS_FRAMING: i64 = 12;
    /// Gevrey fit constants at s = 1/2 (order 40), brackets for regression
    pub const GEVREY_C_TREFOIL_RANGE: (f64, f64) = (0.3, 1.2);
    pub const GEVREY_C_FIG8_RANGE: (f64, f64) = (0.3, 1.2);
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub wall_ms: u128,
}

pub const ALL_IDS: [&str; 15] = [
    "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11", "A12", "A13", "A14",
    "A15",
];

pub fn run_all(only: Option<&str>) -> Vec<CriterionReport> {
    let mut out = Vec::new();
    for id in ALL_IDS {
        if let Some(filter) = only {
            if !filter.split(',').any(|f| f.trim().eq_ignore_ascii_case(id)) {
                continue;
            }
        }
        out.push(run_criterion(id));
    }
    out
}

pub fn run_criterion(id: &str) -> CriterionReport {
    let start = Instant::now();
    let (title, result) = match id {
        "A1" => ("4T vanishing, exhaustive m <= 5", a1()),
        "A2" => ("weight-system oracle equivalence", a2()),
        "A3" => ("trivial colour gives the constant series", a3()),
        "A4" => ("parity under s -> -s", a4()),
        "A5" => ("colour degree bounds", a5()),
        "A6" => ("trefoil identification across expansions", a6()),
        "A7" => ("integer-colour convergence to the closed form", a7()),
        "A8" => ("bracket oracle vs figure-eight series", a8()),
        "A9" => ("Borel radius of the divergent series", a9()),
        "A10" => ("resummation against closed form and quadrature", a10()),
        "A11" => ("branch conjugacy across the cut", a11()),
        "A12" => ("moment expansion equals the bivariate product", a12()),
        "A13" => ("diagonal vs inverse Alexander polynomial", a13()),
        "A14" => ("Gevrey-1 boundedness of built-in series", a14()),
        "A15" => ("determinism of the numeric report", a15()),
        _ => ("unknown criterion", Err(format!("no criterion named {id}"))),
    };
    let wall_ms = start.elapsed().as_millis();
    match result {
        Ok(detail) => CriterionReport { id: id_static(id), title, passed: true, detail, wall_ms },
        Err(detail) => {
            CriterionReport { id: id_static(id), title, passed: false, detail, wall_ms }
        }
    }
}

fn id_static(id: &str) -> &'static str {
    ALL_IDS.iter().find(|k| k.eq_ignore_ascii_case(id)).copied().unwrap_or("A?")
}

type CheckResult = std::result::Result<String, String>;

fn fmt_f64(x: f64) -> String {
    format!("{x:.6e}")
}

// ---------------------------------------------------------------- A1
fn a1() -> CheckResult {
    let mut cache = WeightCache::new();
    let mut count = 0usize;
    for m in 2..=5usize {
        let bases: Vec<Vec<u8>> = if m == 2 { vec![vec![]] } else { all_matching_words(m - 2) };
        for bw in bases {
            let base = ChordDiagram::from_word(&bw).map_err(|e| e.to_string())?;
            let l = bw.len();
            let gaps: Vec<usize> = (0..=l).collect();
            for &ga in &gaps {
                for &g1 in &gaps {
                    for &g2 in &gaps {
                        if l > 0 && (ga == g1 || ga == g2 || g1 == g2) {
                            continue;
                        }
                        if l == 0 && (ga, g1, g2) != (0, 0, 0) {
                            continue;
                        }
                        let sum =
                            four_t_generate(&base, ga, g1, g2).map_err(|e| e.to_string())?;
                        let mut acc = MPoly::zero(VarSet::S);
                        for (d, coeff) in sum.terms() {
                            acc = acc
                                .add(&weight_character(d, &mut cache).scale(coeff))
                                .expect("ring");
                        }
                        if !acc.is_zero() {
                            return Err(format!(
                                "generator base={base} gaps=({ga},{g1},{g2}) evaluates to {acc}"
                            ));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} generators, all vanish exactly under the weight character"))
}

// ---------------------------------------------------------------- A2
fn a2() -> CheckResult {
    let mut cache = WeightCache::new();
    let s = MPoly::var(VarSet::S, Var::S);
    let casimir = s
        .mul(&s)
        .expect("ring")
        .sub(&MPoly::constant(VarSet::S, rat_int(1)))
        .expect("ring")
        .scale(&rat(1, 2));
    let mut counts = [0usize; 5];
    for m in 0..=4usize {
        for word in if m == 0 { vec![vec![]] } else { all_matching_words(m) } {
            let d = ChordDiagram::from_word(&word).map_err(|e| e.to_string())?;
            let rec = cv_weight(&d, &mut cache)
                .substitute(Var::C, &casimir)
                .expect("only c present");
            let ora = verma_oracle_bounded(&d, 4).map_err(|e| e.to_string())?;
            if rec != ora {
                return Err(format!("mismatch on {d}: recursion {rec} vs oracle {ora}"));
            }
            counts[m] += 1;
        }
    }
    Ok(format!(
        "recursion = module oracle on all diagrams: {} with <=3 chords, {} with 4 chords (exhaustive, exceeds the required random sample)",
        counts[0] + counts[1] + counts[2] + counts[3],
        counts[4]
    ))
}

fn builtin_specs() -> Vec<KnotSpec> {
    vec![
        KnotSpec::new(KnotKind::Trefoil),
        KnotSpec::new(KnotKind::FigureEight),
        KnotSpec::new(KnotKind::Torus(2, 3)),
        KnotSpec::new(KnotKind::Torus(2, 5)),
        KnotSpec::new(KnotKind::Torus(3, 4)),
    ]
}

// ---------------------------------------------------------------- A3
fn a3() -> CheckResult {
    let mut lines = Vec::new();
    for spec in builtin_specs() {
        let j = jones_habiro(spec, 20).map_err(|e| e.to_string())?;
        let n = normalize_by_unknot(&j);
        let coeffs = series_at_colour(&n.series, rat_int(1)).map_err(|e| e.to_string())?;
        if coeffs[0] != rat_int(1) || coeffs[1..].iter().any(|c| !c.is_zero()) {
            return Err(format!("{spec}: normalized series at s=1 differs from 1"));
        }
        lines.push(spec.to_string());
    }
    Ok(format!("normalized series == 1 at s=1 to order 20 for {}", lines.join(", ")))
}

// ---------------------------------------------------------------- A4
fn a4() -> CheckResult {
    for spec in builtin_specs() {
        let j = jones_habiro(spec, 16).map_err(|e| e.to_string())?;
        for n in 0..=16usize {
            if !j.series.coeff(n).is_even_in(Var::S) {
                return Err(format!("{spec}: h^{n} coefficient odd in s"));
            }
        }
    }
    Ok("all built-in series invariant under s -> -s to order 16".into())
}

// ---------------------------------------------------------------- A5
fn a5() -> CheckResult {
    let mut worst = 0i64;
    for spec in builtin_specs() {
        let j = jones_habiro(spec, 16).map_err(|e| e.to_string())?;
        for n in 0..=16usize {
            let c = j.series.coeff(n);
            let deg = c.degree_in(Var::S);
            if deg > 2 * n as i64 {
                return Err(format!("{spec}: h^{n} coefficient has s-degree {deg} > {}", 2 * n));
            }
            if !c.is_even_in(Var::S) {
                return Err(format!("{spec}: h^{n} coefficient odd in s"));
            }
            worst = worst.max(2 * n as i64 - deg);
        }
    }
    Ok("every h^n coefficient even with s-degree <= 2n, order 16".into())
}

// ---------------------------------------------------------------- A6
fn a6() -> CheckResult {
    let tp = TorusParams::new(2, 3).expect("coprime");
    let torus = jones_torus(tp, 12).map_err(|e| e.to_string())?;
    let habiro = jones_habiro(KnotSpec::new(KnotKind::Trefoil), 12).map_err(|e| e.to_string())?;
    let mut found = None;
    for mirror in [false, true] {
        let cand = mirror_and_frame(&habiro, mirror, 0);
        if let Some(f) = measured_framing(&torus) {
            let shifted = mirror_and_frame(&cand, false, f);
            if shifted.series == torus.series {
                found = Some((mirror, f));
                break;
            }
        }
        // fall back to a brute scan if the h^1 readout were ever ambiguous
        for f in -30..=30i64 {
            let shifted = mirror_and_frame(&cand, false, f);
            if shifted.series == torus.series {
                found = Some((mirror, f));
                break;
            }
        }
        if found.is_some() {
            break;
        }
    }
    match found {
        Some((mirror, f)) => {
            if mirror != frozen::TREFOIL_TORUS_MIRROR || f != frozen::TREFOIL_TORUS_FRAMING {
                return Err(format!(
                    "identification drifted: found (mirror={mirror}, F={f}), frozen (mirror={}, F={})",
                    frozen::TREFOIL_TORUS_MIRROR,
                    frozen::TREFOIL_TORUS_FRAMING
                ));
            }
            Ok(format!(
                "jones_torus(2,3) = frame_shift(trefoil, F={f}) with mirror={mirror}, exact to order 12"
            ))
        }
        None => Err("no (mirror, framing) pair identifies the torus series with the trefoil".into()),
    }
}

// ---------------------------------------------------------------- A7
fn a7() -> CheckResult {
    let tp = TorusParams::new(2, 3).expect("coprime");
    let h = Complex64::new(0.2, 0.0);
    let closed = kashaev_closed(tp, 2, h).map_err(|e| e.to_string())?;
    let j = jones_torus(tp, 40).map_err(|e| e.to_string())?;
    let a = series_at_colour(&j.series, rat_int(2)).map_err(|e| e.to_string())?;
    let mut partial = Complex64::new(0.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0);
    for c in &a {
        partial += Complex64::new(rat_to_f64(c), 0.0) * pw;
        pw *= h;
    }
    let d1 = (closed - partial).norm();
    if d1 > 1e-8 {
        return Err(format!("|closed - partial sum(40)| = {} > 1e-8", fmt_f64(d1)));
    }
    let (quad, _) =
        kashaev_quadrature(tp, Complex64::new(2.0, 0.0), h, &GaussQuadConfig::default())
            .map_err(|e| e.to_string())?;
    let d2 = (closed - quad).norm();
    if d2 > 1e-10 {
        return Err(format!("|closed - quadrature| = {} > 1e-10", fmt_f64(d2)));
    }
    Ok(format!(
        "s=2, h=0.2: |closed - partial(40)| = {}, |closed - quadrature| = {}",
        fmt_f64(d1),
        fmt_f64(d2)
    ))
}

// ---------------------------------------------------------------- A8
fn a8() -> CheckResult {
    let sign = calibrate_bracket_sign(12).map_err(|e| e.to_string())?;
    if sign != BRACKET_H_SIGN {
        return Err(format!("calibration drifted: measured {sign}, frozen {BRACKET_H_SIGN}"));
    }
    let habiro =
        jones_habiro(KnotSpec::new(KnotKind::FigureEight), 12).map_err(|e| e.to_string())?;
    let at2 = series_at_colour(&habiro.series, rat_int(2)).map_err(|e| e.to_string())?;
    let oracle =
        kauffman_jones_oracle(&PlanarDiagram::figure_eight(), 12).map_err(|e| e.to_string())?;
    for (n, r) in at2.iter().enumerate() {
        let o = oracle.coeff(n).as_constant().unwrap_or_else(Rat::zero);
        if &o != r {
            return Err(format!("figure-eight h^{n}: series {r} vs bracket {o}"));
        }
    }
    Ok("figure-eight series at s=2 equals the bracket state sum exactly to order 12 (trefoil-only calibration)".into())
}

// ---------------------------------------------------------------- A9
fn a9() -> CheckResult {
    let mut lines = Vec::new();
    for (m, p) in [(2i64, 3i64), (2, 5)] {
        let tp = TorusParams::new(m, p).expect("coprime");
        let j = jones_torus(tp, 60).map_err(|e| e.to_string())?;
        let a = series_at_colour(&j.series, rat(1, 2)).map_err(|e| e.to_string())?;
        let af: Vec<Complex64> =
            a.iter().map(|r| Complex64::new(rat_to_f64(r), 0.0)).collect();
        let rep = gevrey_diagnose(&af).map_err(|e| e.to_string())?;
        let expect = tp.borel_radius();
        let rel = (rep.radius_estimate - expect).abs() / expect;
        if rel > 0.15 {
            return Err(format!(
                "({m},{p}): radius estimate {} vs pi^2/{} = {} (off by {:.1}%)",
                fmt_f64(rep.radius_estimate),
                m * p,
                fmt_f64(expect),
                rel * 100.0
            ));
        }
        lines.push(format!(
            "({m},{p}): estimate {} vs {} ({:.2}% off)",
            fmt_f64(rep.radius_estimate),
            fmt_f64(expect),
            rel * 100.0
        ));
    }
    Ok(lines.join("; "))
}

// ---------------------------------------------------------------- A10
fn a10() -> CheckResult {
    let tp = TorusParams::new(2, 3).expect("coprime");
    let h = Complex64::new(0.2, 0.0);
    // integer colour vs closed form
    let ev2 = BorelEvaluator::new(tp, Complex64::new(2.0, 0.0));
    let r2 = resum(&ev2, h, &ResumConfig { tol: 1e-7, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let closed = kashaev_closed(tp, 2, h).map_err(|e| e.to_string())?;
    let d_int = (r2.value - closed).norm();
    if d_int > 1e-5 {
        return Err(format!("s=2: |resum - closed| = {} > 1e-5", fmt_f64(d_int)));
    }
    // half colour vs direct Gaussian quadrature
    let s_half = Complex64::new(0.5, 0.0);
    let ev_half = BorelEvaluator::new(tp, s_half);
    let r_half = resum(&ev_half, h, &ResumConfig { tol: 1e-7, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let (q_half, _) = kashaev_quadrature(tp, s_half, h, &GaussQuadConfig::default())
        .map_err(|e| e.to_string())?;
    let d_half = (r_half.value - q_half).norm();
    if d_half > 1e-4 {
        return Err(format!("s=1/2: |resum - quadrature| = {} > 1e-4", fmt_f64(d_half)));
    }
    // direction independence inside the connected component
    let ra = resum(&ev_half, h, &ResumConfig { theta: 0.0, tol: 1e-8, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let rb = resum(&ev_half, h, &ResumConfig { theta: 0.35, tol: 1e-8, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let d_theta = (ra.value - rb.value).norm();
    if d_theta > 1e-6 {
        return Err(format!("theta-dependence {} > 1e-6", fmt_f64(d_theta)));
    }
    Ok(format!(
        "s=2 vs closed: {}; s=1/2 vs quadrature: {}; theta spread: {}",
        fmt_f64(d_int),
        fmt_f64(d_half),
        fmt_f64(d_theta)
    ))
}

// ---------------------------------------------------------------- A11
fn a11() -> CheckResult {
    let tp = TorusParams::new(2, 3).expect("coprime");
    let h = Complex64::new(-0.15, 0.0);
    let cfg = ResumConfig { tol: 1e-7, ..Default::default() };
    let scan = branch_scan(tp, Complex64::new(0.5, 0.0), h, &cfg).map_err(|e| e.to_string())?;
    if scan.len() != 2 {
        return Err(format!("expected 2 branches, got {}", scan.len()));
    }
    let (v0, v1) = (scan[0].value, scan[1].value);
    let conj_gap = (v0 - v1.conj()).norm();
    if conj_gap > 1e-5 {
        return Err(format!("|v+ - conj(v-)| = {} > 1e-5", fmt_f64(conj_gap)));
    }
    if v0.im.abs() <= 1e-6 {
        return Err(format!("Im v+ = {} not visibly nonzero", fmt_f64(v0.im)));
    }
    let scan2 = branch_scan(tp, Complex64::new(2.0, 0.0), h, &cfg).map_err(|e| e.to_string())?;
    let int_gap = (scan2[0].value - scan2[1].value).norm();
    if int_gap > 1e-6 {
        return Err(format!("integer colour branches differ by {} > 1e-6", fmt_f64(int_gap)));
    }
    Ok(format!(
        "s=1/2: |v+ - conj(v-)| = {}, Im v+ = {}; s=2 branch gap {}",
        fmt_f64(conj_gap),
        fmt_f64(v0.im),
        fmt_f64(int_gap)
    ))
}

// ---------------------------------------------------------------- A12
fn a12() -> CheckResult {
    let tp = TorusParams::new(2, 3).expect("coprime");
    let (_, factorial_series) = g_expansion(tp, 8).map_err(|e| e.to_string())?;
    let product = lorentz_series(KnotSpec::new(KnotKind::Torus(2, 3)), 8)
        .map_err(|e| e.to_string())?;
    let lhs = factorial_series;
    let rhs = product.series.truncate(lhs.trunc());
    if lhs != rhs {
        for n in 0..=lhs.trunc() {
            if lhs.coeff(n) != rhs.coeff(n) {
                return Err(format!(
                    "first mismatch at h^{n}: moment route {} vs product {}",
                    lhs.coeff(n),
                    rhs.coeff(n)
                ));
            }
        }
    }
    Ok("moment-expansion series equals the bivariate product termwise to order 8 (exact rationals)"
        .into())
}

// ---------------------------------------------------------------- A13
fn a13() -> CheckResult {
    let mut lines = Vec::new();
    for spec in [
        KnotSpec::new(KnotKind::Trefoil),
        KnotSpec::new(KnotKind::FigureEight),
        KnotSpec::new(KnotKind::Torus(2, 5)),
    ] {
        let j = jones_habiro(spec, 12).map_err(|e| e.to_string())?;
        let prod = mmr_product(&j, 12).map_err(|e| e.to_string())?;
        let one = HSeries::one(VarSet::EMPTY, prod.trunc());
        if prod != one {
            for n in 0..=prod.trunc() {
                if prod.coeff(n) != one.coeff(n) {
                    return Err(format!(
                        "{spec}: T(u)·Delta(e^u) deviates from 1 at u^{n}: {}",
                        prod.coeff(n)
                    ));
                }
            }
        }
        lines.push(spec.to_string());
    }
    Ok(format!("T(u)·Delta(e^u) = 1 exactly to order 12 for {}", lines.join(", ")))
}

// ---------------------------------------------------------------- A14
fn a14() -> CheckResult {
    let mut lines = Vec::new();
    for (spec, range) in [
        (KnotSpec::new(KnotKind::Trefoil), frozen::GEVREY_C_TREFOIL_RANGE),
        (KnotSpec::new(KnotKind::FigureEight), frozen::GEVREY_C_FIG8_RANGE),
    ] {
        let j = jones_habiro(spec, 40).map_err(|e| e.to_string())?;
        let a = series_at_colour(&j.series, rat(1, 2)).map_err(|e| e.to_string())?;
        let af: Vec<Complex64> =
            a.iter().map(|r| Complex64::new(rat_to_f64(r), 0.0)).collect();
        let rep = gevrey_diagnose(&af).map_err(|e| e.to_string())?;
        // residual trend: the fit residuals must not grow towards the tail
        let k = rep.residuals.len();
        if k >= 8 {
            let head: f64 =
                rep.residuals[..k / 2].iter().map(|r| r.abs()).fold(0.0, f64::max);
            let tail: f64 =
                rep.residuals[k / 2..].iter().map(|r| r.abs()).fold(0.0, f64::max);
            if tail > head + 1.0 {
                return Err(format!(
                    "{spec}: residual trend increasing (head {head:.3}, tail {tail:.3})"
                ));
            }
        }
        if !(rep.c_fit.is_finite() && rep.c_fit > range.0 && rep.c_fit < range.1) {
            return Err(format!(
                "{spec}: fitted C = {} outside frozen regression range {:?}",
                fmt_f64(rep.c_fit),
                range
            ));
        }
        lines.push(format!("{spec}: C = {}", fmt_f64(rep.c_fit)));
    }
    Ok(format!("Gevrey-1 growth bounded; {}", lines.join("; ")))
}

// ---------------------------------------------------------------- A15
fn a15() -> CheckResult {
    // the float-heavy criteria, run twice from scratch and byte-compared;
    // the acceptance integration test additionally byte-compares two full
    // runs of the selftest binary
    let ids = ["A7", "A9", "A10", "A11", "A14"];
    let render = || -> String {
        let mut s = String::new();
        for id in ids {
            let r = run_criterion(id);
            let _ = writeln!(s, "{} {} {}", r.id, r.passed, r.detail);
        }
        s
    };
    let first = render();
    let second = render();
    if first != second {
        return Err("repeated runs differ byte-wise".into());
    }
    Ok(format!("two in-process reruns of {:?} byte-identical", ids))
}

/// Deterministic one-line-per-criterion report (no timings).
pub fn render_report(reports: &[CriterionReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(
            s,
            "{:4} {:4} {} — {}",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.title,
            r.detail
        );
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let _ = writeln!(s, "{} criteria, {} failed", reports.len(), failed);
    s
}

/// Negative control used by tests: with the character normalisation
/// deliberately corrupted (kappa sign flipped per chord), the one-chord
/// character no longer matches the framing factor, which must break the
/// expansions' agreement exactly where the acceptance suite looks.
pub fn corrupted_character_breaks_identification() -> bool {
    // flipping kappa = +1/4 to -1/4 flips the one-chord character sign;
    // simulate the effect on the framing factor: exp(-F(s^2-1)h/8)
    let tp = TorusParams::new(2, 3).expect("coprime");
    let torus = jones_torus(tp, 8).expect("series");
    let habiro = jones_habiro(KnotSpec::new(KnotKind::Trefoil), 8).expect("series");
    let f = frozen::TREFOIL_TORUS_FRAMING;
    let wrong = mirror_and_frame(&habiro, frozen::TREFOIL_TORUS_MIRROR, -f);
    wrong.series != torus.series
}

/// Convenience: run everything and panic on failure (used by tests).
pub fn assert_all_pass() {
    let reports = run_all(None);
    let failures: Vec<&CriterionReport> = reports.iter().filter(|r| !r.passed).collect();
    assert!(
        failures.is_empty(),
        "acceptance failures:\n{}",
        failures.iter().map(|r| format!("{}: {}", r.id, r.detail)).collect::<Vec<_>>().join("\n")
    );
}
