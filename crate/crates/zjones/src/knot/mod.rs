//! Knot specifications and the colour-s Jones series for built-in knots.
//!
//! Series here are J/(2z+1)-normalised (value qdim on the unknot) unless the
//! `normalized` flag says the quantum dimension has been divided out. The
//! colour variable is s = 2z+1 throughout; every coefficient is an exact
//! polynomial in s.
//!
//! Built-in trefoil and figure-eight use the cyclotomic expansion
//!   J = prefactor · sum_n f_n · sigma_n,
//!   sigma_n = prod_{k=1..n} [(2sinh(s h/2))^2 - (2sinh(k h/2))^2],
//! with f_n = (-1)^n q^{-n(n+3)/2} for the trefoil and f_n = 1 for the
//! figure-eight. sigma_n vanishes to order 2n in h, so order-N output needs
//! n <= N/2 only. The single-difference product D(n) is also exposed
//! (`habiro_d`); its h-valuation is n, not 2n, and it is odd in s, which is
//! why the even product sigma_n is the one the expansions use. The tests pin
//! both valuations.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::mpoly::{MPoly, Var, VarSet};
use crate::exact::rat::{rat, rat_int, Rat};
use crate::exact::series::HSeries;

pub mod bracket;
pub mod mm;

pub use bracket::{kauffman_jones_oracle, PlanarDiagram};
pub use mm::{alexander_eu, mm_report, MmReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnotKind {
    Unknot,
    Trefoil,
    FigureEight,
    Torus(i64, i64),
}

/// A built-in knot with framing and optional mirroring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnotSpec {
    pub kind: KnotKind,
    pub mirrored: bool,
    pub framing: i64,
}

impl KnotSpec {
    pub fn new(kind: KnotKind) -> KnotSpec {
        KnotSpec { kind, mirrored: false, framing: 0 }
    }

    /// Text forms: "unknot@0", "trefoil@0", "fig8@0", "torus(2,5)@-3",
    /// "mirror(torus(2,3))@0"; the "@F" framing suffix defaults to 0.
    pub fn parse(text: &str) -> Result<KnotSpec> {
        let text = text.trim();
        let (body, framing) = match text.rsplit_once('@') {
            Some((b, f)) => {
                let fr: i64 =
                    f.trim().parse().map_err(|_| Error::BadKnot(format!("bad framing '{f}'")))?;
                (b.trim(), fr)
            }
            None => (text, 0),
        };
        let (body, mirrored) = match body.strip_prefix("mirror(") {
            Some(rest) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::BadKnot("unbalanced mirror(...)".into()))?;
                (inner.trim(), true)
            }
            None => (body, false),
        };
        let kind = if body == "unknot" {
            KnotKind::Unknot
        } else if body == "trefoil" {
            KnotKind::Trefoil
        } else if body == "fig8" || body == "figure-eight" {
            KnotKind::FigureEight
        } else if let Some(rest) = body.strip_prefix("torus(") {
            let inner =
                rest.strip_suffix(')').ok_or_else(|| Error::BadKnot("unbalanced torus(...)".into()))?;
            let (ms, ps) =
                inner.split_once(',').ok_or_else(|| Error::BadKnot("torus needs (m,p)".into()))?;
            let m: i64 =
                ms.trim().parse().map_err(|_| Error::BadKnot(format!("bad torus m '{ms}'")))?;
            let p: i64 =
                ps.trim().parse().map_err(|_| Error::BadKnot(format!("bad torus p '{ps}'")))?;
            crate::torus::TorusParams::new(m, p)?;
            KnotKind::Torus(m, p)
        } else {
            return Err(Error::BadKnot(format!("unknown knot '{body}'")));
        };
        Ok(KnotSpec { kind, mirrored, framing })
    }
}

impl fmt::Display for KnotSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            KnotKind::Unknot => "unknot".to_string(),
            KnotKind::Trefoil => "trefoil".to_string(),
            KnotKind::FigureEight => "fig8".to_string(),
            KnotKind::Torus(m, p) => format!("torus({m},{p})"),
        };
        if self.mirrored {
            write!(f, "mirror({base})@{}", self.framing)
        } else {
            write!(f, "{base}@{}", self.framing)
        }
    }
}

/// A truncated colour-s Jones series together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct JonesSeries {
    pub series: HSeries,
    pub knot: KnotSpec,
    /// true when the quantum dimension has been divided out
    pub normalized: bool,
}

pub(crate) fn s_poly() -> MPoly {
    MPoly::var(VarSet::S, Var::S)
}

pub(crate) fn s_squared_minus_one() -> MPoly {
    let s = s_poly();
    s.mul(&s).expect("ring").sub(&MPoly::constant(VarSet::S, rat_int(1))).expect("ring")
}

/// Quantum dimension as a series: 2sinh(s h/2) / (s · 2sinh(h/2)),
/// an even polynomial in s per order with constant term 1.
pub fn qdim_series(order: usize) -> HSeries {
    let num = HSeries::two_sinh_half_over_arg(&s_poly(), order + 1).expect("ring");
    let den = HSeries::two_sinh_half(&MPoly::one(VarSet::S), order + 1).expect("ring");
    num.div(&den).expect("valuations match").truncate(order)
}

/// Single-difference product D(n) = prod_{k=1..n} [2sinh(s h/2) - 2sinh(k h/2)].
pub fn habiro_d(n: usize, order: i64) -> Result<HSeries> {
    if order < 0 {
        return Err(Error::InvalidOrder(format!("habiro_d order {order}")));
    }
    let order = order as usize;
    let mut acc = HSeries::one(VarSet::S, order);
    let sinh_s = HSeries::two_sinh_half(&s_poly(), order)?;
    for k in 1..=n {
        let sinh_k = HSeries::two_sinh_half(&MPoly::constant(VarSet::S, rat_int(k as i64)), order)?;
        acc = acc.mul(&sinh_s.sub(&sinh_k)?)?;
    }
    Ok(acc)
}

/// Even product sigma_n = prod_{k=1..n} [(2sinh(s h/2))^2 - (2sinh(k h/2))^2].
pub fn habiro_sigma(n: usize, order: usize) -> Result<HSeries> {
    let mut acc = HSeries::one(VarSet::S, order);
    let sinh_s = HSeries::two_sinh_half(&s_poly(), order)?;
    let sinh_s2 = sinh_s.mul(&sinh_s)?;
    for k in 1..=n {
        let sinh_k = HSeries::two_sinh_half(&MPoly::constant(VarSet::S, rat_int(k as i64)), order)?;
        acc = acc.mul(&sinh_s2.sub(&sinh_k.mul(&sinh_k)?)?)?;
    }
    Ok(acc)
}

pub(crate) fn framing_factor(framing: i64, order: usize) -> HSeries {
    // exp(F (s^2-1) h / 8)
    HSeries::exp_h(&s_squared_minus_one().scale(&rat_int(framing)), 3, order as i64)
        .expect("order checked")
}

/// Cyclotomic-expansion series for the built-in knots, including framing
/// factor and mirroring. Torus knots dispatch to the torus engine.
pub fn jones_habiro(knot: KnotSpec, order: i64) -> Result<JonesSeries> {
    if order < 0 {
        return Err(Error::InvalidOrder(format!("jones_habiro order {order}")));
    }
    let n = order as usize;
    let base = match knot.kind {
        KnotKind::Unknot => qdim_series(n),
        KnotKind::Trefoil => {
            let mut sum = HSeries::zero(VarSet::S, n);
            for j in 0..=(n / 2) {
                // f_j = (-1)^j q^{-j(j+3)/2}
                let expo = rat(-(j as i64) * (j as i64 + 3), 2);
                let f = HSeries::exp_h(&MPoly::constant(VarSet::S, expo), 0, n as i64)?;
                let term = f.mul(&habiro_sigma(j, n)?)?;
                sum = if j % 2 == 0 { sum.add(&term)? } else { sum.sub(&term)? };
            }
            qdim_series(n).mul(&sum)?
        }
        KnotKind::FigureEight => {
            let mut sum = HSeries::zero(VarSet::S, n);
            for j in 0..=(n / 2) {
                sum = sum.add(&habiro_sigma(j, n)?)?;
            }
            qdim_series(n).mul(&sum)?
        }
        KnotKind::Torus(m, p) => {
            let tp = crate::torus::TorusParams::new(m, p)?;
            crate::torus::jones_torus(tp, order)?.series
        }
    };
    let mut series = base;
    if knot.mirrored {
        series = series.mirror_h();
    }
    if knot.framing != 0 {
        series = series.mul(&framing_factor(knot.framing, n))?;
    }
    Ok(JonesSeries { series, knot, normalized: false })
}

/// Custom-knot series from an explicit list of sigma-basis coefficients
/// f_0..f_{len-1} (each an h-series). Returns a truncation warning when the
/// list is too short to saturate the requested order.
pub fn jones_habiro_custom(
    f: &[HSeries],
    framing: i64,
    order: i64,
) -> Result<(JonesSeries, Option<String>)> {
    if order < 0 {
        return Err(Error::InvalidOrder(format!("jones_habiro order {order}")));
    }
    let n = order as usize;
    let needed = n / 2 + 1;
    let warning = if f.len() < needed {
        Some(format!(
            "f-coefficient list has {} entries; order {} needs {} — result truncated at the missing tail",
            f.len(),
            n,
            needed
        ))
    } else {
        None
    };
    let mut sum = HSeries::zero(VarSet::S, n);
    for (j, fj) in f.iter().enumerate().take(needed) {
        sum = sum.add(&fj.truncate(n).mul(&habiro_sigma(j, n)?)?)?;
    }
    let mut series = qdim_series(n).mul(&sum)?;
    if framing != 0 {
        series = series.mul(&framing_factor(framing, n))?;
    }
    let knot = KnotSpec { kind: KnotKind::Unknot, mirrored: false, framing };
    Ok((JonesSeries { series, knot, normalized: false }, warning))
}

/// Divide by the unknot value (quantum dimension).
pub fn normalize_by_unknot(j: &JonesSeries) -> JonesSeries {
    if j.normalized {
        return j.clone();
    }
    let qd = qdim_series(j.series.trunc());
    JonesSeries { series: j.series.div(&qd).expect("qdim is a unit"), knot: j.knot, normalized: true }
}

/// Mirror (h -> -h) and/or shift the framing by `delta_f`.
pub fn mirror_and_frame(j: &JonesSeries, mirror: bool, delta_f: i64) -> JonesSeries {
    let mut series = j.series.clone();
    let mut knot = j.knot;
    if mirror {
        series = series.mirror_h();
        knot.mirrored = !knot.mirrored;
        knot.framing = -knot.framing;
    }
    if delta_f != 0 {
        series = series.mul(&framing_factor(delta_f, series.trunc())).expect("ring");
        knot.framing += delta_f;
    }
    JonesSeries { series, knot, normalized: j.normalized }
}

/// The framing a series carries, read off its h^1 coefficient: a normalised
/// zero-framed series has c_1 = 0, and framing F shifts c_1 by F(s^2-1)/8.
/// Returns None when c_1 has any other shape.
pub fn measured_framing(j: &JonesSeries) -> Option<i64> {
    let norm = normalize_by_unknot(j);
    let c1 = norm.series.coeff(1);
    if c1.is_zero() {
        return Some(0);
    }
    let s2 = c1.coeff_of(Var::S, 2).as_constant()?;
    let f = s2 * rat_int(8);
    if !f.is_integer() {
        return None;
    }
    let fi: i64 = f.numer().try_into().ok()?;
    let expect = s_squared_minus_one().scale(&rat(fi, 8));
    if &expect == c1 {
        Some(fi)
    } else {
        None
    }
}

/// Exact rational coefficients of a series at a rational colour value.
pub fn series_at_colour(series: &HSeries, s_value: Rat) -> Result<Vec<Rat>> {
    let mut assign = BTreeMap::new();
    assign.insert(Var::S, s_value);
    series.eval_coeffs_rat(&assign)
}
