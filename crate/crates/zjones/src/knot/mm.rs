//! Colour-structure reports for a Jones series (degree bounds, parity, the
//! double-expansion table in z, and the diagonal "top line"), plus the
//! symbolic Alexander-polynomial expansions the top line is tested against.

use num::Zero;

use crate::error::Result;
use crate::exact::mpoly::{MPoly, Var, VarSet};
use crate::exact::rat::{rat_int, Rat};
use crate::exact::series::HSeries;
use crate::knot::{normalize_by_unknot, JonesSeries, KnotKind};

#[derive(Debug, Clone)]
pub struct MmRow {
    pub n: usize,
    pub s_degree: i64,
    pub even_in_s: bool,
    pub degree_bound_ok: bool,
}

/// Structure report for a colour-s series. `jnk[n][k]` is the coefficient of
/// z^k h^n under s = 2z+1; `top_line[j]` is the s^{2j} coefficient of the
/// h^{2j} term, the diagonal that the inverse Alexander polynomial controls.
#[derive(Debug, Clone)]
pub struct MmReport {
    pub normalized: bool,
    pub rows: Vec<MmRow>,
    pub jnk: Vec<Vec<Rat>>,
    pub top_line: Vec<Rat>,
    pub parity_violations: Vec<usize>,
}

pub fn mm_report(j: &JonesSeries) -> MmReport {
    let series = &j.series;
    let trunc = series.trunc();
    let mut rows = Vec::with_capacity(trunc + 1);
    let mut jnk = Vec::with_capacity(trunc + 1);
    let mut violations = Vec::new();
    for n in 0..=trunc {
        let c = series.coeff(n);
        let deg = c.degree_in(Var::S);
        let even = c.is_even_in(Var::S);
        if !even {
            violations.push(n);
        }
        rows.push(MmRow {
            n,
            s_degree: deg,
            even_in_s: even,
            degree_bound_ok: deg <= 2 * n as i64,
        });
        jnk.push(s_poly_to_z(c));
    }
    let mut top_line = Vec::new();
    for jj in 0..=(trunc / 2) {
        let c = series.coeff(2 * jj).coeff_of(Var::S, 2 * jj as u16);
        top_line.push(c.as_constant().unwrap_or_else(Rat::zero));
    }
    MmReport { normalized: j.normalized, rows, jnk, top_line, parity_violations: violations }
}

/// Expand a polynomial in s as a polynomial in z via s = 2z+1.
fn s_poly_to_z(c: &MPoly) -> Vec<Rat> {
    let deg = c.degree_in(Var::S).max(0) as usize;
    let mut out = vec![Rat::zero(); deg + 1];
    for i in 0..=deg {
        let a = c.coeff_of(Var::S, i as u16).as_constant().unwrap_or_else(Rat::zero);
        if a.is_zero() {
            continue;
        }
        // (2z+1)^i = sum_k C(i,k) 2^k z^k
        let mut binom = Rat::from_integer(1.into());
        for (k, slot) in out.iter_mut().enumerate().take(i + 1) {
            *slot += &a * &binom * rat_int(1i64 << k);
            binom = binom * rat_int((i - k) as i64) / rat_int(k as i64 + 1);
        }
    }
    out
}

/// Top line as a series in u (even orders only), ready to multiply against
/// the Alexander expansion.
pub fn top_line_series(j: &JonesSeries, order: usize) -> HSeries {
    let report = mm_report(j);
    let mut coeffs = vec![MPoly::zero(VarSet::EMPTY); order + 1];
    for (jj, c) in report.top_line.iter().enumerate() {
        if 2 * jj <= order {
            coeffs[2 * jj] = MPoly::constant(VarSet::EMPTY, c.clone());
        }
    }
    HSeries::from_coeffs(VarSet::EMPTY, coeffs)
}

/// Alexander polynomial evaluated at t = e^u, as an exact series in u.
/// Computed from the symmetric Laurent forms (trefoil, figure-eight) or the
/// sinh-quotient form for torus knots; independent of the Jones machinery.
pub fn alexander_eu(kind: KnotKind, order: usize) -> Result<HSeries> {
    let ring = VarSet::EMPTY;
    let e = |k: i64, n: usize| HSeries::exp_h(&MPoly::constant(ring, rat_int(k)), 0, n as i64);
    match kind {
        KnotKind::Unknot => Ok(HSeries::one(ring, order)),
        KnotKind::Trefoil => {
            // t - 1 + t^{-1}
            let one = HSeries::one(ring, order);
            e(1, order)?.sub(&one)?.add(&e(-1, order)?)
        }
        KnotKind::FigureEight => {
            // -t + 3 - t^{-1}
            let three = HSeries::constant(ring, rat_int(3), order);
            three.sub(&e(1, order)?)?.sub(&e(-1, order)?)
        }
        KnotKind::Torus(m, p) => {
            // (2sinh(mp u/2) 2sinh(u/2)) / (2sinh(m u/2) 2sinh(p u/2))
            let n = order + 2;
            let sh = |k: i64, n: usize| {
                HSeries::two_sinh_half(&MPoly::constant(ring, rat_int(k)), n)
            };
            let num = sh(m * p, n)?.mul(&sh(1, n)?)?;
            let den = sh(m, n)?.mul(&sh(p, n)?)?;
            Ok(num.div(&den)?.truncate(order))
        }
    }
}

/// T(u) · Delta_K(e^u) for the normalised, zero-framed series of `j`'s knot;
/// equals 1 exactly, order by order, when the diagonal carries the inverse
/// Alexander polynomial. Any intrinsic framing (torus expansions carry one)
/// is measured off the h^1 coefficient and removed first.
pub fn mmr_product(j: &JonesSeries, order: usize) -> Result<HSeries> {
    let normalized = normalize_by_unknot(j);
    let framing = crate::knot::measured_framing(j).unwrap_or(0);
    let zero_framed = crate::knot::mirror_and_frame(&normalized, false, -framing);
    let t = top_line_series(&zero_framed, order);
    let delta = alexander_eu(j.knot.kind, order)?;
    t.mul(&delta)
}
