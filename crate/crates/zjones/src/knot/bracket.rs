//! Kauffman-bracket state sum: an oracle for the colour-2 (two-dimensional)
//! specialisation of the Jones series, fully independent of the cyclotomic
//! expansion.
//!
//! The bracket is computed over all 2^c smoothings as an exact integer
//! Laurent polynomial in A, writhe-normalised by (-A^3)^{-w}, then
//! substituted A = e^{BRACKET_H_SIGN · h/4} and rescaled by the quantum
//! dimension at s = 2. The sign (mirror convention of the PD codes against
//! the series side) is calibrated once on the trefoil and frozen; the
//! figure-eight is amphichiral, so its oracle comparison does not depend on
//! the calibration.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::mpoly::{MPoly, VarSet};
use crate::exact::rat::{rat_int, Rat};
use crate::exact::series::HSeries;
use crate::knot::{qdim_series, series_at_colour, KnotKind, KnotSpec};

/// Frozen by the trefoil calibration test: A = e^{-h/4}, i.e. t = A^{-4} = e^h.
pub const BRACKET_H_SIGN: i64 = -1;

/// Crossing-list presentation: each crossing lists its four arc labels in PD
/// convention; the writhe is stored explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarDiagram {
    pub crossings: Vec<[u32; 4]>,
    pub writhe: i64,
}

impl PlanarDiagram {
    pub fn new(crossings: Vec<[u32; 4]>, writhe: i64) -> Result<PlanarDiagram> {
        let pd = PlanarDiagram { crossings, writhe };
        pd.validate()?;
        Ok(pd)
    }

    /// {"crossings":[[1,4,2,5],...],"writhe":w}
    pub fn parse_json(text: &str) -> Result<PlanarDiagram> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("PD json: {e}")))?;
        let arr = v["crossings"]
            .as_array()
            .ok_or_else(|| Error::Parse("PD json needs \"crossings\" array".into()))?;
        let mut crossings = Vec::with_capacity(arr.len());
        for c in arr {
            let quad = c
                .as_array()
                .filter(|q| q.len() == 4)
                .ok_or_else(|| Error::Parse("each crossing needs 4 arc labels".into()))?;
            let mut x = [0u32; 4];
            for (i, q) in quad.iter().enumerate() {
                x[i] = q
                    .as_u64()
                    .ok_or_else(|| Error::Parse("arc labels are positive integers".into()))?
                    as u32;
            }
            crossings.push(x);
        }
        let writhe = v["writhe"]
            .as_i64()
            .ok_or_else(|| Error::Parse("PD json needs integer \"writhe\"".into()))?;
        PlanarDiagram::new(crossings, writhe)
    }

    /// Zero-crossing unknot diagram.
    pub fn unknot() -> PlanarDiagram {
        PlanarDiagram { crossings: Vec::new(), writhe: 0 }
    }

    /// Standard 3-crossing trefoil diagram.
    pub fn trefoil() -> PlanarDiagram {
        PlanarDiagram { crossings: vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], writhe: -3 }
    }

    /// 4-crossing figure-eight diagram (writhe 0), read off the closure of
    /// the braid word s1 s2^{-1} s1 s2^{-1}.
    pub fn figure_eight() -> PlanarDiagram {
        PlanarDiagram {
            crossings: vec![[2, 1, 4, 5], [5, 6, 7, 3], [6, 4, 1, 8], [8, 2, 3, 7]],
            writhe: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.crossings.is_empty() {
            return Ok(());
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for c in &self.crossings {
            for &a in c {
                *counts.entry(a).or_insert(0) += 1;
            }
        }
        for (a, n) in &counts {
            if *n != 2 {
                return Err(Error::Parse(format!("arc {a} appears {n} times, want 2")));
            }
        }
        if self.component_count() != 1 {
            return Err(Error::Unsupported("multi-component diagrams".into()));
        }
        Ok(())
    }

    fn component_count(&self) -> usize {
        // strands a—c and b—d; arcs sharing a label are the same segment
        let mut uf = UnionFind::new();
        for c in &self.crossings {
            uf.union(c[0], c[2]);
            uf.union(c[1], c[3]);
        }
        uf.component_count()
    }
}

#[derive(Default)]
struct UnionFind {
    parent: BTreeMap<u32, u32>,
}

impl UnionFind {
    fn new() -> Self {
        Self::default()
    }

    fn find(&mut self, x: u32) -> u32 {
        let p = *self.parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.parent.insert(x, root);
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent.insert(ra, rb);
        }
    }

    fn component_count(&mut self) -> usize {
        let keys: Vec<u32> = self.parent.keys().copied().collect();
        let mut roots = std::collections::BTreeSet::new();
        for k in keys {
            let r = self.find(k);
            roots.insert(r);
        }
        roots.len()
    }
}

type Laurent = BTreeMap<i64, BigInt>;

fn laurent_add(into: &mut Laurent, exp: i64, coeff: BigInt) {
    let e = into.entry(exp).or_insert_with(BigInt::zero);
    *e += coeff;
    if e.is_zero() {
        into.remove(&exp);
    }
}

/// Raw bracket polynomial <D> in A over all smoothings; the 2^c state sum
/// with loop value -A^2 - A^{-2} (unknot normalised to 1).
pub fn kauffman_bracket(pd: &PlanarDiagram) -> Result<Laurent> {
    pd.validate()?;
    let c = pd.crossings.len();
    if c > 16 {
        return Err(Error::ResourceBound { size: c, limit: 16 });
    }
    let mut out = Laurent::new();
    if c == 0 {
        laurent_add(&mut out, 0, BigInt::one());
        return Ok(out);
    }
    for state in 0u32..(1 << c) {
        let mut uf = UnionFind::new();
        let mut exp_a: i64 = 0;
        for (i, cr) in pd.crossings.iter().enumerate() {
            if state & (1 << i) == 0 {
                // A-smoothing joins (a,b) and (c,d)
                uf.union(cr[0], cr[1]);
                uf.union(cr[2], cr[3]);
                exp_a += 1;
            } else {
                uf.union(cr[0], cr[3]);
                uf.union(cr[1], cr[2]);
                exp_a -= 1;
            }
        }
        let loops = uf.component_count();
        // delta^{loops-1} with delta = -A^2 - A^{-2}
        let mut term = Laurent::new();
        laurent_add(&mut term, exp_a, BigInt::one());
        for _ in 1..loops {
            let mut next = Laurent::new();
            for (e, co) in &term {
                laurent_add(&mut next, e + 2, -co.clone());
                laurent_add(&mut next, e - 2, -co.clone());
            }
            term = next;
        }
        for (e, co) in term {
            laurent_add(&mut out, e, co);
        }
    }
    Ok(out)
}

/// Writhe-normalised bracket: f = (-A^3)^{-w} <D>, an invariant of the knot.
pub fn normalized_bracket(pd: &PlanarDiagram) -> Result<Laurent> {
    let raw = kauffman_bracket(pd)?;
    let w = pd.writhe;
    let sign = if w % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let mut out = Laurent::new();
    for (e, co) in raw {
        laurent_add(&mut out, e - 3 * w, co * &sign);
    }
    Ok(out)
}

/// The oracle series at colour s = 2: quantum dimension at s=2 times the
/// writhe-normalised bracket under A = e^{sign·h/4}. Coefficients are exact
/// rationals (constant polynomials).
pub fn kauffman_jones_oracle_signed(
    pd: &PlanarDiagram,
    order: i64,
    sign: i64,
) -> Result<HSeries> {
    if order < 0 {
        return Err(Error::InvalidOrder(format!("oracle order {order}")));
    }
    let n = order as usize;
    let f = normalized_bracket(pd)?;
    let ring = VarSet::EMPTY;
    let mut v = HSeries::zero(ring, n);
    for (e, co) in &f {
        // A^e = e^{sign·e·h/4}
        let expo = HSeries::exp_h(&MPoly::constant(ring, rat_int(sign * e)), 2, order)?;
        v = v.add(&expo.scale(&Rat::from_integer(co.clone())))?;
    }
    // rescale by qdim at s=2
    let qd2 = series_at_colour(&qdim_series(n), rat_int(2))?;
    let qd2_series = HSeries::from_coeffs(
        ring,
        qd2.into_iter().map(|r| MPoly::constant(ring, r)).collect(),
    );
    v.mul(&qd2_series)
}

/// Oracle with the frozen calibration sign.
pub fn kauffman_jones_oracle(pd: &PlanarDiagram, order: i64) -> Result<HSeries> {
    kauffman_jones_oracle_signed(pd, order, BRACKET_H_SIGN)
}

/// Re-run the calibration: which substitution sign makes the trefoil diagram
/// reproduce the trefoil series at s = 2? Returns the sign; the frozen
/// constant must equal it (regression test).
pub fn calibrate_bracket_sign(order: i64) -> Result<i64> {
    let habiro =
        crate::knot::jones_habiro(KnotSpec::new(KnotKind::Trefoil), order)?;
    let at2 = series_at_colour(&habiro.series, rat_int(2))?;
    let pd = PlanarDiagram::trefoil();
    for sign in [-1i64, 1] {
        let oracle = kauffman_jones_oracle_signed(&pd, order, sign)?;
        let coeffs: Vec<Rat> =
            oracle.coeffs().iter().map(|c| c.as_constant().unwrap_or_else(Rat::zero)).collect();
        if coeffs == at2 {
            return Ok(sign);
        }
    }
    Err(Error::Unsupported("no bracket substitution sign matches the trefoil".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_bracket_is_one() {
        let b = kauffman_bracket(&PlanarDiagram::unknot()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[&0], BigInt::one());
    }

    #[test]
    fn trefoil_bracket_known_value() {
        // raw bracket: A^7 - A^3 - A^{-5}; writhe-normalised with w = -3:
        // A^4 + A^{12} - A^{16}, the left-trefoil Jones polynomial at t = A^{-4}
        let b = kauffman_bracket(&PlanarDiagram::trefoil()).unwrap();
        let got: Vec<(i64, i64)> =
            b.iter().map(|(e, v)| (*e, i64::try_from(v).unwrap())).collect();
        assert_eq!(got, vec![(-5, -1), (3, -1), (7, 1)]);
        let f = normalized_bracket(&PlanarDiagram::trefoil()).unwrap();
        let got: Vec<(i64, i64)> =
            f.iter().map(|(e, v)| (*e, i64::try_from(v).unwrap())).collect();
        assert_eq!(got, vec![(4, 1), (12, 1), (16, -1)]);
    }

    #[test]
    fn figure_eight_bracket_is_jones_value() {
        // f = A^{-8} - A^{-4} + 1 - A^4 + A^8, i.e. V(4_1) at t = A^{-4}
        let f = normalized_bracket(&PlanarDiagram::figure_eight()).unwrap();
        let got: Vec<(i64, i64)> =
            f.iter().map(|(e, v)| (*e, i64::try_from(v).unwrap())).collect();
        assert_eq!(got, vec![(-8, 1), (-4, -1), (0, 1), (4, -1), (8, 1)]);
    }

    #[test]
    fn figure_eight_pd_is_valid_and_single_component() {
        let pd = PlanarDiagram::figure_eight();
        assert!(pd.validate().is_ok());
        let b = kauffman_bracket(&pd).unwrap();
        assert!(!b.is_empty());
    }

    #[test]
    fn multi_component_rejected() {
        // two disjoint 1-crossing kinks... simplest: Hopf-link-like 2-crossing PD
        let pd = PlanarDiagram { crossings: vec![[1, 3, 2, 4], [3, 1, 4, 2]], writhe: 0 };
        assert!(matches!(pd.validate(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"crossings":[[1,4,2,5],[3,6,4,1],[5,2,6,3]],"writhe":-3}"#;
        let pd = PlanarDiagram::parse_json(text).unwrap();
        assert_eq!(pd, PlanarDiagram::trefoil());
        assert!(PlanarDiagram::parse_json("{}").is_err());
    }

    #[test]
    fn unknot_oracle_is_qdim_at_two() {
        let o = kauffman_jones_oracle(&PlanarDiagram::unknot(), 8).unwrap();
        let qd2 = series_at_colour(&qdim_series(8), rat_int(2)).unwrap();
        for (n, r) in qd2.iter().enumerate() {
            assert_eq!(&o.coeff(n).as_constant().unwrap(), r, "at h^{n}");
        }
    }

    #[test]
    fn calibration_regression() {
        assert_eq!(calibrate_bracket_sign(10).unwrap(), BRACKET_H_SIGN);
    }

    #[test]
    fn figure_eight_oracle_matches_series() {
        let habiro = crate::knot::jones_habiro(
            KnotSpec::new(KnotKind::FigureEight),
            12,
        )
        .unwrap();
        let at2 = series_at_colour(&habiro.series, rat_int(2)).unwrap();
        let oracle = kauffman_jones_oracle(&PlanarDiagram::figure_eight(), 12).unwrap();
        for (n, r) in at2.iter().enumerate() {
            assert_eq!(&oracle.coeff(n).as_constant().unwrap(), r, "at h^{n}");
        }
    }
}
