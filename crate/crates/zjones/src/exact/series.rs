//! Truncated formal power series in `h` with multivariate polynomial
//! coefficients.
//!
//! Truncation order is explicit state: an `HSeries` of order N stores
//! coefficients of h^0..h^N and claims nothing beyond. Arithmetic never
//! extends accuracy — the result order is the minimum of the operand orders,
//! and division by a series of valuation v costs v orders.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::mpoly::{MPoly, Var, VarSet, NVARS, VAR_NAMES};
use crate::exact::rat::{factorial, rat_string, rat_to_f64, round_to_bits, Rat};

#[derive(Debug, Clone, PartialEq)]
pub struct HSeries {
    ring: VarSet,
    /// coefficient of h^n at index n; length = trunc + 1
    coeffs: Vec<MPoly>,
}

/// Result of numeric partial-sum evaluation. `last_term_abs` is a heuristic
/// truncation indicator only — these series are generically divergent, so no
/// convergence claim is attached.
#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub value: Complex64,
    pub last_term_abs: f64,
    pub precision_bits: u32,
}

impl HSeries {
    pub fn zero(ring: VarSet, trunc: usize) -> HSeries {
        HSeries { ring, coeffs: vec![MPoly::zero(ring); trunc + 1] }
    }

    pub fn one(ring: VarSet, trunc: usize) -> HSeries {
        let mut s = HSeries::zero(ring, trunc);
        s.coeffs[0] = MPoly::one(ring);
        s
    }

    pub fn constant(ring: VarSet, c: Rat, trunc: usize) -> HSeries {
        let mut s = HSeries::zero(ring, trunc);
        s.coeffs[0] = MPoly::constant(ring, c);
        s
    }

    pub fn from_coeffs(ring: VarSet, coeffs: Vec<MPoly>) -> HSeries {
        assert!(!coeffs.is_empty());
        HSeries { ring, coeffs }
    }

    /// c * h^n as a series of order `trunc`.
    pub fn monomial(ring: VarSet, c: MPoly, n: usize, trunc: usize) -> HSeries {
        let mut s = HSeries::zero(ring, trunc);
        if n <= trunc {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn ring(&self) -> VarSet {
        self.ring
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &MPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    /// Smallest index with nonzero coefficient; trunc+1 for the zero series.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, n: usize) -> HSeries {
        let n = n.min(self.trunc());
        HSeries { ring: self.ring, coeffs: self.coeffs[..=n].to_vec() }
    }

    fn check_ring(&self, other: &HSeries) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &HSeries) -> Result<HSeries> {
        self.check_ring(other)?;
        let n = self.trunc().min(other.trunc());
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            coeffs.push(self.coeffs[k].add(&other.coeffs[k])?);
        }
        Ok(HSeries { ring: self.ring, coeffs })
    }

    pub fn sub(&self, other: &HSeries) -> Result<HSeries> {
        self.check_ring(other)?;
        let n = self.trunc().min(other.trunc());
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            coeffs.push(self.coeffs[k].sub(&other.coeffs[k])?);
        }
        Ok(HSeries { ring: self.ring, coeffs })
    }

    pub fn neg(&self) -> HSeries {
        HSeries { ring: self.ring, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, other: &HSeries) -> Result<HSeries> {
        self.check_ring(other)?;
        let n = self.trunc().min(other.trunc());
        let mut coeffs = vec![MPoly::zero(self.ring); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let t = self.coeffs[i].mul(&other.coeffs[j])?;
                coeffs[i + j] = coeffs[i + j].add(&t)?;
            }
        }
        Ok(HSeries { ring: self.ring, coeffs })
    }

    pub fn scale(&self, k: &Rat) -> HSeries {
        HSeries { ring: self.ring, coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect() }
    }

    pub fn scale_poly(&self, k: &MPoly) -> Result<HSeries> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.mul(k)?);
        }
        Ok(HSeries { ring: self.ring, coeffs })
    }

    /// Multiply by h^k (drops the top k orders; truncation order unchanged).
    pub fn shift_up(&self, k: usize) -> HSeries {
        let n = self.trunc();
        let mut coeffs = vec![MPoly::zero(self.ring); n + 1];
        for i in 0..=n {
            if i + k <= n {
                coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        HSeries { ring: self.ring, coeffs }
    }

    /// Quotient of power series. Requires valuation(den) <= valuation(num) and
    /// an invertible (constant rational) leading coefficient in `den`.
    /// The result order is min(orders) - valuation(den).
    pub fn div(&self, den: &HSeries) -> Result<HSeries> {
        self.check_ring(den)?;
        let vd = den.valuation();
        if vd == den.coeffs.len() {
            return Err(Error::DivisionByZero);
        }
        let vn = self.valuation();
        if vd > vn {
            return Err(Error::Pole { num_valuation: vn, den_valuation: vd });
        }
        let lead = den.coeffs[vd]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or(Error::NonUnitLeadingCoefficient)?;
        let lead_inv = lead.recip();
        let n = self.trunc().min(den.trunc()) - vd;
        let mut out = vec![MPoly::zero(self.ring); n + 1];
        for k in 0..=n {
            // numerator coefficient of h^{k+vd} minus the convolution tail
            let mut acc = if k + vd <= self.trunc() {
                self.coeffs[k + vd].clone()
            } else {
                MPoly::zero(self.ring)
            };
            for j in 1..=k {
                if vd + j <= den.trunc() && !den.coeffs[vd + j].is_zero() && !out[k - j].is_zero() {
                    acc = acc.sub(&den.coeffs[vd + j].mul(&out[k - j])?)?;
                }
            }
            out[k] = acc.scale(&lead_inv);
        }
        Ok(HSeries { ring: self.ring, coeffs: out })
    }

    /// h -> -h.
    pub fn mirror_h(&self) -> HSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| if n % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        HSeries { ring: self.ring, coeffs }
    }

    /// Apply a polynomial map to every coefficient.
    pub fn map_coeffs<F>(&self, ring: VarSet, f: F) -> Result<HSeries>
    where
        F: Fn(&MPoly) -> Result<MPoly>,
    {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(f(c)?);
        }
        Ok(HSeries { ring, coeffs })
    }

    /// exp(a·h/2^half_shift) to order N: sum a^n h^n / (2^{n·half_shift} n!).
    pub fn exp_h(a: &MPoly, half_shift: u32, n: i64) -> Result<HSeries> {
        if n < 0 {
            return Err(Error::InvalidOrder(format!("exp_h order {n}")));
        }
        let n = n as usize;
        let ring = a.ring();
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(MPoly::one(ring));
        let denom_step = Rat::from_integer(num::BigInt::one() << half_shift as usize);
        for k in 1..=n {
            let prev = &coeffs[k - 1];
            let c = prev.mul(a)?.scale(&(Rat::from_integer(num::BigInt::from(k)) * &denom_step).recip());
            coeffs.push(c);
        }
        Ok(HSeries { ring, coeffs })
    }

    /// 2·sinh(a·h/2) = sum_j a^{2j+1} h^{2j+1} / (4^j (2j+1)!).
    pub fn two_sinh_half(a: &MPoly, n: usize) -> Result<HSeries> {
        let ring = a.ring();
        let a2 = a.mul(a)?;
        let mut coeffs = vec![MPoly::zero(ring); n + 1];
        let mut term = a.clone(); // a^{2j+1}
        let mut j = 0usize;
        while 2 * j + 1 <= n {
            let denom = Rat::from_integer(factorial(2 * j + 1) << (2 * j));
            coeffs[2 * j + 1] = term.scale(&denom.recip());
            j += 1;
            if 2 * j + 1 <= n {
                term = term.mul(&a2)?;
            }
        }
        Ok(HSeries { ring, coeffs })
    }

    /// 2·sinh(a·h/2)/a = sum_j a^{2j} h^{2j+1} / (4^j (2j+1)!), polynomial in a.
    pub fn two_sinh_half_over_arg(a: &MPoly, n: usize) -> Result<HSeries> {
        let ring = a.ring();
        let a2 = a.mul(a)?;
        let mut coeffs = vec![MPoly::zero(ring); n + 1];
        let mut term = MPoly::one(ring); // a^{2j}
        let mut j = 0usize;
        while 2 * j + 1 <= n {
            let denom = Rat::from_integer(factorial(2 * j + 1) << (2 * j));
            coeffs[2 * j + 1] = term.scale(&denom.recip());
            j += 1;
            if 2 * j + 1 <= n {
                term = term.mul(&a2)?;
            }
        }
        Ok(HSeries { ring, coeffs })
    }

    /// Evaluate every coefficient at an exact rational assignment.
    pub fn eval_coeffs_rat(&self, assign: &BTreeMap<Var, Rat>) -> Result<Vec<Rat>> {
        self.coeffs.iter().map(|c| c.eval_rat(assign)).collect()
    }

    /// Partial-sum numeric evaluation at `h0`. Coefficients are first rounded
    /// to the requested precision (capped at f64's 53 bits), then summed.
    pub fn eval_numeric(
        &self,
        assign: &BTreeMap<Var, Complex64>,
        h0: Complex64,
        precision_bits: u32,
    ) -> Result<EvalOutcome> {
        let bits = precision_bits.min(53);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        let mut last = 0.0;
        for (n, c) in self.coeffs.iter().enumerate() {
            let cv = if bits < 53 {
                let mut rounded = MPoly::zero(self.ring);
                let _ = &mut rounded;
                // round each rational coefficient before evaluation
                let mut sum = Complex64::new(0.0, 0.0);
                for (e, r) in c.terms() {
                    let mut t = Complex64::new(rat_to_f64(&round_to_bits(r, bits)), 0.0);
                    for (i, &k) in e.iter().enumerate() {
                        if k > 0 {
                            let v = match i {
                                0 => Var::S,
                                1 => Var::C,
                                2 => Var::S1,
                                _ => Var::S2,
                            };
                            let x = assign.get(&v).ok_or_else(|| {
                                Error::UnassignedVariable(VAR_NAMES[i].to_string())
                            })?;
                            t *= x.powu(k as u32);
                        }
                    }
                    sum += t;
                }
                sum
            } else {
                c.eval_complex(assign)?
            };
            let term = cv * pw;
            acc += term;
            if n == self.coeffs.len() - 1 {
                last = term.norm();
            }
            pw *= h0;
        }
        Ok(EvalOutcome { value: acc, last_term_abs: last, precision_bits: bits })
    }

    /// JSON form pinned by the external interface:
    /// {"var":"h","trunc":N,"coeffs":[{"monomials":[{"exps":{"s":2},"num":"1","den":"8"}]},...]}
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|c| {
                let monos: Vec<Value> = c
                    .terms()
                    .map(|(e, r)| {
                        let mut exps = serde_json::Map::new();
                        for i in 0..NVARS {
                            if e[i] > 0 {
                                exps.insert(VAR_NAMES[i].to_string(), json!(e[i]));
                            }
                        }
                        json!({
                            "exps": Value::Object(exps),
                            "num": r.numer().to_string(),
                            "den": r.denom().to_string(),
                        })
                    })
                    .collect();
                json!({ "monomials": monos })
            })
            .collect();
        json!({ "var": "h", "trunc": self.trunc(), "coeffs": coeffs })
    }

    /// Compact text rendering for logs and CSV: one `coeff * h^n` row per order.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Coefficient of h^n as an exact rational string (univariate series only).
    pub fn coeff_rat_string(&self, n: usize) -> String {
        match self.coeffs[n].as_constant() {
            Some(r) => rat_string(&r),
            None => self.coeffs[n].to_string(),
        }
    }
}

/// The three binary ring operations behind one entry point, as the batch
/// interface exposes them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Scale,
}

/// Dispatcher for series arithmetic. `Scale` multiplies `a` by the h^0
/// coefficient of `b`.
pub fn poly_series_arith(a: &HSeries, b: &HSeries, op: SeriesOp) -> Result<HSeries> {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Scale => a.scale_poly(b.coeff(0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{rat, rat_int};

    fn s_var() -> MPoly {
        MPoly::var(VarSet::S, Var::S)
    }

    #[test]
    fn difference_of_squares() {
        // (1 + h)(1 - h) = 1 - h^2
        let one = HSeries::one(VarSet::S, 4);
        let h = HSeries::monomial(VarSet::S, MPoly::one(VarSet::S), 1, 4);
        let p = one.add(&h).unwrap();
        let q = one.sub(&h).unwrap();
        let r = p.mul(&q).unwrap();
        assert_eq!(r.coeff(0).as_constant().unwrap(), rat_int(1));
        assert!(r.coeff(1).is_zero());
        assert_eq!(r.coeff(2).as_constant().unwrap(), rat_int(-1));
        assert!(r.coeff(3).is_zero() && r.coeff(4).is_zero());
    }

    #[test]
    fn additive_identity() {
        let f = HSeries::exp_h(&s_var(), 0, 6).unwrap();
        let z = HSeries::zero(VarSet::S, 6);
        assert_eq!(f.add(&z).unwrap(), f);
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = HSeries::exp_h(&MPoly::zero(VarSet::S), 0, 5).unwrap();
        assert_eq!(e, HSeries::one(VarSet::S, 5));
    }

    #[test]
    fn exp_taylor_coefficients() {
        // exp_h(s, N=3) = 1 + s h + s^2 h^2/2 + s^3 h^3/6
        let e = HSeries::exp_h(&s_var(), 0, 3).unwrap();
        assert_eq!(e.coeff(0).to_string(), "1");
        assert_eq!(e.coeff(1).to_string(), "s");
        assert_eq!(e.coeff(2).to_string(), "1/2*s^2");
        assert_eq!(e.coeff(3).to_string(), "1/6*s^3");
    }

    #[test]
    fn exp_negative_order_rejected() {
        assert!(matches!(HSeries::exp_h(&s_var(), 0, -1), Err(Error::InvalidOrder(_))));
    }

    #[test]
    fn exp_inverse_law() {
        // exp(s h/2) * exp(-s h/2) = 1 + O(h^{N+1})
        let a = HSeries::exp_h(&s_var(), 1, 8).unwrap();
        let b = HSeries::exp_h(&s_var().neg(), 1, 8).unwrap();
        assert_eq!(a.mul(&b).unwrap(), HSeries::one(VarSet::S, 8));
    }

    #[test]
    fn exp_homomorphism() {
        // exp(a h) exp(b h) = exp((a+b) h) with a = s, b = 2s^2 - 3
        let a = s_var();
        let b = s_var()
            .mul(&s_var())
            .unwrap()
            .scale(&rat_int(2))
            .sub(&MPoly::constant(VarSet::S, rat_int(3)))
            .unwrap();
        let lhs = HSeries::exp_h(&a, 0, 7).unwrap().mul(&HSeries::exp_h(&b, 0, 7).unwrap()).unwrap();
        let rhs = HSeries::exp_h(&a.add(&b).unwrap(), 0, 7).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_cancellation_div() {
        // (h + h^3/6) / h = 1 + h^2/6
        let mut num = HSeries::zero(VarSet::S, 4);
        num = num.add(&HSeries::monomial(VarSet::S, MPoly::one(VarSet::S), 1, 4)).unwrap();
        num = num
            .add(&HSeries::monomial(VarSet::S, MPoly::constant(VarSet::S, rat(1, 6)), 3, 4))
            .unwrap();
        let den = HSeries::monomial(VarSet::S, MPoly::one(VarSet::S), 1, 4);
        let q = num.div(&den).unwrap();
        assert_eq!(q.trunc(), 3);
        assert_eq!(q.coeff(0).as_constant().unwrap(), rat_int(1));
        assert_eq!(q.coeff(2).as_constant().unwrap(), rat(1, 6));
    }

    #[test]
    fn geometric_series_div() {
        // 1 / (1 - h) = sum h^n
        let one = HSeries::one(VarSet::S, 6);
        let den = one.sub(&HSeries::monomial(VarSet::S, MPoly::one(VarSet::S), 1, 6)).unwrap();
        let q = one.div(&den).unwrap();
        for n in 0..=6 {
            assert_eq!(q.coeff(n).as_constant().unwrap(), rat_int(1), "at h^{n}");
        }
    }

    #[test]
    fn pole_and_zero_division_errors() {
        let h = HSeries::monomial(VarSet::S, MPoly::one(VarSet::S), 1, 4);
        let one = HSeries::one(VarSet::S, 4);
        assert!(matches!(one.div(&h), Err(Error::Pole { .. })));
        let z = HSeries::zero(VarSet::S, 4);
        assert!(matches!(one.div(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn sinh_ratio_melvin_morton_coefficients() {
        // 2sinh(s h/2) / 2sinh(h/2) at order 4:
        //   s + (s^3 - s) h^2/24 + (3 s^5 - 10 s^3 + 7 s) h^4/5760
        let num = HSeries::two_sinh_half(&s_var(), 5).unwrap();
        let den = HSeries::two_sinh_half(&MPoly::one(VarSet::S), 5).unwrap();
        let q = num.div(&den).unwrap();
        assert_eq!(q.coeff(0).to_string(), "s");
        assert!(q.coeff(1).is_zero());
        assert_eq!(q.coeff(2).to_string(), "1/24*s^3 - 1/24*s");
        assert!(q.coeff(3).is_zero());
        assert_eq!(q.coeff(4).to_string(), "1/1920*s^5 - 1/576*s^3 + 7/5760*s");
    }

    #[test]
    fn formal_inverse_round_trip() {
        // (sum s^n h^n / n! truncated at 4) * its formal inverse = 1 + O(h^5)
        let f = HSeries::exp_h(&s_var(), 0, 4).unwrap();
        let inv = HSeries::one(VarSet::S, 4).div(&f).unwrap();
        assert_eq!(f.mul(&inv).unwrap(), HSeries::one(VarSet::S, 4));
    }

    #[test]
    fn div_is_exact_inverse_of_mul() {
        let a = HSeries::two_sinh_half(&s_var(), 9).unwrap();
        let b = HSeries::exp_h(&s_var(), 1, 9).unwrap();
        let prod = a.mul(&b).unwrap();
        let back = prod.div(&b).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn valuation_tracking() {
        let z = HSeries::zero(VarSet::S, 3);
        assert_eq!(z.valuation(), 4);
        let m = HSeries::monomial(VarSet::S, s_var(), 2, 5);
        assert_eq!(m.valuation(), 2);
    }

    #[test]
    fn eval_numeric_basic() {
        // f = 1 + h at h0 = 0.5 -> 1.5
        let one = HSeries::one(VarSet::EMPTY, 1);
        let f = one.add(&HSeries::monomial(VarSet::EMPTY, MPoly::one(VarSet::EMPTY), 1, 1)).unwrap();
        let out = f.eval_numeric(&BTreeMap::new(), Complex64::new(0.5, 0.0), 53).unwrap();
        assert!((out.value.re - 1.5).abs() < 1e-15);
        let z = HSeries::zero(VarSet::EMPTY, 3);
        let oz = z.eval_numeric(&BTreeMap::new(), Complex64::new(0.3, 0.0), 53).unwrap();
        assert_eq!(oz.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn eval_numeric_qdim_closed_form() {
        // sinh(2x)/(2 sinh x) = cosh(x); at s=2, h=0.1 the value is cosh(0.05)
        let num = HSeries::two_sinh_half_over_arg(&s_var(), 24).unwrap();
        let den = HSeries::two_sinh_half(&MPoly::one(VarSet::S), 24).unwrap();
        let qdim = num.div(&den).unwrap();
        let mut assign = BTreeMap::new();
        assign.insert(Var::S, Complex64::new(2.0, 0.0));
        let out = qdim.eval_numeric(&assign, Complex64::new(0.1, 0.0), 53).unwrap();
        assert!((out.value.re - 0.05f64.cosh()).abs() < 1e-14, "got {}", out.value.re);
    }

    #[test]
    fn unassigned_variable_is_reported() {
        let f = HSeries::monomial(VarSet::S, s_var(), 0, 2);
        let err = f.eval_numeric(&BTreeMap::new(), Complex64::new(0.1, 0.0), 53).unwrap_err();
        assert_eq!(err, Error::UnassignedVariable("s".into()));
    }

    #[test]
    fn json_shape() {
        let f = HSeries::monomial(VarSet::S, s_var().mul(&s_var()).unwrap().scale(&rat(1, 8)), 0, 1);
        let v = f.to_json();
        assert_eq!(v["var"], "h");
        assert_eq!(v["trunc"], 1);
        assert_eq!(v["coeffs"][0]["monomials"][0]["exps"]["s"], 2);
        assert_eq!(v["coeffs"][0]["monomials"][0]["num"], "1");
        assert_eq!(v["coeffs"][0]["monomials"][0]["den"], "8");
    }

    #[test]
    fn truncation_is_min_of_operands() {
        let a = HSeries::one(VarSet::S, 9);
        let b = HSeries::one(VarSet::S, 5);
        assert_eq!(a.mul(&b).unwrap().trunc(), 5);
        assert_eq!(a.add(&b).unwrap().trunc(), 5);
    }
}
