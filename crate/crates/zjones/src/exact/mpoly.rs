//! Sparse multivariate polynomials over the fixed variable universe
//! {s, c, s1, s2} with arbitrary-precision rational coefficients.
//!
//! Every polynomial carries the variable set of its ring; arithmetic between
//! different rings is a `RingMismatch` error rather than a silent union.
//! Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num::complex::Complex64;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rat::{rat_string, rat_to_f64, Rat};

pub const NVARS: usize = 4;
pub const VAR_NAMES: [&str; NVARS] = ["s", "c", "s1", "s2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    S = 0,
    C = 1,
    S1 = 2,
    S2 = 3,
}

impl Var {
    pub fn name(self) -> &'static str {
        VAR_NAMES[self as usize]
    }

    pub fn from_name(name: &str) -> Result<Var> {
        match name {
            "s" => Ok(Var::S),
            "c" => Ok(Var::C),
            "s1" => Ok(Var::S1),
            "s2" => Ok(Var::S2),
            _ => Err(Error::Parse(format!("unknown variable '{name}'"))),
        }
    }
}

/// Set of variables a ring instance permits, as a bitmask over `Var`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarSet(pub u8);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);
    pub const S: VarSet = VarSet(1);
    pub const C: VarSet = VarSet(2);
    pub const S1S2: VarSet = VarSet(4 | 8);

    pub fn single(v: Var) -> VarSet {
        VarSet(1 << v as u8)
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & (1 << v as u8) != 0
    }

    pub fn vars(self) -> impl Iterator<Item = Var> {
        [Var::S, Var::C, Var::S1, Var::S2].into_iter().filter(move |v| self.contains(*v))
    }
}

pub type Expo = [u16; NVARS];

const EXPO_ZERO: Expo = [0; NVARS];

/// Sparse polynomial: exponent vector -> nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    ring: VarSet,
    terms: BTreeMap<Expo, Rat>,
}

impl MPoly {
    pub fn zero(ring: VarSet) -> MPoly {
        MPoly { ring, terms: BTreeMap::new() }
    }

    pub fn constant(ring: VarSet, c: Rat) -> MPoly {
        let mut p = MPoly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(EXPO_ZERO, c);
        }
        p
    }

    pub fn one(ring: VarSet) -> MPoly {
        MPoly::constant(ring, Rat::one())
    }

    /// The monomial `v^k` in a ring that must contain `v`.
    pub fn var_pow(ring: VarSet, v: Var, k: u16) -> MPoly {
        assert!(ring.contains(v), "variable {} not in ring", v.name());
        if k == 0 {
            return MPoly::one(ring);
        }
        let mut e = EXPO_ZERO;
        e[v as usize] = k;
        let mut p = MPoly::zero(ring);
        p.terms.insert(e, Rat::one());
        p
    }

    pub fn var(ring: VarSet, v: Var) -> MPoly {
        MPoly::var_pow(ring, v, 1)
    }

    pub fn ring(&self) -> VarSet {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient viewed as a constant, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&EXPO_ZERO).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, e: &Expo) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of `v^k` as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: Var, k: u16) -> MPoly {
        let mut out = MPoly::zero(self.ring);
        for (e, c) in &self.terms {
            if e[v as usize] == k {
                let mut e2 = *e;
                e2[v as usize] = 0;
                out.insert_term(e2, c.clone());
            }
        }
        out
    }

    fn insert_term(&mut self, e: Expo, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &MPoly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(*e, -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MPoly {
        let mut out = MPoly::zero(self.ring);
        for (e, c) in &self.terms {
            out.terms.insert(*e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_ring(other)?;
        let mut out = MPoly::zero(self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for i in 0..NVARS {
                    e[i] += eb[i];
                }
                out.insert_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rat) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.ring);
        }
        let mut out = MPoly::zero(self.ring);
        for (e, c) in &self.terms {
            out.terms.insert(*e, c * k);
        }
        out
    }

    pub fn pow(&self, mut n: usize) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one(self.ring);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Substitute a polynomial for one variable. The result lives in `target`'s
    /// ring; all other variables must be absent.
    pub fn substitute(&self, v: Var, target: &MPoly) -> Result<MPoly> {
        let vi = v as usize;
        let mut out = MPoly::zero(target.ring);
        // group by exponent of v, Horner over decreasing powers
        let mut by_pow: BTreeMap<u16, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            for (i, name) in VAR_NAMES.iter().enumerate() {
                if i != vi && e[i] != 0 {
                    return Err(Error::UnassignedVariable(name.to_string()));
                }
            }
            by_pow
                .entry(e[vi])
                .or_insert_with(|| MPoly::zero(target.ring))
                .insert_term(EXPO_ZERO, c.clone());
        }
        let max = by_pow.keys().next_back().copied().unwrap_or(0);
        for k in (0..=max).rev() {
            out = out.mul(target)?;
            if let Some(c) = by_pow.get(&k) {
                out = out.add(c)?;
            }
        }
        Ok(out)
    }

    /// Rename one variable into another (for colour relabelling s -> s1, s -> s2).
    pub fn rename_var(&self, from: Var, to: Var, ring: VarSet) -> MPoly {
        let mut out = MPoly::zero(ring);
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let k = e2[from as usize];
            e2[from as usize] = 0;
            e2[to as usize] += k;
            out.insert_term(e2, c.clone());
        }
        out
    }

    pub fn degree_in(&self, v: Var) -> i64 {
        self.terms.keys().map(|e| e[v as usize] as i64).max().unwrap_or(-1)
    }

    /// True when every monomial has even exponent in `v`.
    pub fn is_even_in(&self, v: Var) -> bool {
        self.terms.keys().all(|e| e[v as usize] % 2 == 0)
    }

    /// Exact rational evaluation with one assignment per ring variable.
    pub fn eval_rat(&self, assign: &BTreeMap<Var, Rat>) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for v in [Var::S, Var::C, Var::S1, Var::S2] {
                let k = e[v as usize];
                if k > 0 {
                    let x = assign
                        .get(&v)
                        .ok_or_else(|| Error::UnassignedVariable(v.name().to_string()))?;
                    t *= num::pow::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Complex evaluation at f64 precision.
    pub fn eval_complex(&self, assign: &BTreeMap<Var, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(rat_to_f64(c), 0.0);
            for v in [Var::S, Var::C, Var::S1, Var::S2] {
                let k = e[v as usize];
                if k > 0 {
                    let x = assign
                        .get(&v)
                        .ok_or_else(|| Error::UnassignedVariable(v.name().to_string()))?;
                    t *= x.powu(k as u32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Largest coefficient magnitude, as f64 (diagnostic).
    pub fn max_coeff_abs(&self) -> f64 {
        self.terms.values().map(|c| rat_to_f64(&c.abs())).fold(0.0, f64::max)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest-degree terms first reads naturally for univariate output
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut printed = false;
            let is_const = e.iter().all(|&k| k == 0);
            if !mag.is_one() || is_const {
                write!(f, "{}", rat_string(&mag))?;
                printed = true;
            }
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    if printed {
                        write!(f, "*")?;
                    }
                    write!(f, "{}", VAR_NAMES[i])?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                    printed = true;
                }
            }
        }
        Ok(())
    }
}
