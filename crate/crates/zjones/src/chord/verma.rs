//! Brute-force oracle for the sl2 weight system.
//!
//! Expands the tensor E⊗F + F⊗E + (1/2)H⊗H over all 3^m chord assignments,
//! applies each resulting word of E/F/H letters to the highest-weight vector
//! of the weight-(s-1) highest-weight module, and reads off the scalar by
//! which the word acts. Weights are tracked symbolically as polynomials in s,
//! so the result is exact. Independent of the recursive evaluation in
//! `weight`, which it validates.

use crate::chord::ChordDiagram;
use crate::error::{Error, Result};
use crate::exact::mpoly::{MPoly, Var, VarSet};
use crate::exact::rat::{rat, rat_int};

const DEFAULT_BOUND: usize = 4;

#[derive(Debug, Clone, Copy)]
enum Letter {
    E,
    F,
    H,
}

/// Scalar action of the weight-system element on the highest-weight module,
/// as a polynomial in s. Diagrams above the size bound are refused.
pub fn verma_oracle(d: &ChordDiagram) -> Result<MPoly> {
    verma_oracle_bounded(d, DEFAULT_BOUND)
}

pub fn verma_oracle_bounded(d: &ChordDiagram, bound: usize) -> Result<MPoly> {
    let m = d.chord_count();
    if m > bound {
        return Err(Error::ResourceBound { size: m, limit: bound });
    }
    if m == 0 {
        return Ok(MPoly::one(VarSet::S));
    }
    let word = d.word();
    // first-occurrence flags along the traversal
    let mut seen = vec![false; m + 1];
    let mut is_first = Vec::with_capacity(word.len());
    for &lab in word {
        is_first.push(!seen[lab as usize]);
        seen[lab as usize] = true;
    }

    let s = MPoly::var(VarSet::S, Var::S);
    let mut total = MPoly::zero(VarSet::S);
    // summands of the invariant tensor: (first letter, second letter, coefficient)
    let summands =
        [(Letter::E, Letter::F, rat_int(1)), (Letter::F, Letter::E, rat_int(1)), (Letter::H, Letter::H, rat(1, 2))];

    let mut assignment = vec![0usize; m];
    loop {
        // walk the circle from the basepoint; the first endpoint passed acts first
        let mut state: Vec<MPoly> = vec![MPoly::zero(VarSet::S); word.len() / 2 + 2];
        state[0] = MPoly::one(VarSet::S);
        let mut coeff = rat_int(1);
        for ci in &assignment {
            coeff *= summands[*ci].2.clone();
        }
        for (pos, &lab) in word.iter().enumerate() {
            let chord = (lab - 1) as usize;
            let letter = if is_first[pos] { summands[assignment[chord]].0 } else { summands[assignment[chord]].1 };
            state = apply_letter(&state, letter, &s);
        }
        // weight-zero word: the image of the highest-weight vector stays in
        // its weight space, so every deeper level must cancel exactly
        for (j, comp) in state.iter().enumerate().skip(1) {
            assert!(comp.is_zero(), "nonscalar action at level {j}");
        }
        total = total.add(&state[0].scale(&coeff)).expect("ring");

        // next assignment in base 3
        let mut k = 0;
        loop {
            if k == m {
                return Ok(total);
            }
            assignment[k] += 1;
            if assignment[k] < 3 {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

/// One letter acting on sum_j state[j] · F^j v0 with highest weight a = s-1:
///   H F^j v0 = (s-1-2j) F^j v0
///   F F^j v0 = F^{j+1} v0
///   E F^j v0 = j (s-j) F^{j-1} v0
fn apply_letter(state: &[MPoly], letter: Letter, s: &MPoly) -> Vec<MPoly> {
    let ring = VarSet::S;
    let mut out = vec![MPoly::zero(ring); state.len()];
    for (j, c) in state.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match letter {
            Letter::F => {
                if j + 1 < out.len() {
                    out[j + 1] = out[j + 1].add(c).expect("ring");
                }
            }
            Letter::H => {
                let factor = s.sub(&MPoly::constant(ring, rat_int(1 + 2 * j as i64))).expect("ring");
                out[j] = out[j].add(&c.mul(&factor).expect("ring")).expect("ring");
            }
            Letter::E => {
                if j >= 1 {
                    let factor =
                        s.sub(&MPoly::constant(ring, rat_int(j as i64))).expect("ring").scale(&rat_int(j as i64));
                    out[j - 1] = out[j - 1].add(&c.mul(&factor).expect("ring")).expect("ring");
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::weight::{cv_weight, WeightCache};
    use std::collections::BTreeMap;

    fn casimir_value() -> MPoly {
        // (s^2-1)/2
        let s = MPoly::var(VarSet::S, Var::S);
        s.mul(&s).unwrap().sub(&MPoly::constant(VarSet::S, rat_int(1))).unwrap().scale(&rat(1, 2))
    }

    #[test]
    fn empty_diagram_is_one() {
        assert_eq!(verma_oracle(&ChordDiagram::empty()).unwrap(), MPoly::one(VarSet::S));
    }

    #[test]
    fn one_chord_is_half_s_squared_minus_one() {
        let d = ChordDiagram::parse("1 1").unwrap();
        assert_eq!(verma_oracle(&d).unwrap(), casimir_value());
    }

    #[test]
    fn crossing_pair_matches_recursion() {
        let d = ChordDiagram::parse("1 2 1 2").unwrap();
        let oracle = verma_oracle(&d).unwrap();
        let c = casimir_value();
        // c^2 - 2c at c = (s^2-1)/2
        let expect = c.mul(&c).unwrap().sub(&c.scale(&rat_int(2))).unwrap();
        assert_eq!(oracle, expect);
    }

    #[test]
    fn oracle_equals_recursion_up_to_three_chords() {
        let mut cache = WeightCache::new();
        let cas = casimir_value();
        for m in 0..=3 {
            for word in crate::chord::all_matching_words(m) {
                let d = ChordDiagram::from_word(&word).unwrap();
                let rec = cv_weight(&d, &mut cache).substitute(Var::C, &cas).unwrap();
                let ora = verma_oracle(&d).unwrap();
                assert_eq!(rec, ora, "mismatch on {d}");
            }
        }
    }

    #[test]
    fn size_bound_enforced() {
        let d = ChordDiagram::parse("1 2 3 4 5 1 2 3 4 5").unwrap();
        assert!(matches!(verma_oracle(&d), Err(Error::ResourceBound { .. })));
    }

    #[test]
    fn oracle_value_is_even_in_s() {
        let d = ChordDiagram::parse("1 2 3 1 2 3").unwrap();
        let v = verma_oracle(&d).unwrap();
        assert!(v.is_even_in(Var::S));
        let mut at2 = BTreeMap::new();
        at2.insert(Var::S, rat_int(2));
        let mut atm2 = BTreeMap::new();
        atm2.insert(Var::S, rat_int(-2));
        assert_eq!(v.eval_rat(&at2).unwrap(), v.eval_rat(&atm2).unwrap());
    }
}
