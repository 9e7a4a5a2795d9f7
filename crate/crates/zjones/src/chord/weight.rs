//! The sl2 weight system on chord diagrams, through its central character.
//!
//! `cv_weight` evaluates the recursion
//!
//!   W(w) = c·W(w\a) - 2·x(a,w)·W(w\a)
//!          + 2·sum over unordered pairs {b,c} of chords crossing a of
//!            [ W(w_same(a,b,c)) - W(w_cross(a,b,c)) ]
//!
//! where `a` is any chord and x(a,w) counts the chords crossing it. Chords b
//! and c each have one endpoint in either arc cut out by a; writing e_b, e_c
//! for the endpoints in one arc and f_b, f_c for the others, the positive
//! reconnection `w_same` joins e_b-e_c and f_b-f_c (endpoints in the same
//! arc), the negative `w_cross` joins e_b-f_c and e_c-f_b. The output is a
//! polynomial in `c`, the value on the one-chord diagram.
//!
//! Two conventions here are not readable off the recursion's usual statement
//! and are pinned empirically by exact agreement with the independent
//! highest-weight-module oracle in `verma`, exhaustively through 4 chords:
//! the pair sum runs over unordered pairs with the factor 2 as written, and
//! the same-arc reconnection is the one carrying the plus sign.
//!
//! `weight_character` rescales by 1/4 per chord and substitutes
//! c -> (s^2-1)/2, the normalisation under which the one-chord diagram takes
//! the value z(z+1)/2 with s = 2z+1, matching the framing factor of the
//! cyclotomic expansion.

use std::collections::HashMap;

use crate::chord::{chords_cross, ChordDiagram};
use crate::exact::mpoly::{MPoly, Var, VarSet};
use crate::exact::rat::{rat, rat_int};

/// Memo table over canonical diagrams. Confine one instance to one worker, or
/// share results by value; entries are immutable once inserted.
#[derive(Debug, Default)]
pub struct WeightCache {
    map: HashMap<ChordDiagram, MPoly>,
}

impl WeightCache {
    pub fn new() -> WeightCache {
        WeightCache::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Value of the weight system as a polynomial in the Casimir variable `c`.
pub fn cv_weight(d: &ChordDiagram, cache: &mut WeightCache) -> MPoly {
    cv_weight_with_pivot(d, cache, None)
}

/// Same, but forcing the pivot chord (by label index) at the top level; used
/// by the pivot-independence tests.
pub fn cv_weight_with_pivot(
    d: &ChordDiagram,
    cache: &mut WeightCache,
    pivot: Option<usize>,
) -> MPoly {
    if d.chord_count() == 0 {
        return MPoly::one(VarSet::C);
    }
    if pivot.is_none() {
        if let Some(v) = cache.map.get(d) {
            return v.clone();
        }
    }
    let counts = d.crossing_counts();
    // minimal crossing count shrinks the pair sum
    let a = pivot.unwrap_or_else(|| {
        counts
            .iter()
            .enumerate()
            .min_by_key(|(_, &c)| c)
            .map(|(i, _)| i)
            .expect("nonempty diagram")
    });
    let positions = d.chord_positions();
    let crossing: Vec<usize> =
        (0..positions.len()).filter(|&j| j != a && chords_cross(positions[a], positions[j])).collect();
    let x = crossing.len() as i64;

    let removed = remove_chords(d, &[a]);
    let base = cv_weight(&removed, cache);
    // (c - 2x) * W(w\a)
    let c_poly = MPoly::var(VarSet::C, Var::C);
    let mut acc = base.mul(&c_poly).expect("ring").sub(&base.scale(&rat_int(2 * x))).expect("ring");

    for (bi, &b) in crossing.iter().enumerate() {
        for &cc in crossing.iter().skip(bi + 1) {
            let same_arc = reconnect(d, a, b, cc, false);
            let cross_arc = reconnect(d, a, b, cc, true);
            let ws = cv_weight(&same_arc, cache);
            let wc = cv_weight(&cross_arc, cache);
            acc = acc.add(&ws.sub(&wc).expect("ring").scale(&rat_int(2))).expect("ring");
        }
    }
    if pivot.is_none() {
        cache.map.insert(d.clone(), acc.clone());
    }
    acc
}

/// Character normalisation: (1/4)^m · cv_weight with c -> (s^2-1)/2.
pub fn weight_character(d: &ChordDiagram, cache: &mut WeightCache) -> MPoly {
    let m = d.chord_count();
    let w = cv_weight(d, cache);
    let s = MPoly::var(VarSet::S, Var::S);
    let casimir = s
        .mul(&s)
        .expect("ring")
        .sub(&MPoly::constant(VarSet::S, rat_int(1)))
        .expect("ring")
        .scale(&rat(1, 2));
    let subst = w.substitute(Var::C, &casimir).expect("only c present");
    let kappa = num::pow::pow(rat(1, 4), m);
    subst.scale(&kappa)
}

/// Remove the chords with the given label indices, keeping circular order.
fn remove_chords(d: &ChordDiagram, labels: &[usize]) -> ChordDiagram {
    let drop: Vec<u8> = labels.iter().map(|&i| (i + 1) as u8).collect();
    let kept: Vec<u8> = d.word().iter().copied().filter(|t| !drop.contains(t)).collect();
    ChordDiagram::from_word(&kept).expect("removal keeps multiplicity")
}

/// Remove chords a, b, c and add the cross (e_b-f_c, e_c-f_b) or parallel
/// (e_b-e_c, f_b-f_c) reconnection, where e/f are the endpoints of b and c in
/// the two arcs cut out by a.
fn reconnect(d: &ChordDiagram, a: usize, b: usize, c: usize, cross: bool) -> ChordDiagram {
    let positions = d.chord_positions();
    let (a1, a2) = positions[a];
    let in_arc1 = |p: usize| a1 < p && p < a2;
    let (eb, fb) = split_endpoints(positions[b], &in_arc1);
    let (ec, fc) = split_endpoints(positions[c], &in_arc1);
    // pairing over original positions
    let n = d.word().len();
    let mut partner = vec![usize::MAX; n];
    for (i, &(p, q)) in positions.iter().enumerate() {
        if i == a || i == b || i == c {
            continue;
        }
        partner[p] = q;
        partner[q] = p;
    }
    let (pair1, pair2) = if cross { ((eb, fc), (ec, fb)) } else { ((eb, ec), (fb, fc)) };
    partner[pair1.0] = pair1.1;
    partner[pair1.1] = pair1.0;
    partner[pair2.0] = pair2.1;
    partner[pair2.1] = pair2.0;
    // rebuild a word over the surviving positions
    let survivors: Vec<usize> =
        (0..n).filter(|&p| p != a1 && p != a2 && partner[p] != usize::MAX).collect();
    let mut index_of = vec![usize::MAX; n];
    for (i, &p) in survivors.iter().enumerate() {
        index_of[p] = i;
    }
    let mut word = vec![0u8; survivors.len()];
    let mut next = 1u8;
    for (i, &p) in survivors.iter().enumerate() {
        if word[i] != 0 {
            continue;
        }
        word[i] = next;
        word[index_of[partner[p]]] = next;
        next += 1;
    }
    ChordDiagram::from_word(&word).expect("reconnection is a matching")
}

fn split_endpoints(pos: (usize, usize), in_arc1: &impl Fn(usize) -> bool) -> (usize, usize) {
    if in_arc1(pos.0) {
        (pos.0, pos.1)
    } else {
        (pos.1, pos.0)
    }
}
