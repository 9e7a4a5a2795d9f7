//! Chord diagrams on an oriented circle, canonical forms, and 4T generators.
//!
//! A diagram with m chords is a word of 2m labels in which every label occurs
//! exactly twice; the circle is oriented, so the canonical form minimises over
//! rotations only (no reflection), relabelling by first occurrence.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::rat::{rat_string, Rat};

pub mod verma;
pub mod weight;

pub use verma::{verma_oracle, verma_oracle_bounded};
pub use weight::{cv_weight, weight_character, WeightCache};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChordDiagram {
    /// canonical word: labels 1..=m, each twice, lexicographically least rotation
    word: Vec<u8>,
}

impl ChordDiagram {
    pub fn empty() -> ChordDiagram {
        ChordDiagram { word: Vec::new() }
    }

    /// Canonicalise an arbitrary valid word.
    pub fn from_word(word: &[u8]) -> Result<ChordDiagram> {
        validate_word(word)?;
        Ok(ChordDiagram { word: canonical_form(word) })
    }

    /// Parse a whitespace-separated label word like "1 2 1 2".
    pub fn parse(text: &str) -> Result<ChordDiagram> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.is_empty() {
            return Ok(ChordDiagram::empty());
        }
        // accept arbitrary tokens; map to small ints by first occurrence
        let mut seen: BTreeMap<&str, u8> = BTreeMap::new();
        let mut word = Vec::with_capacity(toks.len());
        for t in &toks {
            let next = seen.len() as u8 + 1;
            let id = *seen.entry(t).or_insert(next);
            word.push(id);
        }
        ChordDiagram::from_word(&word)
    }

    pub fn chord_count(&self) -> usize {
        self.word.len() / 2
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn to_text(&self) -> String {
        self.word.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
    }

    /// Positions (i, j) with i < j of each chord, indexed by label-1.
    pub fn chord_positions(&self) -> Vec<(usize, usize)> {
        let m = self.chord_count();
        let mut first = vec![usize::MAX; m];
        let mut out = vec![(0usize, 0usize); m];
        for (pos, &lab) in self.word.iter().enumerate() {
            let idx = (lab - 1) as usize;
            if first[idx] == usize::MAX {
                first[idx] = pos;
            } else {
                out[idx] = (first[idx], pos);
            }
        }
        out
    }

    /// Number of chords crossing each chord.
    pub fn crossing_counts(&self) -> Vec<usize> {
        let pos = self.chord_positions();
        let m = pos.len();
        let mut counts = vec![0usize; m];
        for i in 0..m {
            for j in (i + 1)..m {
                if chords_cross(pos[i], pos[j]) {
                    counts[i] += 1;
                    counts[j] += 1;
                }
            }
        }
        counts
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

pub(crate) fn chords_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| a.0 < x && x < a.1;
    inside(b.0) != inside(b.1)
}

fn validate_word(word: &[u8]) -> Result<()> {
    let mut counts: BTreeMap<u8, usize> = BTreeMap::new();
    for &t in word {
        *counts.entry(t).or_insert(0) += 1;
    }
    for (t, c) in &counts {
        if *c != 2 {
            return Err(Error::MalformedDiagram(format!("token {t} occurs {c} times")));
        }
    }
    Ok(())
}

/// Relabel a word by order of first occurrence.
fn relabel(word: &[u8]) -> Vec<u8> {
    let mut map: BTreeMap<u8, u8> = BTreeMap::new();
    let mut out = Vec::with_capacity(word.len());
    for &t in word {
        let next = map.len() as u8 + 1;
        let id = *map.entry(t).or_insert(next);
        out.push(id);
    }
    out
}

/// Lexicographically least relabelled rotation.
fn canonical_form(word: &[u8]) -> Vec<u8> {
    if word.is_empty() {
        return Vec::new();
    }
    let n = word.len();
    let mut best: Option<Vec<u8>> = None;
    for r in 0..n {
        let rotated: Vec<u8> = (0..n).map(|i| word[(i + r) % n]).collect();
        let cand = relabel(&rotated);
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    }
    best.unwrap()
}

/// Formal rational linear combination of same-grade chord diagrams.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagramSum {
    terms: BTreeMap<ChordDiagram, Rat>,
}

impl DiagramSum {
    pub fn new() -> DiagramSum {
        DiagramSum::default()
    }

    pub fn add_term(&mut self, d: ChordDiagram, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        if let Some(existing) = self.terms.keys().next() {
            assert_eq!(
                existing.chord_count(),
                d.chord_count(),
                "DiagramSum is graded: mixed chord counts"
            );
        }
        let entry = self.terms.entry(d);
        use std::collections::btree_map::Entry;
        match entry {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChordDiagram, &Rat)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (d, c) in &self.terms {
            map.insert(d.to_text(), json!(rat_string(c)));
        }
        Value::Object(map)
    }
}

/// Insert new tokens into a base word. `slot` is a gap index 0..=len (insert
/// before that base position; len = append); coincident slots keep list order.
fn insert_tokens(base: &[u8], inserts: &[(usize, u8)]) -> Vec<u8> {
    let mut out = Vec::with_capacity(base.len() + inserts.len());
    for slot in 0..=base.len() {
        for &(s, tok) in inserts {
            if s == slot {
                out.push(tok);
            }
        }
        if slot < base.len() {
            out.push(base[slot]);
        }
    }
    out
}

/// Build a 4T generator: start from `base` (m-2 chords), anchor one endpoint
/// of a new chord `a` at gap `ga` and the two endpoints of a new chord `b` at
/// gaps `gb1`, `gb2`; the four diagrams place the moving endpoint of `a`
/// immediately after/before each endpoint of `b`. The invariant-tensor
/// identity gives the signs: (after - before) summed over b's two endpoints.
///
/// Gaps index the base word's insertion slots 0..=2(m-2); they must be
/// pairwise distinct when the base is nonempty.
pub fn four_t_generate(base: &ChordDiagram, ga: usize, gb1: usize, gb2: usize) -> Result<DiagramSum> {
    let l = base.word().len();
    for &g in &[ga, gb1, gb2] {
        if g > l {
            return Err(Error::InvalidPositions(format!("gap {g} out of range 0..={l}")));
        }
    }
    if l > 0 && (ga == gb1 || ga == gb2 || gb1 == gb2) {
        return Err(Error::InvalidPositions("coincident gaps".into()));
    }
    let lab_a = (base.chord_count() + 1) as u8;
    let lab_b = lab_a + 1;
    // fixed arrangement of anchor + b's endpoints
    let arranged =
        insert_tokens(base.word(), &[(ga, lab_a), (gb1, lab_b), (gb2, lab_b)]);
    let b_positions: Vec<usize> =
        arranged.iter().enumerate().filter(|(_, &t)| t == lab_b).map(|(i, _)| i).collect();
    let mut sum = DiagramSum::new();
    for &bpos in &b_positions {
        for (off, sign) in [(0usize, -1i64), (1usize, 1i64)] {
            let mut w = arranged.clone();
            w.insert(bpos + off, lab_a);
            let d = ChordDiagram::from_word(&w)?;
            sum.add_term(d, Rat::from_integer(sign.into()));
        }
    }
    Ok(sum)
}

/// All perfect-matching words on 2m points (not canonicalised; used by the
/// exhaustive 4T sweep and oracle tests).
pub fn all_matching_words(m: usize) -> Vec<Vec<u8>> {
    fn rec(slots: &mut Vec<u8>, next_label: u8, out: &mut Vec<Vec<u8>>) {
        let first = match slots.iter().position(|&t| t == 0) {
            None => {
                out.push(slots.clone());
                return;
            }
            Some(i) => i,
        };
        slots[first] = next_label;
        let free: Vec<usize> =
            (first + 1..slots.len()).filter(|&j| slots[j] == 0).collect();
        for j in free {
            slots[j] = next_label;
            rec(slots, next_label + 1, out);
            slots[j] = 0;
        }
        slots[first] = 0;
    }
    let mut out = Vec::new();
    let mut slots = vec![0u8; 2 * m];
    rec(&mut slots, 1, &mut out);
    out
}
