//! Dehn's algorithm for the surface relator and enumeration of balls.

use std::collections::BTreeMap;

use super::{SurfacePresentation, SurfaceWord};
use crate::error::{Error, Result};
use crate::words::{push_reduced, reduced_words, FreeWord, Letter};

/// Radius cap for [`SurfacePresentation::ball`] unless raised explicitly.
pub const DEFAULT_BALL_CAP: usize = 4;

fn slot(l: Letter) -> usize {
    2 * (l.generator() as usize - 1) + usize::from(!l.is_positive())
}

pub(super) fn cyclic_table(relator: &FreeWord) -> Vec<Vec<Vec<Letter>>> {
    let mut table = vec![Vec::new(); 2 * relator.rank() as usize];
    for r in [relator.clone(), relator.inverse()] {
        let l = r.letters();
        for s in 0..l.len() {
            let perm: Vec<Letter> = l[s..].iter().chain(&l[..s]).copied().collect();
            table[slot(perm[0])].push(perm);
        }
    }
    table
}

impl SurfacePresentation {
    /// Replaces subwords that are more than half of a cyclic permutation of
    /// the relator (or its inverse) by the inverse of the remaining part,
    /// until none is left. The result is empty iff the element is trivial.
    pub fn dehn_reduce(&self, w: &FreeWord) -> FreeWord {
        let len = self.relator.len();
        let mut cur: Vec<Letter> = w.letters().to_vec();
        'outer: loop {
            for i in 0..cur.len() {
                for perm in &self.table[slot(cur[i])] {
                    let m = cur[i..].iter().zip(perm).take_while(|(a, b)| a == b).count();
                    if 2 * m > len {
                        let mut next = Vec::with_capacity(cur.len());
                        for &l in &cur[..i] {
                            push_reduced(&mut next, l);
                        }
                        for &l in perm[m..].iter().rev() {
                            push_reduced(&mut next, l.inverse());
                        }
                        for &l in &cur[i + m..] {
                            push_reduced(&mut next, l);
                        }
                        cur = next;
                        continue 'outer;
                    }
                }
            }
            break;
        }
        FreeWord::from_letters_unchecked(w.rank(), cur)
    }

    pub fn dehn_is_trivial(&self, w: &FreeWord) -> bool {
        self.dehn_reduce(w).is_identity()
    }

    pub fn equal(&self, u: &FreeWord, v: &FreeWord) -> Result<bool> {
        Ok(self.dehn_is_trivial(&u.concat(&v.inverse())?))
    }

    /// Nontrivial elements with a representative of length at most
    /// `radius`, one per element (the shortlex-least representative), in
    /// shortlex order.
    pub fn ball(&self, radius: usize) -> Result<Vec<SurfaceWord>> {
        self.ball_capped(radius, DEFAULT_BALL_CAP)
    }

    pub fn ball_capped(&self, radius: usize, cap: usize) -> Result<Vec<SurfaceWord>> {
        if radius > cap {
            return Err(Error::CapExceeded { what: "surface ball radius", value: radius as u64, cap: cap as u64 });
        }
        // Equal elements have equal abelianization; compare within buckets.
        let mut buckets: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        let mut out: Vec<SurfaceWord> = Vec::new();
        for w in reduced_words(self.rank(), radius) {
            let canonical = self.dehn_reduce(&w);
            if canonical.is_identity() {
                continue;
            }
            let bucket = buckets.entry(w.exponent_sums()).or_default();
            let inv = w.inverse();
            if bucket.iter().any(|&k| self.dehn_is_trivial(&(&out[k].letters * &inv))) {
                continue;
            }
            bucket.push(out.len());
            out.push(SurfaceWord { letters: w, canonical });
        }
        Ok(out)
    }
}
