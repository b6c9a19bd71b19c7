use std::collections::BTreeMap;

use super::{push_reduced, FreeWord};
use crate::error::{Error, Result};

/// A homomorphism between free groups given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeHom {
    source_rank: u32,
    target_rank: u32,
    images: Vec<FreeWord>,
}

impl FreeHom {
    /// `images[i]` is the image of generator `i + 1`.
    pub fn new(target_rank: u32, images: Vec<FreeWord>) -> Result<Self> {
        if let Some(bad) = images.iter().find(|w| w.rank() != target_rank) {
            return Err(Error::RankMismatch { left: bad.rank(), right: target_rank });
        }
        Ok(FreeHom { source_rank: images.len() as u32, target_rank, images })
    }

    pub fn identity(rank: u32) -> Self {
        let images = (1..=rank as i64).map(|i| FreeWord::generator(rank, i).expect("in range")).collect();
        FreeHom { source_rank: rank, target_rank: rank, images }
    }

    pub fn source_rank(&self) -> u32 {
        self.source_rank
    }

    pub fn target_rank(&self) -> u32 {
        self.target_rank
    }

    pub fn image(&self, generator: u32) -> &FreeWord {
        &self.images[generator as usize - 1]
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn apply(&self, w: &FreeWord) -> Result<FreeWord> {
        if w.rank() != self.source_rank {
            return Err(Error::RankMismatch { left: w.rank(), right: self.source_rank });
        }
        let mut buf = Vec::new();
        self.apply_into(w, &mut buf);
        Ok(FreeWord { rank: self.target_rank, letters: buf })
    }

    /// Writes the reduced image of `w` into `buf` (cleared first).
    pub(crate) fn apply_into(&self, w: &FreeWord, buf: &mut Vec<super::Letter>) {
        buf.clear();
        for l in w.letters() {
            let img = &self.images[l.generator() as usize - 1];
            if l.is_positive() {
                for &m in img.letters() {
                    push_reduced(buf, m);
                }
            } else {
                for &m in img.letters().iter().rev() {
                    push_reduced(buf, m.inverse());
                }
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FreeHom) -> Result<FreeHom> {
        let images = inner.images.iter().map(|w| self.apply(w)).collect::<Result<_>>()?;
        FreeHom::new(self.target_rank, images)
    }
}

/// Applies the homomorphism given by a generator-index map to `w`.
pub fn apply_hom(images: &BTreeMap<u32, FreeWord>, target_rank: u32, w: &FreeWord) -> Result<FreeWord> {
    let list =
        (1..=w.rank()).map(|i| images.get(&i).cloned().ok_or(Error::MissingImage(i))).collect::<Result<Vec<_>>>()?;
    FreeHom::new(target_rank, list)?.apply(w)
}
