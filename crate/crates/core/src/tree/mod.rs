//! The Cayley tree of a free group with respect to its free basis, its ends,
//! axes of elements, and cylinder sets.
//!
//! Vertices are reduced words. A nontrivial element `w = u c u^-1` with `c`
//! cyclically reduced translates along the bi-infinite geodesic through the
//! vertices `u * c^j * (prefixes of c)`. Since `u c u^-1` is reduced as
//! written, every vertex of the axis is literally `u` followed by a subword
//! of `...c c c...`, which makes membership a prefix test.

mod cylinder;
mod ray;

pub use cylinder::{cylinder_image, Cylinder};
pub use ray::{endpoints, translate_ray, BoundaryRay};

use serde::Serialize;

use crate::error::Result;
use crate::words::{FreeWord, Letter};

/// Symbolic description of an axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisDesc {
    pub conjugator: FreeWord,
    pub core: FreeWord,
}

impl AxisDesc {
    pub fn translation_length(&self) -> usize {
        self.core.len()
    }

    /// Letter on the edge from position `i` to `i + 1`, read in the direction
    /// of translation.
    fn edge_label(&self, i: i64) -> Letter {
        let c = self.core.letters();
        c[i.rem_euclid(c.len() as i64) as usize]
    }

    /// Writes the vertex at signed position `pos` into `buf`. Position 0 is
    /// the conjugator, the projection of the identity onto the axis.
    pub fn vertex_into(&self, pos: i64, buf: &mut Vec<Letter>) {
        buf.clear();
        buf.extend_from_slice(self.conjugator.letters());
        if pos >= 0 {
            buf.extend((0..pos).map(|i| self.edge_label(i)));
        } else {
            buf.extend((0..-pos).map(|i| self.edge_label(-1 - i).inverse()));
        }
    }

    pub fn vertex(&self, pos: i64) -> FreeWord {
        let mut buf = Vec::new();
        self.vertex_into(pos, &mut buf);
        FreeWord::from_letters_unchecked(self.core.rank(), buf)
    }

    /// Signed position of `v` on the axis, if it lies on it.
    pub fn position_of(&self, v: &[Letter]) -> Option<i64> {
        let u = self.conjugator.letters();
        let rest = v.strip_prefix(u)?;
        if rest.is_empty() {
            return Some(0);
        }
        let n = rest.len() as i64;
        if rest.iter().enumerate().all(|(i, &l)| l == self.edge_label(i as i64)) {
            return Some(n);
        }
        if rest.iter().enumerate().all(|(i, &l)| l == self.edge_label(-1 - i as i64).inverse()) {
            return Some(-n);
        }
        None
    }
}

pub fn axis_of(w: &FreeWord) -> Result<AxisDesc> {
    let d = w.cyclic_decompose()?;
    Ok(AxisDesc { conjugator: d.conjugator, core: d.core })
}

/// Size of the intersection of two axes, counted in edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Overlap {
    Finite(u64),
    Infinite,
}

/// Common part of `axis(a)` and `axis(b)`.
///
/// Vertices of `axis(b)` are enumerated outward from the projection of the
/// identity, in windows that grow by the larger translation length per step,
/// and tested for membership on `axis(a)` within the same window. The common
/// part of two geodesics in a tree is connected and its point nearest the
/// identity is within `max(|u_a|, |u_b|)` of both projections, so once a step
/// adds no common vertex nothing further can appear; the scan stops after two
/// such steps. A common path of at least `|c_a| + |c_b|` edges carries both
/// periods, hence a common period, and then the two periodic extensions (the
/// axes) coincide; this is reported as `Infinite`.
pub fn axis_overlap(a: &FreeWord, b: &FreeWord) -> Result<Overlap> {
    let (ax, bx) = (axis_of(a)?, axis_of(b)?);
    a.concat(b)?;
    let step = ax.translation_length().max(bx.translation_length()) as i64;
    let threshold = (ax.translation_length() + bx.translation_length()) as u64;
    let mut radius = ax.conjugator.len().max(bx.conjugator.len()) as i64 + step;
    let mut buf = Vec::new();
    let mut history = [u64::MAX, u64::MAX];
    loop {
        let mut common = 0u64;
        for j in -radius..=radius {
            bx.vertex_into(j, &mut buf);
            if matches!(ax.position_of(&buf), Some(i) if i.abs() <= radius) {
                common += 1;
            }
        }
        let edges = common.saturating_sub(1);
        if edges >= threshold {
            return Ok(Overlap::Infinite);
        }
        if history[0] == common && history[1] == common {
            return Ok(Overlap::Finite(edges));
        }
        history = [history[1], common];
        radius += step;
    }
}
