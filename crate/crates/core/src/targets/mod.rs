//! Concrete matrix targets: `SL2(Z/p^k)` and `SL2(Z)` with exact integers,
//! homomorphisms into them checked against source relators, the twisted
//! families built from commuting elements, and finite density proxies.

mod int;
mod modpk;

pub use int::{find_relation, free_pair_check, IntSl2, Mat2Int};
pub use modpk::{
    sl2_modpk_ops, Mat2ModPk, Sl2ModPk, BRUTE_FORCE_COMMUTANT_LIMIT, DEFAULT_ENUMERATION_CAP, DEFAULT_MODULUS_CAP,
};

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use crate::construct::{DoubleKind, DoubleSpec, Presentation};
use crate::error::{Error, Result};
use crate::surface::SurfacePresentation;
use crate::words::{FreeHom, FreeWord};

/// Longest cyclic orbit [`cyclic_closure`] will walk before giving up.
pub const MAX_CYCLIC_ORDER: u64 = 10_000_000;

/// A group given by its operations on concrete element values.
pub trait TargetGroup {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Group order, when finite and known.
    fn order(&self) -> Option<u64>;

    /// Every element in a fixed order, when the group is finite and small
    /// enough to list.
    fn elements(&self) -> Result<Vec<Self::Elem>>;

    fn pow(&self, a: &Self::Elem, e: i64) -> Self::Elem {
        let mut base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates `w` with generator `i` sent to `images[i - 1]`.
    fn eval(&self, images: &[Self::Elem], w: &FreeWord) -> Result<Self::Elem> {
        if images.len() != w.rank() as usize {
            return Err(Error::RankMismatch { left: w.rank(), right: images.len() as u32 });
        }
        let inverses: Vec<Self::Elem> = images.iter().map(|g| self.inv(g)).collect();
        let mut acc = self.identity();
        for i in w.indices() {
            let k = i.unsigned_abs() as usize - 1;
            acc = self.mul(&acc, if i > 0 { &images[k] } else { &inverses[k] });
        }
        Ok(acc)
    }

    fn commute(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Elements commuting with every member of `list`, sorted. The default
    /// filters the full enumeration.
    fn commutant(&self, list: &[Self::Elem]) -> Result<Vec<Self::Elem>> {
        let mut out: Vec<Self::Elem> =
            self.elements()?.into_iter().filter(|x| list.iter().all(|g| self.commute(x, g))).collect();
        out.sort();
        Ok(out)
    }
}

/// Elements commuting with all of `list`, audited to be closed under
/// products and inverses.
pub fn commutant<G: TargetGroup>(group: &G, list: &[G::Elem]) -> Result<Vec<G::Elem>> {
    let out = group.commutant(list)?;
    audit_subgroup(group, &out)?;
    Ok(out)
}

/// Checks that a sorted list holds the identity, inverses, and products of
/// pairs. Large lists are checked on a fixed stride of pairs.
pub fn audit_subgroup<G: TargetGroup>(group: &G, sorted: &[G::Elem]) -> Result<()> {
    let has = |x: &G::Elem| sorted.binary_search(x).is_ok();
    if !has(&group.identity()) {
        return Err(Error::Invariant("subgroup audit: identity missing".into()));
    }
    let n = sorted.len();
    let stride = (n * n / 100_000).max(1);
    let mut idx = 0usize;
    while idx < n * n {
        let (a, b) = (&sorted[idx / n], &sorted[idx % n]);
        if !has(&group.mul(a, b)) || !has(&group.inv(a)) {
            return Err(Error::Invariant(format!("subgroup audit failed at {a:?}, {b:?}")));
        }
        idx += stride;
    }
    Ok(())
}

/// All powers `c^0, c^1, ..., c^(ord-1)` of an element of finite order.
pub fn cyclic_closure<G: TargetGroup>(group: &G, c: &G::Elem) -> Result<Vec<G::Elem>> {
    let id = group.identity();
    let mut out = vec![id.clone()];
    let mut x = c.clone();
    while x != id {
        if out.len() as u64 >= MAX_CYCLIC_ORDER {
            return Err(Error::CapExceeded { what: "cyclic order", value: out.len() as u64, cap: MAX_CYCLIC_ORDER });
        }
        out.push(x.clone());
        x = group.mul(&x, c);
    }
    Ok(out)
}

/// Whether `{c^n : n >= start}` already exhausts the cyclic closure of `c`.
pub fn tail_covers_closure<G: TargetGroup>(group: &G, c: &G::Elem, start: u64) -> Result<bool> {
    let closure = cyclic_closure(group, c)?;
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut x = group.pow(c, start as i64);
    for _ in 0..closure.len() {
        seen.insert(x.clone());
        x = group.mul(&x, c);
    }
    Ok(seen.len() == closure.len() && closure.iter().all(|y| seen.contains(y)))
}

/// The subgroup generated by `gens`, by breadth-first closure under right
/// multiplication, sorted. Fails once more than `cap` elements appear.
pub fn generated_subgroup<G: TargetGroup>(group: &G, gens: &[G::Elem], cap: u64) -> Result<Vec<G::Elem>> {
    let mut steps: Vec<G::Elem> = gens.to_vec();
    steps.extend(gens.iter().map(|g| group.inv(g)));
    let id = group.identity();
    let mut seen: HashSet<G::Elem> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y = group.mul(x, s);
                if seen.insert(y.clone()) {
                    if seen.len() as u64 > cap {
                        return Err(Error::CapExceeded { what: "subgroup size", value: seen.len() as u64, cap });
                    }
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<G::Elem> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Whether `gens` generate the whole (finite) group.
pub fn surjectivity<G: TargetGroup>(group: &G, gens: &[G::Elem]) -> Result<bool> {
    let order = group.order().ok_or_else(|| Error::Precondition("group order unknown".into()))?;
    Ok(generated_subgroup(group, gens, order)?.len() as u64 == order)
}

/// A homomorphism from a finitely presented group, given by generator
/// images that kill every relator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomInstance<E> {
    presentation: Presentation,
    images: Vec<E>,
}

impl<E: Clone + Eq + Ord + Hash + Debug> HomInstance<E> {
    pub fn new<G: TargetGroup<Elem = E>>(group: &G, presentation: Presentation, images: Vec<E>) -> Result<Self> {
        if images.len() != presentation.names.len() {
            return Err(Error::RankMismatch { left: images.len() as u32, right: presentation.names.len() as u32 });
        }
        let id = group.identity();
        for r in &presentation.relators {
            let v = group.eval(&images, r)?;
            if v != id {
                return Err(Error::Hypothesis(format!("relator {r} maps to {v:?}")));
            }
        }
        Ok(HomInstance { presentation, images })
    }

    /// Composes a map onto a free group with an assignment of its
    /// generators.
    pub fn through_free<G: TargetGroup<Elem = E>>(
        group: &G,
        presentation: Presentation,
        free: &FreeHom,
        target_images: &[E],
    ) -> Result<Self> {
        let images = free.images().iter().map(|w| group.eval(target_images, w)).collect::<Result<Vec<_>>>()?;
        Self::new(group, presentation, images)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn images(&self) -> &[E] {
        &self.images
    }

    pub fn apply<G: TargetGroup<Elem = E>>(&self, group: &G, w: &FreeWord) -> Result<E> {
        group.eval(&self.images, w)
    }
}

fn as_invariant(e: Error) -> Error {
    match e {
        Error::Hypothesis(m) => Error::Invariant(m),
        e => e,
    }
}

/// The homomorphism of a double that agrees with `phi` on the first vertex
/// group and is twisted by `k` elsewhere: the second vertex group goes to
/// `k phi(g) k^-1`, the stable letter to `phi(t) k`. `k` must commute with
/// the image of the edge word.
pub fn h_k_family<G: TargetGroup>(
    group: &G,
    spec: &DoubleSpec,
    phi: &HomInstance<G::Elem>,
    k: &G::Elem,
) -> Result<HomInstance<G::Elem>> {
    let c = phi.apply(group, &spec.embed_vertex(0, spec.edge())?)?;
    if !group.commute(k, &c) {
        return Err(Error::Hypothesis(format!("{k:?} does not commute with the image of the edge word")));
    }
    let n1 = spec.vertex_ranks()[0] as usize;
    let ki = group.inv(k);
    let images = phi
        .images()
        .iter()
        .enumerate()
        .map(|(i, g)| match (i < n1, spec.kind()) {
            (true, _) => g.clone(),
            (false, DoubleKind::Amalgam) => group.mul(&group.mul(k, g), &ki),
            (false, DoubleKind::Hnn) => group.mul(g, k),
        })
        .collect();
    HomInstance::new(group, spec.presentation(), images).map_err(as_invariant)
}

/// The surface presentation as a [`Presentation`].
pub fn surface_presentation(pres: &SurfacePresentation) -> Presentation {
    let alphabet = pres.alphabet();
    Presentation {
        names: (1..=pres.rank()).map(|g| alphabet.name(g)).collect(),
        relators: vec![pres.relator().clone()],
    }
}

/// The representation of the surface group attached to `(g, h)` and images
/// of the fold target generators `x1, x1', ..., y'`: `a_i -> x_i`,
/// `b -> g h^-1`, `b' -> y'`, `c_i -> g x_i g^-1`. Requires `g` to commute
/// with the image of `y` and `h` with the image of `y'`.
pub fn rho_gh<G: TargetGroup>(
    group: &G,
    pres: &SurfacePresentation,
    target_images: &[G::Elem],
    g: &G::Elem,
    h: &G::Elem,
) -> Result<HomInstance<G::Elem>> {
    let t = pres.target_rank() as usize;
    if target_images.len() != t {
        return Err(Error::RankMismatch { left: target_images.len() as u32, right: t as u32 });
    }
    let y = group.eval(target_images, pres.y())?;
    let yp = &target_images[t - 1];
    if !group.commute(g, &y) || !group.commute(h, yp) {
        return Err(Error::Hypothesis("(g, h) does not centralize (y, y')".into()));
    }
    let gi = group.inv(g);
    let lower_offset = pres.b_prime();
    let images = (1..=pres.rank())
        .map(|s| {
            if s == pres.b() {
                group.mul(g, &group.inv(h))
            } else if s == pres.b_prime() {
                yp.clone()
            } else if pres.is_lower(s) {
                group.mul(&group.mul(g, &target_images[(s - lower_offset) as usize - 1]), &gi)
            } else {
                target_images[s as usize - 1].clone()
            }
        })
        .collect();
    HomInstance::new(group, surface_presentation(pres), images).map_err(as_invariant)
}

/// The members of `elements` sent to the identity, in input order.
pub fn injectivity_on_ball<G: TargetGroup>(
    group: &G,
    hom: &HomInstance<G::Elem>,
    elements: &[FreeWord],
) -> Result<Vec<FreeWord>> {
    let id = group.identity();
    let mut killed = Vec::new();
    for e in elements {
        if hom.apply(group, e)? == id {
            killed.push(e.clone());
        }
    }
    Ok(killed)
}

/// The trivial group, as a target that kills everything.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialGroup;

impl TargetGroup for TrivialGroup {
    type Elem = ();

    fn identity(&self) {}
    fn mul(&self, _: &(), _: &()) {}
    fn inv(&self, _: &()) {}

    fn order(&self) -> Option<u64> {
        Some(1)
    }

    fn elements(&self) -> Result<Vec<()>> {
        Ok(vec![()])
    }
}
