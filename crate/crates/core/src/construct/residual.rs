//! Separating finite sets by members of a homomorphism family, and the
//! quadruple in `F2 x F2` that no map to a free group separates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{reduced_words, FreeHom, FreeWord};

/// Least `m <= budget` whose homomorphism kills none of `elements`.
pub fn separate_set(
    mut family: impl FnMut(u64) -> Result<FreeHom>,
    elements: &[FreeWord],
    budget: u64,
) -> Result<Option<u64>> {
    for m in 0..=budget {
        let h = family(m)?;
        let mut ok = true;
        for e in elements {
            if h.apply(e)?.is_identity() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct F2xF2Report {
    /// No enumerated assignment keeps all four elements nontrivial.
    pub nonseparable: bool,
    /// Assignments `(A, B, C, D)` satisfying the commutation relations.
    pub assignments: u64,
    /// An assignment that separates, if one was found.
    pub separating: Option<[FreeWord; 4]>,
    /// Assignments where the image of `(1, w)` is nontrivial but the images
    /// of `(w, 1)` and `(w', 1)` are nontrivial with different roots.
    pub collapse_violations: u64,
}

/// The four elements `(w,1), (w',1), ([w,w'],1), (1,w)` as words in the
/// generators `a, b, c, d` of `F4`, with `F2 x F2 = <a,b> x <c,d>`.
pub fn f2xf2_elements(w: &FreeWord, wp: &FreeWord) -> Result<Vec<FreeWord>> {
    let left = FreeHom::new(4, vec![FreeWord::generator(4, 1)?, FreeWord::generator(4, 2)?])?;
    let right = FreeHom::new(4, vec![FreeWord::generator(4, 3)?, FreeWord::generator(4, 4)?])?;
    Ok(vec![left.apply(w)?, left.apply(wp)?, left.apply(&FreeWord::commutator(w, wp)?)?, right.apply(w)?])
}

/// Every map `F2 x F2 -> F2` with generator images of length at most
/// `cap`, as homomorphisms from `F4`, in a fixed order.
pub fn f2xf2_homs(cap: usize) -> Result<Vec<FreeHom>> {
    let words = reduced_words(2, cap);
    let mut out = Vec::new();
    for_each_quadruple(&words, |q| {
        out.push(FreeHom::new(2, q.to_vec()).expect("rank 2"));
    })?;
    Ok(out)
}

fn for_each_quadruple(words: &[FreeWord], mut f: impl FnMut(&[FreeWord; 4])) -> Result<()> {
    let n = words.len();
    let mut commute = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            commute[i * n + j] = words[i].commutes(&words[j])?;
        }
    }
    for a in 0..n {
        for b in 0..n {
            let right: Vec<usize> = (0..n).filter(|&c| commute[a * n + c] && commute[b * n + c]).collect();
            for &c in &right {
                for &d in &right {
                    f(&[words[a].clone(), words[b].clone(), words[c].clone(), words[d].clone()]);
                }
            }
        }
    }
    Ok(())
}

fn same_root(u: &FreeWord, v: &FreeWord) -> bool {
    match (u.primitive_root(), v.primitive_root()) {
        (Ok((ru, _)), Ok((rv, _))) => ru == rv || ru == rv.inverse(),
        _ => false,
    }
}

/// Checks every commutation-constrained assignment of generator images of
/// length at most `cap` in `F2`.
pub fn f2xf2_nonseparable(w: &FreeWord, wp: &FreeWord, cap: usize) -> Result<F2xF2Report> {
    for x in [w, wp] {
        if x.rank() != 2 {
            return Err(Error::RankMismatch { left: x.rank(), right: 2 });
        }
    }
    if w.commutes(wp)? {
        return Err(Error::Precondition(format!("{w} and {wp} commute")));
    }
    let comm = FreeWord::commutator(w, wp)?;
    let words = reduced_words(2, cap);
    let mut report = F2xF2Report { nonseparable: true, assignments: 0, separating: None, collapse_violations: 0 };
    let mut err = None;
    for_each_quadruple(&words, |q| {
        if err.is_some() {
            return;
        }
        let left = FreeHom::new(2, vec![q[0].clone(), q[1].clone()]).expect("rank 2");
        let right = FreeHom::new(2, vec![q[2].clone(), q[3].clone()]).expect("rank 2");
        let imgs = [left.apply(w), left.apply(wp), left.apply(&comm), right.apply(w)];
        let imgs: Vec<FreeWord> = match imgs.into_iter().collect() {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        report.assignments += 1;
        if imgs.iter().all(|x| !x.is_identity()) && report.separating.is_none() {
            report.nonseparable = false;
            report.separating = Some(q.clone());
        }
        if !imgs[3].is_identity() && !imgs[0].is_identity() && !imgs[1].is_identity() && !same_root(&imgs[0], &imgs[1])
        {
            report.collapse_violations += 1;
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(report),
    }
}
