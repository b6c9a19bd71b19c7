//! Named groups with a stored lower bound for the largest rank of a free
//! group that ends a construction sequence by generalized doubles, and the
//! one-step sequence witnessing it.

use serde::{Serialize, Serializer};

use super::{double_of_free, hnn_of_free, DoubleKind, DoubleSpec, DoubleSpecData};
use crate::error::{Error, Result};
use crate::surface::make_presentation;
use crate::words::{Alphabet, FreeHom, FreeWord};

/// Generators by name and relators over them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub names: Vec<String>,
    pub relators: Vec<FreeWord>,
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            generators: &'a [String],
            relators: Vec<String>,
        }
        let alphabet = Alphabet::named(self.names.clone());
        View { generators: &self.names, relators: self.relators.iter().map(|r| r.to_text_with(&alphabet)).collect() }
            .serialize(s)
    }
}

fn same_cyclic_word(u: &FreeWord, v: &FreeWord) -> bool {
    if u.len() != v.len() {
        return false;
    }
    if u.is_identity() {
        return true;
    }
    let doubled: Vec<i32> = u.indices().chain(u.indices()).collect();
    let contains = |w: &FreeWord| {
        let w: Vec<i32> = w.indices().collect();
        doubled.windows(w.len()).any(|win| win == w.as_slice())
    };
    contains(v) || contains(&v.inverse())
}

impl Presentation {
    pub fn free(n: u32) -> Self {
        Presentation { names: (1..=n).map(|i| format!("x{i}")).collect(), relators: Vec::new() }
    }

    /// Same generator names in the same order, and relators that agree up
    /// to cyclic permutation and inversion.
    pub fn equivalent(&self, other: &Presentation) -> bool {
        self.names == other.names
            && self.relators.len() == other.relators.len()
            && self.relators.iter().all(|r| other.relators.iter().any(|s| same_cyclic_word(r, s)))
            && other.relators.iter().all(|s| self.relators.iter().any(|r| same_cyclic_word(r, s)))
    }
}

impl DoubleSpec {
    pub fn presentation(&self) -> Presentation {
        Presentation { names: self.names.clone(), relators: vec![self.relator()] }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub presentation: Presentation,
    pub d_lower_bound: u32,
    /// Construction sequence ending in the free group of rank
    /// `d_lower_bound`: empty for a free group, otherwise one double.
    pub witness: Vec<DoubleSpec>,
    pub note: String,
}

impl Serialize for CatalogEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            name: &'a str,
            presentation: &'a Presentation,
            d_lower_bound: u32,
            witness: Vec<DoubleSpecData>,
            note: &'a str,
        }
        View {
            name: &self.name,
            presentation: &self.presentation,
            d_lower_bound: self.d_lower_bound,
            witness: self.witness.iter().map(DoubleSpec::to_data).collect(),
            note: &self.note,
        }
        .serialize(s)
    }
}

/// The closed surface of genus `2r + 1` as an HNN extension with stable
/// letter `b'` over the free group on the other generators, edge word `b`
/// and `b' b b'^-1 = [a1,a1'] ... ^-1 (lower block)^-1 b`, folded onto
/// `F_(2r+1)` by the least twisted fold `f_n` injective on the vertex group.
/// Returns the surface presentation in the generator order of the double
/// (vertex generators, then `b'`) and the double.
pub fn sigma_witness(r: u32) -> Result<(Presentation, DoubleSpec)> {
    let p = make_presentation(r)?;
    let (rank, b, bp) = (p.rank(), p.b(), p.b_prime());
    let vrank = rank - 1;
    let to_double = |g: u32| {
        if g == bp {
            rank
        } else if g < bp {
            g
        } else {
            g - 1
        }
    };
    let mut names = vec![String::new(); rank as usize];
    for g in 1..=rank {
        names[to_double(g) as usize - 1] = p.alphabet().name(g);
    }
    let rename = |w: &FreeWord, target: u32| -> Result<FreeWord> {
        FreeWord::reduce(target, w.indices().map(|i| i64::from(i.signum()) * i64::from(to_double(i.unsigned_abs()))))
    };
    let presentation = Presentation { names: names.clone(), relators: vec![rename(p.relator(), rank)?] };

    let bp_word = FreeWord::generator(rank, bp.into())?;
    let b_word = FreeWord::generator(rank, b.into())?;
    let upper = p.alpha() * &bp_word.inverse();
    let lower = &(&FreeWord::commutator(&bp_word, &b_word)?.inverse() * &upper.inverse()) * p.relator();
    let edge = rename(&b_word, vrank)?;
    let mirror = rename(&(&(&upper.inverse() * &lower.inverse()) * &b_word), vrank)?;

    let mut last = None;
    for n in 0..=8 {
        let fn_hom = p.f_n_hom(n);
        let mut images = vec![FreeWord::identity(p.target_rank()); rank as usize];
        for g in 1..=rank {
            images[to_double(g) as usize - 1] = fn_hom.image(g).clone();
        }
        let fold = FreeHom::new(p.target_rank(), images)?;
        match DoubleSpec::new(DoubleKind::Hnn, vec![vrank], edge.clone(), mirror.clone(), fold) {
            Ok(spec) => return Ok((presentation, spec.with_names(names)?)),
            Err(e @ Error::Hypothesis(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Invariant("no twisted fold found".into())))
}

fn free_entry(n: u32) -> CatalogEntry {
    CatalogEntry {
        name: format!("F_{n}"),
        presentation: Presentation::free(n),
        d_lower_bound: n,
        witness: Vec::new(),
        note: "exact: a free group maps onto no free group of larger rank".into(),
    }
}

fn double_entry(name: &str, spec: DoubleSpec) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        presentation: spec.presentation(),
        d_lower_bound: spec.target_rank(),
        witness: vec![spec],
        note: "lower bound from one double; tightness unknown".into(),
    }
}

/// The catalog, in a fixed order.
pub fn catalog() -> Result<Vec<CatalogEntry>> {
    let w = |s: &str, n: u32| FreeWord::parse(s, n);
    let mut out: Vec<CatalogEntry> = (1..=4).map(free_entry).collect();
    for r in 1..=3 {
        let (presentation, spec) = sigma_witness(r)?;
        out.push(CatalogEntry {
            name: format!("Sigma_{}", 2 * r + 1),
            presentation,
            d_lower_bound: 2 * r + 1,
            witness: vec![spec],
            note: "equals the genus for closed surface groups".into(),
        });
    }
    out.push(double_entry("double_F2_comm", double_of_free(2, &w("[x1,x2]", 2)?)?));
    out.push(double_entry("double_F2_x1sq_x2sq", double_of_free(2, &w("x1^2*x2^2", 2)?)?));
    out.push(double_entry("double_F3_comm", double_of_free(3, &w("[x1,x2]*[x1,x3]", 3)?)?));
    out.push(double_entry("hnn_F2_comm", hnn_of_free(2, &w("[x1,x2]", 2)?)?));
    Ok(out)
}

pub fn catalog_d(name: &str) -> Result<u32> {
    catalog()?.into_iter().find(|e| e.name == name).map(|e| e.d_lower_bound).ok_or_else(|| Error::Unknown(name.into()))
}

/// Re-checks an entry: every witness step is a valid double, the first
/// step presents the entry's group, and the sequence ends in the free
/// group of rank `d_lower_bound`.
pub fn replay(entry: &CatalogEntry) -> Result<()> {
    let fail = |msg: &str| Err(Error::Invariant(format!("{}: {msg}", entry.name)));
    match entry.witness.as_slice() {
        [] => {
            if !entry.presentation.relators.is_empty() || entry.presentation.names.len() != entry.d_lower_bound as usize
            {
                return fail("an empty witness needs a free presentation of rank d");
            }
        }
        [spec] => {
            // Rebuilding re-runs every structural check on the step.
            DoubleSpec::new(
                spec.kind(),
                spec.vertex_ranks().to_vec(),
                spec.edge().clone(),
                spec.mirror().clone(),
                spec.fold().clone(),
            )?;
            if !spec.presentation().equivalent(&entry.presentation) {
                return fail("the double does not present the entry");
            }
            if spec.target_rank() != entry.d_lower_bound {
                return fail("the sequence does not end in a free group of rank d");
            }
        }
        _ => return fail("witnesses have at most one step"),
    }
    Ok(())
}
