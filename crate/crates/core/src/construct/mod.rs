//! Generalized doubles of free groups over cyclic edge groups, their
//! Dehn-twisted folding families, reduced forms, rank extension, a small
//! catalog of construction sequences and residual-freeness searches.
//!
//! Source generators of a double: for an amalgam `A *_<c = c'> B`, the
//! generators of `A` followed by those of `B`; for an HNN extension
//! `A *_<c>` with `t c t^-1 = alpha(c)`, the generators of `A` followed by
//! the stable letter `t`.

mod catalog;
mod extend;
mod residual;

pub use catalog::{catalog, catalog_d, replay, sigma_witness, CatalogEntry, Presentation};
pub use extend::RankExtension;
pub use residual::{f2xf2_elements, f2xf2_homs, f2xf2_nonseparable, separate_set, F2xF2Report};

use serde::{Deserialize, Serialize};

use crate::baumslag::{PowerOnset, PowerProduct};
use crate::error::{Error, Result};
use crate::words::{is_free_basis_image, nontrivial_words, Alphabet, FreeHom, FreeWord, SubgroupGraph};

/// Largest syllable count accepted by [`enumerate_reduced`].
pub const MAX_SYLLABLES: usize = 8;
/// Largest total length accepted by [`enumerate_reduced`].
pub const MAX_FORM_LENGTH: usize = 12;
/// Largest number of forms [`enumerate_reduced`] will produce.
pub const MAX_FORMS: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DoubleKind {
    Amalgam,
    Hnn,
}

/// A generalized double of free vertex groups with its folding epimorphism
/// onto a free group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleSpec {
    kind: DoubleKind,
    /// One rank for an HNN extension, two for an amalgam.
    vertex_ranks: Vec<u32>,
    /// `c`, in the first vertex group.
    edge: FreeWord,
    /// The word `c` is identified with: in the second vertex group for an
    /// amalgam, `alpha(c)` in the first for an HNN extension.
    mirror: FreeWord,
    fold: FreeHom,
    names: Vec<String>,
}

/// Serialized form of a [`DoubleSpec`]; words are in the text form of the
/// standard alphabet of the group they live in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleSpecData {
    pub kind: DoubleKind,
    pub vertex_ranks: Vec<u32>,
    pub edge: String,
    pub mirror: String,
    pub target_rank: u32,
    pub fold: Vec<String>,
    #[serde(default)]
    pub names: Vec<String>,
}

fn shift(w: &FreeWord, rank: u32, offset: u32) -> FreeWord {
    FreeWord::reduce(
        rank,
        w.indices().map(|i| i64::from(i.signum()) * (i64::from(i.unsigned_abs()) + i64::from(offset))),
    )
    .expect("shifted into range")
}

fn check_edge_word(w: &FreeWord, what: &str) -> Result<()> {
    if w.is_identity() {
        return Err(Error::Precondition(format!("{what} is trivial")));
    }
    let (root, e) = w.primitive_root()?;
    if e != 1 {
        return Err(Error::Precondition(format!("{what} {w} is a proper power: ({root})^{e}")));
    }
    Ok(())
}

/// `w` lies in `<c>`, for `c` nontrivial.
pub fn in_cyclic(w: &FreeWord, c: &FreeWord) -> Result<bool> {
    w.concat(c)?;
    if w.is_identity() {
        return Ok(true);
    }
    let (rw, ew) = w.primitive_root()?;
    let (rc, ec) = c.primitive_root()?;
    Ok((rw == rc || rw == rc.inverse()) && ew % ec == 0)
}

impl DoubleSpec {
    /// Checks that `c` and its mirror are nontrivial and not proper powers,
    /// that `fold` kills the relator, is injective on every vertex group
    /// and is onto its target.
    pub fn new(
        kind: DoubleKind,
        vertex_ranks: Vec<u32>,
        edge: FreeWord,
        mirror: FreeWord,
        fold: FreeHom,
    ) -> Result<Self> {
        let need = if kind == DoubleKind::Amalgam { 2 } else { 1 };
        if vertex_ranks.len() != need || vertex_ranks.contains(&0) {
            return Err(Error::Precondition(format!("{kind:?} needs {need} positive vertex ranks")));
        }
        let names = match kind {
            DoubleKind::Amalgam => (1..=vertex_ranks[0])
                .map(|i| format!("x{i}"))
                .chain((1..=vertex_ranks[1]).map(|i| format!("y{i}")))
                .collect(),
            DoubleKind::Hnn => (1..=vertex_ranks[0]).map(|i| format!("x{i}")).chain(["t".to_string()]).collect(),
        };
        let spec = DoubleSpec { kind, vertex_ranks, edge, mirror, fold, names };
        spec.validate()?;
        Ok(spec)
    }

    /// Replaces the default generator names (`x_i`, `y_i`, `t`).
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.source_rank() as usize {
            return Err(Error::Precondition(format!("expected {} names", self.source_rank())));
        }
        self.names = names;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let n1 = self.vertex_ranks[0];
        if self.edge.rank() != n1 {
            return Err(Error::RankMismatch { left: self.edge.rank(), right: n1 });
        }
        let mirror_rank = match self.kind {
            DoubleKind::Amalgam => self.vertex_ranks[1],
            DoubleKind::Hnn => n1,
        };
        if self.mirror.rank() != mirror_rank {
            return Err(Error::RankMismatch { left: self.mirror.rank(), right: mirror_rank });
        }
        check_edge_word(&self.edge, "edge word")?;
        check_edge_word(&self.mirror, "mirror edge word")?;
        if self.fold.source_rank() != self.source_rank() {
            return Err(Error::RankMismatch { left: self.fold.source_rank(), right: self.source_rank() });
        }
        if !self.fold.apply(&self.relator())?.is_identity() {
            return Err(Error::Hypothesis("the folding map does not kill the relator".into()));
        }
        let images = self.fold.images();
        let target = self.target_rank();
        let mut start = 0;
        for (v, &r) in self.vertex_ranks.iter().enumerate() {
            if !is_free_basis_image(target, &images[start..start + r as usize])? {
                return Err(Error::Hypothesis(format!("the folding map is not injective on vertex group {}", v + 1)));
            }
            start += r as usize;
        }
        if !SubgroupGraph::new(target, images)?.is_whole_group() {
            return Err(Error::Hypothesis("the folding map is not onto".into()));
        }
        Ok(())
    }

    pub fn kind(&self) -> DoubleKind {
        self.kind
    }

    pub fn vertex_ranks(&self) -> &[u32] {
        &self.vertex_ranks
    }

    pub fn edge(&self) -> &FreeWord {
        &self.edge
    }

    pub fn mirror(&self) -> &FreeWord {
        &self.mirror
    }

    pub fn fold(&self) -> &FreeHom {
        &self.fold
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn source_rank(&self) -> u32 {
        match self.kind {
            DoubleKind::Amalgam => self.vertex_ranks[0] + self.vertex_ranks[1],
            DoubleKind::Hnn => self.vertex_ranks[0] + 1,
        }
    }

    pub fn target_rank(&self) -> u32 {
        self.fold.target_rank()
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::named(self.names.clone())
    }

    /// A word of vertex group `v` (0 or 1) as a word of the double.
    pub fn embed_vertex(&self, v: usize, w: &FreeWord) -> Result<FreeWord> {
        let r = *self.vertex_ranks.get(v).ok_or_else(|| Error::Precondition(format!("no vertex group {v}")))?;
        if w.rank() != r {
            return Err(Error::RankMismatch { left: w.rank(), right: r });
        }
        let offset = if v == 0 { 0 } else { self.vertex_ranks[0] };
        Ok(shift(w, self.source_rank(), offset))
    }

    pub fn stable_letter(&self) -> Result<FreeWord> {
        match self.kind {
            DoubleKind::Hnn => FreeWord::generator(self.source_rank(), self.source_rank().into()),
            DoubleKind::Amalgam => Err(Error::Precondition("an amalgam has no stable letter".into())),
        }
    }

    /// `c c'^-1` for an amalgam, `t c t^-1 alpha(c)^-1` for an HNN extension.
    pub fn relator(&self) -> FreeWord {
        let c = self.embed_vertex(0, &self.edge).expect("edge in vertex 0");
        match self.kind {
            DoubleKind::Amalgam => &c * &self.embed_vertex(1, &self.mirror).expect("mirror in vertex 1").inverse(),
            DoubleKind::Hnn => {
                let t = self.stable_letter().expect("hnn");
                let a = self.embed_vertex(0, &self.mirror).expect("mirror in vertex 0");
                &(&(&t * &c) * &t.inverse()) * &a.inverse()
            }
        }
    }

    /// The image of `c` in the target, written `root^exponent` with a
    /// primitive `root`.
    pub fn twist_base(&self) -> (FreeWord, i64) {
        let c = self.fold.apply(&self.embed_vertex(0, &self.edge).expect("edge")).expect("ranks");
        let (root, e) = c.primitive_root().expect("injective on the first vertex, so nontrivial");
        (root, e.into())
    }

    pub fn to_data(&self) -> DoubleSpecData {
        DoubleSpecData {
            kind: self.kind,
            vertex_ranks: self.vertex_ranks.clone(),
            edge: self.edge.to_string(),
            mirror: self.mirror.to_string(),
            target_rank: self.target_rank(),
            fold: self.fold.images().iter().map(ToString::to_string).collect(),
            names: self.names.clone(),
        }
    }

    pub fn from_data(d: &DoubleSpecData) -> Result<Self> {
        let r0 = *d.vertex_ranks.first().ok_or_else(|| Error::Precondition("no vertex ranks".into()))?;
        let mirror_rank = if d.kind == DoubleKind::Amalgam { *d.vertex_ranks.get(1).unwrap_or(&0) } else { r0 };
        let images = d.fold.iter().map(|s| FreeWord::parse(s, d.target_rank)).collect::<Result<Vec<_>>>()?;
        let spec = DoubleSpec::new(
            d.kind,
            d.vertex_ranks.clone(),
            FreeWord::parse(&d.edge, r0)?,
            FreeWord::parse(&d.mirror, mirror_rank)?,
            FreeHom::new(d.target_rank, images)?,
        )?;
        if d.names.is_empty() {
            Ok(spec)
        } else {
            spec.with_names(d.names.clone())
        }
    }
}

/// `F_n *_<c = c'> F_n` folded onto `F_n`.
pub fn double_of_free(n: u32, c: &FreeWord) -> Result<DoubleSpec> {
    if c.rank() != n {
        return Err(Error::RankMismatch { left: c.rank(), right: n });
    }
    check_edge_word(c, "edge word")?;
    let basis: Vec<FreeWord> = (1..=n).map(|i| FreeWord::generator(n, i.into()).expect("in range")).collect();
    let fold = FreeHom::new(n, basis.iter().chain(&basis).cloned().collect())?;
    DoubleSpec::new(DoubleKind::Amalgam, vec![n, n], c.clone(), c.clone(), fold)
}

/// `F_n *_<c>` with `t` commuting with `c`, folded onto `F_n` by `t -> 1`.
pub fn hnn_of_free(n: u32, c: &FreeWord) -> Result<DoubleSpec> {
    if c.rank() != n {
        return Err(Error::RankMismatch { left: c.rank(), right: n });
    }
    check_edge_word(c, "edge word")?;
    let images =
        (1..=n).map(|i| FreeWord::generator(n, i.into()).expect("in range")).chain([FreeWord::identity(n)]).collect();
    DoubleSpec::new(DoubleKind::Hnn, vec![n], c.clone(), c.clone(), FreeHom::new(n, images)?)
}

/// The fold precomposed with the `m`-th power of the Dehn twist along `c`:
/// the first vertex group is folded as is, the second is conjugated by
/// `fold(c)^-m` (`g -> c^-m fold(g) c^m`), and the stable letter goes to
/// `fold(t) fold(c)^-m`.
pub fn twist_then_fold(spec: &DoubleSpec, m: u64) -> FreeHom {
    let (root, e) = spec.twist_base();
    let cm = root.pow(e * m as i64);
    let cmi = cm.inverse();
    let n1 = spec.vertex_ranks[0] as usize;
    let images = spec
        .fold
        .images()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            if i < n1 {
                g.clone()
            } else if spec.kind == DoubleKind::Amalgam {
                &(&cmi * g) * &cm
            } else {
                g * &cmi
            }
        })
        .collect();
    FreeHom::new(spec.target_rank(), images).expect("target rank")
}

/// A reduced form in a double: an amalgam form alternates between the
/// vertex groups; an HNN form is `g0 t^e1 g1 ... t^ek gk` with no pinch.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormalForm {
    Amalgam(AmalgamNormalForm),
    Hnn(HnnNormalForm),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AmalgamNormalForm {
    /// Vertex group (0 or 1) of the first syllable.
    pub first_vertex: usize,
    pub syllables: Vec<FreeWord>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HnnNormalForm {
    pub pieces: Vec<FreeWord>,
    /// `±1`, one fewer than `pieces`.
    pub stable: Vec<i8>,
}

impl NormalForm {
    pub fn syllable_count(&self) -> usize {
        match self {
            NormalForm::Amalgam(f) => f.syllables.len(),
            NormalForm::Hnn(f) => f.pieces.len(),
        }
    }

    pub fn word(&self, spec: &DoubleSpec) -> Result<FreeWord> {
        let mut g = FreeWord::identity(spec.source_rank());
        match self {
            NormalForm::Amalgam(f) => {
                for (i, s) in f.syllables.iter().enumerate() {
                    g = g.concat(&spec.embed_vertex((f.first_vertex + i) % 2, s)?)?;
                }
            }
            NormalForm::Hnn(f) => {
                let t = spec.stable_letter()?;
                for (i, p) in f.pieces.iter().enumerate() {
                    if i > 0 {
                        g = &g * &t.pow(f.stable[i - 1].into());
                    }
                    g = g.concat(&spec.embed_vertex(0, p)?)?;
                }
            }
        }
        Ok(g)
    }

    pub fn to_text(&self, spec: &DoubleSpec) -> Result<String> {
        Ok(self.word(spec)?.to_text_with(&spec.alphabet()))
    }

    /// The image under `twist_then_fold(spec, m)` as fixed words and powers
    /// of the primitive root of `fold(c)`, with `m` as the variable.
    pub fn power_product(&self, spec: &DoubleSpec) -> Result<PowerProduct> {
        let (root, e) = spec.twist_base();
        let mut p = PowerProduct::new(vec![root])?;
        let fold_vertex = |v: usize, w: &FreeWord| spec.fold.apply(&spec.embed_vertex(v, w)?);
        match self {
            NormalForm::Amalgam(f) => {
                for (i, s) in f.syllables.iter().enumerate() {
                    let v = (f.first_vertex + i) % 2;
                    if v == 0 {
                        p.push_const(fold_vertex(0, s)?)?;
                    } else {
                        p.push_power(0, -e, 0)?;
                        p.push_const(fold_vertex(1, s)?)?;
                        p.push_power(0, e, 0)?;
                    }
                }
            }
            NormalForm::Hnn(f) => {
                let ft = spec.fold.apply(&spec.stable_letter()?)?;
                for (i, piece) in f.pieces.iter().enumerate() {
                    if i > 0 {
                        if f.stable[i - 1] > 0 {
                            p.push_const(ft.clone())?;
                            p.push_power(0, -e, 0)?;
                        } else {
                            p.push_power(0, e, 0)?;
                            p.push_const(ft.inverse())?;
                        }
                    }
                    p.push_const(fold_vertex(0, piece)?)?;
                }
            }
        }
        Ok(p)
    }
}

/// Certified `m0` with `twist_then_fold(spec, m)` nontrivial on the form for
/// every `m >= m0`. The symbolic image is audited against direct
/// evaluation.
pub fn certified_onset(spec: &DoubleSpec, form: &NormalForm) -> Result<PowerOnset> {
    let mut p = form.power_product(spec)?;
    let w = form.word(spec)?;
    let audit = |p: &PowerProduct, m: u64| -> Result<()> {
        if p.eval(m) != twist_then_fold(spec, m).apply(&w)? {
            return Err(Error::Invariant(format!("symbolic image disagrees at m = {m}")));
        }
        Ok(())
    };
    for m in [0, 1, 3] {
        audit(&p, m)?;
    }
    let onset = p.certify()?;
    audit(&p, onset.onset)?;
    Ok(onset)
}

/// Least `m0 <= cap` with `eval(m) != 1` for all `m` in `[m0, m0 + window]`.
pub fn empirical_onset(eval: impl Fn(u64) -> Result<FreeWord>, window: u64, cap: u64) -> Result<u64> {
    let mut start = 0;
    let mut m = 0;
    loop {
        if eval(m)?.is_identity() {
            start = m + 1;
            if start > cap {
                return Err(Error::CapExceeded { what: "empirical onset", value: start, cap });
            }
        } else if m - start >= window {
            return Ok(start);
        }
        m += 1;
    }
}

/// Reduced forms with at most `syllables` syllables and total length (sum
/// of syllable lengths, plus one per stable letter) at most `length`, in a
/// fixed order: by syllable count, then first vertex, then syllables in
/// shortlex order. Forms with two or more syllables have no syllable in the
/// edge group (amalgam), or no pinch `t g t^-1`, `t^-1 g t` (HNN).
pub fn enumerate_reduced(spec: &DoubleSpec, syllables: usize, length: usize) -> Result<Vec<NormalForm>> {
    if syllables > MAX_SYLLABLES {
        return Err(Error::CapExceeded { what: "syllable count", value: syllables as u64, cap: MAX_SYLLABLES as u64 });
    }
    if length > MAX_FORM_LENGTH {
        return Err(Error::CapExceeded { what: "form length", value: length as u64, cap: MAX_FORM_LENGTH as u64 });
    }
    let mut out = Vec::new();
    match spec.kind {
        DoubleKind::Amalgam => enumerate_amalgam(spec, syllables, length, &mut out)?,
        DoubleKind::Hnn => enumerate_hnn(spec, syllables, length, &mut out)?,
    }
    Ok(out)
}

fn push_form(out: &mut Vec<NormalForm>, f: NormalForm) -> Result<()> {
    if out.len() >= MAX_FORMS {
        return Err(Error::CapExceeded { what: "reduced forms", value: out.len() as u64 + 1, cap: MAX_FORMS as u64 });
    }
    out.push(f);
    Ok(())
}

fn enumerate_amalgam(spec: &DoubleSpec, syllables: usize, length: usize, out: &mut Vec<NormalForm>) -> Result<()> {
    let all: Vec<Vec<FreeWord>> = spec.vertex_ranks.iter().map(|&r| nontrivial_words(r, length)).collect();
    let edges = [&spec.edge, &spec.mirror];
    let mut outside = Vec::new();
    for (v, words) in all.iter().enumerate() {
        let mut keep = Vec::new();
        for w in words {
            if !in_cyclic(w, edges[v])? {
                keep.push(w.clone());
            }
        }
        outside.push(keep);
    }
    for k in 1..=syllables {
        for first in 0..2 {
            let pools: Vec<&Vec<FreeWord>> =
                if k == 1 { vec![&all[first]] } else { vec![&outside[first], &outside[1 - first]] };
            let mut stack = Vec::new();
            fill_amalgam(&pools, k, length, first, &mut stack, out)?;
        }
    }
    Ok(())
}

fn fill_amalgam(
    pools: &[&Vec<FreeWord>],
    k: usize,
    budget: usize,
    first: usize,
    stack: &mut Vec<FreeWord>,
    out: &mut Vec<NormalForm>,
) -> Result<()> {
    if stack.len() == k {
        return push_form(
            out,
            NormalForm::Amalgam(AmalgamNormalForm { first_vertex: first, syllables: stack.clone() }),
        );
    }
    let remaining = k - stack.len() - 1;
    for w in pools[stack.len() % pools.len()].iter() {
        if w.len() + remaining > budget {
            break;
        }
        stack.push(w.clone());
        fill_amalgam(pools, k, budget - w.len(), first, stack, out)?;
        stack.pop();
    }
    Ok(())
}

fn enumerate_hnn(spec: &DoubleSpec, syllables: usize, length: usize, out: &mut Vec<NormalForm>) -> Result<()> {
    let r = spec.vertex_ranks[0];
    let mut pool = vec![FreeWord::identity(r)];
    pool.extend(nontrivial_words(r, length));
    let mut in_edge = Vec::new();
    let mut in_mirror = Vec::new();
    for w in &pool {
        in_edge.push(in_cyclic(w, &spec.edge)?);
        in_mirror.push(in_cyclic(w, &spec.mirror)?);
    }
    let ctx = HnnPools { pool: &pool, in_edge: &in_edge, in_mirror: &in_mirror };
    for k in 1..=syllables {
        let mut form = HnnNormalForm { pieces: Vec::new(), stable: Vec::new() };
        fill_hnn(&ctx, k, length, &mut form, out)?;
    }
    Ok(())
}

struct HnnPools<'a> {
    pool: &'a [FreeWord],
    in_edge: &'a [bool],
    in_mirror: &'a [bool],
}

fn fill_hnn(
    ctx: &HnnPools,
    k: usize,
    budget: usize,
    form: &mut HnnNormalForm,
    out: &mut Vec<NormalForm>,
) -> Result<()> {
    if form.pieces.len() == k {
        return push_form(out, NormalForm::Hnn(form.clone()));
    }
    let i = form.pieces.len();
    let stables_left = k - 1 - i;
    for (idx, w) in ctx.pool.iter().enumerate() {
        if w.len() + stables_left > budget {
            break;
        }
        if k == 1 && w.is_identity() {
            continue;
        }
        for e in [1i8, -1] {
            if i + 1 == k {
                if e == -1 {
                    break;
                }
            } else if i > 0 {
                // Piece i sits between t^stable[i-1] and t^e.
                let prev = form.stable[i - 1];
                if (prev == 1 && e == -1 && ctx.in_edge[idx]) || (prev == -1 && e == 1 && ctx.in_mirror[idx]) {
                    continue;
                }
            }
            form.pieces.push(w.clone());
            let extra = usize::from(i + 1 < k);
            if i + 1 < k {
                form.stable.push(e);
            }
            fill_hnn(ctx, k, budget - w.len() - extra, form, out)?;
            form.pieces.pop();
            if i + 1 < k {
                form.stable.pop();
            }
        }
    }
    Ok(())
}

/// One reduced form checked against the twisted folding family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub element: String,
    /// Syllable count of a reduced form, or length of a word.
    pub size: usize,
    pub certified_onset: u64,
    pub empirical_onset: u64,
    /// Certificate exponent bound `N`, absent for images independent of `m`.
    pub certificate_n: Option<u64>,
    /// `m` in `[certified, certified + window]` with trivial image.
    pub failures: Vec<u64>,
}

impl ScanRow {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.empirical_onset <= self.certified_onset
    }
}

/// Certified and empirical onsets for every element produced by `forms`,
/// with a check of the window after the certified onset.
pub fn scan_double(spec: &DoubleSpec, forms: &[NormalForm], window: u64) -> Result<Vec<ScanRow>> {
    let mut family = Family::new(|m| twist_then_fold(spec, m));
    let mut rows = Vec::with_capacity(forms.len());
    for f in forms {
        let w = f.word(spec)?;
        let cert = certified_onset(spec, f)?;
        rows.push(family.row(&w, w.to_text_with(&spec.alphabet()), f.syllable_count(), &cert, window)?);
    }
    Ok(rows)
}

/// A homomorphism family `m -> hom(m)` with the members built so far.
pub(crate) struct Family<F> {
    make: F,
    homs: Vec<FreeHom>,
}

impl<F: Fn(u64) -> FreeHom> Family<F> {
    pub(crate) fn new(make: F) -> Self {
        Family { make, homs: Vec::new() }
    }

    pub(crate) fn apply(&mut self, m: u64, w: &FreeWord) -> Result<FreeWord> {
        while self.homs.len() as u64 <= m {
            let next = (self.make)(self.homs.len() as u64);
            self.homs.push(next);
        }
        self.homs[m as usize].apply(w)
    }

    pub(crate) fn row(
        &mut self,
        w: &FreeWord,
        element: String,
        size: usize,
        cert: &PowerOnset,
        window: u64,
    ) -> Result<ScanRow> {
        let mut failures = Vec::new();
        for m in cert.onset..=cert.onset + window {
            if self.apply(m, w)?.is_identity() {
                failures.push(m);
            }
        }
        // An empirical onset above the certified one would show up as a
        // failure; the search is capped just past the certified window.
        let cap = cert.onset + window + 1;
        let mut empirical = cap + 1;
        let mut start = 0;
        for m in 0..=cap + window {
            if self.apply(m, w)?.is_identity() {
                start = m + 1;
            } else if m - start >= window {
                empirical = start;
                break;
            }
        }
        Ok(ScanRow {
            element,
            size,
            certified_onset: cert.onset,
            empirical_onset: empirical,
            certificate_n: cert.certificate.as_ref().map(|c| c.n),
            failures,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s, 2).unwrap()
    }

    #[test]
    fn doubles_and_twists() {
        let spec = double_of_free(2, &w("[x1,x2]")).unwrap();
        assert_eq!(spec.source_rank(), 4);
        assert_eq!(spec.relator().to_text_with(&spec.alphabet()), "x1*x2*x1^-1*x2^-1*y2*y1*y2^-1*y1^-1");
        let err = double_of_free(2, &w("x1^2")).unwrap_err();
        assert!(err.to_string().contains("(x1)^2"), "{err}");
        let h1 = twist_then_fold(&spec, 1);
        assert_eq!(h1.image(3), &(&(&w("[x1,x2]").inverse() * &w("x1")) * &w("[x1,x2]")));
        assert_eq!(twist_then_fold(&spec, 0), *spec.fold());
        let back = DoubleSpec::from_data(&spec.to_data()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn hnn_forms() {
        let spec = hnn_of_free(2, &w("[x1,x2]")).unwrap();
        let forms = enumerate_reduced(&spec, 3, 3).unwrap();
        for f in &forms {
            let cert = certified_onset(&spec, f).unwrap();
            let word = f.word(&spec).unwrap();
            for m in cert.onset..cert.onset + 5 {
                assert!(!twist_then_fold(&spec, m).apply(&word).unwrap().is_identity());
            }
        }
        assert!(forms.iter().any(|f| f.to_text(&spec).unwrap() == "t*x1*t^-1"));
        assert!(!forms.iter().any(|f| f.to_text(&spec).unwrap() == "t^-1*t"));
    }
}
