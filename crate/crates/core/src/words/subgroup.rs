//! Finitely generated subgroups of a free group as folded labelled graphs.

use std::collections::{BTreeMap, VecDeque};

use super::FreeWord;
use crate::error::{Error, Result};

/// The folded graph of `<h_1, ..., h_k>`, based at vertex 0.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    rank: u32,
    parent: Vec<usize>,
    adj: Vec<BTreeMap<i32, usize>>,
}

impl SubgroupGraph {
    pub fn new(rank: u32, generators: &[FreeWord]) -> Result<Self> {
        let mut g = SubgroupGraph { rank, parent: vec![0], adj: vec![BTreeMap::new()] };
        for h in generators {
            if h.rank() != rank {
                return Err(Error::RankMismatch { left: h.rank(), right: rank });
            }
            g.add_loop(h);
        }
        Ok(g)
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn add_loop(&mut self, h: &FreeWord) {
        let letters: Vec<i32> = h.indices().collect();
        let mut pending = VecDeque::new();
        let mut v = 0;
        for (i, &l) in letters.iter().enumerate() {
            let w = if i + 1 == letters.len() { 0 } else { self.vertex() };
            self.edge(v, l, w, &mut pending);
            self.edge(w, -l, v, &mut pending);
            v = w;
        }
        self.fold(pending);
    }

    fn edge(&mut self, v: usize, l: i32, w: usize, pending: &mut VecDeque<(usize, usize)>) {
        let v = self.find(v);
        match self.adj[v].get(&l) {
            Some(&u) => pending.push_back((u, w)),
            None => {
                self.adj[v].insert(l, w);
            }
        }
    }

    fn fold(&mut self, mut pending: VecDeque<(usize, usize)>) {
        while let Some((a, b)) = pending.pop_front() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (a, b) = (a.min(b), a.max(b));
            self.parent[b] = a;
            for (l, t) in std::mem::take(&mut self.adj[b]) {
                self.edge(a, l, t, &mut pending);
            }
        }
    }

    fn step(&mut self, v: usize, l: i32) -> Option<usize> {
        let v = self.find(v);
        let t = *self.adj[v].get(&l)?;
        Some(self.find(t))
    }

    /// Rank of the subgroup: edges minus vertices plus one.
    pub fn subgroup_rank(&mut self) -> usize {
        let roots: Vec<usize> = (0..self.parent.len()).filter(|&v| self.find(v) == v).collect();
        let half_edges: usize = roots.iter().map(|&v| self.adj[v].len()).sum();
        half_edges / 2 + 1 - roots.len()
    }

    pub fn contains(&mut self, w: &FreeWord) -> bool {
        let mut v = 0;
        for l in w.indices() {
            match self.step(v, l) {
                Some(t) => v = t,
                None => return false,
            }
        }
        self.find(v) == self.find(0)
    }

    /// Whether the subgroup is the whole free group.
    pub fn is_whole_group(&mut self) -> bool {
        (1..=self.rank as i64).all(|i| self.contains(&FreeWord::generator(self.rank, i).expect("in range")))
    }
}

/// Whether the homomorphism from a free group sending its basis to `images`
/// is injective: by the Hopf property, exactly when the images generate a
/// subgroup of rank `images.len()`.
pub fn is_free_basis_image(rank: u32, images: &[FreeWord]) -> Result<bool> {
    if images.iter().any(FreeWord::is_identity) {
        return Ok(false);
    }
    Ok(SubgroupGraph::new(rank, images)?.subgroup_rank() == images.len())
}
