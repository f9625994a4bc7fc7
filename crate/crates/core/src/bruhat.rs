//! The order ideal above an involution, its Bruhat graph, and the
//! graph-theoretic rational-smoothness classifiers.
//!
//! The ideal of `pi` is the Bruhat up-set `{v : pi <= v}`; in closure order its
//! bottom is the longest element `w0` and its top is `pi`. Ranks are measured
//! from `w0` upward.
//!
//! Edges come from the reflection action: for a vertex `u` and a transposition
//! `t`, the neighbour is `t u t` when that differs from `u`. When `t` commutes
//! with `u` the neighbour is `t u`, but only for even `n`; for odd `n` such
//! pairs are not edges.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{enumerate_involutions, Involution, RankMatrix};

/// Order in which edges are generated. Both produce the same graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSweep {
    ByVertex,
    ByReflection,
}

#[derive(Clone, Debug)]
pub struct OrbitIdeal {
    pi: Involution,
    vertices: Vec<Involution>,
    index: HashMap<Involution, usize>,
    adjacency: Vec<Vec<usize>>,
    rank_of: Vec<usize>,
    r_pi: usize,
}

/// Neighbour of `u` under the transposition `(a b)`, if the pair is an edge of
/// the ambient Bruhat graph.
pub fn reflect(u: &Involution, a: usize, b: usize) -> Option<Involution> {
    let v = u.conjugate_by_transposition(a, b);
    if v != *u {
        return Some(v);
    }
    if u.n() % 2 == 1 {
        return None;
    }
    u.left_multiply_commuting(a, b)
}

fn transpositions(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |a| (a + 1..=n).map(move |b| (a, b)))
}

/// Builds the ideal of `pi` with edges generated vertex by vertex.
pub fn build_ideal(pi: &Involution) -> OrbitIdeal {
    build_ideal_with(pi, EdgeSweep::ByVertex)
}

pub fn build_ideal_with(pi: &Involution, sweep: EdgeSweep) -> OrbitIdeal {
    let n = pi.n();
    let top = pi.rank_matrix();
    let vertices: Vec<Involution> = enumerate_involutions(n)
        .expect("degree of an existing involution is in range")
        .filter(|v| top.dominates(&RankMatrix::of(v)))
        .collect();
    build_on_vertices(pi, vertices, sweep)
}

/// Builds the ideal from a precomputed list of all involutions of `S_n` and
/// their rank matrices, avoiding re-enumeration in bulk surveys.
pub fn build_ideal_from(pi: &Involution, all: &[(Involution, RankMatrix)]) -> OrbitIdeal {
    let top = pi.rank_matrix();
    let vertices = all
        .iter()
        .filter(|(_, rm)| top.dominates(rm))
        .map(|(v, _)| v.clone())
        .collect();
    build_on_vertices(pi, vertices, EdgeSweep::ByVertex)
}

fn build_on_vertices(pi: &Involution, vertices: Vec<Involution>, sweep: EdgeSweep) -> OrbitIdeal {
    let n = pi.n();
    let index: HashMap<Involution, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    let mut link = |u: usize, a: usize, b: usize| {
        if let Some(v) = reflect(&vertices[u], a, b) {
            if let Some(&j) = index.get(&v) {
                adjacency[u].push(j);
            }
        }
    };
    match sweep {
        EdgeSweep::ByVertex => {
            for u in 0..vertices.len() {
                for (a, b) in transpositions(n) {
                    link(u, a, b);
                }
            }
        }
        EdgeSweep::ByReflection => {
            for (a, b) in transpositions(n) {
                for u in 0..vertices.len() {
                    link(u, a, b);
                }
            }
        }
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
        nbrs.dedup();
    }
    let top = Involution::longest(n).involution_length();
    let rank_of: Vec<usize> = vertices
        .iter()
        .map(|v| top - v.involution_length())
        .collect();
    let r_pi = top - pi.involution_length();
    OrbitIdeal {
        pi: pi.clone(),
        vertices,
        index,
        adjacency,
        rank_of,
        r_pi,
    }
}

impl OrbitIdeal {
    pub fn pi(&self) -> &Involution {
        &self.pi
    }

    pub fn vertices(&self) -> &[Involution] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: &Involution) -> bool {
        self.index.contains_key(v)
    }

    pub fn index_of(&self, v: &Involution) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Neighbour indices of vertex `i`, sorted.
    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Undirected edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    pub fn rank_of(&self, v: &Involution) -> Option<usize> {
        self.index_of(v).map(|i| self.rank_of[i])
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank_of
    }

    /// The rank `r(pi)` of the ideal.
    pub fn r_pi(&self) -> usize {
        self.r_pi
    }

    pub fn degree(&self, v: &Involution) -> Result<usize> {
        self.index_of(v)
            .map(|i| self.adjacency[i].len())
            .ok_or_else(|| Error::Argument(format!("{v} is not in the ideal of {}", self.pi)))
    }

    /// Degrees of all `w0`-conjugates in the ideal, in vertex order.
    pub fn w0_conjugate_degrees(&self) -> Vec<(Involution, usize)> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_w0_conjugate())
            .map(|(i, v)| (v.clone(), self.adjacency[i].len()))
            .collect()
    }

    /// `w0`-conjugates whose degree is below `r(pi)`.
    pub fn degree_violations(&self) -> Vec<(Involution, usize)> {
        self.w0_conjugate_degrees()
            .into_iter()
            .filter(|&(_, d)| d < self.r_pi)
            .collect()
    }

    /// Ranks recomputed as longest-chain lengths from `w0` through cover
    /// relations of the order restricted to the ideal. Cubic in the ideal size.
    pub fn chain_ranks(&self) -> Vec<usize> {
        let covers = self.cover_relations();
        let len = self.vertices.len();
        // above[i] = vertices covering i in closure order (i.e. Bruhat-below i)
        let mut down: Vec<Vec<usize>> = vec![Vec::new(); len];
        let mut up_count = vec![0usize; len];
        for &(lo, hi) in &covers {
            // lo <= hi in Bruhat: hi is closer to w0
            down[hi].push(lo);
            up_count[lo] += 1;
        }
        let mut rank = vec![0usize; len];
        let mut ready: Vec<usize> = (0..len).filter(|&i| up_count[i] == 0).collect();
        while let Some(v) = ready.pop() {
            for &w in &down[v] {
                rank[w] = rank[w].max(rank[v] + 1);
                up_count[w] -= 1;
                if up_count[w] == 0 {
                    ready.push(w);
                }
            }
        }
        rank
    }

    /// Cover relations `(lo, hi)` of the Bruhat order restricted to the
    /// vertices (`lo < hi`, nothing strictly between).
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        let rms: Vec<RankMatrix> = self.vertices.iter().map(RankMatrix::of).collect();
        let len = rms.len();
        let lt = |i: usize, j: usize| i != j && rms[i].dominates(&rms[j]);
        let mut covers = Vec::new();
        for i in 0..len {
            for j in 0..len {
                if lt(i, j) && !(0..len).any(|k| lt(i, k) && lt(k, j)) {
                    covers.push((i, j));
                }
            }
        }
        covers
    }

    pub fn to_document(&self) -> IdealDocument {
        IdealDocument {
            pi: self.pi.clone(),
            n: self.pi.n(),
            r_pi: self.r_pi,
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| IdealVertex {
                    id: i,
                    involution: v.clone(),
                    rank: self.rank_of[i],
                    degree: self.adjacency[i].len(),
                    w0_conjugate: v.is_w0_conjugate(),
                })
                .collect(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// JSON export of an ideal and its Bruhat graph.
#[derive(Clone, Debug, Serialize)]
pub struct IdealDocument {
    pub pi: Involution,
    pub n: usize,
    pub r_pi: usize,
    pub vertices: Vec<IdealVertex>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealVertex {
    pub id: usize,
    pub involution: Involution,
    pub rank: usize,
    pub degree: usize,
    pub w0_conjugate: bool,
}

/// True iff every `w0`-conjugate of the ideal has degree exactly `r(pi)`.
pub fn classify_rs_graph(pi: &Involution) -> bool {
    rs_from_ideal(&build_ideal(pi))
}

pub fn rs_from_ideal(ideal: &OrbitIdeal) -> bool {
    ideal
        .w0_conjugate_degrees()
        .iter()
        .all(|&(_, d)| d == ideal.r_pi())
}

/// Even-`n` shortcut: only the degree of `w0` is compared with `r(pi)`.
pub fn classify_rs_graph_even_shortcut(pi: &Involution) -> Result<bool> {
    even_shortcut_from_ideal(&build_ideal(pi))
}

pub fn even_shortcut_from_ideal(ideal: &OrbitIdeal) -> Result<bool> {
    let n = ideal.pi().n();
    if n % 2 == 1 {
        return Err(Error::Argument(format!(
            "even-n shortcut requested for odd n = {n}"
        )));
    }
    Ok(ideal.degree(&Involution::longest(n))? == ideal.r_pi())
}
