//! Reference implementations used by the integration tests. None of these
//! call into the library's own order, rank or enumeration code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use onorbit_core::pattern::PatternList;
use onorbit_core::Involution;

pub fn data_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(file)
}

pub fn bad_list() -> PatternList {
    PatternList::load(&data_path("m19_bad_patterns.json")).expect("shipped pattern list")
}

pub fn extras() -> PatternList {
    PatternList::load(&data_path("smoothness_extras.json")).expect("shipped extras list")
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    fn go(rest: &mut Vec<u8>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=n as u8).collect(), &mut Vec::new(), &mut out);
    out
}

pub fn involutions_by_filter(n: usize) -> Vec<Vec<u8>> {
    permutations(n)
        .into_iter()
        .filter(|w| (0..n).all(|i| w[w[i] as usize - 1] as usize == i + 1))
        .collect()
}

/// I(n) = I(n-1) + (n-1) I(n-2).
pub fn involution_count(n: usize) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for k in 2..=n as u64 {
        (a, b) = (b, b + (k - 1) * a);
    }
    b
}

/// A reduced word `[i_1, .., i_k]` with `w = s_{i_1} ... s_{i_k}`, where
/// right multiplication by `s_i` swaps positions `i` and `i+1` (1-based).
pub fn reduced_word(w: &[u8]) -> Vec<usize> {
    let mut w = w.to_vec();
    let mut word = Vec::new();
    while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
        w.swap(i, i + 1);
        word.push(i + 1);
    }
    word.reverse();
    word
}

/// The lower Bruhat interval of `w` as the set of subword products of one
/// reduced word.
pub fn lower_interval(w: &[u8]) -> BTreeSet<Vec<u8>> {
    let mut set: BTreeSet<Vec<u8>> = BTreeSet::new();
    set.insert((1..=w.len() as u8).collect());
    for i in reduced_word(w) {
        let next: Vec<Vec<u8>> = set
            .iter()
            .map(|x| {
                let mut y = x.clone();
                y.swap(i - 1, i);
                y
            })
            .collect();
        set.extend(next);
    }
    set
}

pub fn inversions(w: &[u8]) -> usize {
    (0..w.len())
        .flat_map(|i| (i + 1..w.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| w[i] > w[j])
        .count()
}

/// `#{k <= i : w(k) <= j}` counted directly.
pub fn naive_rank(w: &[u8], i: usize, j: usize) -> usize {
    w[..i].iter().filter(|&&x| x as usize <= j).count()
}

pub fn naive_leq(u: &[u8], v: &[u8]) -> bool {
    let n = u.len();
    (1..=n).all(|i| (1..=n).all(|j| naive_rank(u, i, j) >= naive_rank(v, i, j)))
}

/// Longest chain length from each vertex of `{v : pi <= v}` up to `w0`,
/// by dynamic programming over the order itself.
pub fn chain_heights(pi: &Involution) -> BTreeMap<Vec<u8>, usize> {
    let p = pi.one_line().to_vec();
    let mut verts: Vec<Vec<u8>> = involutions_by_filter(pi.n())
        .into_iter()
        .filter(|v| naive_leq(&p, v))
        .collect();
    verts.sort_by_key(|v| std::cmp::Reverse(inversions(v)));
    let mut h: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for v in &verts {
        let best = verts
            .iter()
            .filter(|u| *u != v && naive_leq(v, u))
            .map(|u| h[u] + 1)
            .max()
            .unwrap_or(0);
        h.insert(v.clone(), best);
    }
    h
}

pub fn inv(s: &str) -> Involution {
    s.parse().expect("valid involution literal")
}

/// Every involution obtained by restricting `w` to a nonempty invariant
/// position set and flattening, found by trying all subsets.
pub fn naive_patterns(w: &[u8]) -> BTreeSet<Vec<u8>> {
    let n = w.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..1 << n {
        let pos: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if !pos.iter().all(|&i| mask >> (w[i] - 1) & 1 == 1) {
            continue;
        }
        let flat = pos
            .iter()
            .map(|&i| pos.iter().filter(|&&j| w[j] <= w[i]).count() as u8)
            .collect();
        out.insert(flat);
    }
    out
}
