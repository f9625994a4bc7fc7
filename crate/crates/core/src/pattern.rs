//! Involution patterns with fixed-point gap decorations, pattern lists, the
//! pattern classifiers, and discovery of minimal bad involutions.
//!
//! An occurrence of a pattern of length `k` in `pi` is a `pi`-invariant set of
//! `k` positions on which `pi` flattens to the pattern. Gap `g` of an
//! occurrence is the open interval between its `g`-th and `(g+1)`-th positions
//! (gap 0 lies before the first, gap `k` after the last); decorations count only
//! fixed points of `pi` inside a gap.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{enumerate_involutions, Involution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GapRequirement {
    NoFixedPoints,
    AtLeastOneFixedPoint,
    Unconstrained,
}

impl GapRequirement {
    fn admits(self, fixed_points: usize) -> bool {
        match self {
            GapRequirement::NoFixedPoints => fixed_points == 0,
            GapRequirement::AtLeastOneFixedPoint => fixed_points > 0,
            GapRequirement::Unconstrained => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GapConstraint {
    pub gap: usize,
    pub req: GapRequirement,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPattern")]
pub struct DecoratedPattern {
    sigma: Involution,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    constraints: Vec<GapConstraint>,
}

#[derive(Deserialize)]
struct RawPattern {
    sigma: Involution,
    #[serde(default)]
    constraints: Vec<GapConstraint>,
}

impl TryFrom<RawPattern> for DecoratedPattern {
    type Error = Error;
    fn try_from(raw: RawPattern) -> Result<Self> {
        DecoratedPattern::new(raw.sigma, raw.constraints)
    }
}

impl DecoratedPattern {
    pub fn new(sigma: Involution, mut constraints: Vec<GapConstraint>) -> Result<Self> {
        let k = sigma.n();
        constraints.sort_by_key(|c| c.gap);
        for w in constraints.windows(2) {
            if w[0].gap == w[1].gap {
                return Err(Error::Argument(format!(
                    "pattern {sigma}: two constraints on gap {}",
                    w[0].gap
                )));
            }
        }
        if let Some(c) = constraints.iter().find(|c| c.gap > k) {
            return Err(Error::Argument(format!(
                "pattern {sigma}: gap {} out of range 0..={k}",
                c.gap
            )));
        }
        Ok(DecoratedPattern { sigma, constraints })
    }

    pub fn plain(sigma: Involution) -> Self {
        DecoratedPattern {
            sigma,
            constraints: Vec::new(),
        }
    }

    pub fn sigma(&self) -> &Involution {
        &self.sigma
    }

    pub fn constraints(&self) -> &[GapConstraint] {
        &self.constraints
    }

    /// True when no gap carries an effective restriction.
    pub fn is_undecorated(&self) -> bool {
        self.constraints
            .iter()
            .all(|c| c.req == GapRequirement::Unconstrained)
    }

    fn gaps_hold(&self, pi: &Involution, positions: &[usize]) -> bool {
        let k = positions.len();
        self.constraints.iter().all(|c| {
            let lo = if c.gap == 0 { 0 } else { positions[c.gap - 1] };
            let hi = if c.gap == k {
                pi.n() + 1
            } else {
                positions[c.gap]
            };
            let fixed = (lo + 1..hi).filter(|&x| pi.is_fixed(x)).count();
            c.req.admits(fixed)
        })
    }
}

/// A named, non-empty list of distinct patterns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawList")]
pub struct PatternList {
    name: String,
    provenance: String,
    patterns: Vec<DecoratedPattern>,
}

#[derive(Deserialize)]
struct RawList {
    name: String,
    #[serde(default)]
    provenance: String,
    patterns: Vec<DecoratedPattern>,
}

impl TryFrom<RawList> for PatternList {
    type Error = Error;
    fn try_from(raw: RawList) -> Result<Self> {
        PatternList::new(raw.name, raw.provenance, raw.patterns)
    }
}

impl PatternList {
    pub fn new(name: String, provenance: String, patterns: Vec<DecoratedPattern>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::Config(format!("pattern list {name:?} is empty")));
        }
        let mut seen = BTreeSet::new();
        for p in &patterns {
            if !seen.insert((p.sigma.clone(), p.constraints.clone())) {
                let sigma = &p.sigma;
                return Err(Error::Config(format!(
                    "pattern list {name:?} repeats pattern {sigma}"
                )));
            }
        }
        Ok(PatternList {
            name,
            provenance,
            patterns,
        })
    }

    /// The undecorated patterns 2143 and 1324 that separate smoothness from
    /// rational smoothness.
    pub fn default_smoothness_extras() -> Self {
        let pats = ["2143", "1324"]
            .iter()
            .map(|s| DecoratedPattern::plain(s.parse().expect("valid involution")))
            .collect();
        PatternList::new("smoothness extras".into(), "built in".into(), pats)
            .expect("non-empty distinct list")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad pattern list: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read pattern list {}: {e}", path.display()))
        })?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn patterns(&self) -> &[DecoratedPattern] {
        &self.patterns
    }

    /// True iff the list holds `sigma` as an undecorated pattern.
    pub fn contains_plain(&self, sigma: &Involution) -> bool {
        self.patterns
            .iter()
            .any(|p| p.sigma == *sigma && p.is_undecorated())
    }

    pub fn extended(&self, extra: &PatternList) -> PatternList {
        let mut patterns = self.patterns.clone();
        for p in &extra.patterns {
            if !patterns.contains(p) {
                patterns.push(p.clone());
            }
        }
        PatternList {
            name: format!("{} + {}", self.name, extra.name),
            provenance: format!("{}; {}", self.provenance, extra.provenance),
            patterns,
        }
    }
}

/// Flattening of `pi` on a sorted `pi`-invariant position set.
pub fn flatten(pi: &Involution, positions: &[usize]) -> Involution {
    let map = positions
        .iter()
        .map(|&p| {
            let img = pi.apply(p);
            (positions
                .binary_search(&img)
                .expect("invariant position set")
                + 1) as u8
        })
        .collect();
    Involution::from_vec_unchecked(map)
}

/// Calls `f` on every `k`-subset of `items`; stops early when `f` returns true.
fn for_each_subset<T: Copy>(items: &[T], k: usize, f: &mut impl FnMut(&[T]) -> bool) -> bool {
    fn go<T: Copy>(
        items: &[T],
        k: usize,
        start: usize,
        cur: &mut Vec<T>,
        f: &mut impl FnMut(&[T]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        let need = k - cur.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            if go(items, k, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if k > items.len() {
        return false;
    }
    go(items, k, 0, &mut Vec::with_capacity(k), f)
}

/// Visits candidate occurrences: invariant position sets with the pattern's
/// cycle type. Stops when `f` returns true; returns whether it stopped.
fn visit_candidates(
    pi: &Involution,
    sigma: &Involution,
    f: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if sigma.n() > pi.n() {
        return false;
    }
    let want_pairs = sigma.two_cycle_count();
    let want_fixed = sigma.fixed_point_count();
    let pairs: Vec<(usize, usize)> = pi.two_cycles().collect();
    let fixed: Vec<usize> = pi.fixed_points().collect();
    if pairs.len() < want_pairs || fixed.len() < want_fixed {
        return false;
    }
    let mut positions = Vec::with_capacity(sigma.n());
    for_each_subset(&pairs, want_pairs, &mut |chosen_pairs| {
        for_each_subset(&fixed, want_fixed, &mut |chosen_fixed| {
            positions.clear();
            for &(a, b) in chosen_pairs {
                positions.push(a);
                positions.push(b);
            }
            positions.extend_from_slice(chosen_fixed);
            positions.sort_unstable();
            f(&positions)
        })
    })
}

/// All occurrences of `p` in `pi`, as sorted 1-based position sets in
/// lexicographic order.
pub fn occurrences(pi: &Involution, p: &DecoratedPattern) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    visit_candidates(pi, &p.sigma, &mut |pos| {
        if flatten(pi, pos) == p.sigma && p.gaps_hold(pi, pos) {
            out.push(pos.to_vec());
        }
        false
    });
    out.sort();
    out
}

pub fn contains(pi: &Involution, p: &DecoratedPattern) -> bool {
    visit_candidates(pi, &p.sigma, &mut |pos| {
        flatten(pi, pos) == p.sigma && p.gaps_hold(pi, pos)
    })
}

pub fn avoids(pi: &Involution, list: &PatternList) -> bool {
    list.patterns.iter().all(|p| !contains(pi, p))
}

/// Patterns of `list` occurring in `pi`.
pub fn witnesses<'a>(pi: &Involution, list: &'a PatternList) -> Vec<&'a DecoratedPattern> {
    list.patterns.iter().filter(|p| contains(pi, p)).collect()
}

pub fn classify_rs_patterns(pi: &Involution, badlist: &PatternList) -> bool {
    avoids(pi, badlist)
}

pub fn classify_smooth_patterns(
    pi: &Involution,
    badlist: &PatternList,
    extras: &PatternList,
) -> bool {
    avoids(pi, badlist) && avoids(pi, extras)
}

/// All proper, non-empty invariant sub-flattenings of `sigma` (deduplicated).
pub fn proper_subpatterns(sigma: &Involution) -> BTreeSet<Involution> {
    let cycles: Vec<Vec<usize>> = sigma
        .two_cycles()
        .map(|(a, b)| vec![a, b])
        .chain(sigma.fixed_points().map(|f| vec![f]))
        .collect();
    let m = cycles.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << m) - 1 {
        let mut pos: Vec<usize> = (0..m)
            .filter(|&c| mask >> c & 1 == 1)
            .flat_map(|c| cycles[c].iter().copied())
            .collect();
        pos.sort_unstable();
        out.insert(flatten(sigma, &pos));
    }
    out
}

/// Involutions of size `<= max_n` that fail `oracle` while all their proper
/// sub-flattenings pass. Decorations are not inferred.
pub fn discover_minimal_bad(
    max_n: usize,
    mut oracle: impl FnMut(&Involution) -> Result<bool>,
) -> Result<Vec<Involution>> {
    if !(4..=8).contains(&max_n) {
        return Err(Error::Size {
            n: max_n,
            min: 4,
            max: 8,
        });
    }
    let mut verdict: HashMap<Involution, bool> = HashMap::new();
    let mut found = Vec::new();
    for n in 1..=max_n {
        for sigma in enumerate_involutions(n)? {
            let ok = oracle(&sigma)?;
            verdict.insert(sigma.clone(), ok);
            if ok {
                continue;
            }
            let minimal = proper_subpatterns(&sigma).iter().all(|tau| verdict[tau]);
            if minimal {
                found.push(sigma);
            }
        }
    }
    Ok(found)
}
