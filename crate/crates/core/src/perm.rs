//! Involutions of the symmetric group, their rank matrices and Bruhat order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest degree accepted by [`enumerate_involutions`].
pub const MAX_ENUMERATION_N: usize = 12;

/// An involution of `{1..n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Involution {
    map: Vec<u8>,
}

impl Involution {
    /// Builds an involution from its one-line notation (1-based values).
    pub fn new(map: Vec<u8>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::Argument("involution of degree 0".into()));
        }
        if n > u8::MAX as usize {
            return Err(Error::Size {
                n,
                min: 1,
                max: u8::MAX as usize,
            });
        }
        let mut seen = vec![false; n];
        for (i, &v) in map.iter().enumerate() {
            let v = v as usize;
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::Argument(format!(
                    "{map:?} is not a permutation of 1..{n} (position {})",
                    i + 1
                )));
            }
            seen[v - 1] = true;
        }
        for (i, &v) in map.iter().enumerate() {
            if map[v as usize - 1] as usize != i + 1 {
                return Err(Error::Argument(format!(
                    "{map:?} is not an involution: {} -> {} -> {}",
                    i + 1,
                    v,
                    map[v as usize - 1]
                )));
            }
        }
        Ok(Involution { map })
    }

    pub(crate) fn from_vec_unchecked(map: Vec<u8>) -> Self {
        debug_assert!(Involution::new(map.clone()).is_ok(), "{map:?}");
        Involution { map }
    }

    pub fn identity(n: usize) -> Self {
        Involution::from_vec_unchecked((1..=n as u8).collect())
    }

    /// The longest element `i -> n + 1 - i`.
    pub fn longest(n: usize) -> Self {
        Involution::from_vec_unchecked((1..=n as u8).rev().collect())
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1] as usize
    }

    pub fn one_line(&self) -> &[u8] {
        &self.map
    }

    pub fn two_cycle_count(&self) -> usize {
        self.map
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v as usize > i + 1)
            .count()
    }

    pub fn fixed_point_count(&self) -> usize {
        self.n() - 2 * self.two_cycle_count()
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.apply(i) == i
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let m = &self.map;
        (0..m.len())
            .map(|i| m[i + 1..].iter().filter(|&&v| v < m[i]).count())
            .sum()
    }

    /// Rank of this element in the Bruhat order on involutions:
    /// `(length + two_cycle_count) / 2`.
    pub fn involution_length(&self) -> usize {
        (self.length() + self.two_cycle_count()) / 2
    }

    /// True iff the involution has `floor(n/2)` two-cycles, i.e. is conjugate
    /// to the longest element.
    pub fn is_w0_conjugate(&self) -> bool {
        self.two_cycle_count() == self.n() / 2
    }

    pub fn rank_matrix(&self) -> RankMatrix {
        RankMatrix::of(self)
    }

    /// `t u t` for the transposition `t = (a b)`, 1-based.
    pub fn conjugate_by_transposition(&self, a: usize, b: usize) -> Involution {
        let swap = |x: usize| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        };
        let map = (1..=self.n())
            .map(|i| swap(self.apply(swap(i))) as u8)
            .collect();
        Involution { map }
    }

    /// `t u` for `t = (a b)`, provided `t` commutes with `self` (otherwise the
    /// product is not an involution).
    pub fn left_multiply_commuting(&self, a: usize, b: usize) -> Option<Involution> {
        let commutes = self.apply(a) == b || (self.is_fixed(a) && self.is_fixed(b));
        if !commutes {
            return None;
        }
        let swap = |x: usize| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        };
        let map = self.map.iter().map(|&v| swap(v as usize) as u8).collect();
        Some(Involution { map })
    }

    /// Two-cycles `(i, pi(i))` with `i < pi(i)`, ordered by `i`.
    pub fn two_cycles(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n())
            .map(move |i| (i, self.apply(i)))
            .filter(|&(i, j)| i < j)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n()).filter(move |&i| self.is_fixed(i))
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for v in &self.map {
                write!(f, "{v}")?;
            }
        } else {
            for (i, v) in self.map.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Involution({self})")
    }
}

impl FromStr for Involution {
    type Err = Error;

    /// Accepts `2143` (digits, n <= 9) or `2,1,4,3` (any n).
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |position: usize, reason: String| Error::Parse {
            input: s.to_string(),
            position,
            reason,
        };
        let s_trim = s.trim();
        if s_trim.is_empty() {
            return Err(parse_err(0, "empty input".into()));
        }
        let mut values = Vec::new();
        if s_trim.contains(',') {
            let mut pos = 0;
            for tok in s_trim.split(',') {
                let v: u8 = tok
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(pos, format!("bad entry {tok:?}")))?;
                values.push(v);
                pos += tok.len() + 1;
            }
        } else {
            for (pos, c) in s_trim.chars().enumerate() {
                let d = c
                    .to_digit(10)
                    .ok_or_else(|| parse_err(pos, format!("unexpected character {c:?}")))?;
                values.push(d as u8);
            }
        }
        let n = values.len();
        let mut seen = vec![false; n];
        for (i, &v) in values.iter().enumerate() {
            let vi = v as usize;
            if vi == 0 || vi > n {
                return Err(parse_err(i, format!("value {v} outside 1..={n}")));
            }
            if seen[vi - 1] {
                return Err(parse_err(i, format!("value {v} repeated")));
            }
            seen[vi - 1] = true;
        }
        for (i, &v) in values.iter().enumerate() {
            if values[v as usize - 1] as usize != i + 1 {
                return Err(parse_err(
                    i,
                    format!(
                        "not an involution: {} -> {} -> {}",
                        i + 1,
                        v,
                        values[v as usize - 1]
                    ),
                ));
            }
        }
        Ok(Involution { map: values })
    }
}

impl Serialize for Involution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Involution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `r[i][j]` = rank of the upper-left `i x j` block of the permutation matrix
/// (1-based `i`, `j`), i.e. `#{k <= i : pi(k) <= j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankMatrix {
    n: usize,
    r: Vec<u8>,
}

impl RankMatrix {
    pub fn of(pi: &Involution) -> Self {
        let n = pi.n();
        let mut r = vec![0u8; n * n];
        for i in 1..=n {
            for j in 1..=n {
                let above = if i > 1 { r[(i - 2) * n + j - 1] } else { 0 };
                let hit = u8::from(pi.apply(i) <= j);
                r[(i - 1) * n + j - 1] = above + hit;
            }
        }
        RankMatrix { n, r }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based entry.
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.r[(i - 1) * self.n + j - 1] as usize
    }

    /// True iff every entry of `self` is at least the matching entry of `other`.
    pub fn dominates(&self, other: &RankMatrix) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.r.iter().zip(&other.r).all(|(a, b)| a >= b)
    }
}

/// All involutions of `S_n` in lexicographic one-line order.
pub fn enumerate_involutions(n: usize) -> Result<impl Iterator<Item = Involution>> {
    if !(1..=MAX_ENUMERATION_N).contains(&n) {
        return Err(Error::Size {
            n,
            min: 1,
            max: MAX_ENUMERATION_N,
        });
    }
    let mut out = Vec::new();
    let mut map = vec![0u8; n];
    fill(&mut map, &mut out);
    out.sort();
    Ok(out.into_iter())
}

fn fill(map: &mut Vec<u8>, out: &mut Vec<Involution>) {
    let Some(i) = map.iter().position(|&v| v == 0) else {
        out.push(Involution::from_vec_unchecked(map.clone()));
        return;
    };
    map[i] = (i + 1) as u8;
    fill(map, out);
    for j in i + 1..map.len() {
        if map[j] == 0 {
            map[i] = (j + 1) as u8;
            map[j] = (i + 1) as u8;
            fill(map, out);
            map[j] = 0;
        }
    }
    map[i] = 0;
}

/// Bruhat order `u <= v` via rank-matrix dominance.
pub fn bruhat_leq(u: &Involution, v: &Involution) -> Result<bool> {
    if u.n() != v.n() {
        return Err(Error::Argument(format!(
            "degree mismatch: {u} has n = {}, {v} has n = {}",
            u.n(),
            v.n()
        )));
    }
    Ok(u.rank_matrix().dominates(&v.rank_matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(s: &str) -> Involution {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_small_cases() {
        let one: Vec<_> = enumerate_involutions(1).unwrap().collect();
        assert_eq!(one, vec![inv("1")]);
        let three: Vec<String> = enumerate_involutions(3)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(three, ["123", "132", "213", "321"]);
        assert!(matches!(enumerate_involutions(0), Err(Error::Size { .. })));
        assert!(matches!(enumerate_involutions(13), Err(Error::Size { .. })));
    }

    #[test]
    fn rank_matrix_examples() {
        let id = RankMatrix::of(&Involution::identity(2));
        assert_eq!(
            (id.get(1, 1), id.get(1, 2), id.get(2, 1), id.get(2, 2)),
            (1, 1, 1, 2)
        );
        let r = RankMatrix::of(&inv("21"));
        assert_eq!(
            (r.get(1, 1), r.get(1, 2), r.get(2, 1), r.get(2, 2)),
            (0, 1, 1, 2)
        );
        let r = RankMatrix::of(&inv("2143"));
        assert_eq!((r.get(2, 2), r.get(1, 1), r.get(3, 3)), (2, 0, 2));
    }

    #[test]
    fn counts() {
        assert_eq!(
            (
                Involution::identity(5).two_cycle_count(),
                Involution::identity(5).length()
            ),
            (0, 0)
        );
        let w0 = Involution::longest(4);
        assert_eq!((w0.two_cycle_count(), w0.length()), (2, 6));
        assert_eq!((inv("321").two_cycle_count(), inv("321").length()), (1, 3));
    }

    #[test]
    fn w0_conjugates_in_s4() {
        let conj: Vec<String> = enumerate_involutions(4)
            .unwrap()
            .filter(Involution::is_w0_conjugate)
            .map(|p| p.to_string())
            .collect();
        assert_eq!(conj, ["2143", "3412", "4321"]);
        for n in 1..8 {
            assert!(Involution::longest(n).is_w0_conjugate());
        }
        assert!(!Involution::identity(2).is_w0_conjugate());
    }

    #[test]
    fn bruhat_examples() {
        assert!(bruhat_leq(&inv("2143"), &inv("3412")).unwrap());
        assert!(!bruhat_leq(&inv("3412"), &inv("2143")).unwrap());
        for v in enumerate_involutions(4).unwrap() {
            assert!(bruhat_leq(&Involution::identity(4), &v).unwrap());
            assert!(bruhat_leq(&v, &Involution::longest(4)).unwrap());
        }
        assert!(bruhat_leq(&inv("21"), &inv("321")).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(inv("2143").to_string(), "2143");
        assert_eq!(inv("2,1,4,3"), inv("2143"));
        let big = Involution::longest(10);
        assert_eq!(big.to_string(), "10,9,8,7,6,5,4,3,2,1");
        assert_eq!(big.to_string().parse::<Involution>().unwrap(), big);
        match "2314".parse::<Involution>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 0),
            other => panic!("{other:?}"),
        }
        match "21a3".parse::<Involution>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        assert!("1134".parse::<Involution>().is_err());
        assert!("".parse::<Involution>().is_err());
        assert!(Involution::new(vec![2, 3, 1]).is_err());
    }

    #[test]
    fn reflections_preserve_involutions() {
        let w0 = Involution::longest(4);
        assert_eq!(w0.conjugate_by_transposition(1, 2).to_string(), "3412");
        assert_eq!(w0.conjugate_by_transposition(1, 3).to_string(), "2143");
        assert_eq!(
            w0.left_multiply_commuting(1, 4).unwrap().to_string(),
            "1324"
        );
        assert!(w0.left_multiply_commuting(1, 2).is_none());
        assert_eq!(
            Involution::identity(3)
                .left_multiply_commuting(1, 3)
                .unwrap()
                .to_string(),
            "321"
        );
    }
}
