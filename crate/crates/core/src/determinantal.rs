//! Symmetric determinantal varieties cut out by the rank conditions of an
//! involution, and the Jacobian smoothness test.
//!
//! The variety of `pi` lives in the space of symmetric `n x n` matrices with
//! coordinates `x_uv`, `u <= v`. It is defined by the vanishing of all
//! `(r + 1)`-minors of each upper-left `i x j` window, `r = pi_ij`; only the
//! essential windows are used. Points `b^T M_pi b` with `b` invertible upper
//! triangular sweep out the dense orbit.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{with_prime, Field, FiniteField, PrimeField, PrimeJob};
use crate::linalg::{rank_of_rows, Matrix};
use crate::perm::{enumerate_involutions, Involution, RankMatrix};

/// A rank condition `rank(upper-left i x j) <= bound`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RankCondition {
    pub i: usize,
    pub j: usize,
    pub bound: usize,
}

/// Fulton's essential set of the rank matrix.
pub fn essential_set(rm: &RankMatrix) -> Vec<RankCondition> {
    let n = rm.n();
    let r = |i: usize, j: usize| if i == 0 || j == 0 { 0 } else { rm.get(i, j) };
    // (i, j) is in the diagram iff the 1 of row i lies right of j and the 1 of
    // column j lies below i
    let in_diagram = |i: usize, j: usize| {
        i >= 1 && j >= 1 && i <= n && j <= n && r(i, j) == r(i - 1, j) && r(i, j) == r(i, j - 1)
    };
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if in_diagram(i, j) && !in_diagram(i + 1, j) && !in_diagram(i, j + 1) {
                out.push(RankCondition {
                    i,
                    j,
                    bound: r(i, j),
                });
            }
        }
    }
    out
}

/// Every non-trivial rank condition (`pi_ij < min(i, j)`).
pub fn all_rank_conditions(rm: &RankMatrix) -> Vec<RankCondition> {
    let n = rm.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let bound = rm.get(i, j);
            if bound < i.min(j) {
                out.push(RankCondition { i, j, bound });
            }
        }
    }
    out
}

/// A minor of the generic symmetric matrix, 1-based sorted rows and columns.
/// Stored with `rows <= cols` since a minor and its transpose coincide.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MinorSpec {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        let strictly_increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if rows.is_empty()
            || rows.len() != cols.len()
            || !strictly_increasing(&rows)
            || !strictly_increasing(&cols)
            || rows[0] == 0
            || cols[0] == 0
        {
            return Err(Error::Argument(format!("bad minor {rows:?} x {cols:?}")));
        }
        Ok(if rows <= cols {
            MinorSpec { rows, cols }
        } else {
            MinorSpec {
                rows: cols,
                cols: rows,
            }
        })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    fn zero_based(&self) -> (Vec<usize>, Vec<usize>) {
        (
            self.rows.iter().map(|r| r - 1).collect(),
            self.cols.iter().map(|c| c - 1).collect(),
        )
    }

    pub fn evaluate<F: Field>(&self, pt: &SymPoint<F>) -> F {
        let (r, c) = self.zero_based();
        pt.entries.select(&r, &c).determinant()
    }

    /// Gradient with respect to the `n(n+1)/2` symmetric coordinates.
    pub fn gradient<F: Field>(&self, pt: &SymPoint<F>) -> Vec<F> {
        let (r, c) = self.zero_based();
        let cof = pt.entries.select(&r, &c).cofactor_matrix();
        let mut g = vec![F::zero(); sym_dim(pt.n)];
        for (a, &u) in r.iter().enumerate() {
            for (b, &v) in c.iter().enumerate() {
                let idx = sym_index(pt.n, u.min(v), u.max(v));
                g[idx] = g[idx].clone() + cof[(a, b)].clone();
            }
        }
        g
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            if n + 1 - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(n, k, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 1, &mut Vec::new(), &mut out);
    out
}

/// All `(bound + 1)`-minors in the windows of `conditions`, deduplicated.
pub fn minors_for(conditions: &[RankCondition]) -> Vec<MinorSpec> {
    let mut set = BTreeSet::new();
    for c in conditions {
        let k = c.bound + 1;
        for rows in subsets(c.i, k) {
            for cols in subsets(c.j, k) {
                set.insert(MinorSpec::new(rows.clone(), cols).expect("well-formed minor"));
            }
        }
    }
    set.into_iter().collect()
}

/// Generators of the ideal of `pi`, from the essential rank conditions.
pub fn minor_system(pi: &Involution) -> Vec<MinorSpec> {
    minors_for(&essential_set(&pi.rank_matrix()))
}

/// Generators from every rank condition, without pruning.
pub fn minor_system_unpruned(pi: &Involution) -> Vec<MinorSpec> {
    minors_for(&all_rank_conditions(&pi.rank_matrix()))
}

pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Index of the coordinate `x_uv` (`u <= v`, 0-based) in row-major upper
/// triangular order.
pub fn sym_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u <= v && v < n);
    u * n - u * u.saturating_sub(1) / 2 + (v - u)
}

/// A symmetric matrix over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPoint<F> {
    n: usize,
    entries: Matrix<F>,
}

impl<F: Field> SymPoint<F> {
    pub fn new(entries: Matrix<F>) -> Result<Self> {
        let n = entries.rows();
        if entries.cols() != n {
            return Err(Error::Argument("point matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[(i, j)] != entries[(j, i)] {
                    return Err(Error::Argument(format!(
                        "point matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SymPoint { n, entries })
    }

    /// The permutation matrix `M_sigma`, symmetric since `sigma` is an
    /// involution.
    pub fn permutation(sigma: &Involution) -> Self {
        let n = sigma.n();
        let entries = Matrix::from_fn(n, n, |i, j| {
            if sigma.apply(i + 1) == j + 1 {
                F::one()
            } else {
                F::zero()
            }
        });
        SymPoint { n, entries }
    }

    /// `b^T M b`.
    pub fn congruent(&self, b: &Matrix<F>) -> Self {
        let entries = b.transpose().mul(&self.entries).mul(b);
        SymPoint { n: self.n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &Matrix<F> {
        &self.entries
    }
}

/// A random invertible upper-triangular matrix.
pub fn random_borel<F: FiniteField, R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<F> {
    Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => F::random_nonzero(rng),
        std::cmp::Ordering::Less => F::random(rng),
        std::cmp::Ordering::Greater => F::zero(),
    })
}

/// A random point `b^T M_pi b` of the orbit of `pi`.
pub fn sample_orbit_point<F: FiniteField, R: rand::Rng + ?Sized>(
    pi: &Involution,
    rng: &mut R,
) -> SymPoint<F> {
    SymPoint::permutation(pi).congruent(&random_borel(pi.n(), rng))
}

/// Rank of the Jacobian of `system` at `pt`.
pub fn jacobian_rank_at<F: Field + Send + Sync>(system: &[MinorSpec], pt: &SymPoint<F>) -> usize {
    let rows: Vec<Vec<F>> = if system.len() > 64 {
        system.par_iter().map(|m| m.gradient(pt)).collect()
    } else {
        system.iter().map(|m| m.gradient(pt)).collect()
    };
    rank_of_rows(rows)
}

/// Test points of the smoothness check: `M_sigma` for every `w0`-conjugate
/// `sigma` above `pi`.
pub fn test_point_involutions(pi: &Involution) -> Vec<Involution> {
    let top = pi.rank_matrix();
    enumerate_involutions(pi.n())
        .expect("degree in range")
        .filter(|s| s.is_w0_conjugate() && top.dominates(&RankMatrix::of(s)))
        .collect()
}

/// Full diagnostic of a Jacobian smoothness check in one field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianReport {
    pub pi: Involution,
    pub prime: u64,
    pub generators: usize,
    pub codimension: usize,
    pub trial_ranks: Vec<usize>,
    pub test_point_ranks: Vec<(Involution, usize)>,
    pub smooth: bool,
}

/// Codimension estimate from `trials` random orbit points in the field `F`.
pub fn codimension_in<F: FiniteField + Send + Sync>(
    pi: &Involution,
    system: &[MinorSpec],
    trials: usize,
    seed: u64,
) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| jacobian_rank_at(system, &sample_orbit_point::<F, _>(pi, &mut rng)))
        .collect()
}

pub fn jacobian_report_in<F: FiniteField + Send + Sync>(
    pi: &Involution,
    trials: usize,
    seed: u64,
) -> JacobianReport {
    let system = minor_system(pi);
    let trial_ranks = codimension_in::<F>(pi, &system, trials.max(1), seed);
    let codimension = trial_ranks.iter().copied().max().unwrap_or(0);
    let test_point_ranks: Vec<(Involution, usize)> = test_point_involutions(pi)
        .into_iter()
        .map(|s| {
            let rank = jacobian_rank_at(&system, &SymPoint::<F>::permutation(&s));
            (s, rank)
        })
        .collect();
    let smooth = test_point_ranks.iter().all(|&(_, r)| r == codimension);
    JacobianReport {
        pi: pi.clone(),
        prime: F::MODULUS,
        generators: system.len(),
        codimension,
        trial_ranks,
        test_point_ranks,
        smooth,
    }
}

struct ReportJob<'a> {
    pi: &'a Involution,
    trials: usize,
    seed: u64,
}

impl PrimeJob for ReportJob<'_> {
    type Output = JacobianReport;
    fn run<F: FiniteField + Send + Sync>(self) -> JacobianReport {
        jacobian_report_in::<F>(self.pi, self.trials, self.seed)
    }
}

pub fn jacobian_report(
    pi: &Involution,
    field: PrimeField,
    trials: usize,
    seed: u64,
) -> Result<JacobianReport> {
    field.check_size(pi.n())?;
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    Ok(with_prime(field, ReportJob { pi, trials, seed }))
}

/// Maximum Jacobian rank over `trials` random orbit points.
pub fn codimension(pi: &Involution, field: PrimeField, trials: usize, seed: u64) -> Result<usize> {
    Ok(jacobian_report(pi, field, trials, seed)?.codimension)
}

/// Smooth iff the Jacobian rank at every test point equals the codimension.
pub fn classify_smooth_jacobian(
    pi: &Involution,
    field: PrimeField,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    Ok(jacobian_report(pi, field, trials, seed)?.smooth)
}

/// Codimension computed in each of `primes`; errors unless all agree.
pub fn stable_codimension(
    pi: &Involution,
    primes: &[PrimeField],
    trials: usize,
    seed: u64,
) -> Result<usize> {
    let mut values = Vec::with_capacity(primes.len());
    for &f in primes {
        values.push((f.p(), codimension(pi, f, trials, seed)?));
    }
    let first = values.first().map(|v| v.1).unwrap_or(0);
    if values.iter().any(|v| v.1 != first) {
        return Err(Error::Unstable {
            pi: pi.to_string(),
            detail: format!("per-prime codimensions {values:?}"),
        });
    }
    Ok(first)
}
