//! Scalar fields used by the exact linear algebra.
//!
//! Prime fields are const-generic so that they can implement the `num-traits`
//! identities; a runtime prime is mapped onto one of the compiled-in moduli by
//! [`with_prime`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// An exact field: the scalar type behind rank, kernel and cofactor routines.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;
}

/// A finite prime field whose elements can be sampled uniformly.
pub trait FiniteField: Field + Copy {
    const MODULUS: u64;

    fn from_u64(v: u64) -> Self;

    fn value(self) -> u64;

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_u64(rng.gen_range(0..Self::MODULUS))
    }

    fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_u64(rng.gen_range(1..Self::MODULUS))
    }
}

/// The integers modulo the prime `P`. `P` must be below 2^63.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const fn new(v: u64) -> Self {
        Fp(v % P)
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(P as i64);
        Fp(r as u64)
    }
}

impl<const P: u64> FiniteField for Fp<P> {
    const MODULUS: u64 = P;

    fn from_u64(v: u64) -> Self {
        Fp::new(v)
    }

    fn value(self) -> u64 {
        self.0
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Primes that can be selected at run time.
pub const SUPPORTED_PRIMES: [u64; 10] = [
    101,
    10_007,
    1_000_003,
    1_000_033,
    1_000_037,
    1_000_039,
    1_000_081,
    2_147_483_587,
    2_147_483_629,
    2_147_483_647,
];

/// Default modulus, 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Five distinct primes above 10^6 used for codimension stability checks.
pub const STABILITY_PRIMES: [u64; 5] = [
    2_147_483_647,
    2_147_483_629,
    2_147_483_587,
    1_000_003,
    1_000_033,
];

/// A prime modulus chosen at run time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::UnsupportedPrime {
                p,
                supported: SUPPORTED_PRIMES.to_vec(),
            })
        }
    }

    pub fn p(self) -> u64 {
        self.p
    }

    /// Checks the `p > n^2` requirement for matrices of size `n`.
    pub fn check_size(self, n: usize) -> Result<()> {
        if (n as u64) * (n as u64) >= self.p {
            return Err(Error::Argument(format!(
                "prime {} too small for n = {n} (need p > n^2)",
                self.p
            )));
        }
        Ok(())
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

/// A computation that is generic over the prime field it runs in.
pub trait PrimeJob {
    type Output;
    fn run<F: FiniteField + Send + Sync>(self) -> Self::Output;
}

/// Runs `job` monomorphized at the field selected by `field`.
pub fn with_prime<J: PrimeJob>(field: PrimeField, job: J) -> J::Output {
    match field.p {
        101 => job.run::<Fp<101>>(),
        10_007 => job.run::<Fp<10_007>>(),
        1_000_003 => job.run::<Fp<1_000_003>>(),
        1_000_033 => job.run::<Fp<1_000_033>>(),
        1_000_037 => job.run::<Fp<1_000_037>>(),
        1_000_039 => job.run::<Fp<1_000_039>>(),
        1_000_081 => job.run::<Fp<1_000_081>>(),
        2_147_483_587 => job.run::<Fp<2_147_483_587>>(),
        2_147_483_629 => job.run::<Fp<2_147_483_629>>(),
        2_147_483_647 => job.run::<Fp<2_147_483_647>>(),
        p => unreachable!("PrimeField::new admitted unsupported prime {p}"),
    }
}
