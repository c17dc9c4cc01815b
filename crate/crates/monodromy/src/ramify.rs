//! Certification of ordinary ramification: a prime p where f mod p splits
//! as (X − α)² · f₂ with f₂ squarefree of degree n − 2 and f₂(α) ≠ 0.
//!
//! The check is structural, read off the squarefree decomposition of
//! f mod p, because that is the exact shape being certified. A witness can
//! only live at a prime dividing disc(f), so the search factors the
//! discriminant instead of scanning all primes.
//!
//! At n = 2 the cofactor degenerates to the constant 1, which counts as
//! squarefree of degree 0.

use crate::arith::prime_divisors_up_to;
use crate::ffpoly::FpPolynomial;
use crate::intpoly::{IntPolyError, IntPolynomial};
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RamifyError {
    #[error("f is not squarefree over Q (discriminant is zero)")]
    DiscriminantZero,
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error(transparent)]
    IntPoly(#[from] IntPolyError),
}

/// Evidence that f has ordinary ramification at p:
/// f ≡ (X − α)² · cofactor mod p with the cofactor monic, squarefree of
/// degree n − 2, and nonvanishing at α.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationWitness {
    pub p: u64,
    pub alpha: u64,
    pub cofactor: FpPolynomial,
}

impl RamificationWitness {
    /// Multiplies (X − α)² · cofactor back out.
    pub fn reconstruct(&self) -> FpPolynomial {
        FpPolynomial::linear_root(self.p, self.alpha).pow(2).mul(&self.cofactor)
    }
}

impl Serialize for RamificationWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RamificationWitness", 4)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("alpha", &self.alpha)?;
        s.serialize_field("cofactor", &self.cofactor)?;
        // char-2 witnesses need care when read back onto the curve y² = f(x)
        s.serialize_field("char_two", &(self.p == 2))?;
        s.end()
    }
}

/// Outcome of a witness search over the discriminant's prime divisors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RamifySearch {
    Found(RamificationWitness),
    NotFound { primes_examined: Vec<u64> },
}

impl RamifySearch {
    pub fn witness(&self) -> Option<&RamificationWitness> {
        match self {
            RamifySearch::Found(w) => Some(w),
            RamifySearch::NotFound { .. } => None,
        }
    }
}

/// Tests the ordinary shape at one prime. Returns `None` when f mod p is
/// squarefree or repeats the wrong way (triple root, two double roots, a
/// repeated factor of higher degree).
pub fn ordinary_at(f: &IntPolynomial, p: u64) -> Result<Option<RamificationWitness>, RamifyError> {
    let n = f.degree();
    if n < 2 {
        return Err(RamifyError::DegreeTooSmall(n));
    }
    let fp = f.reduce_mod(p)?;
    Ok(ordinary_shape(&fp))
}

/// Structural membership test over F_p itself: the decomposition must be
/// exactly one linear part of multiplicity 2 plus (for n > 2) a squarefree
/// part of multiplicity 1 carrying the whole remaining degree.
pub fn ordinary_shape(fp: &FpPolynomial) -> Option<RamificationWitness> {
    let p = fp.modulus();
    let n = fp.degree()?;
    if n < 2 {
        return None;
    }
    let parts = fp.squarefree_decomposition().ok()?;
    let mut simple: Option<&FpPolynomial> = None;
    let mut doubled: Option<&FpPolynomial> = None;
    for (g, mult) in &parts {
        match mult {
            1 if simple.is_none() => simple = Some(g),
            2 if doubled.is_none() => doubled = Some(g),
            _ => return None,
        }
    }
    let doubled = doubled?;
    if doubled.degree() != Some(1) {
        return None;
    }
    // doubled = X − α is monic linear; α = −constant term
    let alpha = (p - doubled.coeffs()[0]) % p;
    let cofactor = match simple {
        Some(g) => g.clone(),
        None => FpPolynomial::one(p),
    };
    if cofactor.degree() != Some(n - 2) {
        return None;
    }
    if cofactor.eval(alpha) == 0 {
        return None;
    }
    Some(RamificationWitness { p, alpha, cofactor })
}

/// Searches for an ordinary prime among the prime divisors of disc(f) up to
/// `disc_bound`, in increasing order. Witnesses cannot exist elsewhere:
/// a repeated factor mod p forces p | disc(f).
pub fn find_ordinary_prime(
    f: &IntPolynomial,
    disc_bound: u64,
) -> Result<RamifySearch, RamifyError> {
    let n = f.degree();
    if n < 2 {
        return Err(RamifyError::DegreeTooSmall(n));
    }
    let disc = f.discriminant()?;
    if disc.is_zero() {
        return Err(RamifyError::DiscriminantZero);
    }
    let candidates = prime_divisors_up_to(disc.abs().magnitude(), disc_bound);
    let mut examined = Vec::with_capacity(candidates.len());
    for p in candidates {
        examined.push(p);
        if let Some(w) = ordinary_at(f, p)? {
            return Ok(RamifySearch::Found(w));
        }
    }
    Ok(RamifySearch::NotFound { primes_examined: examined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;

    fn poly(text: &str) -> IntPolynomial {
        IntPolynomial::parse(text).unwrap()
    }

    #[test]
    fn witness_at_three() {
        // x³ + x² − 2x = x(x−1)(x+2) ≡ x·(x−1)² mod 3
        let f = poly("x^3 + x^2 - 2x");
        let w = ordinary_at(&f, 3).unwrap().expect("witness at 3");
        assert_eq!(w.p, 3);
        assert_eq!(w.alpha, 1);
        assert_eq!(w.cofactor, FpPolynomial::x(3));
        assert_eq!(w.reconstruct(), f.reduce_mod(3).unwrap());
        // the increasing-order search hits p = 2 first: f ≡ x²(x+1) mod 2
        let first = find_ordinary_prime(&f, 10_000_000).unwrap();
        let w2 = first.witness().expect("disc 36 has ordinary divisors");
        assert_eq!(w2.p, 2);
        assert_eq!(w2.alpha, 0);
        assert_eq!(w2.reconstruct(), f.reduce_mod(2).unwrap());
    }

    #[test]
    fn squarefree_reduction_gives_none() {
        // x² + 1 is irreducible mod 3
        assert_eq!(ordinary_at(&poly("x^2 + 1"), 3).unwrap(), None);
    }

    #[test]
    fn quintic_witness_at_disc_divisor() {
        let f = poly("x^5 - x - 1");
        let search = find_ordinary_prime(&f, 10_000_000).unwrap();
        let w = search.witness().expect("disc 2869 = 19·151 must yield a witness");
        assert!(w.p == 19 || w.p == 151, "witness prime {}", w.p);
        assert_eq!(w.reconstruct(), f.reduce_mod(w.p).unwrap());
        assert_eq!(w.cofactor.degree(), Some(3));
        assert!(w.cofactor.is_squarefree());
        assert_ne!(w.cofactor.eval(w.alpha), 0);
        // disc(f) vanishes mod the witness prime
        assert!(f.discriminant().unwrap().mod_floor(&BigInt::from(w.p)).is_zero());
    }

    #[test]
    fn degenerate_quadratic_cofactor() {
        // x² + 1 ≡ (x+1)² mod 2: cofactor is the degree-0 constant 1
        let f = poly("x^2 + 1");
        let w = ordinary_at(&f, 2).unwrap().expect("n = 2 convention");
        assert_eq!(w.p, 2);
        assert_eq!(w.alpha, 1);
        assert!(w.cofactor.is_one());
        assert_eq!(find_ordinary_prime(&f, 10_000_000).unwrap(), RamifySearch::Found(w));
    }

    #[test]
    fn triple_root_rejected() {
        let f = poly("x^3 - 3x^2 + 3x - 1"); // (x−1)³
        for p in [2u64, 3, 5, 7] {
            assert_eq!(ordinary_at(&f, p).unwrap(), None, "p = {p}");
        }
    }

    #[test]
    fn two_double_roots_rejected() {
        // (x−1)²(x+1)² mod 5: two doubled parts
        let f = poly("x^4 - 2x^2 + 1");
        assert_eq!(ordinary_at(&f, 5).unwrap(), None);
    }

    #[test]
    fn repeated_quadratic_rejected() {
        // (x²+1)² mod 3: doubled part is not linear
        let f = poly("x^2 + 1").mul(&poly("x^2 + 1"));
        assert_eq!(ordinary_at(&f, 3).unwrap(), None);
    }

    #[test]
    fn unit_discriminant_is_not_found() {
        // disc(x² + x) = 1: no prime can be ramified
        let f = poly("x^2 + x");
        match find_ordinary_prime(&f, 10_000_000).unwrap() {
            RamifySearch::NotFound { primes_examined } => assert!(primes_examined.is_empty()),
            RamifySearch::Found(w) => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            find_ordinary_prime(&poly("x^2 + 2x + 1"), 100).unwrap_err(),
            RamifyError::DiscriminantZero
        );
        assert_eq!(ordinary_at(&poly("x + 3"), 5).unwrap_err(), RamifyError::DegreeTooSmall(1));
        assert!(matches!(
            ordinary_at(&poly("x^2 + 1"), 6).unwrap_err(),
            RamifyError::IntPoly(IntPolyError::NotPrime(6))
        ));
    }
}
