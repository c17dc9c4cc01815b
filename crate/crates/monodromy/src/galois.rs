//! Certification that the splitting field of f has Galois group S_n, from
//! Frobenius cycle types at unramified primes.
//!
//! The factor degrees of f mod p at an unramified prime p are the cycle type
//! of a Frobenius element of the splitting field (Dedekind). Three kinds of
//! witness suffice:
//!
//! * an n-cycle (f irreducible mod p) forces transitivity;
//! * an (n−1)-cycle fixing a point forces double transitivity, hence
//!   primitivity;
//! * a type with exactly one part 2 and all other parts odd yields a
//!   transposition after raising to the odd lcm of the odd parts,
//!   and a primitive group containing a transposition is all of S_n.
//!
//! The method is one-sided: `Unknown` means "not certified within budget",
//! never "not S_n".

use crate::arith::PrimeIter;
use crate::intpoly::{IntPolyError, IntPolynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GaloisError {
    #[error("prime {0} is ramified: f mod {0} is not squarefree")]
    RamifiedPrime(u64),
    #[error("f is not squarefree over Q (discriminant is zero)")]
    NotSquarefree,
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error(transparent)]
    IntPoly(#[from] IntPolyError),
}

/// Multiset of factor degrees of f mod p, stored descending. At an
/// unramified prime this is the cycle type of Frobenius.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    /// Parts must be positive and nonempty; they are sorted descending.
    pub fn new(mut parts: Vec<usize>) -> Self {
        assert!(!parts.is_empty() && parts.iter().all(|&k| k > 0));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Sum of the parts: the degree n.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in &self.parts {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl Serialize for CycleType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessClass {
    NCycle,
    AlmostNCycle,
    TranspositionYielding,
    Uninformative,
}

impl fmt::Display for WitnessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WitnessClass::NCycle => "n-cycle",
            WitnessClass::AlmostNCycle => "almost-n-cycle",
            WitnessClass::TranspositionYielding => "transposition-yielding",
            WitnessClass::Uninformative => "uninformative",
        };
        f.write_str(s)
    }
}

/// Classifies a cycle type. The transposition check precedes the
/// almost-n-cycle check so that {2, 1} at n = 3 counts as
/// transposition-yielding, which is the class the n = 3 certification
/// actually needs; the two coincide only there.
pub fn classify(t: &CycleType) -> WitnessClass {
    let n = t.n();
    let parts = t.parts();
    if parts == [n] {
        return WitnessClass::NCycle;
    }
    let twos = parts.iter().filter(|&&k| k == 2).count();
    if twos == 1 && parts.iter().all(|&k| k == 2 || k % 2 == 1) {
        return WitnessClass::TranspositionYielding;
    }
    if parts.len() == 2 && parts[0] == n - 1 && parts[1] == 1 {
        return WitnessClass::AlmostNCycle;
    }
    WitnessClass::Uninformative
}

/// One recorded (prime, cycle type) observation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleTypeWitness {
    pub p: u64,
    pub cycle_type: CycleType,
    pub class: WitnessClass,
}

/// Auditable evidence that Gal(f) = S_n: one witness of each class required
/// for the degree, reproducible by re-factoring f mod the witness primes.
#[derive(Debug, Clone, Serialize)]
pub struct SnCertificate {
    pub poly: IntPolynomial,
    pub group: String,
    pub n: usize,
    pub witnesses: Vec<CycleTypeWitness>,
    pub primes_scanned: u64,
}

/// Outcome of a certification run. `Unknown` carries the histogram of
/// observed cycle types; it is not a refutation.
#[derive(Debug, Clone)]
pub enum CertifyOutcome {
    Certified(SnCertificate),
    Unknown { histogram: BTreeMap<CycleType, u64>, primes_scanned: u64 },
}

impl CertifyOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, CertifyOutcome::Certified(_))
    }
}

/// Cycle type of Frobenius at p: the factor degrees of f mod p. Errors with
/// `RamifiedPrime` when f mod p is not squarefree. Deterministic:
/// distinct-degree splitting alone determines the degree multiset.
pub fn cycle_type(f: &IntPolynomial, p: u64) -> Result<CycleType, GaloisError> {
    let fp = f.reduce_mod(p)?;
    if !fp.is_squarefree() {
        return Err(GaloisError::RamifiedPrime(p));
    }
    let mut parts = Vec::new();
    for (d, prod) in fp.distinct_degree_factorization().map_err(IntPolyError::Field)? {
        let k = prod.degree().unwrap_or(0);
        debug_assert_eq!(k % d, 0);
        parts.extend(std::iter::repeat(d).take(k / d));
    }
    Ok(CycleType::new(parts))
}

/// Witness classes required to conclude S_n at degree n.
fn required_classes(n: usize) -> &'static [WitnessClass] {
    match n {
        2 => &[WitnessClass::NCycle],
        3 => &[WitnessClass::NCycle, WitnessClass::TranspositionYielding],
        _ => &[
            WitnessClass::NCycle,
            WitnessClass::AlmostNCycle,
            WitnessClass::TranspositionYielding,
        ],
    }
}

/// Scans primes 2, 3, 5, … in order, skipping ramified ones, until a witness
/// of each required class is found or `prime_budget` unramified primes have
/// been examined. The budget counts unramified primes only, so heavily
/// ramified polynomials are not starved. The seed is accepted for interface
/// stability; the scan itself is deterministic.
pub fn certify_sn(
    f: &IntPolynomial,
    prime_budget: u64,
    seed: u64,
) -> Result<CertifyOutcome, GaloisError> {
    let _ = seed;
    let n = f.degree();
    if n < 2 {
        return Err(GaloisError::DegreeTooSmall(n));
    }
    let disc = f.discriminant()?;
    if disc.is_zero() {
        return Err(GaloisError::NotSquarefree);
    }
    let required = required_classes(n);
    let mut found: Vec<Option<CycleTypeWitness>> = vec![None; required.len()];
    let mut histogram: BTreeMap<CycleType, u64> = BTreeMap::new();
    let mut scanned = 0u64;
    for p in PrimeIter::new() {
        if scanned >= prime_budget {
            break;
        }
        if ramified(&disc, p) {
            continue;
        }
        scanned += 1;
        let t = cycle_type(f, p).expect("disc nonzero mod p implies unramified");
        let class = classify(&t);
        *histogram.entry(t.clone()).or_insert(0) += 1;
        if let Some(slot) = required.iter().position(|&c| c == class) {
            if found[slot].is_none() {
                found[slot] = Some(CycleTypeWitness { p, cycle_type: t, class });
            }
        }
        if found.iter().all(Option::is_some) {
            return Ok(CertifyOutcome::Certified(SnCertificate {
                poly: f.clone(),
                group: "Sn".to_string(),
                n,
                witnesses: found.into_iter().map(Option::unwrap).collect(),
                primes_scanned: scanned,
            }));
        }
    }
    Ok(CertifyOutcome::Unknown { histogram, primes_scanned: scanned })
}

/// p is ramified for f exactly when p divides disc(f): for monic f the
/// discriminant commutes with reduction mod p.
fn ramified(disc: &BigInt, p: u64) -> bool {
    disc.mod_floor(&BigInt::from(p)).to_u64() == Some(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str) -> IntPolynomial {
        IntPolynomial::parse(text).unwrap()
    }

    #[test]
    fn cycle_type_examples() {
        let f = poly("x^5 - x - 1");
        assert_eq!(cycle_type(&f, 2).unwrap(), CycleType::new(vec![2, 3]));
        assert_eq!(cycle_type(&poly("x^2 + 1"), 5).unwrap(), CycleType::new(vec![1, 1]));
        assert_eq!(cycle_type(&f, 19).unwrap_err(), GaloisError::RamifiedPrime(19));
        assert_eq!(cycle_type(&f, 151).unwrap_err(), GaloisError::RamifiedPrime(151));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&CycleType::new(vec![5])), WitnessClass::NCycle);
        assert_eq!(classify(&CycleType::new(vec![4, 1])), WitnessClass::AlmostNCycle);
        assert_eq!(
            classify(&CycleType::new(vec![2, 3])),
            WitnessClass::TranspositionYielding
        );
        // n = 3 overlap resolves toward the transposition class
        assert_eq!(
            classify(&CycleType::new(vec![2, 1])),
            WitnessClass::TranspositionYielding
        );
        assert_eq!(classify(&CycleType::new(vec![2, 2, 1])), WitnessClass::Uninformative);
        assert_eq!(classify(&CycleType::new(vec![4, 2])), WitnessClass::Uninformative);
        assert_eq!(
            classify(&CycleType::new(vec![2, 1, 1, 3])),
            WitnessClass::TranspositionYielding
        );
        assert_eq!(classify(&CycleType::new(vec![2])), WitnessClass::NCycle);
    }

    #[test]
    fn certify_quintic() {
        let f = poly("x^5 - x - 1");
        match certify_sn(&f, 100, 0).unwrap() {
            CertifyOutcome::Certified(cert) => {
                assert_eq!(cert.n, 5);
                assert_eq!(cert.witnesses.len(), 3);
                for w in &cert.witnesses {
                    // reproducible: re-derive the stored type
                    assert_eq!(cycle_type(&f, w.p).unwrap(), w.cycle_type);
                    assert_eq!(classify(&w.cycle_type), w.class);
                }
            }
            CertifyOutcome::Unknown { .. } => panic!("x^5 - x - 1 must certify"),
        }
    }

    #[test]
    fn certify_quadratic() {
        match certify_sn(&poly("x^2 + x + 1"), 10, 0).unwrap() {
            CertifyOutcome::Certified(cert) => {
                assert_eq!(cert.witnesses.len(), 1);
                assert_eq!(cert.witnesses[0].cycle_type, CycleType::new(vec![2]));
                assert_eq!(cert.witnesses[0].p, 2);
            }
            CertifyOutcome::Unknown { .. } => panic!("x^2 + x + 1 must certify"),
        }
    }

    #[test]
    fn reducible_never_certifies() {
        // (x²+1)(x³+2)
        let f = poly("x^2 + 1").mul(&poly("x^3 + 2"));
        match certify_sn(&f, 500, 0).unwrap() {
            CertifyOutcome::Unknown { histogram, .. } => {
                assert!(histogram.keys().all(|t| t.parts() != [5]));
            }
            CertifyOutcome::Certified(_) => panic!("reducible polynomial certified"),
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            certify_sn(&poly("x^2 + 2x + 1"), 10, 0).unwrap_err(),
            GaloisError::NotSquarefree
        );
        assert_eq!(certify_sn(&poly("x + 1"), 10, 0).unwrap_err(), GaloisError::DegreeTooSmall(1));
    }

    #[test]
    fn cubic_with_cyclic_group_stays_unknown() {
        // x³ − 3x − 1 has square discriminant 81: Galois group C_3
        let f = poly("x^3 - 3x - 1");
        assert_eq!(f.discriminant().unwrap(), BigInt::from(81));
        match certify_sn(&f, 200, 0).unwrap() {
            CertifyOutcome::Unknown { histogram, .. } => {
                // only 3-cycles and identities occur for C_3
                for t in histogram.keys() {
                    assert!(t.parts() == [3] || t.parts() == [1, 1, 1]);
                }
            }
            CertifyOutcome::Certified(_) => panic!("C_3 cubic certified as S_3"),
        }
    }

    #[test]
    fn chebotarev_five_cycle_fraction() {
        // fraction of 5-cycles among the first 10^4 unramified primes for
        // x^5 − x − 1 should sit near 1/5 (|C(5-cycles)|/|S_5| = 24/120)
        let f = poly("x^5 - x - 1");
        let disc = f.discriminant().unwrap();
        let mut scanned = 0u64;
        let mut five_cycles = 0u64;
        for p in PrimeIter::new() {
            if scanned == 10_000 {
                break;
            }
            if ramified(&disc, p) {
                continue;
            }
            scanned += 1;
            if cycle_type(&f, p).unwrap().parts() == [5] {
                five_cycles += 1;
            }
        }
        let fraction = five_cycles as f64 / 10_000.0;
        assert!((fraction - 0.20).abs() < 0.03, "observed {fraction}");
    }
}
