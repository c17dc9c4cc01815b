//! Exact polynomial algebra over prime fields F_p: gcd, squarefree
//! decomposition, full factorization (squarefree split → distinct-degree →
//! randomized equal-degree), and the exact counting formulas the density
//! bounds lean on.
//!
//! Polynomials are dense coefficient vectors in ascending degree order with
//! residues reduced into [0, p). The zero polynomial is the empty vector.
//! All values are immutable after construction; the only randomness is the
//! equal-degree splitting, which takes an explicit seed.

use crate::arith::{self, is_prime_u64, MAX_MODULUS};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Equal-degree splitting attempts before giving up on a product.
const MAX_SPLIT_ATTEMPTS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FfError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the machine-word limit 2^62")]
    ModulusTooLarge(u64),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined for a constant polynomial")]
    ConstantPolynomial,
    #[error("equal-degree splitting stalled after {attempts} attempts (degree {degree})")]
    SplitFailed { attempts: usize, degree: usize },
}

/// Dense polynomial over F_p, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    /// Builds a polynomial from (possibly unreduced) coefficients. Validates
    /// that `p` is a machine-word prime.
    pub fn new(p: u64, coeffs: impl IntoIterator<Item = u64>) -> Result<Self, FfError> {
        check_modulus(p)?;
        let coeffs = coeffs.into_iter().map(|c| c % p).collect();
        Ok(Self::from_reduced(p, coeffs))
    }

    /// Internal constructor: coefficients already reduced, only trimming left.
    fn from_reduced(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPolynomial { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPolynomial { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPolynomial { p, coeffs: vec![1] }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::from_reduced(p, vec![c % p])
    }

    /// The monomial X.
    pub fn x(p: u64) -> Self {
        FpPolynomial { p, coeffs: vec![0, 1] }
    }

    /// X − α.
    pub fn linear_root(p: u64, alpha: u64) -> Self {
        FpPolynomial { p, coeffs: vec![(p - alpha % p) % p, 1] }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient() == 1
    }

    fn check_same_modulus(&self, other: &Self) -> Result<(), FfError> {
        if self.p != other.p {
            return Err(FfError::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = arith::add_mod(a, b, self.p);
        }
        Self::from_reduced(self.p, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = arith::sub_mod(a, b, self.p);
        }
        Self::from_reduced(self.p, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = arith::add_mod(out[i + j], arith::mul_mod(a, b, self.p), self.p);
            }
        }
        Self::from_reduced(self.p, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        let out = self.coeffs.iter().map(|&a| arith::mul_mod(a, c, self.p)).collect();
        Self::from_reduced(self.p, out)
    }

    /// Quotient and remainder; panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        debug_assert_eq!(self.p, divisor.p);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let lead_inv = arith::inv_mod(divisor.leading_coefficient(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = arith::mul_mod(c, lead_inv, p);
            quot[i - dd] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let t = arith::mul_mod(q, d, p);
                rem[i - dd + j] = arith::sub_mod(rem[i - dd + j], t, p);
            }
        }
        (Self::from_reduced(p, quot), Self::from_reduced(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(arith::inv_mod(self.leading_coefficient(), self.p))
    }

    /// Monic greatest common divisor; gcd(a, 0) is the monic form of a.
    pub fn gcd(&self, other: &Self) -> Result<Self, FfError> {
        self.check_same_modulus(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.p);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| arith::mul_mod((i as u64) % self.p, c, self.p))
            .collect();
        Self::from_reduced(self.p, out)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = arith::add_mod(arith::mul_mod(acc, x, self.p), c, self.p);
        }
        acc
    }

    /// self^exp modulo `modulus`, square-and-multiply over the exponent bits.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &Self) -> Self {
        assert!(!modulus.is_zero());
        if exp.is_zero() {
            return Self::one(self.p);
        }
        let mut acc = Self::one(self.p);
        let base = self.rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus);
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }

    pub fn pow(&self, mut exp: usize) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// True iff gcd(f, f') = 1 (and f is nonzero).
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == Some(0) {
            return true;
        }
        self.gcd(&self.derivative()).map(|g| g.is_one()).unwrap_or(false)
    }

    /// p-th root of a polynomial lying in F_p[X^p] (all exponents with
    /// nonzero coefficients divisible by p). Over the prime field the
    /// coefficients are fixed by Frobenius, so only exponents shrink.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        let out = self.coeffs.iter().step_by(p).copied().collect();
        Self::from_reduced(self.p, out)
    }

    /// Squarefree decomposition f = unit · ∏ gᵢ^i with the gᵢ monic,
    /// squarefree and pairwise coprime. Multiplicities divisible by p are
    /// recovered through Frobenius root extraction.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(FpPolynomial, usize)>, FfError> {
        if self.is_zero() {
            return Err(FfError::ZeroPolynomial);
        }
        let mut parts = Vec::new();
        self.make_monic().sff_into(1, &mut parts)?;
        parts.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(parts)
    }

    fn sff_into(&self, scale: usize, out: &mut Vec<(FpPolynomial, usize)>) -> Result<(), FfError> {
        if self.degree() == Some(0) {
            return Ok(());
        }
        let deriv = self.derivative();
        let mut c = self.gcd(&deriv)?;
        let mut w = self.divrem(&c).0;
        let mut i = 1usize;
        while !w.is_one() {
            let y = w.gcd(&c)?;
            let part = w.divrem(&y).0;
            if part.degree().map_or(false, |d| d > 0) {
                out.push((part, i * scale));
            }
            w = y;
            c = c.divrem(&w.make_monic()).0;
            i += 1;
        }
        if !c.is_one() {
            // c lies in F_p[X^p]
            c.pth_root().sff_into(scale * self.p as usize, out)?;
        }
        Ok(())
    }

    /// Distinct-degree split of a monic squarefree polynomial: pairs
    /// (d, product of the irreducible factors of degree d), d increasing.
    pub fn distinct_degree_factorization(&self) -> Result<Vec<(usize, FpPolynomial)>, FfError> {
        if self.is_zero() {
            return Err(FfError::ZeroPolynomial);
        }
        let mut rest = self.make_monic();
        let mut out = Vec::new();
        let x = Self::x(self.p);
        let mut h = x.rem(&rest);
        let pexp = BigUint::from(self.p);
        let mut d = 0usize;
        while rest.degree().map_or(false, |n| n >= 2 * (d + 1)) {
            d += 1;
            h = h.pow_mod(&pexp, &rest);
            let g = h.sub(&x.rem(&rest)).gcd(&rest)?;
            if g.degree().map_or(false, |k| k > 0) {
                out.push((d, g.clone()));
                rest = rest.divrem(&g).0;
                h = h.rem(&rest);
            }
        }
        if rest.degree().map_or(false, |k| k > 0) {
            out.push((rest.degree().unwrap(), rest));
        }
        Ok(out)
    }

    /// Deterministic irreducibility test via the distinct-degree ladder.
    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            Some(n) => match self.distinct_degree_factorization() {
                Ok(parts) => parts.len() == 1 && parts[0].0 == n,
                Err(_) => false,
            },
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities.
    /// Randomized (Cantor–Zassenhaus equal-degree splitting) but fully
    /// deterministic for a given seed; the factor list is sorted canonically
    /// so equal inputs give identical outputs.
    pub fn factor(&self, seed: u64) -> Result<FpFactorization, FfError> {
        if self.is_zero() {
            return Err(FfError::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Err(FfError::ConstantPolynomial);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let unit = self.leading_coefficient();
        let mut factors = Vec::new();
        for (part, mult) in self.squarefree_decomposition()? {
            for (d, prod) in part.distinct_degree_factorization()? {
                for irr in equal_degree_split(&prod, d, &mut rng)? {
                    factors.push((irr, mult));
                }
            }
        }
        factors.sort_by(|a, b| {
            let da = a.0.coeffs.len();
            let db = b.0.coeffs.len();
            da.cmp(&db).then_with(|| a.0.coeffs.iter().rev().cmp(b.0.coeffs.iter().rev()))
        });
        Ok(FpFactorization { p: self.p, unit, factors })
    }
}

fn check_modulus(p: u64) -> Result<(), FfError> {
    if p >= MAX_MODULUS {
        return Err(FfError::ModulusTooLarge(p));
    }
    if !is_prime_u64(p) {
        return Err(FfError::NotPrime(p));
    }
    Ok(())
}

/// Splits a monic product of distinct irreducibles of known equal degree d.
fn equal_degree_split(
    prod: &FpPolynomial,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<FpPolynomial>, FfError> {
    let mut done = Vec::new();
    let mut pending = vec![prod.make_monic()];
    while let Some(f) = pending.pop() {
        let n = f.degree().expect("nonzero by construction");
        if n == d {
            done.push(f);
            continue;
        }
        let split = try_split(&f, d, rng)?;
        let rest = f.divrem(&split).0.make_monic();
        pending.push(split);
        pending.push(rest);
    }
    done.sort();
    Ok(done)
}

/// Finds one proper monic factor of `f` (a product of ≥ 2 irreducibles of
/// degree d), retrying up to the attempt cap.
fn try_split(f: &FpPolynomial, d: usize, rng: &mut ChaCha8Rng) -> Result<FpPolynomial, FfError> {
    let p = f.modulus();
    let n = f.degree().unwrap();
    let exponent = if p > 2 {
        (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32)
    } else {
        BigUint::zero()
    };
    for _ in 0..MAX_SPLIT_ATTEMPTS {
        let a = random_poly_below(p, n, rng);
        if a.degree().map_or(true, |k| k == 0) {
            continue;
        }
        let g = a.gcd(f)?;
        if let Some(k) = g.degree() {
            if k > 0 && k < n {
                return Ok(g);
            }
        }
        let probe = if p == 2 {
            // trace map Σ a^(2^i), i < d: lands in F_2 modulo each factor
            let mut term = a.rem(f);
            let mut trace = term.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(f);
                trace = trace.add(&term);
            }
            trace
        } else {
            a.pow_mod(&exponent, f).sub(&FpPolynomial::one(p))
        };
        let g = probe.gcd(f)?;
        if let Some(k) = g.degree() {
            if k > 0 && k < n {
                return Ok(g);
            }
        }
    }
    Err(FfError::SplitFailed { attempts: MAX_SPLIT_ATTEMPTS, degree: d })
}

fn random_poly_below(p: u64, degree_bound: usize, rng: &mut ChaCha8Rng) -> FpPolynomial {
    let coeffs: Vec<u64> = (0..degree_bound).map(|_| rng.gen_range(0..p)).collect();
    FpPolynomial::from_reduced(p, coeffs)
}

/// Factorization of a nonzero polynomial: unit times monic irreducible
/// powers. The factor list is canonically sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpFactorization {
    p: u64,
    pub unit: u64,
    pub factors: Vec<(FpPolynomial, usize)>,
}

impl FpFactorization {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Multiplies the factorization back out.
    pub fn product(&self) -> FpPolynomial {
        let mut acc = FpPolynomial::constant(self.p, self.unit);
        for (f, mult) in &self.factors {
            acc = acc.mul(&f.pow(*mult));
        }
        acc
    }

    /// Degrees of the irreducible factors, repeated with multiplicity.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (f, mult) in &self.factors {
            out.extend(std::iter::repeat(f.degree().unwrap_or(0)).take(*mult));
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// Resultant over F_p by the Euclidean ladder, actual-degree convention
/// (Res(f, g) = lc(f)^deg g · ∏ g(αᵢ) over the roots of f).
pub fn resultant(a: &FpPolynomial, b: &FpPolynomial) -> Result<u64, FfError> {
    a.check_same_modulus(b)?;
    let p = a.modulus();
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = 1u64;
    loop {
        let (da, db) = match (a.degree(), b.degree()) {
            (None, _) | (_, None) => {
                // a zero operand: resultant vanishes unless both are constants
                return Ok(0);
            }
            (Some(da), Some(db)) => (da, db),
        };
        if da == 0 && db == 0 {
            return Ok(acc);
        }
        if da == 0 {
            return Ok(arith::mul_mod(acc, arith::pow_mod(a.leading_coefficient(), db as u64, p), p));
        }
        if db == 0 {
            return Ok(arith::mul_mod(acc, arith::pow_mod(b.leading_coefficient(), da as u64, p), p));
        }
        let r = a.rem(&b);
        let dr = r.degree();
        // Res(a, b) = (−1)^(da·db) lc(b)^(da − deg r) Res(b, r)
        if da % 2 == 1 && db % 2 == 1 {
            acc = (p - acc) % p;
        }
        let drop = da - dr.map_or(0, |d| d);
        let drop = if r.is_zero() { da } else { drop };
        acc = arith::mul_mod(acc, arith::pow_mod(b.leading_coefficient(), drop as u64, p), p);
        a = b;
        b = r;
    }
}

/// Discriminant of a monic polynomial over F_p:
/// (−1)^(n(n−1)/2) · Res(f, f').
pub fn discriminant(f: &FpPolynomial) -> Result<u64, FfError> {
    let n = f.degree().ok_or(FfError::ZeroPolynomial)?;
    if n == 0 {
        return Err(FfError::ConstantPolynomial);
    }
    let p = f.modulus();
    let res = resultant(f, &f.derivative())?;
    if (n * (n - 1) / 2) % 2 == 1 {
        Ok((p - res) % p)
    } else {
        Ok(res)
    }
}

/// Number of monic irreducible polynomials of degree m over F_q, by the
/// necklace formula (1/m) Σ_{d|m} μ(d) q^(m/d). The constant polynomial 1
/// counts as the unique irreducible of degree 0. `q` may be any prime power
/// (it enters the formula as a plain integer).
pub fn count_monic_irreducible(q: u64, m: usize) -> BigUint {
    assert!(q >= 2, "q must be at least 2");
    if m == 0 {
        return BigUint::one();
    }
    let mut distinct_primes = Vec::new();
    let mut rest = m;
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            distinct_primes.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        distinct_primes.push(rest);
    }
    let q = BigUint::from(q);
    let mut positive = BigUint::zero();
    let mut negative = BigUint::zero();
    for mask in 0u32..(1 << distinct_primes.len()) {
        let mut div = 1usize;
        for (i, &pr) in distinct_primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                div *= pr;
            }
        }
        let term = q.pow((m / div) as u32);
        if mask.count_ones() % 2 == 0 {
            positive += term;
        } else {
            negative += term;
        }
    }
    let total = positive - negative;
    let (count, rem) = total.div_rem(&BigUint::from(m));
    debug_assert!(rem.is_zero(), "necklace sum must be divisible by m");
    count
}

/// Number of monic squarefree polynomials of degree m over F_q:
/// 1, q, then q^m − q^(m−1).
pub fn count_monic_squarefree(q: u64, m: usize) -> BigUint {
    assert!(q >= 2, "q must be at least 2");
    let q = BigUint::from(q);
    match m {
        0 => BigUint::one(),
        1 => q,
        _ => q.pow(m as u32) - q.pow((m - 1) as u32),
    }
}

impl fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "x")?,
                1 => write!(f, "{c}*x")?,
                _ if c == 1 => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for FpPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}
