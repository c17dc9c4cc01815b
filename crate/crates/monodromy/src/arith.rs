//! Shared integer arithmetic: machine-word modular operations, primality
//! testing, prime iteration, and factoring of big-integer discriminants.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Largest modulus accepted for prime-field arithmetic: products of two
/// residues must fit in a `u128`.
pub const MAX_MODULUS: u64 = 1 << 62;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse by extended Euclid; `a` must be coprime to `m`.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r.abs(), 1, "inv_mod: arguments not coprime");
    old_s.rem_euclid(m as i128) as u64
}

/// Deterministic Miller–Rabin for `u64` (the standard seven-witness set
/// covers the full range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &[2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sequential primes 2, 3, 5, … via trial testing. The certification scans
/// never reach far enough for a sieve to pay off.
#[derive(Debug, Clone)]
pub struct PrimeIter {
    next: u64,
}

impl PrimeIter {
    pub fn new() -> Self {
        PrimeIter { next: 2 }
    }
}

impl Default for PrimeIter {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            let n = self.next;
            self.next = if n == 2 { 3 } else { n + 2 };
            if is_prime_u64(n) {
                return Some(n);
            }
        }
    }
}

/// Miller–Rabin for big integers: deterministic below 2^64, otherwise a
/// fixed witness panel (ample for discriminant-sized inputs).
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn next_candidate(c: u64) -> u64 {
    match c {
        2 => 3,
        3 => 5,
        c if c % 6 == 5 => c + 2,
        c => c + 4,
    }
}

/// Prime divisors of `n` that are ≤ `bound`, in increasing order.
///
/// Trial division runs over 2, 3 and 6k±1 candidates up to min(bound, 2^16);
/// Pollard rho (iteration-capped) then picks apart the remaining cofactor to
/// recover any divisors between 2^16 and `bound`. If rho stalls, divisors
/// hiding in the unsplit cofactor are silently missed; the cap is generous
/// enough that this does not occur at the scales the callers run.
pub fn prime_divisors_up_to(n: &BigUint, bound: u64) -> Vec<u64> {
    let mut divisors = Vec::new();
    if n.is_zero() || n.is_one() {
        return divisors;
    }
    let mut rest = n.clone();
    let trial_bound = bound.min(1 << 16);
    let mut cand = 2u64;
    while cand <= trial_bound {
        if rest.is_one() {
            return divisors;
        }
        if let Some(m) = rest.to_u64() {
            if cand.saturating_mul(cand) > m {
                // remaining cofactor is prime
                if m > 1 && m <= bound {
                    divisors.push(m);
                }
                return divisors;
            }
        }
        if (&rest % cand).is_zero() {
            divisors.push(cand);
            let cb = BigUint::from(cand);
            while (&rest % &cb).is_zero() {
                rest /= &cb;
            }
        }
        cand = next_candidate(cand);
    }
    if trial_bound == bound {
        // every divisor ≤ bound was already trial-divided out
        return divisors;
    }
    // split the cofactor; all its prime factors exceed the trial bound
    let mut stack = vec![rest];
    let mut iteration_budget: u64 = 1 << 21;
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime_big(&m) {
            if let Some(p) = m.to_u64() {
                if p <= bound {
                    divisors.push(p);
                }
            }
            continue;
        }
        if let Some(d) = pollard_rho(&m, &mut iteration_budget) {
            let q = &m / &d;
            stack.push(d);
            stack.push(q);
        }
        // stalled: give up on this cofactor
    }
    divisors.sort_unstable();
    divisors.dedup();
    divisors
}

/// Pollard rho with Floyd cycle detection; returns a nontrivial divisor or
/// `None` when the shared iteration budget runs out. `n` must be odd and
/// composite.
fn pollard_rho(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u64..20 {
        if *budget == 0 {
            return None;
        }
        let cbig = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cbig) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return Some(d);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = PrimeIter::new().take(10).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime_u64(2_869 / 19)); // 151
        assert!(!is_prime_u64(2_869));
        assert!(is_prime_u64((1 << 61) - 1)); // Mersenne prime
        assert!(!is_prime_u64((1 << 62) - 1));
    }

    #[test]
    fn inverse_and_pow() {
        for m in [5u64, 97, 1_000_000_007] {
            for a in 1..30u64 {
                if a % m == 0 {
                    continue;
                }
                assert_eq!(mul_mod(a % m, inv_mod(a % m, m), m), 1);
            }
        }
        assert_eq!(pow_mod(3, 100, 101), 1); // Fermat
    }

    #[test]
    fn divisor_extraction() {
        let n = BigUint::from(2_869u64); // 19 · 151
        assert_eq!(prime_divisors_up_to(&n, 10_000_000), vec![19, 151]);
        assert_eq!(prime_divisors_up_to(&n, 100), vec![19]);
        let n = BigUint::from(2u64).pow(5) * BigUint::from(3u64) * BigUint::from(1_000_003u64);
        assert_eq!(prime_divisors_up_to(&n, 10_000_000), vec![2, 3, 1_000_003]);
        // a product of two ~40-bit primes: rho territory
        let p = 1_099_511_627_791u64; // 2^40 + 15
        let q = 1_099_511_627_689u64;
        assert!(is_prime_u64(p) && is_prime_u64(q));
        let n = BigUint::from(p) * BigUint::from(q) * BigUint::from(7u64);
        assert_eq!(prime_divisors_up_to(&n, 7), vec![7]);
    }
}
