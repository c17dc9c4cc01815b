//! Character arithmetic for the multiplicative group T = F_{ℓ^d}^×.
//!
//! A character is ψ₁^a for the fundamental character ψ₁; writing a in base ℓ
//! expresses it as ∏ ψᵢ^{eᵢ} in the d fundamental characters. The digit
//! vector is the ℓ-restricted expression (all digits ≤ ℓ−1, not all equal to
//! ℓ−1), the amplitude is the largest digit, and the Frobenius twist rotates
//! digits. Powering a character is multiplication of the residue mod
//! ℓ^d − 1; the amplitude grows exactly linearly as long as no base-ℓ carry
//! occurs.

use crate::arith::is_prime_u64;
use serde::Serialize;
use std::fmt;

/// A character of F_{ℓ^d}^× in canonical ℓ-restricted form.
///
/// The trivial character has two digit expressions (all 0 and all ℓ−1); the
/// all-(ℓ−1) representative is normalized to all-0, matching the exclusion
/// in the ℓ-restricted definition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TorusCharacter {
    l: u64,
    d: usize,
    residue: u64,
    digits: Vec<u64>,
}

/// Outcome of powering a character: the resulting character plus whether the
/// digit vector was simply scaled (no base-ℓ carries and no wrap to the
/// trivial representative), i.e. whether c·digits is itself ℓ-restricted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerOutcome {
    pub character: TorusCharacter,
    pub carry_free: bool,
}

impl TorusCharacter {
    /// The character ψ₁^a. Requires ℓ an odd prime, d ≥ 1, and ℓ^d − 1
    /// representable in a machine word; a is reduced mod ℓ^d − 1.
    pub fn from_residue(a: u64, l: u64, d: usize) -> Self {
        assert!(l > 2 && is_prime_u64(l), "ℓ must be an odd prime");
        assert!(d >= 1, "d must be at least 1");
        let modulus = group_order(l, d);
        let residue = a % modulus;
        let digits = digits_of(residue, l, d);
        TorusCharacter { l, d, residue, digits }
    }

    pub fn trivial(l: u64, d: usize) -> Self {
        Self::from_residue(0, l, d)
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Exponent a with χ = ψ₁^a, in [0, ℓ^d − 1).
    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// The ℓ-restricted digit vector (e₁, …, e_d).
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn is_trivial(&self) -> bool {
        self.residue == 0
    }

    /// max eᵢ.
    pub fn amplitude(&self) -> u64 {
        self.digits.iter().copied().max().unwrap_or(0)
    }

    /// χ^c via residue multiplication; carry_free reports whether the digits
    /// were simply scaled by c.
    pub fn power(&self, c: u64) -> PowerOutcome {
        assert!(c >= 1, "exponent must be positive");
        let modulus = group_order(self.l, self.d) as u128;
        let residue = ((self.residue as u128 * c as u128) % modulus) as u64;
        let character = TorusCharacter::from_residue(residue, self.l, self.d);
        let scaled: Option<Vec<u64>> =
            self.digits.iter().map(|&e| e.checked_mul(c)).collect();
        let carry_free = match scaled {
            Some(v) => is_l_restricted(&v, self.l) && character.digits == v,
            None => false,
        };
        PowerOutcome { character, carry_free }
    }

    /// Frobenius twist: ψᵢ ↦ ψ_{i+1} cyclically, i.e. residue · ℓ. The
    /// amplitude and ℓ-restriction are invariant.
    pub fn frobenius_twist(&self) -> TorusCharacter {
        let modulus = group_order(self.l, self.d) as u128;
        let residue = ((self.residue as u128 * self.l as u128) % modulus) as u64;
        TorusCharacter::from_residue(residue, self.l, self.d)
    }
}

impl fmt::Display for TorusCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi^{} digits (", self.residue)?;
        for (i, e) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// |T| = ℓ^d − 1, with an overflow guard.
pub fn group_order(l: u64, d: usize) -> u64 {
    let order = (l as u128).pow(d as u32) - 1;
    u64::try_from(order).expect("ℓ^d − 1 must fit a machine word")
}

/// Base-ℓ digits of a residue in [0, ℓ^d − 1), least-significant first.
/// Such a residue is automatically ℓ-restricted: all digits equal to ℓ−1
/// would mean a = ℓ^d − 1, which reduces to 0.
fn digits_of(mut a: u64, l: u64, d: usize) -> Vec<u64> {
    let mut digits = Vec::with_capacity(d);
    for _ in 0..d {
        digits.push(a % l);
        a /= l;
    }
    debug_assert_eq!(a, 0);
    digits
}

/// True iff every digit lies in [0, ℓ−1] and at least one is < ℓ−1.
pub fn is_l_restricted(digits: &[u64], l: u64) -> bool {
    digits.iter().all(|&e| e <= l - 1) && digits.iter().any(|&e| e < l - 1)
}

/// A representation modeled as its multiset of characters; the amplitude is
/// the maximum over members. No matrix realization is built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterMultiset {
    pub characters: Vec<TorusCharacter>,
}

impl CharacterMultiset {
    pub fn new(characters: Vec<TorusCharacter>) -> Self {
        CharacterMultiset { characters }
    }

    pub fn amplitude(&self) -> u64 {
        self.characters.iter().map(TorusCharacter::amplitude).max().unwrap_or(0)
    }
}
