//! Monic integer polynomials with arbitrary-precision coefficients: the
//! objects the certification pipeline runs on. Provides parsing from either
//! a bracketed coefficient list or a plain expression in `x`, the height,
//! the exact discriminant (subresultant pseudo-remainder sequence, no
//! rational arithmetic), and reduction modulo primes.

use crate::arith::is_prime_u64;
use crate::ffpoly::{FfError, FpPolynomial};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde::Deserialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected `{token}` at position {position}")]
    Malformed { position: usize, token: String },
    #[error("polynomial is not monic: leading coefficient is {leading}")]
    NonMonic { leading: String },
    #[error("polynomial must have degree at least 1")]
    DegreeZero,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntPolyError {
    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Field(#[from] FfError),
}

/// Height of a monic integer polynomial: max |aᵢ| over the non-leading
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Height(pub BigUint);

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A monic polynomial in Z[X] of degree ≥ 1. Coefficients are stored in
/// ascending degree order; the last entry is always 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds from ascending coefficients; rejects non-monic input and
    /// degree 0. The sequence is taken literally, so a trailing zero is a
    /// non-monic leading coefficient.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, ParseError> {
        if coeffs.len() < 2 {
            return Err(ParseError::DegreeZero);
        }
        let lead = coeffs.last().unwrap();
        if !lead.is_one() {
            return Err(ParseError::NonMonic { leading: lead.to_string() });
        }
        Ok(IntPolynomial { coeffs })
    }

    /// Parses either `[a0,a1,...,1]` (ascending coefficient list) or an
    /// expression such as `x^5 - x - 1`. Both forms of the same polynomial
    /// parse identically.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        if text.trim_start().starts_with('[') {
            parse_coeff_list(text)
        } else {
            parse_expression(text)
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// max |aᵢ| over 0 ≤ i < n (the leading 1 is excluded).
    pub fn height(&self) -> Height {
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_else(BigUint::zero);
        Height(max)
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative_coeffs(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect()
    }

    /// Product of two monic polynomials (used to manufacture reducible test
    /// inputs).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial { coeffs: out }
    }

    /// Exact discriminant: (−1)^(n(n−1)/2) · Res(f, f'), computed by the
    /// subresultant pseudo-remainder sequence over Z.
    pub fn discriminant(&self) -> Result<BigInt, IntPolyError> {
        let n = self.degree();
        if n < 2 {
            return Err(IntPolyError::DegreeTooSmall { min: 2, got: n });
        }
        let res = resultant(&self.coeffs, &self.derivative_coeffs());
        if (n * (n - 1) / 2) % 2 == 1 {
            Ok(-res)
        } else {
            Ok(res)
        }
    }

    /// Reduction modulo a prime p; the result is monic of the same degree.
    pub fn reduce_mod(&self, p: u64) -> Result<FpPolynomial, IntPolyError> {
        if !is_prime_u64(p) {
            return Err(IntPolyError::NotPrime(p));
        }
        let pb = BigInt::from(p);
        let coeffs: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits u64"))
            .collect();
        Ok(FpPolynomial::new(p, coeffs)?)
    }

    /// Coefficients as decimal strings, ascending: the canonical report and
    /// on-disk form (big integers are never serialized as floats).
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.sign() == Sign::Minus {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.sign() == Sign::Minus {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && i > 0;
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CoeffVisitor;
        impl<'de> Visitor<'de> for CoeffVisitor {
            type Value = IntPolynomial;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an ascending list of decimal coefficient strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(s) = seq.next_element::<String>()? {
                    let c = BigInt::from_str(&s).map_err(de::Error::custom)?;
                    coeffs.push(c);
                }
                IntPolynomial::new(coeffs).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_seq(CoeffVisitor)
    }
}

/// Resultant of two integer polynomials (ascending coefficient slices) by
/// the subresultant PRS. All divisions are exact in Z.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    let (da, db) = (deg(&a), deg(&b));
    match (da, db) {
        (None, None) => return BigInt::one(),
        (None, Some(d)) | (Some(d), None) => {
            return if d == 0 { BigInt::one() } else { BigInt::zero() }
        }
        _ => {}
    }
    let mut sign = BigInt::one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da.unwrap() % 2 == 1 && db.unwrap() % 2 == 1 {
            sign = -sign;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = deg(&a).unwrap();
        let db = match deg(&b) {
            None => return BigInt::zero(),
            Some(0) => {
                // Res(a, const) = const^deg a, corrected by the running
                // content factor h^(deg a − 1)
                let base = b[0].clone();
                let num = base.pow(da as u32);
                if da >= 1 {
                    let denom = h.pow((da - 1) as u32);
                    debug_assert!((&num % &denom).is_zero());
                    return sign * (num / denom);
                }
                return sign * num;
            }
            Some(d) => d,
        };
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = pseudo_rem(&a, &b);
        let divisor = &g * h.pow(delta as u32);
        let next_b = trim(r.into_iter().map(|c| exact_div(c, &divisor)).collect());
        a = std::mem::take(&mut b);
        b = next_b;
        g = a.last().cloned().unwrap_or_else(BigInt::one);
        if delta >= 1 {
            let num = g.pow(delta as u32);
            let denom = h.pow((delta - 1) as u32);
            h = exact_div(num, &denom);
        }
    }
}

fn deg(c: &[BigInt]) -> Option<usize> {
    c.len().checked_sub(1)
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
    c
}

fn exact_div(n: BigInt, d: &BigInt) -> BigInt {
    debug_assert!((&n % d).is_zero(), "subresultant division must be exact");
    n / d
}

/// Pseudo-remainder: lc(b)^(deg a − deg b + 1) · a reduced by b.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let lc_b = b.last().unwrap().clone();
    let mut r = a.to_vec();
    for i in (db..=da).rev() {
        // scale the whole remainder once per step so the subtraction is
        // integral
        for (j, c) in r.iter_mut().enumerate() {
            if j != i {
                *c *= &lc_b;
            }
        }
        let lead = std::mem::replace(&mut r[i], BigInt::zero());
        for (j, bc) in b[..db].iter().enumerate() {
            r[i - db + j] -= &lead * bc;
        }
        r[i] = BigInt::zero();
    }
    r.truncate(db);
    r
}

fn parse_coeff_list(text: &str) -> Result<IntPolynomial, ParseError> {
    let trimmed = text.trim();
    let open = text.find('[').unwrap();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or(ParseError::Malformed {
            position: open,
            token: "unterminated coefficient list".into(),
        })?;
    let mut coeffs = Vec::new();
    for part in inner.split(',') {
        let s = part.trim();
        if s.is_empty() {
            return Err(ParseError::Malformed {
                position: part_offset(text, part),
                token: "empty coefficient".into(),
            });
        }
        let c = BigInt::from_str(s).map_err(|_| ParseError::Malformed {
            position: part_offset(text, part),
            token: s.into(),
        })?;
        coeffs.push(c);
    }
    finish(coeffs)
}

fn part_offset(text: &str, part: &str) -> usize {
    // byte offset of the subslice within the original input
    (part.as_ptr() as usize).saturating_sub(text.as_ptr() as usize)
}

/// Expression grammar: sum of terms `c`, `c*x^k`, `c x^k` (digit-adjacent
/// `*` optional), `x^k`, `x`, with integer literals and ASCII `+`/`-`.
fn parse_expression(text: &str) -> Result<IntPolynomial, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut terms: Vec<(usize, BigInt)> = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(ParseError::Malformed { position: 0, token: "empty input".into() });
    }
    let mut first_term = true;
    while pos < bytes.len() {
        // sign
        let mut negative = false;
        skip_ws(&mut pos);
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            negative = bytes[pos] == b'-';
            pos += 1;
        } else if !first_term {
            return Err(ParseError::Malformed {
                position: pos,
                token: char_at(text, pos),
            });
        }
        first_term = false;
        skip_ws(&mut pos);
        // coefficient
        let mut coeff: Option<BigInt> = None;
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let c = BigInt::from_str(&text[start..pos]).expect("digits parse");
            coeff = Some(c);
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip_ws(&mut pos);
                if pos == bytes.len() || bytes[pos] != b'x' {
                    return Err(ParseError::Malformed {
                        position: pos,
                        token: char_at(text, pos),
                    });
                }
            }
        }
        // variable part
        let mut power = 0usize;
        if pos < bytes.len() && bytes[pos] == b'x' {
            pos += 1;
            power = 1;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                skip_ws(&mut pos);
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(ParseError::Malformed {
                        position: pos,
                        token: char_at(text, pos),
                    });
                }
                power = text[start..pos].parse().map_err(|_| ParseError::Malformed {
                    position: start,
                    token: text[start..pos].into(),
                })?;
            }
        } else if coeff.is_none() {
            return Err(ParseError::Malformed { position: pos, token: char_at(text, pos) });
        }
        let mut c = coeff.unwrap_or_else(BigInt::one);
        if negative {
            c = -c;
        }
        terms.push((power, c));
        skip_ws(&mut pos);
    }
    let degree = terms.iter().map(|&(p, _)| p).max().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    for (p, c) in terms {
        coeffs[p] += c;
    }
    finish(trim(coeffs))
}

fn char_at(text: &str, pos: usize) -> String {
    text[pos..].chars().next().map(|c| c.to_string()).unwrap_or_else(|| "end of input".into())
}

fn finish(coeffs: Vec<BigInt>) -> Result<IntPolynomial, ParseError> {
    IntPolynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> IntPolynomial {
        IntPolynomial::parse(text).unwrap()
    }

    fn big(coeffs: &[i64]) -> Vec<BigInt> {
        coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn parse_expression_forms() {
        let f = p("x^5 - x - 1");
        assert_eq!(f.coeffs(), &big(&[-1, -1, 0, 0, 0, 1])[..]);
        assert_eq!(p("[-1,-1,0,0,0,1]"), f);
        assert_eq!(p("x^5-x-1"), f);
        assert_eq!(p("1*x^5 - 1*x - 1"), f);
        assert_eq!(p("-1 - x + x^5"), f);
        assert_eq!(p("x^3 + 7x - 12").coeffs(), &big(&[-12, 7, 0, 1])[..]);
        assert_eq!(p("x^2").coeffs(), &big(&[0, 0, 1])[..]);
        // repeated powers accumulate
        assert_eq!(p("x^2 + x + x"), p("x^2 + 2x"));
    }

    #[test]
    fn parse_rejections() {
        assert_eq!(
            IntPolynomial::parse("2*x^2+1").unwrap_err(),
            ParseError::NonMonic { leading: "2".into() }
        );
        assert_eq!(IntPolynomial::parse("5").unwrap_err(), ParseError::DegreeZero);
        assert_eq!(IntPolynomial::parse("x - x").unwrap_err(), ParseError::DegreeZero);
        match IntPolynomial::parse("x^2 + y") {
            Err(ParseError::Malformed { position, token }) => {
                assert_eq!(position, 6);
                assert_eq!(token, "y");
            }
            other => panic!("expected malformed error, got {other:?}"),
        }
        match IntPolynomial::parse("[1, oops, 1]") {
            Err(ParseError::Malformed { token, .. }) => assert_eq!(token, "oops"),
            other => panic!("expected malformed error, got {other:?}"),
        }
        assert_eq!(
            IntPolynomial::parse("[3,1,2]").unwrap_err(),
            ParseError::NonMonic { leading: "2".into() }
        );
    }

    #[test]
    fn height_examples() {
        assert_eq!(p("x^5 - x - 1").height(), Height(BigUint::from(1u32)));
        assert_eq!(p("x^3 + 7x - 12").height(), Height(BigUint::from(12u32)));
        assert_eq!(p("x^2").height(), Height(BigUint::zero()));
    }

    #[test]
    fn discriminant_examples() {
        // quadratic: b² − 4c
        for (b, c) in [(3i64, 2i64), (0, -1), (5, 5), (-7, 3)] {
            let f = IntPolynomial::new(big(&[c, b, 1])).unwrap();
            assert_eq!(f.discriminant().unwrap(), BigInt::from(b * b - 4 * c));
        }
        assert_eq!(p("x^3 - x").discriminant().unwrap(), BigInt::from(4));
        assert_eq!(p("x^5 - x - 1").discriminant().unwrap(), BigInt::from(2869));
        assert_eq!(p("x^2 + 1").discriminant().unwrap(), BigInt::from(-4));
        // not squarefree ⇒ zero
        assert_eq!(p("x^2 + 2x + 1").discriminant().unwrap(), BigInt::zero());
        assert_eq!(
            p("x + 1").discriminant().unwrap_err(),
            IntPolyError::DegreeTooSmall { min: 2, got: 1 }
        );
    }

    #[test]
    fn discriminant_matches_trinomial_oracle() {
        // disc(x^n + a·x + b) =
        //   (−1)^(n(n−1)/2) (n^n b^(n−1) + (−1)^(n−1) (n−1)^(n−1) a^n)
        for n in [3usize, 4, 5, 6, 7] {
            for (a, b) in [(-1i64, -1i64), (1, 1), (2, -3), (-5, 7), (0, 2)] {
                let mut coeffs = vec![BigInt::zero(); n + 1];
                coeffs[0] = BigInt::from(b);
                coeffs[1] = BigInt::from(a);
                coeffs[n] = BigInt::one();
                let f = IntPolynomial::new(coeffs).unwrap();
                let nn = BigInt::from(n);
                let inner = nn.pow(n as u32) * BigInt::from(b).pow((n - 1) as u32)
                    + BigInt::from(-1).pow((n - 1) as u32)
                        * BigInt::from(n - 1).pow((n - 1) as u32)
                        * BigInt::from(a).pow(n as u32);
                let sign = BigInt::from(-1).pow((n * (n - 1) / 2) as u32);
                assert_eq!(f.discriminant().unwrap(), sign * inner, "n={n} a={a} b={b}");
            }
        }
    }

    #[test]
    fn discriminant_matches_root_products() {
        // ∏_{i<j} (rᵢ − rⱼ)² for split polynomials with known roots
        let roots: [&[i64]; 4] = [&[0, 1, -1], &[2, 3], &[1, 2, 3, 4], &[-2, 0, 5]];
        for rs in roots {
            let mut f = IntPolynomial::new(big(&[-rs[0], 1])).unwrap();
            for &r in &rs[1..] {
                f = f.mul(&IntPolynomial::new(big(&[-r, 1])).unwrap());
            }
            let mut expect = BigInt::one();
            for i in 0..rs.len() {
                for j in (i + 1)..rs.len() {
                    let d = BigInt::from(rs[i] - rs[j]);
                    expect *= &d * &d;
                }
            }
            assert_eq!(f.discriminant().unwrap(), expect, "roots {rs:?}");
        }
    }

    #[test]
    fn reduce_mod_examples() {
        let f = p("x^5 - x - 1").reduce_mod(2).unwrap();
        assert_eq!(f, FpPolynomial::new(2, [1, 1, 0, 0, 0, 1]).unwrap());
        let f = p("x^3 + x^2 - 2x").reduce_mod(3).unwrap();
        assert_eq!(f, FpPolynomial::new(3, [0, 1, 1, 1]).unwrap());
        let f = p("x^2 - 4").reduce_mod(2).unwrap();
        assert_eq!(f, FpPolynomial::new(2, [0, 0, 1]).unwrap());
        assert_eq!(p("x^2").reduce_mod(6).unwrap_err(), IntPolyError::NotPrime(6));
    }

    #[test]
    fn display_round_trips() {
        for text in ["x^5 - x - 1", "x^3 + 7x - 12", "x^2", "x^4 - 2x^2 + 1"] {
            let f = p(text);
            assert_eq!(IntPolynomial::parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn serde_uses_decimal_strings() {
        let f = p("x^5 - x - 1");
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"["-1","-1","0","0","0","1"]"#);
        let back: IntPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
