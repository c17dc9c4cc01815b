//! Density experiments over height-bounded families of monic polynomials:
//! how often the two certifications fail, the exact local densities
//! |Ω_p|/pⁿ they are driven by, and the large-sieve sum governing the
//! expected failure rate.
//!
//! Everything here is reproducible by construction: exhaustive enumeration
//! is index-addressed, sampling is seeded, per-polynomial seeds derive from
//! the experiment seed and the polynomial's canonical index, and the
//! parallel reduction is a commutative count merge, so worker count never
//! changes a report.

use crate::galois::{self, CertifyOutcome};
use crate::intpoly::IntPolynomial;
use crate::ramify::{self, ordinary_shape, RamifySearch};
use crate::ffpoly::{count_monic_irreducible, count_monic_squarefree, FpPolynomial};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SieveError {
    #[error("work limit exceeded: needs {needed} units, limit is {limit} (set MONODROMY_WORK_LIMIT to raise)")]
    WorkLimitExceeded { needed: BigUint, limit: u64 },
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("reports not comparable: {0}")]
    MismatchedReports(String),
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
}

/// Default enumeration cap; the `MONODROMY_WORK_LIMIT` environment variable
/// overrides it.
pub fn default_work_limit() -> u64 {
    std::env::var("MONODROMY_WORK_LIMIT")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000_000)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

/// The family F_n(T): monic degree-n integer polynomials with every
/// non-leading coefficient in [−T, T]. Its exact size is (2T+1)ⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub n: usize,
    pub t: u64,
    pub mode: FamilyMode,
}

impl FamilySpec {
    pub fn exhaustive(n: usize, t: u64) -> Self {
        FamilySpec { n, t, mode: FamilyMode::Exhaustive }
    }

    pub fn sample(n: usize, t: u64, count: u64, seed: u64) -> Self {
        FamilySpec { n, t, mode: FamilyMode::Sample { count, seed } }
    }

    fn validate(&self) -> Result<(), SieveError> {
        if self.n < 2 {
            return Err(SieveError::InvalidSpec(format!("n must be ≥ 2, got {}", self.n)));
        }
        if self.t < 1 {
            return Err(SieveError::InvalidSpec("T must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// |F_n(T)| = (2T+1)ⁿ.
pub fn family_size(n: usize, t: u64) -> BigUint {
    BigUint::from(2 * t + 1).pow(n as u32)
}

/// The `index`-th polynomial of F_n(T) in lexicographic order of
/// (a_0, …, a_{n−1}); a_{n−1} is the fastest-moving coordinate.
pub fn polynomial_at_index(n: usize, t: u64, index: u64) -> IntPolynomial {
    let base = 2 * t + 1;
    let mut digits = vec![0u64; n];
    let mut k = index;
    for d in digits.iter_mut().rev() {
        // peel from the fast end: the last digit of the tuple is k mod base
        *d = k % base;
        k /= base;
    }
    debug_assert_eq!(k, 0, "index out of range");
    digits.reverse(); // digits[0] now corresponds to a_{n−1}, undo
    let mut coeffs: Vec<BigInt> = digits
        .iter()
        .rev()
        .map(|&d| BigInt::from(d as i128 - t as i128))
        .collect();
    coeffs.push(BigInt::one());
    IntPolynomial::new(coeffs).expect("constructed monic")
}

/// Streaming enumeration of the family. Exhaustive mode yields each member
/// exactly once in lexicographic order; sample mode draws uniformly with
/// replacement, reproducibly from the spec's seed.
#[derive(Debug)]
pub enum FamilyIter {
    Exhaustive { n: usize, t: u64, next: u64, total: u64 },
    Sample { n: usize, t: u64, rng: Box<ChaCha8Rng>, remaining: u64 },
}

impl Iterator for FamilyIter {
    type Item = IntPolynomial;

    fn next(&mut self) -> Option<IntPolynomial> {
        match self {
            FamilyIter::Exhaustive { n, t, next, total } => {
                if next == total {
                    return None;
                }
                let poly = polynomial_at_index(*n, *t, *next);
                *next += 1;
                Some(poly)
            }
            FamilyIter::Sample { n, t, rng, remaining } => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                Some(sample_polynomial(*n, *t, rng))
            }
        }
    }
}

fn sample_polynomial(n: usize, t: u64, rng: &mut ChaCha8Rng) -> IntPolynomial {
    let span = 2 * t + 1;
    let mut coeffs: Vec<BigInt> =
        (0..n).map(|_| BigInt::from(rng.gen_range(0..span) as i128 - t as i128)).collect();
    coeffs.push(BigInt::one());
    IntPolynomial::new(coeffs).expect("constructed monic")
}

pub fn enumerate_family(spec: &FamilySpec, work_limit: u64) -> Result<FamilyIter, SieveError> {
    spec.validate()?;
    match spec.mode {
        FamilyMode::Exhaustive => {
            let size = family_size(spec.n, spec.t);
            let total = size.to_u64().filter(|&s| s <= work_limit).ok_or(
                SieveError::WorkLimitExceeded { needed: size, limit: work_limit },
            )?;
            Ok(FamilyIter::Exhaustive { n: spec.n, t: spec.t, next: 0, total })
        }
        FamilyMode::Sample { count, seed } => {
            if count > work_limit {
                return Err(SieveError::WorkLimitExceeded {
                    needed: BigUint::from(count),
                    limit: work_limit,
                });
            }
            Ok(FamilyIter::Sample {
                n: spec.n,
                t: spec.t,
                rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
                remaining: count,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budgets {
    /// Unramified primes examined per polynomial by the S_n certification.
    pub sn_budget: u64,
    /// Discriminant prime divisors up to this bound feed the ramification
    /// search.
    pub ram_disc_bound: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { sn_budget: 200, ram_disc_bound: 10_000_000 }
    }
}

/// Outcome counts for one family run. Failure is always relative to the
/// budgets — an over-count of true failures — and polynomials with zero
/// discriminant are excluded from both the failure counts and the fraction
/// denominators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub spec: FamilySpec,
    pub budgets: Budgets,
    pub seed: u64,
    pub total: u64,
    pub excluded_disc_zero: u64,
    pub failed_big_monodromy: u64,
    pub failed_ordinary_ramification: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub frac_big_monodromy: BigRational,
    pub frac_big_monodromy_decimal: String,
    #[serde(serialize_with = "ser_ratio")]
    pub frac_ordinary_ramification: BigRational,
    pub frac_ordinary_ramification_decimal: String,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

/// "num/den" rendering; exact, never floating point.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact decimal rendering to six places, rounding half away from zero.
pub fn decimal_string(r: &BigRational) -> String {
    let scale = BigInt::from(1_000_000u64);
    let num = r.numer() * &scale;
    let den = r.denom();
    let (mut q, rem) = num.abs().div_rem(&den.abs());
    if &rem * 2 >= den.abs() {
        q += 1;
    }
    let sign = if r.is_negative() && !q.is_zero() { "-" } else { "" };
    let (int_part, frac_part) = q.div_rem(&scale);
    format!("{sign}{int_part}.{frac_part:06}")
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    excluded: u64,
    fail_sn: u64,
    fail_ram: u64,
}

impl Counts {
    fn merge(self, other: Counts) -> Counts {
        Counts {
            excluded: self.excluded + other.excluded,
            fail_sn: self.fail_sn + other.fail_sn,
            fail_ram: self.fail_ram + other.fail_ram,
        }
    }
}

/// splitmix64 step; decorrelates per-polynomial seeds from the experiment
/// seed and the canonical index.
fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn classify_one(f: &IntPolynomial, budgets: &Budgets, seed: u64) -> Counts {
    let mut counts = Counts::default();
    let disc = f.discriminant().expect("degree ≥ 2 by spec validation");
    if disc.is_zero() {
        counts.excluded = 1;
        return counts;
    }
    match galois::certify_sn(f, budgets.sn_budget, seed).expect("squarefree, degree ≥ 2") {
        CertifyOutcome::Certified(_) => {}
        CertifyOutcome::Unknown { .. } => counts.fail_sn = 1,
    }
    match ramify::find_ordinary_prime(f, budgets.ram_disc_bound).expect("disc nonzero") {
        RamifySearch::Found(_) => {}
        RamifySearch::NotFound { .. } => counts.fail_ram = 1,
    }
    counts
}

/// Runs both certifications over the family and counts failures. The map is
/// embarrassingly parallel (rayon); the reduction is a commutative sum, so
/// the report is a pure function of (spec, budgets, seed) whatever the
/// worker count.
pub fn density_experiment(
    spec: &FamilySpec,
    budgets: &Budgets,
    seed: u64,
    work_limit: u64,
) -> Result<DensityReport, SieveError> {
    spec.validate()?;
    let (total, counts) = match spec.mode {
        FamilyMode::Exhaustive => {
            let size = family_size(spec.n, spec.t);
            let total = size.to_u64().filter(|&s| s <= work_limit).ok_or(
                SieveError::WorkLimitExceeded { needed: size, limit: work_limit },
            )?;
            let counts = (0..total)
                .into_par_iter()
                .map(|k| {
                    let f = polynomial_at_index(spec.n, spec.t, k);
                    classify_one(&f, budgets, derive_seed(seed, k))
                })
                .reduce(Counts::default, Counts::merge);
            (total, counts)
        }
        FamilyMode::Sample { count, .. } => {
            // draw sequentially for reproducibility, then classify in parallel
            let polys: Vec<IntPolynomial> = enumerate_family(spec, work_limit)?.collect();
            let counts = polys
                .par_iter()
                .enumerate()
                .map(|(k, f)| classify_one(f, budgets, derive_seed(seed, k as u64)))
                .reduce(Counts::default, Counts::merge);
            (count, counts)
        }
    };
    let denom = total - counts.excluded;
    let frac = |fails: u64| {
        if denom == 0 {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(fails), BigInt::from(denom))
        }
    };
    let frac_sn = frac(counts.fail_sn);
    let frac_ram = frac(counts.fail_ram);
    Ok(DensityReport {
        spec: spec.clone(),
        budgets: *budgets,
        seed,
        total,
        excluded_disc_zero: counts.excluded,
        failed_big_monodromy: counts.fail_sn,
        failed_ordinary_ramification: counts.fail_ram,
        frac_big_monodromy_decimal: decimal_string(&frac_sn),
        frac_big_monodromy: frac_sn,
        frac_ordinary_ramification_decimal: decimal_string(&frac_ram),
        frac_ordinary_ramification: frac_ram,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMethod {
    BruteForce,
    Formula,
}

/// |Ω_p| for monic degree-n polynomials over F_p: the count of polynomials
/// with the ordinary shape (X − α)² · (coprime squarefree cofactor).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaDensity {
    pub p: u64,
    pub n: usize,
    pub method: OmegaMethod,
    #[serde(serialize_with = "ser_biguint")]
    pub count: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub total: BigUint,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl OmegaDensity {
    /// Reduced exact density |Ω_p| / pⁿ.
    pub fn density(&self) -> BigRational {
        BigRational::new(self.count.clone().into(), self.total.clone().into())
    }

    /// Unreduced "count/pⁿ" rendering.
    pub fn density_string(&self) -> String {
        format!("{}/{}", self.count, self.total)
    }
}

/// Computes |Ω_p| either by enumerating all pⁿ monic polynomials and testing
/// the shape structurally (`BruteForce`, the oracle; bounded by `limit`), or
/// by the exact counting identity (`Formula`):
///
/// |Ω_p| = p · a_{n−2}, where a_m counts monic squarefree g of degree m with
/// g(0) ≠ 0 and satisfies a_0 = 1, a_m = s_m − a_{m−1} with s_m the monic
/// squarefree count (inclusion–exclusion over divisibility by X; shifting
/// X ↦ X + α makes the count independent of α).
pub fn omega_density(
    p: u64,
    n: usize,
    method: OmegaMethod,
    limit: u64,
) -> Result<OmegaDensity, SieveError> {
    if n < 2 {
        return Err(SieveError::DegreeTooSmall(n));
    }
    let total = BigUint::from(p).pow(n as u32);
    let count = match method {
        OmegaMethod::BruteForce => {
            let size = total.to_u64().filter(|&s| s <= limit).ok_or_else(|| {
                SieveError::WorkLimitExceeded { needed: total.clone(), limit }
            })?;
            let hits = (0..size)
                .into_par_iter()
                .filter(|&k| {
                    let f = monic_fp_at_index(p, n, k);
                    ordinary_shape(&f).is_some()
                })
                .count() as u64;
            BigUint::from(hits)
        }
        OmegaMethod::Formula => BigUint::from(p) * squarefree_nonroot_count(p, n - 2),
    };
    Ok(OmegaDensity { p, n, method, count, total })
}

/// a_m: monic squarefree polynomials of degree m over F_p with nonzero
/// constant term.
fn squarefree_nonroot_count(p: u64, m: usize) -> BigUint {
    let mut a = BigUint::one(); // a_0
    for k in 1..=m {
        a = count_monic_squarefree(p, k) - a;
    }
    a
}

/// The paper-style certified lower estimate for |Ω_p|/pⁿ:
/// p · N_irr(p, n−2) (with 1 subtracted from the irreducible count at n = 3)
/// divided by pⁿ. A true lower bound for every p.
pub fn omega_lower_bound(p: u64, n: usize) -> Result<BigRational, SieveError> {
    if n < 2 {
        return Err(SieveError::DegreeTooSmall(n));
    }
    let mut irr = count_monic_irreducible(p, n - 2);
    if n == 3 {
        irr -= BigUint::one();
    }
    let count = BigUint::from(p) * irr;
    Ok(BigRational::new(count.into(), BigInt::from(BigUint::from(p).pow(n as u32))))
}

fn monic_fp_at_index(p: u64, n: usize, index: u64) -> FpPolynomial {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut k = index;
    for _ in 0..n {
        coeffs.push(k % p);
        k /= p;
    }
    coeffs.push(1);
    FpPolynomial::new(p, coeffs).expect("p validated by caller")
}

/// The large-sieve sum H = Σ c^ω(a) / a over squarefree integers a ≤ L with
/// no prime factor ≤ P0, as an exact rational. a = 1 always contributes 1.
pub fn large_sieve_sum(l: u64, c: &BigRational, p0: u64) -> BigRational {
    let mut sum = BigRational::zero();
    let spf = smallest_prime_factor_table(l);
    for a in 1..=l {
        let mut m = a;
        let mut omega = 0u32;
        let mut ok = true;
        while m > 1 {
            let q = spf[m as usize] as u64;
            if q <= p0 {
                ok = false;
                break;
            }
            m /= q;
            if m % q == 0 {
                ok = false; // not squarefree
                break;
            }
            omega += 1;
        }
        if !ok {
            continue;
        }
        let mut term = pow_ratio(c, omega);
        term /= BigRational::from(BigInt::from(a));
        sum += term;
    }
    sum
}

fn pow_ratio(c: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= c;
    }
    acc
}

fn smallest_prime_factor_table(l: u64) -> Vec<u32> {
    let n = (l as usize) + 1;
    let mut spf: Vec<u32> = vec![0; n];
    for i in 2..n {
        if spf[i] == 0 {
            let mut j = i;
            while j < n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// The right-hand shape of the large-sieve bound: (Nⁿ + L^{2n}) / H, for a
/// family box side N = 2T+1 and degree n.
pub fn sieve_bound_shape(
    family_side: &BigUint,
    degree: usize,
    l: u64,
    h: &BigRational,
) -> BigRational {
    let delta = family_side.pow(degree as u32) + BigUint::from(l).pow(2 * degree as u32);
    BigRational::from(BigInt::from(delta)) / h.clone()
}

/// One row of a trend table.
#[derive(Debug, Clone, Serialize)]
pub struct TrendRow {
    pub t: u64,
    pub family_side: u64,
    pub total: u64,
    pub excluded_disc_zero: u64,
    pub fail_sn: u64,
    pub fail_ram: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub frac_sn: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub frac_ram: BigRational,
    pub frac_sn_decimal: String,
    pub frac_ram_decimal: String,
    pub envelope_sn: f64,
    pub envelope_ram: f64,
}

/// Verdict of comparing observed failure fractions against the predicted
/// envelopes N^(−1/2)·log N (big monodromy) and (log N)^(−c) (ramification,
/// c = 1/(n−2), or 1 at n = 2), each scaled through its first data point.
#[derive(Debug, Clone, Serialize)]
pub struct TrendVerdict {
    pub n: usize,
    pub budgets: Budgets,
    pub rows: Vec<TrendRow>,
    pub non_increasing_sn: bool,
    pub non_increasing_ram: bool,
    pub below_envelope_sn: bool,
    pub below_envelope_ram: bool,
    pub pass: bool,
}

fn envelope_sn(side: u64) -> f64 {
    let n = side as f64;
    n.powf(-0.5) * n.ln()
}

fn envelope_ram(side: u64, degree: usize) -> f64 {
    let c = if degree == 2 { 1.0 } else { 1.0 / (degree as f64 - 2.0) };
    (side as f64).ln().powf(-c)
}

/// Checks a sequence of reports with identical n and budgets and strictly
/// increasing T for the monotone-trend and scaled-envelope properties.
pub fn trend_check(reports: &[DensityReport]) -> Result<TrendVerdict, SieveError> {
    if reports.len() < 2 {
        return Err(SieveError::MismatchedReports("need at least 2 reports".into()));
    }
    let n = reports[0].spec.n;
    let budgets = reports[0].budgets;
    for w in reports.windows(2) {
        if w[1].spec.n != n {
            return Err(SieveError::MismatchedReports("degree n differs".into()));
        }
        if w[1].budgets != budgets {
            return Err(SieveError::MismatchedReports("budgets differ".into()));
        }
        if w[1].spec.t <= w[0].spec.t {
            return Err(SieveError::MismatchedReports("T must be strictly increasing".into()));
        }
    }
    let rows: Vec<TrendRow> = reports
        .iter()
        .map(|r| {
            let side = 2 * r.spec.t + 1;
            TrendRow {
                t: r.spec.t,
                family_side: side,
                total: r.total,
                excluded_disc_zero: r.excluded_disc_zero,
                fail_sn: r.failed_big_monodromy,
                fail_ram: r.failed_ordinary_ramification,
                frac_sn: r.frac_big_monodromy.clone(),
                frac_ram: r.frac_ordinary_ramification.clone(),
                frac_sn_decimal: r.frac_big_monodromy_decimal.clone(),
                frac_ram_decimal: r.frac_ordinary_ramification_decimal.clone(),
                envelope_sn: envelope_sn(side),
                envelope_ram: envelope_ram(side, n),
            }
        })
        .collect();
    let non_increasing = |select: &dyn Fn(&TrendRow) -> &BigRational| {
        rows.windows(2).all(|w| select(&w[1]) <= select(&w[0]))
    };
    let non_increasing_sn = non_increasing(&|r| &r.frac_sn);
    let non_increasing_ram = non_increasing(&|r| &r.frac_ram);
    let below = |frac: &dyn Fn(&TrendRow) -> f64, env: &dyn Fn(&TrendRow) -> f64| {
        let scale = frac(&rows[0]) / env(&rows[0]).max(f64::MIN_POSITIVE);
        rows.iter().all(|r| frac(r) <= scale * env(r) * (1.0 + 1e-12))
    };
    let frac_sn_f = |r: &TrendRow| r.frac_sn.to_f64().unwrap_or(0.0);
    let frac_ram_f = |r: &TrendRow| r.frac_ram.to_f64().unwrap_or(0.0);
    let below_envelope_sn = below(&frac_sn_f, &|r| r.envelope_sn);
    let below_envelope_ram = below(&frac_ram_f, &|r| r.envelope_ram);
    let pass =
        non_increasing_sn && non_increasing_ram && below_envelope_sn && below_envelope_ram;
    Ok(TrendVerdict {
        n,
        budgets,
        rows,
        non_increasing_sn,
        non_increasing_ram,
        below_envelope_sn,
        below_envelope_ram,
        pass,
    })
}

/// CSV trend table. The frac columns carry the exact "num/den" strings with
/// companion decimal columns; envelopes are the raw (unscaled) values.
pub fn trend_csv(rows: &[TrendRow]) -> String {
    let mut out = String::from(
        "T,N,total,excluded_disc0,fail_sn,fail_ram,frac_sn,frac_ram,\
         frac_sn_dec,frac_ram_dec,envelope_sn,envelope_ram\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{:.6},{:.6}\n",
            r.t,
            r.family_side,
            r.total,
            r.excluded_disc_zero,
            r.fail_sn,
            r.fail_ram,
            ratio_string(&r.frac_sn),
            ratio_string(&r.frac_ram),
            r.frac_sn_decimal,
            r.frac_ram_decimal,
            r.envelope_sn,
            r.envelope_ram,
        ));
    }
    out
}

/// Builds the trend rows for a list of reports without verdict checking
/// (used by the CLI CSV output for a single report).
pub fn report_rows(reports: &[DensityReport]) -> Vec<TrendRow> {
    reports
        .iter()
        .map(|r| {
            let side = 2 * r.spec.t + 1;
            TrendRow {
                t: r.spec.t,
                family_side: side,
                total: r.total,
                excluded_disc_zero: r.excluded_disc_zero,
                fail_sn: r.failed_big_monodromy,
                fail_ram: r.failed_ordinary_ramification,
                frac_sn: r.frac_big_monodromy.clone(),
                frac_ram: r.frac_ordinary_ramification.clone(),
                frac_sn_decimal: r.frac_big_monodromy_decimal.clone(),
                frac_ram_decimal: r.frac_ordinary_ramification_decimal.clone(),
                envelope_sn: envelope_sn(side),
                envelope_ram: envelope_ram(side, r.spec.n),
            }
        })
        .collect()
}
