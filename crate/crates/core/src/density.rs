//! Exact fractional-part predicates over primes `p ≡ 1 (mod d)`.

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nt;

const SEGMENT: u64 = 1 << 18;

/// Primes `p <= limit` with `p ≡ 1 (mod d)`, from a segmented sieve.
pub struct PrimeStream {
    d: u64,
    limit: u64,
    base: Vec<u64>,
    lo: u64,
    buf: Vec<u64>,
    pos: usize,
}

pub fn prime_stream(d: u64, limit: u64) -> PrimeStream {
    let root = limit.sqrt();
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root as usize {
        if small[i] {
            base.push(i as u64);
            for j in (i * i..=root as usize).step_by(i) {
                small[j] = false;
            }
        }
    }
    PrimeStream {
        d: d.max(1),
        limit,
        base,
        lo: 2,
        buf: Vec::new(),
        pos: 0,
    }
}

impl PrimeStream {
    fn fill(&mut self) {
        let hi = (self.lo + SEGMENT).min(self.limit + 1);
        let mut mark = vec![true; (hi - self.lo) as usize];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let start = (p * p).max(self.lo.div_ceil(p) * p);
            for m in (start..hi).step_by(p as usize) {
                mark[(m - self.lo) as usize] = false;
            }
        }
        self.buf = mark
            .iter()
            .enumerate()
            .filter(|&(_, &is_p)| is_p)
            .map(|(i, _)| self.lo + i as u64)
            .filter(|&p| p % self.d == 1 % self.d)
            .collect();
        self.pos = 0;
        self.lo = hi;
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.pos < self.buf.len() {
                self.pos += 1;
                return Some(self.buf[self.pos - 1]);
            }
            if self.lo > self.limit {
                return None;
            }
            self.fill();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowPos {
    Inside,
    /// `frac(√x)` equals one of the endpoints.
    Boundary,
    Outside,
}

/// Where `frac(√(a/b))` falls relative to the open window `(lo, hi)`, decided
/// by cross-multiplied integer comparisons.
pub fn frac_window_position(a: &BigUint, b: &BigUint, lo: Ratio<u64>, hi: Ratio<u64>) -> Result<WindowPos> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::NonPositive);
    }
    let t = (a / b).sqrt();
    // (t + n/m)^2 vs a/b  <=>  (t m + n)^2 b vs a m^2
    let side = |r: Ratio<u64>| {
        let (n, m) = (BigUint::from(*r.numer()), BigUint::from(*r.denom()));
        let lhs = (&t * &m + n).pow(2) * b;
        let rhs = a * m.pow(2);
        lhs.cmp(&rhs)
    };
    use std::cmp::Ordering::*;
    Ok(match (side(lo), side(hi)) {
        (Equal, _) | (_, Equal) => WindowPos::Boundary,
        (Less, Greater) => WindowPos::Inside,
        _ => WindowPos::Outside,
    })
}

/// `frac(√(a/b)) ∈ (lo, hi)`; endpoints excluded.
pub fn frac_window_test(a: &BigUint, b: &BigUint, lo: Ratio<u64>, hi: Ratio<u64>) -> Result<bool> {
    Ok(frac_window_position(a, b, lo, hi)? == WindowPos::Inside)
}

/// `⌈√(x / y)⌉`.
pub fn ceil_sqrt_ratio(x: &BigUint, y: &BigUint) -> BigUint {
    let a = (x / y).sqrt();
    if &(&a * &a * y) >= x {
        a
    } else {
        a + 1u32
    }
}

/// `α_p = ⌈√((q - 1)/(2d))⌉` for `q = p^s`.
pub fn alpha_p(p: u64, d: u64, s: u32) -> BigUint {
    let q = nt::biguint_pow(p, s);
    ceil_sqrt_ratio(&(q - 1u32), &BigUint::from(2 * d))
}

/// `q = d k (k - 1)/2 + 1` for some positive integer `k`.
pub fn in_cd(q: &BigUint, d: u64) -> bool {
    let twice = (q - 1u32) * 2u32;
    let d = BigUint::from(d);
    if !(&twice % &d).is_zero() {
        return false;
    }
    let disc = twice / d * 4u32 + 1u32;
    let r = disc.sqrt();
    r.pow(2) == disc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitReport {
    #[serde(serialize_with = "ser_big")]
    pub alpha: BigUint,
    /// Base-`p` digits of `α_p`, least significant first.
    pub digits: Vec<u64>,
    /// `(d-1)(p-1)/d`; digit 0 may exceed it by one.
    pub bound: u64,
    pub ok: Vec<bool>,
}

impl DigitReport {
    pub fn all_ok(&self) -> bool {
        self.ok.iter().all(|&b| b)
    }
}

fn ser_big<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn digit_conditions(p: u64, d: u64, s: u32) -> DigitReport {
    let alpha = alpha_p(p, d, s);
    let mut digits = Vec::new();
    let mut rest = alpha.clone();
    let base = BigUint::from(p);
    loop {
        let (quot, rem) = rest.div_rem(&base);
        digits.push(rem.to_u64().expect("digit below p"));
        if quot.is_zero() {
            break;
        }
        rest = quot;
    }
    let bound = (d - 1) * (p - 1) / d;
    let ok = digits
        .iter()
        .enumerate()
        .map(|(j, &c)| if j == 0 { c <= bound + 1 } else { c <= bound })
        .collect();
    DigitReport {
        alpha,
        digits,
        bound,
        ok,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub p: u64,
    pub d: u64,
    pub s: u32,
    pub in_cd: bool,
    /// `frac(√((q-1)/(2d))) ∈ (1/2, 3/4)`.
    pub in_window: bool,
    pub window_boundary: bool,
    pub digit_ok: Vec<bool>,
    #[serde(serialize_with = "ser_big")]
    pub alpha_p: BigUint,
    /// Membership in the limiting set with the `o(1)` terms dropped.
    pub in_d_tilde: bool,
}

fn half() -> Ratio<u64> {
    Ratio::new(1, 2)
}

fn three_quarters() -> Ratio<u64> {
    Ratio::new(3, 4)
}

/// Radicand exponents: the top one for the `(1/2, 3/4)` window and the
/// lower ones for the `(0, (d-1)/d)` windows.
fn tilde_exponents(s: u32) -> (u32, Vec<u32>) {
    let r = s.div_ceil(2) - 1;
    if s % 2 == 1 {
        (2 * r + 1, (0..r).map(|j| 2 * j + 1).collect())
    } else {
        (2 * r + 2, (1..=r).map(|j| 2 * j).collect())
    }
}

pub fn scan_prime(p: u64, d: u64, s: u32) -> ScanRecord {
    let q = nt::biguint_pow(p, s);
    let two_d = BigUint::from(2 * d);
    let pos = frac_window_position(&(&q - 1u32), &two_d, half(), three_quarters())
        .expect("q > 1");
    let digits = digit_conditions(p, d, s);
    let (top, lower) = tilde_exponents(s);
    let in_d_tilde = frac_window_test(&nt::biguint_pow(p, top), &two_d, half(), three_quarters())
        .expect("positive radicand")
        && lower.iter().all(|&e| {
            frac_window_test(&nt::biguint_pow(p, e), &two_d, Ratio::from_integer(0), Ratio::new(d - 1, d))
                .expect("positive radicand")
        });
    ScanRecord {
        p,
        d,
        s,
        in_cd: in_cd(&q, d),
        in_window: pos == WindowPos::Inside,
        window_boundary: pos == WindowPos::Boundary,
        digit_ok: digits.ok,
        alpha_p: digits.alpha,
        in_d_tilde,
    }
}

/// One record per prime `p ≡ 1 (mod d)` up to `limit`, sorted by `p`.
pub fn scan(d: u64, s: u32, limit: u64) -> Result<Vec<ScanRecord>> {
    if d < 2 || s == 0 {
        return Err(Error::InvalidParameter("need d >= 2 and s >= 1".into()));
    }
    let primes: Vec<u64> = prime_stream(d, limit).collect();
    Ok(primes.par_iter().map(|&p| scan_prime(p, d, s)).collect())
}

/// Primes `p ≡ 1 (mod d)` up to `limit` with `p^s = d k (k-1)/2 + 1`.
pub fn cd_hits(d: u64, s: u32, limit: u64) -> Vec<u64> {
    prime_stream(d, limit)
        .filter(|&p| in_cd(&nt::biguint_pow(p, s), d))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensitySummary {
    pub d: u64,
    pub s: u32,
    pub r: u32,
    pub limit: u64,
    pub primes: usize,
    pub d_tilde_hits: usize,
    pub fraction: f64,
    /// `(1/4) ((d-1)/d)^r`
    pub predicted: f64,
    pub window_hits: usize,
    pub window_boundary_hits: usize,
    pub cd_hits: Vec<u64>,
}

pub fn summarize(d: u64, s: u32, limit: u64, records: &[ScanRecord]) -> DensitySummary {
    let r = s.div_ceil(2) - 1;
    let hits = records.iter().filter(|r| r.in_d_tilde).count();
    DensitySummary {
        d,
        s,
        r,
        limit,
        primes: records.len(),
        d_tilde_hits: hits,
        fraction: if records.is_empty() {
            0.0
        } else {
            hits as f64 / records.len() as f64
        },
        predicted: 0.25 * ((d - 1) as f64 / d as f64).powi(r as i32),
        window_hits: records.iter().filter(|r| r.in_window).count(),
        window_boundary_hits: records.iter().filter(|r| r.window_boundary).count(),
        cd_hits: records.iter().filter(|r| r.in_cd).map(|r| r.p).collect(),
    }
}

/// Fraction of primes `p ≡ 1 (mod d)` up to `limit` in the limiting set,
/// next to its predicted density.
pub fn empirical_density(d: u64, s: u32, limit: u64) -> Result<DensitySummary> {
    density_preconditions(d, s)?;
    let records = scan(d, s, limit)?;
    Ok(summarize(d, s, limit, &records))
}

/// Parameters for which the limiting set and its density are defined.
pub fn density_preconditions(d: u64, s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be at least 1".into()));
    }
    if d < 3 {
        return Err(Error::PreconditionViolated(format!("density scan needs d >= 3, got {d}")));
    }
    if s % 2 == 0 && nt::is_square_u64(2 * d).is_some() {
        return Err(Error::PredicateMismatch(format!(
            "s = {s} is even and 2d = {} is a perfect square",
            2 * d
        )));
    }
    Ok(())
}

/// Floating-point `frac(√(a/b))`, for reporting only.
pub fn frac_sqrt_f64(a: &BigUint, b: &BigUint) -> f64 {
    let x = a.to_f64().unwrap_or(f64::INFINITY) / b.to_f64().unwrap_or(1.0);
    let r = x.sqrt();
    r - r.floor()
}
