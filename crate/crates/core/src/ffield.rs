//! Exact arithmetic in `F_{p^k}` for odd primes `p`.
//!
//! An element is encoded by a single index `idx` in `[0, q)` whose base-`p`
//! digits (least significant first) are the coefficients of its residue
//! polynomial modulo the field's defining polynomial. For `k = 1` the index is
//! the residue itself. Index 0 is zero and index 1 is one in every field.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nt;

/// Discrete-log tables are built eagerly for fields up to this size.
pub const TABLE_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Elem(pub u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn idx(self) -> u64 {
        self.0
    }
}

#[derive(Debug)]
struct LogTables {
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    /// `antilog[t] = g^t` for `0 <= t < q - 1`.
    antilog: Vec<u32>,
}

/// Immutable description of a finite field. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: Elem,
    tables: Option<Arc<LogTables>>,
}

/// Builds `F_{p^k}` with the lexicographically smallest monic irreducible
/// modulus (coefficients compared constant term first) and the smallest
/// generator by index.
pub fn make_field(p: u64, k: u32) -> Result<FieldCtx> {
    make_field_with_cap(p, k, TABLE_CAP)
}

/// As [`make_field`], with an explicit ceiling on table construction.
pub fn make_field_with_cap(p: u64, k: u32, table_cap: u64) -> Result<FieldCtx> {
    if k == 0 {
        return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
    }
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !nt::is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    let q = nt::checked_pow(p, k).ok_or(Error::Overflow { p, k })?;
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        smallest_irreducible(p, k as usize)
    };
    let mut ctx = FieldCtx {
        p,
        k,
        q,
        modulus,
        generator: Elem::ONE,
        tables: None,
    };
    ctx.generator = ctx.search_generator();
    if q <= table_cap {
        ctx.tables = Some(Arc::new(ctx.build_tables()));
    }
    Ok(ctx)
}

impl FieldCtx {
    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first, monic of degree `k`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elem(&self, idx: u64) -> Result<Elem> {
        if idx < self.q {
            Ok(Elem(idx))
        } else {
            Err(Error::ElemOutOfRange { idx, q: self.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.q).map(Elem)
    }

    pub fn digits(&self, a: Elem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut x = a.0;
        for _ in 0..self.k {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    pub fn from_digits(&self, d: &[u64]) -> Elem {
        Elem(d.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y, mut place, mut out) = (a.0, b.0, 1u64, 0u64);
        while x > 0 || y > 0 {
            let mut s = x % self.p + y % self.p;
            if s >= self.p {
                s -= self.p;
            }
            out += s * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut place, mut out) = (a.0, 1u64, 0u64);
        while x > 0 {
            let c = x % self.p;
            if c != 0 {
                out += (self.p - c) * place;
            }
            place *= self.p;
            x /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `n·a` for a non-negative integer multiple.
    pub fn scale(&self, a: Elem, n: u64) -> Elem {
        self.mul(a, self.from_int((n % self.p) as i64))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
                let n = self.q - 1;
                Elem(t.antilog[(if s >= n { s - n } else { s }) as usize] as u64)
            }
            None => self.mul_poly(a, b),
        }
    }

    /// Multiplication by polynomial product and reduction, never using tables.
    pub fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return Elem(nt::mul_mod(a.0, b.0, self.p));
        }
        let p = self.p;
        let k = self.k as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + nt::mul_mod(x, y, p)) % p;
            }
        }
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            // subtract c * x^(deg-k) * modulus
            for (j, &m) in self.modulus.iter().enumerate() {
                let t = deg - k + j;
                prod[t] = (prod[t] + p - nt::mul_mod(c, m, p)) % p;
            }
        }
        self.from_digits(&prod[..k])
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let l = t.log[a.0 as usize] as u64;
            let r = ((l as u128 * (e % n) as u128) % n as u128) as usize;
            return Elem(t.antilog[r] as u64);
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Discrete log to the base of the canonical generator.
    pub fn log(&self, a: Elem) -> Result<Option<u64>> {
        let t = self.tables.as_ref().ok_or(Error::TablesUnavailable(self.q))?;
        Ok((a.0 != 0).then(|| t.log[a.0 as usize] as u64))
    }

    /// `g^t` for the canonical generator `g`.
    pub fn exp(&self, t: u64) -> Elem {
        self.pow(self.generator, t % (self.q - 1))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> u64 {
        assert!(a.0 != 0, "zero has no multiplicative order");
        let mut n = self.q - 1;
        for (l, e) in nt::factorize(self.q - 1) {
            for _ in 0..e {
                if self.pow(a, n / l) == Elem::ONE {
                    n /= l;
                } else {
                    break;
                }
            }
        }
        n
    }

    fn is_primitive(&self, a: Elem, prime_divs: &[u64]) -> bool {
        a.0 != 0 && prime_divs.iter().all(|&l| self.pow(a, (self.q - 1) / l) != Elem::ONE)
    }

    fn search_generator(&self) -> Elem {
        let divs = nt::prime_divisors(self.q - 1);
        (1..self.q)
            .map(Elem)
            .find(|&g| self.is_primitive(g, &divs))
            .expect("a finite field always has a primitive element")
    }

    /// Smallest element of multiplicative order `q - 1`, checked by
    /// `g^((q-1)/l) != 1` for every prime `l | q - 1`.
    pub fn find_generator(&self) -> Elem {
        self.search_generator()
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.q - 1) as usize;
        let mut log = vec![0u32; self.q as usize];
        let mut antilog = vec![0u32; n];
        let mut x = Elem::ONE;
        for (t, slot) in antilog.iter_mut().enumerate() {
            *slot = x.0 as u32;
            log[x.0 as usize] = t as u32;
            x = self.mul_poly(x, self.generator);
        }
        debug_assert_eq!(x, Elem::ONE);
        LogTables { log, antilog }
    }

    /// Whether `q` is a perfect square, and if so `sqrt(q)`.
    pub fn sqrt_q(&self) -> Option<u64> {
        (self.k % 2 == 0).then(|| self.p.pow(self.k / 2))
    }

    /// The subfield of order `sqrt(q)`, as the fixed points of `x -> x^sqrt(q)`.
    pub fn half_subfield(&self) -> Result<Vec<Elem>> {
        let r = self.sqrt_q().ok_or(Error::NotASquare(self.q))?;
        Ok(self.elements().filter(|&x| self.pow(x, r) == x).collect())
    }
}

// ---------------------------------------------------------------------------
// F_p[x] helpers for choosing the modulus. Polynomials are coefficient vectors,
// constant term first, trimmed of trailing zeros.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + nt::mul_mod(x, y, p)) % p;
        }
    }
    fp_rem(prod, f, p)
}

/// Remainder modulo a monic `f`.
fn fp_rem(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let k = f.len() - 1;
    let lead_inv = nt::pow_mod(f[k], p - 2, p);
    trim(&mut a);
    while a.len() > k {
        let deg = a.len() - 1;
        let c = nt::mul_mod(a[deg], lead_inv, p);
        for (j, &m) in f.iter().enumerate() {
            let t = deg - k + j;
            a[t] = (a[t] + p - nt::mul_mod(c, m, p)) % p;
        }
        trim(&mut a);
    }
    a
}

fn fp_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^i) mod f` for `i = 1..=n`, via repeated p-th powering.
fn fp_frobenius_powers(f: &[u64], p: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(n);
    let mut cur = fp_rem(vec![0, 1], f, p);
    for _ in 0..n {
        // cur <- cur^p
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, f, p);
            }
            base = fp_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        cur = acc;
        out.push(cur.clone());
    }
    out
}

fn has_root(f: &[u64], p: u64) -> bool {
    (0..p).any(|x| f.iter().rev().fold(0u64, |acc, &c| (nt::mul_mod(acc, x, p) + c) % p) == 0)
}

/// Ben-Or style test: monic `f` of degree `k` is irreducible iff
/// `gcd(x^(p^i) - x, f) = 1` for all `1 <= i <= k/2`.
pub(crate) fn is_irreducible_gcd(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k <= 1 {
        return k == 1;
    }
    for xp in fp_frobenius_powers(f, p, k / 2) {
        let mut h = xp;
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = fp_gcd(f.to_vec(), h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    if f.len() - 1 <= 3 {
        f.len() - 1 >= 1 && !has_root(f, p)
    } else {
        is_irreducible_gcd(f, p)
    }
}

/// Monic degree-`k` candidates in lexicographic order of
/// `(c_0, c_1, .., c_{k-1})`.
fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let total = p.checked_pow(k as u32).expect("q fits in u64");
    for n in 0..total {
        let mut f = vec![0u64; k + 1];
        let mut x = n;
        for j in (0..k).rev() {
            f[j] = x % p;
            x /= p;
        }
        f[k] = 1;
        if f[0] == 0 {
            continue;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
