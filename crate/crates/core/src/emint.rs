//! Erdős–Moser type searches over the integers: sets whose pairwise sums
//! are perfect `d`-th powers, and the larger-sieve bound on their size.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::clique::{self, BitGraph, SearchOpts, SearchStats};
use crate::error::{Error, Result};
use crate::nt;

pub use crate::nt::euler_phi;

/// Largest `N` accepted by [`search_max_em_set`].
pub const EM_SEARCH_MAX_N: u64 = 100_000;

pub fn is_dth_power(n: &BigUint, d: u32) -> bool {
    if d == 0 {
        return n.is_one();
    }
    let r = n.nth_root(d);
    &r.pow(d) == n
}

/// `d`-th power test for machine integers.
pub fn is_dth_power_u64(n: u64, d: u32) -> bool {
    is_dth_power(&BigUint::from(n), d)
}

#[derive(Clone, Debug, Serialize)]
pub struct EmSearchReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub d: u32,
    pub best_size: usize,
    /// All maximum sets, sorted.
    pub witnesses: Vec<Vec<u64>>,
    pub stats: SearchStats,
}

/// `is_power[s]` for `0 <= s <= limit`.
fn power_table(limit: u64, d: u32) -> Vec<bool> {
    let mut t = vec![false; limit as usize + 1];
    for b in 0u64.. {
        match nt::checked_pow(b, d) {
            Some(v) if v <= limit => t[v as usize] = true,
            _ => break,
        }
    }
    t
}

/// Maximum `A ⊆ {1..N}` with every `a + b` (`a != b`) a perfect `d`-th power.
///
/// The graph is sparse, so each vertex `v` is searched as the least element
/// of a clique inside its forward neighbourhood, with the bitset engine on
/// that small local graph.
pub fn search_max_em_set(n: u64, d: u32, opts: &SearchOpts) -> Result<EmSearchReport> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d} must be at least 2")));
    }
    if n > EM_SEARCH_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "N = {n} exceeds the exhaustive limit {EM_SEARCH_MAX_N}"
        )));
    }
    if n == 0 {
        return Ok(EmSearchReport {
            n,
            d,
            best_size: 0,
            witnesses: Vec::new(),
            stats: SearchStats::default(),
        });
    }
    let started = Instant::now();
    let is_pow = power_table(2 * n, d);
    let powers: Vec<u64> = (0..=2 * n).filter(|&s| is_pow[s as usize]).collect();
    let forward = |v: u64| -> Vec<u64> {
        powers
            .iter()
            .filter(|&&s| s > 2 * v && s - v <= n)
            .map(|&s| s - v)
            .collect()
    };
    let best = AtomicUsize::new(1);
    let local = |v: u64| -> Result<(usize, Vec<Vec<u64>>, u64)> {
        let nbrs = forward(v);
        if nbrs.len() + 1 < best.load(Ordering::Relaxed) {
            return Ok((0, Vec::new(), 0));
        }
        let g = BitGraph::from_fn(nbrs.len(), |i, j| is_pow[(nbrs[i] + nbrs[j]) as usize]);
        let budget = match opts.budget {
            Some(b) => match b.checked_sub(started.elapsed()) {
                Some(rest) => Some(rest),
                None => return Err(timeout(opts, best.load(Ordering::Relaxed))),
            },
            None => None,
        };
        let rep = clique::enumerate_max_cliques(
            &g,
            &SearchOpts {
                budget,
                parallel: false,
            },
        )
        .map_err(|_| timeout(opts, best.load(Ordering::Relaxed)))?;
        let size = rep.omega + 1;
        best.fetch_max(size, Ordering::Relaxed);
        let sets = rep
            .witnesses
            .into_iter()
            .map(|w| std::iter::once(v).chain(w.into_iter().map(|i| nbrs[i as usize])).collect())
            .collect();
        Ok((size, sets, rep.stats.nodes_explored + 1))
    };
    let vs: Vec<u64> = (1..=n).collect();
    let results: Vec<Result<(usize, Vec<Vec<u64>>, u64)>> = if opts.parallel {
        vs.into_par_iter().map(local).collect()
    } else {
        vs.into_iter().map(local).collect()
    };
    let mut best_size = 0;
    let mut witnesses: Vec<Vec<u64>> = Vec::new();
    let mut nodes = 0;
    for r in results {
        let (size, sets, k) = r?;
        nodes += k;
        if size > best_size {
            best_size = size;
            witnesses.clear();
        }
        if size == best_size {
            witnesses.extend(sets);
        }
    }
    for w in &mut witnesses {
        w.sort_unstable();
    }
    witnesses.sort();
    Ok(EmSearchReport {
        n,
        d,
        best_size,
        witnesses,
        stats: SearchStats {
            nodes_explored: nodes,
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    })
}

fn timeout(opts: &SearchOpts, best: usize) -> Error {
    Error::Timeout {
        budget_secs: opts.budget.map_or(f64::INFINITY, |b| b.as_secs_f64()),
        best_so_far: best,
    }
}

/// The graph searched by [`search_max_em_set`], on vertices `0..n` standing
/// for `1..=n`.
pub fn em_graph(n: u64, d: u32) -> BitGraph {
    let is_pow = power_table(2 * n + 2, d);
    BitGraph::from_fn(n as usize, |i, j| is_pow[i + j + 2])
}

#[derive(Clone, Debug, Serialize)]
pub struct EmVerdict {
    pub set: Vec<String>,
    pub d: u32,
    pub pairs_checked: usize,
    /// Pairs whose sum is not a `d`-th power.
    pub failures: Vec<(String, String)>,
    pub ok: bool,
}

/// Checks that every sum of two distinct elements is a perfect `d`-th power.
pub fn em_verify(set: &[BigUint], d: u32) -> Result<EmVerdict> {
    let mut sorted = set.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter("set elements must be distinct".into()));
    }
    let mut failures = Vec::new();
    let mut pairs = 0;
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            pairs += 1;
            if !is_dth_power(&(a + b), d) {
                failures.push((a.to_string(), b.to_string()));
            }
        }
    }
    Ok(EmVerdict {
        set: sorted.iter().map(|x| x.to_string()).collect(),
        d,
        pairs_checked: pairs,
        ok: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum BoundValue {
    Finite(f64),
    Unbounded,
}

#[derive(Clone, Debug, Serialize)]
pub struct SieveBound {
    #[serde(rename = "N")]
    pub n: u64,
    pub d: u64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub primes_used: usize,
    pub numerator: f64,
    pub denominator: f64,
    pub bound: BoundValue,
    /// `2 φ(d) / d · log N`.
    pub asymptote: f64,
}

/// Upper bound on `|A_p|`, the image mod `p` of a set with all pairwise sums
/// `d`-th powers: `min(p, ⌊√(2(p-1)/d + 1)⌋ + 2)` for `p ≡ 1 (mod d)`.
pub fn residue_cap(p: u64, d: u64) -> u64 {
    let x = 2 * (p - 1) / d + 1;
    p.min(nt::isqrt_u64(x) + 2)
}

pub fn default_sieve_q(n: u64, d: u64) -> f64 {
    let l = euler_phi(d) as f64 * (n as f64).ln();
    2.0 / d as f64 * l * l
}

/// Larger sieve over primes `p ≡ 1 (mod d)`, `p <= Q`, with `|A_p|` capped
/// by [`residue_cap`].
pub fn gallagher_bound(n: u64, d: u64, q: Option<f64>) -> Result<SieveBound> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("N = {n} must be at least 3")));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d} must be at least 2")));
    }
    let q = q.unwrap_or_else(|| default_sieve_q(n, d));
    if !q.is_finite() || q < 0.0 {
        return Err(Error::InvalidParameter(format!("Q = {q} must be a nonnegative real")));
    }
    let log_n = (n as f64).ln();
    let (mut sum_log, mut sum_ratio, mut used) = (0.0f64, 0.0f64, 0usize);
    for p in crate::density::prime_stream(d, q.floor() as u64) {
        let lp = (p as f64).ln();
        sum_log += lp;
        sum_ratio += lp / residue_cap(p, d) as f64;
        used += 1;
    }
    let numerator = sum_log - log_n;
    let denominator = sum_ratio - log_n;
    let bound = if denominator > 0.0 {
        BoundValue::Finite(numerator / denominator)
    } else {
        BoundValue::Unbounded
    };
    Ok(SieveBound {
        n,
        d,
        q,
        primes_used: used,
        numerator,
        denominator,
        bound,
        asymptote: 2.0 * euler_phi(d) as f64 / d as f64 * log_n,
    })
}

type QPoly = Vec<BigRational>;

fn trim(mut f: QPoly) -> QPoly {
    while f.last().is_some_and(Zero::is_zero) {
        f.pop();
    }
    f
}

fn rem(f: &QPoly, g: &QPoly) -> QPoly {
    let mut r = f.clone();
    let lead = g.last().expect("nonzero divisor");
    while r.len() >= g.len() {
        let c = r.last().unwrap() / lead;
        let shift = r.len() - g.len();
        for (i, gi) in g.iter().enumerate() {
            r[shift + i] -= &c * gi;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Greatest common divisor over the rationals, made monic.
pub fn poly_gcd(f: &[BigRational], g: &[BigRational]) -> Vec<BigRational> {
    let (mut a, mut b) = (trim(f.to_vec()), trim(g.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in &mut a {
            *c /= &lead;
        }
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusReport {
    pub d: u64,
    pub k: u64,
    pub genus: u64,
    /// Degree of `gcd(f, f')`.
    pub gcd_degree: usize,
    pub squarefree: bool,
}

/// Genus `⌈k/2⌉ - 1` of `y^2 = (8/d)(x^k - 1) + 1`, after checking that
/// the right side is squarefree over `Q`.
pub fn genus_check(d: u64, k: u64) -> Result<GenusReport> {
    if d < 2 || k < 3 {
        return Err(Error::InvalidParameter(format!("need d >= 2 and k >= 3, got d = {d}, k = {k}")));
    }
    let a = BigRational::new(8.into(), d.into());
    let mut f: QPoly = vec![BigRational::zero(); k as usize + 1];
    f[0] = BigRational::one() - &a;
    f[k as usize] = a;
    let df: QPoly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer((i as u64).into()))
        .collect();
    let g = poly_gcd(&f, &df);
    let gcd_degree = g.len().saturating_sub(1);
    if gcd_degree > 0 {
        return Err(Error::RepeatedRoot);
    }
    Ok(GenusReport {
        d,
        k,
        genus: k.div_ceil(2) - 1,
        gcd_degree,
        squarefree: true,
    })
}

/// Every set in `report` is a clique of [`em_graph`].
pub fn witnesses_are_cliques(report: &EmSearchReport) -> bool {
    report.witnesses.iter().all(|w| {
        w.windows(2).all(|p| p[0] < p[1])
            && w.iter().enumerate().all(|(i, &a)| {
                w[i + 1..]
                    .iter()
                    .all(|&b| is_dth_power_u64(a + b, report.d))
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn dth_powers() {
        assert!(is_dth_power(&big(49), 2));
        assert!(!is_dth_power(&big(50), 2));
        assert!(is_dth_power(&big(1 << 30), 3));
        assert!(is_dth_power(&big(0), 5));
        let huge = BigUint::from(10u32).pow(40) + 1u32;
        assert!(is_dth_power(&(&huge * &huge), 2));
        assert!(!is_dth_power(&(&huge * &huge + 1u32), 2));
    }

    #[test]
    fn small_searches() {
        let r = search_max_em_set(30, 2, &SearchOpts::default()).unwrap();
        assert_eq!(r.best_size, 3);
        assert!(r.witnesses.contains(&vec![6, 19, 30]));
        let r = search_max_em_set(3, 2, &SearchOpts::default()).unwrap();
        assert_eq!((r.best_size, r.witnesses.clone()), (2, vec![vec![1, 3]]));
        assert_eq!(search_max_em_set(1, 2, &SearchOpts::default()).unwrap().best_size, 1);
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_check(2, 3).unwrap().genus, 1);
        assert_eq!(genus_check(3, 5).unwrap().genus, 2);
        assert_eq!(genus_check(8, 4).unwrap_err(), Error::RepeatedRoot);
        assert_eq!(genus_check(8, 5).unwrap_err(), Error::RepeatedRoot);
    }

    #[test]
    fn sieve_examples() {
        let b = gallagher_bound(1_000_000, 2, None).unwrap();
        assert!(matches!(b.bound, BoundValue::Finite(x) if x > 0.0));
        assert!((b.asymptote - 13.8155).abs() < 1e-3);
        assert_eq!(gallagher_bound(1_000_000, 2, Some(10.0)).unwrap().bound, BoundValue::Unbounded);
        let b3 = gallagher_bound(1_000_000, 3, None).unwrap();
        assert!((b3.asymptote - 18.4207).abs() < 1e-3);
    }

    #[test]
    fn residue_caps() {
        assert_eq!(residue_cap(3, 2), 3);
        assert_eq!(residue_cap(5, 2), 4);
        assert_eq!(residue_cap(13, 2), 5);
        assert_eq!(residue_cap(13, 3), 5);
    }

    #[test]
    fn verify_sets() {
        let v = em_verify(&[big(6), big(19), big(30)], 2).unwrap();
        assert!(v.ok && v.pairs_checked == 3);
        let v = em_verify(&[big(1), big(2), big(3)], 2).unwrap();
        assert_eq!(v.failures, vec![("1".into(), "2".into()), ("2".into(), "3".into())]);
        assert!(em_verify(&[big(1), big(1)], 2).is_err());
    }

    proptest! {
        #[test]
        fn sieve_sums_monotone_in_q(q1 in 0.0f64..2000.0, dq in 0.0f64..500.0, d in 2u64..6) {
            let a = gallagher_bound(10_000, d, Some(q1)).unwrap();
            let b = gallagher_bound(10_000, d, Some(q1 + dq)).unwrap();
            prop_assert!(b.numerator >= a.numerator);
            prop_assert!(b.denominator >= a.denominator);
        }

        #[test]
        fn root_test_agrees_with_f64(n in 0u64..1_000_000, d in 2u32..5) {
            let r = (n as f64).powf(1.0 / d as f64).round() as u64;
            let expected = (r.saturating_sub(1)..=r + 1).any(|x| x.pow(d) == n);
            prop_assert_eq!(is_dth_power_u64(n, d), expected);
        }
    }
}
