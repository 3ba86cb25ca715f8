//! Exhaustive search for restricted sumset decompositions `A +^ A = S_d`,
//! and the structural verifiers that go with it.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::clique::{self, BitGraph, SearchOpts, SearchStats};
use crate::density;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldCtx};
use crate::nt;
use crate::subgroup::{compute_subgroup, SubgroupSd};
use crate::sumsets::{dilate, is_sidon, negate, restricted_sumset, sumset, SidonClass};

/// Which sums must cover the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SumKind {
    /// `A +^ A`: distinct summands only.
    Restricted,
    /// `A + A`: doubles included.
    Full,
}

/// A covering problem `A ∘ A = T` with `T = S_d` or `S_d ∪ {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverTarget {
    pub sums: SumKind,
    pub with_zero: bool,
}

impl CoverTarget {
    pub const RESTRICTED: CoverTarget = CoverTarget {
        sums: SumKind::Restricted,
        with_zero: false,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompMode {
    /// `A +^ A = S_d`.
    Exact,
    /// Maximum `A` with `A +^ A ⊆ S_d`.
    Subset,
    /// Maximum `A` with `A +^ A ⊆ S_d ∪ {0}`.
    Subset0,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Lexicographically least dilate `uA`, `u ∈ S_d`.
    pub representative: Vec<u64>,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub q: u64,
    pub d: u64,
    pub mode: DecompMode,
    pub target_size: usize,
    /// Smallest and largest `|A|` the search considers.
    pub size_window: (usize, usize),
    /// Every solution, sorted.
    pub solutions: Vec<Vec<u64>>,
    pub orbits: Vec<Orbit>,
    pub structural_checks: Vec<StructureVerdict>,
    pub stats: SearchStats,
}

/// `x + y` for field indices, tabulated for small fields.
struct Adder<'a> {
    ctx: &'a FieldCtx,
    q: usize,
    table: Option<Vec<u32>>,
}

const ADD_TABLE_MAX_Q: usize = 2048;

impl<'a> Adder<'a> {
    fn new(ctx: &'a FieldCtx) -> Self {
        let q = ctx.q() as usize;
        let table = (q <= ADD_TABLE_MAX_Q).then(|| {
            let mut t = vec![0u32; q * q];
            for x in 0..q {
                for y in 0..q {
                    t[x * q + y] = ctx.add(Elem(x as u64), Elem(y as u64)).idx() as u32;
                }
            }
            t
        });
        Adder { ctx, q, table }
    }

    #[inline]
    fn add(&self, x: u64, y: u64) -> u64 {
        match &self.table {
            Some(t) => t[x as usize * self.q + y as usize] as u64,
            None => self.ctx.add(Elem(x), Elem(y)).idx(),
        }
    }
}

struct Problem<'a> {
    adder: Adder<'a>,
    graph: BitGraph,
    target: ElemSet,
    doubles: bool,
    n_max: usize,
    pruned: bool,
}

struct Shared {
    aborted: AtomicBool,
    deadline: Option<Instant>,
}

struct Worker<'p> {
    pb: &'p Problem<'p>,
    shared: &'p Shared,
    found: Vec<Vec<u64>>,
    nodes: u64,
    stop: bool,
}

impl<'p> Worker<'p> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes % 512 == 0 {
            if self.shared.aborted.load(Ordering::Relaxed) {
                self.stop = true;
            } else if self.shared.deadline.is_some_and(|dl| Instant::now() >= dl) {
                self.shared.aborted.store(true, Ordering::Relaxed);
                self.stop = true;
            }
        }
        self.stop
    }

    fn color_bound(&self, cand: &ElemSet) -> usize {
        let mut rest = cand.clone();
        let mut colors = 0;
        while !rest.is_empty() {
            colors += 1;
            let mut avail = rest.clone();
            while let Some(v) = avail.min() {
                avail.remove(v);
                rest.remove(v);
                avail = avail.difference(self.pb.graph.row(v as usize));
            }
        }
        colors
    }

    /// False when no extension of `cur` inside `cand` can cover the target.
    fn feasible(&self, cur: &[u64], cand: &ElemSet, covered: &ElemSet) -> bool {
        let pb = self.pb;
        let uncovered = pb.target.len() - covered.len();
        if uncovered == 0 {
            return true;
        }
        let room = pb.n_max.saturating_sub(cur.len());
        if room == 0 || cand.is_empty() {
            return false;
        }
        // Counting: t more vertices add at most Σ(top t fresh sums) + C(t, 2).
        let t = room.min(cand.len()).min(self.color_bound(cand));
        let mut fresh: Vec<usize> = cand
            .iter()
            .map(|x| {
                let mut seen = ElemSet::empty(covered.universe());
                for &a in cur {
                    let s = pb.adder.add(x, a);
                    if !covered.contains(s) {
                        seen.insert(s);
                    }
                }
                if pb.doubles {
                    let s = pb.adder.add(x, x);
                    if !covered.contains(s) {
                        seen.insert(s);
                    }
                }
                seen.len()
            })
            .collect();
        fresh.sort_unstable_by(|a, b| b.cmp(a));
        let gain: usize = fresh.iter().take(t).sum::<usize>() + t * (t - 1) / 2;
        if gain < uncovered {
            return false;
        }
        // Attainability: each uncovered target element needs a usable pair.
        let mut reach = covered.clone();
        let xs: Vec<u64> = cand.iter().collect();
        for (i, &x) in xs.iter().enumerate() {
            for &a in cur {
                reach.insert(pb.adder.add(x, a));
            }
            if pb.doubles {
                reach.insert(pb.adder.add(x, x));
            }
            for &y in &xs[i + 1..] {
                if pb.graph.row(x as usize).contains(y) {
                    reach.insert(pb.adder.add(x, y));
                }
            }
        }
        pb.target.is_subset(&reach)
    }

    fn node(&mut self, cur: &mut Vec<u64>, mut cand: ElemSet, covered: ElemSet) {
        if self.tick() {
            return;
        }
        if covered.len() == self.pb.target.len() {
            self.found.push(cur.clone());
        }
        if self.pb.pruned && !self.feasible(cur, &cand, &covered) {
            return;
        }
        let order: Vec<u64> = cand.iter().collect();
        for v in order {
            cand.remove(v);
            let next = cand.intersection(self.pb.graph.row(v as usize));
            let cov = self.extend(cur, &covered, v);
            cur.push(v);
            self.node(cur, next, cov);
            cur.pop();
            if self.stop {
                return;
            }
        }
    }

    fn extend(&self, cur: &[u64], covered: &ElemSet, v: u64) -> ElemSet {
        let mut cov = covered.clone();
        for &a in cur {
            cov.insert(self.pb.adder.add(v, a));
        }
        if self.pb.doubles {
            cov.insert(self.pb.adder.add(v, v));
        }
        cov
    }
}

struct RawResult {
    solutions: Vec<Vec<u64>>,
    nodes: u64,
    timed_out: bool,
    n_window: (usize, usize),
}

/// Runs the covering search. With `pruned`, only orbit representatives
/// under `S_d`-dilation are explored and bounds are applied; solutions
/// are expanded back to full orbits either way.
fn cover_search(ctx: &FieldCtx, sd: &SubgroupSd, goal: CoverTarget, pruned: bool, opts: &SearchOpts) -> RawResult {
    let q = ctx.q() as usize;
    let target = if goal.with_zero { sd.with_zero() } else { sd.members.clone() };
    let doubles = goal.sums == SumKind::Full;
    let allowed: ElemSet = if doubles {
        ElemSet::from_indices(q, ctx.elements().filter(|&x| target.contains(ctx.add(x, x).idx())).map(Elem::idx))
    } else {
        ElemSet::full(q)
    };
    let graph = BitGraph::from_fn(q, |x, y| {
        allowed.contains(x as u64)
            && allowed.contains(y as u64)
            && target.contains(ctx.add(Elem(x as u64), Elem(y as u64)).idx())
    });
    // |A| < sqrt(q) + 3 whenever A +^ A ⊆ S_d ∪ {0}.
    let n_max = if pruned { nt::isqrt_u64(ctx.q() - 1) as usize + 3 } else { q };
    let tlen = target.len();
    let n_min = (1..=q)
        .find(|&n| if doubles { n * (n + 1) / 2 >= tlen } else { n * n.saturating_sub(1) / 2 >= tlen })
        .unwrap_or(q + 1);
    let pb = Problem {
        adder: Adder::new(ctx),
        graph,
        target,
        doubles,
        n_max,
        pruned,
    };
    let shared = Shared {
        aborted: AtomicBool::new(false),
        deadline: opts.budget.map(|b| Instant::now() + b),
    };
    let worker = || Worker {
        pb: &pb,
        shared: &shared,
        found: Vec::new(),
        nodes: 0,
        stop: false,
    };

    // Roots: with symmetry, branch j forces the least element r_j of coset j
    // and excludes the cosets before it.
    let mut roots: Vec<(Vec<u64>, ElemSet, ElemSet)> = Vec::new();
    let empty = ElemSet::empty(q);
    let root_worker = worker();
    if pruned {
        let cosets = sd.cosets(ctx);
        let mut pool = allowed.clone();
        for coset in &cosets {
            let r = coset.min().expect("cosets are nonempty");
            if allowed.contains(r) {
                let cand = pool.intersection(pb.graph.row(r as usize));
                let cov = root_worker.extend(&[], &empty, r);
                roots.push((vec![r], cand, cov));
            }
            pool = pool.difference(coset);
        }
    } else {
        roots.push((Vec::new(), allowed.clone(), empty.clone()));
    }
    // Second level: one task per child, so small d still parallelizes.
    let mut tasks: Vec<(Vec<u64>, ElemSet, ElemSet)> = Vec::new();
    let mut found = Vec::new();
    let mut nodes = 0u64;
    for (cur, mut cand, cov) in roots {
        nodes += 1;
        if cov.len() == tlen {
            found.push(cur.clone());
        }
        if pruned && !root_worker.feasible(&cur, &cand, &cov) {
            continue;
        }
        for v in cand.clone().iter() {
            cand.remove(v);
            let next = cand.intersection(pb.graph.row(v as usize));
            let c = root_worker.extend(&cur, &cov, v);
            let mut child = cur.clone();
            child.push(v);
            tasks.push((child, next, c));
        }
    }
    let run = |(mut cur, cand, cov): (Vec<u64>, ElemSet, ElemSet)| {
        let mut w = worker();
        if !shared.aborted.load(Ordering::Relaxed) {
            w.node(&mut cur, cand, cov);
        }
        (w.found, w.nodes)
    };
    let results: Vec<(Vec<Vec<u64>>, u64)> = if opts.parallel {
        tasks.into_par_iter().map(run).collect()
    } else {
        tasks.into_iter().map(run).collect()
    };
    for (f, n) in results {
        found.extend(f);
        nodes += n;
    }
    let mut solutions: Vec<Vec<u64>> = found
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s
        })
        .collect();
    solutions.sort();
    solutions.dedup();
    RawResult {
        solutions,
        nodes,
        timed_out: shared.aborted.load(Ordering::Relaxed),
        n_window: (n_min, n_max.min(q)),
    }
}

/// All dilates `uA`, `u ∈ S_d`, sorted and deduplicated.
pub fn dilation_orbit(ctx: &FieldCtx, sd: &SubgroupSd, a: &[u64]) -> Vec<Vec<u64>> {
    let set = ElemSet::from_indices(ctx.q() as usize, a.iter().copied());
    let mut orbit: Vec<Vec<u64>> = sd.members.iter().map(|u| dilate(ctx, &set, Elem(u)).to_vec()).collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

fn orbits_of(ctx: &FieldCtx, sd: &SubgroupSd, found: &[Vec<u64>]) -> (Vec<Vec<u64>>, Vec<Orbit>) {
    let mut all = Vec::new();
    let mut orbits = Vec::new();
    for s in found {
        let orbit = dilation_orbit(ctx, sd, s);
        if orbits.iter().any(|o: &Orbit| o.representative == orbit[0]) {
            continue;
        }
        orbits.push(Orbit {
            representative: orbit[0].clone(),
            size: orbit.len(),
        });
        all.extend(orbit);
    }
    all.sort();
    all.dedup();
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    (all, orbits)
}

/// Every `A ⊆ F_q` with `A ∘ A = T` for the given covering problem.
/// `pruned = false` disables the symmetry quotient and every bound.
pub fn search_cover(
    ctx: &FieldCtx,
    d: u64,
    goal: CoverTarget,
    pruned: bool,
    opts: &SearchOpts,
) -> Result<(Vec<Vec<u64>>, Vec<Orbit>, SearchStats, (usize, usize))> {
    let sd = compute_subgroup(ctx, d)?;
    let started = Instant::now();
    let raw = cover_search(ctx, &sd, goal, pruned, opts);
    if raw.timed_out {
        return Err(Error::Timeout {
            budget_secs: opts.budget.map_or(f64::INFINITY, |b| b.as_secs_f64()),
            best_so_far: raw.solutions.len(),
        });
    }
    let (solutions, orbits) = orbits_of(ctx, &sd, &raw.solutions);
    let stats = SearchStats {
        nodes_explored: raw.nodes,
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    Ok((solutions, orbits, stats, raw.n_window))
}

/// All `A` with `A +^ A = S_d`, grouped into dilation orbits, with the
/// structural checks run on every solution.
pub fn search_decomposition(ctx: &FieldCtx, d: u64, opts: &SearchOpts) -> Result<DecompositionReport> {
    search_mode(ctx, d, DecompMode::Exact, opts)
}

pub fn search_mode(ctx: &FieldCtx, d: u64, mode: DecompMode, opts: &SearchOpts) -> Result<DecompositionReport> {
    if d < 2 {
        return Err(Error::NotADivisor {
            d,
            q_minus_1: ctx.q() - 1,
        });
    }
    let sd = compute_subgroup(ctx, d)?;
    match mode {
        DecompMode::Exact => {
            let (solutions, orbits, stats, window) = search_cover(ctx, d, CoverTarget::RESTRICTED, true, opts)?;
            let structural_checks = solutions
                .iter()
                .map(|s| check_sidon_structure(ctx, d, &ElemSet::from_indices(ctx.q() as usize, s.iter().copied())))
                .collect::<Result<Vec<_>>>()?;
            Ok(DecompositionReport {
                q: ctx.q(),
                d,
                mode,
                target_size: sd.len(),
                size_window: window,
                solutions,
                orbits,
                structural_checks,
                stats,
            })
        }
        DecompMode::Subset | DecompMode::Subset0 => {
            let g = crate::cayley::build_gps(ctx, d, mode == DecompMode::Subset)?;
            let rep = clique::enumerate_max_cliques(g.graph(), opts)?;
            let (solutions, orbits) = orbits_of(ctx, &sd, &rep.witnesses);
            Ok(DecompositionReport {
                q: ctx.q(),
                d,
                mode,
                target_size: g.connection.len(),
                size_window: (rep.omega, rep.omega),
                solutions,
                orbits,
                structural_checks: Vec::new(),
                stats: rep.stats,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompVerdict {
    pub ok: bool,
    /// Elements of `S_d` not reached by `A +^ A`.
    pub missing: Vec<u64>,
    /// Elements of `A +^ A` outside `S_d`.
    pub excess: Vec<u64>,
}

pub fn verify_decomposition(ctx: &FieldCtx, d: u64, a: &ElemSet) -> Result<DecompVerdict> {
    let sd = compute_subgroup(ctx, d)?;
    let r = restricted_sumset(ctx, a);
    let missing = sd.members.difference(&r).to_vec();
    let excess = r.difference(&sd.members).to_vec();
    Ok(DecompVerdict {
        ok: missing.is_empty() && excess.is_empty(),
        missing,
        excess,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityClass {
    OddOrZero,
    EvenWithoutZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureVerdict {
    pub set: Vec<u64>,
    pub parity: ParityClass,
    /// `p ≡ 1 (mod d)` and `(q-1)/d >= 3`.
    pub hypotheses_hold: bool,
    pub sidon: Option<bool>,
    /// `{2a} ∩ S_d = ∅`.
    pub doubles_avoid_sd: Option<bool>,
    /// `q = d|A|(|A|-1)/2 + 1`.
    pub q_formula: Option<bool>,
    /// `|A| = 2⌈√((q-1)/(2d))⌉`.
    pub ceiling_formula: Option<bool>,
    /// `frac(√((q-1)/(2d))) ∈ (1/2, 3/4)`.
    pub window: Option<bool>,
    pub ok: bool,
}

/// Checks the Sidon-type conclusions that every decomposition must satisfy.
pub fn check_sidon_structure(ctx: &FieldCtx, d: u64, a: &ElemSet) -> Result<StructureVerdict> {
    if !verify_decomposition(ctx, d, a)?.ok {
        return Err(Error::NotADecomposition);
    }
    let sd = compute_subgroup(ctx, d)?;
    let q = ctx.q();
    let n = a.len() as u64;
    let hypotheses_hold = ctx.p() % d == 1 && (q - 1) / d >= 3;
    let mut v = StructureVerdict {
        set: a.to_vec(),
        parity: ParityClass::OddOrZero,
        hypotheses_hold,
        sidon: None,
        doubles_avoid_sd: None,
        q_formula: None,
        ceiling_formula: None,
        window: None,
        ok: true,
    };
    if n % 2 == 1 || a.contains(0) {
        let sidon = is_sidon(ctx, a) == SidonClass::Sidon;
        let avoid = a.iter().all(|x| !sd.contains(ctx.add(Elem(x), Elem(x))));
        let formula = d * n * (n - 1) / 2 + 1 == q;
        v.sidon = Some(sidon);
        v.doubles_avoid_sd = Some(avoid);
        v.q_formula = Some(formula);
        v.ok = sidon && avoid && formula;
    } else {
        v.parity = ParityClass::EvenWithoutZero;
        let (x, y) = (BigUint::from(q - 1), BigUint::from(2 * d));
        let ceiling = BigUint::from(n) == density::ceil_sqrt_ratio(&x, &y) * 2u32;
        let window = density::frac_window_test(&x, &y, Ratio::new(1, 2), Ratio::new(3, 4))?;
        v.ceiling_formula = Some(ceiling);
        v.window = Some(window);
        v.ok = ceiling && window;
    }
    Ok(v)
}

/// No carries when adding `m_plus_n - n` and `n` in base `p`, i.e.
/// `C(m_plus_n, n) ≢ 0 (mod p)`. Cross-checked against Lucas.
pub fn kummer_nonvanishing(m_plus_n: u64, n: u64, p: u64) -> bool {
    if n > m_plus_n {
        return false;
    }
    let by_carries = nt::carries(m_plus_n - n, n, p) == 0;
    let by_lucas = nt::binomial_mod_p(m_plus_n, n, p) != 0;
    assert_eq!(by_carries, by_lucas, "Kummer and Lucas disagree");
    by_carries
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HpVerdict {
    /// `|A| |B|`
    pub lhs: u64,
    /// `(q-1)/d + |A ∩ (-B)|`
    pub rhs: u64,
    pub holds: bool,
}

/// The sumset bound `|A||B| <= (q-1)/d + |A ∩ (-B)|` for `A + B ⊆ S_d ∪ {0}`.
pub fn hp_bound_check(ctx: &FieldCtx, d: u64, a: &ElemSet, b: &ElemSet) -> Result<HpVerdict> {
    let sd = compute_subgroup(ctx, d)?;
    if !sumset(ctx, a, b).is_subset(&sd.with_zero()) {
        return Err(Error::PreconditionViolated("A + B is not contained in S_d ∪ {0}".into()));
    }
    let e = (ctx.q() - 1) / d;
    if b.is_empty() || !kummer_nonvanishing(b.len() as u64 - 1 + e, e, ctx.p()) {
        return Err(Error::PreconditionViolated(
            "the binomial C(|B| - 1 + (q-1)/d, (q-1)/d) vanishes mod p".into(),
        ));
    }
    let lhs = (a.len() * b.len()) as u64;
    let rhs = e + a.intersection(&negate(ctx, b)).len() as u64;
    Ok(HpVerdict {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BChoice {
    /// `|B| - 1 = (c_k, 0, ..., 0)_p`
    LeadingDigit,
    /// `|B| - 1 = ((d-1)(p-1)/d, ..., (d-1)(p-1)/d)_p`
    AllDigits,
}

/// Subset size `|B| <= |A|` with `2|B| > |A| + 1` and a nonvanishing
/// binomial, chosen from the base-`p` digits of `|A| - 1`. `None` in the
/// remaining case `d = 2`, `|A| = p^(k+1)`, or when `|A| < 2`.
pub fn partner_size(a_len: u64, p: u64, d: u64) -> Option<(u64, BChoice)> {
    if a_len < 2 || (p - 1) % d != 0 {
        return None;
    }
    let digits = nt::digits(a_len - 1, p);
    let k = digits.len() as u32 - 1;
    let ck = digits[k as usize];
    let top = (d - 1) * (p - 1) / d;
    let (b, choice) = if ck <= p - 1 - (p - 1) / d {
        (ck * p.pow(k) + 1, BChoice::LeadingDigit)
    } else {
        ((0..=k).map(|i| top * p.pow(i)).sum::<u64>() + 1, BChoice::AllDigits)
    };
    (2 * b > a_len + 1).then_some((b, choice))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NagellVerdict {
    pub q: u64,
    /// `N` with `q = N^2 - N + 1`.
    pub n: Option<u64>,
    /// `q = p^r` with `r >= 2` and a solution exists.
    pub prime_power_solution: bool,
    /// The known exceptional solution `7^3 = 19^2 - 19 + 1`.
    pub known_exception: bool,
}

pub fn nagell_gate(q: u64) -> NagellVerdict {
    let n = (4 * q)
        .checked_sub(3)
        .and_then(nt::is_square_u64)
        .map(|r| (r + 1) / 2);
    let r = nt::prime_power(q).map_or(0, |(_, r)| r);
    NagellVerdict {
        q,
        n,
        prime_power_solution: n.is_some() && r >= 2,
        known_exception: q == 343 && n == Some(19),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwiceSquareVerdict {
    pub q: u64,
    pub d: u64,
    pub k: u64,
    pub solutions: usize,
    /// No odd `N` solves `q = d N (N-1)/2 + 1`.
    pub odd_case_excluded: bool,
    /// `p >= d > k^2 - 4`, so the divisor `2p^r + 2kN - k` of `k^2 - 4` cannot exist.
    pub divisor_bound_excludes: bool,
    /// `2k | p^r - 1`.
    pub two_k_divides: bool,
    /// `frac(√((q-1)/(2d))) ∉ (1/2, 3/4)`.
    pub even_window_excluded: bool,
    pub stats: SearchStats,
}

/// Runs the decomposition search for `d = 2k^2`, `k >= 3`, on an even power
/// `q = p^(2r)` with `p ≡ 1 (mod d)`, and evaluates both arithmetic obstructions.
pub fn check_twice_square(ctx: &FieldCtx, d: u64, opts: &SearchOpts) -> Result<TwiceSquareVerdict> {
    let k = nt::is_square_u64(d / 2).filter(|_| d % 2 == 0);
    let k = match k {
        Some(k) if k >= 3 => k,
        _ => {
            return Err(Error::PreconditionViolated(format!("d = {d} is not 2k^2 with k >= 3")));
        }
    };
    let (p, q) = (ctx.p(), ctx.q());
    if ctx.k() % 2 != 0 || p % d != 1 {
        return Err(Error::PreconditionViolated(format!(
            "q = {q} must be an even power of a prime p ≡ 1 (mod {d})"
        )));
    }
    let pr = p.pow(ctx.k() / 2);
    let report = search_decomposition(ctx, d, opts)?;
    let odd_case_excluded = !(1..=nt::isqrt_u64(q) + 3)
        .step_by(2)
        .any(|n| d * n * n.saturating_sub(1) / 2 + 1 == q);
    let window = density::frac_window_test(
        &BigUint::from(q - 1),
        &BigUint::from(2 * d),
        Ratio::new(1, 2),
        Ratio::new(3, 4),
    )?;
    Ok(TwiceSquareVerdict {
        q,
        d,
        k,
        solutions: report.solutions.len(),
        odd_case_excluded,
        divisor_bound_excludes: p > k * k - 4,
        two_k_divides: (pr - 1) % (2 * k) == 0,
        even_window_excluded: !window,
        stats: report.stats,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FullSumsetRow {
    pub q: u64,
    pub d: u64,
    pub p_cong_1: bool,
    pub target_size: usize,
    /// Solutions of `A + A = S_d`; `None` when the search timed out.
    pub plus_sd: Option<usize>,
    /// Solutions of `A + A = S_d ∪ {0}`; `None` when the search timed out.
    pub plus_sd0: Option<usize>,
}

/// Searches `A + A = S_d` and `A + A = S_d ∪ {0}` at one `(q, d)`.
pub fn full_sumset_instance(ctx: &FieldCtx, d: u64, opts: &SearchOpts) -> Result<FullSumsetRow> {
    let sd = compute_subgroup(ctx, d)?;
    let count = |with_zero| {
        let goal = CoverTarget {
            sums: SumKind::Full,
            with_zero,
        };
        match search_cover(ctx, d, goal, true, opts) {
            Ok((sols, ..)) => Ok(Some(sols.len())),
            Err(Error::Timeout { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    Ok(FullSumsetRow {
        q: ctx.q(),
        d,
        p_cong_1: ctx.p() % d == 1,
        target_size: sd.len(),
        plus_sd: count(false)?,
        plus_sd0: count(true)?,
    })
}
