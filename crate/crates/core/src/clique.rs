//! Exact maximum-clique search on dense bit-matrix graphs.
//!
//! Branch and bound in the style of bitset MCQ/BBMC: vertices are relabelled
//! by a degeneracy order, each node recolours its candidate set greedily, and
//! a branch is cut when `|clique| + colours` cannot beat the incumbent.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};

/// Undirected simple graph on `0..n` stored as adjacency rows.
#[derive(Clone, Debug)]
pub struct BitGraph {
    rows: Vec<ElemSet>,
}

impl BitGraph {
    /// Rows must be symmetric and loop-free.
    pub fn from_rows(rows: Vec<ElemSet>) -> Self {
        let n = rows.len();
        debug_assert!(rows.iter().all(|r| r.universe() == n));
        debug_assert!(rows.iter().enumerate().all(|(i, r)| !r.contains(i as u64)));
        BitGraph { rows }
    }

    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut rows = vec![ElemSet::empty(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    rows[i].insert(j as u64);
                    rows[j].insert(i as u64);
                }
            }
        }
        BitGraph { rows }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_fn(n, |_, _| false)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn row(&self, v: usize) -> &ElemSet {
        &self.rows[v]
    }

    pub fn rows(&self) -> &[ElemSet] {
        &self.rows
    }

    pub fn is_clique(&self, vs: &[u64]) -> bool {
        vs.iter().enumerate().all(|(i, &a)| {
            vs[i + 1..]
                .iter()
                .all(|&b| a != b && self.rows[a as usize].contains(b))
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|i| self.rows[i].iter().all(|j| self.rows[j as usize].contains(i as u64)))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOpts {
    pub budget: Option<Duration>,
    /// Split first-level branches across the current rayon pool.
    pub parallel: bool,
}

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts {
            budget: Some(DEFAULT_BUDGET),
            parallel: true,
        }
    }
}

impl SearchOpts {
    pub fn serial() -> Self {
        SearchOpts {
            parallel: false,
            ..Self::default()
        }
    }

    pub fn unbounded() -> Self {
        SearchOpts {
            budget: None,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct SearchStats {
    pub nodes_explored: u64,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueReport {
    pub omega: usize,
    /// Sorted cliques in lexicographic order: one witness (the
    /// lexicographically least maximum clique) or all maximum cliques.
    pub witnesses: Vec<Vec<u64>>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Max,
    Enumerate,
    /// Stop at the first clique of at least this size.
    Exists(usize),
}

/// Graph relabelled into search order, reusable across many queries.
pub struct Engine<'g> {
    graph: &'g BitGraph,
    /// internal label -> original vertex
    order: Vec<usize>,
    /// original vertex -> internal label
    pos: Vec<usize>,
    rows: Vec<Vec<u64>>,
    words: usize,
}

struct Shared {
    best: AtomicUsize,
    nodes: AtomicU64,
    aborted: AtomicBool,
    deadline: Option<Instant>,
}

struct Worker<'e> {
    rows: &'e [Vec<u64>],
    words: usize,
    mode: Mode,
    best: usize,
    found: Vec<Vec<usize>>,
    shared: &'e Shared,
    nodes: u64,
    stop: bool,
}

#[inline]
fn popcount(ws: &[u64]) -> usize {
    ws.iter().map(|w| w.count_ones() as usize).sum()
}

impl<'e> Worker<'e> {
    fn threshold(&self) -> usize {
        let b = self.best.max(self.shared.best.load(Ordering::Relaxed));
        match self.mode {
            Mode::Max => b,
            Mode::Enumerate => b.saturating_sub(1),
            Mode::Exists(k) => k - 1,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes % 512 == 0 {
            if self.shared.aborted.load(Ordering::Relaxed) {
                self.stop = true;
            } else if let Some(dl) = self.shared.deadline {
                if Instant::now() >= dl {
                    self.shared.aborted.store(true, Ordering::Relaxed);
                    self.stop = true;
                }
            }
        }
        self.stop
    }

    fn record(&mut self, cur: &[usize]) {
        let n = cur.len();
        match self.mode {
            Mode::Max => {
                if n > self.best {
                    self.best = n;
                    self.found = vec![cur.to_vec()];
                    self.shared.best.fetch_max(n, Ordering::Relaxed);
                }
            }
            Mode::Enumerate => {
                if n > self.best {
                    self.best = n;
                    self.found.clear();
                    self.found.push(cur.to_vec());
                    self.shared.best.fetch_max(n, Ordering::Relaxed);
                } else if n == self.best {
                    self.found.push(cur.to_vec());
                }
            }
            Mode::Exists(k) => {
                if n >= k {
                    self.found = vec![cur.to_vec()];
                    self.stop = true;
                    self.shared.aborted.store(true, Ordering::Relaxed);
                }
            }
        }
    }

    /// Greedy sequential colouring; returns vertices in colour order with the
    /// colour number of each.
    fn color(&self, cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = cand.to_vec();
        let mut remaining = popcount(cand);
        let mut order = Vec::with_capacity(remaining);
        let mut colors = Vec::with_capacity(remaining);
        let mut color = 0;
        let mut q = vec![0u64; self.words];
        while remaining > 0 {
            color += 1;
            q.copy_from_slice(&uncolored);
            let mut w = 0;
            while w < self.words {
                let word = q[w];
                if word == 0 {
                    w += 1;
                    continue;
                }
                let v = w * 64 + word.trailing_zeros() as usize;
                let bit = 1u64 << (v % 64);
                uncolored[w] &= !bit;
                q[w] &= !bit;
                let row = &self.rows[v];
                for i in w..self.words {
                    q[i] &= !row[i];
                }
                order.push(v);
                colors.push(color);
                remaining -= 1;
            }
        }
        (order, colors)
    }

    fn expand(&mut self, cur: &mut Vec<usize>, mut cand: Vec<u64>) {
        if self.tick() {
            return;
        }
        let (order, colors) = self.color(&cand);
        for i in (0..order.len()).rev() {
            if cur.len() + colors[i] <= self.threshold() {
                return;
            }
            let v = order[i];
            let row = &self.rows[v];
            let next: Vec<u64> = cand.iter().zip(row).map(|(a, b)| a & b).collect();
            cur.push(v);
            if next.iter().all(|&w| w == 0) {
                self.record(cur);
            } else {
                self.expand(cur, next);
            }
            cur.pop();
            cand[v / 64] &= !(1u64 << (v % 64));
            if self.stop {
                return;
            }
        }
    }
}

impl<'g> Engine<'g> {
    pub fn new(graph: &'g BitGraph) -> Self {
        let n = graph.n();
        let order = degeneracy_order(graph);
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let words = n.div_ceil(64).max(1);
        let rows = order
            .iter()
            .map(|&v| {
                let mut r = vec![0u64; words];
                for u in graph.row(v).iter() {
                    let j = pos[u as usize];
                    r[j / 64] |= 1u64 << (j % 64);
                }
                r
            })
            .collect();
        Engine {
            graph,
            order,
            pos,
            rows,
            words,
        }
    }

    pub fn graph(&self) -> &BitGraph {
        self.graph
    }

    fn to_internal(&self, set: &ElemSet) -> Vec<u64> {
        let mut r = vec![0u64; self.words];
        for u in set.iter() {
            let j = self.pos[u as usize];
            r[j / 64] |= 1u64 << (j % 64);
        }
        r
    }

    fn to_original(&self, clique: &[usize]) -> Vec<u64> {
        let mut out: Vec<u64> = clique.iter().map(|&i| self.order[i] as u64).collect();
        out.sort_unstable();
        out
    }

    fn run(
        &self,
        cand: &ElemSet,
        mode: Mode,
        initial_best: usize,
        opts: &SearchOpts,
    ) -> (Vec<Vec<u64>>, usize, u64, bool) {
        let shared = Shared {
            best: AtomicUsize::new(initial_best),
            nodes: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
            deadline: opts.budget.map(|b| Instant::now() + b),
        };
        let cand = self.to_internal(cand);
        let new_worker = || Worker {
            rows: &self.rows,
            words: self.words,
            mode,
            best: initial_best,
            found: Vec::new(),
            shared: &shared,
            nodes: 0,
            stop: false,
        };

        let mut results: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
        if opts.parallel && cand.iter().any(|&w| w != 0) {
            // Root colouring, then one task per first-level branch.
            let root = new_worker();
            let (order, colors) = root.color(&cand);
            let branches: Vec<(usize, Vec<u64>)> = (0..order.len())
                .rev()
                .map(|i| {
                    let v = order[i];
                    let mut prior = vec![0u64; self.words];
                    for &u in &order[..i] {
                        prior[u / 64] |= 1u64 << (u % 64);
                    }
                    let next = prior.iter().zip(&self.rows[v]).map(|(a, b)| a & b).collect();
                    (i, next)
                })
                .collect();
            results = branches
                .into_par_iter()
                .map(|(i, next)| {
                    let mut w = new_worker();
                    if 1 + colors[i] > w.threshold() && !shared.aborted.load(Ordering::Relaxed) {
                        let mut cur = vec![order[i]];
                        if next.iter().all(|&x| x == 0) {
                            w.record(&cur);
                        } else {
                            w.expand(&mut cur, next);
                        }
                    }
                    shared.nodes.fetch_add(w.nodes, Ordering::Relaxed);
                    (w.best, w.found)
                })
                .collect();
        } else {
            let mut w = new_worker();
            w.expand(&mut Vec::new(), cand);
            shared.nodes.fetch_add(w.nodes, Ordering::Relaxed);
            results.push((w.best, w.found));
        }

        let aborted = shared.aborted.load(Ordering::Relaxed);
        let nodes = shared.nodes.load(Ordering::Relaxed);
        let (best, cliques) = match mode {
            Mode::Exists(_) => {
                let found = results.into_iter().flat_map(|(_, f)| f).next();
                let n = found.as_ref().map_or(0, Vec::len);
                (n, found.into_iter().collect::<Vec<_>>())
            }
            _ => {
                let best = results
                    .iter()
                    .filter(|(_, f)| !f.is_empty())
                    .map(|(b, _)| *b)
                    .max()
                    .unwrap_or(0);
                let cliques = results
                    .into_iter()
                    .flat_map(|(_, f)| f)
                    .filter(|c| c.len() == best)
                    .collect();
                (best, cliques)
            }
        };
        let mut out: Vec<Vec<u64>> = cliques.iter().map(|c| self.to_original(c)).collect();
        out.sort();
        out.dedup();
        // An aborted Exists query that found something is a success.
        let timed_out = aborted && !(matches!(mode, Mode::Exists(_)) && !out.is_empty());
        (out, best, nodes, timed_out)
    }

    /// Some clique of size `>= k` inside `cand`, if one exists.
    pub fn find_clique_of_size(
        &self,
        cand: &ElemSet,
        k: usize,
        opts: &SearchOpts,
    ) -> Result<Option<Vec<u64>>> {
        if k == 0 {
            return Ok(Some(Vec::new()));
        }
        if cand.len() < k {
            return Ok(None);
        }
        let (found, _, _, timed_out) = self.run(cand, Mode::Exists(k), 0, opts);
        if timed_out {
            return Err(timeout(opts, 0));
        }
        Ok(found.into_iter().next())
    }

    /// Clique number restricted to `cand`, with one (arbitrary) witness.
    pub fn max_clique_in(
        &self,
        cand: &ElemSet,
        at_least: usize,
        opts: &SearchOpts,
    ) -> Result<(usize, Option<Vec<u64>>, u64)> {
        let (found, best, nodes, timed_out) = self.run(cand, Mode::Max, at_least, opts);
        if timed_out {
            return Err(timeout(opts, best));
        }
        Ok((best.max(at_least), found.into_iter().next(), nodes))
    }

    /// Lexicographically least clique of size exactly `k`, if any.
    pub fn lex_min_clique(&self, k: usize, opts: &SearchOpts) -> Result<Option<Vec<u64>>> {
        let n = self.graph.n();
        let mut prefix = Vec::with_capacity(k);
        let mut cand = ElemSet::full(n);
        let started = Instant::now();
        while prefix.len() < k {
            let need = k - prefix.len() - 1;
            let mut chosen = None;
            for v in cand.iter() {
                let mut later = cand.intersection(self.graph.row(v as usize));
                for u in later.clone().iter().take_while(|&u| u < v) {
                    later.remove(u);
                }
                let remaining_budget = opts.budget.map(|b| b.saturating_sub(started.elapsed()));
                let sub = SearchOpts {
                    budget: remaining_budget,
                    parallel: opts.parallel,
                };
                if need == 0 || self.find_clique_of_size(&later, need, &sub)?.is_some() {
                    chosen = Some((v, later));
                    break;
                }
            }
            match chosen {
                Some((v, later)) => {
                    prefix.push(v);
                    cand = later;
                }
                None => return Ok(None),
            }
        }
        Ok(Some(prefix))
    }
}

fn timeout(opts: &SearchOpts, best: usize) -> Error {
    Error::Timeout {
        budget_secs: opts.budget.map_or(f64::INFINITY, |b| b.as_secs_f64()),
        best_so_far: best,
    }
}

/// Order for relabelling: vertices removed last by the minimum-degree
/// peeling come first. Ties are broken by the smaller original index.
fn degeneracy_order(g: &BitGraph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.row(v).len()).collect();
    let mut alive = vec![true; n];
    let mut removed = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertex remains");
        alive[v] = false;
        removed.push(v);
        for u in g.row(v).iter() {
            if alive[u as usize] {
                deg[u as usize] -= 1;
            }
        }
    }
    removed.reverse();
    removed
}

/// Clique number with the lexicographically least maximum clique as witness.
pub fn max_clique(g: &BitGraph, opts: &SearchOpts) -> Result<CliqueReport> {
    let started = Instant::now();
    let engine = Engine::new(g);
    let (omega, _, nodes) = engine.max_clique_in(&ElemSet::full(g.n()), 0, opts)?;
    let rest = SearchOpts {
        budget: opts.budget.map(|b| b.saturating_sub(started.elapsed())),
        ..*opts
    };
    let witness = engine
        .lex_min_clique(omega, &rest)?
        .expect("a clique of the computed size exists");
    Ok(CliqueReport {
        omega,
        witnesses: vec![witness],
        stats: SearchStats {
            nodes_explored: nodes,
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    })
}

/// All maximum cliques, sorted lexicographically.
pub fn enumerate_max_cliques(g: &BitGraph, opts: &SearchOpts) -> Result<CliqueReport> {
    let started = Instant::now();
    let engine = Engine::new(g);
    let (witnesses, best, nodes, timed_out) =
        engine.run(&ElemSet::full(g.n()), Mode::Enumerate, 0, opts);
    if timed_out {
        return Err(timeout(opts, best));
    }
    Ok(CliqueReport {
        omega: best,
        witnesses,
        stats: SearchStats {
            nodes_explored: nodes,
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    })
}

/// Reference implementation: visits every clique by plain backtracking with
/// no bounding. Returns the clique number and all maximum cliques.
pub fn naive_max_cliques(g: &BitGraph) -> (usize, Vec<Vec<u64>>) {
    fn rec(g: &BitGraph, cur: &mut Vec<u64>, from: usize, best: &mut (usize, Vec<Vec<u64>>)) {
        if cur.len() > best.0 {
            *best = (cur.len(), Vec::new());
        }
        if cur.len() == best.0 {
            best.1.push(cur.clone());
        }
        for v in from..g.n() {
            if cur.iter().all(|&u| g.row(v).contains(u)) {
                cur.push(v as u64);
                rec(g, cur, v + 1, best);
                cur.pop();
            }
        }
    }
    let mut best = (0, Vec::new());
    rec(g, &mut Vec::new(), 0, &mut best);
    best.1.sort();
    best
}
