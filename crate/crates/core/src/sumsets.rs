//! Sumsets, restricted sumsets and Sidon-type tests.

use serde::Serialize;

pub use crate::elemset::ElemSet;
use crate::ffield::{Elem, FieldCtx};
use crate::subgroup::SubgroupSd;

fn elems(a: &ElemSet) -> Vec<Elem> {
    a.iter().map(Elem).collect()
}

/// `A +^ A = {a + b : a, b ∈ A, a != b}`.
pub fn restricted_sumset(ctx: &FieldCtx, a: &ElemSet) -> ElemSet {
    let xs = elems(a);
    let mut out = ElemSet::empty(ctx.q() as usize);
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            out.insert(ctx.add(x, y).idx());
        }
    }
    out
}

pub fn sumset(ctx: &FieldCtx, a: &ElemSet, b: &ElemSet) -> ElemSet {
    let ys = elems(b);
    let mut out = ElemSet::empty(ctx.q() as usize);
    for x in a.iter().map(Elem) {
        for &y in &ys {
            out.insert(ctx.add(x, y).idx());
        }
    }
    out
}

/// `u·A`.
pub fn dilate(ctx: &FieldCtx, a: &ElemSet, u: Elem) -> ElemSet {
    ElemSet::from_indices(ctx.q() as usize, a.iter().map(|x| ctx.mul(u, Elem(x)).idx()))
}

/// `-A`.
pub fn negate(ctx: &FieldCtx, a: &ElemSet) -> ElemSet {
    ElemSet::from_indices(ctx.q() as usize, a.iter().map(|x| ctx.neg(Elem(x)).idx()))
}

/// `{2a : a ∈ A}`.
pub fn doubles(ctx: &FieldCtx, a: &ElemSet) -> ElemSet {
    ElemSet::from_indices(ctx.q() as usize, a.iter().map(|x| ctx.add(Elem(x), Elem(x)).idx()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SidonClass {
    /// All sums `a_i + a_j` with `i <= j` are distinct.
    Sidon,
    /// Sums with `i < j` are distinct, but some sum collides with a double.
    WeakSidon,
    Neither,
}

pub fn is_sidon(ctx: &FieldCtx, a: &ElemSet) -> SidonClass {
    let xs = elems(a);
    let q = ctx.q() as usize;
    let mut seen = ElemSet::empty(q);
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            if !seen.insert(ctx.add(x, y).idx()) {
                return SidonClass::Neither;
            }
        }
    }
    // Doubles are pairwise distinct in odd characteristic.
    if xs.iter().any(|&x| seen.contains(ctx.add(x, x).idx())) {
        SidonClass::WeakSidon
    } else {
        SidonClass::Sidon
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DoublesCount {
    /// `#{a ∈ A : 2a ∈ S_d}`
    pub in_sd: usize,
    /// `#{a ∈ A : 2a ∈ S_d ∪ {0}}`
    pub in_sd_or_zero: usize,
}

pub fn doubles_condition(ctx: &FieldCtx, sd: &SubgroupSd, a: &ElemSet) -> DoublesCount {
    let mut in_sd = 0;
    let mut zero = 0;
    for x in a.iter().map(Elem) {
        let dbl = ctx.add(x, x);
        if dbl == Elem::ZERO {
            zero += 1;
        } else if sd.contains(dbl) {
            in_sd += 1;
        }
    }
    DoublesCount {
        in_sd,
        in_sd_or_zero: in_sd + zero,
    }
}
