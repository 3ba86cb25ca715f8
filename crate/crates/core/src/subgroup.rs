//! The index-`d` multiplicative subgroup `S_d = {x^d : x != 0}` and the
//! order-`d` multiplicative character.

use num_complex::Complex64;
use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldCtx};

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupSd {
    pub d: u64,
    pub members: ElemSet,
    /// `(q - 1) / d`, the order of the subgroup.
    pub index_exponent: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Residue {
    InSd,
    NotInSd,
    Zero,
}

pub(crate) fn check_divisor(ctx: &FieldCtx, d: u64) -> Result<u64> {
    let n = ctx.q() - 1;
    if d <= 1 || n % d != 0 {
        return Err(Error::NotADivisor { d, q_minus_1: n });
    }
    Ok(n / d)
}

/// Computes `S_d` as the image of `x -> x^d` and by the exponent test
/// `x^((q-1)/d) = 1`; the two must agree.
pub fn compute_subgroup(ctx: &FieldCtx, d: u64) -> Result<SubgroupSd> {
    let e = check_divisor(ctx, d)?;
    let q = ctx.q() as usize;
    let image = ElemSet::from_indices(q, ctx.nonzero().map(|x| ctx.pow(x, d).idx()));
    let by_test = ElemSet::from_indices(
        q,
        ctx.nonzero().filter(|&x| ctx.pow(x, e) == Elem::ONE).map(Elem::idx),
    );
    assert_eq!(image, by_test, "image and exponent-test subgroups disagree");
    Ok(SubgroupSd {
        d,
        members: image,
        index_exponent: e,
    })
}

impl SubgroupSd {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x.idx())
    }

    /// `S_d ∪ {0}`.
    pub fn with_zero(&self) -> ElemSet {
        let mut s = self.members.clone();
        s.insert(0);
        s
    }

    /// Cosets `x·S_d` of the nonzero elements, ordered by their least index.
    pub fn cosets(&self, ctx: &FieldCtx) -> Vec<ElemSet> {
        let q = ctx.q() as usize;
        let mut seen = ElemSet::empty(q);
        let mut out = Vec::new();
        for x in ctx.nonzero() {
            if seen.contains(x.idx()) {
                continue;
            }
            let coset =
                ElemSet::from_indices(q, self.members.iter().map(|s| ctx.mul(x, Elem(s)).idx()));
            seen = seen.union(&coset);
            out.push(coset);
        }
        out
    }
}

/// Classifies `x` by `x^((q-1)/d)`.
pub fn residue_symbol(ctx: &FieldCtx, sd: &SubgroupSd, x: Elem) -> Residue {
    if x == Elem::ZERO {
        Residue::Zero
    } else if ctx.pow(x, sd.index_exponent) == Elem::ONE {
        Residue::InSd
    } else {
        Residue::NotInSd
    }
}

/// `Σ_{a,b∈A} χ(a+b)` for the order-`d` character `χ(g^t) = e^{2πi t/d}`,
/// `χ(0) = 0`, where `g` is the field's canonical generator.
pub fn char_sum(ctx: &FieldCtx, d: u64, a: &ElemSet) -> Result<Complex64> {
    check_divisor(ctx, d)?;
    if !ctx.has_tables() {
        return Err(Error::TablesUnavailable(ctx.q()));
    }
    let mut hist = vec![0u64; d as usize];
    let elems: Vec<Elem> = a.iter().map(Elem).collect();
    for &x in &elems {
        for &y in &elems {
            if let Some(t) = ctx.log(ctx.add(x, y))? {
                hist[(t % d) as usize] += 1;
            }
        }
    }
    let step = std::f64::consts::TAU / d as f64;
    Ok(hist
        .iter()
        .enumerate()
        .map(|(r, &c)| Complex64::from_polar(c as f64, step * r as f64))
        .sum())
}
