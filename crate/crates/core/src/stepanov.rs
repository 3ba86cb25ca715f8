//! Vandermonde systems and machine-checked auxiliary polynomials for the
//! restricted-sumset upper bounds.
//!
//! A certificate expands the auxiliary polynomial term by term, then checks
//! its degree, its root multiplicities on `A`, and the nonvanishing
//! hyper-derivative that rules out `f = 0`.

use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldCtx};
use crate::nt;
use crate::poly::{hyper_derivative, root_multiplicity, Poly};
use crate::subgroup::{compute_subgroup, SubgroupSd};
use crate::sumsets::{is_sidon, restricted_sumset, SidonClass};

/// Solves `Σ c_i a_i^j = 0` for `j < target_row` and `Σ c_i a_i^target_row = 1`
/// by Gaussian elimination, and checks the result against the closed form
/// `c_i = Π_{k≠i} (a_i - a_k)^{-1}`.
pub fn vandermonde_solve(ctx: &FieldCtx, points: &[Elem], target_row: usize) -> Result<Vec<Elem>> {
    let n = points.len();
    if target_row + 1 != n {
        return Err(Error::InvalidParameter(format!(
            "target row {target_row} must equal n - 1 = {}",
            n as i64 - 1
        )));
    }
    if ElemSet::from_indices(ctx.q() as usize, points.iter().map(|a| a.idx())).len() != n {
        return Err(Error::DuplicatePoints);
    }
    // Augmented matrix: row j is (a_1^j, ..., a_n^j | [j == n-1]).
    let mut mat: Vec<Vec<Elem>> = (0..n)
        .map(|j| {
            let mut row: Vec<Elem> = points.iter().map(|&a| ctx.pow(a, j as u64)).collect();
            row.push(if j == target_row { Elem::ONE } else { Elem::ZERO });
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| mat[r][col] != Elem::ZERO)
            .expect("Vandermonde matrix on distinct points is invertible");
        mat.swap(col, pivot);
        let inv = ctx.inv(mat[col][col])?;
        for x in mat[col].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for r in 0..n {
            if r != col && mat[r][col] != Elem::ZERO {
                let factor = mat[r][col];
                for k in col..=n {
                    let t = ctx.mul(factor, mat[col][k]);
                    mat[r][k] = ctx.sub(mat[r][k], t);
                }
            }
        }
    }
    let c: Vec<Elem> = mat.iter().map(|row| row[n]).collect();
    let closed = vandermonde_closed_form(ctx, points)?;
    assert_eq!(c, closed, "elimination and closed form disagree");
    assert!(c.iter().all(|&x| x != Elem::ZERO), "zero Vandermonde coefficient");
    Ok(c)
}

/// `c_i = Π_{k≠i} (a_i - a_k)^{-1}`.
pub fn vandermonde_closed_form(ctx: &FieldCtx, points: &[Elem]) -> Result<Vec<Elem>> {
    points
        .iter()
        .enumerate()
        .map(|(i, &ai)| {
            let prod = points
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .fold(Elem::ONE, |acc, (_, &ak)| ctx.mul(acc, ctx.sub(ai, ak)));
            ctx.inv(prod).map_err(|_| Error::DuplicatePoints)
        })
        .collect()
}

/// `g(x) = Σ c_i Π_{k≠i} (x + a_k)`; it is the constant `(-1)^(n-1)`.
pub fn vandermonde_interpolant(ctx: &FieldCtx, points: &[Elem]) -> Result<Poly> {
    let c = vandermonde_closed_form(ctx, points)?;
    let mut g = Poly::zero();
    for (i, &ci) in c.iter().enumerate() {
        let mut term = Poly::constant(ci);
        for (k, &ak) in points.iter().enumerate() {
            if k != i {
                term = term.mul(ctx, &Poly::linear(ctx, ctx.neg(ak)));
            }
        }
        g = g.add(ctx, &term);
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// `|A|` odd: all `N` points, `m = (N-1)/2`.
    OddN,
    /// `|A|` even: `N - 1` points with the last element held out.
    EvenN,
    /// `|A|` even: all `N` points, `m = (N-2)/2`, factor `(x - a_i)^(m+1)`.
    EvenNRefined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootVanishing {
    pub element: u64,
    pub required: usize,
    /// `None` when `f` is identically zero.
    pub achieved: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
    /// The inequality is only derived when `f` is not identically zero.
    pub applies: bool,
}

/// Necessary conditions that follow once the refined polynomial vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RefinedConclusions {
    pub binomial_nonzero: bool,
    pub doubles_avoid_sd: bool,
    /// `q ≡ 3, 5 (mod 8)`; only evaluated for `d = 2`.
    pub q_mod_8: Option<bool>,
    /// Sidon with `0 ∈ A`; only evaluated for `d = 2`.
    pub sidon_with_zero: Option<bool>,
    /// `c_j ((2a_j)^e - 1) Π_i (a_j + a_i) = C(m+e, m+1) 2a_j` for every nonzero `a_j`.
    pub identity_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub variant: Variant,
    pub size: usize,
    /// Elements in the order used for the construction.
    pub points: Vec<u64>,
    pub m: Option<u64>,
    /// Trivial instance (`m` would be 0 or `A` too small); nothing to check.
    pub degenerate: bool,
    pub coefficients: Vec<Elem>,
    pub degree: Option<usize>,
    pub degree_bound: u64,
    pub degree_bound_ok: bool,
    pub vanishing: Vec<RootVanishing>,
    pub multiplicity_ok: bool,
    /// `A + A ⊄ S_d ∪ {0}`, so some hyper-derivative must be nonzero.
    pub witness_required: bool,
    pub nonzero_witness: Option<u64>,
    /// `E^(m) f (a_j)` matches `c_j (2a_j)^m ((2a_j)^e - 1)` at every construction point.
    pub witness_identity_ok: bool,
    pub identically_zero: bool,
    pub derived_inequality: Option<Inequality>,
    pub refined: Option<RefinedConclusions>,
    pub ok: bool,
}

fn sign(ctx: &FieldCtx, odd: bool) -> Elem {
    if odd {
        ctx.neg(Elem::ONE)
    } else {
        Elem::ONE
    }
}

/// `-(-1)^s + Σ c_i (x + a_i)^(m+e) (x - a_i)^t`.
fn auxiliary(ctx: &FieldCtx, points: &[Elem], c: &[Elem], m: u64, e: u64, t: u64, s: u64) -> Poly {
    let mut f = Poly::constant(ctx.neg(sign(ctx, s % 2 == 1)));
    for (&a, &ci) in points.iter().zip(c) {
        let term = Poly::shifted_power(ctx, a, m + e)
            .mul(ctx, &Poly::shifted_power(ctx, ctx.neg(a), t))
            .scale(ctx, ci);
        f = f.add(ctx, &term);
    }
    f
}

fn in_sd_or_zero(sd: &SubgroupSd, x: Elem) -> bool {
    x == Elem::ZERO || sd.contains(x)
}

/// Builds and checks the auxiliary polynomial for `A` with `A +^ A ⊆ S_d`.
pub fn build_certificate(ctx: &FieldCtx, d: u64, a: &ElemSet, variant: Variant) -> Result<CertificateReport> {
    let sd = compute_subgroup(ctx, d)?;
    if !restricted_sumset(ctx, a).is_subset(&sd.members) {
        return Err(Error::PreconditionViolated("A +^ A is not contained in S_d".into()));
    }
    let size = a.len();
    let odd = size % 2 == 1;
    if odd != (variant == Variant::OddN) {
        return Err(Error::ParityMismatch { size });
    }
    let e = (ctx.q() - 1) / d;
    let two = |x: Elem| ctx.add(x, x);
    let elems: Vec<Elem> = a.iter().map(Elem).collect();
    let bad_double = |x: Elem| !in_sd_or_zero(&sd, two(x));
    let witness_required = elems.iter().any(|&x| bad_double(x));

    // Point order: ascending, except that EvenN holds out a_N (0 when present).
    let points: Vec<Elem> = if variant == Variant::EvenN && size > 0 {
        let held = if a.contains(0) {
            Elem::ZERO
        } else {
            // Keep at least one element with a bad double among a_1..a_n.
            let bad: Vec<Elem> = elems.iter().copied().filter(|&x| bad_double(x)).collect();
            *elems
                .iter()
                .rev()
                .find(|&&x| bad.len() != 1 || bad[0] != x)
                .unwrap()
        };
        let mut v: Vec<Elem> = elems.iter().copied().filter(|&x| x != held).collect();
        v.push(held);
        v
    } else {
        elems.clone()
    };

    let (n, m) = match variant {
        Variant::OddN => (size, (size as u64).saturating_sub(1) / 2),
        Variant::EvenN => (size.saturating_sub(1), (size as u64).saturating_sub(2) / 2),
        Variant::EvenNRefined => (size, (size as u64).saturating_sub(2) / 2),
    };
    let degenerate = match variant {
        Variant::OddN | Variant::EvenN => m == 0,
        Variant::EvenNRefined => size == 0,
    };
    let mut report = CertificateReport {
        variant,
        size,
        points: points.iter().map(|x| x.idx()).collect(),
        m: (!degenerate).then_some(m),
        degenerate,
        coefficients: Vec::new(),
        degree: None,
        degree_bound: e,
        degree_bound_ok: true,
        vanishing: Vec::new(),
        multiplicity_ok: true,
        witness_required,
        nonzero_witness: None,
        witness_identity_ok: true,
        identically_zero: false,
        derived_inequality: None,
        refined: None,
        ok: true,
    };
    if degenerate {
        return Ok(report);
    }

    let base = &points[..n];
    let c = vandermonde_solve(ctx, base, n - 1)?;
    let (t, s) = match variant {
        Variant::EvenNRefined => (m + 1, m + 1),
        _ => (m, m),
    };
    let f = auxiliary(ctx, base, &c, m, e, t, s);
    report.coefficients = c.clone();
    report.degree = f.degree();
    report.identically_zero = f.is_zero();
    report.degree_bound_ok = f.degree().map_or(true, |deg| deg as u64 <= e);

    // Required multiplicities.
    let required: Vec<usize> = points
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let m = m as usize;
            match variant {
                Variant::EvenNRefined => m + 1,
                Variant::EvenN if j == n => {
                    if x == Elem::ZERO {
                        2 * m + 1
                    } else {
                        m + 1
                    }
                }
                _ => m + usize::from(!bad_double(x)),
            }
        })
        .collect();
    for (&x, &req) in points.iter().zip(&required) {
        let achieved = if f.is_zero() {
            None
        } else {
            Some(root_multiplicity(ctx, &f, x)?)
        };
        report.vanishing.push(RootVanishing {
            element: x.idx(),
            required: req,
            achieved,
        });
    }
    report.multiplicity_ok = report
        .vanishing
        .iter()
        .all(|v| v.achieved.map_or(true, |got| got >= v.required));

    let nn = size as u64;
    let lhs = match variant {
        Variant::OddN => {
            nn * (nn - 1) / 2 + elems.iter().filter(|&&x| !bad_double(x)).count() as u64
        }
        Variant::EvenN if a.contains(0) => {
            nn * (nn - 1) / 2 + elems.iter().filter(|&&x| sd.contains(two(x))).count() as u64
        }
        Variant::EvenN => ((nn - 1) * (nn - 1) + 1) / 2,
        Variant::EvenNRefined => nn * nn / 2,
    };
    let ineq = Inequality {
        lhs,
        rhs: e,
        holds: lhs <= e,
        applies: !f.is_zero(),
    };
    report.derived_inequality = Some(ineq);

    match variant {
        Variant::OddN | Variant::EvenN => {
            let em = hyper_derivative(ctx, &f, m as usize);
            for (j, &aj) in base.iter().enumerate() {
                let got = em.eval(ctx, aj);
                let dbl = two(aj);
                let expected = ctx.mul(
                    ctx.mul(c[j], ctx.pow(dbl, m)),
                    ctx.sub(ctx.pow(dbl, e), Elem::ONE),
                );
                if got != expected {
                    report.witness_identity_ok = false;
                }
                if got != Elem::ZERO && report.nonzero_witness.is_none() {
                    report.nonzero_witness = Some(aj.idx());
                }
            }
            report.ok = report.degree_bound_ok
                && report.multiplicity_ok
                && report.witness_identity_ok
                && (!witness_required || (report.nonzero_witness.is_some() && !f.is_zero()))
                && (!ineq.applies || ineq.holds);
        }
        Variant::EvenNRefined => {
            let binom = nt::binomial_mod_p(m + e, m + 1, ctx.p());
            let binom_elem = ctx.from_int(binom as i64);
            let identity_holds = points.iter().enumerate().all(|(j, &aj)| {
                if aj == Elem::ZERO {
                    return true;
                }
                let prod = points.iter().fold(Elem::ONE, |acc, &ai| ctx.mul(acc, ctx.add(aj, ai)));
                let lhs = ctx.mul(ctx.mul(c[j], ctx.sub(ctx.pow(two(aj), e), Elem::ONE)), prod);
                lhs == ctx.mul(binom_elem, two(aj))
            });
            let doubles_avoid_sd = elems.iter().all(|&x| !sd.contains(two(x)));
            let (q_mod_8, sidon_with_zero) = if d == 2 {
                let r = ctx.q() % 8;
                (
                    Some(r == 3 || r == 5),
                    Some(a.contains(0) && is_sidon(ctx, a) == SidonClass::Sidon),
                )
            } else {
                (None, None)
            };
            let concl = RefinedConclusions {
                binomial_nonzero: binom != 0,
                doubles_avoid_sd,
                q_mod_8,
                sidon_with_zero,
                identity_holds,
            };
            report.refined = Some(concl);
            let conclusions_ok = concl.binomial_nonzero
                && concl.doubles_avoid_sd
                && concl.identity_holds
                && q_mod_8.unwrap_or(true)
                && sidon_with_zero.unwrap_or(true);
            report.ok = report.degree_bound_ok
                && report.multiplicity_ok
                && (!ineq.applies || ineq.holds)
                && (!(f.is_zero() && witness_required) || conclusions_ok);
        }
    }
    Ok(report)
}

/// Picks `OddN` or `EvenN` from the parity of `|A|`.
pub fn default_variant(a: &ElemSet) -> Variant {
    if a.len() % 2 == 1 {
        Variant::OddN
    } else {
        Variant::EvenN
    }
}
