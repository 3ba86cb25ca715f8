//! Dense univariate polynomials over `F_q` and hyper-derivatives.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldCtx};
use crate::nt;

/// Coefficients constant term first, with no trailing zeros; the zero
/// polynomial is the empty list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Self::new(vec![c])
    }

    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&Elem::ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `x - c`, written as `x + (-c)`.
    pub fn linear(ctx: &FieldCtx, c: Elem) -> Self {
        Self::new(vec![ctx.neg(c), Elem::ONE])
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| ctx.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| ctx.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Elem::ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> Poly {
        let mut acc = Poly::constant(Elem::ONE);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base);
            }
        }
        acc
    }

    /// `(x + c)^e` expanded by the binomial theorem.
    pub fn shifted_power(ctx: &FieldCtx, c: Elem, e: u64) -> Poly {
        let p = ctx.p();
        let mut cpow = Elem::ONE;
        let mut coeffs = vec![Elem::ZERO; e as usize + 1];
        // coefficient of x^(e-j) is C(e, j) c^j
        for j in 0..=e {
            let b = nt::binomial_mod_p(e, j, p);
            coeffs[(e - j) as usize] = ctx.mul(ctx.from_int(b as i64), cpow);
            cpow = ctx.mul(cpow, c);
        }
        Poly::new(coeffs)
    }

    /// Synthetic division by `x - c`: returns quotient and remainder.
    pub fn div_linear(&self, ctx: &FieldCtx, c: Elem) -> (Poly, Elem) {
        if self.is_zero() {
            return (Poly::zero(), Elem::ZERO);
        }
        let n = self.coeffs.len();
        let mut q = vec![Elem::ZERO; n - 1];
        let mut carry = Elem::ZERO;
        for i in (0..n).rev() {
            let v = ctx.add(self.coeffs[i], ctx.mul(carry, c));
            if i == 0 {
                return (Poly::new(q), v);
            }
            q[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }
}

/// `E^(n) f = Σ C(j, n) c_j x^(j-n)`, binomials reduced mod `p` by Lucas.
pub fn hyper_derivative(ctx: &FieldCtx, f: &Poly, n: usize) -> Poly {
    let p = ctx.p();
    if f.coeffs.len() <= n {
        return Poly::zero();
    }
    Poly::new(
        (n..f.coeffs.len())
            .map(|j| {
                let b = nt::binomial_mod_p(j as u64, n as u64, p);
                ctx.mul(ctx.from_int(b as i64), f.coeffs[j])
            })
            .collect(),
    )
}

/// Largest `m` with `E^(n) f (c) = 0` for all `n < m`, cross-checked
/// against repeated division by `x - c`.
pub fn root_multiplicity(ctx: &FieldCtx, f: &Poly, c: Elem) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let by_derivative = (0..)
        .find(|&n| hyper_derivative(ctx, f, n).eval(ctx, c) != Elem::ZERO)
        .expect("a nonzero polynomial has a nonvanishing hyper-derivative");
    let by_division = multiplicity_by_division(ctx, f, c);
    assert_eq!(by_derivative, by_division, "multiplicity routes disagree");
    Ok(by_derivative)
}

pub fn multiplicity_by_division(ctx: &FieldCtx, f: &Poly, c: Elem) -> usize {
    let mut g = f.clone();
    let mut m = 0;
    loop {
        let (quot, rem) = g.div_linear(ctx, c);
        if rem != Elem::ZERO || g.is_zero() {
            return m;
        }
        m += 1;
        g = quot;
    }
}
