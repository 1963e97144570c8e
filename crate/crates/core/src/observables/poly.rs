use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Frame, FrameKind, Monomial};
use crate::error::{Error, Result};
use crate::formal_scalar::{CRational, FormalScalar, Order, Rational};

/// A polynomial observable: a finite map from monomials to formal scalars.
///
/// No exactly-zero coefficient is stored. Coefficients that are only known
/// up to a truncation (`O(λ^t)`) are kept so the precision stays visible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    frame: Frame,
    terms: BTreeMap<Monomial, FormalScalar>,
}

impl Poly {
    pub fn zero(frame: Frame) -> Self {
        Poly { frame, terms: BTreeMap::new() }
    }

    pub fn one(frame: Frame) -> Self {
        Self::constant(frame, FormalScalar::one())
    }

    pub fn constant(frame: Frame, c: FormalScalar) -> Self {
        Self::term(frame, Monomial::one(frame.vars()), c)
    }

    pub fn term(frame: Frame, m: Monomial, c: FormalScalar) -> Self {
        let mut p = Self::zero(frame);
        p.add_term(m, c);
        p
    }

    /// The coordinate function with index `var` (`0..2n`).
    pub fn var(frame: Frame, var: usize) -> Self {
        Self::term(frame, Monomial::var(frame.vars(), var), FormalScalar::one())
    }

    /// `qᵏ` or `zᵏ`, zero based.
    pub fn first(frame: Frame, k: usize) -> Self {
        Self::var(frame, frame.first(k))
    }

    /// `pₖ` or `z̄ᵏ`, zero based.
    pub fn second(frame: Frame, k: usize) -> Self {
        Self::var(frame, frame.second(k))
    }

    pub fn from_terms<I>(frame: Frame, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, FormalScalar)>,
    {
        let mut p = Self::zero(frame);
        for (m, c) in terms {
            if m.0.len() != frame.vars() {
                return Err(Error::DimensionMismatch("monomial length must be 2n"));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: FormalScalar) {
        debug_assert_eq!(m.0.len(), self.frame.vars());
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, FormalScalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> FormalScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// No coefficient has a known nonzero term (truncated zeros allowed).
    pub fn is_negligible(&self) -> bool {
        self.terms.values().all(|c| c.has_no_terms())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in_var(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Maximum degree in the first block (`q` or `z`).
    pub fn degree_first(&self) -> u32 {
        let n = self.frame.n;
        self.terms.keys().map(|m| m.degree_in(0..n)).max().unwrap_or(0)
    }

    /// Maximum degree in the second block (`p` or `z̄`).
    pub fn degree_second(&self) -> u32 {
        let n = self.frame.n;
        self.terms.keys().map(|m| m.degree_in(n..2 * n)).max().unwrap_or(0)
    }

    /// Lower bound for the λ-valuation over all coefficients.
    pub fn valuation_lower_bound(&self) -> Order {
        self.terms
            .values()
            .map(|c| c.valuation_lower_bound())
            .min()
            .unwrap_or(Order::Infinite)
    }

    /// Minimum valuation of the coefficients (`∞` for zero).
    pub fn valuation(&self) -> Result<Order> {
        let mut v = Order::Infinite;
        for c in self.terms.values() {
            v = v.min(c.valuation()?);
        }
        Ok(v)
    }

    pub fn map_coeffs<F>(&self, f: F) -> Poly
    where
        F: Fn(&FormalScalar) -> FormalScalar,
    {
        let mut out = Poly::zero(self.frame);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.frame.check(&other.frame)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Poly {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &FormalScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.frame);
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_c(&self, c: &CRational) -> Poly {
        self.map_coeffs(|x| x.scale(c))
    }

    pub fn scale_rational(&self, r: &Rational) -> Poly {
        self.scale_c(&CRational::real(r.clone()))
    }

    /// Pointwise product.
    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.frame.check(&other.frame)?;
        let mut out = Poly::zero(self.frame);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.frame);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugation: coefficients are conjugated; in the Wick frame
    /// the `z` and `z̄` exponent blocks are swapped as well.
    pub fn conj(&self) -> Poly {
        let n = self.frame.n;
        let mut out = Poly::zero(self.frame);
        for (m, c) in &self.terms {
            let m = match self.frame.kind {
                FrameKind::Weyl => m.clone(),
                FrameKind::Wick => {
                    let mut e = Vec::with_capacity(2 * n);
                    e.extend_from_slice(&m.0[n..]);
                    e.extend_from_slice(&m.0[..n]);
                    Monomial(e)
                }
            };
            out.add_term(m, c.conj());
        }
        out
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn deriv(&self, var: usize) -> Result<Poly> {
        if var >= self.frame.vars() {
            return Err(Error::BadVariable(var));
        }
        Ok(self.deriv_n(var, 1))
    }

    /// `∂^k / ∂x_var^k`.
    pub(crate) fn deriv_n(&self, var: usize, k: u32) -> Poly {
        if k == 0 {
            return self.clone();
        }
        let mut out = Poly::zero(self.frame);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e < k {
                continue;
            }
            let ff = crate::formal_scalar::falling_factorial(e, k);
            let mut m2 = m.clone();
            m2.0[var] = e - k;
            out.add_term(m2, c.scale_rational(&Rational::from_integer(ff)));
        }
        out
    }

    /// Applies `∂^{alpha}` for a full exponent vector `alpha`.
    pub fn deriv_multi(&self, alpha: &[u32]) -> Poly {
        let mut out = Poly::zero(self.frame);
        'term: for (m, c) in &self.terms {
            let mut coef = BigInt::one();
            let mut m2 = m.clone();
            for (i, &a) in alpha.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if m.0[i] < a {
                    continue 'term;
                }
                coef *= crate::formal_scalar::falling_factorial(m.0[i], a);
                m2.0[i] -= a;
            }
            out.add_term(m2, c.scale_rational(&Rational::from_integer(coef)));
        }
        out
    }

    /// Poisson bracket `Σₖ ∂f/∂qᵏ ∂g/∂pₖ − ∂f/∂pₖ ∂g/∂qᵏ` (Weyl frame).
    pub fn poisson(&self, other: &Poly) -> Result<Poly> {
        self.frame.check(&other.frame)?;
        if self.frame.kind != FrameKind::Weyl {
            return Err(Error::FrameMismatch);
        }
        let n = self.frame.n;
        let mut out = Poly::zero(self.frame);
        for k in 0..n {
            let a = &self.deriv_n(k, 1) * &other.deriv_n(n + k, 1);
            let b = &self.deriv_n(n + k, 1) * &other.deriv_n(k, 1);
            out = &(&out + &a) - &b;
        }
        Ok(out)
    }

    /// Evaluation `f(x)` at a point of `ℂ^{2n}` (the `δ_x` functional).
    pub fn eval_point(&self, point: &[CRational]) -> Result<FormalScalar> {
        if point.len() != self.frame.vars() {
            return Err(Error::DimensionMismatch("point length must be 2n"));
        }
        let mut acc = FormalScalar::zero();
        for (m, c) in &self.terms {
            let mut v = CRational::one();
            for (x, &e) in point.iter().zip(&m.0) {
                v = &v * &x.powi(e);
            }
            if !v.is_zero() {
                acc += &c.scale(&v);
            }
        }
        Ok(acc)
    }

    /// Substitutes values for a subset of the variables, leaving the rest.
    pub fn partial_eval(&self, assign: &[(usize, CRational)]) -> Result<Poly> {
        let mut out = Poly::zero(self.frame);
        for &(i, _) in assign {
            if i >= self.frame.vars() {
                return Err(Error::BadVariable(i));
            }
        }
        for (m, c) in &self.terms {
            let mut v = CRational::one();
            let mut m2 = m.clone();
            for (i, x) in assign {
                v = &v * &x.powi(m.0[*i]);
                m2.0[*i] = 0;
            }
            if !v.is_zero() {
                out.add_term(m2, c.scale(&v));
            }
        }
        Ok(out)
    }

    /// The coefficient of `λ^e` in every monomial, as an exact polynomial.
    pub fn lambda_coefficient(&self, e: &Rational) -> Poly {
        let mut out = Poly::zero(self.frame);
        for (m, c) in &self.terms {
            let x = c.coeff(e);
            if !x.is_zero() {
                out.add_term(m.clone(), FormalScalar::constant(x));
            }
        }
        out
    }

    pub fn truncate(&self, order: &Order) -> Poly {
        self.map_coeffs(|c| c.truncate(order))
    }

    /// Equal below λ-order `order` (coefficient-wise).
    pub fn eq_below(&self, other: &Poly, order: &Order) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.truncate(order).is_negligible(),
            Err(_) => false,
        }
    }

    /// `true` when every coefficient is exact.
    pub fn is_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_exact())
    }

    /// Multiplies every coefficient by `λ^e`.
    pub fn shift_lambda(&self, e: &Rational) -> Poly {
        self.map_coeffs(|c| c.shift(e))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Panics on frame mismatch; see [`Poly::try_add`].
    fn add(self, o: &Poly) -> Poly {
        self.try_add(o).expect("frame mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.try_sub(o).expect("frame mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Pointwise product; panics on frame mismatch.
    fn mul(self, o: &Poly) -> Poly {
        self.try_mul(o).expect("frame mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

fn write_rational(out: &mut String, r: &Rational) {
    use core::fmt::Write;
    let _ = write!(out, "{}", r);
}

/// A single λ-term `c·λ^e` in the expression grammar.
fn write_lambda_term(out: &mut String, e: &Rational, c: &CRational) {
    let complex = !c.re.is_zero() && !c.im.is_zero();
    let unit_like = e.is_zero();
    if complex {
        out.push('(');
        write_rational(out, &c.re);
        if c.im.is_negative() {
            out.push_str(" - ");
            write_rational(out, &-c.im.clone());
        } else {
            out.push_str(" + ");
            write_rational(out, &c.im);
        }
        out.push_str("*i)");
    } else if c.im.is_zero() {
        if !(c.re.is_one() && !unit_like) {
            if c.re == -Rational::one() && !unit_like {
                out.push('-');
            } else {
                write_rational(out, &c.re);
            }
        }
    } else if c.im.is_one() {
        out.push('i');
    } else {
        write_rational(out, &c.im);
        out.push_str("*i");
    }
    if !unit_like {
        let need_star = !(c.is_real() && (c.re.is_one() || c.re == -Rational::one()));
        if need_star {
            out.push('*');
        }
        if e.is_one() {
            out.push_str("lam");
        } else {
            out.push_str("lam^(");
            write_rational(out, e);
            if e.is_integer() {
                out.push_str("/1");
            }
            out.push(')');
        }
    }
}

pub(crate) fn write_scalar(out: &mut String, s: &FormalScalar) {
    use core::fmt::Write;
    if s.has_no_terms() {
        out.push('0');
    }
    for (k, (e, c)) in s.terms().iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        write_lambda_term(out, e, c);
    }
    if let Order::Finite(t) = s.trunc() {
        let _ = write!(out, " + O(lam^{})", t);
    }
}

/// Prints in the expression grammar of the command-line tool, e.g.
/// `q1*p1 + 1/2*i*lam`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let mut coeff = String::new();
            write_scalar(&mut coeff, c);
            let single = c.terms().len() <= 1 && c.is_exact();
            let mut mono = String::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&self.frame.var_name(i));
                if e > 1 {
                    use core::fmt::Write;
                    let _ = write!(mono, "^{}", e);
                }
            }
            if mono.is_empty() {
                if single {
                    out.push_str(&coeff);
                } else {
                    out.push('(');
                    out.push_str(&coeff);
                    out.push(')');
                }
            } else if single && coeff == "1" {
                out.push_str(&mono);
            } else if single && coeff == "-1" {
                out.push('-');
                out.push_str(&mono);
            } else if single {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&mono);
            } else {
                out.push('(');
                out.push_str(&coeff);
                out.push_str(")*");
                out.push_str(&mono);
            }
        }
        f.write_str(&out)
    }
}
