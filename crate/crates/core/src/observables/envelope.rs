use num_traits::{Signed, Zero};

use super::{Frame, FrameKind, Poly};
use crate::error::{Error, Result};
use crate::formal_scalar::{int, CRational, FormalScalar, Order, Rational};

/// `poly(q,p) · exp(−width_q |q|² − width_p |p|²)`.
///
/// A width of zero means there is no envelope in that variable group; a
/// polynomial is the special case of two zero widths. Only Weyl frames carry
/// nonzero widths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnvelopePoly {
    pub poly: Poly,
    pub width_q: Rational,
    pub width_p: Rational,
}

impl From<Poly> for EnvelopePoly {
    fn from(poly: Poly) -> Self {
        EnvelopePoly { poly, width_q: Rational::zero(), width_p: Rational::zero() }
    }
}

impl EnvelopePoly {
    pub fn new(poly: Poly, width_q: Rational, width_p: Rational) -> Result<Self> {
        if width_q.is_negative() || width_p.is_negative() {
            return Err(Error::Invalid("envelope widths must be nonnegative".into()));
        }
        if poly.frame().kind != FrameKind::Weyl && !(width_q.is_zero() && width_p.is_zero()) {
            return Err(Error::FrameMismatch);
        }
        Ok(EnvelopePoly { poly, width_q, width_p })
    }

    /// Envelope only in the configuration variables.
    pub fn with_q_envelope(poly: Poly, width_q: Rational) -> Result<Self> {
        Self::new(poly, width_q, Rational::zero())
    }

    pub fn frame(&self) -> Frame {
        self.poly.frame()
    }

    pub fn zero_like(&self) -> Self {
        EnvelopePoly {
            poly: Poly::zero(self.frame()),
            width_q: self.width_q.clone(),
            width_p: self.width_p.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.width_q.is_zero() && self.width_p.is_zero()
    }

    pub fn same_widths(&self, other: &Self) -> bool {
        self.width_q == other.width_q && self.width_p == other.width_p
    }

    fn width_of(&self, var: usize) -> &Rational {
        if var < self.frame().n {
            &self.width_q
        } else {
            &self.width_p
        }
    }

    /// Sum; the zero function is compatible with every envelope.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            self.poly.frame().check(&other.poly.frame())?;
            return Ok(self.clone());
        }
        if self.is_zero() {
            self.poly.frame().check(&other.poly.frame())?;
            return Ok(other.clone());
        }
        if !self.same_widths(other) {
            return Err(Error::WidthMismatch);
        }
        Ok(EnvelopePoly {
            poly: self.poly.try_add(&other.poly)?,
            width_q: self.width_q.clone(),
            width_p: self.width_p.clone(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_poly(|p| -p)
    }

    pub fn map_poly<F: FnOnce(&Poly) -> Poly>(&self, f: F) -> Self {
        EnvelopePoly { poly: f(&self.poly), width_q: self.width_q.clone(), width_p: self.width_p.clone() }
    }

    pub fn scale(&self, c: &FormalScalar) -> Self {
        self.map_poly(|p| p.scale(c))
    }

    /// Pointwise product: polynomials multiply and widths add.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(EnvelopePoly {
            poly: self.poly.try_mul(&other.poly)?,
            width_q: &self.width_q + &other.width_q,
            width_p: &self.width_p + &other.width_p,
        })
    }

    pub fn conj(&self) -> Self {
        self.map_poly(|p| p.conj())
    }

    /// `∂/∂x_var` of `P·e^{−w|x|²}` is `(∂P − 2 w x_var P)·e^{−w|x|²}`.
    pub fn deriv(&self, var: usize) -> Result<Self> {
        let dp = self.poly.deriv(var)?;
        let w = self.width_of(var);
        let poly = if w.is_zero() {
            dp
        } else {
            let x = Poly::var(self.frame(), var);
            let shifted = (&x * &self.poly).scale_rational(&(w * int(2)));
            &dp - &shifted
        };
        Ok(self.map_poly(|_| poly))
    }

    pub fn truncate(&self, order: &Order) -> Self {
        self.map_poly(|p| p.truncate(order))
    }

    /// Pointwise value at `point`; the envelope must evaluate to 1 there
    /// (zero width or the group is at the origin) to stay rational.
    pub fn eval_point(&self, point: &[CRational]) -> Result<FormalScalar> {
        let n = self.frame().n;
        if point.len() != 2 * n {
            return Err(Error::DimensionMismatch("point length must be 2n"));
        }
        let q_origin = point[..n].iter().all(|x| x.is_zero());
        let p_origin = point[n..].iter().all(|x| x.is_zero());
        if (!self.width_q.is_zero() && !q_origin) || (!self.width_p.is_zero() && !p_origin) {
            return Err(Error::IrrationalWidth);
        }
        self.poly.eval_point(point)
    }

    /// Equal below λ-order `order`, with matching envelopes.
    pub fn eq_below(&self, other: &Self, order: &Order) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.poly.truncate(order).is_negligible(),
            Err(_) => false,
        }
    }
}
