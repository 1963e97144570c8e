use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::Rational;

/// A Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CRational {
    pub re: Rational,
    pub im: Rational,
}

impl CRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        CRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        CRational { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(super::int(n))
    }

    pub fn i() -> Self {
        CRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|²`, which is always rational.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(CRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CRational { re: &self.re * r, im: &self.im * r }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = CRational::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl From<Rational> for CRational {
    fn from(r: Rational) -> Self {
        CRational::real(r)
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -self.im.clone())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn add(self, o: &CRational) -> CRational {
        CRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn sub(self, o: &CRational) -> CRational {
        CRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn mul(self, o: &CRational) -> CRational {
        CRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a CRational> for &'a CRational {
    type Output = CRational;
    /// Panics on division by zero.
    fn div(self, o: &CRational) -> CRational {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<CRational> for CRational {
            type Output = CRational;
            fn $m(self, o: CRational) -> CRational { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a CRational> for CRational {
            type Output = CRational;
            fn $m(self, o: &CRational) -> CRational { (&self).$m(o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&CRational> for CRational {
    fn add_assign(&mut self, o: &CRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&CRational> for CRational {
    fn sub_assign(&mut self, o: &CRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}
