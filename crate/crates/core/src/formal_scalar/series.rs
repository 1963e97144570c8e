use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{exact_sqrt, int, rational_power, AbsValue, CRational, Order, Rational, Valuation};
use crate::error::{Error, Result};

/// A prefix of a completed Newton-Puiseux series
/// `Σ_q a_q λ^q + O(λ^trunc)` with Gaussian-rational coefficients.
///
/// Invariants: exponents strictly increasing, no stored coefficient is zero,
/// every stored exponent lies below `trunc`. `trunc = ∞` marks an exact
/// (finite) series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalScalar {
    terms: Vec<(Rational, CRational)>,
    trunc: Order,
}

impl Default for FormalScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl FormalScalar {
    /// Canonicalizes arbitrary input: sorts, merges duplicates, drops zeros
    /// and every term at or above `trunc`.
    pub fn new<I>(terms: I, trunc: Order) -> Self
    where
        I: IntoIterator<Item = (Rational, CRational)>,
    {
        let mut acc: BTreeMap<Rational, CRational> = BTreeMap::new();
        for (e, c) in terms {
            if !trunc.admits(&e) {
                continue;
            }
            *acc.entry(e).or_default() += &c;
        }
        Self::from_map(acc, trunc)
    }

    fn from_map(acc: BTreeMap<Rational, CRational>, trunc: Order) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && trunc.admits(e))
            .collect();
        FormalScalar { terms, trunc }
    }

    pub fn zero() -> Self {
        FormalScalar { terms: Vec::new(), trunc: Order::Infinite }
    }

    pub fn one() -> Self {
        Self::constant(CRational::one())
    }

    /// `O(λ^order)`: nothing known below `order`.
    pub fn unknown(order: Rational) -> Self {
        FormalScalar { terms: Vec::new(), trunc: Order::Finite(order) }
    }

    pub fn constant(c: CRational) -> Self {
        Self::monomial(Rational::zero(), c)
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::constant(CRational::real(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// The formal parameter `λ`.
    pub fn lambda() -> Self {
        Self::monomial(Rational::one(), CRational::one())
    }

    pub fn lambda_pow(e: Rational) -> Self {
        Self::monomial(e, CRational::one())
    }

    pub fn monomial(e: Rational, c: CRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FormalScalar { terms: alloc::vec![(e, c)], trunc: Order::Infinite }
    }

    pub fn terms(&self) -> &[(Rational, CRational)] {
        &self.terms
    }

    pub fn trunc(&self) -> &Order {
        &self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_infinite()
    }

    /// Exactly zero (no terms and no truncation).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// No known nonzero coefficient (the value may still be `O(λ^trunc)`).
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_real())
    }

    /// Coefficient of `λ^e`; zero when `e` is not in the stored support.
    pub fn coeff(&self, e: &Rational) -> CRational {
        self.terms
            .binary_search_by(|(x, _)| x.cmp(e))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Rational, &CRational)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// `o(a)`. Errors when no coefficient is known but the series is truncated.
    pub fn valuation(&self) -> Result<Valuation> {
        match (self.terms.first(), &self.trunc) {
            (Some((e, _)), _) => Ok(Order::Finite(e.clone())),
            (None, Order::Infinite) => Ok(Order::Infinite),
            (None, Order::Finite(_)) => Err(Error::Indeterminate("valuation of O(λ^t)")),
        }
    }

    /// Exponent of `φ(a) = 2^{-o(a)}`.
    pub fn abs_value(&self) -> Result<AbsValue> {
        self.valuation().map(AbsValue)
    }

    /// A certain lower bound on the valuation: the first known exponent,
    /// or the truncation order when nothing is known.
    pub fn valuation_lower_bound(&self) -> Order {
        match self.terms.first() {
            Some((e, _)) => Order::Finite(e.clone()),
            None => self.trunc.clone(),
        }
    }

    /// Forgets everything at or above `order`.
    pub fn truncate(&self, order: &Order) -> Self {
        let trunc = core::cmp::min(self.trunc.clone(), order.clone());
        let terms = self.terms.iter().filter(|(e, _)| trunc.admits(e)).cloned().collect();
        FormalScalar { terms, trunc }
    }

    pub fn conj(&self) -> Self {
        FormalScalar {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Multiplies by `λ^e`.
    pub fn shift(&self, e: &Rational) -> Self {
        FormalScalar {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            trunc: &self.trunc + e,
        }
    }

    pub fn scale(&self, c: &CRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FormalScalar {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&CRational::real(r.clone()))
    }

    /// Product with every term at or above `bound` discarded.
    pub fn mul_truncated(&self, other: &Self, bound: &Order) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let t1 = &self.valuation_lower_bound() + &other.trunc;
        let t2 = &other.valuation_lower_bound() + &self.trunc;
        let trunc = t1.min(t2).min(bound.clone());
        let mut acc: BTreeMap<Rational, CRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if !trunc.admits(&e) {
                    // exponents of `other` are increasing
                    break;
                }
                *acc.entry(e).or_default() += &(c1 * c2);
            }
        }
        Self::from_map(acc, trunc)
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn leading_or_err(&self) -> Result<(Rational, CRational)> {
        match self.terms.first() {
            Some((e, c)) => Ok((e.clone(), c.clone())),
            None if self.is_exact() => Err(Error::DivisionByZero),
            None => Err(Error::Indeterminate("leading term unknown")),
        }
    }

    /// Writes `a = c λ^v (1 + u)` with `o(u) > 0`.
    fn factor_leading(&self) -> Result<(Rational, CRational, FormalScalar)> {
        let (v, c) = self.leading_or_err()?;
        let cinv = c.inv().ok_or(Error::DivisionByZero)?;
        let normalized = self.shift(&-v.clone()).scale(&cinv);
        let u = &normalized - &Self::one();
        Ok((v, c, u))
    }

    /// `Σ_k coeff(k) u^k` truncated at relative order `bound` (`o(u) > 0`).
    fn compose_power_series<F>(u: &FormalScalar, bound: &Order, coeff: F) -> FormalScalar
    where
        F: Fn(u32) -> Rational,
    {
        let mut sum = Self::one().truncate(bound);
        if u.is_zero() {
            return sum;
        }
        let mut power = Self::one();
        let mut k = 0u32;
        loop {
            k += 1;
            power = power.mul_truncated(u, bound);
            if power.has_no_terms() {
                // higher powers only raise the order further
                sum = &sum + &power;
                break;
            }
            let c = coeff(k);
            sum = &sum + &power.scale_rational(&c);
        }
        sum
    }

    /// Multiplicative inverse. `target` is the truncation order requested for
    /// the result; the result is exact when `self` is an exact monomial, and
    /// otherwise truncated at `min(target, reachable precision)`.
    pub fn inv(&self, target: &Rational) -> Result<Self> {
        let (v, c, u) = self.factor_leading()?;
        let cinv = c.inv().ok_or(Error::DivisionByZero)?;
        if u.is_zero() {
            return Ok(Self::monomial(-v, cinv));
        }
        // relative precision of the result equals that of u
        let rel_target = Order::Finite(target + &v).min(u.trunc.clone());
        let s = Self::compose_power_series(&u, &rel_target, |k| {
            if k % 2 == 0 {
                Rational::one()
            } else {
                -Rational::one()
            }
        });
        Ok(s.shift(&-v).scale(&cinv))
    }

    pub fn div(&self, other: &Self, target: &Rational) -> Result<Self> {
        let inv = other.inv(target)?;
        Ok(self * &inv)
    }

    /// Square root of a positive real series whose leading coefficient is a
    /// rational square. Exact for exact monomials, else truncated at
    /// `min(target, reachable precision)`.
    pub fn sqrt_positive(&self, target: &Rational) -> Result<Self> {
        if !self.is_real() {
            return Err(Error::NonReal);
        }
        let (v, c, u) = self.factor_leading().map_err(|e| match e {
            Error::DivisionByZero => Error::NotPositive,
            other => other,
        })?;
        if !c.re.is_positive() {
            return Err(Error::NotPositive);
        }
        let root = exact_sqrt(&c.re).ok_or(Error::NotPerfectSquare)?;
        let half_v = &v / int(2);
        if u.is_zero() {
            return Ok(Self::monomial(half_v, CRational::real(root)));
        }
        let rel_target = Order::Finite(target - &half_v).min(u.trunc.clone());
        // binom(1/2, k)
        let s = Self::compose_power_series(&u, &rel_target, |k| {
            let half = Rational::new(1.into(), 2.into());
            let mut b = Rational::one();
            for j in 0..k {
                b = b * (&half - int(j as i64)) / int(j as i64 + 1);
            }
            b
        });
        Ok(s.shift(&half_v).scale_rational(&root))
    }

    /// Sign of a real series with respect to the ordering in which the lowest
    /// nonvanishing coefficient decides.
    pub fn signum(&self) -> Result<Ordering> {
        if !self.is_real() {
            return Err(Error::NonReal);
        }
        match self.terms.first() {
            Some((_, c)) => Ok(c.re.cmp(&Rational::zero())),
            None if self.is_exact() => Ok(Ordering::Equal),
            None => Err(Error::Indeterminate("comparison under truncation")),
        }
    }

    /// Total order on real series.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        if !self.is_real() || !other.is_real() {
            return Err(Error::NonReal);
        }
        (self - other).signum()
    }

    /// Order-theoretic absolute value `|a| = max(a, -a)`.
    pub fn abs(&self) -> Result<Self> {
        Ok(match self.signum()? {
            Ordering::Less => -self,
            _ => self.clone(),
        })
    }

    /// Substitutes `λ = hbar`. Returns the value and whether it is exact
    /// (truncated series give the partial sum with `exact = false`).
    pub fn evaluate_at(&self, hbar: &Rational) -> Result<(CRational, bool)> {
        if !hbar.is_positive() {
            return Err(Error::Invalid("hbar must be positive".into()));
        }
        let mut acc = CRational::zero();
        for (e, c) in &self.terms {
            let p = rational_power(hbar, e).ok_or(Error::IrrationalRoot)?;
            acc += &c.scale(&p);
        }
        Ok((acc, self.is_exact()))
    }
}

impl<'a> Add<&'a FormalScalar> for &'a FormalScalar {
    type Output = FormalScalar;
    fn add(self, o: &FormalScalar) -> FormalScalar {
        let trunc = core::cmp::min(self.trunc.clone(), o.trunc.clone());
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let pick = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (e, c) = match pick {
                Ordering::Less => {
                    i += 1;
                    self.terms[i - 1].clone()
                }
                Ordering::Greater => {
                    j += 1;
                    o.terms[j - 1].clone()
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (self.terms[i - 1].0.clone(), &self.terms[i - 1].1 + &o.terms[j - 1].1)
                }
            };
            if !c.is_zero() && trunc.admits(&e) {
                out.push((e, c));
            }
        }
        FormalScalar { terms: out, trunc }
    }
}

impl Neg for &FormalScalar {
    type Output = FormalScalar;
    fn neg(self) -> FormalScalar {
        FormalScalar {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            trunc: self.trunc.clone(),
        }
    }
}

impl Neg for FormalScalar {
    type Output = FormalScalar;
    fn neg(self) -> FormalScalar {
        -&self
    }
}

impl<'a> Sub<&'a FormalScalar> for &'a FormalScalar {
    type Output = FormalScalar;
    fn sub(self, o: &FormalScalar) -> FormalScalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a FormalScalar> for &'a FormalScalar {
    type Output = FormalScalar;
    /// Cauchy product; truncation `min(o(a) + t_b, o(b) + t_a)`.
    fn mul(self, o: &FormalScalar) -> FormalScalar {
        self.mul_truncated(o, &Order::Infinite)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FormalScalar> for FormalScalar {
            type Output = FormalScalar;
            fn $m(self, o: FormalScalar) -> FormalScalar { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a FormalScalar> for FormalScalar {
            type Output = FormalScalar;
            fn $m(self, o: &FormalScalar) -> FormalScalar { (&self).$m(o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&FormalScalar> for FormalScalar {
    fn add_assign(&mut self, o: &FormalScalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&FormalScalar> for FormalScalar {
    fn sub_assign(&mut self, o: &FormalScalar) {
        *self = &*self - o;
    }
}

impl From<CRational> for FormalScalar {
    fn from(c: CRational) -> Self {
        FormalScalar::constant(c)
    }
}

impl From<Rational> for FormalScalar {
    fn from(r: Rational) -> Self {
        FormalScalar::from_rational(r)
    }
}

/// Human-readable form, e.g. `1 + 1/2i·λ^(1/2) + O(λ^3)`.
impl fmt::Display for FormalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return match &self.trunc {
                Order::Infinite => f.write_str("0"),
                Order::Finite(t) => write!(f, "O(λ^{})", t),
            };
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let simple = c.is_real() || c.re.is_zero();
            if e.is_zero() {
                write!(f, "{}", c)?;
            } else {
                if *c != CRational::one() {
                    if simple {
                        write!(f, "{}·", c)?;
                    } else {
                        write!(f, "({})·", c)?;
                    }
                }
                if e.is_one() {
                    f.write_str("λ")?;
                } else {
                    write!(f, "λ^({})", e)?;
                }
            }
        }
        if let Order::Finite(t) = &self.trunc {
            write!(f, " + O(λ^{})", t)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_scalar::rat;

    fn c(n: i64) -> CRational {
        CRational::from_int(n)
    }

    fn fin(terms: &[(Rational, i64)]) -> FormalScalar {
        FormalScalar::new(terms.iter().map(|(e, x)| (e.clone(), c(*x))), Order::Infinite)
    }

    #[test]
    fn make_series_canonicalizes() {
        let s = fin(&[(int(1), 1), (int(1), 2)]);
        assert_eq!(s, FormalScalar::monomial(int(1), c(3)));
        let z = fin(&[(int(0), 0)]);
        assert!(z.is_zero());
        assert_eq!(z.valuation().unwrap(), Order::Infinite);
        let p = fin(&[(rat(1, 2), 1), (int(-1), 1)]);
        assert_eq!(p.terms()[0].0, int(-1));
        assert_eq!(p.terms()[1].0, rat(1, 2));
        let t = FormalScalar::new([(int(0), c(1)), (int(3), c(1))], Order::Finite(int(2)));
        assert_eq!(t.terms().len(), 1);
    }

    #[test]
    fn difference_of_squares_and_inverse_monomial() {
        let h = rat(1, 2);
        let a = fin(&[(int(0), 1), (h.clone(), 1)]);
        let b = fin(&[(int(0), 1), (h, -1)]);
        assert_eq!(&a * &b, fin(&[(int(0), 1), (int(1), -1)]));
        let l = FormalScalar::lambda();
        assert_eq!(&l.inv(&int(5)).unwrap() * &l, FormalScalar::one());
        assert_eq!(l.inv(&int(5)).unwrap(), FormalScalar::lambda_pow(int(-1)));
    }

    #[test]
    fn truncation_propagates_through_products() {
        let a = FormalScalar::new([(int(0), c(1)), (int(1), c(1))], Order::Finite(int(2)));
        let b = FormalScalar::new([(int(0), c(1))], Order::Finite(int(1)));
        let p = &a * &b;
        assert_eq!(p.trunc(), &Order::Finite(int(1)));
        assert_eq!(p.terms(), FormalScalar::one().terms());
        // agrees with the untruncated product below order 1
        let exact = fin(&[(int(0), 1), (int(1), 1)]);
        let diff = (&exact - &p).truncate(&Order::Finite(int(1)));
        assert!(diff.has_no_terms());
    }

    #[test]
    fn geometric_inverse() {
        let a = fin(&[(int(0), 1), (int(1), -1)]);
        let inv = a.inv(&int(4)).unwrap();
        assert_eq!(inv, FormalScalar::new((0..4).map(|k| (int(k), c(1))), Order::Finite(int(4))));
        let back = &a * &inv;
        assert_eq!(back, FormalScalar::one().truncate(&Order::Finite(int(4))));
        assert_eq!(FormalScalar::from_int(2).inv(&int(3)).unwrap(), FormalScalar::from_rational(rat(1, 2)));
    }

    #[test]
    fn inverse_errors() {
        assert_eq!(FormalScalar::zero().inv(&int(3)), Err(Error::DivisionByZero));
        assert!(matches!(FormalScalar::unknown(int(2)).inv(&int(3)), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn conjugation() {
        let il = FormalScalar::monomial(int(1), CRational::i());
        assert_eq!(il.conj(), FormalScalar::monomial(int(1), -CRational::i()));
        let a = fin(&[(int(0), 1), (int(1), 1)]);
        assert_eq!(a.conj(), a);
    }

    #[test]
    fn valuation_and_ultrametric() {
        let a = fin(&[(int(2), 1), (int(3), 1)]);
        assert_eq!(a.valuation().unwrap(), Order::Finite(int(2)));
        let f = FormalScalar::lambda();
        let g = fin(&[(int(1), 1), (int(3), 1)]);
        assert_eq!((&f - &g).abs_value().unwrap().exponent(), &Order::Finite(int(3)));
        assert!(FormalScalar::unknown(int(1)).valuation().is_err());
    }

    #[test]
    fn ordering_is_non_archimedean() {
        let l = FormalScalar::lambda();
        assert_eq!(l.signum().unwrap(), Ordering::Greater);
        let a = fin(&[(int(0), 1), (int(1), -1000)]);
        assert_eq!(a.signum().unwrap(), Ordering::Greater);
        let big = FormalScalar::lambda_pow(int(-1));
        assert_eq!(big.compare(&FormalScalar::from_int(1_000_000)).unwrap(), Ordering::Greater);
        assert_eq!(l.compare(&FormalScalar::from_rational(rat(1, 1_000_000))).unwrap(), Ordering::Less);
        assert_eq!(FormalScalar::monomial(int(0), CRational::i()).signum(), Err(Error::NonReal));
        assert!(FormalScalar::unknown(int(1)).signum().is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(FormalScalar::monomial(int(2), c(4)).sqrt_positive(&int(5)).unwrap(), FormalScalar::monomial(int(1), c(2)));
        assert_eq!(FormalScalar::lambda().sqrt_positive(&int(5)).unwrap(), FormalScalar::lambda_pow(rat(1, 2)));
        let a = fin(&[(int(0), 1), (int(1), 1)]);
        let s = a.sqrt_positive(&int(3)).unwrap();
        let expected = FormalScalar::new(
            [(int(0), CRational::one()), (int(1), CRational::real(rat(1, 2))), (int(2), CRational::real(rat(-1, 8)))],
            Order::Finite(int(3)),
        );
        assert_eq!(s, expected);
        assert!((&(&s * &s) - &a).truncate(&Order::Finite(int(3))).has_no_terms());
        assert_eq!(FormalScalar::from_int(-1).sqrt_positive(&int(2)), Err(Error::NotPositive));
        assert_eq!(FormalScalar::from_int(2).sqrt_positive(&int(2)), Err(Error::NotPerfectSquare));
        assert_eq!(FormalScalar::zero().sqrt_positive(&int(2)), Err(Error::NotPositive));
    }

    #[test]
    fn evaluation() {
        let a = fin(&[(int(0), 1), (int(1), 2)]);
        assert_eq!(a.evaluate_at(&rat(1, 10)).unwrap(), (CRational::real(rat(6, 5)), true));
        let h = FormalScalar::lambda_pow(rat(1, 2));
        assert_eq!(h.evaluate_at(&rat(1, 4)).unwrap().0, CRational::real(rat(1, 2)));
        let t = FormalScalar::new([(int(0), c(1)), (int(1), c(1))], Order::Finite(int(2)));
        assert_eq!(t.evaluate_at(&rat(1, 10)).unwrap(), (CRational::real(rat(11, 10)), false));
        assert_eq!(h.evaluate_at(&rat(1, 2)), Err(Error::IrrationalRoot));
    }
}
