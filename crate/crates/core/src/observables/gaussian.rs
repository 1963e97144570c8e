//! Exact Gaussian moments.
//!
//! `∫ x^{2k} e^{−a x²} dx = (2k−1)!!/(2a)^k · √π/√a` and odd moments vanish,
//! so every integral over the envelope class is a Gaussian rational times a
//! power of `√π`, provided each width is a rational square.

use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{EnvelopePoly, Monomial};
use crate::error::{Error, Result};
use crate::formal_scalar::{exact_sqrt, CRational, FormalScalar, Rational};

/// `coeff · π^{pi_half_power/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiScalar {
    pub coeff: CRational,
    pub pi_half_power: i32,
}

impl PiScalar {
    pub fn new(coeff: CRational, pi_half_power: i32) -> Self {
        PiScalar { coeff, pi_half_power }
    }

    pub fn try_add(&self, other: &PiScalar) -> Result<PiScalar> {
        if other.coeff.is_zero() {
            return Ok(self.clone());
        }
        if self.coeff.is_zero() {
            return Ok(other.clone());
        }
        if self.pi_half_power != other.pi_half_power {
            return Err(Error::PiPowerMismatch);
        }
        Ok(PiScalar::new(&self.coeff + &other.coeff, self.pi_half_power))
    }

    pub fn mul(&self, other: &PiScalar) -> PiScalar {
        PiScalar::new(&self.coeff * &other.coeff, self.pi_half_power + other.pi_half_power)
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·π^({}/2)", self.coeff, self.pi_half_power)
    }
}

/// A formal scalar carrying a common factor `π^{pi_half_power/2}`: the value
/// of a functional whose λ-coefficients are all [`PiScalar`]s of one power.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiSeries {
    pub value: FormalScalar,
    pub pi_half_power: i32,
}

impl PiSeries {
    pub fn new(value: FormalScalar, pi_half_power: i32) -> Self {
        PiSeries { value, pi_half_power }
    }

    /// A value without any transcendental factor.
    pub fn plain(value: FormalScalar) -> Self {
        PiSeries { value, pi_half_power: 0 }
    }

    pub fn zero() -> Self {
        Self::plain(FormalScalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn try_add(&self, other: &PiSeries) -> Result<PiSeries> {
        if other.value.is_zero() {
            return Ok(self.clone());
        }
        if self.value.is_zero() {
            return Ok(other.clone());
        }
        if self.pi_half_power != other.pi_half_power {
            return Err(Error::PiPowerMismatch);
        }
        Ok(PiSeries::new(&self.value + &other.value, self.pi_half_power))
    }

    pub fn try_sub(&self, other: &PiSeries) -> Result<PiSeries> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> PiSeries {
        PiSeries::new(-&self.value, self.pi_half_power)
    }

    pub fn mul(&self, other: &PiSeries) -> PiSeries {
        PiSeries::new(&self.value * &other.value, self.pi_half_power + other.pi_half_power)
    }

    pub fn scale(&self, c: &FormalScalar) -> PiSeries {
        PiSeries::new(&self.value * c, self.pi_half_power)
    }

    pub fn scale_pi(&self, s: &PiScalar) -> PiSeries {
        PiSeries::new(self.value.scale(&s.coeff), self.pi_half_power + s.pi_half_power)
    }

    pub fn conj(&self) -> PiSeries {
        PiSeries::new(self.value.conj(), self.pi_half_power)
    }

    /// `|x|² = x·conj(x)`.
    pub fn norm_sq(&self) -> PiSeries {
        self.mul(&self.conj())
    }

    /// Sign in the field ordering; `π > 0` does not affect it.
    pub fn signum(&self) -> Result<core::cmp::Ordering> {
        self.value.signum()
    }

    /// Compares two real values carrying the same power of `π`
    /// (zero is compatible with every power).
    pub fn compare(&self, other: &PiSeries) -> Result<core::cmp::Ordering> {
        self.try_sub(other)?.signum()
    }

    /// Same value, treating an exact zero as compatible with every power.
    pub fn same_as(&self, other: &PiSeries) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.value.is_zero(),
            Err(_) => false,
        }
    }

    /// Coefficient of `λ^e` as a [`PiScalar`].
    pub fn coefficient(&self, e: &Rational) -> PiScalar {
        PiScalar::new(self.value.coeff(e), self.pi_half_power)
    }
}

impl fmt::Display for PiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_half_power == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "({})·π^({}/2)", self.value, self.pi_half_power)
        }
    }
}

/// Which variable groups an integral runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `dⁿq` only; the integrand must not depend on `p`, and have no
    /// `p`-envelope.
    Configuration,
    /// `d²ⁿx` over all of phase space.
    Phase,
}

/// `∫ x^k e^{−a x²} dx / √π` for one variable.
fn moment_1d(k: u32, a: &Rational) -> Result<Rational> {
    if a.is_zero() {
        return Err(Error::Divergent);
    }
    if k % 2 == 1 {
        return Ok(Rational::zero());
    }
    let sqrt_a = exact_sqrt(a).ok_or(Error::IrrationalWidth)?;
    let half = k / 2;
    let mut dfact = BigInt::one();
    let mut j = 1u32;
    while j < k {
        dfact *= BigInt::from(j);
        j += 2;
    }
    let denom = num_traits::pow(a * Rational::from_integer(BigInt::from(2)), half as usize);
    Ok(Rational::from_integer(dfact) / denom / sqrt_a)
}

/// Integral of a single monomial against the Gaussian envelope with the
/// given widths, over `domain`.
pub fn monomial_integral(m: &Monomial, n: usize, width_q: &Rational, width_p: &Rational, domain: Domain) -> Result<PiScalar> {
    let mut acc = Rational::one();
    let mut power = 0;
    for k in 0..n {
        acc *= moment_1d(m.0[k], width_q)?;
        power += 1;
    }
    match domain {
        Domain::Phase => {
            for k in 0..n {
                acc *= moment_1d(m.0[n + k], width_p)?;
                power += 1;
            }
        }
        Domain::Configuration => {
            if m.0[n..].iter().any(|&e| e != 0) {
                return Err(Error::MomentumDependence);
            }
        }
    }
    Ok(PiScalar::new(CRational::real(acc), power))
}

/// Exact integral of an envelope function, coefficient-wise in `λ`.
pub fn gaussian_integral(e: &EnvelopePoly, domain: Domain) -> Result<PiSeries> {
    let n = e.frame().n;
    if domain == Domain::Configuration && !e.width_p.is_zero() {
        return Err(Error::MomentumDependence);
    }
    let power = match domain {
        Domain::Configuration => n as i32,
        Domain::Phase => 2 * n as i32,
    };
    if e.width_q.is_zero() || (domain == Domain::Phase && e.width_p.is_zero()) {
        if e.is_zero() {
            return Ok(PiSeries::new(FormalScalar::zero(), power));
        }
        return Err(Error::Divergent);
    }
    let mut acc = FormalScalar::zero();
    for (m, c) in e.poly.terms() {
        let v = monomial_integral(m, n, &e.width_q, &e.width_p, domain)?;
        if !v.coeff.is_zero() {
            acc += &c.scale(&v.coeff);
        }
    }
    Ok(PiSeries::new(acc, power))
}
