//! Pre-Hilbert space identities over the ordered formal-scalar field, and
//! the weighted Bessel and Parseval relations for the orthogonal basis
//! `b_K = ȳ^K`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::weyl::{weyl_inner, WaveFunction};
use super::wick::{gram_diagonal, wick_inner, WickVector};
use crate::error::Result;
use crate::formal_scalar::{FormalScalar, Rational};
use crate::observables::PiSeries;

/// A vector space with a Hermitian product valued in the formal scalars
/// (possibly carrying a power of `π`).
pub trait PreHilbert: Sized {
    fn inner(&self, other: &Self) -> Result<PiSeries>;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
}

impl PreHilbert for WickVector {
    fn inner(&self, other: &Self) -> Result<PiSeries> {
        Ok(PiSeries::plain(wick_inner(self, other)?))
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(WickVector::add(self, other))
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        Ok(WickVector::sub(self, other))
    }
}

impl PreHilbert for WaveFunction {
    fn inner(&self, other: &Self) -> Result<PiSeries> {
        weyl_inner(self, other)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        self.try_sub(other)
    }
}

/// `‖u‖² = ⟨u, u⟩`, without square roots.
pub fn norm_sq<V: PreHilbert>(u: &V) -> Result<PiSeries> {
    u.inner(u)
}

/// `‖u+v‖² + ‖u−v‖² = 2‖u‖² + 2‖v‖²`.
pub fn parallelogram_check<V: PreHilbert>(u: &V, v: &V) -> Result<bool> {
    let two = FormalScalar::from_int(2);
    let lhs = norm_sq(&u.add(v)?)?.try_add(&norm_sq(&u.sub(v)?)?)?;
    let rhs = norm_sq(u)?.scale(&two).try_add(&norm_sq(v)?.scale(&two))?;
    Ok(lhs.same_as(&rhs))
}

/// `⟨b_K, φ⟩ / g_K`, the coefficient of `φ` along `ȳ^K`.
pub fn fourier_coefficient(phi: &WickVector, k: &[u32]) -> Result<FormalScalar> {
    let c = wick_inner(&WickVector::basis(k), phi)?;
    // g_K is an exact monomial, so the inverse is exact
    Ok(&c * &gram_diagonal(k).inv(&Rational::from_integer(0.into()))?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BesselReport {
    /// `Σ_{K∈F} |⟨b_K,φ⟩|² / g_K`.
    pub partial: FormalScalar,
    pub norm_sq: FormalScalar,
    pub holds: bool,
    pub equality: bool,
}

/// Weighted Bessel inequality on the finite index set `family`; equality is
/// Parseval's relation when `family` covers the support of `φ`.
pub fn bessel_check(phi: &WickVector, family: &[Vec<u32>]) -> Result<BesselReport> {
    let mut partial = FormalScalar::zero();
    for k in family {
        let c = wick_inner(&WickVector::basis(k), phi)?;
        let g = gram_diagonal(k);
        let term = &(&c.conj() * &c) * &g.inv(&Rational::from_integer(0.into()))?;
        partial += &term;
    }
    let norm = wick_inner(phi, phi)?;
    let diff = &norm - &partial;
    let ord = diff.signum()?;
    Ok(BesselReport { partial, norm_sq: norm, holds: ord != Ordering::Less, equality: ord == Ordering::Equal })
}

/// `φ_F = Σ_{K∈F} (⟨b_K,φ⟩/g_K) b_K`, the best approximation from
/// `span{b_K : K ∈ F}`.
pub fn best_approximation(phi: &WickVector, family: &[Vec<u32>]) -> Result<WickVector> {
    let mut out = WickVector::zero(phi.n);
    for k in family {
        out = out.add(&WickVector::basis(k).scale(&fourier_coefficient(phi, k)?));
    }
    Ok(out)
}

/// `‖φ − φ_F‖² ≤ ‖φ − χ‖²` for a competitor `χ`.
pub fn best_approximation_check(phi: &WickVector, family: &[Vec<u32>], competitor: &WickVector) -> Result<bool> {
    let best = best_approximation(phi, family)?;
    let a = wick_inner(&phi.sub(&best), &phi.sub(&best))?;
    let b = wick_inner(&phi.sub(competitor), &phi.sub(competitor))?;
    Ok(b.compare(&a)? != Ordering::Less)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagoras_and_parallelogram() {
        let u = WickVector::basis(&[1]);
        let v = WickVector::basis(&[2]);
        let s = norm_sq(&u.add(&v)).unwrap();
        assert_eq!(s, norm_sq(&u).unwrap().try_add(&norm_sq(&v).unwrap()).unwrap());
        assert!(parallelogram_check(&u, &v).unwrap());
        assert!(parallelogram_check(&u, &u).unwrap());
    }

    #[test]
    fn bessel_and_parseval() {
        let phi = WickVector::basis(&[1, 0]).add(&WickVector::basis(&[0, 2]).scale(&FormalScalar::from_int(3)));
        let r = bessel_check(&phi, &[alloc::vec![1, 0]]).unwrap();
        assert!(r.holds && !r.equality);
        let r = bessel_check(&phi, &[alloc::vec![1, 0], alloc::vec![0, 2]]).unwrap();
        assert!(r.equality);
        assert_eq!(best_approximation(&phi, &[alloc::vec![1, 0], alloc::vec![0, 2]]).unwrap(), phi);
        assert!(best_approximation_check(&phi, &[alloc::vec![0, 2]], &WickVector::basis(&[0, 2])).unwrap());
    }
}
