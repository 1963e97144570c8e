//! Substituting `λ = ħ`: the subspaces `H(ħ) ⊇ N(ħ)` for finitely supported
//! GNS vectors, the induced Hermitian product, the Bargmann Gaussian product
//! and a root-test radius estimate.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::formal_scalar::{exact_root, factorial, int, pow_i32, CRational, FormalScalar, Rational};
use crate::gns::{wick_inner, WickVector};
use crate::observables::{FrameKind, Poly};

fn multi_factorial(k: &[u32]) -> BigInt {
    k.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e))
}

fn check_hbar(hbar: &Rational) -> Result<()> {
    if hbar.is_positive() {
        Ok(())
    } else {
        Err(Error::Invalid("hbar must be positive".into()))
    }
}

/// `g_K(ħ) = (2ħ)^{|K|} K!`.
fn gram_at(k: &[u32], hbar: &Rational) -> Rational {
    let deg: u32 = k.iter().sum();
    pow_i32(&(hbar * int(2)), deg as i32) * Rational::from_integer(multi_factorial(k))
}

fn exact_value(s: &FormalScalar, hbar: &Rational) -> Result<CRational> {
    let (v, exact) = s.evaluate_at(hbar)?;
    if !exact {
        return Err(Error::Indeterminate("coefficient series known only up to truncation"));
    }
    Ok(v)
}

/// `⟨b_K, φ⟩ = (2λ)^{|K|} a_K` at `λ = ħ`.
fn components_at(phi: &WickVector, hbar: &Rational) -> Result<BTreeMap<Vec<u32>, CRational>> {
    let mut out = BTreeMap::new();
    for (k, a) in phi.coeffs() {
        let deg: u32 = k.iter().sum();
        let c = exact_value(a, hbar)?.scale(&pow_i32(&(hbar * int(2)), deg as i32));
        out.insert(k.clone(), c);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    InN,
    InH,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexDiagnostic {
    pub k: Vec<u32>,
    /// `⟨b_K, φ⟩|_{λ=ħ}`.
    pub value: CRational,
    pub absolutely_convergent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HbarReport {
    pub indices: Vec<IndexDiagnostic>,
    /// `Σ_K |⟨b_K,φ⟩_ħ|² / g_K(ħ)`.
    pub l2: Rational,
    pub membership: Membership,
}

/// Finite support makes every coefficient series a polynomial in `λ`, so
/// absolute convergence is automatic and the `ℓ²` sum is finite.
pub fn h_space_member(phi: &WickVector, hbar: &Rational) -> Result<HbarReport> {
    check_hbar(hbar)?;
    let comps = components_at(phi, hbar)?;
    let mut l2 = Rational::zero();
    let mut indices = Vec::new();
    for (k, v) in comps {
        l2 += v.norm_sq() / gram_at(&k, hbar);
        indices.push(IndexDiagnostic { k, value: v, absolutely_convergent: true });
    }
    let membership = if indices.iter().all(|d| d.value.is_zero()) {
        Membership::InN
    } else if indices.iter().all(|d| d.absolutely_convergent) {
        Membership::InH
    } else {
        Membership::Out
    };
    Ok(HbarReport { indices, l2, membership })
}

/// `⟨φ, ψ⟩_ħ = Σ_K conj(⟨b_K,φ⟩_ħ) ⟨b_K,ψ⟩_ħ / g_K(ħ)`.
pub fn hbar_inner(phi: &WickVector, psi: &WickVector, hbar: &Rational) -> Result<CRational> {
    check_hbar(hbar)?;
    if phi.n != psi.n {
        return Err(Error::DimensionMismatch("vectors of different dimension"));
    }
    let a = components_at(phi, hbar)?;
    let b = components_at(psi, hbar)?;
    let mut acc = CRational::zero();
    for (k, x) in &a {
        if let Some(y) = b.get(k) {
            acc = &acc + &(&x.conj() * y).scale(&(Rational::one() / gram_at(k, hbar)));
        }
    }
    Ok(acc)
}

fn antiholomorphic_coeffs(f: &Poly, hbar: &Rational) -> Result<BTreeMap<Vec<u32>, CRational>> {
    if f.frame().kind != FrameKind::Wick {
        return Err(Error::FrameMismatch);
    }
    let n = f.frame().n;
    let mut out = BTreeMap::new();
    for (m, c) in f.terms() {
        if m.0[..n].iter().any(|&e| e != 0) {
            return Err(Error::Invalid("Bargmann functions must be anti-holomorphic".into()));
        }
        out.insert(m.0[n..].to_vec(), exact_value(c, hbar)?);
    }
    Ok(out)
}

/// `⟨F, G⟩ = (2πħ)^{−n} ∫ e^{−|z|²/2ħ} conj(F) G d^{2n}z` for polynomials in
/// `z̄`, through `⟨z̄^K, z̄^L⟩ = δ_{KL} (2ħ)^{|K|} K!`. Coefficients depending
/// on `λ` are evaluated at `λ = ħ`.
pub fn bargmann_inner(f: &Poly, g: &Poly, hbar: &Rational) -> Result<CRational> {
    check_hbar(hbar)?;
    f.frame().check(&g.frame())?;
    let a = antiholomorphic_coeffs(f, hbar)?;
    let b = antiholomorphic_coeffs(g, hbar)?;
    let mut acc = CRational::zero();
    for (k, x) in &a {
        if let Some(y) = b.get(k) {
            acc = &acc + &(&x.conj() * y).scale(&gram_at(k, hbar));
        }
    }
    Ok(acc)
}

/// `wick_inner(φ,ψ)|_{λ=ħ}` against the Bargmann product of the associated
/// anti-holomorphic polynomials.
pub fn formal_to_bargmann_consistency(phi: &WickVector, psi: &WickVector, hbar: &Rational) -> Result<bool> {
    let formal = exact_value(&wick_inner(phi, psi)?, hbar)?;
    let analytic = bargmann_inner(&phi.to_poly(), &psi.to_poly(), hbar)?;
    Ok(formal == analytic)
}

/// `φ` at `λ = ħ` as a Bargmann polynomial coefficient map `K ↦ a_K(ħ)/K!`.
pub fn vector_at(phi: &WickVector, hbar: &Rational) -> Result<BTreeMap<Vec<u32>, CRational>> {
    check_hbar(hbar)?;
    let mut out = BTreeMap::new();
    for (k, a) in phi.coeffs() {
        let v = exact_value(a, hbar)?.scale(&Rational::new(BigInt::one(), multi_factorial(k)));
        if !v.is_zero() {
            out.insert(k.clone(), v);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HbarBesselReport {
    pub partial: Rational,
    pub norm_sq: Rational,
    pub holds: bool,
    pub equality: bool,
}

/// Weighted Bessel inequality and Parseval's relation at `λ = ħ`.
pub fn parseval_bessel_at_hbar(phi: &WickVector, family: &[Vec<u32>], hbar: &Rational) -> Result<HbarBesselReport> {
    let comps = components_at(phi, hbar)?;
    let mut partial = Rational::zero();
    for k in family {
        if let Some(v) = comps.get(k) {
            partial += v.norm_sq() / gram_at(k, hbar);
        }
    }
    let norm = hbar_inner(phi, phi, hbar)?;
    if !norm.im.is_zero() {
        return Err(Error::NonReal);
    }
    let ord = norm.re.cmp(&partial);
    Ok(HbarBesselReport { partial, norm_sq: norm.re, holds: ord != Ordering::Less, equality: ord == Ordering::Equal })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusEstimate {
    /// `None` stands for `∞`.
    pub radius: Option<Rational>,
    /// Exact value of the prefix root test (otherwise a rational lower bound).
    pub exact: bool,
    /// Fewer than two nonzero terms of positive order.
    pub low_confidence: bool,
}

/// Largest rational `y` found by bisection with `y^k ≤ t`.
fn root_lower_bound(t: &Rational, k: u32, steps: u32) -> Rational {
    let mut lo = Rational::zero();
    let mut hi = if *t > Rational::one() { t.clone() } else { Rational::one() };
    for _ in 0..steps {
        let mid = (&lo + &hi) / int(2);
        if num_traits::pow(mid.clone(), k as usize) <= *t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Root-test surrogate `min_q |a_q|^{−1/q}` over the terms of positive order.
/// A finite (exact) series is entire.
pub fn radius_estimate(s: &FormalScalar) -> RadiusEstimate {
    let positive: Vec<&(Rational, CRational)> = s.terms().iter().filter(|(q, _)| q.is_positive()).collect();
    let low_confidence = positive.len() < 2;
    if s.is_exact() {
        return RadiusEstimate { radius: None, exact: true, low_confidence };
    }
    let mut best: Option<Rational> = None;
    let mut exact = true;
    for (q, a) in positive {
        // |a|^{−1/q} = (|a|²)^{−d/(2m)} with q = m/d
        let m = q.numer().clone();
        let d = q.denom().clone();
        let Ok(m) = u32::try_from(m) else { continue };
        let Ok(d) = i32::try_from(d) else { continue };
        let t = pow_i32(&a.norm_sq(), -d);
        let candidate = match exact_root(&t, 2 * m) {
            Some(r) => r,
            None => {
                exact = false;
                root_lower_bound(&t, 2 * m, 64)
            }
        };
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    RadiusEstimate { radius: best, exact, low_confidence }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_scalar::{rat, Order};
    use crate::observables::Frame;

    #[test]
    fn membership_examples() {
        let h = rat(1, 2);
        assert_eq!(h_space_member(&WickVector::basis(&[1]), &h).unwrap().membership, Membership::InH);
        let shifted = &FormalScalar::lambda() - &FormalScalar::from_rational(h.clone());
        let v = WickVector::basis(&[1]).scale(&shifted);
        assert_eq!(h_space_member(&v, &h).unwrap().membership, Membership::InN);
        assert_eq!(hbar_inner(&v, &v, &h).unwrap(), CRational::zero());
        assert_eq!(h_space_member(&WickVector::zero(1), &h).unwrap().membership, Membership::InN);
    }

    #[test]
    fn bargmann_moments() {
        let k = Frame::wick(1);
        let h = rat(1, 137);
        let one = Poly::one(k);
        let zb = Poly::second(k, 0);
        assert_eq!(bargmann_inner(&one, &one, &h).unwrap(), CRational::one());
        assert_eq!(bargmann_inner(&zb, &zb, &h).unwrap(), CRational::real(rat(2, 137)));
        assert!(bargmann_inner(&zb, &(&zb * &zb), &h).unwrap().is_zero());
        let v = WickVector::basis(&[3]).add(&WickVector::basis(&[1]).scale(&FormalScalar::lambda()));
        assert!(formal_to_bargmann_consistency(&v, &v, &rat(1, 2)).unwrap());
    }

    #[test]
    fn bessel_at_hbar() {
        let phi = WickVector::basis(&[1]).add(&WickVector::basis(&[2]));
        let h = rat(1, 2);
        assert!(parseval_bessel_at_hbar(&phi, &[alloc::vec![1], alloc::vec![2]], &h).unwrap().equality);
        let r = parseval_bessel_at_hbar(&phi, &[alloc::vec![1]], &h).unwrap();
        assert!(r.holds && !r.equality);
    }

    #[test]
    fn radius() {
        let geometric = (&FormalScalar::one() - &FormalScalar::monomial(int(1), CRational::from_int(2)))
            .inv(&int(8))
            .unwrap();
        let r = radius_estimate(&geometric);
        assert_eq!(r.radius, Some(rat(1, 2)));
        assert!(r.exact && !r.low_confidence);
        assert_eq!(radius_estimate(&(&FormalScalar::one() + &FormalScalar::lambda())).radius, None);
        let empty = radius_estimate(&FormalScalar::unknown(int(3)));
        assert!(empty.radius.is_none() && empty.low_confidence);
        // a_1 = 2 alone: lower bound of 1/2 with low confidence
        let s = FormalScalar::new([(int(1), CRational::from_int(2))], Order::Finite(int(2)));
        assert!(radius_estimate(&s).low_confidence);
        let s = FormalScalar::new([(int(1), CRational::from_int(3)), (int(2), CRational::from_int(3))], Order::Finite(int(3)));
        let r = radius_estimate(&s);
        assert!(!r.exact);
        let b = r.radius.unwrap();
        assert!(&b * &b * int(3) <= int(1));
    }
}
