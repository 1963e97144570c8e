//! Star products: the Wick product on `ℂⁿ`, the Weyl-Moyal product on
//! `ℝ²ⁿ`, and the formal Wick product `∘` on the formal Wick algebra `Wₙ`.
//!
//! On polynomials every bidifferential series terminates and the products are
//! computed exactly, monomial pair by monomial pair. On the Gaussian-enveloped
//! class the Weyl-Moyal series is accumulated through generic derivatives and
//! truncated in `λ` unless it provably terminates.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::formal_scalar::{factorial, falling_factorial, int, CRational, FormalScalar, Order, Rational};
use crate::observables::{EnvelopePoly, FrameKind, Monomial, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StarKind {
    /// `f * g = Σ_r (2λ)^r/r! ∂^r f/∂z^I ∂^r g/∂z̄^I`.
    Wick,
    /// `f * g = Σ_r (iλ/2)^r Λ^{(r)}(f, g)`.
    WeylMoyal,
    /// The same bidifferential operator as `Wick`, on the formal Wick algebra
    /// with generators `y, ȳ` (stored in a Wick frame).
    FormalWickWn,
}

impl StarKind {
    pub fn frame_kind(self) -> FrameKind {
        match self {
            StarKind::WeylMoyal => FrameKind::Weyl,
            StarKind::Wick | StarKind::FormalWickWn => FrameKind::Wick,
        }
    }

    fn check(self, f: &Poly, g: &Poly) -> Result<()> {
        f.frame().check(&g.frame())?;
        if f.frame().kind != self.frame_kind() {
            return Err(Error::FrameMismatch);
        }
        Ok(())
    }
}

/// Calls `visit` with every multiindex `0 ≤ idx ≤ bounds` (componentwise).
pub(crate) fn for_each_multiindex<F: FnMut(&[u32])>(bounds: &[u32], mut visit: F) {
    let mut idx = vec![0u32; bounds.len()];
    loop {
        visit(&idx);
        let mut k = 0;
        loop {
            if k == bounds.len() {
                return;
            }
            if idx[k] < bounds[k] {
                idx[k] += 1;
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Calls `visit` with every multiindex of length `len` and total degree `r`.
pub(crate) fn for_each_composition<F: FnMut(&[u32])>(len: usize, r: u32, mut visit: F) {
    fn rec<F: FnMut(&[u32])>(idx: &mut Vec<u32>, pos: usize, left: u32, visit: &mut F) {
        if pos + 1 == idx.len() {
            idx[pos] = left;
            visit(idx);
            return;
        }
        for v in 0..=left {
            idx[pos] = v;
            rec(idx, pos + 1, left - v, visit);
        }
    }
    if len == 0 {
        if r == 0 {
            visit(&[]);
        }
        return;
    }
    let mut idx = vec![0u32; len];
    rec(&mut idx, 0, r, &mut visit);
}

fn multi_factorial(idx: &[u32]) -> BigInt {
    idx.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k))
}

fn accumulate(acc: &mut BTreeMap<Monomial, FormalScalar>, m: Monomial, c: FormalScalar) {
    let e = acc.entry(m).or_default();
    *e += &c;
}

fn wick_monomials(m1: &Monomial, m2: &Monomial, n: usize, c: &FormalScalar, acc: &mut BTreeMap<Monomial, FormalScalar>) {
    let bounds: Vec<u32> = (0..n).map(|k| m1.0[k].min(m2.0[n + k])).collect();
    for_each_multiindex(&bounds, |idx| {
        let r: u32 = idx.iter().sum();
        let mut num = BigInt::one();
        let mut out = m1.mul(m2);
        for k in 0..n {
            num *= falling_factorial(m1.0[k], idx[k]) * falling_factorial(m2.0[n + k], idx[k]);
            out.0[k] -= idx[k];
            out.0[n + k] -= idx[k];
        }
        let factor = Rational::new(num * BigInt::from(2).pow(r), multi_factorial(idx));
        let coef = c.shift(&int(r as i64)).scale_rational(&factor);
        accumulate(acc, out, coef);
    });
}

fn moyal_monomials(m1: &Monomial, m2: &Monomial, n: usize, c: &FormalScalar, acc: &mut BTreeMap<Monomial, FormalScalar>) {
    // A_k pairs ∂_{q^k} f with ∂_{p_k} g (sign +), B_k pairs ∂_{p_k} f with ∂_{q^k} g (sign −).
    let mut bounds = Vec::with_capacity(2 * n);
    for k in 0..n {
        bounds.push(m1.0[k].min(m2.0[n + k]));
    }
    for k in 0..n {
        bounds.push(m1.0[n + k].min(m2.0[k]));
    }
    for_each_multiindex(&bounds, |idx| {
        let (a, b) = idx.split_at(n);
        let na: u32 = a.iter().sum();
        let nb: u32 = b.iter().sum();
        let r = na + nb;
        let mut num = BigInt::one();
        let mut out = m1.mul(m2);
        for k in 0..n {
            num *= falling_factorial(m1.0[k], a[k]) * falling_factorial(m2.0[n + k], a[k]);
            num *= falling_factorial(m1.0[n + k], b[k]) * falling_factorial(m2.0[k], b[k]);
            out.0[k] -= a[k] + b[k];
            out.0[n + k] -= a[k] + b[k];
        }
        if nb % 2 == 1 {
            num = -num;
        }
        let real = Rational::new(num, multi_factorial(idx) * BigInt::from(2).pow(r));
        // i^r
        let unit = match r % 4 {
            0 => CRational::one(),
            1 => CRational::i(),
            2 => -CRational::one(),
            _ => -CRational::i(),
        };
        let coef = c.shift(&int(r as i64)).scale(&unit.scale(&real));
        accumulate(acc, out, coef);
    });
}

/// Exact star product of two polynomials.
pub fn star(kind: StarKind, f: &Poly, g: &Poly) -> Result<Poly> {
    kind.check(f, g)?;
    let n = f.frame().n;
    let mut acc = BTreeMap::new();
    for (m1, c1) in f.terms() {
        for (m2, c2) in g.terms() {
            let c = c1 * c2;
            match kind {
                StarKind::Wick | StarKind::FormalWickWn => wick_monomials(m1, m2, n, &c, &mut acc),
                StarKind::WeylMoyal => moyal_monomials(m1, m2, n, &c, &mut acc),
            }
        }
    }
    Poly::from_terms(f.frame(), acc)
}

/// `f ⋆ g − g ⋆ f`.
pub fn commutator(kind: StarKind, f: &Poly, g: &Poly) -> Result<Poly> {
    Ok(&star(kind, f, g)? - &star(kind, g, f)?)
}

/// First-order bracket of the Wick product, normalized so that the
/// `λ¹`-coefficient of `f * g − g * f` is `i·{f, g}`:
/// `{f, g} = −2i Σₖ (∂f/∂zᵏ ∂g/∂z̄ᵏ − ∂f/∂z̄ᵏ ∂g/∂zᵏ)`.
pub fn wick_bracket(f: &Poly, g: &Poly) -> Result<Poly> {
    f.frame().check(&g.frame())?;
    if f.frame().kind != FrameKind::Wick {
        return Err(Error::FrameMismatch);
    }
    let n = f.frame().n;
    let mut out = Poly::zero(f.frame());
    for k in 0..n {
        let a = &f.deriv_n(k, 1) * &g.deriv_n(n + k, 1);
        let b = &f.deriv_n(n + k, 1) * &g.deriv_n(k, 1);
        out = &out + &(&a - &b);
    }
    Ok(out.scale_c(&CRational::new(Rational::zero(), int(-2))))
}

/// Memoized mixed partial derivatives of one envelope function.
struct DerivCache<'a> {
    base: &'a EnvelopePoly,
    cache: BTreeMap<Vec<u32>, EnvelopePoly>,
}

impl<'a> DerivCache<'a> {
    fn new(base: &'a EnvelopePoly) -> Self {
        DerivCache { base, cache: BTreeMap::new() }
    }

    fn get(&mut self, alpha: &[u32]) -> Result<EnvelopePoly> {
        if let Some(d) = self.cache.get(alpha) {
            return Ok(d.clone());
        }
        let d = match alpha.iter().position(|&a| a > 0) {
            None => self.base.clone(),
            Some(i) => {
                let mut prev = alpha.to_vec();
                prev[i] -= 1;
                self.get(&prev)?.deriv(i)?
            }
        };
        self.cache.insert(alpha.to_vec(), d.clone());
        Ok(d)
    }
}

fn check_weyl_env(f: &EnvelopePoly, g: &EnvelopePoly) -> Result<()> {
    f.frame().check(&g.frame())?;
    if f.frame().kind != FrameKind::Weyl {
        return Err(Error::FrameMismatch);
    }
    Ok(())
}

fn lambda_r_cached(f: &mut DerivCache, g: &mut DerivCache, r: u32) -> Result<EnvelopePoly> {
    let n = f.base.frame().n;
    let mut out = f.base.try_mul(g.base)?.zero_like();
    let mut failure = None;
    for_each_composition(2 * n, r, |idx| {
        if failure.is_some() {
            return;
        }
        let (a, b) = idx.split_at(n);
        let mut alpha = a.to_vec();
        alpha.extend_from_slice(b);
        let mut beta = b.to_vec();
        beta.extend_from_slice(a);
        let term = (|| -> Result<EnvelopePoly> {
            let df = f.get(&alpha)?;
            let dg = g.get(&beta)?;
            let nb: u32 = b.iter().sum();
            let mut c = Rational::new(BigInt::one(), multi_factorial(a) * multi_factorial(b));
            if nb % 2 == 1 {
                c = -c;
            }
            Ok(df.try_mul(&dg)?.map_poly(|p| p.scale_rational(&c)))
        })();
        match term.and_then(|t| out.try_add(&t)) {
            Ok(s) => out = s,
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `Λ^{(r)}(f, g) = (1/r!) Λ^{i₁j₁}···Λ^{i_r j_r} ∂^r f/∂x^I ∂^r g/∂x^J`
/// with `Λ^{qᵏpₖ} = +1`, `Λ^{pₖqᵏ} = −1`.
pub fn lambda_r(f: &EnvelopePoly, g: &EnvelopePoly, r: u32) -> Result<EnvelopePoly> {
    check_weyl_env(f, g)?;
    lambda_r_cached(&mut DerivCache::new(f), &mut DerivCache::new(g), r)
}

fn derivative_capacity(e: &EnvelopePoly, first_block: bool) -> Option<u32> {
    let (w, d) = if first_block {
        (&e.width_q, e.poly.degree_first())
    } else {
        (&e.width_p, e.poly.degree_second())
    };
    if w.is_zero() {
        Some(d)
    } else {
        None
    }
}

/// Largest `r` with a possibly nonzero `Λ^{(r)}(f, g)`, when finite.
fn termination_bound(f: &EnvelopePoly, g: &EnvelopePoly) -> Option<u32> {
    let cap = |a: Option<u32>, b: Option<u32>| match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    };
    let a = cap(derivative_capacity(f, true), derivative_capacity(g, false))?;
    let b = cap(derivative_capacity(f, false), derivative_capacity(g, true))?;
    Some(a + b)
}

/// Weyl-Moyal product on the envelope class.
///
/// Widths add. When the bidifferential series provably terminates (e.g. both
/// factors polynomial in `p`) the result is exact; otherwise every `Λ^{(r)}`
/// contributing below λ-order `order` is accumulated and the result is
/// truncated at `order`.
pub fn star_envelope(f: &EnvelopePoly, g: &EnvelopePoly, order: &Rational) -> Result<EnvelopePoly> {
    check_weyl_env(f, g)?;
    let mut fc = DerivCache::new(f);
    let mut gc = DerivCache::new(g);
    let half_i = CRational::new(Rational::zero(), Rational::new(1.into(), 2.into()));
    let (r_max, truncation) = match termination_bound(f, g) {
        Some(r) => (r, None),
        None => {
            let base = &f.poly.valuation_lower_bound() + &g.poly.valuation_lower_bound();
            let Order::Finite(base) = base else {
                return f.try_mul(g);
            };
            let span = order - &base;
            if span <= Rational::zero() {
                return Ok(f.try_mul(g)?.zero_like().map_poly(|p| p.clone()).truncate_all(order));
            }
            let r = span.ceil().to_integer();
            let r: u32 = r.try_into().map_err(|_| Error::Invalid("order too large".into()))?;
            (r.saturating_sub(1), Some(Order::Finite(order.clone())))
        }
    };
    let mut out = f.try_mul(g)?;
    for r in 1..=r_max {
        let l = lambda_r_cached(&mut fc, &mut gc, r)?;
        let factor = FormalScalar::monomial(int(r as i64), half_i.powi(r));
        out = out.try_add(&l.scale(&factor))?;
    }
    Ok(match truncation {
        Some(t) => out.truncate_all(t.finite().expect("finite")),
        None => out,
    })
}

impl EnvelopePoly {
    /// Truncates every coefficient at `order`, recording the truncation even
    /// on monomials that vanish.
    fn truncate_all(&self, order: &Rational) -> EnvelopePoly {
        let t = Order::Finite(order.clone());
        let mut poly = self.poly.truncate(&t);
        if poly.is_zero() {
            poly.add_term(Monomial::one(self.frame().vars()), FormalScalar::unknown(order.clone()));
        }
        self.map_poly(|_| poly)
    }
}

/// `Δ = Σₖ ∂²/∂qᵏ∂pₖ`.
pub fn delta_op(f: &EnvelopePoly) -> Result<EnvelopePoly> {
    if f.frame().kind != FrameKind::Weyl {
        return Err(Error::FrameMismatch);
    }
    let n = f.frame().n;
    let mut out = f.zero_like();
    for k in 0..n {
        out = out.try_add(&f.deriv(k)?.deriv(n + k)?)?;
    }
    Ok(out)
}

pub fn delta_op_poly(f: &Poly) -> Result<Poly> {
    Ok(delta_op(&f.clone().into())?.poly)
}

fn exp_delta(f: &EnvelopePoly, sign: i64) -> Result<EnvelopePoly> {
    if !f.width_p.is_zero() {
        return Err(Error::MomentumEnvelope);
    }
    // (±iλ/2)^m Δ^m / m!
    let step = FormalScalar::monomial(int(1), CRational::new(Rational::zero(), Rational::new(sign.into(), 2.into())));
    let mut out = f.clone();
    let mut term = f.clone();
    let mut m = 0i64;
    loop {
        m += 1;
        term = delta_op(&term)?;
        if term.is_zero() {
            break;
        }
        term = term.scale(&step.scale_rational(&Rational::new(1.into(), m.into())));
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// `S = exp(−(iλ/2)Δ)`; requires a polynomial dependence on `p`.
pub fn op_s(f: &EnvelopePoly) -> Result<EnvelopePoly> {
    exp_delta(f, -1)
}

/// `S⁻¹ = exp(+(iλ/2)Δ)`.
pub fn op_s_inv(f: &EnvelopePoly) -> Result<EnvelopePoly> {
    exp_delta(f, 1)
}

pub fn op_s_poly(f: &Poly) -> Result<Poly> {
    Ok(op_s(&f.clone().into())?.poly)
}

pub fn op_s_inv_poly(f: &Poly) -> Result<Poly> {
    Ok(op_s_inv(&f.clone().into())?.poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_scalar::rat;
    use crate::observables::Frame;

    fn lam(c: CRational) -> FormalScalar {
        FormalScalar::monomial(int(1), c)
    }

    #[test]
    fn wick_examples() {
        let k = Frame::wick(1);
        let z = Poly::first(k, 0);
        let zb = Poly::second(k, 0);
        let zzb = &z * &zb;
        let two_lam = Poly::constant(k, lam(CRational::from_int(2)));
        assert_eq!(star(StarKind::Wick, &z, &zb).unwrap(), &zzb + &two_lam);
        assert_eq!(star(StarKind::Wick, &zb, &z).unwrap(), zzb);
        assert_eq!(commutator(StarKind::Wick, &z, &zb).unwrap(), two_lam);
        assert_eq!(star(StarKind::FormalWickWn, &z, &zb).unwrap(), star(StarKind::Wick, &z, &zb).unwrap());
    }

    #[test]
    fn weyl_examples() {
        let w = Frame::weyl(1);
        let q = Poly::first(w, 0);
        let p = Poly::second(w, 0);
        let half_i = Poly::constant(w, lam(CRational::new(int(0), rat(1, 2))));
        assert_eq!(star(StarKind::WeylMoyal, &q, &p).unwrap(), &(&q * &p) + &half_i);
        assert_eq!(star(StarKind::WeylMoyal, &p, &q).unwrap(), &(&q * &p) - &half_i);
        assert_eq!(commutator(StarKind::WeylMoyal, &q, &p).unwrap(), Poly::constant(w, lam(CRational::i())));
        assert!(commutator(StarKind::WeylMoyal, &q, &q).unwrap().is_zero());
        assert_eq!(star(StarKind::Wick, &q, &p), Err(Error::FrameMismatch));
    }

    #[test]
    fn delta_and_s() {
        let w = Frame::weyl(1);
        let q = Poly::first(w, 0);
        let p = Poly::second(w, 0);
        let qp = &q * &p;
        assert_eq!(delta_op_poly(&qp).unwrap(), Poly::one(w));
        assert_eq!(delta_op_poly(&(&qp * &q)).unwrap(), q.scale_rational(&int(2)));
        assert!(delta_op_poly(&(&q * &q)).unwrap().is_zero());
        let s = op_s_poly(&qp).unwrap();
        assert_eq!(s, &qp - &Poly::constant(w, lam(CRational::new(int(0), rat(1, 2)))));
        assert_eq!(op_s_poly(&q).unwrap(), q);
        assert_eq!(op_s_inv_poly(&s).unwrap(), qp);
        let env = EnvelopePoly::new(q.clone(), int(0), int(1)).unwrap();
        assert_eq!(op_s(&env), Err(Error::MomentumEnvelope));
    }

    #[test]
    fn envelope_zeroth_order_is_pointwise() {
        let w = Frame::weyl(1);
        let q = Poly::first(w, 0);
        let f = EnvelopePoly::new(q.clone(), rat(1, 2), int(0)).unwrap();
        let g = EnvelopePoly::new(&q * &q, rat(1, 2), int(0)).unwrap();
        let prod = star_envelope(&f, &g, &int(3)).unwrap();
        assert_eq!(prod.width_q, int(1));
        // both factors are p-free: every Λ^{(r≥1)} vanishes
        assert_eq!(prod, f.try_mul(&g).unwrap());
    }

    #[test]
    fn compositions_enumerate_all() {
        let mut count = 0;
        for_each_composition(3, 2, |_| count += 1);
        assert_eq!(count, 6);
        let mut count = 0;
        for_each_multiindex(&[1, 2], |_| count += 1);
        assert_eq!(count, 6);
    }
}
