//! The GNS construction of the Wick product at the evaluation `δ₀`.
//!
//! Classes in the quotient are determined by the `z̄`-Taylor coefficients at
//! the origin, so the GNS space is realized on formal series in `ȳ¹..ȳⁿ`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use super::linalg::{solve_linear, LinearSolution};
use crate::error::{Error, Result};
use crate::formal_scalar::{factorial, falling_factorial, int, CRational, FormalScalar, Rational};
use crate::observables::{Frame, FrameKind, Monomial, Poly};
use crate::star::{for_each_multiindex, star, StarKind};

fn multi_factorial(k: &[u32]) -> BigInt {
    k.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e))
}

fn check_wick(f: &Poly) -> Result<()> {
    if f.frame().kind == FrameKind::Wick {
        Ok(())
    } else {
        Err(Error::FrameMismatch)
    }
}

/// `Σ_K (1/K!) a_K ȳ^K`, stored through the coefficients `a_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WickVector {
    pub n: usize,
    coeffs: BTreeMap<Vec<u32>, FormalScalar>,
}

impl WickVector {
    pub fn zero(n: usize) -> Self {
        WickVector { n, coeffs: BTreeMap::new() }
    }

    /// From `(K, a_K)` pairs; zero coefficients are dropped.
    pub fn from_coeffs<I: IntoIterator<Item = (Vec<u32>, FormalScalar)>>(n: usize, it: I) -> Result<Self> {
        let mut v = Self::zero(n);
        for (k, a) in it {
            if k.len() != n {
                return Err(Error::DimensionMismatch("multiindex length must be n"));
            }
            v.add_coeff(k, a);
        }
        Ok(v)
    }

    fn add_coeff(&mut self, k: Vec<u32>, a: FormalScalar) {
        let e = self.coeffs.entry(k.clone()).or_default();
        *e += &a;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// The basis vector `b_K = ȳ^K`, i.e. `a_K = K!`.
    pub fn basis(k: &[u32]) -> Self {
        let mut v = Self::zero(k.len());
        v.add_coeff(k.to_vec(), FormalScalar::from_rational(Rational::from_integer(multi_factorial(k))));
        v
    }

    /// The vacuum `ψ₁`.
    pub fn vacuum(n: usize) -> Self {
        Self::basis(&alloc::vec![0; n])
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, FormalScalar> {
        &self.coeffs
    }

    /// `a_K`.
    pub fn coeff(&self, k: &[u32]) -> FormalScalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(|k| k.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, a) in &other.coeffs {
            out.add_coeff(k.clone(), a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-&FormalScalar::one()))
    }

    pub fn scale(&self, c: &FormalScalar) -> Self {
        let mut out = Self::zero(self.n);
        for (k, a) in &self.coeffs {
            out.add_coeff(k.clone(), a * c);
        }
        out
    }

    /// As a polynomial in the `z̄` slots of a Wick frame, `ȳ ↦ z̄`.
    pub fn to_poly(&self) -> Poly {
        let frame = Frame::wick(self.n);
        let mut out = Poly::zero(frame);
        for (k, a) in &self.coeffs {
            let mut m = Monomial::one(frame.vars());
            m.0[self.n..].copy_from_slice(k);
            let c = a.scale_rational(&Rational::new(BigInt::one(), multi_factorial(k)));
            out.add_term(m, c);
        }
        out
    }
}

/// `f ∈ J_{δ₀}`: every `z̄`-derivative of `f` vanishes at the origin.
pub fn wick_ideal_member(f: &Poly) -> Result<bool> {
    check_wick(f)?;
    Ok(wick_project(f)?.is_zero())
}

/// `ψ_f`: `a_K = ∂^{|K|} f/∂z̄^K (0)`.
pub fn wick_project(f: &Poly) -> Result<WickVector> {
    check_wick(f)?;
    let n = f.frame().n;
    let mut v = WickVector::zero(n);
    for (m, c) in f.terms() {
        if m.0[..n].iter().all(|&e| e == 0) {
            let k = m.0[n..].to_vec();
            let kf = Rational::from_integer(multi_factorial(&k));
            v.add_coeff(k, c.scale_rational(&kf));
        }
    }
    Ok(v)
}

/// `⟨u, v⟩ = Σ_K (2λ)^{|K|}/K! conj(a_K) b_K`.
pub fn wick_inner(u: &WickVector, v: &WickVector) -> Result<FormalScalar> {
    if u.n != v.n {
        return Err(Error::DimensionMismatch("vectors of different dimension"));
    }
    let mut acc = FormalScalar::zero();
    for (k, a) in &u.coeffs {
        if let Some(b) = v.coeffs.get(k) {
            let deg: u32 = k.iter().sum();
            let w = Rational::new(BigInt::from(2).pow(deg), multi_factorial(k));
            acc += &(&a.conj() * b).shift(&int(deg as i64)).scale_rational(&w);
        }
    }
    Ok(acc)
}

/// `g_K = ⟨b_K, b_K⟩ = (2λ)^{|K|} K!`.
pub fn gram_diagonal(k: &[u32]) -> FormalScalar {
    let deg: u32 = k.iter().sum();
    let c = Rational::from_integer(BigInt::from(2).pow(deg) * multi_factorial(k));
    FormalScalar::monomial(int(deg as i64), CRational::real(c))
}

/// `π₀(f)` applied through the normal-ordered action
/// `π₀(z^A z̄^B) = (2λ)^{|A|} ȳ^B ∂^{|A|}/∂ȳ^A`.
pub fn wick_apply(f: &Poly, v: &WickVector) -> Result<WickVector> {
    check_wick(f)?;
    let n = f.frame().n;
    if v.n != n {
        return Err(Error::DimensionMismatch("operator and vector dimension differ"));
    }
    // work on the ȳ-polynomial coefficients c_L = a_L / L!
    let mut out: BTreeMap<Vec<u32>, FormalScalar> = BTreeMap::new();
    for (m, c) in f.terms() {
        let (a, b) = m.0.split_at(n);
        let deg_a: u32 = a.iter().sum();
        let lift = c.shift(&int(deg_a as i64)).scale_rational(&Rational::from_integer(BigInt::from(2).pow(deg_a)));
        for (l, al) in &v.coeffs {
            if (0..n).any(|k| l[k] < a[k]) {
                continue;
            }
            let mut num = BigInt::one();
            let mut target = Vec::with_capacity(n);
            for k in 0..n {
                num *= falling_factorial(l[k], a[k]);
                target.push(l[k] - a[k] + b[k]);
            }
            // c_L ff(L,A) lands on ȳ^{L−A+B}; convert back to a-coefficients
            let scale = Rational::new(num * multi_factorial(&target), multi_factorial(l));
            let e = out.entry(target).or_default();
            *e += &(&lift * al).scale_rational(&scale);
        }
    }
    WickVector::from_coeffs(n, out)
}

/// `π₀(f) ψ_g = ψ_{f * g}`, computed through the star product.
pub fn wick_apply_via_star(f: &Poly, v: &WickVector) -> Result<WickVector> {
    wick_project(&star(StarKind::Wick, f, &v.to_poly())?)
}

/// All multiindices of length `n` and total degree at most `d`, ordered by
/// degree, then lexicographically.
pub fn graded_basis(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut all = Vec::new();
    for_each_multiindex(&alloc::vec![d; n], |k| {
        if k.iter().sum::<u32>() <= d {
            all.push(k.to_vec());
        }
    });
    all.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum::<u32>()).then_with(|| a.cmp(b)));
    all
}

/// Matrix of `π₀(f)` on `{ȳ^K : |K| ≤ D}`; column `L` holds the
/// `ȳ`-monomial coefficients of `π₀(f) ȳ^L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WickOperator {
    pub n: usize,
    pub cap: u32,
    pub basis: Vec<Vec<u32>>,
    pub matrix: Vec<Vec<FormalScalar>>,
    /// Some image left the degree-`D` block and was cut off.
    pub overflow: bool,
}

impl WickOperator {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, row: &[u32], col: &[u32]) -> FormalScalar {
        let i = self.basis.iter().position(|k| k.as_slice() == row);
        let j = self.basis.iter().position(|k| k.as_slice() == col);
        match (i, j) {
            (Some(i), Some(j)) => self.matrix[i][j].clone(),
            _ => FormalScalar::zero(),
        }
    }

    /// `π₀(H) − μ·1`.
    pub fn shifted(&self, mu: &FormalScalar) -> Vec<Vec<FormalScalar>> {
        let mut m = self.matrix.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = &row[i] - mu;
        }
        m
    }

    /// Matrix product `self · other` on the common block.
    pub fn compose(&self, other: &WickOperator) -> Result<WickOperator> {
        if self.n != other.n || self.cap != other.cap {
            return Err(Error::DimensionMismatch("operators on different blocks"));
        }
        let d = self.dim();
        let mut matrix = alloc::vec![alloc::vec![FormalScalar::zero(); d]; d];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                for k in 0..d {
                    *out += &(&self.matrix[i][k] * &other.matrix[k][j]);
                }
            }
        }
        Ok(WickOperator {
            n: self.n,
            cap: self.cap,
            basis: self.basis.clone(),
            matrix,
            overflow: self.overflow || other.overflow,
        })
    }
}

pub fn wick_represent(f: &Poly, cap: u32) -> Result<WickOperator> {
    check_wick(f)?;
    let n = f.frame().n;
    let basis = graded_basis(n, cap);
    let index: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let d = basis.len();
    let mut matrix = alloc::vec![alloc::vec![FormalScalar::zero(); d]; d];
    let mut overflow = false;
    for (j, l) in basis.iter().enumerate() {
        let image = wick_apply(f, &WickVector::basis(l))?;
        for (k, a) in image.coeffs() {
            let c = a.scale_rational(&Rational::new(BigInt::one(), multi_factorial(k)));
            match index.get(k) {
                Some(&i) => matrix[i][j] = c,
                None => overflow = true,
            }
        }
    }
    Ok(WickOperator { n, cap, basis, matrix, overflow })
}

/// GNS-spectrum on the degree-`D` truncation: the `μ` for which
/// `π₀(H) − μ·1` is not invertible.
///
/// The operator must be triangular with respect to the graded basis (in one
/// of the two orders), so that the candidates are the diagonal entries; each
/// candidate is confirmed by an exact invertibility test.
pub fn gns_spectrum_graded(op: &WickOperator, order: &Rational) -> Result<Vec<FormalScalar>> {
    let d = op.dim();
    let nonzero = |i: usize, j: usize| !op.matrix[i][j].is_zero();
    let upper = (0..d).all(|i| (0..i).all(|j| !nonzero(i, j)));
    let lower = (0..d).all(|i| ((i + 1)..d).all(|j| !nonzero(i, j)));
    if !upper && !lower {
        return Err(Error::NonGraded);
    }
    let mut candidates: Vec<FormalScalar> = Vec::new();
    for i in 0..d {
        if !candidates.contains(&op.matrix[i][i]) {
            candidates.push(op.matrix[i][i].clone());
        }
    }
    let mut spectrum = Vec::new();
    let probe = alloc::vec![FormalScalar::one(); d];
    for mu in candidates {
        if solve_linear(&op.shifted(&mu), &probe, order)? == LinearSolution::NotInvertible {
            spectrum.push(mu);
        }
    }
    Ok(spectrum)
}

/// `δ₀(f) = ⟨ψ₁, π₀(f) ψ₁⟩`.
pub fn wick_cyclic_check(f: &Poly) -> Result<bool> {
    check_wick(f)?;
    let n = f.frame().n;
    let lhs = f.eval_point(&alloc::vec![CRational::zero(); 2 * n])?;
    let vac = WickVector::vacuum(n);
    let rhs = wick_inner(&vac, &wick_apply(f, &vac)?)?;
    Ok(lhs == rhs)
}

/// `⟨u, π₀(f) v⟩ = ⟨π₀(conj f) u, v⟩`.
pub fn wick_adjoint_check(f: &Poly, u: &WickVector, v: &WickVector) -> Result<bool> {
    let lhs = wick_inner(u, &wick_apply(f, v)?)?;
    let rhs = wick_inner(&wick_apply(&f.conj(), u)?, v)?;
    Ok(lhs == rhs)
}
