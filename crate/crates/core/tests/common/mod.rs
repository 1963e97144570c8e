//! Random instance generators and independent oracles shared by the
//! integration tests. Oracles only touch the plain data (coefficients,
//! exponents, derivatives of monomials); none of them calls a star product,
//! a GNS routine or a functional of the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

use gns_deform_core::formal_scalar::{int, rat};
use gns_deform_core::{CRational, EnvelopePoly, FormalScalar, Frame, Monomial, Order, Poly, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_rational(rng: &mut ChaCha8Rng, max: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(-max..=max), rng.gen_range(1..=max_den))
}

pub fn rand_nonzero_rational(rng: &mut ChaCha8Rng, max: i64, max_den: i64) -> Rational {
    loop {
        let r = rand_rational(rng, max, max_den);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn rand_complex(rng: &mut ChaCha8Rng) -> CRational {
    if rng.gen_bool(0.4) {
        CRational::real(rand_rational(rng, 5, 3))
    } else {
        CRational::new(rand_rational(rng, 5, 3), rand_rational(rng, 5, 3))
    }
}

/// Exact series with `terms` terms at exponents `k/den`, `0 ≤ k ≤ max_k`.
pub fn rand_scalar_with(rng: &mut ChaCha8Rng, terms: usize, max_k: i64, den: i64, real: bool) -> FormalScalar {
    let ts: Vec<_> = (0..terms)
        .map(|_| {
            let c = if real { CRational::real(rand_rational(rng, 5, 3)) } else { rand_complex(rng) };
            (rat(rng.gen_range(0..=max_k), den), c)
        })
        .collect();
    FormalScalar::new(ts, Order::Infinite)
}

pub fn rand_scalar(rng: &mut ChaCha8Rng) -> FormalScalar {
    let n = rng.gen_range(1..=3);
    rand_scalar_with(rng, n, 4, 2, false)
}

pub fn rand_real_scalar(rng: &mut ChaCha8Rng) -> FormalScalar {
    let n = rng.gen_range(1..=3);
    rand_scalar_with(rng, n, 4, 2, true)
}

fn rand_monomial(rng: &mut ChaCha8Rng, frame: Frame, first_max: u32, second_max: u32) -> Monomial {
    let n = frame.n;
    let mut e = vec![0u32; 2 * n];
    for k in 0..n {
        e[k] = rng.gen_range(0..=first_max);
        e[n + k] = rng.gen_range(0..=second_max);
    }
    Monomial(e)
}

/// Polynomial with separate degree caps on the first (`q`, `z`) and second
/// (`p`, `z̄`) variable group. `lambda` allows λ-dependent coefficients.
pub fn rand_poly_caps(
    rng: &mut ChaCha8Rng,
    frame: Frame,
    terms: usize,
    first_max: u32,
    second_max: u32,
    lambda: bool,
) -> Poly {
    let mut p = Poly::zero(frame);
    for _ in 0..terms {
        let m = rand_monomial(rng, frame, first_max, second_max);
        let c = if lambda { rand_scalar(rng) } else { FormalScalar::constant(rand_complex(rng)) };
        p = &p + &Poly::term(frame, m, c);
    }
    p
}

pub fn rand_poly(rng: &mut ChaCha8Rng, frame: Frame, terms: usize, max: u32) -> Poly {
    rand_poly_caps(rng, frame, terms, max, max, true)
}

pub fn rand_classical_poly(rng: &mut ChaCha8Rng, frame: Frame, terms: usize, max: u32) -> Poly {
    rand_poly_caps(rng, frame, terms, max, max, false)
}

/// Random polynomial of total degree at most `deg`.
pub fn rand_poly_total(rng: &mut ChaCha8Rng, frame: Frame, terms: usize, deg: u32) -> Poly {
    rand_poly_total_den(rng, frame, terms, deg, 2)
}

/// As [`rand_poly_total`], with λ-exponents in `(1/den)ℤ`.
pub fn rand_poly_total_den(rng: &mut ChaCha8Rng, frame: Frame, terms: usize, deg: u32, den: i64) -> Poly {
    let mut p = Poly::zero(frame);
    let vars = frame.vars();
    for _ in 0..terms {
        let mut e = vec![0u32; vars];
        let mut budget = rng.gen_range(0..=deg);
        while budget > 0 {
            e[rng.gen_range(0..vars)] += 1;
            budget -= 1;
        }
        let len = rng.gen_range(1..=3);
        p = &p + &Poly::term(frame, Monomial(e), rand_scalar_with(rng, len, 2 * den, den, false));
    }
    p
}

/// Polynomial in the `q`-variables only, for wave functions.
pub fn rand_q_poly(rng: &mut ChaCha8Rng, frame: Frame, terms: usize, max: u32) -> Poly {
    rand_poly_caps(rng, frame, terms, max, 0, true)
}

pub fn q_envelope(p: Poly, width: Rational) -> EnvelopePoly {
    EnvelopePoly::with_q_envelope(p, width).unwrap()
}

pub fn phase_envelope(p: Poly, width: Rational) -> EnvelopePoly {
    EnvelopePoly::new(p, width.clone(), width).unwrap()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

pub fn multi_factorial(k: &[u32]) -> BigInt {
    k.iter().fold(BigInt::one(), |a, &e| a * factorial(e))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn big_rat(b: BigInt) -> Rational {
    Rational::from_integer(b)
}

pub fn lam_pow(k: i64, c: CRational) -> FormalScalar {
    FormalScalar::monomial(int(k), c)
}

/// All exponent vectors of length `n` and total degree at most `d`.
pub fn multi_indices(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for e in 0..=(d - used) {
                let mut w = v.clone();
                w.push(e);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

// ---------------------------------------------------------------------------
// δ₀ under the Moyal product, by direct enumeration of the r = 2 term.

/// `∂q^a ∂p^b f (0)` for a one-degree-of-freedom Weyl polynomial, λ⁰ part.
fn derivative_at_origin(f: &Poly, a: u32, b: u32) -> CRational {
    let c = f.coeff(&Monomial(vec![a, b])).coeff(&Rational::zero());
    c.scale(&big_rat(factorial(a) * factorial(b)))
}

/// λ²-coefficient of `δ₀(conj(f) ⋆ g)` from the bidifferential term
/// `(iλ/2)² / 2! Σₖ C(2,k)(−1)ᵏ ∂q^{2−k}∂p^k conj(f) · ∂p^{2−k}∂q^k g`.
pub fn delta_moyal_r2(f: &Poly, g: &Poly) -> CRational {
    let fbar = f.conj();
    let mut acc = CRational::zero();
    for k in 0..=2u32 {
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        let w = big_rat(binomial(2, k)) * sign;
        let term = &derivative_at_origin(&fbar, 2 - k, k) * &derivative_at_origin(g, k, 2 - k);
        acc += &term.scale(&w);
    }
    // (i/2)² / 2 = −1/8
    acc.scale(&rat(-1, 8))
}

// ---------------------------------------------------------------------------
// δ₀(conj(f) ⋆ g) for the Wick product: only the purely anti-holomorphic
// parts survive at z = 0, with weight (2λ)^{|I|} I!.

pub fn wick_delta_oracle(f: &Poly, g: &Poly) -> FormalScalar {
    let n = f.frame().n;
    let anti = |p: &Poly| -> BTreeMap<Vec<u32>, FormalScalar> {
        p.terms()
            .iter()
            .filter(|(m, _)| m.0[..n].iter().all(|&e| e == 0))
            .map(|(m, c)| (m.0[n..].to_vec(), c.clone()))
            .collect()
    };
    let (a, b) = (anti(f), anti(g));
    let mut acc = FormalScalar::zero();
    for (k, c) in &a {
        if let Some(d) = b.get(k) {
            let deg: u32 = k.iter().sum();
            let w = lam_pow(deg as i64, CRational::real(big_rat(BigInt::from(2).pow(deg) * multi_factorial(k))));
            acc += &(&(&c.conj() * d) * &w);
        }
    }
    acc
}

/// Gram diagonal `(2λ)^{|K|} K!`.
pub fn gram_oracle(k: &[u32]) -> FormalScalar {
    let deg: u32 = k.iter().sum();
    lam_pow(deg as i64, CRational::real(big_rat(BigInt::from(2).pow(deg) * multi_factorial(k))))
}

// ---------------------------------------------------------------------------
// Gaussian moments: ∫ x^k e^{−a x²} dx / √π with √a rational.

/// `(k−1)!! / (2a)^{k/2} / √a` for even `k`, zero for odd `k`.
pub fn moment_over_sqrt_pi(k: u32, sqrt_a: &Rational) -> Rational {
    if k % 2 == 1 {
        return Rational::zero();
    }
    let mut dfact = BigInt::one();
    let mut j = 1u32;
    while j < k {
        dfact *= BigInt::from(j);
        j += 2;
    }
    let a = sqrt_a * sqrt_a;
    let mut denom = Rational::one();
    for _ in 0..k / 2 {
        denom = denom * (&a * int(2));
    }
    big_rat(dfact) / denom / sqrt_a
}

/// `∫ f d^{2n}x / π^n` for a phase-space envelope polynomial.
pub fn phase_integral_oracle(f: &EnvelopePoly, sqrt_wq: &Rational, sqrt_wp: &Rational) -> FormalScalar {
    let n = f.frame().n;
    let mut acc = FormalScalar::zero();
    for (m, c) in f.poly.terms() {
        let mut w = Rational::one();
        for k in 0..n {
            w = w * moment_over_sqrt_pi(m.0[k], sqrt_wq) * moment_over_sqrt_pi(m.0[n + k], sqrt_wp);
        }
        if !w.is_zero() {
            acc += &c.scale_rational(&w);
        }
    }
    acc
}

/// `∫ f dⁿq / π^{n/2}` at `p = 0` for a `q`-envelope polynomial.
pub fn configuration_integral_oracle(f: &EnvelopePoly, sqrt_wq: &Rational) -> FormalScalar {
    let n = f.frame().n;
    let mut acc = FormalScalar::zero();
    for (m, c) in f.poly.terms() {
        if m.0[n..].iter().any(|&e| e != 0) {
            continue;
        }
        let w = (0..n).fold(Rational::one(), |w, k| w * moment_over_sqrt_pi(m.0[k], sqrt_wq));
        if !w.is_zero() {
            acc += &c.scale_rational(&w);
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Moyal bidifferential operators written out from the coordinate formula.

/// `Λ^{(r)}(f,g) = (1/r!) Σ_{k} (−1)^{k} C(r,k) ∂q^{r−k}∂p^k f ∂p^{r−k}∂q^k g`
/// for one degree of freedom, without the factor `(iλ/2)^r`.
pub fn moyal_bidiff_n1(f: &EnvelopePoly, g: &EnvelopePoly, r: u32) -> EnvelopePoly {
    let frame = f.frame();
    assert_eq!(frame.n, 1);
    let d = |e: &EnvelopePoly, q: u32, p: u32| {
        let mut x = e.clone();
        for _ in 0..q {
            x = x.deriv(0).unwrap();
        }
        for _ in 0..p {
            x = x.deriv(1).unwrap();
        }
        x
    };
    let mut acc: Option<EnvelopePoly> = None;
    for k in 0..=r {
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        let w = big_rat(binomial(r, k)) * sign / big_rat(factorial(r));
        let t = d(f, r - k, k).try_mul(&d(g, k, r - k)).unwrap().scale(&FormalScalar::from_rational(w));
        acc = Some(match acc {
            None => t,
            Some(a) => a.try_add(&t).unwrap(),
        });
    }
    acc.unwrap()
}

// ---------------------------------------------------------------------------
// Poisson brackets from the coordinate formulas.

/// `Σₖ ∂_{qₖ}f ∂_{pₖ}g − ∂_{pₖ}f ∂_{qₖ}g`.
pub fn poisson_weyl(f: &Poly, g: &Poly) -> Poly {
    let n = f.frame().n;
    let mut acc = Poly::zero(f.frame());
    for k in 0..n {
        acc = &acc + &(&f.deriv(k).unwrap() * &g.deriv(n + k).unwrap());
        acc = &acc - &(&f.deriv(n + k).unwrap() * &g.deriv(k).unwrap());
    }
    acc
}

/// `−2i Σₖ (∂_{zₖ}f ∂_{z̄ₖ}g − ∂_{z̄ₖ}f ∂_{zₖ}g)`, so that `{z, z̄} = −2i`.
pub fn poisson_wick(f: &Poly, g: &Poly) -> Poly {
    let n = f.frame().n;
    let mut acc = Poly::zero(f.frame());
    for k in 0..n {
        acc = &acc + &(&f.deriv(k).unwrap() * &g.deriv(n + k).unwrap());
        acc = &acc - &(&f.deriv(n + k).unwrap() * &g.deriv(k).unwrap());
    }
    acc.scale_c(&CRational::new(Rational::zero(), int(-2)))
}

// ---------------------------------------------------------------------------
// Weyl-symmetrized operators by explicit enumeration of orderings.

/// `Σ_{w ∈ {Q,P}^k} α^{#Q} β^{#P} w ψ` with `Q = q·`, `P = (λ/i)∂_q`; this
/// equals `C(k,a)` times the average over orderings of each `q^a p^{k−a}`.
pub fn symmetrized_linear_power(alpha: &FormalScalar, beta: &FormalScalar, k: u32, psi: &EnvelopePoly) -> EnvelopePoly {
    let frame = psi.frame();
    let q: EnvelopePoly = Poly::first(frame, 0).into();
    let lam_over_i = lam_pow(1, -CRational::i());
    let mut total = psi.zero_like();
    for word in 0u32..(1 << k) {
        let mut v = psi.clone();
        let mut c = FormalScalar::one();
        for j in 0..k {
            if word >> j & 1 == 1 {
                v = q.try_mul(&v).unwrap();
                c = &c * alpha;
            } else {
                v = v.deriv(0).unwrap().scale(&lam_over_i);
                c = &c * beta;
            }
        }
        total = total.try_add(&v.scale(&c)).unwrap();
    }
    total
}

// ---------------------------------------------------------------------------
// Classical flow of a one-degree-of-freedom Hamiltonian by Picard iteration on
// Hamilton's equations, as Taylor polynomials in t.

/// Polynomials over ℚ in `(q, p, t)`; exponent vectors `[a, b, m]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TPoly(pub BTreeMap<[u32; 3], Rational>);

impl TPoly {
    pub fn zero() -> Self {
        TPoly(BTreeMap::new())
    }

    pub fn term(e: [u32; 3], c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        TPoly(m)
    }

    fn add(&self, o: &TPoly) -> TPoly {
        let mut m = self.0.clone();
        for (e, c) in &o.0 {
            let v = m.entry(*e).or_insert_with(Rational::zero);
            *v += c;
            if v.is_zero() {
                m.remove(e);
            }
        }
        TPoly(m)
    }

    fn scale(&self, r: &Rational) -> TPoly {
        TPoly(self.0.iter().map(|(e, c)| (*e, c * r)).filter(|(_, c)| !c.is_zero()).collect())
    }

    fn mul(&self, o: &TPoly, t_max: u32) -> TPoly {
        let mut out = TPoly::zero();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                if e[2] <= t_max {
                    out = out.add(&TPoly::term(e, x * y));
                }
            }
        }
        out
    }

    fn pow(&self, k: u32, t_max: u32) -> TPoly {
        let mut out = TPoly::term([0, 0, 0], Rational::one());
        for _ in 0..k {
            out = out.mul(self, t_max);
        }
        out
    }

    fn integrate_t(&self) -> TPoly {
        TPoly(self.0.iter().map(|(e, c)| ([e[0], e[1], e[2] + 1], c / int(e[2] as i64 + 1))).collect())
    }

    /// Coefficient of `tᵐ`, as a polynomial in `(q, p)`.
    pub fn t_coeff(&self, m: u32) -> BTreeMap<[u32; 2], Rational> {
        self.0.iter().filter(|(e, _)| e[2] == m).map(|(e, c)| ([e[0], e[1]], c.clone())).collect()
    }
}

/// `h(Q, P)` for `h` given as `(q, p)` exponents.
fn substitute(h: &BTreeMap<[u32; 2], Rational>, q: &TPoly, p: &TPoly, t_max: u32) -> TPoly {
    let mut out = TPoly::zero();
    for (e, c) in h {
        out = out.add(&q.pow(e[0], t_max).mul(&p.pow(e[1], t_max), t_max).scale(c));
    }
    out
}

fn d_dq(h: &BTreeMap<[u32; 2], Rational>) -> BTreeMap<[u32; 2], Rational> {
    h.iter().filter(|(e, _)| e[0] > 0).map(|(e, c)| ([e[0] - 1, e[1]], c * int(e[0] as i64))).collect()
}

fn d_dp(h: &BTreeMap<[u32; 2], Rational>) -> BTreeMap<[u32; 2], Rational> {
    h.iter().filter(|(e, _)| e[1] > 0).map(|(e, c)| ([e[0], e[1] - 1], c * int(e[1] as i64))).collect()
}

/// Taylor coefficients of `f(Q(t), P(t))` where `Q' = ∂H/∂p`, `P' = −∂H/∂q`,
/// `(Q, P)(0) = (q, p)`.
pub fn classical_flow(
    f: &BTreeMap<[u32; 2], Rational>,
    h: &BTreeMap<[u32; 2], Rational>,
    t_max: u32,
) -> Vec<BTreeMap<[u32; 2], Rational>> {
    let q0 = TPoly::term([1, 0, 0], Rational::one());
    let p0 = TPoly::term([0, 1, 0], Rational::one());
    let (hq, hp) = (d_dq(h), d_dp(h));
    let (mut q, mut p) = (q0.clone(), p0.clone());
    for _ in 0..=t_max {
        let nq = q0.add(&substitute(&hp, &q, &p, t_max).integrate_t());
        let np = p0.add(&substitute(&hq, &q, &p, t_max).integrate_t().scale(&int(-1)));
        q = nq;
        p = np;
    }
    let ft = substitute(f, &q, &p, t_max);
    (0..=t_max).map(|m| ft.t_coeff(m)).collect()
}

/// Real `λ⁰` part of a one-degree-of-freedom Weyl polynomial.
pub fn classical_part_n1(f: &Poly) -> BTreeMap<[u32; 2], Rational> {
    let mut out = BTreeMap::new();
    for (m, c) in f.terms() {
        let v = c.coeff(&Rational::zero());
        assert!(v.im.is_zero(), "classical part is not real");
        if !v.re.is_zero() {
            out.insert([m.0[0], m.0[1]], v.re);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Determinants and inverses by cofactor expansion.

pub fn det(m: &[Vec<FormalScalar>]) -> FormalScalar {
    let d = m.len();
    if d == 0 {
        return FormalScalar::one();
    }
    if d == 1 {
        return m[0][0].clone();
    }
    let mut acc = FormalScalar::zero();
    for j in 0..d {
        if m[0][j].is_zero() {
            continue;
        }
        let t = &m[0][j] * &det(&minor(m, 0, j));
        if j % 2 == 0 {
            acc += &t;
        } else {
            acc -= &t;
        }
    }
    acc
}

fn minor(m: &[Vec<FormalScalar>], i: usize, j: usize) -> Vec<Vec<FormalScalar>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != i)
        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// `adj(m)`, so that `m⁻¹ = adj(m) / det(m)`.
pub fn adjugate(m: &[Vec<FormalScalar>]) -> Vec<Vec<FormalScalar>> {
    let d = m.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let c = det(&minor(m, j, i));
                    if (i + j) % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Bargmann moments by numerical quadrature.

/// `(2πħ)^{-1} ∫ e^{−|z|²/2ħ} z^k z̄^l d²z` on a midpoint grid, with
/// `z̄^k` conjugated into `z^k`.
pub fn bargmann_moment_numeric(k: u32, l: u32, hbar: f64) -> (f64, f64) {
    let half = 9.0 * (2.0 * hbar).sqrt();
    let steps = 600usize;
    let h = 2.0 * half / steps as f64;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for ix in 0..steps {
        let x = -half + (ix as f64 + 0.5) * h;
        for iy in 0..steps {
            let y = -half + (iy as f64 + 0.5) * h;
            let w = (-(x * x + y * y) / (2.0 * hbar)).exp();
            // z^k z̄^l
            let (mut a, mut b) = (1.0f64, 0.0f64);
            for _ in 0..k {
                (a, b) = (a * x - b * y, a * y + b * x);
            }
            for _ in 0..l {
                (a, b) = (a * x + b * y, b * x - a * y);
            }
            re += w * a;
            im += w * b;
        }
    }
    let norm = h * h / (2.0 * std::f64::consts::PI * hbar);
    (re * norm, im * norm)
}
