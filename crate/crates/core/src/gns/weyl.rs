//! The GNS construction of the Weyl-Moyal product at `ω₀`, realized on
//! formal wave functions over configuration space.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::formal_scalar::{factorial, int, CRational, FormalScalar, Rational};
use crate::functionals::Functional;
use crate::observables::{gaussian_integral, Domain, EnvelopePoly, Frame, FrameKind, PiSeries, Poly};
use crate::star::{delta_op, for_each_multiindex, op_s, star_envelope};

fn check_weyl(f: &EnvelopePoly) -> Result<()> {
    if f.frame().kind != FrameKind::Weyl {
        return Err(Error::FrameMismatch);
    }
    if !f.width_p.is_zero() {
        return Err(Error::MomentumEnvelope);
    }
    Ok(())
}

/// `I(f)(q,p) = ∫₀¹ (f(q,tp) − f(q,0))/t dt`: a term of total `p`-degree
/// `m ≥ 1` is divided by `m`, the `p`-free part is dropped.
pub fn op_i(f: &EnvelopePoly) -> Result<EnvelopePoly> {
    check_weyl(f)?;
    let n = f.frame().n;
    let mut out = Poly::zero(f.frame());
    for (m, c) in f.poly.terms() {
        let deg = m.degree_in(n..2 * n);
        if deg > 0 {
            out.add_term(m.clone(), c.scale_rational(&Rational::new(BigInt::one(), BigInt::from(deg))));
        }
    }
    Ok(f.map_poly(|_| out))
}

/// `Tᵏ = ∂/∂pₖ ∘ I ∘ (1 + (iλ/2)Δ∘I)⁻¹`, the inverse being a terminating
/// geometric series since `Δ∘I` lowers the `p`-degree.
pub fn op_t(f: &EnvelopePoly, k: usize) -> Result<EnvelopePoly> {
    check_weyl(f)?;
    let n = f.frame().n;
    if k >= n {
        return Err(Error::BadVariable(k));
    }
    let step = FormalScalar::monomial(int(1), CRational::new(Rational::zero(), Rational::new((-1).into(), 2.into())));
    let mut sum = f.clone();
    let mut term = f.clone();
    loop {
        term = delta_op(&op_i(&term)?)?.scale(&step);
        if term.is_zero() {
            break;
        }
        sum = sum.try_add(&term)?;
    }
    op_i(&sum)?.deriv(n + k)
}

/// `f = i₀∘S(f) + Σₖ Tᵏ(f) ⋆ pₖ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylDecomposition {
    /// `S(f)` restricted to `p = 0`.
    pub head: EnvelopePoly,
    pub tails: Vec<EnvelopePoly>,
}

impl WeylDecomposition {
    /// `head + Σₖ tailsₖ ⋆ pₖ`, exact.
    pub fn reassemble(&self) -> Result<EnvelopePoly> {
        let frame = self.head.frame();
        let mut out = self.head.clone();
        for (k, t) in self.tails.iter().enumerate() {
            let pk: EnvelopePoly = Poly::second(frame, k).into();
            // terminates: pₖ is linear and p-polynomial tails
            out = out.try_add(&star_envelope(t, &pk, &int(0))?)?;
        }
        Ok(out)
    }
}

fn restrict_p0(f: &EnvelopePoly) -> EnvelopePoly {
    let n = f.frame().n;
    let assign: Vec<(usize, CRational)> = (0..n).map(|k| (n + k, CRational::zero())).collect();
    f.map_poly(|p| p.partial_eval(&assign).expect("indices in range"))
}

pub fn weyl_decompose(f: &EnvelopePoly) -> Result<WeylDecomposition> {
    check_weyl(f)?;
    let head = restrict_p0(&op_s(f)?);
    let tails = (0..f.frame().n).map(|k| op_t(f, k)).collect::<Result<Vec<_>>>()?;
    Ok(WeylDecomposition { head, tails })
}

/// Membership in the Gel'fand ideal of `ω₀`: the head vanishes.
pub fn weyl_ideal_member(f: &EnvelopePoly) -> Result<bool> {
    Ok(weyl_decompose(f)?.head.is_zero())
}

/// A formal wave function `ψ(q)`, possibly with a Gaussian `q`-envelope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveFunction {
    psi: EnvelopePoly,
}

impl WaveFunction {
    pub fn new(psi: EnvelopePoly) -> Result<Self> {
        check_weyl(&psi)?;
        if psi.poly.degree_second() > 0 {
            return Err(Error::MomentumDependence);
        }
        Ok(WaveFunction { psi })
    }

    pub fn as_envelope(&self) -> &EnvelopePoly {
        &self.psi
    }

    /// `Ω = e^{−|q|²/2}`.
    pub fn vacuum(frame: Frame) -> Self {
        WaveFunction { psi: EnvelopePoly::with_q_envelope(Poly::one(frame), Rational::new(1.into(), 2.into())).unwrap() }
    }

    pub fn is_zero(&self) -> bool {
        self.psi.is_zero()
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        Ok(WaveFunction { psi: self.psi.try_add(&o.psi)? })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        Ok(WaveFunction { psi: self.psi.try_sub(&o.psi)? })
    }

    pub fn scale(&self, c: &FormalScalar) -> Self {
        WaveFunction { psi: self.psi.scale(c) }
    }
}

/// `r(ψ_f) = r₀∘S(f)`.
pub fn weyl_project(f: &EnvelopePoly) -> Result<WaveFunction> {
    WaveFunction::new(restrict_p0(&op_s(f)?))
}

/// `⟨ψ, φ⟩ = ∫ conj(ψ) φ dⁿq`.
pub fn weyl_inner(psi: &WaveFunction, phi: &WaveFunction) -> Result<PiSeries> {
    gaussian_integral(&psi.psi.conj().try_mul(&phi.psi)?, Domain::Configuration)
}

/// Formal Schrödinger quantization
/// `ρ(f)ψ = Σ_I (1/I!) (λ/i)^{|I|} ∂^I(Sf)/∂p^I|_{p=0} ∂^I ψ/∂q^I`.
pub fn weyl_represent(f: &Poly, psi: &WaveFunction) -> Result<WaveFunction> {
    let fe: EnvelopePoly = f.clone().into();
    check_weyl(&fe)?;
    psi.psi.frame().check(&f.frame())?;
    let n = f.frame().n;
    let sf = op_s(&fe)?.poly;
    let bounds: Vec<u32> = (0..n).map(|k| sf.degree_in_var(n + k)).collect();
    let mut out = psi.psi.zero_like();
    let mut failure = None;
    for_each_multiindex(&bounds, |idx| {
        if failure.is_some() {
            return;
        }
        let r: u32 = idx.iter().sum();
        let mut alpha = alloc::vec![0u32; 2 * n];
        alpha[n..].copy_from_slice(idx);
        let coeff_fn = restrict_p0(&sf.deriv_multi(&alpha).into());
        if coeff_fn.is_zero() {
            return;
        }
        let step = (|| -> Result<EnvelopePoly> {
            let mut d = psi.psi.clone();
            for (k, &e) in idx.iter().enumerate() {
                for _ in 0..e {
                    d = d.deriv(k)?;
                }
            }
            // (λ/i)^r = (−i)^r λ^r
            let unit = match r % 4 {
                0 => CRational::one(),
                1 => -CRational::i(),
                2 => -CRational::one(),
                _ => CRational::i(),
            };
            let ifact = idx.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e));
            let c = FormalScalar::monomial(int(r as i64), unit.scale(&Rational::new(BigInt::one(), ifact)));
            Ok(coeff_fn.try_mul(&d)?.scale(&c))
        })();
        match step.and_then(|s| out.try_add(&s)) {
            Ok(s) => out = s,
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    WaveFunction::new(out)
}

/// `ω₀(conj(Ω) ⋆ f ⋆ Ω) = ⟨Ω, ρ(f) Ω⟩` for the Gaussian vacuum `Ω`.
pub fn weyl_cyclic_check(f: &Poly) -> Result<bool> {
    let frame = f.frame();
    let omega = WaveFunction::vacuum(frame);
    let o = omega.as_envelope();
    let fo = star_envelope(&f.clone().into(), o, &int(0))?;
    let ofo = star_envelope(&o.conj(), &fo, &int(0))?;
    let lhs = Functional::omega0(frame).apply(&ofo)?;
    let rhs = weyl_inner(&omega, &weyl_represent(f, &omega)?)?;
    Ok(lhs.same_as(&rhs))
}

/// `⟨ψ, ρ(f) φ⟩ = ⟨ρ(conj f) ψ, φ⟩`.
pub fn weyl_adjoint_check(f: &Poly, psi: &WaveFunction, phi: &WaveFunction) -> Result<bool> {
    let lhs = weyl_inner(psi, &weyl_represent(f, phi)?)?;
    let rhs = weyl_inner(&weyl_represent(&f.conj(), psi)?, phi)?;
    Ok(lhs.same_as(&rhs))
}
