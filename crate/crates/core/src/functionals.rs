//! Positive linear functionals: point evaluations, configuration-space
//! integration at fixed momentum, integration against a nonnegative density
//! and the phase-space trace.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::formal_scalar::{CRational, FormalScalar, Rational};
use crate::observables::{gaussian_integral, Domain, EnvelopePoly, Frame, FrameKind, PiScalar, PiSeries, Poly};
use crate::star::{star, star_envelope, StarKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalKind {
    /// `f ↦ f(x)` at a point of `ℂ^{2n}` given in frame coordinates.
    Delta(Vec<CRational>),
    /// `f ↦ ∫ f(q, p₀) dⁿq`.
    OmegaP0(Vec<Rational>),
    /// `f ↦ ∫ ρ f d^{2n}x` with `ρ = conj(g)·g`.
    OmegaRho(EnvelopePoly),
    /// `f ↦ ∫ f d^{2n}x`.
    Trace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    pub kind: FunctionalKind,
    pub frame: Frame,
}

impl Functional {
    pub fn delta(frame: Frame, point: Vec<CRational>) -> Result<Self> {
        if point.len() != frame.vars() {
            return Err(Error::DimensionMismatch("point length must be 2n"));
        }
        Ok(Functional { kind: FunctionalKind::Delta(point), frame })
    }

    /// `δ_z` on a Wick frame: `z̄` is set to the conjugate of `z`.
    pub fn delta_wick(frame: Frame, z: &[CRational]) -> Result<Self> {
        if frame.kind != FrameKind::Wick {
            return Err(Error::FrameMismatch);
        }
        if z.len() != frame.n {
            return Err(Error::DimensionMismatch("point length must be n"));
        }
        let mut point: Vec<CRational> = z.to_vec();
        point.extend(z.iter().map(|c| c.conj()));
        Self::delta(frame, point)
    }

    /// The evaluation at the origin.
    pub fn delta_origin(frame: Frame) -> Self {
        Functional { kind: FunctionalKind::Delta(alloc::vec![CRational::zero(); frame.vars()]), frame }
    }

    pub fn omega_p0(frame: Frame, p0: Vec<Rational>) -> Result<Self> {
        if frame.kind != FrameKind::Weyl {
            return Err(Error::FrameMismatch);
        }
        if p0.len() != frame.n {
            return Err(Error::DimensionMismatch("p0 length must be n"));
        }
        Ok(Functional { kind: FunctionalKind::OmegaP0(p0), frame })
    }

    /// `ω₀ = ω_{p₀}` at `p₀ = 0`.
    pub fn omega0(frame: Frame) -> Self {
        Functional { kind: FunctionalKind::OmegaP0(alloc::vec![Rational::zero(); frame.n]), frame }
    }

    /// Integration against the density `conj(g)·g`.
    pub fn omega_rho(g: &EnvelopePoly) -> Result<Self> {
        if g.frame().kind != FrameKind::Weyl {
            return Err(Error::FrameMismatch);
        }
        let rho = g.conj().try_mul(g)?;
        Ok(Functional { frame: g.frame(), kind: FunctionalKind::OmegaRho(rho) })
    }

    pub fn trace(frame: Frame) -> Result<Self> {
        if frame.kind != FrameKind::Weyl {
            return Err(Error::FrameMismatch);
        }
        Ok(Functional { kind: FunctionalKind::Trace, frame })
    }

    pub fn apply(&self, f: &EnvelopePoly) -> Result<PiSeries> {
        self.frame.check(&f.frame())?;
        match &self.kind {
            FunctionalKind::Delta(x) => Ok(PiSeries::plain(f.eval_point(x)?)),
            FunctionalKind::OmegaP0(p0) => {
                if !f.width_p.is_zero() {
                    return Err(Error::MomentumEnvelope);
                }
                let n = self.frame.n;
                let assign: Vec<(usize, CRational)> =
                    p0.iter().enumerate().map(|(k, v)| (n + k, CRational::real(v.clone()))).collect();
                let restricted = f.map_poly(|p| p.partial_eval(&assign).expect("indices in range"));
                gaussian_integral(&restricted, Domain::Configuration)
            }
            FunctionalKind::OmegaRho(rho) => gaussian_integral(&rho.try_mul(f)?, Domain::Phase),
            FunctionalKind::Trace => gaussian_integral(f, Domain::Phase),
        }
    }

    pub fn apply_poly(&self, f: &Poly) -> Result<PiSeries> {
        self.apply(&f.clone().into())
    }
}

/// Which product `ω(conj(f)·g)` is taken with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Product {
    Star(StarKind),
    Pointwise,
}

/// `f·g` for the chosen product; the Weyl-Moyal product of envelope
/// functions is truncated at `order` unless it terminates.
pub fn multiply(product: Product, f: &EnvelopePoly, g: &EnvelopePoly, order: &Rational) -> Result<EnvelopePoly> {
    match product {
        Product::Pointwise => f.try_mul(g),
        Product::Star(StarKind::WeylMoyal) => star_envelope(f, g, order),
        Product::Star(kind) => {
            if !f.is_polynomial() || !g.is_polynomial() {
                return Err(Error::FrameMismatch);
            }
            Ok(star(kind, &f.poly, &g.poly)?.into())
        }
    }
}

/// `ω(conj(f)·g)`.
pub fn sesquilinear(
    omega: &Functional,
    f: &EnvelopePoly,
    g: &EnvelopePoly,
    product: Product,
    order: &Rational,
) -> Result<PiSeries> {
    omega.apply(&multiply(product, &f.conj(), g, order)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    /// Strictly positive with the given leading λ-exponent.
    Positive(Rational),
    Zero,
    Negative(Rational),
}

impl Positivity {
    pub fn is_nonnegative(&self) -> bool {
        !matches!(self, Positivity::Negative(_))
    }
}

/// Classifies a real value in the ordered field.
pub fn classify(v: &PiSeries) -> Result<Positivity> {
    let s = v.signum()?;
    let lead = || v.value.leading().map(|(e, _)| e.clone()).expect("nonzero value has a leading term");
    Ok(match s {
        Ordering::Equal => Positivity::Zero,
        Ordering::Greater => Positivity::Positive(lead()),
        Ordering::Less => Positivity::Negative(lead()),
    })
}

/// Classification of `ω(conj(f)·f)`.
pub fn positivity_check(omega: &Functional, f: &EnvelopePoly, product: Product, order: &Rational) -> Result<Positivity> {
    classify(&sesquilinear(omega, f, f, product, order)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchySchwarz {
    pub holds: bool,
    /// `ω(conj(f)·g) = conj(ω(conj(g)·f))` below the common truncation.
    pub hermitian: bool,
    pub fg: PiSeries,
    pub ff: PiSeries,
    pub gg: PiSeries,
}

/// Checks `|ω(conj(f)·g)|² ≤ ω(conj(f)·f) ω(conj(g)·g)` in the field ordering.
pub fn cauchy_schwarz_check(
    omega: &Functional,
    f: &EnvelopePoly,
    g: &EnvelopePoly,
    product: Product,
    order: &Rational,
) -> Result<CauchySchwarz> {
    let fg = sesquilinear(omega, f, g, product, order)?;
    let gf = sesquilinear(omega, g, f, product, order)?;
    let ff = sesquilinear(omega, f, f, product, order)?;
    let gg = sesquilinear(omega, g, g, product, order)?;
    let lhs = fg.norm_sq();
    let rhs = ff.mul(&gg);
    let holds = rhs.compare(&lhs)? != Ordering::Less;
    let hermitian = match fg.try_sub(&gf.conj()) {
        Ok(d) => d.value.has_no_terms(),
        Err(_) => false,
    };
    Ok(CauchySchwarz { holds, hermitian, fg, ff, gg })
}

/// `ω = Σ λ^{q} c_q ω_q`, a finite λ-graded family of functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFunctional {
    pub components: Vec<(Rational, PiScalar, Functional)>,
}

impl GradedFunctional {
    pub fn single(f: Functional) -> Self {
        GradedFunctional { components: alloc::vec![(Rational::zero(), PiScalar::new(CRational::one(), 0), f)] }
    }

    /// Multiplies every component by `c·λ^e`.
    pub fn scaled(mut self, e: Rational, c: PiScalar) -> Self {
        for (q, s, _) in &mut self.components {
            *q = &*q + &e;
            *s = s.mul(&c);
        }
        self
    }

    pub fn apply(&self, f: &EnvelopePoly) -> Result<PiSeries> {
        let mut acc = PiSeries::zero();
        for (q, s, w) in &self.components {
            let v = w.apply(f)?.scale_pi(s);
            acc = acc.try_add(&PiSeries::new(v.value.shift(q), v.pi_half_power))?;
        }
        Ok(acc)
    }

    /// Lowest λ-exponent carrying a nonzero component.
    pub fn min_support(&self) -> Option<Rational> {
        self.components.iter().filter(|(_, s, _)| !s.coeff.is_zero()).map(|(q, _, _)| q.clone()).min()
    }

    /// The `λ⁰` part.
    pub fn classical_part(&self) -> GradedFunctional {
        GradedFunctional {
            components: self.components.iter().filter(|(q, _, _)| q.is_zero()).cloned().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateReport {
    pub normalization: Option<PiSeries>,
    pub normalized: bool,
    pub min_support: Option<Rational>,
    pub support_ok: bool,
    /// Indices of samples where the classical part fails `ω₀(conj(f)f) ≥ 0`.
    pub classical_failures: Vec<usize>,
    pub valid: bool,
}

/// Checks `ω(unit) = 1`, that the support starts at `λ⁰` and that the
/// classical part is positive on `samples`. `unit` is the element playing the
/// role of `1`: the constant itself for point evaluations, a normalized
/// Gaussian for integral functionals.
pub fn state_validate(omega: &GradedFunctional, unit: &EnvelopePoly, samples: &[EnvelopePoly]) -> StateReport {
    let normalization = omega.apply(unit).ok();
    let normalized = normalization
        .as_ref()
        .is_some_and(|v| v.pi_half_power == 0 || v.value.is_zero())
        && normalization.as_ref().is_some_and(|v| v.value == FormalScalar::one());
    let min_support = omega.min_support();
    let support_ok = min_support.as_ref().is_some_and(|q| q.is_zero());
    let classical = omega.classical_part();
    let mut classical_failures = Vec::new();
    for (i, f) in samples.iter().enumerate() {
        let ok = f
            .conj()
            .try_mul(f)
            .and_then(|ff| classical.apply(&ff))
            .and_then(|v| classify(&v))
            .map(|p| p.is_nonnegative())
            .unwrap_or(false);
        if !ok {
            classical_failures.push(i);
        }
    }
    let valid = normalized && support_ok && classical_failures.is_empty();
    StateReport { normalization, normalized, min_support, support_ok, classical_failures, valid }
}
