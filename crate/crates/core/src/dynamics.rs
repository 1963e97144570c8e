//! Formal time evolution as `t`-Taylor jets: the Heisenberg equation
//! `d f_t/dt = (1/iλ)[f_t, H]` and the induced Schrödinger evolution on a GNS
//! space whose Gel'fand ideal contains `H`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::formal_scalar::{int, CRational, FormalScalar, Order, Rational};
use crate::gns::{
    wick_apply, wick_ideal_member, wick_project, weyl_ideal_member, weyl_project, weyl_represent, GnsKind, GnsVector,
};
use crate::observables::{EnvelopePoly, FrameKind, Poly};
use crate::star::{commutator, star, wick_bracket, StarKind};

/// `Σ_{m ≤ t_order} tᵐ f⁽ᵐ⁾`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeSeriesPoly {
    pub coeffs: Vec<Poly>,
    pub t_order: u32,
}

impl TimeSeriesPoly {
    pub fn coeff(&self, m: u32) -> Option<&Poly> {
        self.coeffs.get(m as usize)
    }

    /// `f_t ⋆ g_t`, truncated at `t_order`.
    pub fn star_product(&self, kind: StarKind, other: &TimeSeriesPoly) -> Result<TimeSeriesPoly> {
        let t_order = self.t_order.min(other.t_order);
        let frame = self.coeffs[0].frame();
        let mut coeffs = Vec::new();
        for m in 0..=t_order as usize {
            let mut acc = Poly::zero(frame);
            for j in 0..=m {
                acc = &acc + &star(kind, &self.coeffs[j], &other.coeffs[m - j])?;
            }
            coeffs.push(acc);
        }
        Ok(TimeSeriesPoly { coeffs, t_order })
    }

    /// `t ↦ −t`.
    pub fn reversed(&self) -> TimeSeriesPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| if m % 2 == 1 { -c } else { c.clone() })
            .collect();
        TimeSeriesPoly { coeffs, t_order: self.t_order }
    }

    pub fn conj(&self) -> TimeSeriesPoly {
        TimeSeriesPoly { coeffs: self.coeffs.iter().map(|c| c.conj()).collect(), t_order: self.t_order }
    }
}

fn i_lambda() -> FormalScalar {
    FormalScalar::monomial(int(1), CRational::i())
}

/// `(1/iλ)[g, H]`, asserting that the commutator is divisible by `λ`.
pub fn lambda_divided_commutator(kind: StarKind, g: &Poly, h: &Poly) -> Result<Poly> {
    let c = commutator(kind, g, h)?;
    if c.is_zero() {
        return Ok(c);
    }
    let bound = &(&g.valuation_lower_bound() + &h.valuation_lower_bound()) + &int(1);
    let v = c.valuation_lower_bound();
    if v < bound {
        return Err(Error::NotLambdaDivisible);
    }
    // 1/(iλ) = −i λ⁻¹
    Ok(c.shift_lambda(&int(-1)).scale_c(&-CRational::i()))
}

/// `f_t` through `t`-order `m`: `f⁽ʲ⁺¹⁾ = (1/(iλ(j+1))) [f⁽ʲ⁾, H]`.
pub fn heisenberg_evolve(f: &Poly, h: &Poly, kind: StarKind, t_order: u32) -> Result<TimeSeriesPoly> {
    let mut coeffs = Vec::with_capacity(t_order as usize + 1);
    coeffs.push(f.clone());
    for j in 0..t_order {
        let next = lambda_divided_commutator(kind, &coeffs[j as usize], h)?;
        coeffs.push(next.scale_rational(&Rational::new(1.into(), (j as i64 + 1).into())));
    }
    Ok(TimeSeriesPoly { coeffs, t_order })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatReport {
    /// `Ĥ(g) = (1/iλ)[g,H] − {g,H₀}`.
    pub value: Poly,
    pub order_g: Order,
    pub order_hat: Order,
    /// `o(Ĥ(g)) > o(g)`.
    pub raised: bool,
}

fn first_order_bracket(kind: StarKind, g: &Poly, h0: &Poly) -> Result<Poly> {
    match kind {
        StarKind::WeylMoyal => g.poisson(h0),
        StarKind::Wick | StarKind::FormalWickWn => wick_bracket(g, h0),
    }
}

/// Splits `H = H₀ + h` into its `λ⁰` part and a perturbation of positive order.
pub fn split_hamiltonian(h: &Poly) -> Result<(Poly, Poly)> {
    let h0 = h.lambda_coefficient(&Rational::zero());
    let rest = h - &h0;
    if !rest.is_zero() {
        match rest.valuation_lower_bound() {
            Order::Finite(v) if v > Rational::zero() => {}
            Order::Infinite => {}
            _ => return Err(Error::NonPositiveOrder),
        }
    }
    Ok((h0, rest))
}

pub fn hamiltonian_hat_order(g: &Poly, h: &Poly, kind: StarKind) -> Result<HatReport> {
    let (h0, _) = split_hamiltonian(h)?;
    let value = &lambda_divided_commutator(kind, g, h)? - &first_order_bracket(kind, g, &h0)?;
    let order_g = g.valuation()?;
    let order_hat = value.valuation()?;
    let raised = order_hat > order_g || (order_g.is_infinite() && order_hat.is_infinite());
    Ok(HatReport { value, order_g, order_hat, raised })
}

fn kind_for(gns: GnsKind) -> StarKind {
    match gns {
        GnsKind::WickDelta => StarKind::Wick,
        GnsKind::WeylOmega0 => StarKind::WeylMoyal,
    }
}

/// `ψ(t) = ψ_{f₋ₜ}` as `t`-Taylor data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub kind: GnsKind,
    pub vectors: Vec<GnsVector>,
}

fn project(kind: GnsKind, f: &Poly) -> Result<GnsVector> {
    Ok(match kind {
        GnsKind::WickDelta => GnsVector::Wick(wick_project(f)?),
        GnsKind::WeylOmega0 => GnsVector::Weyl(weyl_project(&EnvelopePoly::from(f.clone()))?),
    })
}

fn in_ideal(kind: GnsKind, h: &Poly) -> Result<bool> {
    match kind {
        GnsKind::WickDelta => wick_ideal_member(h),
        GnsKind::WeylOmega0 => weyl_ideal_member(&h.clone().into()),
    }
}

fn check_frame(kind: GnsKind, f: &Poly) -> Result<()> {
    let want = match kind {
        GnsKind::WickDelta => FrameKind::Wick,
        GnsKind::WeylOmega0 => FrameKind::Weyl,
    };
    if f.frame().kind == want {
        Ok(())
    } else {
        Err(Error::FrameMismatch)
    }
}

pub fn schrodinger_evolve(f: &Poly, h: &Poly, kind: GnsKind, t_order: u32) -> Result<Trajectory> {
    check_frame(kind, h)?;
    check_frame(kind, f)?;
    if !in_ideal(kind, h)? {
        return Err(Error::NotInGelfandIdeal);
    }
    let ft = heisenberg_evolve(f, h, kind_for(kind), t_order)?.reversed();
    let vectors = ft.coeffs.iter().map(|c| project(kind, c)).collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { kind, vectors })
}

fn apply_h(kind: GnsKind, h: &Poly, v: &GnsVector) -> Result<GnsVector> {
    Ok(match v {
        GnsVector::Wick(w) => GnsVector::Wick(wick_apply(h, w)?),
        GnsVector::Weyl(w) => GnsVector::Weyl(weyl_represent(h, w)?),
    })
    .and_then(|r| if r.kind() == kind { Ok(r) } else { Err(Error::FrameMismatch) })
}

fn difference_is_zero(a: &GnsVector, b: &GnsVector) -> Result<bool> {
    match (a, b) {
        (GnsVector::Wick(a), GnsVector::Wick(b)) => Ok(a.sub(b).is_zero()),
        (GnsVector::Weyl(a), GnsVector::Weyl(b)) => Ok(a.try_sub(b)?.is_zero()),
        _ => Err(Error::FrameMismatch),
    }
}

fn scale_vec(v: &GnsVector, c: &FormalScalar) -> GnsVector {
    match v {
        GnsVector::Wick(w) => GnsVector::Wick(w.scale(c)),
        GnsVector::Weyl(w) => GnsVector::Weyl(w.scale(c)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    /// Number of `t`-orders compared.
    pub checked: usize,
    /// First `t`-order `m` with `iλ(m+1)ψ_{m+1} ≠ π(H)ψ_m`.
    pub first_failure: Option<usize>,
}

impl ResidualReport {
    pub fn is_zero(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks `iλ dψ/dt = π(H) ψ` on the `t`-Taylor data.
pub fn schrodinger_residual(traj: &Trajectory, h: &Poly) -> Result<ResidualReport> {
    let mut first_failure = None;
    let checked = traj.vectors.len().saturating_sub(1);
    for m in 0..checked {
        let lhs = scale_vec(&traj.vectors[m + 1], &i_lambda().scale_rational(&int(m as i64 + 1)));
        let rhs = apply_h(traj.kind, h, &traj.vectors[m])?;
        if !difference_is_zero(&lhs, &rhs)? {
            first_failure = Some(m);
            break;
        }
    }
    Ok(ResidualReport { checked, first_failure })
}
