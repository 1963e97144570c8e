//! GNS constructions: Gel'fand ideals, quotient vectors, Hermitian products
//! and representations for the Wick product at `δ₀` and the Weyl-Moyal
//! product at `ω₀`.

mod hilbert;
mod linalg;
mod weyl;
mod wick;

pub use hilbert::{
    best_approximation, best_approximation_check, bessel_check, fourier_coefficient, norm_sq, parallelogram_check,
    BesselReport, PreHilbert,
};
pub use linalg::{mat_vec, solve_linear, LinearSolution};
pub use weyl::{
    op_i, op_t, weyl_adjoint_check, weyl_cyclic_check, weyl_decompose, weyl_ideal_member, weyl_inner, weyl_project,
    weyl_represent, WaveFunction, WeylDecomposition,
};
pub use wick::{
    graded_basis, gns_spectrum_graded, gram_diagonal, wick_adjoint_check, wick_apply, wick_apply_via_star,
    wick_cyclic_check, wick_ideal_member, wick_inner, wick_project, wick_represent, WickOperator, WickVector,
};

use crate::error::{Error, Result};
use crate::observables::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GnsKind {
    WickDelta,
    WeylOmega0,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GnsVector {
    Wick(WickVector),
    Weyl(WaveFunction),
}

impl GnsVector {
    pub fn kind(&self) -> GnsKind {
        match self {
            GnsVector::Wick(_) => GnsKind::WickDelta,
            GnsVector::Weyl(_) => GnsKind::WeylOmega0,
        }
    }
}

pub fn cyclic_check(kind: GnsKind, f: &Poly) -> Result<bool> {
    match kind {
        GnsKind::WickDelta => wick_cyclic_check(f),
        GnsKind::WeylOmega0 => weyl_cyclic_check(f),
    }
}

pub fn adjoint_check(f: &Poly, u: &GnsVector, v: &GnsVector) -> Result<bool> {
    match (u, v) {
        (GnsVector::Wick(u), GnsVector::Wick(v)) => wick_adjoint_check(f, u, v),
        (GnsVector::Weyl(u), GnsVector::Weyl(v)) => weyl_adjoint_check(f, u, v),
        _ => Err(Error::FrameMismatch),
    }
}
