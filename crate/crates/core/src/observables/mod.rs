//! Polynomial observables over formal scalars, the Gaussian-enveloped test
//! function class, and exact Gaussian integrals.

mod envelope;
mod gaussian;
mod poly;

pub use envelope::EnvelopePoly;
pub use gaussian::{gaussian_integral, monomial_integral, Domain, PiScalar, PiSeries};
pub use poly::Poly;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameKind {
    /// Real coordinates `q¹..qⁿ, p₁..pₙ`.
    Weyl,
    /// Holomorphic coordinates `z¹..zⁿ, z̄¹..z̄ⁿ`.
    Wick,
}

/// Coordinate system of an observable: `2n` variables, the first `n` being
/// `q` (or `z`), the last `n` being `p` (or `z̄`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frame {
    pub kind: FrameKind,
    pub n: usize,
}

impl Frame {
    pub fn new(kind: FrameKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("frame dimension must be at least 1".into()));
        }
        Ok(Frame { kind, n })
    }

    pub fn weyl(n: usize) -> Self {
        assert!(n >= 1);
        Frame { kind: FrameKind::Weyl, n }
    }

    pub fn wick(n: usize) -> Self {
        assert!(n >= 1);
        Frame { kind: FrameKind::Wick, n }
    }

    pub fn vars(&self) -> usize {
        2 * self.n
    }

    /// Index of `qᵏ` / `zᵏ` (zero based).
    pub fn first(&self, k: usize) -> usize {
        k
    }

    /// Index of `pₖ` / `z̄ᵏ` (zero based).
    pub fn second(&self, k: usize) -> usize {
        self.n + k
    }

    pub fn var_name(&self, var: usize) -> String {
        let (a, b) = match self.kind {
            FrameKind::Weyl => ("q", "p"),
            FrameKind::Wick => ("z", "zb"),
        };
        if var < self.n {
            format!("{}{}", a, var + 1)
        } else {
            format!("{}{}", b, var - self.n + 1)
        }
    }

    pub(crate) fn check(&self, other: &Frame) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }
}

/// Exponent vector of length `2n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial(alloc::vec![0; vars])
    }

    pub fn var(vars: usize, i: usize) -> Self {
        let mut m = Self::one(vars);
        m.0[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Degree in the variables `range`.
    pub fn degree_in(&self, range: core::ops::Range<usize>) -> u32 {
        self.0[range].iter().sum()
    }
}
