use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

use super::Rational;

/// A rational exponent or `+∞`.
///
/// Used both for truncation orders (`∞` means exact) and for valuations
/// (`∞` only for the zero series). The derived ordering puts every finite
/// value below `Infinite`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(Rational),
    Infinite,
}

/// The order `o(a) = min supp a` of a series.
pub type Valuation = Order;

impl Order {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Order::Finite(r) => Some(r),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Order::Infinite)
    }

    pub fn min(self, other: Order) -> Order {
        core::cmp::min(self, other)
    }

    /// `true` when a coefficient at exponent `e` is below this order.
    pub fn admits(&self, e: &Rational) -> bool {
        match self {
            Order::Finite(t) => e < t,
            Order::Infinite => true,
        }
    }
}

impl From<Rational> for Order {
    fn from(r: Rational) -> Self {
        Order::Finite(r)
    }
}

impl<'a> Add<&'a Order> for &'a Order {
    type Output = Order;
    fn add(self, o: &Order) -> Order {
        match (self, o) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl<'a> Add<&'a Rational> for &'a Order {
    type Output = Order;
    fn add(self, o: &Rational) -> Order {
        match self {
            Order::Finite(a) => Order::Finite(a + o),
            Order::Infinite => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(r) => write!(f, "{}", r),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// The non-archimedean absolute value `φ(a) = 2^{-o(a)}`, kept as its
/// exponent `o(a)`. Ordering is reversed with respect to the exponent:
/// a larger valuation is a smaller absolute value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbsValue(pub Order);

impl AbsValue {
    pub fn exponent(&self) -> &Order {
        &self.0
    }
}

impl PartialOrd for AbsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AbsValue {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}
