//! Leading-order arithmetic for vanishing trembles.
//!
//! A tremble sequence perturbs every zero-probability action to `c·ε^k`.
//! Quantities built from such probabilities with `+`, `×` and `÷` are
//! positive rational functions of `ε`, and for positive summands the
//! leading term of a sum is the sum of the leading terms of lowest order.
//! Tracking only `(coefficient, order)` therefore yields the exact
//! `ε → 0` limit of every belief and conditional probability without
//! picking a numeric `ε`.

use std::fmt;
use std::ops::{Add, Div, Mul};


use crate::scalar::Scalar;

/// `coef · ε^order`, or the exact zero function.
#[derive(Clone, Debug, PartialEq)]
pub enum Lead<S> {
    Zero,
    Term { coef: S, order: i32 },
}

impl<S: Scalar> Lead<S> {
    pub fn constant(value: S) -> Self {
        if value.is_zero() {
            Lead::Zero
        } else {
            Lead::Term { coef: value, order: 0 }
        }
    }

    pub fn term(coef: S, order: i32) -> Self {
        if coef.is_zero() {
            Lead::Zero
        } else {
            Lead::Term { coef, order }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Lead::Zero)
    }

    pub fn order(&self) -> Option<i32> {
        match self {
            Lead::Zero => None,
            Lead::Term { order, .. } => Some(*order),
        }
    }

    /// Value at `ε → 0`. `None` when the quantity diverges.
    pub fn limit(&self) -> Option<S> {
        match self {
            Lead::Zero => Some(S::zero()),
            Lead::Term { coef, order } => match order.cmp(&0) {
                std::cmp::Ordering::Greater => Some(S::zero()),
                std::cmp::Ordering::Equal => Some(coef.clone()),
                std::cmp::Ordering::Less => None,
            },
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        match self {
            Lead::Zero => Lead::Zero,
            Lead::Term { coef, order } => Lead::term(coef.clone() * factor.clone(), *order),
        }
    }

    pub fn sum<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Lead<S>>,
    {
        items
            .into_iter()
            .fold(Lead::Zero, |acc, x| acc + x.clone())
    }

    /// Normalizes a vector of positive quantities to a distribution and
    /// returns its limit. `None` if every entry is identically zero.
    pub fn normalized_limit(items: &[Lead<S>]) -> Option<Vec<S>> {
        let total = Lead::sum(items.iter());
        if total.is_zero() {
            return None;
        }
        items.iter().map(|x| (x.clone() / total.clone()).limit()).collect()
    }

    /// Normalizes to a vector of leading terms that sum to one in the limit.
    pub fn normalize(items: &[Lead<S>]) -> Option<Vec<Lead<S>>> {
        let total = Lead::sum(items.iter());
        if total.is_zero() {
            return None;
        }
        Some(items.iter().map(|x| x.clone() / total.clone()).collect())
    }

    /// Evaluates the leading term at a concrete `ε` (numeric checks only).
    pub fn eval(&self, eps: f64) -> f64 {
        match self {
            Lead::Zero => 0.0,
            Lead::Term { coef, order } => coef.to_f64() * eps.powi(*order),
        }
    }
}

impl<S: Scalar> Add for Lead<S> {
    type Output = Lead<S>;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Lead::Zero, x) | (x, Lead::Zero) => x,
            (Lead::Term { coef: a, order: p }, Lead::Term { coef: b, order: q }) => {
                match p.cmp(&q) {
                    std::cmp::Ordering::Less => Lead::Term { coef: a, order: p },
                    std::cmp::Ordering::Greater => Lead::Term { coef: b, order: q },
                    std::cmp::Ordering::Equal => Lead::term(a + b, p),
                }
            }
        }
    }
}

impl<S: Scalar> Mul for Lead<S> {
    type Output = Lead<S>;

    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Lead::Zero, _) | (_, Lead::Zero) => Lead::Zero,
            (Lead::Term { coef: a, order: p }, Lead::Term { coef: b, order: q }) => {
                Lead::term(a * b, p + q)
            }
        }
    }
}

impl<S: Scalar> Div for Lead<S> {
    type Output = Lead<S>;

    /// Panics on division by the zero function.
    fn div(self, rhs: Self) -> Self {
        match (self, rhs) {
            (_, Lead::Zero) => panic!("division by an identically zero quantity"),
            (Lead::Zero, _) => Lead::Zero,
            (Lead::Term { coef: a, order: p }, Lead::Term { coef: b, order: q }) => {
                Lead::term(a / b, p - q)
            }
        }
    }
}

impl<S: Scalar> fmt::Display for Lead<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lead::Zero => write!(f, "0"),
            Lead::Term { coef, order: 0 } => write!(f, "{coef}"),
            Lead::Term { coef, order } => write!(f, "{coef}·ε^{order}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    fn t(n: i64, d: i64, k: i32) -> Lead<Rational> {
        Lead::term(ratio(n, d), k)
    }

    #[test]
    fn sum_keeps_lowest_order() {
        assert_eq!(t(1, 2, 1) + t(3, 1, 2), t(1, 2, 1));
        assert_eq!(t(1, 2, 1) + t(1, 4, 1), t(3, 4, 1));
        assert_eq!(Lead::Zero + t(1, 1, 3), t(1, 1, 3));
    }

    #[test]
    fn off_path_posterior_limit() {
        // two types with prior 1/4, 3/4 both trembling to an unexpected
        // message at the same rate: the posterior limit is the prior
        let w = [t(1, 4, 0) * t(1, 2, 1), t(3, 4, 0) * t(1, 2, 1)];
        assert_eq!(Lead::normalized_limit(&w).unwrap(), vec![ratio(1, 4), ratio(3, 4)]);
        // one type trembles an order faster: posterior concentrates on it
        let w = [t(1, 4, 0) * t(1, 1, 1), t(3, 4, 0) * t(1, 1, 2)];
        assert_eq!(Lead::normalized_limit(&w).unwrap(), vec![ratio(1, 1), ratio(0, 1)]);
    }

    #[test]
    fn limits() {
        assert_eq!(t(2, 1, 0).limit(), Some(ratio(2, 1)));
        assert_eq!(t(2, 1, 1).limit(), Some(ratio(0, 1)));
        assert_eq!(t(2, 1, -1).limit(), None);
        assert!(Lead::<f64>::normalized_limit(&[Lead::Zero, Lead::Zero]).is_none());
    }
}
