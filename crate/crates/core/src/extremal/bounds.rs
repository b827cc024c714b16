use num::{BigInt, One};
use serde::Serialize;

use crate::combinat::binomial_big;
use crate::exactla::Rational;

/// `1 - floor(n^2/4) / C(n, 2)`, the exact minimum for k = 2. Needs `n >= 2`.
pub fn exact_k2_minimum(n: u64) -> Rational {
    assert!(n >= 2, "exact k = 2 minimum needs at least two vertices");
    Rational::one() - Rational::new(BigInt::from(n * n / 4), binomial_big(n, 2))
}

/// `1 - C(n,k)/C(2n,k) * 2nk/(2n-k)`: the YBLM sum of the semi-simplex
/// family of two disjoint n-sets on 2n vertices.
pub fn two_disjoint_edges_closed_form(n: u64, k: u64) -> Rational {
    assert!(k < 2 * n, "closed form needs k < 2n");
    let ratio = Rational::new(binomial_big(n, k), binomial_big(2 * n, k));
    let factor = Rational::new(BigInt::from(2 * n * k), BigInt::from(2 * n - k));
    Rational::one() - ratio * factor
}

/// Closed-form reference values for the limits of the constrained and
/// unconstrained minima.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceBounds {
    pub k: u64,
    /// `1 - k / 2^k`, upper bound on the (k-1)-linear limit.
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub upper_linear: Rational,
    /// `(1 - 1/k)^(k-1)`, upper bound on the unconstrained limit.
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub upper_free: Rational,
    /// `1 / (k+1)`, the common value at n = k + 1 where both sequences start.
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub lower_start: Rational,
}

pub fn reference_bounds(k: u64) -> ReferenceBounds {
    assert!(k >= 2, "reference bounds are defined for k >= 2");
    let kk = BigInt::from(k);
    let upper_linear = Rational::one() - Rational::new(kk.clone(), BigInt::from(2).pow(k as u32));
    let base = Rational::new(kk.clone() - 1, kk.clone());
    let upper_free = num::pow(base, (k - 1) as usize);
    let lower_start = Rational::new(BigInt::one(), kk + 1);
    ReferenceBounds {
        k,
        upper_linear,
        upper_free,
        lower_start,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational;

    #[test]
    fn exact_k2_values() {
        assert_eq!(exact_k2_minimum(3), rational(1, 3));
        assert_eq!(exact_k2_minimum(4), rational(1, 3));
        assert_eq!(exact_k2_minimum(5), rational(2, 5));
        // 1 - 2500/4950 -> 1/2
        assert_eq!(exact_k2_minimum(100), rational(49, 99));
    }

    #[test]
    fn reference_values() {
        let b2 = reference_bounds(2);
        assert_eq!((b2.upper_linear, b2.lower_start), (rational(1, 2), rational(1, 3)));
        let b3 = reference_bounds(3);
        assert_eq!((b3.upper_linear, b3.upper_free), (rational(5, 8), rational(4, 9)));
        let b4 = reference_bounds(4);
        assert_eq!((b4.upper_linear, b4.upper_free), (rational(3, 4), rational(27, 64)));
    }

    #[test]
    fn two_disjoint_edges_values() {
        assert_eq!(two_disjoint_edges_closed_form(3, 2), rational(2, 5));
        assert_eq!(two_disjoint_edges_closed_form(3, 3), rational(7, 10));
    }
}
