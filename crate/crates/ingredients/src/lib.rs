//! Ingredient series built from the Jacobian and symmetric products of a
//! genus-`g` surface, the classifying spaces of the relevant gauge groups,
//! the rank-2 semistable recursion, and the triple-cover polynomials.

use hb_series::{Polynomial, RationalExpr, TruncatedSeries};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn genus_exp(g: i64) -> u32 {
    u32::try_from(2 * g).expect("genus must be positive")
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, j| {
        acc * BigInt::from(n - j) / BigInt::from(j + 1)
    })
}

/// `(1 + t)^{2g}`.
pub fn jacobian_poly(g: i64) -> Polynomial {
    Polynomial::binomial(genus_exp(g))
}

pub fn jacobian_poincare(g: i64, order: usize) -> TruncatedSeries {
    jacobian_poly(g).to_series(order)
}

/// `1 + t^2 + ... + t^{2n}`; zero for negative `n`.
pub fn projective_poly(n: i64) -> Polynomial {
    if n < 0 {
        return Polynomial::zero();
    }
    let mut c = vec![BigInt::zero(); 2 * n as usize + 1];
    for k in (0..c.len()).step_by(2) {
        c[k] = BigInt::one();
    }
    Polynomial::new(c)
}

pub fn projective_poincare(n: i64, order: usize) -> TruncatedSeries {
    projective_poly(n).to_series(order)
}

/// Poincare polynomial of the `m`-th symmetric product: the coefficient of
/// `x^m` in `(1 + x t)^{2g} / ((1 - x)(1 - x t^2))`. Negative `m` gives zero.
pub fn sym_poly(m: i64, g: i64) -> Polynomial {
    if m < 0 {
        return Polynomial::zero();
    }
    let odd = Polynomial::binomial(genus_exp(g));
    (0..=m.min(2 * g)).fold(Polynomial::zero(), |acc, j| {
        let term = projective_poly(m - j)
            .shift(j as usize)
            .scale(&odd.coeff(j as usize));
        acc.add(&term)
    })
}

pub fn sym_poincare(m: i64, g: i64, order: usize) -> TruncatedSeries {
    sym_poly(m, g).to_series(order)
}

/// Classifying space of the rank-1 gauge group: `(1+t)^{2g} / (1-t^2)`.
pub fn bg_rank1_expr(g: i64) -> RationalExpr {
    RationalExpr::over_one_minus_t2(jacobian_poly(g), 1)
}

/// Rank 2: `(1+t)^{2g} (1+t^3)^{2g} / ((1-t^2)^2 (1-t^4))`.
pub fn bg_rank2_expr(g: i64) -> RationalExpr {
    let cubic = Polynomial::from_i64s(&[1, 0, 0, 1]).pow(genus_exp(g));
    RationalExpr::new(jacobian_poly(g).mul(&cubic), vec![2, 2, 4]).expect("positive exponents")
}

pub fn bg_rank1(g: i64, order: usize) -> TruncatedSeries {
    bg_rank1_expr(g).expand(order)
}

pub fn bg_rank2(g: i64, order: usize) -> TruncatedSeries {
    bg_rank2_expr(g).expand(order)
}

pub fn bg_u21(g: i64, order: usize) -> TruncatedSeries {
    &bg_rank2(g, order) * &bg_rank1(g, order)
}

pub fn bg_su21(g: i64, order: usize) -> TruncatedSeries {
    bg_rank2(g, order)
}

/// Exponent `2(2l - d2 + g - 1)` of the rank-2 destabilizing level `l`.
pub fn ab_exponent(l: i64, d2: i64, g: i64) -> i64 {
    2 * (2 * l - d2 + g - 1)
}

/// Semistable part of the rank-2 stratification, degree `d2`:
/// the classifying series minus one rank-1 product per integer `l > d2/2`.
/// Levels whose shift exceeds the order contribute nothing.
pub fn ab_semistable_rank2(d2: i64, g: i64, order: usize) -> TruncatedSeries {
    let pair = {
        let b = bg_rank1(g, order);
        &b * &b
    };
    let mut out = bg_rank2(g, order);
    let mut l = d2.div_euclid(2) + 1;
    loop {
        let shift = ab_exponent(l, d2, g);
        if shift > order as i64 {
            break;
        }
        out = &out - &pair.shift(shift as usize);
        l += 1;
    }
    out
}

/// The same series for the gauge group with its central circle removed,
/// that is `(1 - t^2)` times [`ab_semistable_rank2`].
pub fn ab_semistable_rank2_reduced(d2: i64, g: i64, order: usize) -> TruncatedSeries {
    ab_semistable_rank2(d2, g, order)
        .mul_one_minus(2)
        .expect("positive exponent")
}

/// Pair `(m1, m2)` indexing the triple cover of `S^{m1} X x S^{m2} X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoverParams {
    pub m1: i64,
    pub m2: i64,
    pub g: i64,
}

/// `(3^{2g} - 1) C(2g-2, m1) C(2g-2, m2)`.
pub fn v_dim(c: CoverParams) -> BigInt {
    let torsion = BigInt::from(3).pow(genus_exp(c.g)) - 1;
    torsion * binomial(2 * c.g - 2, c.m1) * binomial(2 * c.g - 2, c.m2)
}

/// Product polynomial plus `v_dim t^{m1+m2}`, the correction present only
/// when both `m1` and `m2` are at most `2g - 2`.
pub fn gothen_cover_poly(c: CoverParams) -> Polynomial {
    let product = sym_poly(c.m1, c.g).mul(&sym_poly(c.m2, c.g));
    let top = 2 * c.g - 2;
    if (0..=top).contains(&c.m1) && (0..=top).contains(&c.m2) {
        product.add(&Polynomial::monomial((c.m1 + c.m2) as usize, v_dim(c)))
    } else {
        product
    }
}

pub fn gothen_cover_poincare(c: CoverParams, order: usize) -> TruncatedSeries {
    gothen_cover_poly(c).to_series(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64], n: usize) -> TruncatedSeries {
        TruncatedSeries::from_i64s(c, n)
    }

    #[test]
    fn jacobian_values() {
        assert_eq!(jacobian_poincare(2, 10), s(&[1, 4, 6, 4, 1], 10));
        assert_eq!(jacobian_poly(3), Polynomial::binomial(6));
        assert_eq!(jacobian_poly(3).eval(1), BigInt::from(64));
    }

    #[test]
    fn sym_values() {
        assert_eq!(sym_poly(0, 2), Polynomial::one());
        assert_eq!(sym_poly(1, 2), Polynomial::from_i64s(&[1, 4, 1]));
        assert_eq!(sym_poly(2, 2), Polynomial::from_i64s(&[1, 4, 7, 4, 1]));
        assert!(sym_poly(-1, 2).is_zero());
    }

    #[test]
    fn projective_values() {
        assert_eq!(projective_poly(1), Polynomial::from_i64s(&[1, 0, 1]));
        assert_eq!(projective_poly(0), Polynomial::one());
        assert!(projective_poly(-2).is_zero());
    }

    #[test]
    fn classifying_space_heads() {
        assert_eq!(bg_rank1(2, 2), s(&[1, 4, 7], 2));
        assert_eq!(bg_rank2(2, 2), s(&[1, 4, 8], 2));
        assert_eq!(bg_su21(3, 9), bg_rank2(3, 9));
    }

    #[test]
    fn semistable_rank2_head() {
        assert_eq!(ab_semistable_rank2(1, 2, 2), s(&[1, 4, 8], 2));
        let full = ab_semistable_rank2(1, 2, 12);
        let bg = bg_rank2(2, 12);
        assert_eq!(full.truncate(3).unwrap(), bg.truncate(3).unwrap());
        assert_ne!(full.coeff(4), bg.coeff(4));
    }

    #[test]
    fn cover_values() {
        let c = |m1, m2, g| CoverParams { m1, m2, g };
        assert_eq!(gothen_cover_poly(c(0, 0, 2)), Polynomial::from_i64s(&[81]));
        assert_eq!(
            gothen_cover_poly(c(1, 1, 2)),
            Polynomial::from_i64s(&[1, 8, 338, 8, 1])
        );
        assert_eq!(gothen_cover_poly(c(3, 0, 2)), sym_poly(3, 2));
        assert_eq!(v_dim(c(1, 1, 2)), BigInt::from(320));
        assert_eq!(v_dim(c(0, 6, 4)), BigInt::from(6560));
        assert_eq!(v_dim(c(3, 0, 2)), BigInt::zero());
    }
}
