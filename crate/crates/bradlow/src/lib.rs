//! Stable pairs `(E, phi)` with `E = E1* E2 K`: the stability parameters,
//! the wall-crossing difference between the equivariant series at
//! `sigma(d1, d2)` and the moduli series at `sigma_min`, the maximal case,
//! and providers that supply the two absolute series.

mod provider;

pub use provider::{
    provider_from_file, provider_from_json, write_provider_file, BradlowProvider, FileProvider,
    MaximalCase, ProviderEntry, Symbolic,
};

use hb_ingredients::{jacobian_poly, projective_poly, sym_poly};
use hb_params::{first_int_above, last_int_below, make_params, ModuliParams, Rational};
use hb_series::{Polynomial, RationalExpr, TruncatedSeries};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BradlowError {
    #[error("sigma_min = {sigma_min} is not bracketed by e/2 and floor(e/2) + 1 for e = {e}")]
    Bracketing { e: i64, sigma_min: Rational },
    #[error("negative exponent {0} in the literal transcription")]
    NegativeExponent(i64),
    #[error("difference mismatch at degree {degree}")]
    DifferenceMismatch { degree: usize },
    #[error("provider file: {0}")]
    Parse(String),
    #[error("provider file: {0}")]
    Io(String),
}

/// One summand of the difference formula, `(t^a - t^b) J S^j / (1 - t^2)`
/// for a flip at level `ell`, or `t^a J S^j / (1 - t^2)` for the wall
/// at `sigma(d1, d2)` itself.
#[derive(Debug, Clone, Serialize)]
pub struct WwTerm {
    pub label: String,
    pub ell: Option<i64>,
    pub a: i64,
    pub b: Option<i64>,
    pub sym: i64,
    pub expr: RationalExpr,
}

impl WwTerm {
    /// The numerator, that is `(1 - t^2)` times the term.
    pub fn numerator(&self) -> &Polynomial {
        self.expr.numerator()
    }
}

fn flip_range(p: &ModuliParams) -> std::ops::RangeInclusive<i64> {
    first_int_above(p.d2, 2)..=last_int_below(p.d1 + p.d2, 3)
}

fn mono(k: i64) -> Polynomial {
    Polynomial::monomial(k as usize, 1.into())
}

/// Summands of `P(C_sigma) - P(N_sigma_min)`. Panics on parameters outside
/// the Toledo bound, where the flip exponents turn negative.
pub fn ww_terms(p: &ModuliParams) -> Vec<WwTerm> {
    let g = p.g;
    let jac = jacobian_poly(g);
    let mut out = Vec::new();
    for l in flip_range(p) {
        let a = 2 * (g - 1 + 2 * l - p.d2);
        let j = p.d2 - l - p.d1 + 2 * g - 2;
        let b = 2 * j;
        assert!(
            j >= 0,
            "difference formula needs 0 <= tau <= 2g - 2, got {p:?}"
        );
        let num = mono(a).sub(&mono(b)).mul(&jac).mul(&sym_poly(j, g));
        out.push(WwTerm {
            label: format!("flip at l={l}"),
            ell: Some(l),
            a,
            b: Some(b),
            sym: j,
            expr: RationalExpr::over_one_minus_t2(num, 1),
        });
    }
    if p.mod3_class == 0 {
        let twice = 2 * p.d1 - p.d2;
        let a = 2 * (g - 1 + twice / 3);
        let j = 2 * g - 2 - 2 * twice / 3;
        let num = mono(a).mul(&jac).mul(&sym_poly(j, g));
        out.push(WwTerm {
            label: "wall at sigma(d1,d2)".into(),
            ell: None,
            a,
            b: None,
            sym: j,
            expr: RationalExpr::over_one_minus_t2(num, 1),
        });
    }
    out
}

/// `P^{G(E)}(C_sigma(d1,d2)) - P(N_sigma_min)`.
pub fn ww_difference(p: &ModuliParams, order: usize) -> TruncatedSeries {
    let parts: Vec<TruncatedSeries> = ww_terms(p).iter().map(|t| t.expr.expand(order)).collect();
    TruncatedSeries::sum(order, &parts).expect("equal orders")
}

/// `(1 - t^2)` times the difference, as a finite polynomial.
pub fn ww_numerator_sum(p: &ModuliParams) -> Polynomial {
    ww_terms(p)
        .iter()
        .fold(Polynomial::zero(), |acc, t| acc.add(t.numerator()))
}

/// Literal reading of the displayed difference formula: squared Jacobian
/// factor and second flip exponent `2(g - 1 + d2 - d1 - l)`. Kept to make
/// the comparison with [`ww_difference`] explicit.
pub fn ww_difference_as_printed(
    p: &ModuliParams,
    order: usize,
) -> Result<TruncatedSeries, BradlowError> {
    let g = p.g;
    let jac2 = jacobian_poly(g).pow(2);
    let mut num = Polynomial::zero();
    for l in flip_range(p) {
        let a = 2 * (g - 1 + 2 * l - p.d2);
        let b = 2 * (g - 1 + p.d2 - p.d1 - l);
        if b < 0 {
            return Err(BradlowError::NegativeExponent(b));
        }
        let j = p.d2 - l - p.d1 + 2 * g - 2;
        num = num.add(&mono(a).sub(&mono(b)).mul(&jac2).mul(&sym_poly(j, g)));
    }
    if p.mod3_class == 0 {
        let twice = 2 * p.d1 - p.d2;
        let a = 2 * (g - 1 + twice / 3);
        let j = 2 * g - 2 - 2 * twice / 3;
        num = num.add(&mono(a).mul(&jac2).mul(&sym_poly(j, g)));
    }
    Ok(RationalExpr::over_one_minus_t2(num, 1).expand(order))
}

/// `J^2 P(CP^{2g-3}) / (1-t^2) + t^{4g-4} J^2 / (1-t^2)^2`.
pub fn maximal_first_term(g: i64, order: usize) -> TruncatedSeries {
    let jac2 = jacobian_poly(g).pow(2);
    let head = RationalExpr::over_one_minus_t2(jac2.mul(&projective_poly(2 * g - 3)), 1);
    let tail = RationalExpr::over_one_minus_t2(jac2.shift((4 * g - 4) as usize), 2);
    &head.expand(order) + &tail.expand(order)
}

/// Equivariant pair series in the maximal case:
/// `J (P(CP^{2g-3}) + t^{4g-4} / (1 - t^2))`.
pub fn maximal_pairs_equivariant(g: i64, order: usize) -> TruncatedSeries {
    let jac = jacobian_poly(g);
    let head = jac.mul(&projective_poly(2 * g - 3)).to_series(order);
    let tail = RationalExpr::over_one_minus_t2(jac.shift((4 * g - 4) as usize), 1);
    &head + &tail.expand(order)
}

pub fn sigma_of(p: &ModuliParams) -> Rational {
    p.sigma
}

/// `sigma_min`, after checking `e/2 < sigma_min < floor(e/2) + 1`.
pub fn sigma_min_of(p: &ModuliParams) -> Result<Rational, BradlowError> {
    let half = Rational::new(p.e, 2);
    let upper = Rational::from_integer(p.e.div_euclid(2) + 1);
    if half < p.sigma_min && p.sigma_min < upper {
        Ok(p.sigma_min)
    } else {
        Err(BradlowError::Bracketing {
            e: p.e,
            sigma_min: p.sigma_min,
        })
    }
}

/// A degree pair realizing `deg E = e` in genus `g`: `(0, e - 4g + 4)`.
/// Every pair with the same `e` is a tensor shift of this one.
pub fn representative(g: i64, e: i64) -> ModuliParams {
    make_params(g, 0, e - 4 * g + 4).expect("genus checked by caller")
}

#[cfg(test)]
mod tests {
    use super::*;
    use hb_ingredients::jacobian_poincare;

    #[test]
    fn difference_examples() {
        let n = 24;
        let p = make_params(2, 2, 1).unwrap();
        let corrected = RationalExpr::over_one_minus_t2(Polynomial::binomial(4).shift(4), 1);
        assert_eq!(ww_difference(&p, n), corrected.expand(n));
        let printed = RationalExpr::over_one_minus_t2(Polynomial::binomial(8).shift(4), 1);
        assert_eq!(ww_difference_as_printed(&p, n).unwrap(), printed.expand(n));

        let p = make_params(2, 1, 2).unwrap();
        let terms = ww_terms(&p);
        assert_eq!(terms.len(), 1);
        assert_eq!((terms[0].a, terms[0].sym), (2, 2));

        let p = make_params(2, 1, 0).unwrap();
        assert!(ww_difference(&p, n).is_zero());
    }

    #[test]
    fn maximal_values() {
        for g in 2..=5 {
            let n = (4 * g + 20) as usize;
            let want = RationalExpr::over_one_minus_t2(jacobian_poly(g).pow(2), 2).expand(n);
            assert_eq!(maximal_first_term(g, n), want);
            let pairs = maximal_pairs_equivariant(g, n);
            let lhs = (&pairs * &jacobian_poincare(g, n))
                .div_one_minus(2)
                .unwrap();
            assert_eq!(lhs, want);
        }
    }

    #[test]
    fn sigma_values() {
        let p = make_params(2, 2, 1).unwrap();
        assert_eq!(sigma_of(&p), Rational::from_integer(1));
        assert_eq!(sigma_min_of(&p).unwrap(), Rational::new(3, 4));
        let p = make_params(2, 0, 0).unwrap();
        assert_eq!((sigma_of(&p), p.e), (Rational::from_integer(2), 4));
        assert_eq!(sigma_min_of(&p).unwrap(), Rational::new(9, 4));
        let p = make_params(3, 1, 2).unwrap();
        assert_eq!((p.e, sigma_of(&p)), (8, Rational::from_integer(4)));
    }

    #[test]
    fn representative_has_the_requested_degree() {
        for g in 2..=4 {
            for e in -3..12 {
                assert_eq!(representative(g, e).e, e);
            }
        }
    }
}
