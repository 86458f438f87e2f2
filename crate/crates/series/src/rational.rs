use serde::Serialize;

use crate::{Polynomial, SeriesError, TruncatedSeries};

/// `numerator / prod_i (1 - t^{a_i})` with the denominator kept factored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalExpr {
    numerator: Polynomial,
    denom_exponents: Vec<usize>,
}

impl RationalExpr {
    pub fn new(
        numerator: Polynomial,
        mut denom_exponents: Vec<usize>,
    ) -> Result<Self, SeriesError> {
        if denom_exponents.contains(&0) {
            return Err(SeriesError::ZeroExponent);
        }
        denom_exponents.sort_unstable();
        Ok(RationalExpr {
            numerator,
            denom_exponents,
        })
    }

    pub fn polynomial(numerator: Polynomial) -> Self {
        RationalExpr {
            numerator,
            denom_exponents: Vec::new(),
        }
    }

    /// `numerator / (1 - t^2)^k`, the shape most formulas take.
    pub fn over_one_minus_t2(numerator: Polynomial, k: usize) -> Self {
        RationalExpr {
            numerator,
            denom_exponents: vec![2; k],
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denom_exponents(&self) -> &[usize] {
        &self.denom_exponents
    }

    pub fn expand(&self, order: usize) -> TruncatedSeries {
        self.denom_exponents
            .iter()
            .fold(self.numerator.to_series(order), |acc, &a| {
                acc.div_one_minus(a)
                    .expect("exponents validated at construction")
            })
    }

    /// The human-readable form `num / ((1-t^a)(1-t^b)...)`.
    pub fn describe(&self) -> String {
        let deg = self.numerator.degree().unwrap_or(0);
        let num = self.numerator.to_series(deg).to_string();
        if self.denom_exponents.is_empty() {
            return num;
        }
        let den: Vec<String> = self
            .denom_exponents
            .iter()
            .map(|a| format!("(1-t^{a})"))
            .collect();
        format!("({num}) / {}", den.join(""))
    }
}

#[derive(Serialize)]
struct ExprRepr<'a> {
    numerator: Vec<String>,
    denom_exponents: &'a [usize],
}

impl Serialize for RationalExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExprRepr {
            numerator: self
                .numerator
                .coeffs()
                .iter()
                .map(ToString::to_string)
                .collect(),
            denom_exponents: &self.denom_exponents,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_examples() {
        let e = RationalExpr::over_one_minus_t2(Polynomial::binomial(4), 1);
        assert_eq!(e.expand(2), TruncatedSeries::from_i64s(&[1, 4, 7], 2));
        let e = RationalExpr::over_one_minus_t2(Polynomial::one(), 2);
        assert_eq!(e.expand(4), TruncatedSeries::from_i64s(&[1, 0, 2, 0, 3], 4));
        let e = RationalExpr::new(Polynomial::from_i64s(&[0, 0, 0, 0, 1]), vec![4]).unwrap();
        assert_eq!(
            e.expand(9),
            TruncatedSeries::from_i64s(&[0, 0, 0, 0, 1, 0, 0, 0, 1], 9)
        );
        assert!(RationalExpr::new(Polynomial::one(), vec![2, 0]).is_err());
    }

    #[test]
    fn describe_mentions_each_factor() {
        let e = RationalExpr::new(Polynomial::from_i64s(&[1, 1]), vec![4, 2]).unwrap();
        assert_eq!(e.describe(), "(1 + t) / (1-t^2)(1-t^4)");
    }
}
