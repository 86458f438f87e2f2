//! Critical sets of the Higgs-bundle functional: their seven types and
//! ranges of levels, the equivariant series of each critical set, the
//! constant negative-normal dimensions, and the series of the
//! negative-normal pairs used to assemble the Morse contributions.

use std::fmt;

use hb_ingredients::{ab_semistable_rank2_reduced, jacobian_poly, sym_poly};
use hb_params::{first_int_above, HalfInt, ModuliParams};
use hb_series::{Polynomial, RationalExpr, TruncatedSeries};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Kind {
    A,
    B1,
    B2,
    B3,
    C1,
    C2,
    C3,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::A,
        Kind::B1,
        Kind::B2,
        Kind::B3,
        Kind::C1,
        Kind::C2,
        Kind::C3,
    ];

    /// Range of levels admitted by this kind, as text.
    pub fn range_text(self) -> &'static str {
        match self {
            Kind::A => "l = d2/2",
            Kind::B1 => "d2/2 < l < d1",
            Kind::B2 => "l = d1 > d2/2",
            Kind::B3 => "l > d1",
            Kind::C1 => "(d1+d2)/3 < l <= d2-d1+2g-2",
            Kind::C2 => "(2d2-d1)/3 < l < d1",
            Kind::C3 => "d1 < l <= d1+2g-2",
        }
    }

    pub fn contains(self, p: &ModuliParams, ell: HalfInt) -> bool {
        if self == Kind::A {
            return ell == p.ell_a();
        }
        let Some(l) = ell.as_integer() else {
            return false;
        };
        let (d1, d2) = (p.d1, p.d2);
        match self {
            Kind::A => unreachable!(),
            Kind::B1 => 2 * l > d2 && l < d1,
            Kind::B2 => l == d1 && 2 * d1 > d2,
            Kind::B3 => l > d1 && 2 * l > d2,
            Kind::C1 => 3 * l > d1 + d2 && l <= p.top_c1(),
            Kind::C2 => 3 * l > 2 * d2 - d1 && l < d1,
            Kind::C3 => l > d1 && l <= d1 + 2 * p.g - 2,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("parameters {0} violate 0 <= tau <= 2g-2")]
    InvalidParams(ModuliParams),
    #[error("level {ell} is outside the range of {kind} ({})", kind.range_text())]
    OutOfRange { kind: Kind, ell: HalfInt },
    #[error("range violation: {what} = {value} is negative at {kind}@{ell}")]
    RangeViolation {
        kind: Kind,
        ell: HalfInt,
        what: &'static str,
        value: i64,
    },
    #[error("no closed dimension formula is stated for {kind}")]
    NotSpecified { kind: Kind },
    #[error("pair {pair:?} belongs to {expected}, not {got}")]
    PairMismatch {
        pair: PairKind,
        expected: Kind,
        got: Kind,
    },
}

/// A critical set: its type, its level and the ambient parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StratumDescriptor {
    pub kind: Kind,
    pub ell: HalfInt,
    #[serde(skip)]
    pub params: ModuliParams,
}

impl StratumDescriptor {
    pub fn new(kind: Kind, ell: HalfInt, params: ModuliParams) -> Result<Self, StrataError> {
        if !kind.contains(&params, ell) {
            return Err(StrataError::OutOfRange { kind, ell });
        }
        Ok(StratumDescriptor { kind, ell, params })
    }

    fn int_ell(&self) -> i64 {
        self.ell
            .as_integer()
            .expect("only the A level can be half-integral")
    }

    fn guard(&self, what: &'static str, value: i64) -> Result<i64, StrataError> {
        if value < 0 {
            Err(StrataError::RangeViolation {
                kind: self.kind,
                ell: self.ell,
                what,
                value,
            })
        } else {
            Ok(value)
        }
    }
}

/// All critical sets with level at most `l_max`, sorted by level then type.
pub fn enumerate_critical(
    p: &ModuliParams,
    l_max: HalfInt,
) -> Result<Vec<StratumDescriptor>, StrataError> {
    if !p.valid {
        return Err(StrataError::InvalidParams(*p));
    }
    let mut out = Vec::new();
    if p.ell_a() <= l_max {
        out.push(StratumDescriptor {
            kind: Kind::A,
            ell: p.ell_a(),
            params: *p,
        });
    }
    let lo = first_int_above(2 * p.d2 - p.d1, 3).min(p.d2.div_euclid(2));
    let hi = l_max.doubled().div_euclid(2);
    for l in lo..=hi {
        let ell = HalfInt::from_int(l);
        for kind in &Kind::ALL[1..] {
            if kind.contains(p, ell) {
                out.push(StratumDescriptor {
                    kind: *kind,
                    ell,
                    params: *p,
                });
            }
        }
    }
    out.sort_by_key(|s| (s.ell, s.kind));
    Ok(out)
}

/// One row of the rendered table: a critical set or an empty type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrataRow {
    Stratum(StratumDescriptor),
    Empty(Kind),
}

/// The enumeration followed by one "none in range" row per empty type.
pub fn strata_table(p: &ModuliParams, l_max: HalfInt) -> Result<Vec<StrataRow>, StrataError> {
    let found = enumerate_critical(p, l_max)?;
    let mut rows: Vec<StrataRow> = found.iter().copied().map(StrataRow::Stratum).collect();
    for kind in Kind::ALL {
        if !found.iter().any(|s| s.kind == kind) {
            rows.push(StrataRow::Empty(kind));
        }
    }
    Ok(rows)
}

fn jac_power(g: i64, k: u32) -> Polynomial {
    jacobian_poly(g).pow(k)
}

/// The rational expression of a critical set of type B or C.
pub fn critical_set_expr(s: &StratumDescriptor) -> Result<Option<RationalExpr>, StrataError> {
    let p = &s.params;
    let g = p.g;
    let expr = match s.kind {
        Kind::A => return Ok(None),
        Kind::B1 | Kind::B2 | Kind::B3 => RationalExpr::over_one_minus_t2(jac_power(g, 3), 3),
        Kind::C1 | Kind::C2 | Kind::C3 => {
            let l = s.int_ell();
            let m = match s.kind {
                Kind::C1 => p.d2 - l - p.d1 + 2 * g - 2,
                Kind::C2 => l - p.d1 + 2 * g - 2,
                _ => p.d1 - l + 2 * g - 2,
            };
            let m = s.guard("symmetric power", m)?;
            RationalExpr::over_one_minus_t2(jac_power(g, 2).mul(&sym_poly(m, g)), 2)
        }
    };
    Ok(Some(expr))
}

/// Equivariant series of the critical set.
pub fn critical_set_poincare(
    s: &StratumDescriptor,
    order: usize,
) -> Result<TruncatedSeries, StrataError> {
    if !s.kind.contains(&s.params, s.ell) {
        return Err(StrataError::OutOfRange {
            kind: s.kind,
            ell: s.ell,
        });
    }
    match critical_set_expr(s)? {
        Some(e) => Ok(e.expand(order)),
        None => {
            let g = s.params.g;
            let semistable = ab_semistable_rank2_reduced(s.params.d2, g, order);
            let v = &jacobian_poly(g).to_series(order) * &semistable;
            Ok(v.div_one_minus(2)
                .and_then(|v| v.div_one_minus(2))
                .expect("positive exponent"))
        }
    }
}

/// A labeled complex dimension of a piece of the negative normal space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeDim {
    pub label: &'static str,
    pub value: i64,
}

/// Constant dimensions of the negative normal data where they are known.
pub fn negative_dim(s: &StratumDescriptor) -> Result<Vec<NegativeDim>, StrataError> {
    if s.kind == Kind::A {
        return Err(StrataError::NotSpecified { kind: Kind::A });
    }
    let p = &s.params;
    let l = s.int_ell();
    let mut out = Vec::new();
    match s.kind {
        Kind::B1 => out.push(NegativeDim {
            label: "fiber over nonzero gamma_S",
            value: 2 * p.g - 2 + l - p.d1,
        }),
        Kind::C2 => out.push(NegativeDim {
            label: "constant fiber",
            value: 2 * p.g - 2 + l - p.d2,
        }),
        _ => {}
    }
    // Riemann-Roch for the negative-degree bundle S*Q.
    if 2 * l > p.d2 {
        out.push(NegativeDim {
            label: "h01(S*Q)",
            value: p.g - 1 + 2 * l - p.d2,
        });
    }
    Ok(out)
}

/// The displayed pairs of negative-normal subspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairKind {
    /// `(eta^-, eta'')` on C1.
    C1Full,
    /// `(eta', eta'')` on C1.
    C1Prime,
    /// `(nu^-, nu'')` on B1.
    B1Full,
    /// `(nu', omega)` on B1.
    B1Omega,
    /// `(omega, nu'')` on B1.
    B1OmegaFull,
    /// `(nu', nu'')` on B1 when `l > d2 - d1 + 2g - 2`.
    B1Large,
    /// `(zeta^-, zeta')` on C2.
    C2,
    /// `(zeta^-, zeta'')` on C3.
    C3Full,
    /// `(zeta', zeta'')` on C3.
    C3Prime,
    /// `(zeta^-, zeta')` on C3 when `l > d2 - d1 + 2g - 2`.
    C3Bundle,
    /// `(nu^-, nu'')` on B2.
    B2Full,
    /// `(nu', nu'')` on B2.
    B2Prime,
    /// `(nu^-, nu')` on B2 when `d2 - d1 + 2g - 2 < d1`.
    B2Large,
    /// `(nu^-, nu'')` on B3.
    B3Full,
    /// `(omega, nu'')` on B3.
    B3OmegaFull,
    /// `(nu^-, nu')` on B3 when `l > d1 + 2g - 2`.
    B3Large,
}

impl PairKind {
    pub const ALL: [PairKind; 16] = [
        PairKind::C1Full,
        PairKind::C1Prime,
        PairKind::B1Full,
        PairKind::B1Omega,
        PairKind::B1OmegaFull,
        PairKind::B1Large,
        PairKind::C2,
        PairKind::C3Full,
        PairKind::C3Prime,
        PairKind::C3Bundle,
        PairKind::B2Full,
        PairKind::B2Prime,
        PairKind::B2Large,
        PairKind::B3Full,
        PairKind::B3OmegaFull,
        PairKind::B3Large,
    ];

    pub fn stratum(self) -> Kind {
        use PairKind::*;
        match self {
            C1Full | C1Prime => Kind::C1,
            B1Full | B1Omega | B1OmegaFull | B1Large => Kind::B1,
            C2 => Kind::C2,
            C3Full | C3Prime | C3Bundle => Kind::C3,
            B2Full | B2Prime | B2Large => Kind::B2,
            B3Full | B3OmegaFull | B3Large => Kind::B3,
        }
    }

    pub fn parse(name: &str) -> Option<PairKind> {
        PairKind::ALL
            .into_iter()
            .find(|k| format!("{k:?}").eq_ignore_ascii_case(name))
    }
}

/// Series of a displayed negative-normal pair: `t^shift` times Jacobian and
/// symmetric-product factors over one `(1 - t^2)` per circle factor.
pub fn negative_pair_cohomology(
    s: &StratumDescriptor,
    pair: PairKind,
    order: usize,
) -> Result<TruncatedSeries, StrataError> {
    if pair.stratum() != s.kind {
        return Err(StrataError::PairMismatch {
            pair,
            expected: pair.stratum(),
            got: s.kind,
        });
    }
    let p = &s.params;
    let (g, d1, d2) = (p.g, p.d1, p.d2);
    let l = s.int_ell();
    let top = p.top_c1();
    let b_level = 2 * l - d2 + g - 1;
    let b2_level = 2 * d1 - d2 + g - 1;
    let c2_level = l - d1 + 2 * g - 2;
    let c1_level = d2 - 2 * l + g - 1;
    let c3_level = d1 - l + 2 * g - 2;
    use PairKind::*;
    // (shift / 2, Jacobian power, symmetric exponents, circle factors)
    let (half_shift, jac, syms, circles): (i64, u32, Vec<(&'static str, i64)>, usize) = match pair {
        C1Full => (c1_level, 2, vec![("l-d1+2g-2", c2_level)], 2),
        C1Prime => (
            c1_level,
            1,
            vec![("d2-d1+2g-2-l", top - l), ("d1-l+2g-2", c3_level)],
            1,
        ),
        B1Full | B3Full | B3Large => (b_level, 3, vec![], 3),
        B1Omega | B1Large | C2 => (c2_level, 2, vec![("l-d1+2g-2", c2_level)], 2),
        B1OmegaFull | B3OmegaFull => (b_level, 2, vec![("d2-d1+2g-2-l", top - l)], 2),
        C3Full => (b_level, 2, vec![("d1-l+2g-2", c3_level)], 2),
        C3Prime => (
            b_level,
            1,
            vec![("d2-d1+2g-2-l", top - l), ("d1-l+2g-2", c3_level)],
            1,
        ),
        C3Bundle => (2 * l - d2 + 2 * g - 2, 2, vec![("d1-l+2g-2", c3_level)], 2),
        B2Full | B2Large => (b2_level, 3, vec![], 3),
        B2Prime => (
            b2_level,
            2,
            vec![("d2-2d1+2g-2", d2 - 2 * d1 + 2 * g - 2)],
            1,
        ),
    };
    let shift = s.guard("degree shift", 2 * half_shift)?;
    let mut num = jac_power(g, jac);
    for (what, m) in syms {
        num = num.mul(&sym_poly(s.guard(what, m)?, g));
    }
    let expr = RationalExpr::over_one_minus_t2(num.shift(shift as usize), circles);
    Ok(expr.expand(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hb_params::make_params;

    fn kinds_at(list: &[StratumDescriptor]) -> Vec<(Kind, i64)> {
        list.iter().map(|s| (s.kind, s.ell.doubled())).collect()
    }

    #[test]
    fn enumeration_at_the_maximal_point() {
        let p = make_params(2, 2, 1).unwrap();
        let got = enumerate_critical(&p, HalfInt::from_int(4)).unwrap();
        use Kind::*;
        assert_eq!(
            kinds_at(&got),
            vec![
                (A, 1),
                (B1, 2),
                (C2, 2),
                (B2, 4),
                (B3, 6),
                (C3, 6),
                (B3, 8),
                (C3, 8)
            ]
        );
        let rows = strata_table(&p, HalfInt::from_int(4)).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[8], StrataRow::Empty(C1));
    }

    #[test]
    fn enumeration_at_the_origin() {
        let p = make_params(2, 0, 0).unwrap();
        let got = enumerate_critical(&p, HalfInt::from_int(2)).unwrap();
        use Kind::*;
        assert_eq!(
            kinds_at(&got),
            vec![(A, 0), (B3, 2), (C1, 2), (C3, 2), (B3, 4), (C1, 4), (C3, 4)]
        );
        let low = enumerate_critical(&p, HalfInt::from_int(0)).unwrap();
        assert_eq!(kinds_at(&low), vec![(A, 0)]);
    }

    #[test]
    fn table_values() {
        let p = make_params(2, 2, 1).unwrap();
        let b1 = StratumDescriptor::new(Kind::B1, HalfInt::from_int(1), p).unwrap();
        let want = RationalExpr::over_one_minus_t2(Polynomial::binomial(12), 3).expand(20);
        assert_eq!(critical_set_poincare(&b1, 20).unwrap(), want);
        let c3 = StratumDescriptor::new(Kind::C3, HalfInt::from_int(3), p).unwrap();
        let want = RationalExpr::over_one_minus_t2(Polynomial::binomial(8).mul(&sym_poly(1, 2)), 2);
        assert_eq!(critical_set_poincare(&c3, 20).unwrap(), want.expand(20));
        let q = make_params(2, 0, 0).unwrap();
        let c1 = StratumDescriptor::new(Kind::C1, HalfInt::from_int(1), q).unwrap();
        let want = RationalExpr::over_one_minus_t2(Polynomial::binomial(8).mul(&sym_poly(1, 2)), 2);
        assert_eq!(critical_set_poincare(&c1, 20).unwrap(), want.expand(20));
        assert!(StratumDescriptor::new(Kind::C1, HalfInt::from_int(1), p).is_err());
    }

    #[test]
    fn dimension_values() {
        let p = make_params(2, 2, 1).unwrap();
        let b1 = StratumDescriptor::new(Kind::B1, HalfInt::from_int(1), p).unwrap();
        assert_eq!(negative_dim(&b1).unwrap()[0].value, 1);
        let c2 = StratumDescriptor::new(Kind::C2, HalfInt::from_int(1), p).unwrap();
        assert_eq!(negative_dim(&c2).unwrap()[0].value, 2);
        let q = make_params(3, 3, 0).unwrap();
        let c2 = StratumDescriptor::new(Kind::C2, HalfInt::from_int(2), q).unwrap();
        assert_eq!(negative_dim(&c2).unwrap()[0].value, 6);
        let a = StratumDescriptor::new(Kind::A, HalfInt::half(1), p).unwrap();
        assert_eq!(
            negative_dim(&a),
            Err(StrataError::NotSpecified { kind: Kind::A })
        );
    }

    #[test]
    fn pair_values() {
        let q = make_params(2, 0, 0).unwrap();
        let c1 = StratumDescriptor::new(Kind::C1, HalfInt::from_int(1), q).unwrap();
        assert!(matches!(
            negative_pair_cohomology(&c1, PairKind::C1Prime, 20),
            Err(StrataError::RangeViolation { value: -2, .. })
        ));
        let p = make_params(2, 2, 1).unwrap();
        let b1 = StratumDescriptor::new(Kind::B1, HalfInt::from_int(1), p).unwrap();
        let want = RationalExpr::over_one_minus_t2(
            Polynomial::binomial(8).mul(&sym_poly(1, 2)).shift(2),
            2,
        )
        .expand(20);
        assert_eq!(
            negative_pair_cohomology(&b1, PairKind::B1Omega, 20).unwrap(),
            want
        );
        let c2 = StratumDescriptor::new(Kind::C2, HalfInt::from_int(1), p).unwrap();
        assert_eq!(
            negative_pair_cohomology(&c2, PairKind::C2, 20).unwrap(),
            want
        );
        assert!(matches!(
            negative_pair_cohomology(&c2, PairKind::B1Omega, 20),
            Err(StrataError::PairMismatch { .. })
        ));
    }
}
