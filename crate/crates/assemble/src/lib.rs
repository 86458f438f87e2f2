//! Assembled equivariant Poincaré series for U(2,1), SU(2,1) and PU(2,1)
//! Higgs bundles: the closed forms, the stratum-by-stratum sums they come
//! from, the triple-torsion invariant part, and route comparison.
//!
//! Every result is `known + a * pairs_equivariant + b * moduli_min`, where the
//! two unknowns are the stable-pair series of [`hb_bradlow`]. A provider
//! that knows them turns the result absolute; otherwise it stays relative.

mod result;
mod su21;
mod u21;
pub mod verify;

pub use result::{AssemblyResult, ContributionTerm, Group, Mode, Unknown};
pub use su21::{
    pu21_poincare, su21_closed_form, su21_stratum_route, su_ab_cancellation, torelli_anomalous_map,
    torelli_anomalous_part, AnomalousDegree, SuVariant,
};
pub use u21::{
    ab_cancellation, closed_sum_range, level_shift, u21_closed_form, u21_items_route,
    u21_stratum_route, upper_block, UpperBlock,
};

use hb_bradlow::{BradlowProvider, Symbolic};
use hb_ingredients::{v_dim, CoverParams};
use hb_params::{ModuliParams, ParamError, Rational};
use hb_series::{Polynomial, TruncatedSeries, WindowReport};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssembleError {
    #[error("tau = {tau} lies outside 0 <= tau <= 2g - 2 = {bound} for {params}")]
    InvalidParams {
        params: ModuliParams,
        tau: Rational,
        bound: i64,
    },
    #[error("moduli series defined only in the coprime case d1 + d2 = 1, 2 mod 3; got {0}")]
    NotCoprime(ModuliParams),
    #[error("Toledo invariant {0} is not an even integer")]
    OddTau(Rational),
    #[error(transparent)]
    Params(#[from] ParamError),
}

pub(crate) fn check_valid(p: &ModuliParams) -> Result<(), AssembleError> {
    if p.valid {
        Ok(())
    } else {
        Err(AssembleError::InvalidParams {
            params: *p,
            tau: p.tau,
            bound: 2 * p.g - 2,
        })
    }
}

/// Default truncation order `8g + 24`.
pub fn default_order(g: i64) -> usize {
    (8 * g.max(0) + 24) as usize
}

/// The headline closed form for a group.
pub fn compute(
    group: Group,
    p: &ModuliParams,
    provider: &dyn BradlowProvider,
    order: usize,
) -> Result<AssemblyResult, AssembleError> {
    match group {
        Group::U21 => u21_closed_form(p, provider, order),
        Group::SU21 => su21_closed_form(p, provider, order, SuVariant::AsPrinted),
        Group::PU21 => pu21_poincare(p, provider, order, SuVariant::AsPrinted),
    }
}

/// `P(M)` in the coprime case, with a heuristic polynomiality report and a
/// nonnegativity check when the result is concrete.
#[derive(Debug, Clone)]
pub struct ModuliReport {
    pub result: AssemblyResult,
    pub window: Option<WindowReport>,
    pub nonnegative: Option<bool>,
}

pub fn moduli_poincare(
    group: Group,
    p: &ModuliParams,
    provider: &dyn BradlowProvider,
    order: usize,
) -> Result<ModuliReport, AssembleError> {
    check_valid(p)?;
    if !p.is_coprime() {
        return Err(AssembleError::NotCoprime(*p));
    }
    let mut result = match group {
        Group::U21 => u21_closed_form(p, provider, order)?
            .scaled(&Polynomial::from_i64s(&[1, 0, -1]), "times 1 - t^2"),
        _ => compute(group, p, provider, order)?,
    };
    result.route = "moduli".into();
    let concrete = result.mode == Mode::Absolute;
    let window = concrete
        .then(|| result.known.is_polynomial_window((order / 4).max(1)).ok())
        .flatten();
    let nonnegative = concrete.then(|| result.known.is_nonnegative());
    Ok(ModuliReport {
        result,
        window,
        nonnegative,
    })
}

/// `sum_l t^a v_dim(m1, m2) t^{m1 + m2}` over the closed-form levels: the
/// part of the fixed-determinant series on which the torsion acts.
pub fn anomalous_series(p: &ModuliParams, order: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(order);
    for l in closed_sum_range(p) {
        let c = CoverParams {
            m1: p.top_c1() - l,
            m2: p.d1 - l + 2 * p.g - 2,
            g: p.g,
        };
        let k = level_shift(p, l) + c.m1 + c.m2;
        let v = v_dim(c);
        if k >= 0 && (k as usize) <= order && v != 0.into() {
            out = &out + &TruncatedSeries::monomial(k as usize, v, order);
        }
    }
    out
}

/// A term of either route with its coefficient at the reported degree.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TermAtDegree {
    pub route: String,
    pub label: String,
    pub paper_ref: String,
    pub multiplies: Option<&'static str>,
    pub coefficient: String,
}

/// Outcome of comparing a closed form with its stratum route, both relative
/// and with `pairs_equivariant` eliminated.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RouteReport {
    pub group: Group,
    pub params: ModuliParams,
    pub variant: Option<SuVariant>,
    pub order: usize,
    #[serde(serialize_with = "ser_coeffs")]
    pub residual: TruncatedSeries,
    #[serde(serialize_with = "ser_coeffs")]
    pub residual_moduli_coefficient: TruncatedSeries,
    pub first_degree: Option<usize>,
    pub first_moduli_degree: Option<usize>,
    pub provenance: Vec<TermAtDegree>,
}

impl RouteReport {
    pub fn is_zero(&self) -> bool {
        self.first_degree.is_none() && self.first_moduli_degree.is_none()
    }
}

fn ser_coeffs<S: Serializer>(s: &TruncatedSeries, ser: S) -> Result<S::Ok, S::Error> {
    s.to_strings().serialize(ser)
}

fn terms_at(r: &AssemblyResult, degree: usize, moduli: bool, out: &mut Vec<TermAtDegree>) {
    for t in &r.terms {
        if t.unknown.is_some() != moduli {
            continue;
        }
        let c = t.series.coeff(degree);
        if c != 0.into() {
            out.push(TermAtDegree {
                route: r.route.clone(),
                label: t.label.clone(),
                paper_ref: t.paper_ref.clone(),
                multiplies: t.unknown.map(Unknown::name),
                coefficient: c.to_string(),
            });
        }
    }
}

/// `closed - route` in relative mode. For PU(2,1) the route is the
/// fixed-determinant stratum sum minus [`anomalous_series`].
pub fn verify_route_equivalence(
    group: Group,
    p: &ModuliParams,
    order: usize,
    variant: SuVariant,
) -> Result<RouteReport, AssembleError> {
    let (closed, route) = match group {
        Group::U21 => (
            u21_closed_form(p, &Symbolic, order)?,
            u21_stratum_route(p, &Symbolic, order)?,
        ),
        Group::SU21 => (
            su21_closed_form(p, &Symbolic, order, variant)?,
            su21_stratum_route(p, &Symbolic, order, variant)?,
        ),
        Group::PU21 => {
            let mut route = su21_stratum_route(p, &Symbolic, order, variant)?;
            let anomalous = anomalous_series(p, order);
            route.known = &route.known - &anomalous;
            route.terms.push(ContributionTerm {
                label: "anomalous part".into(),
                paper_ref: "torsion-anomalous summands V(m1, m2) removed".into(),
                sign: -1,
                ell: None,
                shift: 0,
                expr: None,
                unknown: None,
                series: -&anomalous,
            });
            (pu21_poincare(p, &Symbolic, order, variant)?, route)
        }
    };
    let (ck, cc) = closed.eliminated();
    let (rk, rc) = route.eliminated();
    let residual = &ck - &rk;
    let coef = &cc - &rc;
    let first_degree = residual.valuation();
    let first_moduli_degree = coef.valuation();
    let mut provenance = Vec::new();
    if let Some(d) = first_degree {
        terms_at(&closed, d, false, &mut provenance);
        terms_at(&route, d, false, &mut provenance);
    } else if let Some(d) = first_moduli_degree {
        terms_at(&closed, d, true, &mut provenance);
        terms_at(&route, d, true, &mut provenance);
    }
    Ok(RouteReport {
        group,
        params: *p,
        variant: (group != Group::U21).then_some(variant),
        order,
        residual,
        residual_moduli_coefficient: coef,
        first_degree,
        first_moduli_degree,
        provenance,
    })
}

impl Serialize for AssemblyResult {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Unknowns {
            pairs_equivariant: Vec<String>,
            moduli_min: Vec<String>,
        }
        #[derive(serde::Serialize)]
        struct Term<'a> {
            label: &'a str,
            paper_ref: &'a str,
            ell: Option<i64>,
            multiplies: Option<&'static str>,
            coefficients: Vec<String>,
        }
        let p = &self.params;
        let mut s = ser.serialize_struct("AssemblyResult", 13)?;
        s.serialize_field("group", &self.group)?;
        s.serialize_field("g", &p.g)?;
        s.serialize_field("d1", &p.d1)?;
        s.serialize_field("d2", &p.d2)?;
        s.serialize_field("order", &self.order)?;
        s.serialize_field("mode", &self.mode)?;
        s.serialize_field("route", &self.route)?;
        s.serialize_field("provider", &self.provider)?;
        s.serialize_field("coefficients", &self.known.to_strings())?;
        s.serialize_field(
            "unknown_coefficients",
            &Unknowns {
                pairs_equivariant: self.pairs_coefficient.to_strings(),
                moduli_min: self.moduli_coefficient.to_strings(),
            },
        )?;
        let terms: Vec<Term<'_>> = self
            .terms
            .iter()
            .map(|t| Term {
                label: &t.label,
                paper_ref: &t.paper_ref,
                ell: t.ell,
                multiplies: t.unknown.map(Unknown::name),
                coefficients: t.series.to_strings(),
            })
            .collect();
        s.serialize_field("terms", &terms)?;
        s.serialize_field("notes", &self.notes)?;
        s.serialize_field("params", p)?;
        s.end()
    }
}
