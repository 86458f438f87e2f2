use std::fmt;

use hb_bradlow::{ww_difference, BradlowProvider};
use hb_params::ModuliParams;
use hb_series::{Polynomial, RationalExpr, TruncatedSeries};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Group {
    #[serde(rename = "u21")]
    U21,
    #[serde(rename = "su21")]
    SU21,
    #[serde(rename = "pu21")]
    PU21,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::U21, Group::SU21, Group::PU21];

    pub fn name(self) -> &'static str {
        match self {
            Group::U21 => "u21",
            Group::SU21 => "su21",
            Group::PU21 => "pu21",
        }
    }

    pub fn parse(s: &str) -> Option<Group> {
        Group::ALL.into_iter().find(|g| g.name() == s)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Absolute,
    Relative,
}

/// The two stable-pair series a result may still depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Unknown {
    PairsEquivariant,
    ModuliMin,
}

impl Unknown {
    pub fn name(self) -> &'static str {
        match self {
            Unknown::PairsEquivariant => "pairs_equivariant",
            Unknown::ModuliMin => "moduli_min",
        }
    }
}

/// One labeled summand. `series` is the signed expansion; when `unknown` is
/// set it is the coefficient multiplying that unknown series instead.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionTerm {
    pub label: String,
    pub paper_ref: String,
    pub sign: i8,
    pub ell: Option<i64>,
    /// Power of `t` factored out in front of the term.
    pub shift: i64,
    /// Unsigned closed form, when the term is a single rational expression.
    pub expr: Option<RationalExpr>,
    pub unknown: Option<Unknown>,
    pub series: TruncatedSeries,
}

/// An assembled series `known + a * pairs_equivariant + b * moduli_min`.
/// In absolute mode both coefficients are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyResult {
    pub group: Group,
    pub params: ModuliParams,
    pub order: usize,
    pub route: String,
    pub mode: Mode,
    pub provider: String,
    pub known: TruncatedSeries,
    pub pairs_coefficient: TruncatedSeries,
    pub moduli_coefficient: TruncatedSeries,
    pub terms: Vec<ContributionTerm>,
    pub notes: Vec<String>,
}

impl AssemblyResult {
    /// The concrete series, available in absolute mode only.
    pub fn series(&self) -> Option<&TruncatedSeries> {
        (self.mode == Mode::Absolute).then_some(&self.known)
    }

    pub fn coefficient(&self, u: Unknown) -> &TruncatedSeries {
        match u {
            Unknown::PairsEquivariant => &self.pairs_coefficient,
            Unknown::ModuliMin => &self.moduli_coefficient,
        }
    }

    /// Rewrites `pairs_equivariant = moduli_min + ww_difference`, returning the
    /// known part and the single remaining coefficient on `moduli_min`.
    pub fn eliminated(&self) -> (TruncatedSeries, TruncatedSeries) {
        let ww = ww_difference(&self.params, self.order);
        let known = &self.known + &(&self.pairs_coefficient * &ww);
        let coef = &self.pairs_coefficient + &self.moduli_coefficient;
        (known, coef)
    }

    /// Sum of the term expansions, split by what they multiply.
    pub fn term_sums(&self) -> [TruncatedSeries; 3] {
        let mut out = [0, 1, 2].map(|_| TruncatedSeries::zero(self.order));
        for t in &self.terms {
            let slot = match t.unknown {
                None => 0,
                Some(Unknown::PairsEquivariant) => 1,
                Some(Unknown::ModuliMin) => 2,
            };
            out[slot] = &out[slot] + &t.series;
        }
        out
    }

    /// Multiplies the whole result by a polynomial, term by term.
    pub(crate) fn scaled(mut self, factor: &Polynomial, label: &str) -> Self {
        let f = factor.to_series(self.order);
        self.known = &self.known * &f;
        self.pairs_coefficient = &self.pairs_coefficient * &f;
        self.moduli_coefficient = &self.moduli_coefficient * &f;
        for t in &mut self.terms {
            t.series = &t.series * &f;
            t.expr = None;
            t.paper_ref = format!("{} ({label})", t.paper_ref);
        }
        self
    }
}

pub(crate) struct Builder {
    pub order: usize,
    pub terms: Vec<ContributionTerm>,
}

/// `t^shift * num / (1 - t^2)^k`.
pub(crate) fn frac(num: Polynomial, shift: i64, k: usize) -> RationalExpr {
    assert!(shift >= 0, "negative shift {shift}");
    RationalExpr::over_one_minus_t2(num.shift(shift as usize), k)
}

pub(crate) struct Part<'a> {
    pub label: String,
    pub paper_ref: &'a str,
    pub sign: i8,
    pub ell: Option<i64>,
    pub unknown: Option<Unknown>,
}

pub(crate) fn part(label: impl Into<String>, paper_ref: &str, sign: i8) -> Part<'_> {
    Part {
        label: label.into(),
        paper_ref,
        sign,
        ell: None,
        unknown: None,
    }
}

impl Part<'_> {
    pub fn at(mut self, ell: i64) -> Self {
        self.ell = Some(ell);
        self
    }

    pub fn times(mut self, u: Unknown) -> Self {
        self.unknown = Some(u);
        self
    }
}

impl Builder {
    pub fn new(order: usize) -> Self {
        Builder {
            order,
            terms: Vec::new(),
        }
    }

    pub fn rational(&mut self, s: Part<'_>, shift: i64, expr: RationalExpr) {
        let value = expr.expand(self.order);
        self.push(s, shift, Some(expr), value);
    }

    pub fn series(&mut self, s: Part<'_>, value: TruncatedSeries) {
        self.push(s, 0, None, value);
    }

    fn push(
        &mut self,
        s: Part<'_>,
        shift: i64,
        expr: Option<RationalExpr>,
        value: TruncatedSeries,
    ) {
        let series = if s.sign < 0 { -&value } else { value };
        self.terms.push(ContributionTerm {
            label: s.label,
            paper_ref: s.paper_ref.to_string(),
            sign: s.sign,
            ell: s.ell,
            shift,
            expr,
            unknown: s.unknown,
            series,
        });
    }

    pub fn finish(self, group: Group, params: ModuliParams, route: &str) -> AssemblyResult {
        let mut r = AssemblyResult {
            group,
            params,
            order: self.order,
            route: route.to_string(),
            mode: Mode::Relative,
            provider: "relative".into(),
            known: TruncatedSeries::zero(self.order),
            pairs_coefficient: TruncatedSeries::zero(self.order),
            moduli_coefficient: TruncatedSeries::zero(self.order),
            terms: self.terms,
            notes: Vec::new(),
        };
        let [k, a, b] = r.term_sums();
        r.known = k;
        r.pairs_coefficient = a;
        r.moduli_coefficient = b;
        r
    }
}

/// Substitutes provider values for the unknowns. When the provider knows
/// only one of the two series the other comes from the difference formula;
/// when it knows neither, the result stays relative with a note.
pub(crate) fn resolve(mut r: AssemblyResult, provider: &dyn BradlowProvider) -> AssemblyResult {
    let p = r.params;
    let n = r.order;
    r.provider = provider.name();
    if r.pairs_coefficient.is_zero() && r.moduli_coefficient.is_zero() {
        r.mode = Mode::Absolute;
        return r;
    }
    let ww = || ww_difference(&p, n);
    let pairs = provider.pairs_equivariant(p.e, p.sigma, p.g, n);
    let moduli = provider.moduli_min(p.e, p.g, n);
    let (pairs, moduli) = match (pairs, moduli) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) => {
            let b = &a - &ww();
            (a, b)
        }
        (None, Some(b)) => (&b + &ww(), b),
        (None, None) => {
            r.notes.push(format!(
                "provider {} has no data for e = {}, sigma = {}; result left relative",
                provider.name(),
                p.e,
                p.sigma
            ));
            return r;
        }
    };
    for (u, value) in [
        (Unknown::PairsEquivariant, pairs),
        (Unknown::ModuliMin, moduli),
    ] {
        let coef = r.coefficient(u).clone();
        if coef.is_zero() {
            continue;
        }
        let series = &coef * &value;
        r.known = &r.known + &series;
        r.terms.push(ContributionTerm {
            label: format!("{} from provider", u.name()),
            paper_ref: format!("value supplied by {}", provider.name()),
            sign: 1,
            ell: None,
            shift: 0,
            expr: None,
            unknown: None,
            series,
        });
    }
    r.pairs_coefficient = TruncatedSeries::zero(n);
    r.moduli_coefficient = TruncatedSeries::zero(n);
    r.mode = Mode::Absolute;
    r
}
