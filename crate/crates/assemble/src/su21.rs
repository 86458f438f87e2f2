//! Fixed determinant and its triple-torsion invariant part.

use hb_bradlow::BradlowProvider;
use hb_ingredients::{
    ab_semistable_rank2_reduced, bg_su21, gothen_cover_poly, jacobian_poly, sym_poly, v_dim,
    CoverParams,
};
use hb_params::{s_tau, ModuliParams};
use hb_series::{Polynomial, TruncatedSeries};
use serde::Serialize;
use std::collections::BTreeMap;

use crate::result::{frac, part, resolve, Builder, Group, Unknown};
use crate::u21::{
    closed_sum_range, jac_pow, level_shift, low_range, low_shift, upper_block, upper_levels,
    UpperBlock,
};
use crate::{check_valid, AssembleError, AssemblyResult};

/// How to read the fixed-determinant formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuVariant {
    /// Every factor exactly as displayed.
    AsPrinted,
    /// The C2-type level and the even A-stratum term over `(1 - t^2)`, and a
    /// bare Bradlow term in the closed form. Diagnostic only.
    Reconciled,
}

impl SuVariant {
    pub const ALL: [SuVariant; 2] = [SuVariant::AsPrinted, SuVariant::Reconciled];

    pub fn name(self) -> &'static str {
        match self {
            SuVariant::AsPrinted => "as-printed",
            SuVariant::Reconciled => "reconciled",
        }
    }
}

fn cover(p: &ModuliParams, l: i64) -> CoverParams {
    CoverParams {
        m1: p.top_c1() - l,
        m2: p.d1 - l + 2 * p.g - 2,
        g: p.g,
    }
}

fn closed(
    p: &ModuliParams,
    provider: &dyn BradlowProvider,
    order: usize,
    variant: SuVariant,
    group: Group,
) -> Result<AssemblyResult, AssembleError> {
    check_valid(p)?;
    let mut b = Builder::new(order);
    let bare = p.is_coprime() || variant == SuVariant::Reconciled;
    if bare {
        b.rational(
            part(
                "bradlow pairs",
                "fixed-determinant closed form, bare Bradlow term",
                1,
            )
            .times(Unknown::PairsEquivariant),
            0,
            frac(Polynomial::one(), 0, 0),
        );
    } else {
        b.rational(
            part(
                "bradlow pairs",
                "fixed-determinant closed form, equivariant pairs term",
                1,
            )
            .times(Unknown::PairsEquivariant),
            0,
            frac(jacobian_poly(p.g), 0, 1),
        );
    }
    for l in closed_sum_range(p) {
        let a = level_shift(p, l);
        let c = cover(p, l);
        let (label, text, num) = match group {
            Group::PU21 => (
                format!("invariant cover level l={l}"),
                "t^a P(S^m1 X) P(S^m2 X), invariant part of the triple cover",
                sym_poly(c.m1, p.g).mul(&sym_poly(c.m2, p.g)),
            ),
            _ => (
                format!("cover level l={l}"),
                "t^a P(S~(m1, m2)) over (d1+d2)/3 < l <= d2-d1+2g-2",
                gothen_cover_poly(c),
            ),
        };
        b.rational(part(label, text, 1).at(l), a, frac(num, a, 0));
    }
    let route = format!("closed-form/{}", variant.name());
    Ok(resolve(b.finish(group, *p, &route), provider))
}

/// Fixed-determinant closed form with the triple covers `S~(m1, m2)`.
pub fn su21_closed_form(
    p: &ModuliParams,
    provider: &dyn BradlowProvider,
    order: usize,
    variant: SuVariant,
) -> Result<AssemblyResult, AssembleError> {
    closed(p, provider, order, variant, Group::SU21)
}

/// The invariant part: each `P(S~(m1, m2))` replaced by
/// `P(S^m1 X) P(S^m2 X)`; the Bradlow part is invariant as a whole.
pub fn pu21_poincare(
    p: &ModuliParams,
    provider: &dyn BradlowProvider,
    order: usize,
    variant: SuVariant,
) -> Result<AssemblyResult, AssembleError> {
    closed(p, provider, order, variant, Group::PU21)
}

/// `P(BG_0)` minus every fixed-determinant stratum contribution.
pub fn su21_stratum_route(
    p: &ModuliParams,
    provider: &dyn BradlowProvider,
    order: usize,
    variant: SuVariant,
) -> Result<AssemblyResult, AssembleError> {
    check_valid(p)?;
    let g = p.g;
    let jac = jacobian_poly(g);
    let (low_den, even_den) = match variant {
        SuVariant::AsPrinted => (2, 0),
        SuVariant::Reconciled => (1, 1),
    };
    let mut b = Builder::new(order);
    push_su_classifying_block(&mut b, p);
    b.rational(
        part(
            "a-stratum bradlow",
            "fixed-det A stratum, bare P(N_sigma_min)",
            1,
        )
        .times(Unknown::ModuliMin),
        0,
        frac(Polynomial::one(), 0, 0),
    );
    if p.d2 % 2 == 0 {
        let m = 2 * g - 2 + p.d2 / 2 - p.d1;
        b.rational(
            part(
                "a-stratum even",
                "fixed-det A stratum, even d2 correction",
                1,
            ),
            2 * m,
            frac(jac.mul(&sym_poly(m, g)), 2 * m, even_den),
        );
    }
    for l in low_range(p) {
        let a = low_shift(p, l);
        b.rational(
            part(
                format!("c2 level l={l}"),
                "fixed-det levels (2d2-d1)/3 < l <= d2/2",
                -1,
            )
            .at(l),
            a,
            frac(jac.mul(&sym_poly(l - p.d1 + 2 * g - 2, g)), a, low_den),
        );
    }
    for l in upper_levels(p, order) {
        let a = level_shift(p, l);
        match upper_block(p, l) {
            UpperBlock::Flip => b.rational(
                part(
                    format!("b1 level l={l}"),
                    "fixed-det levels d2/2 < l <= (d1+d2)/3",
                    1,
                )
                .at(l),
                a,
                frac(jac.mul(&sym_poly(p.top_c1() - l, g)), a, 1),
            ),
            UpperBlock::Bundle => b.rational(
                part(
                    format!("c1 level l={l}"),
                    "fixed-det levels (d1+d2)/3 < l <= D, triple cover",
                    1,
                )
                .at(l),
                a,
                frac(gothen_cover_poly(cover(p, l)), a, 0),
            ),
            UpperBlock::Top => {
                let s = jac.mul(&sym_poly(p.d1 - l + 2 * g - 2, g));
                b.rational(
                    part(
                        format!("c3 level l={l}"),
                        "fixed-det levels max(d1, D) < l <= d1+2g-2, first part",
                        -1,
                    )
                    .at(l),
                    a,
                    frac(s.clone(), a, 1),
                );
                b.rational(
                    part(
                        format!("b3 level l={l}"),
                        "fixed-det levels max(d1, D) < l <= d1+2g-2, second part",
                        1,
                    )
                    .at(l),
                    a,
                    frac(s, a, 1),
                );
            }
            UpperBlock::Gap | UpperBlock::Tail => {}
        }
    }
    let route = format!("stratum-route/{}", variant.name());
    Ok(resolve(b.finish(Group::SU21, *p, &route), provider))
}

fn push_su_classifying_block(b: &mut Builder, p: &ModuliParams) {
    let n = b.order;
    b.series(
        part(
            "classifying space",
            "P(BG_0) = P(BG) of the rank-2 factor",
            1,
        ),
        bg_su21(p.g, n),
    );
    let ab = ab_semistable_rank2_reduced(p.d2, p.g, n)
        .div_one_minus(2)
        .expect("positive exponent");
    b.series(
        part(
            "a-stratum",
            "fixed-det A stratum, P^G(A^ss(E2)) / (1-t^2)",
            -1,
        ),
        ab,
    );
    let j2 = jac_pow(p.g, 2);
    for l in upper_levels(p, n) {
        let a = level_shift(p, l);
        b.rational(
            part(
                format!("b-tail l={l}"),
                "fixed-det B part t^a J^2 / (1-t^2)^2 for l > d2/2",
                -1,
            )
            .at(l),
            a,
            frac(j2.clone(), a, 2),
        );
    }
}

/// Fixed-determinant analogue of the cancelling block.
pub fn su_ab_cancellation(g: i64, d2: i64, order: usize) -> TruncatedSeries {
    let p = hb_params::make_params(g, 0, d2).expect("genus at least 2");
    let mut b = Builder::new(order);
    push_su_classifying_block(&mut b, &p);
    b.finish(Group::SU21, p, "su-ab-cancellation").known
}

/// One anomalous degree and its dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnomalousDegree {
    pub degree: i64,
    pub ell: i64,
    pub m1: i64,
    pub m2: i64,
    pub dimension: String,
}

/// Degrees where the Torelli group acts nontrivially, each with the
/// dimension `v_dim(m1, m2)` of the anomalous summand.
pub fn torelli_anomalous_part(p: &ModuliParams) -> Result<Vec<AnomalousDegree>, AssembleError> {
    check_valid(p)?;
    let tau = p.tau_integer().ok_or(AssembleError::OddTau(p.tau))?;
    let members = s_tau(p.g, tau).map_err(AssembleError::Params)?;
    Ok(members
        .into_iter()
        .map(|m| AnomalousDegree {
            degree: m.degree,
            ell: m.ell,
            m1: m.m1,
            m2: m.m2,
            dimension: v_dim(CoverParams {
                m1: m.m1,
                m2: m.m2,
                g: p.g,
            })
            .to_string(),
        })
        .collect())
}

/// The same data as a degree-to-dimension map.
pub fn torelli_anomalous_map(p: &ModuliParams) -> Result<BTreeMap<i64, String>, AssembleError> {
    Ok(torelli_anomalous_part(p)?
        .into_iter()
        .map(|a| (a.degree, a.dimension))
        .collect())
}
