//! Non-fixed determinant: closed form, consolidated stratum sum, and the
//! raw per-stratum contributions it was consolidated from.

use hb_bradlow::BradlowProvider;
use hb_ingredients::{
    ab_semistable_rank2_reduced, bg_u21, jacobian_poincare, jacobian_poly, sym_poly,
};
use hb_params::{first_int_above, last_int_at_most, last_int_below, ModuliParams};
use hb_series::{Polynomial, TruncatedSeries};

use crate::result::{frac, part, resolve, Builder, Group, Unknown};
use crate::{check_valid, AssembleError, AssemblyResult};

/// `2(g - 1 + 2l - d2)`, the shift shared by every level above `d2/2`.
pub fn level_shift(p: &ModuliParams, l: i64) -> i64 {
    2 * (p.g - 1 + 2 * l - p.d2)
}

/// `2(2g - 2) + 2l - 2 d1`, the shift of the levels below `d2/2`.
pub(crate) fn low_shift(p: &ModuliParams, l: i64) -> i64 {
    4 * p.g - 4 + 2 * l - 2 * p.d1
}

pub(crate) fn jac_pow(g: i64, k: u32) -> Polynomial {
    jacobian_poly(g).pow(k)
}

/// Integer levels of the closed-form sum, `(d1 + d2)/3 < l <= D`.
pub fn closed_sum_range(p: &ModuliParams) -> std::ops::RangeInclusive<i64> {
    first_int_above(p.d1 + p.d2, 3)..=p.top_c1()
}

/// Levels `(2 d2 - d1)/3 < l < d2/2`, strictly, as consolidated.
pub(crate) fn low_range_strict(p: &ModuliParams) -> std::ops::RangeInclusive<i64> {
    first_int_above(2 * p.d2 - p.d1, 3)..=last_int_below(p.d2, 2)
}

/// Levels `(2 d2 - d1)/3 < l <= d2/2`, as listed per stratum.
pub(crate) fn low_range(p: &ModuliParams) -> std::ops::RangeInclusive<i64> {
    first_int_above(2 * p.d2 - p.d1, 3)..=last_int_at_most(p.d2, 2)
}

/// Levels `d2/2 < l <= (d1 + d2)/3`.
pub(crate) fn flip_range(p: &ModuliParams) -> std::ops::RangeInclusive<i64> {
    first_int_above(p.d2, 2)..=last_int_at_most(p.d1 + p.d2, 3)
}

/// Levels `l > d2/2` whose shift is within the order.
pub(crate) fn upper_levels(p: &ModuliParams, order: usize) -> impl Iterator<Item = i64> + '_ {
    let lo = first_int_above(p.d2, 2);
    (lo..).take_while(move |&l| level_shift(p, l) <= order as i64)
}

/// Which per-stratum formula governs an integer level `l > d2/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBlock {
    /// `d2/2 < l <= (d1 + d2)/3`.
    Flip,
    /// `(d1 + d2)/3 < l <= D`.
    Bundle,
    /// `D < l <= d1`.
    Gap,
    /// `max(d1, D) < l <= d1 + 2g - 2`.
    Top,
    /// `d1 + 2g - 2 < l`.
    Tail,
}

pub fn upper_block(p: &ModuliParams, l: i64) -> UpperBlock {
    if 3 * l <= p.d1 + p.d2 {
        UpperBlock::Flip
    } else if l <= p.top_c1() {
        UpperBlock::Bundle
    } else if l <= p.d1 {
        UpperBlock::Gap
    } else if l <= p.d1 + 2 * p.g - 2 {
        UpperBlock::Top
    } else {
        UpperBlock::Tail
    }
}

fn sym2(p: &ModuliParams, l: i64) -> Polynomial {
    sym_poly(p.top_c1() - l, p.g).mul(&sym_poly(p.d1 - l + 2 * p.g - 2, p.g))
}

pub(crate) fn push_bundle_sum(b: &mut Builder, p: &ModuliParams, denominator: usize, sign: i8) {
    let jac = jacobian_poly(p.g);
    for l in closed_sum_range(p) {
        let a = level_shift(p, l);
        b.rational(
            part(
                format!("bundle level l={l}"),
                "sum over (d1+d2)/3 < l <= d2-d1+2g-2",
                sign,
            )
            .at(l),
            a,
            frac(jac.mul(&sym2(p, l)), a, denominator),
        );
    }
}

/// Closed form: `J C / (1 - t^2)` plus one term per level of
/// `(d1 + d2)/3 < l <= D`. The same shape serves both mod-3 classes; in the
/// coprime class `(1 - t^2)` times it is the moduli series.
pub fn u21_closed_form(
    p: &ModuliParams,
    provider: &dyn BradlowProvider,
    order: usize,
) -> Result<AssemblyResult, AssembleError> {
    check_valid(p)?;
    let mut b = Builder::new(order);
    b.rational(
        part("bradlow pairs", "closed form, equivariant pairs term", 1)
            .times(Unknown::PairsEquivariant),
        0,
        frac(jacobian_poly(p.g), 0, 1),
    );
    push_bundle_sum(&mut b, p, 1, 1);
    let mut r = b.finish(Group::U21, *p, "closed-form");
    if p.is_coprime() {
        r.notes
            .push("coprime class: the moduli series is (1 - t^2) times this series".into());
    }
    Ok(resolve(r, provider))
}

fn a_stratum_series(p: &ModuliParams, order: usize) -> TruncatedSeries {
    let ab = ab_semistable_rank2_reduced(p.d2, p.g, order);
    (&jacobian_poincare(p.g, order) * &ab)
        .div_one_minus(2)
        .and_then(|s| s.div_one_minus(2))
        .expect("positive exponent")
}

/// `P(BG)`, the A-stratum and the B-type tail: the block that cancels.
fn push_classifying_block(b: &mut Builder, p: &ModuliParams) {
    let n = b.order;
    b.series(
        part("classifying space", "P(BG) of the gauge group", 1),
        bg_u21(p.g, n),
    );
    b.series(
        part("a-stratum", "A row: J P^G(A^ss(E2)) / (1-t^2)^2", -1),
        a_stratum_series(p, n),
    );
    let j3 = jac_pow(p.g, 3);
    for l in upper_levels(p, n) {
        let a = level_shift(p, l);
        b.rational(
            part(
                format!("b-tail l={l}"),
                "B rows: t^a J^3 / (1-t^2)^3 for l > d2/2",
                -1,
            )
            .at(l),
            a,
            frac(j3.clone(), a, 3),
        );
    }
}

/// The consolidated stratum sum, term for term.
pub fn u21_stratum_route(
    p: &ModuliParams,
    provider: &dyn BradlowProvider,
    order: usize,
) -> Result<AssemblyResult, AssembleError> {
    check_valid(p)?;
    let g = p.g;
    let mut b = Builder::new(order);
    push_classifying_block(&mut b, p);
    b.rational(
        part("bradlow minimum", "J P(N_sigma_min) / (1-t^2)", 1).times(Unknown::ModuliMin),
        0,
        frac(jacobian_poly(g), 0, 1),
    );
    let j2 = jac_pow(g, 2);
    for l in flip_range(p) {
        let a = level_shift(p, l);
        b.rational(
            part(
                format!("flip level l={l}"),
                "sum over d2/2 < l <= (d1+d2)/3",
                1,
            )
            .at(l),
            a,
            frac(j2.mul(&sym_poly(p.top_c1() - l, g)), a, 2),
        );
    }
    for l in low_range_strict(p) {
        let a = low_shift(p, l);
        b.rational(
            part(
                format!("low level l={l}"),
                "sum over (2d2-d1)/3 < l < d2/2",
                -1,
            )
            .at(l),
            a,
            frac(j2.mul(&sym_poly(l - p.d1 + 2 * g - 2, g)), a, 2),
        );
    }
    push_bundle_sum(&mut b, p, 1, 1);
    Ok(resolve(b.finish(Group::U21, *p, "stratum-route"), provider))
}

/// The per-stratum contributions before consolidation, subtracted from
/// `P(BG)`. The even-`d2` A-stratum term carries `1/(1 - t^2)^2`, the factor
/// under which it cancels the `l = d2/2` low level.
pub fn u21_items_route(
    p: &ModuliParams,
    provider: &dyn BradlowProvider,
    order: usize,
) -> Result<AssemblyResult, AssembleError> {
    check_valid(p)?;
    let g = p.g;
    let jac = jacobian_poly(g);
    let j2 = jac_pow(g, 2);
    let mut b = Builder::new(order);
    push_classifying_block(&mut b, p);
    b.rational(
        part(
            "a-stratum bradlow",
            "A stratum, J P(N_sigma_min) / (1-t^2)",
            1,
        )
        .times(Unknown::ModuliMin),
        0,
        frac(jac.clone(), 0, 1),
    );
    if p.d2 % 2 == 0 {
        let m = 2 * g - 2 + p.d2 / 2 - p.d1;
        b.rational(
            part("a-stratum even", "A stratum, even d2 correction", 1),
            2 * m,
            frac(j2.mul(&sym_poly(m, g)), 2 * m, 2),
        );
    }
    for l in low_range(p) {
        let a = low_shift(p, l);
        b.rational(
            part(
                format!("c2 level l={l}"),
                "levels (2d2-d1)/3 < l <= d2/2",
                -1,
            )
            .at(l),
            a,
            frac(j2.mul(&sym_poly(l - p.d1 + 2 * g - 2, g)), a, 2),
        );
    }
    // The B-type J^3 part of every upper level already sits in the tail.
    for l in upper_levels(p, order) {
        let a = level_shift(p, l);
        match upper_block(p, l) {
            UpperBlock::Flip => b.rational(
                part(format!("b1 level l={l}"), "levels d2/2 < l <= (d1+d2)/3", 1).at(l),
                a,
                frac(j2.mul(&sym_poly(p.top_c1() - l, g)), a, 2),
            ),
            UpperBlock::Bundle => b.rational(
                part(
                    format!("c1 level l={l}"),
                    "levels (d1+d2)/3 < l <= d2-d1+2g-2",
                    1,
                )
                .at(l),
                a,
                frac(jac.mul(&sym2(p, l)), a, 1),
            ),
            UpperBlock::Top => {
                let s = j2.mul(&sym_poly(p.d1 - l + 2 * g - 2, g));
                b.rational(
                    part(
                        format!("c3 level l={l}"),
                        "levels max(d1, D) < l <= d1+2g-2, first part",
                        -1,
                    )
                    .at(l),
                    a,
                    frac(s.clone(), a, 2),
                );
                b.rational(
                    part(
                        format!("b3 level l={l}"),
                        "levels max(d1, D) < l <= d1+2g-2, second part",
                        1,
                    )
                    .at(l),
                    a,
                    frac(s, a, 2),
                );
            }
            UpperBlock::Gap | UpperBlock::Tail => {}
        }
    }
    Ok(resolve(b.finish(Group::U21, *p, "items-route"), provider))
}

/// `P(BG) - J P^G(A^ss) / (1-t^2)^2 - sum_{l > d2/2} t^a J^3 / (1-t^2)^3`.
pub fn ab_cancellation(g: i64, d2: i64, order: usize) -> TruncatedSeries {
    let p = hb_params::make_params(g, 0, d2).expect("genus at least 2");
    let mut b = Builder::new(order);
    push_classifying_block(&mut b, &p);
    b.finish(Group::U21, p, "ab-cancellation").known
}
