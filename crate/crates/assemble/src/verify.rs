//! Named identity suites over parameter grids. Cases run in parallel and are
//! collected in grid order, so reports are deterministic.

use std::fmt;
use std::ops::RangeInclusive;

use hb_bradlow::{
    maximal_first_term, maximal_pairs_equivariant, BradlowProvider, MaximalCase, Symbolic,
};
use hb_ingredients::{gothen_cover_poincare, jacobian_poly, sym_poly, v_dim, CoverParams};
use hb_params::{
    gamma3_trivial, kirwan_su_surjective, make_params, torelli_trivial, ModuliParams, Rational,
};
use hb_series::{RationalExpr, TruncatedSeries};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::{
    ab_cancellation, anomalous_series, default_order, pu21_poincare, su21_closed_form,
    su21_stratum_route, su_ab_cancellation, torelli_anomalous_map, u21_closed_form,
    u21_stratum_route, verify_route_equivalence, AssemblyResult, Group, RouteReport, SuVariant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    AbCancellation,
    RouteU21,
    RouteSu21,
    Gothen,
    Maximal,
    Torelli,
    ShiftInvariance,
    SeriesLaws,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::AbCancellation,
        Suite::RouteU21,
        Suite::RouteSu21,
        Suite::Gothen,
        Suite::Maximal,
        Suite::Torelli,
        Suite::ShiftInvariance,
        Suite::SeriesLaws,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AbCancellation => "ab-cancellation",
            Suite::RouteU21 => "route-u21",
            Suite::RouteSu21 => "route-su21",
            Suite::Gothen => "gothen",
            Suite::Maximal => "maximal",
            Suite::Torelli => "torelli",
            Suite::ShiftInvariance => "shift-invariance",
            Suite::SeriesLaws => "series-laws",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Hard suites decide the exit status; diagnostic ones only report.
    pub fn is_hard(self) -> bool {
        self != Suite::RouteSu21
    }
}

/// Genus range of a verification run, written `g=2..3` or `g=4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub genera: RangeInclusive<i64>,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Grid, String> {
        let body = s
            .strip_prefix("g=")
            .ok_or_else(|| format!("grid `{s}` must start with `g=`"))?;
        let num = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| format!("grid `{s}`: `{x}` is not an integer"))
        };
        let (lo, hi) = match body.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let g = num(body)?;
                (g, g)
            }
        };
        if lo < 2 || hi < lo {
            return Err(format!("grid `{s}` needs 2 <= low <= high"));
        }
        Ok(Grid { genera: lo..=hi })
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid { genera: 2..=3 }
    }
}

/// A failing case: where, at which degree, and the two values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub degree: Option<usize>,
    pub expected: String,
    pub got: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree {
            Some(d) => write!(
                f,
                "{}: degree {d}, expected {}, got {}",
                self.case, self.expected, self.got
            ),
            None => write!(
                f,
                "{}: expected {}, got {}",
                self.case, self.expected, self.got
            ),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub hard: bool,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Per-tuple residuals of diagnostic suites.
    pub diagnostics: Vec<RouteReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Outcome = Result<(), Failure>;

fn compare(case: impl Into<String>, expected: &TruncatedSeries, got: &TruncatedSeries) -> Outcome {
    match expected.first_difference(got).expect("equal orders") {
        None => Ok(()),
        Some(d) => Err(Failure {
            case: case.into(),
            degree: Some(d),
            expected: expected.coeff(d).to_string(),
            got: got.coeff(d).to_string(),
        }),
    }
}

fn check(case: impl Into<String>, ok: bool, expected: &str, got: impl fmt::Display) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure {
            case: case.into(),
            degree: None,
            expected: expected.into(),
            got: got.to_string(),
        })
    }
}

fn collect(suite: Suite, outcomes: Vec<Vec<Outcome>>) -> SuiteReport {
    let flat: Vec<Outcome> = outcomes.into_iter().flatten().collect();
    SuiteReport {
        suite,
        hard: suite.is_hard(),
        cases: flat.len(),
        failures: flat.into_iter().filter_map(Result::err).collect(),
        diagnostics: Vec::new(),
    }
}

/// Valid `(g, d1, d2)` with `d1` in `[0, 2g]` and `0 <= tau <= 2g - 2`.
pub fn valid_grid(grid: &Grid) -> Vec<ModuliParams> {
    let mut out = Vec::new();
    for g in grid.genera.clone() {
        for d1 in 0..=2 * g {
            for d2 in (2 * d1 - 3 * g + 3)..=(2 * d1) {
                let p = make_params(g, d1, d2).expect("genus at least 2");
                if p.valid {
                    out.push(p);
                }
            }
        }
    }
    out
}

pub fn run(suite: Suite, grid: &Grid) -> SuiteReport {
    match suite {
        Suite::AbCancellation => ab_suite(grid),
        Suite::RouteU21 => route_u21_suite(grid),
        Suite::RouteSu21 => route_su21_suite(grid),
        Suite::Gothen => gothen_suite(grid),
        Suite::Maximal => maximal_suite(grid),
        Suite::Torelli => torelli_suite(grid),
        Suite::ShiftInvariance => shift_suite(grid),
        Suite::SeriesLaws => series_laws_suite(1000, 0x5eed),
    }
}

fn ab_suite(grid: &Grid) -> SuiteReport {
    let cases: Vec<(i64, i64)> = grid
        .genera
        .clone()
        .flat_map(|g| (0..=3).map(move |d2| (g, d2)))
        .collect();
    let out = cases
        .par_iter()
        .map(|&(g, d2)| {
            let n = default_order(g);
            let zero = TruncatedSeries::zero(n);
            vec![
                compare(
                    format!("u21 g={g} d2={d2}"),
                    &zero,
                    &ab_cancellation(g, d2, n),
                ),
                compare(
                    format!("su21 g={g} d2={d2}"),
                    &zero,
                    &su_ab_cancellation(g, d2, n),
                ),
            ]
        })
        .collect();
    collect(Suite::AbCancellation, out)
}

fn route_failure(r: &RouteReport) -> Outcome {
    let case = format!("{} {}", r.group, r.params);
    if let Some(d) = r.first_degree {
        let labels: Vec<String> = r
            .provenance
            .iter()
            .map(|t| format!("{}: {}", t.route, t.label))
            .collect();
        return Err(Failure {
            case: format!("{case} [terms at degree: {}]", labels.join("; ")),
            degree: Some(d),
            expected: "0".into(),
            got: r.residual.coeff(d).to_string(),
        });
    }
    if let Some(d) = r.first_moduli_degree {
        return Err(Failure {
            case: format!("{case} [coefficient of moduli_min]"),
            degree: Some(d),
            expected: "0".into(),
            got: r.residual_moduli_coefficient.coeff(d).to_string(),
        });
    }
    Ok(())
}

fn route_u21_suite(grid: &Grid) -> SuiteReport {
    let out = valid_grid(grid)
        .par_iter()
        .map(|p| {
            let r =
                verify_route_equivalence(Group::U21, p, default_order(p.g), SuVariant::AsPrinted)
                    .expect("valid grid");
            vec![route_failure(&r)]
        })
        .collect();
    collect(Suite::RouteU21, out)
}

fn route_su21_suite(grid: &Grid) -> SuiteReport {
    let cases: Vec<(ModuliParams, SuVariant)> = valid_grid(grid)
        .into_iter()
        .flat_map(|p| SuVariant::ALL.into_iter().map(move |v| (p, v)))
        .collect();
    let diagnostics: Vec<RouteReport> = cases
        .par_iter()
        .map(|(p, v)| {
            verify_route_equivalence(Group::SU21, p, default_order(p.g), *v).expect("valid grid")
        })
        .collect();
    SuiteReport {
        suite: Suite::RouteSu21,
        hard: false,
        cases: diagnostics.len(),
        failures: Vec::new(),
        diagnostics,
    }
}

/// Independent product oracle for the triple cover.
fn cover_oracle(m1: i64, m2: i64, g: i64, order: usize) -> TruncatedSeries {
    let product = sym_poly(m1, g).mul(&sym_poly(m2, g));
    let inside = (0..=2 * g - 2).contains(&m1) && (0..=2 * g - 2).contains(&m2);
    let mut out = product.to_series(order);
    if inside {
        let torsion = BigInt::from(3).pow((2 * g) as u32) - 1;
        let c = |k: i64| (1..=k).fold(BigInt::from(1), |acc, i| acc * (2 * g - 1 - i) / i);
        let v = torsion * c(m1) * c(m2);
        out = &out + &TruncatedSeries::monomial((m1 + m2) as usize, v, order);
    }
    out
}

fn gothen_suite(grid: &Grid) -> SuiteReport {
    let cases: Vec<(i64, i64, i64)> = grid
        .genera
        .clone()
        .flat_map(|g| (0..=2 * g).flat_map(move |m1| (0..=2 * g).map(move |m2| (g, m1, m2))))
        .collect();
    let mut out: Vec<Vec<Outcome>> = cases
        .par_iter()
        .map(|&(g, m1, m2)| {
            let n = (8 * g + 4) as usize;
            let c = CoverParams { m1, m2, g };
            let got = gothen_cover_poincare(c, n);
            let euler = got
                .coeffs()
                .iter()
                .enumerate()
                .fold(
                    BigInt::from(0),
                    |acc, (k, x)| {
                        if k % 2 == 0 {
                            acc + x
                        } else {
                            acc - x
                        }
                    },
                );
            let sign = if (m1 + m2) % 2 == 0 { 1 } else { -1 };
            let want_euler = sym_poly(m1, g).eval(-1) * sym_poly(m2, g).eval(-1) + v_dim(c) * sign;
            vec![
                compare(
                    format!("S~({m1},{m2}) g={g}"),
                    &cover_oracle(m1, m2, g, n),
                    &got,
                ),
                check(
                    format!("euler S~({m1},{m2}) g={g}"),
                    euler == want_euler,
                    &want_euler.to_string(),
                    &euler,
                ),
            ]
        })
        .collect();
    if grid.genera.contains(&2) {
        let spot = TruncatedSeries::from_i64s(&[1, 8, 338, 8, 1], 4);
        let got = gothen_cover_poincare(CoverParams { m1: 1, m2: 1, g: 2 }, 4);
        out.push(vec![compare("spot S~(1,1) g=2", &spot, &got)]);
    }
    collect(Suite::Gothen, out)
}

/// `(d1, d2) = (2g - 2, g - 1)`, a point of maximal Toledo invariant.
pub fn maximal_point(g: i64) -> ModuliParams {
    make_params(g, 2 * g - 2, g - 1).expect("genus at least 2")
}

fn jac_square_over(g: i64, order: usize) -> TruncatedSeries {
    RationalExpr::over_one_minus_t2(jacobian_poly(g).pow(2), 2).expand(order)
}

fn maximal_suite(grid: &Grid) -> SuiteReport {
    let genera: Vec<i64> = grid.genera.clone().collect();
    let out = genera
        .par_iter()
        .map(|&g| {
            let n = (4 * g + 20) as usize;
            let want = jac_square_over(g, n);
            let p = maximal_point(g);
            let mut v = vec![compare(
                format!("telescoping g={g}"),
                &want,
                &maximal_first_term(g, n),
            )];
            let pe = maximal_pairs_equivariant(g, n);
            let lhs = (&pe * &hb_ingredients::jacobian_poincare(g, n))
                .div_one_minus(2)
                .expect("a = 2");
            v.push(compare(format!("pairs times J g={g}"), &want, &lhs));
            let r = u21_closed_form(&p, &MaximalCase, n).expect("valid");
            v.push(check(
                format!("absolute {p}"),
                r.series().is_some(),
                "absolute",
                format!("{:?}", r.mode),
            ));
            v.push(compare(format!("closed form {p}"), &want, &r.known));
            let su = su21_closed_form(&p, &MaximalCase, n, SuVariant::AsPrinted).expect("valid");
            v.push(compare(
                format!("fixed-det closed form {p}"),
                &want,
                &su.known,
            ));
            let mm = MaximalCase.moduli_min(g - 1, g, n).expect("maximal");
            v.push(check(
                format!("moduli_min nonnegative g={g}"),
                mm.is_nonnegative(),
                "nonnegative",
                format!("{:?}", mm.first_negative()),
            ));
            v
        })
        .collect();
    collect(Suite::Maximal, out)
}

/// Representative with Toledo invariant `tau`: `(tau/2, -tau/2)`.
pub fn torelli_point(g: i64, tau: i64) -> ModuliParams {
    make_params(g, tau / 2, -tau / 2).expect("genus at least 2")
}

/// `su21 - pu21` as a degree map, in relative mode with unknowns compared.
pub fn su_minus_pu(p: &ModuliParams, order: usize) -> Result<Vec<(usize, BigInt)>, String> {
    let su =
        su21_closed_form(p, &Symbolic, order, SuVariant::AsPrinted).map_err(|e| e.to_string())?;
    let pu = pu21_poincare(p, &Symbolic, order, SuVariant::AsPrinted).map_err(|e| e.to_string())?;
    if su.pairs_coefficient != pu.pairs_coefficient
        || su.moduli_coefficient != pu.moduli_coefficient
    {
        return Err("unknown coefficients differ".into());
    }
    let d = &su.known - &pu.known;
    Ok((0..=order)
        .filter(|&k| d.coeff(k) != 0.into())
        .map(|k| (k, d.coeff(k)))
        .collect())
}

fn torelli_suite(grid: &Grid) -> SuiteReport {
    let cases: Vec<(i64, i64)> = grid
        .genera
        .clone()
        .flat_map(|g| (0..=2 * g - 2).step_by(2).map(move |tau| (g, tau)))
        .collect();
    let out = cases
        .par_iter()
        .map(|&(g, tau)| {
            let p = torelli_point(g, tau);
            let n = default_order(g);
            let case = format!("g={g} tau={tau}");
            let got = match su_minus_pu(&p, n) {
                Ok(x) => x,
                Err(e) => return vec![check(case, false, "comparable results", e)],
            };
            let want: Vec<(usize, BigInt)> = torelli_anomalous_map(&p)
                .expect("even tau")
                .into_iter()
                .map(|(k, v)| (k as usize, v.parse().expect("decimal")))
                .collect();
            let tr = Rational::from_integer(tau);
            let empty = got.is_empty();
            let mut v = vec![
                check(
                    format!("{case} support"),
                    got == want,
                    &format!("{want:?}"),
                    format!("{got:?}"),
                ),
                check(
                    format!("{case} predicates"),
                    empty == gamma3_trivial(g, tr) && empty == kirwan_su_surjective(g, tr),
                    &format!("empty={empty}"),
                    format!(
                        "gamma3={} kirwan={}",
                        gamma3_trivial(g, tr),
                        kirwan_su_surjective(g, tr)
                    ),
                ),
                compare(
                    format!("{case} anomalous series"),
                    &anomalous_series(&p, n),
                    &{
                        let mut s = TruncatedSeries::zero(n);
                        for (k, c) in &got {
                            s = &s + &TruncatedSeries::monomial(*k, c.clone(), n);
                        }
                        s
                    },
                ),
            ];
            if g == 4 && tau == 4 {
                let parts = crate::torelli_anomalous_part(&p).expect("even tau");
                let ok = parts.len() == 1
                    && parts[0].dimension == "6560"
                    && (parts[0].m1, parts[0].m2) == (0, 2 * g - 2)
                    && torelli_trivial(g, tr)
                    && got.len() == 1;
                v.push(check(
                    format!("{case} borderline"),
                    ok,
                    "single degree 6560 at (0, 6), torelli trivial",
                    format!("{parts:?}"),
                ));
            }
            v
        })
        .collect();
    collect(Suite::Torelli, out)
}

/// Every assembled series of a point, relative, in a fixed order.
pub fn assembled_family(p: &ModuliParams, order: usize) -> Vec<AssemblyResult> {
    let mut out = vec![
        u21_closed_form(p, &Symbolic, order).expect("valid"),
        u21_stratum_route(p, &Symbolic, order).expect("valid"),
        crate::u21_items_route(p, &Symbolic, order).expect("valid"),
    ];
    for v in SuVariant::ALL {
        out.push(su21_closed_form(p, &Symbolic, order, v).expect("valid"));
        out.push(su21_stratum_route(p, &Symbolic, order, v).expect("valid"));
        out.push(pu21_poincare(p, &Symbolic, order, v).expect("valid"));
    }
    out
}

fn same_values(a: &AssemblyResult, b: &AssemblyResult) -> bool {
    a.known == b.known
        && a.pairs_coefficient == b.pairs_coefficient
        && a.moduli_coefficient == b.moduli_coefficient
}

fn shift_suite(grid: &Grid) -> SuiteReport {
    let out = valid_grid(grid)
        .par_iter()
        .map(|p| {
            let n = default_order(p.g);
            let base = assembled_family(p, n);
            let mut v = Vec::new();
            for k in -2..=2 {
                if k == 0 {
                    continue;
                }
                let q = p.tensor_shift(k);
                for (a, b) in base.iter().zip(assembled_family(&q, n)) {
                    let case = format!("{} {} {p} shift {k}", a.group, a.route);
                    v.push(if same_values(a, &b) {
                        Ok(())
                    } else {
                        compare(case.clone(), &a.known, &b.known)
                            .and_then(|_| {
                                compare(
                                    format!("{case} coefficients"),
                                    &a.pairs_coefficient,
                                    &b.pairs_coefficient,
                                )
                            })
                            .and_then(|_| {
                                compare(
                                    format!("{case} coefficients"),
                                    &a.moduli_coefficient,
                                    &b.moduli_coefficient,
                                )
                            })
                    });
                }
            }
            v
        })
        .collect();
    collect(Suite::ShiftInvariance, out)
}

fn random_series(rng: &mut StdRng, order: usize) -> TruncatedSeries {
    let coeffs: Vec<i64> = (0..=order)
        .map(|_| rng.gen_range(-1_000_000..=1_000_000))
        .collect();
    TruncatedSeries::from_i64s(&coeffs, order)
}

/// Ring laws and truncation coherence on seeded random instances.
pub fn series_laws_suite(instances: usize, seed: u64) -> SuiteReport {
    let out = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng =
                StdRng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let n = rng.gen_range(0..=24);
            let (a, b, c) = (
                random_series(&mut rng, n),
                random_series(&mut rng, n),
                random_series(&mut rng, n),
            );
            let case = format!("instance {i}");
            let m = rng.gen_range(0..=n);
            let tr = |s: &TruncatedSeries| s.truncate(m).expect("m <= n");
            vec![
                compare(
                    format!("{case} add assoc"),
                    &(&(&a + &b) + &c),
                    &(&a + &(&b + &c)),
                ),
                compare(
                    format!("{case} mul assoc"),
                    &(&(&a * &b) * &c),
                    &(&a * &(&b * &c)),
                ),
                compare(
                    format!("{case} distributive"),
                    &(&a * &(&b + &c)),
                    &(&(&a * &b) + &(&a * &c)),
                ),
                compare(format!("{case} commutative"), &(&a * &b), &(&b * &a)),
                compare(
                    format!("{case} truncation"),
                    &tr(&(&a * &b)),
                    &(&tr(&a) * &tr(&b)),
                ),
            ]
        })
        .collect();
    collect(Suite::SeriesLaws, out)
}
