//! One PASS/FAIL line per acceptance criterion. A failing criterion prints
//! its reason and the run continues; the process exits zero either way so
//! the verdicts below stay the single record of the outcome.

use std::time::Instant;

use hb_assemble::verify::{self, maximal_point, Grid, Suite, SuiteReport};
use hb_assemble::{
    ab_cancellation, compute, pu21_poincare, su21_closed_form, u21_closed_form, Group, SuVariant,
};
use hb_bradlow::{
    maximal_first_term, ww_difference, ww_difference_as_printed, BradlowProvider, MaximalCase,
};
use hb_ingredients::sym_poly;
use hb_params::{first_int_above, last_int_at_most, make_params, HalfInt};
use hb_series::TruncatedSeries;
use hb_strata::{critical_set_poincare, enumerate_critical};
use num_bigint::BigInt;

type Verdict = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Verdict);

/// Coefficients of `t^shift (1+t)^j / (1-t^2)^k` from closed-form counts:
/// `[t^n] (1-t^2)^{-k} = C(n/2 + k - 1, k - 1)` for even `n`.
fn oracle(j: u32, shift: usize, k: u32, order: usize) -> TruncatedSeries {
    let binom = |n: i64, r: i64| -> BigInt {
        if r < 0 || r > n {
            return BigInt::from(0);
        }
        (0..r).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
    };
    let coeffs = (0..=order)
        .map(|n| {
            if n < shift {
                return BigInt::from(0);
            }
            let n = (n - shift) as i64;
            (0..=j as i64)
                .filter(|i| (n - i) >= 0 && (n - i) % 2 == 0)
                .map(|i| binom(j as i64, i) * binom((n - i) / 2 + k as i64 - 1, k as i64 - 1))
                .sum()
        })
        .collect();
    TruncatedSeries::from_coeffs(coeffs, order)
}

fn first_diff(what: &str, want: &TruncatedSeries, got: &TruncatedSeries) -> Result<(), String> {
    match want.first_difference(got).expect("equal orders") {
        None => Ok(()),
        Some(d) => Err(format!(
            "{what}: degree {d}, expected {}, got {}",
            want.coeff(d),
            got.coeff(d)
        )),
    }
}

fn suite_verdict(r: &SuiteReport) -> Verdict {
    if r.passed() {
        Ok(format!("{} cases", r.cases))
    } else {
        let f = &r.failures[0];
        Err(format!(
            "{} of {} cases fail; first: {f}",
            r.failures.len(),
            r.cases
        ))
    }
}

fn criterion_1() -> Verdict {
    for (g, d1, d2) in [(2, 2, 1), (3, 4, 2)] {
        let n = (4 * g + 20) as usize;
        let p = make_params(g, d1, d2).unwrap();
        let r = u21_closed_form(&p, &MaximalCase, n).map_err(|e| e.to_string())?;
        let got = r.series().ok_or("result stayed relative")?;
        first_diff(&format!("{p}"), &oracle(4 * g as u32, 0, 2, n), got)?;
        if g == 2 {
            let head: Vec<String> = (0..5).map(|k| got.coeff(k).to_string()).collect();
            if head != ["1", "8", "30", "72", "129"] {
                return Err(format!("spot values {head:?}"));
            }
        }
    }
    Ok("(2,2,1) and (3,4,2) equal (1+t)^{4g}/(1-t^2)^2; spot 1, 8, 30, 72, 129".into())
}

fn criterion_2() -> Verdict {
    for g in 2..=3 {
        for d2 in 0..=3 {
            let n = (8 * g + 24) as usize;
            first_diff(
                &format!("g={g} d2={d2}"),
                &TruncatedSeries::zero(n),
                &ab_cancellation(g, d2, n),
            )?;
        }
    }
    Ok("zero for (g, d2) in {2,3} x {0..3}".into())
}

fn criterion_3() -> Verdict {
    let r = verify::run(Suite::RouteU21, &Grid::parse("g=2..3").unwrap());
    if r.passed() {
        return Ok(format!("{} tuples, zero residual", r.cases));
    }
    let points: Vec<String> = r
        .failures
        .iter()
        .map(|f| {
            f.case
                .split(" [")
                .next()
                .unwrap_or("")
                .trim_start_matches("u21 ")
                .to_string()
        })
        .collect();
    let zero_tau = verify::valid_grid(&Grid::parse("g=2..3").unwrap())
        .into_iter()
        .filter(|p| p.tau == 0.into())
        .count();
    Err(format!(
        "{} of {} tuples nonzero, all at tau = 0 ({} such tuples): the even-d2 A-stratum term \
         t^(2g-2) J^2 P(S^(2g-2)X)/(1-t^2)^2 has no l = d2/2 level to cancel because that level \
         sits on the strict bound (2d2-d1)/3 = d2/2; first: {}; points: {}",
        r.failures.len(),
        r.cases,
        zero_tau,
        r.failures[0],
        points.join(" ")
    ))
}

fn criterion_4() -> Verdict {
    for g in 2..=5 {
        let n = (4 * g + 20) as usize;
        first_diff(
            &format!("g={g}"),
            &oracle(4 * g as u32, 0, 2, n),
            &maximal_first_term(g, n),
        )?;
    }
    Ok("telescoping identity exact for g = 2..5".into())
}

fn criterion_5() -> Verdict {
    suite_verdict(&verify::run(Suite::Gothen, &Grid::parse("g=2..3").unwrap()))
        .map(|s| format!("{s}, includes spot 1+8t+338t^2+8t^3+t^4"))
}

fn criterion_6() -> Verdict {
    suite_verdict(&verify::run(
        Suite::Torelli,
        &Grid::parse("g=2..6").unwrap(),
    ))
    .map(|s| format!("{s} over g = 2..6, even tau, borderline (4, 4) included"))
}

fn criterion_7() -> Verdict {
    let n = 24;
    let p = make_params(2, 2, 1).unwrap();
    let want = oracle(8, 4, 1, n);
    let printed = ww_difference_as_printed(&p, n).map_err(|e| e.to_string())?;
    let printed_ok = printed == want;
    let mut empty_checked = 0;
    for g in 2..=4 {
        for d1 in -2..=2 * g + 2 {
            for d2 in (2 * d1 - 3 * g + 3)..=(2 * d1) {
                let q = make_params(g, d1, d2).unwrap();
                let flip_empty = first_int_above(d2, 2) > last_int_at_most(d1 + d2, 3);
                if q.valid && flip_empty && q.mod3_class != 0 {
                    empty_checked += 1;
                    if !ww_difference(&q, n).is_zero() {
                        return Err(format!("vanishing clause fails at {q}"));
                    }
                }
            }
        }
    }
    match first_diff("(2,2,1)", &want, &ww_difference(&p, n)) {
        Ok(()) => Ok(format!("value matches; vanishing holds at {empty_checked} tuples")),
        Err(e) => Err(format!(
            "corrected difference formula gives t^4(1+t)^4/(1-t^2), not t^4(1+t)^8/(1-t^2) ({e}); \
             the literal transcription {} the stated value; vanishing clause holds at {empty_checked} tuples",
            if printed_ok { "reproduces" } else { "also misses" }
        )),
    }
}

fn criterion_8() -> Verdict {
    let laws = verify::series_laws_suite(1000, 0x5eed);
    suite_verdict(&laws).map_err(|e| format!("series laws: {e}"))?;
    for g in 2..=4 {
        let n = (8 * g + 8) as usize;
        let bound = oracle(2 * g as u32, 0, 1, n);
        for m in 0..=4 * g {
            let s = sym_poly(m, g);
            if !s.is_palindromic() {
                return Err(format!("sym({m}) at g={g} not palindromic"));
            }
            let b1 = s.coeff(1);
            if m >= 1 && b1 != BigInt::from(2 * g) {
                return Err(format!("b1 of sym({m}) at g={g} is {b1}"));
            }
            let ser = s.to_series(n);
            if let Some(k) = (0..=n).find(|&k| ser.coeff(k) > bound.coeff(k)) {
                return Err(format!("sym({m}) exceeds J/(1-t^2) at degree {k}, g={g}"));
            }
        }
    }
    suite_verdict(&verify::run(
        Suite::ShiftInvariance,
        &Grid::parse("g=2..3").unwrap(),
    ))
    .map_err(|e| format!("shift invariance: {e}"))?;
    let mut concrete = 0;
    for g in 2..=6 {
        let p = maximal_point(g);
        let n = (4 * g + 20) as usize;
        let mut results = Vec::new();
        for group in Group::ALL {
            results.push(compute(group, &p, &MaximalCase, n).map_err(|e| e.to_string())?);
        }
        results.push(
            su21_closed_form(&p, &MaximalCase, n, SuVariant::Reconciled)
                .map_err(|e| e.to_string())?,
        );
        results.push(
            pu21_poincare(&p, &MaximalCase, n, SuVariant::Reconciled).map_err(|e| e.to_string())?,
        );
        for r in results {
            let s = r
                .series()
                .ok_or_else(|| format!("{} {p} stayed relative", r.group))?;
            if let Some(k) = s.first_negative() {
                return Err(format!(
                    "{} {} {p} negative at degree {k}",
                    r.group, r.route
                ));
            }
            concrete += 1;
        }
        let mm = MaximalCase
            .moduli_min(g - 1, g, n)
            .ok_or("maximal moduli series missing")?;
        if let Some(k) = mm.first_negative() {
            return Err(format!("moduli_min at g={g} negative at degree {k}"));
        }
        concrete += 1;
    }
    let mut critical = 0;
    for p in verify::valid_grid(&Grid::parse("g=2..3").unwrap()) {
        let n = (8 * p.g + 24) as usize;
        let top = HalfInt::from_int(p.d1 + 2 * p.g + 2);
        for s in enumerate_critical(&p, top).map_err(|e| e.to_string())? {
            let ser = critical_set_poincare(&s, n).map_err(|e| e.to_string())?;
            if let Some(k) = ser.first_negative() {
                return Err(format!(
                    "critical set {:?} at {} of {p} negative at degree {k}",
                    s.kind, s.ell
                ));
            }
            critical += 1;
        }
    }
    Ok(format!(
        "1000 law instances; sym checks g = 2..4; shift invariance; {concrete} concrete series and {critical} critical-set series nonnegative"
    ))
}

fn criterion_9() -> Verdict {
    let r = verify::run(Suite::RouteSu21, &Grid::parse("g=2..3").unwrap());
    let nonzero: Vec<_> = r.diagnostics.iter().filter(|d| !d.is_zero()).collect();
    if let Some(d) = nonzero.iter().find(|d| d.provenance.is_empty()) {
        return Err(format!(
            "nonzero residual without provenance at {}",
            d.params
        ));
    }
    Ok(format!(
        "completed {} tuple-variant runs (diagnostic); {} nonzero residuals, each with term provenance",
        r.diagnostics.len(),
        nonzero.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "maximal-Toledo closed form", criterion_1),
        (2, "classifying-space cancellation", criterion_2),
        (3, "U(2,1) route equivalence", criterion_3),
        (4, "maximal-case telescoping", criterion_4),
        (5, "triple-cover consistency", criterion_5),
        (6, "Torelli and Kirwan coherence", criterion_6),
        (7, "difference-formula value", criterion_7),
        (8, "property suites", criterion_8),
        (9, "SU(2,1) route residual report", criterion_9),
    ];
    let start = Instant::now();
    let mut passed = 0;
    for (n, name, f) in criteria {
        match f() {
            Ok(detail) => {
                passed += 1;
                println!("criterion {n} ({name}): PASS - {detail}");
            }
            Err(reason) => println!("criterion {n} ({name}): FAIL - {reason}"),
        }
    }
    println!(
        "acceptance: {passed} of {} criteria pass in {:.1?}",
        criteria.len(),
        start.elapsed()
    );
}
