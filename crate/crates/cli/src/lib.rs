//! `higgsbetti`: compute assembled series, list critical sets, run the
//! identity suites, print ingredients and export results or provider files.
//!
//! [`run`] does all the work and returns the exit code with the rendered
//! document, so tests drive the tool without spawning a process.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hb_assemble::verify::{self, Grid, Suite, SuiteReport};
use hb_assemble::{compute, moduli_poincare, AssemblyResult, Group, Mode};
use hb_bradlow::{
    provider_from_file, write_provider_file, BradlowProvider, MaximalCase, ProviderEntry, Symbolic,
};
use hb_ingredients::{
    ab_semistable_rank2, bg_rank1, bg_rank2, bg_su21, bg_u21, jacobian_poincare, sym_poincare,
};
use hb_params::{make_params, region_of, HalfInt, ModuliParams, Rational};
use hb_series::TruncatedSeries;
use hb_strata::{critical_set_poincare, negative_dim, strata_table, StrataRow};
use serde::Serialize;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PARAMS: i32 = 2;

/// Number of leading coefficients shown per critical set.
const LEADING: usize = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Params(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_PARAMS
    }
}

fn param(e: impl std::fmt::Display) -> CliError {
    CliError::Params(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    U21,
    Su21,
    Pu21,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Group {
        match g {
            GroupArg::U21 => Group::U21,
            GroupArg::Su21 => Group::SU21,
            GroupArg::Pu21 => Group::PU21,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    Result,
    Provider,
}

#[derive(Debug, Parser)]
#[command(
    name = "higgsbetti",
    version,
    about = "Exact equivariant Poincaré series of U(2,1), SU(2,1) and PU(2,1) Higgs bundles"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Write the document to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assemble the series of one group at one parameter point.
    Compute(ComputeArgs),
    /// List the critical sets up to a level.
    Strata(StrataArgs),
    /// Run named identity suites over a genus grid.
    Verify(VerifyArgs),
    /// Print the ingredient series for a genus.
    Ingredients(IngredientArgs),
    /// Write a result or a provider file.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub genus: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d1: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d2: i64,
    /// Truncation order; defaults to 8g + 24.
    #[arg(long, env = "HIGGSBETTI_DEFAULT_ORDER")]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[arg(long, value_enum, default_value = "u21")]
    pub group: GroupArg,
    #[command(flatten)]
    pub point: PointArgs,
    /// `relative`, `maximal` or `file:PATH`.
    #[arg(long, default_value = "relative")]
    pub provider: String,
    /// Report the moduli series (coprime class only).
    #[arg(long)]
    pub moduli: bool,
}

#[derive(Debug, Clone, Args)]
pub struct StrataArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Highest level listed; halves are written `7/2`.
    #[arg(long)]
    pub lmax: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Suite names; all suites when omitted.
    #[arg(long)]
    pub suite: Vec<String>,
    #[arg(long, default_value = "g=2..3")]
    pub grid: String,
}

#[derive(Debug, Clone, Args)]
pub struct IngredientArgs {
    #[arg(long)]
    pub genus: i64,
    #[arg(long, env = "HIGGSBETTI_DEFAULT_ORDER")]
    pub order: Option<usize>,
    /// Degree of the rank-2 bundle in the Atiyah-Bott series.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub d2: i64,
    /// Largest symmetric power listed; defaults to 2g.
    #[arg(long)]
    pub mmax: Option<i64>,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[arg(long, value_enum)]
    pub what: ExportWhat,
    #[command(flatten)]
    pub compute: ComputeArgs,
}

/// Result of a command: exit code and the document to emit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

/// Parses arguments, runs the command and writes `--out` if given.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let out = match &cli.command {
        Command::Compute(a) => cmd_compute(a, cli.format)?,
        Command::Strata(a) => cmd_strata(a, cli.format)?,
        Command::Verify(a) => cmd_verify(a, cli.format)?,
        Command::Ingredients(a) => cmd_ingredients(a, cli.format)?,
        Command::Export(a) => cmd_export(a)?,
    };
    if let Some(path) = &cli.out {
        fs::write(path, &out.output).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        return Ok(Outcome {
            code: out.code,
            output: String::new(),
        });
    }
    Ok(out)
}

fn ok(output: String) -> Outcome {
    Outcome {
        code: EXIT_OK,
        output,
    }
}

fn resolve_order(order: Option<usize>, g: i64) -> Result<usize, CliError> {
    let n = order.unwrap_or_else(|| hb_assemble::default_order(g));
    if n < 1 {
        return Err(param("order must be at least 1"));
    }
    Ok(n)
}

fn point(a: &PointArgs) -> Result<(ModuliParams, usize), CliError> {
    let p = make_params(a.genus, a.d1, a.d2).map_err(param)?;
    Ok((p, resolve_order(a.order, a.genus)?))
}

fn require_valid(p: &ModuliParams) -> Result<(), CliError> {
    if p.valid {
        Ok(())
    } else {
        Err(CliError::Params(format!(
            "{p}: tau = {} violates 0 <= tau <= 2g - 2 = {}",
            p.tau,
            2 * p.g - 2
        )))
    }
}

/// `relative`, `maximal` (only at tau = 2g - 2) or `file:PATH`.
pub fn parse_provider(
    source: &str,
    p: &ModuliParams,
) -> Result<Box<dyn BradlowProvider>, CliError> {
    match source {
        "relative" => Ok(Box::new(Symbolic)),
        "maximal" => {
            if p.tau != Rational::from_integer(2 * p.g - 2) {
                return Err(CliError::Params(format!(
                    "provider maximal needs tau = 2g - 2 = {}, got tau = {} at {p}",
                    2 * p.g - 2,
                    p.tau
                )));
            }
            Ok(Box::new(MaximalCase))
        }
        other => match other.strip_prefix("file:") {
            Some(path) => Ok(Box::new(provider_from_file(path.as_ref()).map_err(param)?)),
            None => Err(CliError::Params(format!(
                "unknown provider `{other}`; expected relative, maximal or file:PATH"
            ))),
        },
    }
}

fn assemble(a: &ComputeArgs) -> Result<(AssemblyResult, Option<String>), CliError> {
    let (p, n) = point(&a.point)?;
    require_valid(&p)?;
    let provider = parse_provider(&a.provider, &p)?;
    let group = Group::from(a.group);
    if a.moduli {
        let m = moduli_poincare(group, &p, provider.as_ref(), n).map_err(param)?;
        let mut extra = String::new();
        if let Some(w) = &m.window {
            let _ = write!(extra, "polynomial window: {w:?}");
        }
        if let Some(nn) = m.nonnegative {
            let _ = write!(
                extra,
                "{}nonnegative: {nn}",
                if extra.is_empty() { "" } else { "; " }
            );
        }
        return Ok((m.result, (!extra.is_empty()).then_some(extra)));
    }
    Ok((
        compute(group, &p, provider.as_ref(), n).map_err(param)?,
        None,
    ))
}

fn cmd_compute(a: &ComputeArgs, format: Format) -> Result<Outcome, CliError> {
    let (r, extra) = assemble(a)?;
    let output = match format {
        Format::Json => json(&r),
        Format::Csv => result_csv(&r),
        Format::Text => result_text(&r, extra.as_deref()),
    };
    Ok(ok(output))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// `degree,betti`, or the three relative columns.
pub fn result_csv(r: &AssemblyResult) -> String {
    let mut s = String::new();
    match r.mode {
        Mode::Absolute => {
            s.push_str("degree,betti\n");
            for (k, c) in r.known.coeffs().iter().enumerate() {
                let _ = writeln!(s, "{k},{c}");
            }
        }
        Mode::Relative => {
            s.push_str("degree,known,pairs_equivariant,moduli_min\n");
            for k in 0..=r.order {
                let _ = writeln!(
                    s,
                    "{k},{},{},{}",
                    r.known.coeff(k),
                    r.pairs_coefficient.coeff(k),
                    r.moduli_coefficient.coeff(k)
                );
            }
        }
    }
    s
}

fn result_text(r: &AssemblyResult, extra: Option<&str>) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} order {} route {} provider {} mode {}",
        r.group,
        r.params,
        r.order,
        r.route,
        r.provider,
        match r.mode {
            Mode::Absolute => "absolute",
            Mode::Relative => "relative",
        }
    );
    match r.mode {
        Mode::Absolute => {
            let _ = writeln!(s, "series: {}", r.known);
        }
        Mode::Relative => {
            let _ = writeln!(s, "series = known + a * pairs_equivariant + b * moduli_min");
            let _ = writeln!(s, "known: {}", r.known);
            let _ = writeln!(s, "a: {}", r.pairs_coefficient);
            let _ = writeln!(s, "b: {}", r.moduli_coefficient);
        }
    }
    if let Some(x) = extra {
        let _ = writeln!(s, "{x}");
    }
    let _ = writeln!(s, "terms:");
    for t in &r.terms {
        let what = t
            .unknown
            .map(|u| format!(" times {}", u.name()))
            .unwrap_or_default();
        let _ = writeln!(s, "  {}{what} [{}]: {}", t.label, t.paper_ref, t.series);
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

fn parse_level(text: &str) -> Result<HalfInt, CliError> {
    let bad = || CliError::Params(format!("level `{text}` is not an integer or a half `n/2`"));
    match text.split_once('/') {
        Some((n, "2")) => Ok(HalfInt::half(n.trim().parse().map_err(|_| bad())?)),
        Some(_) => Err(bad()),
        None => Ok(HalfInt::from_int(text.trim().parse().map_err(|_| bad())?)),
    }
}

#[derive(Debug, Serialize)]
struct StratumRow {
    kind: String,
    ell: String,
    range: &'static str,
    region: String,
    negative_dims: Vec<(String, i64)>,
    leading_coefficients: Vec<String>,
}

#[derive(Debug, Serialize)]
struct StrataDoc {
    g: i64,
    d1: i64,
    d2: i64,
    lmax: String,
    order: usize,
    rows: Vec<StratumRow>,
    empty: Vec<String>,
    notes: Vec<String>,
}

const C1_NOTE: &str = "C1 series use S^(d2-l-d1+2g-2)X, the power fixed by the degree of E1*Q K; \
     the alternative reading S^(l-d1+2g-2)X is not used";

fn strata_doc(a: &StrataArgs) -> Result<StrataDoc, CliError> {
    let (p, n) = point(&a.point)?;
    require_valid(&p)?;
    let lmax = match &a.lmax {
        Some(t) => parse_level(t)?,
        None => HalfInt::from_int(p.d1 + 2 * p.g - 2),
    };
    let mut rows = Vec::new();
    let mut empty = Vec::new();
    for row in strata_table(&p, lmax).map_err(param)? {
        match row {
            StrataRow::Empty(k) => empty.push(k.to_string()),
            StrataRow::Stratum(s) => {
                let series = critical_set_poincare(&s, n).map_err(param)?;
                rows.push(StratumRow {
                    kind: s.kind.to_string(),
                    ell: s.ell.to_string(),
                    range: s.kind.range_text(),
                    region: region_of(&p, s.ell)
                        .map(|r| r.to_string())
                        .unwrap_or_else(|_| "-".into()),
                    negative_dims: negative_dim(&s)
                        .map(|v| {
                            v.into_iter()
                                .map(|d| (d.label.to_string(), d.value))
                                .collect()
                        })
                        .unwrap_or_default(),
                    leading_coefficients: series.to_strings().into_iter().take(LEADING).collect(),
                });
            }
        }
    }
    Ok(StrataDoc {
        g: p.g,
        d1: p.d1,
        d2: p.d2,
        lmax: lmax.to_string(),
        order: n,
        notes: if rows.iter().any(|r| r.kind == "C1") {
            vec![C1_NOTE.to_string()]
        } else {
            Vec::new()
        },
        rows,
        empty,
    })
}

fn cmd_strata(a: &StrataArgs, format: Format) -> Result<Outcome, CliError> {
    let doc = strata_doc(a)?;
    let output = match format {
        Format::Json => json(&doc),
        Format::Csv => {
            let mut s = String::from("kind,ell,region,leading_coefficients\n");
            for r in &doc.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    r.kind,
                    r.ell,
                    r.region,
                    r.leading_coefficients.join(" ")
                );
            }
            for k in &doc.empty {
                let _ = writeln!(s, "{k},none,,");
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "critical sets of (g={}, d1={}, d2={}) up to l = {}\n",
                doc.g, doc.d1, doc.d2, doc.lmax
            );
            for r in &doc.rows {
                let dims: Vec<String> = r
                    .negative_dims
                    .iter()
                    .map(|(l, v)| format!("{l}={v}"))
                    .collect();
                let _ = writeln!(
                    s,
                    "{}@{}  range {}  region {}  negative dims [{}]  series {} ...",
                    r.kind,
                    r.ell,
                    r.range,
                    r.region,
                    dims.join(", "),
                    r.leading_coefficients.join(", ")
                );
            }
            for k in &doc.empty {
                let _ = writeln!(s, "{k}: none in range");
            }
            for n in &doc.notes {
                let _ = writeln!(s, "note: {n}");
            }
            s
        }
    };
    Ok(ok(output))
}

fn suite_text(r: &SuiteReport, s: &mut String) {
    let kind = if r.hard { "hard" } else { "diagnostic" };
    if !r.hard {
        let nonzero = r.diagnostics.iter().filter(|d| !d.is_zero()).count();
        let _ = writeln!(
            s,
            "{} [{kind}]: {} runs, {nonzero} nonzero residuals",
            r.suite.name(),
            r.cases
        );
        for d in &r.diagnostics {
            let variant = d.variant.map(|v| v.name()).unwrap_or("-");
            match (d.first_degree, d.first_moduli_degree) {
                (None, None) => {
                    let _ = writeln!(s, "  {} {variant}: zero", d.params);
                }
                (Some(k), _) => {
                    let _ = writeln!(
                        s,
                        "  {} {variant}: degree {k} residual {}",
                        d.params,
                        d.residual.coeff(k)
                    );
                }
                (None, Some(k)) => {
                    let _ = writeln!(
                        s,
                        "  {} {variant}: moduli_min coefficient at degree {k} is {}",
                        d.params,
                        d.residual_moduli_coefficient.coeff(k)
                    );
                }
            }
            for t in &d.provenance {
                let _ = writeln!(
                    s,
                    "      {}: {} [{}] {}",
                    t.route, t.label, t.paper_ref, t.coefficient
                );
            }
        }
        return;
    }
    if r.passed() {
        let _ = writeln!(s, "{} [{kind}]: PASS ({} cases)", r.suite.name(), r.cases);
    } else {
        let _ = writeln!(
            s,
            "{} [{kind}]: FAIL ({} of {} cases)\n  first counterexample: {}",
            r.suite.name(),
            r.failures.len(),
            r.cases,
            r.failures[0]
        );
    }
}

fn cmd_verify(a: &VerifyArgs, format: Format) -> Result<Outcome, CliError> {
    let grid = Grid::parse(&a.grid).map_err(CliError::Params)?;
    let suites: Vec<Suite> = if a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite
            .iter()
            .map(|n| {
                Suite::parse(n).ok_or_else(|| {
                    let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                    CliError::Params(format!("unknown suite `{n}`; known: {}", names.join(", ")))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let reports: Vec<SuiteReport> = suites.iter().map(|s| verify::run(*s, &grid)).collect();
    let failed = reports.iter().any(|r| r.hard && !r.passed());
    let output = match format {
        Format::Json => json(&reports),
        Format::Csv => {
            let mut s = String::from("suite,hard,cases,failures,first_failure\n");
            for r in &reports {
                let first = r
                    .failures
                    .first()
                    .map(|f| f.to_string().replace(',', ";"))
                    .unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{first}",
                    r.suite.name(),
                    r.hard,
                    r.cases,
                    r.failures.len()
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                suite_text(r, &mut s);
            }
            s
        }
    };
    Ok(Outcome {
        code: if failed { EXIT_VERIFY } else { EXIT_OK },
        output,
    })
}

fn cmd_ingredients(a: &IngredientArgs, format: Format) -> Result<Outcome, CliError> {
    let g = a.genus;
    if g < 2 {
        return Err(CliError::Params(format!(
            "genus must be at least 2, got {g}"
        )));
    }
    let n = resolve_order(a.order, g)?;
    let mut items: Vec<(String, TruncatedSeries)> = vec![
        ("jacobian".into(), jacobian_poincare(g, n)),
        ("bg_rank1".into(), bg_rank1(g, n)),
        ("bg_rank2".into(), bg_rank2(g, n)),
        ("bg_u21".into(), bg_u21(g, n)),
        ("bg_su21".into(), bg_su21(g, n)),
        (
            format!("ab_semistable_rank2(d2={})", a.d2),
            ab_semistable_rank2(a.d2, g, n),
        ),
    ];
    for m in 0..=a.mmax.unwrap_or(2 * g) {
        items.push((format!("sym({m})"), sym_poincare(m, g, n)));
    }
    let output = match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = items
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::json!(v.to_strings())))
                .collect();
            json(&serde_json::json!({ "g": g, "order": n, "series": map }))
        }
        Format::Csv => {
            let mut s = String::from("name,degree,coefficient\n");
            for (name, v) in &items {
                for (k, c) in v.coeffs().iter().enumerate() {
                    let _ = writeln!(s, "\"{name}\",{k},{c}");
                }
            }
            s
        }
        Format::Text => {
            let mut s = format!("ingredients at g={g}, order {n}\n");
            for (name, v) in &items {
                let _ = writeln!(s, "{name}: {v}");
            }
            s
        }
    };
    Ok(ok(output))
}

fn cmd_export(a: &ExportArgs) -> Result<Outcome, CliError> {
    match a.what {
        ExportWhat::Result => Ok(ok(json(&assemble(&a.compute)?.0))),
        ExportWhat::Provider => {
            let (p, n) = point(&a.compute.point)?;
            require_valid(&p)?;
            let provider = parse_provider(&a.compute.provider, &p)?;
            let pairs = provider.pairs_equivariant(p.e, p.sigma, p.g, n);
            let moduli = provider.moduli_min(p.e, p.g, n);
            let (Some(pairs_equivariant), Some(moduli_min)) = (pairs, moduli) else {
                return Err(CliError::Params(format!(
                    "provider {} has no data for e = {} at g = {}",
                    provider.name(),
                    p.e,
                    p.g
                )));
            };
            let entry = ProviderEntry {
                g: p.g,
                e: p.e,
                sigma: p.sigma,
                pairs_equivariant,
                moduli_min,
            };
            Ok(ok(write_provider_file(&[entry])))
        }
    }
}
