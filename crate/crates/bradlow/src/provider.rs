use std::fs;
use std::path::Path;

use hb_params::Rational;
use hb_series::TruncatedSeries;
use serde::{Deserialize, Serialize};

use crate::{maximal_pairs_equivariant, representative, ww_difference, BradlowError};

/// Source of the two absolute stable-pair series. `None` means the value is
/// not known to this provider, which sends the assembler to relative mode.
pub trait BradlowProvider: Send + Sync {
    fn name(&self) -> String;

    /// Equivariant series of `sigma`-semistable pairs for `deg E = e`.
    fn pairs_equivariant(
        &self,
        e: i64,
        sigma: Rational,
        g: i64,
        order: usize,
    ) -> Option<TruncatedSeries>;

    /// Series of the moduli of `sigma_min`-stable pairs.
    fn moduli_min(&self, e: i64, g: i64, order: usize) -> Option<TruncatedSeries>;
}

/// Knows nothing; every result stays relative.
#[derive(Debug, Clone, Copy, Default)]
pub struct Symbolic;

impl BradlowProvider for Symbolic {
    fn name(&self) -> String {
        "relative".into()
    }

    fn pairs_equivariant(&self, _: i64, _: Rational, _: i64, _: usize) -> Option<TruncatedSeries> {
        None
    }

    fn moduli_min(&self, _: i64, _: i64, _: usize) -> Option<TruncatedSeries> {
        None
    }
}

/// Closed form valid for `e = sigma = g - 1`, the maximal Toledo invariant.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaximalCase;

impl BradlowProvider for MaximalCase {
    fn name(&self) -> String {
        "maximal".into()
    }

    fn pairs_equivariant(
        &self,
        e: i64,
        sigma: Rational,
        g: i64,
        order: usize,
    ) -> Option<TruncatedSeries> {
        (e == g - 1 && sigma == Rational::from_integer(g - 1))
            .then(|| maximal_pairs_equivariant(g, order))
    }

    fn moduli_min(&self, e: i64, g: i64, order: usize) -> Option<TruncatedSeries> {
        (e == g - 1).then(|| {
            let diff = ww_difference(&representative(g, e), order);
            &maximal_pairs_equivariant(g, order) - &diff
        })
    }
}

/// One `(g, e)` record with both series present after loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProviderEntry {
    pub g: i64,
    pub e: i64,
    pub sigma: Rational,
    pub pairs_equivariant: TruncatedSeries,
    pub moduli_min: TruncatedSeries,
}

impl ProviderEntry {
    pub fn order(&self) -> usize {
        self.pairs_equivariant.order()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SigmaRepr {
    num: i64,
    den: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EntryRepr {
    g: i64,
    e: i64,
    sigma: SigmaRepr,
    order: usize,
    pairs_equivariant: Option<Vec<String>>,
    moduli_min: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FileRepr {
    One(EntryRepr),
    Many(Vec<EntryRepr>),
}

/// Provider answering exactly the records of a provider file.
#[derive(Debug, Clone, Default)]
pub struct FileProvider {
    pub entries: Vec<ProviderEntry>,
    pub source: String,
}

fn parse_series(
    items: &Option<Vec<String>>,
    order: usize,
    field: &str,
) -> Result<Option<TruncatedSeries>, BradlowError> {
    let Some(items) = items else {
        return Ok(None);
    };
    if items.len() != order + 1 {
        return Err(BradlowError::Parse(format!(
            "{field} has {} coefficients, expected order + 1 = {}",
            items.len(),
            order + 1
        )));
    }
    TruncatedSeries::from_strings(items, order)
        .map(Some)
        .map_err(|e| BradlowError::Parse(format!("{field}: {e}")))
}

fn load_entry(raw: EntryRepr) -> Result<ProviderEntry, BradlowError> {
    if raw.g < 2 {
        return Err(BradlowError::Parse(format!("genus {} is below 2", raw.g)));
    }
    if raw.sigma.den == 0 {
        return Err(BradlowError::Parse("sigma has zero denominator".into()));
    }
    let sigma = Rational::new(raw.sigma.num, raw.sigma.den);
    let expected = Rational::new(raw.e + 2 * raw.g - 2, 3);
    if sigma != expected {
        return Err(BradlowError::Parse(format!(
            "sigma {sigma} does not equal (e + 2g - 2)/3 = {expected}"
        )));
    }
    if !representative(raw.g, raw.e).valid {
        return Err(BradlowError::Parse(format!(
            "degree e = {} lies outside [g - 1, 4g - 4] for g = {}",
            raw.e, raw.g
        )));
    }
    let n = raw.order;
    let pairs = parse_series(&raw.pairs_equivariant, n, "pairs_equivariant")?;
    let moduli = parse_series(&raw.moduli_min, n, "moduli_min")?;
    let diff = ww_difference(&representative(raw.g, raw.e), n);
    let (pairs, moduli) = match (pairs, moduli) {
        (Some(pe), Some(mm)) => {
            if let Some(degree) = (&pe - &mm).first_difference(&diff).expect("equal orders") {
                return Err(BradlowError::DifferenceMismatch { degree });
            }
            (pe, mm)
        }
        (Some(pe), None) => {
            let mm = &pe - &diff;
            (pe, mm)
        }
        (None, Some(mm)) => (&mm + &diff, mm),
        (None, None) => {
            return Err(BradlowError::Parse(
                "record carries neither pairs_equivariant nor moduli_min".into(),
            ))
        }
    };
    Ok(ProviderEntry {
        g: raw.g,
        e: raw.e,
        sigma,
        pairs_equivariant: pairs,
        moduli_min: moduli,
    })
}

pub fn provider_from_json(text: &str, source: &str) -> Result<FileProvider, BradlowError> {
    let raw: FileRepr =
        serde_json::from_str(text).map_err(|e| BradlowError::Parse(e.to_string()))?;
    let list = match raw {
        FileRepr::One(r) => vec![r],
        FileRepr::Many(v) => v,
    };
    let entries = list.into_iter().map(load_entry).collect::<Result<_, _>>()?;
    Ok(FileProvider {
        entries,
        source: source.to_string(),
    })
}

pub fn provider_from_file(path: &Path) -> Result<FileProvider, BradlowError> {
    let text = fs::read_to_string(path)
        .map_err(|e| BradlowError::Io(format!("{}: {e}", path.display())))?;
    provider_from_json(&text, &path.display().to_string())
}

/// Serializes records in the provider file format, both series present.
pub fn write_provider_file(entries: &[ProviderEntry]) -> String {
    let reprs: Vec<EntryRepr> = entries
        .iter()
        .map(|e| EntryRepr {
            g: e.g,
            e: e.e,
            sigma: SigmaRepr {
                num: *e.sigma.numer(),
                den: *e.sigma.denom(),
            },
            order: e.order(),
            pairs_equivariant: Some(e.pairs_equivariant.to_strings()),
            moduli_min: Some(e.moduli_min.to_strings()),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&reprs).expect("plain data");
    s.push('\n');
    s
}

impl FileProvider {
    fn find(&self, g: i64, e: i64, order: usize) -> Option<&ProviderEntry> {
        self.entries
            .iter()
            .find(|x| x.g == g && x.e == e && x.order() >= order)
    }
}

impl BradlowProvider for FileProvider {
    fn name(&self) -> String {
        format!("file:{}", self.source)
    }

    fn pairs_equivariant(
        &self,
        e: i64,
        sigma: Rational,
        g: i64,
        order: usize,
    ) -> Option<TruncatedSeries> {
        let hit = self.find(g, e, order).filter(|x| x.sigma == sigma)?;
        hit.pairs_equivariant.truncate(order).ok()
    }

    fn moduli_min(&self, e: i64, g: i64, order: usize) -> Option<TruncatedSeries> {
        self.find(g, e, order)?.moduli_min.truncate(order).ok()
    }
}
