//! Discrete data of the problem: genus and degrees, the derived Toledo and
//! Bradlow invariants, the half-integer index set of critical levels, the
//! three regions, and the Toledo threshold predicates.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(i64),
    #[error("level {0} is not in the index set")]
    NotInDelta(HalfInt),
    #[error("the Toledo invariant must be an even integer here, got {0}")]
    OddTau(Rational),
    #[error("Toledo invariant {tau} outside [0, {bound}]")]
    TauOutOfRange { tau: Rational, bound: i64 },
}

/// A number of the form `doubled / 2`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt { doubled }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { doubled: 2 * n }
    }

    /// `n / 2`.
    pub const fn half(n: i64) -> Self {
        HalfInt { doubled: n }
    }

    pub const fn doubled(self) -> i64 {
        self.doubled
    }

    pub const fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.doubled / 2)
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.doubled, 2)
    }

    pub const fn plus_int(self, k: i64) -> Self {
        HalfInt {
            doubled: self.doubled + 2 * k,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.doubled),
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HalfInt({self})")
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.doubled)
    }
}

/// Smallest integer strictly greater than `num / den` (`den > 0`).
pub fn first_int_above(num: i64, den: i64) -> i64 {
    num.div_euclid(den) + 1
}

/// Largest integer not exceeding `num / den` (`den > 0`).
pub fn last_int_at_most(num: i64, den: i64) -> i64 {
    num.div_euclid(den)
}

/// Largest integer strictly below `num / den` (`den > 0`).
pub fn last_int_below(num: i64, den: i64) -> i64 {
    (num - 1).div_euclid(den)
}

fn serialize_ratio<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Repr {
        num: i64,
        den: i64,
    }
    Repr {
        num: *r.numer(),
        den: *r.denom(),
    }
    .serialize(s)
}

/// Genus and the two degrees, with every derived invariant computed exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModuliParams {
    pub g: i64,
    pub d1: i64,
    pub d2: i64,
    #[serde(serialize_with = "serialize_ratio")]
    pub tau: Rational,
    pub e: i64,
    #[serde(serialize_with = "serialize_ratio")]
    pub sigma: Rational,
    #[serde(serialize_with = "serialize_ratio")]
    pub sigma_min: Rational,
    pub mod3_class: u8,
    pub valid: bool,
}

pub fn make_params(g: i64, d1: i64, d2: i64) -> Result<ModuliParams, ParamError> {
    if g < 2 {
        return Err(ParamError::GenusTooSmall(g));
    }
    let tau = Rational::new(2 * (2 * d1 - d2), 3);
    let e = d2 - 2 * d1 + 4 * g - 4;
    let sigma = Rational::from_integer(2 * g - 2) + Rational::new(d2 - 2 * d1, 3);
    let sigma_min =
        Rational::from_integer(2 * g - 2 - d1) + Rational::new(d2, 2) + Rational::new(1, 4);
    debug_assert_eq!(sigma, Rational::new(e + 2 * g - 2, 3));
    debug_assert_eq!(sigma_min, Rational::new(e, 2) + Rational::new(1, 4));
    let bound = Rational::from_integer(2 * g - 2);
    Ok(ModuliParams {
        g,
        d1,
        d2,
        tau,
        e,
        sigma,
        sigma_min,
        mod3_class: (d1 + d2).rem_euclid(3) as u8,
        valid: !tau.is_negative() && tau <= bound,
    })
}

/// Record of the symmetries applied by [`canonicalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Transform {
    pub dualized: bool,
    pub input: (i64, i64),
    /// For inputs with `d1 + d2 = 2 mod 3`, the dual pair, whose class is 1.
    pub class_one_dual: Option<(i64, i64)>,
}

impl ModuliParams {
    /// `d2 - d1 + 2g - 2`, the top of region I.
    pub fn top_c1(&self) -> i64 {
        self.d2 - self.d1 + 2 * self.g - 2
    }

    /// The Toledo invariant as an integer, when it is one.
    pub fn tau_integer(&self) -> Option<i64> {
        self.tau.is_integer().then(|| self.tau.to_integer())
    }

    pub fn is_coprime(&self) -> bool {
        self.mod3_class != 0
    }

    /// Tensoring by a degree-`k` line bundle.
    pub fn tensor_shift(&self, k: i64) -> ModuliParams {
        make_params(self.g, self.d1 + k, self.d2 + 2 * k).expect("genus already checked")
    }

    pub fn dual(&self) -> ModuliParams {
        make_params(self.g, -self.d1, -self.d2).expect("genus already checked")
    }

    pub fn ell_a(&self) -> HalfInt {
        HalfInt::half(self.d2)
    }

    pub fn in_delta(&self, k: HalfInt) -> bool {
        if k == self.ell_a() {
            return true;
        }
        // k > (2 d2 - d1) / 3, compared on doubled values.
        k.is_integer() && 3 * k.doubled() > 2 * (2 * self.d2 - self.d1)
    }
}

pub fn canonicalize(g: i64, d1: i64, d2: i64) -> Result<(ModuliParams, Transform), ParamError> {
    let p = make_params(g, d1, d2)?;
    let dualized = p.tau.is_negative();
    let out = if dualized { p.dual() } else { p };
    let class_one_dual = (out.mod3_class == 2).then(|| (-out.d1, -out.d2));
    Ok((
        out,
        Transform {
            dualized,
            input: (d1, d2),
            class_one_dual,
        },
    ))
}

/// Members of the index set not exceeding `l_max`, sorted and deduplicated.
pub fn delta_set(p: &ModuliParams, l_max: HalfInt) -> Vec<HalfInt> {
    let mut out = Vec::new();
    if p.ell_a() <= l_max {
        out.push(p.ell_a());
    }
    let lo = first_int_above(2 * p.d2 - p.d1, 3);
    let hi = l_max.doubled().div_euclid(2);
    out.extend((lo..=hi).map(HalfInt::from_int));
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    I,
    II,
    III,
    None,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::None => "none",
        };
        f.write_str(s)
    }
}

pub fn region_of(p: &ModuliParams, k: HalfInt) -> Result<Region, ParamError> {
    if !p.in_delta(k) {
        return Err(ParamError::NotInDelta(k));
    }
    let k2 = k.doubled();
    let top = 2 * p.top_c1();
    let above_third = 3 * k2 > 2 * (p.d1 + p.d2);
    let above_low = 3 * k2 > 2 * (2 * p.d2 - p.d1);
    Ok(if above_third && k2 <= top {
        Region::I
    } else if (above_low && !above_third) || (top < k2 && k2 <= 2 * p.d1) {
        Region::II
    } else if k2 > 2 * p.d1.max(p.top_c1()) {
        Region::III
    } else {
        Region::None
    })
}

/// One anomalous degree `6g - 6 + tau/2 + 2l` with its pair `(m1, m2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct STauMember {
    pub degree: i64,
    pub ell: i64,
    pub m1: i64,
    pub m2: i64,
}

pub fn s_tau(g: i64, tau: i64) -> Result<Vec<STauMember>, ParamError> {
    if g < 2 {
        return Err(ParamError::GenusTooSmall(g));
    }
    if tau % 2 != 0 {
        return Err(ParamError::OddTau(Rational::from_integer(tau)));
    }
    if tau < 0 || tau > 2 * g - 2 {
        return Err(ParamError::TauOutOfRange {
            tau: Rational::from_integer(tau),
            bound: 2 * g - 2,
        });
    }
    let lo = 1.max(tau / 2);
    let hi = 2 * g - 2 - tau;
    Ok((lo..=hi)
        .map(|ell| STauMember {
            degree: 6 * g - 6 + tau / 2 + 2 * ell,
            ell,
            m1: 2 * g - 2 - tau - ell,
            m2: 2 * g - 2 + tau / 2 - ell,
        })
        .collect())
}

fn compare_with_threshold(g: i64, tau: Rational) -> Ordering {
    tau.abs().cmp(&Rational::new(4 * (g - 1), 3))
}

/// Surjectivity of the Kirwan map for the fixed-determinant group.
pub fn kirwan_su_surjective(g: i64, tau: Rational) -> bool {
    compare_with_threshold(g, tau) == Ordering::Greater
}

pub fn torelli_trivial(g: i64, tau: Rational) -> bool {
    compare_with_threshold(g, tau) != Ordering::Less
}

pub fn gamma3_trivial(g: i64, tau: Rational) -> bool {
    compare_with_threshold(g, tau) == Ordering::Greater
}

impl fmt::Display for ModuliParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, d1={}, d2={})", self.g, self.d1, self.d2)
    }
}

/// Whether a rational is an integer of the given parity.
pub fn is_even_integer(r: Rational) -> bool {
    r.is_integer() && (r.to_integer() % 2).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn h(xs: &[i64]) -> Vec<HalfInt> {
        xs.iter().map(|&d| HalfInt::from_doubled(d)).collect()
    }

    #[test]
    fn make_params_examples() {
        let p = make_params(2, 2, 1).unwrap();
        assert_eq!(
            (p.tau, p.e, p.sigma, p.sigma_min),
            (r(2, 1), 1, r(1, 1), r(3, 4))
        );
        assert_eq!(p.mod3_class, 0);
        assert!(p.valid);
        let p = make_params(2, 0, 0).unwrap();
        assert_eq!(
            (p.tau, p.e, p.sigma, p.mod3_class),
            (r(0, 1), 4, r(2, 1), 0)
        );
        assert!(!make_params(2, 3, 0).unwrap().valid);
        assert_eq!(make_params(1, 0, 0), Err(ParamError::GenusTooSmall(1)));
    }

    #[test]
    fn canonicalize_examples() {
        let (p, t) = canonicalize(2, 0, 3).unwrap();
        assert!(t.dualized);
        assert_eq!(p.tau, r(2, 1));
        let q = make_params(2, 2, 1).unwrap().tensor_shift(1);
        assert_eq!((q.d1, q.d2, q.tau), (3, 3, r(2, 1)));
        let (p, t) = canonicalize(3, 1, 2).unwrap();
        assert!(!t.dualized);
        assert_eq!((p.d1, p.d2), (1, 2));
        let (_, t) = canonicalize(2, 1, 1).unwrap();
        assert_eq!(t.class_one_dual, Some((-1, -1)));
    }

    #[test]
    fn delta_examples() {
        let p = make_params(2, 2, 1).unwrap();
        assert_eq!(delta_set(&p, HalfInt::from_int(3)), h(&[1, 2, 4, 6]));
        let p = make_params(2, 2, 2).unwrap();
        assert_eq!(delta_set(&p, HalfInt::from_int(3)), h(&[2, 4, 6]));
        let p = make_params(2, 0, 0).unwrap();
        assert_eq!(delta_set(&p, HalfInt::from_int(2)), h(&[0, 2, 4]));
    }

    #[test]
    fn region_examples() {
        let p = make_params(2, 2, 1).unwrap();
        assert_eq!(region_of(&p, HalfInt::from_int(1)), Ok(Region::II));
        assert_eq!(region_of(&p, HalfInt::from_int(3)), Ok(Region::III));
        let p = make_params(2, 0, 0).unwrap();
        assert_eq!(region_of(&p, HalfInt::from_int(1)), Ok(Region::I));
        assert!(region_of(&p, HalfInt::from_int(-3)).is_err());
    }

    #[test]
    fn s_tau_examples() {
        assert!(s_tau(2, 2).unwrap().is_empty());
        let s = s_tau(2, 0).unwrap();
        assert_eq!(
            s,
            vec![
                STauMember {
                    degree: 8,
                    ell: 1,
                    m1: 1,
                    m2: 1
                },
                STauMember {
                    degree: 10,
                    ell: 2,
                    m1: 0,
                    m2: 0
                },
            ]
        );
        let s = s_tau(4, 4).unwrap();
        assert_eq!(
            s,
            vec![STauMember {
                degree: 24,
                ell: 2,
                m1: 0,
                m2: 6
            }]
        );
        assert!(matches!(s_tau(3, 1), Err(ParamError::OddTau(_))));
    }

    #[test]
    fn threshold_examples() {
        assert!(kirwan_su_surjective(2, r(2, 1)));
        assert!(!kirwan_su_surjective(4, r(4, 1)));
        assert!(!kirwan_su_surjective(3, r(0, 1)));
        assert!(torelli_trivial(4, r(4, 1)) && !gamma3_trivial(4, r(4, 1)));
        assert!(!torelli_trivial(2, r(0, 1)) && !gamma3_trivial(2, r(0, 1)));
        assert!(torelli_trivial(2, r(2, 1)) && gamma3_trivial(2, r(2, 1)));
    }

    #[test]
    fn integer_bounds() {
        assert_eq!(first_int_above(0, 3), 1);
        assert_eq!(first_int_above(-1, 3), 0);
        assert_eq!(last_int_at_most(-1, 3), -1);
        assert_eq!(last_int_below(3, 3), 0);
        assert_eq!(last_int_below(4, 3), 1);
    }
}
