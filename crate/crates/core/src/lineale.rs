//! The unit interval as a lineale.
//!
//! Degrees are exact rationals in `[0, 1]`. The standard orientation uses
//! `(≤, min, 1, ⇒)` with the Gödel residual; the opposite orientation is its
//! order dual `(≥, max, 0, co-⇒)`. Both satisfy residuation:
//!
//! ```text
//! monoid(c, a) ⊑ b   ⟺   c ⊑ residual(a, b)
//! ```
//!
//! where `⊑` is the orientation's order.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number in `[0, 1]`, always stored in lowest terms.
#[derive(Clone, Copy)]
pub struct Degree(Ratio<u64>);

// Reduced form makes equality and hashing field-wise; ordering cross-multiplies.
impl PartialEq for Degree {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        self.0.numer() == other.0.numer() && self.0.denom() == other.0.denom()
    }
}

impl Eq for Degree {}

impl Hash for Degree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.numer().hash(state);
        self.0.denom().hash(state);
    }
}

impl Ord for Degree {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.0.numer(), self.0.denom());
        let (c, d) = (other.0.numer(), other.0.denom());
        if b == d {
            return a.cmp(c);
        }
        (u128::from(*a) * u128::from(*d)).cmp(&(u128::from(*c) * u128::from(*b)))
    }
}

impl PartialOrd for Degree {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Degree {
    pub const ZERO: Degree = Degree(Ratio::new_raw(0, 1));
    pub const ONE: Degree = Degree(Ratio::new_raw(1, 1));

    /// `numer / denom`, reduced. Rejects a zero denominator and values above one.
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidDegree {
                input: format!("{numer}/{denom}"),
                reason: "zero denominator".into(),
            });
        }
        if numer > denom {
            return Err(Error::InvalidDegree {
                input: format!("{numer}/{denom}"),
                reason: "outside [0,1]".into(),
            });
        }
        Ok(Degree(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }

    pub fn is_one(&self) -> bool {
        self.numer() == self.denom()
    }

    /// Every degree whose reduced denominator is at most `max_denom`, ascending.
    pub fn grid(max_denom: u64) -> Vec<Degree> {
        let mut out = Vec::new();
        for q in 1..=max_denom.max(1) {
            for p in 0..=q {
                out.push(Degree(Ratio::new(p, q)));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// The evenly spaced grid `{0, 1/n, …, 1}`.
    pub fn uniform_grid(n: u64) -> Vec<Degree> {
        let n = n.max(1);
        (0..=n).map(|p| Degree(Ratio::new(p, n))).collect()
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn invalid(input: &str, reason: &str) -> Error {
    Error::InvalidDegree {
        input: input.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_digits(s: &str, whole: &str) -> Result<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid(whole, "expected decimal digits"));
    }
    s.parse::<u64>().map_err(|_| invalid(whole, "number too large"))
}

impl FromStr for Degree {
    type Err = Error;

    /// Accepts `p/q` (reduced on input) or a plain decimal such as `0.3`.
    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = parse_digits(p.trim(), input)?;
            let q = parse_digits(q.trim(), input)?;
            return Degree::new(p, q).map_err(|e| match e {
                Error::InvalidDegree { reason, .. } => invalid(input, &reason),
                other => other,
            });
        }
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (if i.is_empty() { "0" } else { i }, f),
            None => (s, ""),
        };
        let int = parse_digits(int_part, input)?;
        if frac_part.is_empty() {
            if s.ends_with('.') {
                return Err(invalid(input, "missing fractional digits"));
            }
            return Degree::new(int, 1).map_err(|_| invalid(input, "outside [0,1]"));
        }
        let frac = parse_digits(frac_part, input)?;
        let scale = 10u64
            .checked_pow(frac_part.len() as u32)
            .ok_or_else(|| invalid(input, "too many decimal places"))?;
        let numer = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(|| invalid(input, "number too large"))?;
        Degree::new(numer, scale).map_err(|_| invalid(input, "outside [0,1]"))
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match &v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(serde::de::Error::custom(format!(
                    "expected a degree string or number, found {other}"
                )))
            }
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// `min(a, b)`.
pub fn meet(a: Degree, b: Degree) -> Degree {
    a.min(b)
}

/// `max(a, b)`.
pub fn join(a: Degree, b: Degree) -> Degree {
    a.max(b)
}

/// Gödel residual: the largest `c` with `min(c, a) ≤ b`.
pub fn implies(a: Degree, b: Degree) -> Degree {
    if a <= b {
        Degree::ONE
    } else {
        b
    }
}

/// Residual of `max` in the dual order: the least `c` with `max(c, a) ≥ b`.
pub fn co_implies(a: Degree, b: Degree) -> Degree {
    if a >= b {
        Degree::ZERO
    } else {
        b
    }
}

/// Which of the two lineale structures on `[0, 1]` is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Standard,
    Opposite,
}

impl Orientation {
    /// The lineale order: `≤` in the standard orientation, `≥` in the opposite one.
    pub fn le(self, a: Degree, b: Degree) -> bool {
        match self {
            Orientation::Standard => a <= b,
            Orientation::Opposite => a >= b,
        }
    }

    pub fn cmp(self, a: Degree, b: Degree) -> Ordering {
        match self {
            Orientation::Standard => a.cmp(&b),
            Orientation::Opposite => b.cmp(&a),
        }
    }

    pub fn monoid(self, a: Degree, b: Degree) -> Degree {
        match self {
            Orientation::Standard => meet(a, b),
            Orientation::Opposite => join(a, b),
        }
    }

    pub fn unit(self) -> Degree {
        match self {
            Orientation::Standard => Degree::ONE,
            Orientation::Opposite => Degree::ZERO,
        }
    }

    pub fn residual(self, a: Degree, b: Degree) -> Degree {
        match self {
            Orientation::Standard => implies(a, b),
            Orientation::Opposite => co_implies(a, b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Orientation::Standard => "standard",
            Orientation::Opposite => "opposite",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: u64, q: u64) -> Degree {
        Degree::new(p, q).unwrap()
    }

    // Sup/inf of the defining sets, searched over the twelfths plus the two
    // arguments (the extremum is always attained at one of those points).
    fn candidates(a: Degree, b: Degree) -> Vec<Degree> {
        let mut c = Degree::uniform_grid(12);
        c.extend([a, b]);
        c
    }

    fn grid_sup_implies(a: Degree, b: Degree) -> Degree {
        candidates(a, b)
            .into_iter()
            .filter(|&c| c.min(a) <= b)
            .max()
            .unwrap()
    }

    fn grid_inf_co_implies(a: Degree, b: Degree) -> Degree {
        candidates(a, b)
            .into_iter()
            .filter(|&c| c.max(a) >= b)
            .min()
            .unwrap()
    }

    #[test]
    fn meet_and_join_examples() {
        assert_eq!(meet(d(3, 10), d(7, 10)), d(3, 10));
        assert_eq!(join(d(3, 10), d(7, 10)), d(7, 10));
        for a in Degree::grid(6) {
            assert_eq!(meet(a, Degree::ONE), a);
            assert_eq!(meet(a, a), a);
            assert_eq!(join(a, Degree::ZERO), a);
            assert_eq!(join(Degree::ONE, a), Degree::ONE);
        }
    }

    #[test]
    fn implies_matches_grid_supremum() {
        assert_eq!(grid_sup_implies(d(3, 10), d(7, 10)), Degree::ONE);
        assert_eq!(grid_sup_implies(d(7, 10), d(3, 10)), d(3, 10));
        assert_eq!(implies(d(3, 10), d(7, 10)), Degree::ONE);
        assert_eq!(implies(d(7, 10), d(3, 10)), d(3, 10));
        for a in Degree::uniform_grid(12) {
            for b in Degree::uniform_grid(12) {
                assert_eq!(implies(a, b), grid_sup_implies(a, b), "{a} => {b}");
                assert_eq!(co_implies(a, b), grid_inf_co_implies(a, b), "{a} co=> {b}");
            }
            assert_eq!(implies(a, a), Degree::ONE);
            assert_eq!(co_implies(a, a), Degree::ZERO);
        }
    }

    #[test]
    fn co_implies_examples() {
        assert_eq!(grid_inf_co_implies(d(7, 10), d(3, 10)), Degree::ZERO);
        assert_eq!(grid_inf_co_implies(d(3, 10), d(7, 10)), d(7, 10));
        assert_eq!(co_implies(d(7, 10), d(3, 10)), Degree::ZERO);
        assert_eq!(co_implies(d(3, 10), d(7, 10)), d(7, 10));
    }

    #[test]
    fn unit_laws_of_residuals() {
        for b in Degree::grid(6) {
            assert_eq!(implies(Degree::ONE, b), b);
            assert_eq!(implies(Degree::ZERO, b), Degree::ONE);
            assert_eq!(co_implies(Degree::ZERO, b), b);
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("0.3".parse::<Degree>().unwrap(), d(3, 10));
        assert_eq!("6/20".parse::<Degree>().unwrap(), d(3, 10));
        assert_eq!(".5".parse::<Degree>().unwrap(), d(1, 2));
        assert_eq!("1".parse::<Degree>().unwrap(), Degree::ONE);
        assert_eq!("1.000".parse::<Degree>().unwrap(), Degree::ONE);
        assert_eq!(d(6, 20).to_string(), "3/10");
        assert_eq!(Degree::ZERO.to_string(), "0/1");
        for bad in ["7/5", "1/0", "-1/2", "1.5", "", "a/b", "0.", "1e-3", "2", "0.1.2"] {
            assert!(bad.parse::<Degree>().is_err(), "{bad:?} accepted");
        }
        assert!("0.12345678901234567890".parse::<Degree>().is_err());
    }

    #[test]
    fn serde_accepts_strings_and_numbers() {
        let v: Vec<Degree> = serde_json::from_str(r#"["2/5", 0.5, 1, "0"]"#).unwrap();
        assert_eq!(v, vec![d(2, 5), d(1, 2), Degree::ONE, Degree::ZERO]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["2/5","1/2","1/1","0/1"]"#);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(Degree::grid(1).len(), 2);
        assert_eq!(Degree::grid(2).len(), 3);
        assert_eq!(Degree::grid(6).len(), 13);
    }

    #[test]
    fn orientations_are_dual() {
        for a in Degree::grid(4) {
            for b in Degree::grid(4) {
                assert_eq!(Orientation::Standard.le(a, b), Orientation::Opposite.le(b, a));
                assert_eq!(Orientation::Opposite.monoid(a, b), join(a, b));
            }
        }
        assert_eq!(Orientation::Opposite.unit(), Degree::ZERO);
    }
}
