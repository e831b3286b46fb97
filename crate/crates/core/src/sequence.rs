//! Finitely supported non-negative sequences on the integers.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Closed integer interval `[lo, hi]`. Its length is `hi - lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn length(&self) -> i64 {
        self.hi - self.lo
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A function `Z -> Q>=0` vanishing outside `[offset, offset + len - 1]`.
///
/// Always stored in normalized form: the first and last stored values are
/// strictly positive, or `values` is empty (the zero function, whose offset
/// is pinned to 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSequence {
    offset: i64,
    values: Vec<Rational>,
}

impl FiniteSequence {
    pub fn zero() -> Self {
        Self {
            offset: 0,
            values: Vec::new(),
        }
    }

    /// Strips leading and trailing zeros and adjusts the offset.
    pub fn normalize(raw_offset: i64, raw_values: Vec<Rational>) -> Result<Self> {
        if let Some(neg) = raw_values.iter().find(|v| v.is_negative()) {
            return Err(Error::NegativeValue(neg.clone()));
        }
        let Some(first) = raw_values.iter().position(|v| !v.is_zero()) else {
            return Ok(Self::zero());
        };
        let last = raw_values.iter().rposition(|v| !v.is_zero()).unwrap();
        let mut values = raw_values;
        values.truncate(last + 1);
        values.drain(..first);
        Ok(Self {
            offset: raw_offset + first as i64,
            values,
        })
    }

    pub fn from_ints(offset: i64, values: &[i64]) -> Result<Self> {
        Self::normalize(offset, values.iter().map(|&v| rational::int(v)).collect())
    }

    /// Indicator of a finite set of points.
    pub fn indicator(points: &[i64]) -> Self {
        if points.is_empty() {
            return Self::zero();
        }
        let lo = *points.iter().min().unwrap();
        let hi = *points.iter().max().unwrap();
        let mut values = vec![rational::zero(); (hi - lo + 1) as usize];
        for &p in points {
            values[(p - lo) as usize] = rational::one();
        }
        Self::normalize(lo, values).expect("indicator values are non-negative")
    }

    /// Unit mass at `at`.
    pub fn delta(at: i64) -> Self {
        Self::indicator(&[at])
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Support bounds `[a, b]`, `None` for the zero function.
    pub fn support(&self) -> Option<Interval> {
        if self.is_zero() {
            None
        } else {
            Some(Interval {
                lo: self.offset,
                hi: self.offset + self.values.len() as i64 - 1,
            })
        }
    }

    pub fn get(&self, k: i64) -> Rational {
        let idx = k - self.offset;
        if idx < 0 || idx >= self.values.len() as i64 {
            rational::zero()
        } else {
            self.values[idx as usize].clone()
        }
    }

    pub fn total_mass(&self) -> Rational {
        self.values.iter().sum()
    }

    pub fn max_value(&self) -> Rational {
        self.values.iter().max().cloned().unwrap_or_else(rational::zero)
    }

    /// `g(k) = f(k - d)`.
    pub fn translate(&self, d: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            offset: self.offset + d,
            values: self.values.clone(),
        }
    }

    /// `g(k) = f(-k)`.
    pub fn reflect(&self) -> Self {
        match self.support() {
            None => Self::zero(),
            Some(s) => Self {
                offset: -s.hi,
                values: self.values.iter().rev().cloned().collect(),
            },
        }
    }

    /// `g(k) = c * f(k)`.
    pub fn scale(&self, c: &Rational) -> Result<Self> {
        if c.is_negative() {
            return Err(Error::NegativeValue(c.clone()));
        }
        Self::normalize(self.offset, self.values.iter().map(|v| v * c).collect())
    }

    /// Parses the `seqtext v1` format.
    ///
    /// ```text
    /// # comment
    /// offset -3
    /// 1 0 2/3 4
    /// ```
    pub fn parse_seqtext(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `offset <integer>` line".into(),
        })?;
        let mut parts = header.split_whitespace();
        let offset = match (parts.next(), parts.next(), parts.next()) {
            (Some("offset"), Some(n), None) => n.parse::<i64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad offset {n:?}"),
            })?,
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected `offset <integer>`".into(),
                })
            }
        };

        let mut values = Vec::new();
        if let Some((line_no, body)) = lines.next() {
            for tok in body.split_whitespace() {
                let v = rational::parse(tok).ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("bad value {tok:?}"),
                })?;
                if v.is_negative() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("negative value {tok}"),
                    });
                }
                values.push(v);
            }
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::Parse {
                line: line_no,
                msg: "unexpected trailing content".into(),
            });
        }
        Self::normalize(offset, values)
    }

    pub fn to_seqtext(&self) -> String {
        format!("offset {}\n{}\n", self.offset, self.values_joined(" "))
    }

    /// Compact single-line form `offset:v1 v2 ...` used in CSV rows and reports.
    pub fn compact(&self) -> String {
        format!("{}:{}", self.offset, self.values_joined(" "))
    }

    fn values_joined(&self, sep: &str) -> String {
        self.values
            .iter()
            .map(rational::fmt)
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for FiniteSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.compact())
    }
}

impl Serialize for FiniteSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            offset: i64,
            #[serde(with = "rational::serde_vec_str")]
            values: &'a [Rational],
        }
        Repr {
            offset: self.offset,
            values: &self.values,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            offset: i64,
            #[serde(with = "rational::serde_vec_str")]
            values: Vec<Rational>,
        }
        let r = Repr::deserialize(d)?;
        FiniteSequence::normalize(r.offset, r.values).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn seq(offset: i64, v: &[i64]) -> FiniteSequence {
        FiniteSequence::from_ints(offset, v).unwrap()
    }

    #[test]
    fn normalize_strips_zeros() {
        let f = seq(0, &[0, 1, 0]);
        assert_eq!(f.offset(), 1);
        assert_eq!(f.values(), &[int(1)]);

        let g = FiniteSequence::normalize(5, vec![ratio(2, 3)]).unwrap();
        assert_eq!(g.offset(), 5);
        assert_eq!(g.values(), &[ratio(2, 3)]);

        assert!(seq(0, &[0, 0]).is_zero());
        assert_eq!(seq(0, &[0, 0]), FiniteSequence::zero());
    }

    #[test]
    fn normalize_rejects_negatives() {
        let err = FiniteSequence::normalize(0, vec![int(1), int(-1)]).unwrap_err();
        assert_eq!(err, Error::NegativeValue(int(-1)));
    }

    #[test]
    fn translate_examples() {
        assert_eq!(FiniteSequence::delta(0).translate(3), FiniteSequence::delta(3));
        assert_eq!(FiniteSequence::zero().translate(-7), FiniteSequence::zero());
        assert_eq!(seq(0, &[1, 2]).translate(1), seq(1, &[1, 2]));
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(FiniteSequence::delta(2).reflect(), FiniteSequence::delta(-2));
        assert_eq!(seq(0, &[1, 2]).reflect(), seq(-1, &[2, 1]));
        assert_eq!(FiniteSequence::zero().reflect(), FiniteSequence::zero());
    }

    #[test]
    fn scale_examples() {
        assert_eq!(FiniteSequence::delta(0).scale(&int(3)).unwrap(), seq(0, &[3]));
        assert!(seq(4, &[1, 5, 2]).scale(&int(0)).unwrap().is_zero());
        assert_eq!(
            seq(0, &[1, 2]).scale(&ratio(1, 2)).unwrap().values(),
            &[ratio(1, 2), int(1)]
        );
        assert!(matches!(
            seq(0, &[1]).scale(&int(-1)),
            Err(Error::NegativeValue(_))
        ));
    }

    #[test]
    fn seqtext_parse() {
        let f = FiniteSequence::parse_seqtext("# two masses\noffset -2\n0 1 0 2/4 # tail\n").unwrap();
        assert_eq!(f.offset(), -1);
        assert_eq!(f.values(), &[int(1), int(0), ratio(1, 2)]);
        assert_eq!(FiniteSequence::parse_seqtext(&f.to_seqtext()).unwrap(), f);

        assert!(FiniteSequence::parse_seqtext("offset 0\n").unwrap().is_zero());
        assert!(matches!(
            FiniteSequence::parse_seqtext("offset 0\n1 -1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(FiniteSequence::parse_seqtext("start 0\n1\n").is_err());
        assert!(FiniteSequence::parse_seqtext("offset 0\n1\n2\n").is_err());
        assert!(FiniteSequence::parse_seqtext("").is_err());
    }

    fn arb_seq() -> impl Strategy<Value = FiniteSequence> {
        (-20i64..20, prop::collection::vec((0i64..5, 1i64..9), 0..10)).prop_map(|(o, v)| {
            FiniteSequence::normalize(o, v.into_iter().map(|(n, d)| ratio(n, d)).collect())
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn normalize_idempotent(f in arb_seq()) {
            let again = FiniteSequence::normalize(f.offset(), f.values().to_vec()).unwrap();
            prop_assert_eq!(again, f);
        }

        #[test]
        fn involutions(f in arb_seq(), d in -50i64..50) {
            prop_assert_eq!(f.reflect().reflect(), f.clone());
            prop_assert_eq!(f.translate(d).translate(-d), f.clone());
            for k in -30..30 {
                prop_assert_eq!(f.reflect().get(k), f.get(-k));
                prop_assert_eq!(f.translate(d).get(k), f.get(k - d));
            }
        }
    }
}
