//! Centered and non-centered discrete maximal functions.
//!
//! All evaluation goes through [`Evaluator`], which rescales `f` to integers
//! by the common denominator of its values and keeps prefix sums, so an
//! average over any window is a pair `(integer sum, window size)` and
//! comparisons are cross-multiplications.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::sequence::{FiniteSequence, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Centered,
    NonCentered,
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Centered => "centered",
            OperatorKind::NonCentered => "noncentered",
        }
    }
}

impl std::str::FromStr for OperatorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "centered" => Ok(OperatorKind::Centered),
            "noncentered" | "non-centered" => Ok(OperatorKind::NonCentered),
            other => Err(format!("unknown operator {other:?}")),
        }
    }
}

/// A non-negative fraction `num / den` in units of `1 / D`, where `D` is the
/// evaluator's common denominator. Never reduced; ordering is exact.
#[derive(Debug, Clone)]
pub(crate) struct Frac {
    pub num: BigInt,
    pub den: u64,
}

impl Frac {
    pub fn new(num: BigInt, den: u64) -> Self {
        debug_assert!(den > 0);
        Self { num, den }
    }

    pub fn whole(num: BigInt) -> Self {
        Self { num, den: 1 }
    }

    /// `self - other`, with the denominators multiplied.
    pub fn sub(&self, other: &Frac) -> Frac {
        if self.den == other.den {
            return Frac::new(&self.num - &other.num, self.den);
        }
        Frac::new(
            &self.num * other.den - &other.num * self.den,
            self.den * other.den,
        )
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (&self.num * other.den).cmp(&(&other.num * self.den))
    }
}

/// Prefix-sum evaluator for one sequence.
#[derive(Debug, Clone)]
pub struct Evaluator {
    support: Option<Interval>,
    denom: BigInt,
    scaled: Vec<BigInt>,
    prefix: Vec<BigInt>,
}

impl Evaluator {
    pub fn new(f: &FiniteSequence) -> Self {
        let denom = f
            .values()
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled: Vec<BigInt> = f
            .values()
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        let mut prefix = Vec::with_capacity(scaled.len() + 1);
        prefix.push(BigInt::zero());
        for v in &scaled {
            let next = prefix.last().unwrap() + v;
            prefix.push(next);
        }
        Self {
            support: f.support(),
            denom,
            scaled,
            prefix,
        }
    }

    pub fn support(&self) -> Option<Interval> {
        self.support
    }

    pub(crate) fn to_rational(&self, x: &Frac) -> Rational {
        Rational::new(x.num.clone(), &self.denom * BigInt::from(x.den))
    }

    pub(crate) fn scaled_value(&self, k: i64) -> BigInt {
        match self.support {
            Some(s) if s.contains(k) => self.scaled[(k - s.lo) as usize].clone(),
            _ => BigInt::zero(),
        }
    }

    /// Scaled sum over `[x, y]`; zero when the window misses the support.
    pub(crate) fn sum(&self, x: i64, y: i64) -> BigInt {
        let Some(s) = self.support else {
            return BigInt::zero();
        };
        let lo = x.max(s.lo);
        let hi = y.min(s.hi);
        if lo > hi {
            return BigInt::zero();
        }
        let i = (lo - s.lo) as usize;
        let j = (hi - s.lo) as usize + 1;
        &self.prefix[j] - &self.prefix[i]
    }

    pub(crate) fn total(&self) -> BigInt {
        self.prefix.last().cloned().unwrap_or_default()
    }

    pub(crate) fn avg(&self, x: i64, y: i64) -> Frac {
        debug_assert!(x <= y);
        Frac::new(self.sum(x, y), (y - x + 1) as u64)
    }

    pub(crate) fn centered_avg(&self, n: i64, k: i64) -> Frac {
        self.avg(n - k, n + k)
    }

    /// Radius past which every centered window covers the whole support.
    fn radius_bound(&self, n: i64) -> i64 {
        let s = self.support.expect("nonzero");
        (n - s.lo).abs().max((n - s.hi).abs())
    }

    pub(crate) fn centered_max(&self, n: i64) -> Result<Frac> {
        let s = self.support.ok_or(Error::ZeroFunction)?;
        // radii below the distance to the support give zero averages
        let k_min = (s.lo - n).max(n - s.hi).max(0);
        let best = (k_min..=self.radius_bound(n))
            .map(|k| self.centered_avg(n, k))
            .max()
            .expect("nonempty radius range");
        Ok(best)
    }

    pub(crate) fn noncentered_max(&self, n: i64) -> Result<Frac> {
        let s = self.support.ok_or(Error::ZeroFunction)?;
        let best = if n > s.hi {
            (s.lo..=s.hi).map(|l| self.avg(l, n)).max()
        } else if n < s.lo {
            (s.lo..=s.hi).map(|r| self.avg(n, r)).max()
        } else {
            (s.lo..=n)
                .flat_map(|l| (n..=s.hi).map(move |r| (l, r)))
                .map(|(l, r)| self.avg(l, r))
                .max()
        };
        Ok(best.expect("nonempty window range"))
    }

    pub(crate) fn max_at(&self, kind: OperatorKind, n: i64) -> Result<Frac> {
        match kind {
            OperatorKind::Centered => self.centered_max(n),
            OperatorKind::NonCentered => self.noncentered_max(n),
        }
    }

    /// Non-centered maximal values on the whole support in `O(N^2)`.
    fn noncentered_core(&self) -> Vec<Frac> {
        let s = self.support.expect("nonzero");
        let n = (s.hi - s.lo + 1) as usize;
        let mut best: Vec<Option<Frac>> = vec![None; n];
        for l in 0..n {
            // suffix maxima over right endpoints for this left endpoint
            let mut suffix: Vec<Frac> = Vec::with_capacity(n - l);
            for r in (l..n).rev() {
                let a = self.avg(s.lo + l as i64, s.lo + r as i64);
                let m = match suffix.last() {
                    Some(prev) if *prev > a => prev.clone(),
                    _ => a,
                };
                suffix.push(m);
            }
            suffix.reverse();
            for (i, m) in suffix.into_iter().enumerate() {
                let slot = &mut best[l + i];
                if slot.as_ref().is_none_or(|b| m > *b) {
                    *slot = Some(m);
                }
            }
        }
        best.into_iter().map(|b| b.expect("filled")).collect()
    }

    /// Closed-form value on the tails: for `n >= b` the best window is
    /// `[j, n]`-anchored at some `j` in the support, and symmetrically on the left.
    pub(crate) fn tail_law(&self, kind: OperatorKind, n: i64) -> Option<Frac> {
        let s = self.support?;
        let span = |width: i64| -> u64 {
            match kind {
                OperatorKind::Centered => (2 * width + 1) as u64,
                OperatorKind::NonCentered => (width + 1) as u64,
            }
        };
        if n >= s.hi {
            (s.lo..=s.hi)
                .map(|j| Frac::new(self.sum(j, s.hi), span(n - j)))
                .max()
        } else if n <= s.lo {
            (s.lo..=s.hi)
                .map(|j| Frac::new(self.sum(s.lo, j), span(j - n)))
                .max()
        } else {
            None
        }
    }
}

pub fn avg_interval(f: &FiniteSequence, x: i64, y: i64) -> Result<Rational> {
    if x > y {
        return Err(Error::EmptyInterval { lo: x, hi: y });
    }
    let ev = Evaluator::new(f);
    Ok(ev.to_rational(&ev.avg(x, y)))
}

/// `A_k f(n)`, the centered average of radius `k`.
pub fn avg_centered(f: &FiniteSequence, n: i64, k: i64) -> Result<Rational> {
    if k < 0 {
        return Err(Error::NegativeRadius(k));
    }
    avg_interval(f, n - k, n + k)
}

pub fn centered_max_at(f: &FiniteSequence, n: i64) -> Result<Rational> {
    let ev = Evaluator::new(f);
    Ok(ev.to_rational(&ev.centered_max(n)?))
}

pub fn noncentered_max_at(f: &FiniteSequence, n: i64) -> Result<Rational> {
    let ev = Evaluator::new(f);
    Ok(ev.to_rational(&ev.noncentered_max(n)?))
}

pub fn max_at(f: &FiniteSequence, kind: OperatorKind, n: i64) -> Result<Rational> {
    match kind {
        OperatorKind::Centered => centered_max_at(f, n),
        OperatorKind::NonCentered => noncentered_max_at(f, n),
    }
}

/// Largest `w >= 0` with `A_w f(n) = Mf(n)`; `Ok(None)` when no radius attains it.
pub fn radius_omega(f: &FiniteSequence, n: i64) -> Result<Option<i64>> {
    let ev = Evaluator::new(f);
    radius_omega_with(&ev, n)
}

pub(crate) fn radius_omega_with(ev: &Evaluator, n: i64) -> Result<Option<i64>> {
    let m = ev.centered_max(n)?;
    // A_w f(n) <= S / (2w + 1), so w > (S / Mf(n) - 1) / 2 cannot attain.
    // In scaled units Mf(n) = m.num / m.den and S = total.
    let w_max: BigInt = (ev.total() * BigInt::from(m.den) / &m.num - 1) / 2;
    let w_max: i64 = i64::try_from(&w_max).unwrap_or(i64::MAX);
    let w_max = w_max.min(ev.radius_bound(n));
    Ok((0..=w_max).rev().find(|&w| ev.centered_avg(n, w) == m))
}

/// Exact values of a maximal function on the support, plus a checked guard
/// band on each side beyond which the tail law takes over.
#[derive(Debug, Clone)]
pub struct MaximalProfile {
    kind: OperatorKind,
    source: FiniteSequence,
    core: Option<Interval>,
    core_values: Vec<Rational>,
    guard: i64,
    left_guard: Vec<Rational>,
    right_guard: Vec<Rational>,
    ev: Evaluator,
}

/// Guard band width for a support of `len` points.
pub fn guard_width(len: usize) -> i64 {
    (len as i64).max(8)
}

pub fn build_profile(f: &FiniteSequence, kind: OperatorKind) -> Result<MaximalProfile> {
    let ev = Evaluator::new(f);
    let Some(core) = f.support() else {
        return Ok(MaximalProfile {
            kind,
            source: f.clone(),
            core: None,
            core_values: Vec::new(),
            guard: 0,
            left_guard: Vec::new(),
            right_guard: Vec::new(),
            ev,
        });
    };
    let g = guard_width(f.len());

    let core_fracs: Vec<Frac> = match kind {
        OperatorKind::Centered => core
            .iter()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&n| ev.centered_max(n))
            .collect::<Result<_>>()?,
        OperatorKind::NonCentered => ev.noncentered_core(),
    };
    // index 0 is nearest to the core on both sides
    let side = |dir: i64, edge: i64| -> Result<Vec<Frac>> {
        (1..=g)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&d| ev.max_at(kind, edge + dir * d))
            .collect()
    };
    let left = side(-1, core.lo)?;
    let right = side(1, core.hi)?;

    certify_tail(&ev, kind, core.lo, -1, &core_fracs[0], &left)?;
    certify_tail(&ev, kind, core.hi, 1, core_fracs.last().unwrap(), &right)?;

    let conv = |v: Vec<Frac>| v.iter().map(|x| ev.to_rational(x)).collect::<Vec<_>>();
    Ok(MaximalProfile {
        kind,
        source: f.clone(),
        core: Some(core),
        core_values: conv(core_fracs),
        guard: g,
        left_guard: conv(left),
        right_guard: conv(right),
        ev,
    })
}

fn certify_tail(
    ev: &Evaluator,
    kind: OperatorKind,
    edge: i64,
    dir: i64,
    edge_value: &Frac,
    band: &[Frac],
) -> Result<()> {
    let fail = |at: i64, reason: String| Err(Error::TailCertificateFailed { at, reason });
    if ev.tail_law(kind, edge).as_ref() != Some(edge_value) {
        return fail(edge, "tail law disagrees with direct value at support edge".into());
    }
    let mut prev = edge_value;
    for (i, v) in band.iter().enumerate() {
        let at = edge + dir * (i as i64 + 1);
        if !v.num.is_positive() || v >= prev {
            return fail(at, "not strictly decreasing away from the support".into());
        }
        if ev.tail_law(kind, at).as_ref() != Some(v) {
            return fail(at, "tail law disagrees with direct evaluation".into());
        }
        prev = v;
    }
    Ok(())
}

impl MaximalProfile {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn source(&self) -> &FiniteSequence {
        &self.source
    }

    pub fn is_zero(&self) -> bool {
        self.core.is_none()
    }

    pub fn core(&self) -> Option<Interval> {
        self.core
    }

    pub fn core_values(&self) -> &[Rational] {
        &self.core_values
    }

    pub fn guard_width(&self) -> i64 {
        self.guard
    }

    /// `[a - G, b + G]`, or `None` for the zero function.
    pub fn guarded_window(&self) -> Option<Interval> {
        self.core.map(|c| Interval {
            lo: c.lo - self.guard,
            hi: c.hi + self.guard,
        })
    }

    /// Maximal function at any integer: stored values on the core and guard
    /// band, tail law beyond.
    pub fn value_at(&self, n: i64) -> Rational {
        let Some(c) = self.core else {
            return rational::zero();
        };
        if c.contains(n) {
            return self.core_values[(n - c.lo) as usize].clone();
        }
        let (dist, band) = if n < c.lo {
            (c.lo - n, &self.left_guard)
        } else {
            (n - c.hi, &self.right_guard)
        };
        if dist <= self.guard {
            return band[(dist - 1) as usize].clone();
        }
        let v = self.ev.tail_law(self.kind, n).expect("outside the core");
        self.ev.to_rational(&v)
    }

    pub fn values_on(&self, window: Interval) -> Vec<Rational> {
        window.iter().map(|n| self.value_at(n)).collect()
    }

    pub(crate) fn evaluator(&self) -> &Evaluator {
        &self.ev
    }
}
