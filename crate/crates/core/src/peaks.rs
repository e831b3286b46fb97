//! Alternating extremal systems of `Mf` and their classification.
//!
//! A window `[m, M]` of the centered maximal function is reduced to
//!
//! ```text
//! b0 <= a1 < b1 < a2 < ... < b_s < a_{s+1} <= b_{s+1}
//! ```
//!
//! where the `a_i` are local minima, the `b_i` (`1 <= i <= s`) local maxima
//! and `b0`, `b_{s+1}` the window ends. Runs of equal values are collapsed
//! to their leftmost index. Each triple `a_i < b_i < a_{i+1}` is a peak.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maximal::{radius_omega_with, MaximalProfile, OperatorKind};
use crate::rational::{self, Rational};
use crate::sequence::{FiniteSequence, Interval};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peak {
    pub p: i64,
    pub r: i64,
    pub q: i64,
    #[serde(rename = "Mf_p", with = "rational::serde_str")]
    pub mf_p: Rational,
    #[serde(rename = "Mf_r", with = "rational::serde_str")]
    pub mf_r: Rational,
    #[serde(rename = "Mf_q", with = "rational::serde_str")]
    pub mf_q: Rational,
    /// `2 Mf(r) - Mf(p) - Mf(q)`.
    #[serde(with = "rational::serde_str")]
    pub var: Rational,
    pub essential: bool,
    pub omega: Option<i64>,
}

impl Peak {
    pub fn new(p: i64, r: i64, q: i64, mf_p: Rational, mf_r: Rational, mf_q: Rational) -> Self {
        let var = &mf_r * rational::int(2) - &mf_p - &mf_q;
        Self {
            p,
            r,
            q,
            mf_p,
            mf_r,
            mf_q,
            var,
            essential: false,
            omega: None,
        }
    }

    /// `Mf(r) - var / 4`, the essentiality threshold.
    pub fn threshold(&self) -> Rational {
        &self.mf_r - &self.var / rational::int(4)
    }

    /// Largest value of `f` strictly between `p` and `q`, `None` if `q = p + 1`.
    pub fn interior_max(&self, f: &FiniteSequence) -> Option<Rational> {
        interior_argmax(f, self.p, self.q).map(|k| f.get(k))
    }
}

/// Leftmost maximizer of `f` on `(p, q)`.
pub(crate) fn interior_argmax(f: &FiniteSequence, p: i64, q: i64) -> Option<i64> {
    if q - p < 2 {
        return None;
    }
    let mut best = p + 1;
    let mut best_v = f.get(best);
    // only support points can beat the zero at p + 1
    let (lo, hi) = match f.support() {
        Some(s) => (s.lo.max(p + 2), s.hi.min(q - 1)),
        None => return Some(best),
    };
    for k in lo..=hi {
        let v = f.get(k);
        if v > best_v {
            best = k;
            best_v = v;
        }
    }
    Some(best)
}

/// Essential iff every interior value of `f` sits at least `var / 4` below
/// `Mf(r)`; vacuously true for an empty interior.
pub fn is_essential(f: &FiniteSequence, peak: &Peak) -> bool {
    match peak.interior_max(f) {
        None => true,
        Some(m) => m <= peak.threshold(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum PeakClass {
    NonEssential,
    /// Essential with `omega <= 32` (outside every scale class).
    EssentialSmall,
    /// `2^(n-1) < omega <= 2^n` and `k 2^(n-5) < r <= (k+1) 2^(n-5)`, `n > 5`.
    EssentialScaled { n: u32, k: i64 },
}

impl fmt::Display for PeakClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeakClass::NonEssential => f.write_str("NonEssential"),
            PeakClass::EssentialSmall => f.write_str("EssentialSmall"),
            PeakClass::EssentialScaled { n, k } => write!(f, "EssentialScaled({n},{k})"),
        }
    }
}

/// Scale class of an essential peak with summit `r` and radius `omega`.
pub fn scale_class(omega: i64, r: i64) -> PeakClass {
    if omega <= 32 {
        return PeakClass::EssentialSmall;
    }
    let n = 64 - ((omega - 1) as u64).leading_zeros();
    let block = 1i64 << (n - 5);
    PeakClass::EssentialScaled {
        n,
        k: (r - 1).div_euclid(block),
    }
}

/// Width `2^(n-5)` of the summit blocks at scale `n`.
pub fn block_width(n: u32) -> i64 {
    1i64 << (n - 5)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeakSystem {
    pub window: Interval,
    /// Window start `b0` and its value.
    pub start: i64,
    #[serde(with = "rational::serde_str")]
    pub start_value: Rational,
    /// Window end `b_{s+1}` and its value.
    pub end: i64,
    #[serde(with = "rational::serde_str")]
    pub end_value: Rational,
    /// `a_1 < ... < a_{s+1}`, with values.
    pub minima: Vec<i64>,
    #[serde(with = "rational::serde_vec_str")]
    pub minima_values: Vec<Rational>,
    pub peaks: Vec<Peak>,
}

impl PeakSystem {
    pub fn sigma(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn peak_variation(&self) -> Rational {
        peak_variation_of(&self.peaks)
    }

    /// `(Mf(b0) - Mf(a1), Mf(b_{s+1}) - Mf(a_{s+1}))`, both non-negative.
    pub fn boundary_terms(&self) -> (Rational, Rational) {
        let first = &self.start_value - &self.minima_values[0];
        let last = &self.end_value - self.minima_values.last().unwrap();
        (first, last)
    }

    /// Peak variation plus boundary terms; equals the windowed variation of `Mf`.
    pub fn telescoped_variation(&self) -> Rational {
        let (l, r) = self.boundary_terms();
        self.peak_variation() + l + r
    }
}

pub fn peak_variation_of(peaks: &[Peak]) -> Rational {
    peaks.iter().map(|p| &p.var).sum()
}

pub fn peak_variation(sys: &PeakSystem) -> Rational {
    sys.peak_variation()
}

/// Reduces `Mf` on `window` to its alternating extremal system.
///
/// Each peak comes back with its essentiality decided and, when essential,
/// its radius `omega` (left `None` if no radius attains; [`classify`]
/// reports that as an error).
pub fn extract_system(profile: &MaximalProfile, window: Interval) -> Result<PeakSystem> {
    if profile.kind() != OperatorKind::Centered {
        return Err(Error::Precondition(
            "peak systems are defined for the centered maximal function".into(),
        ));
    }
    let core = profile.core().ok_or(Error::DegenerateWindow)?;
    if !window.contains_interval(&core) {
        return Err(Error::WindowTooSmall {
            lo: window.lo,
            hi: window.hi,
            core_lo: core.lo,
            core_hi: core.hi,
        });
    }

    let values = profile.values_on(window);
    let mut reps: Vec<(i64, Rational)> = Vec::new();
    for (n, v) in window.iter().zip(values) {
        if reps.last().is_none_or(|(_, last)| *last != v) {
            reps.push((n, v));
        }
    }

    let t = reps.len() - 1;
    let rising = |j: usize| reps[j + 1].1 > reps[j].1;
    let mut minima: Vec<usize> = Vec::new();
    let mut maxima: Vec<usize> = Vec::new();
    if t == 0 || rising(0) {
        minima.push(0);
    }
    for j in 1..t {
        match (rising(j - 1), rising(j)) {
            (true, false) => maxima.push(j),
            (false, true) => minima.push(j),
            _ => {}
        }
    }
    if t > 0 && !rising(t - 1) {
        minima.push(t);
    }
    debug_assert_eq!(minima.len(), maxima.len() + 1);

    let f = profile.source();
    let ev = profile.evaluator();
    let mut peaks = Vec::with_capacity(maxima.len());
    for (i, &b) in maxima.iter().enumerate() {
        let (p, mf_p) = reps[minima[i]].clone();
        let (r, mf_r) = reps[b].clone();
        let (q, mf_q) = reps[minima[i + 1]].clone();
        let mut peak = Peak::new(p, r, q, mf_p, mf_r, mf_q);
        peak.essential = is_essential(f, &peak);
        if peak.essential {
            peak.omega = radius_omega_with(ev, r)?;
        }
        peaks.push(peak);
    }

    Ok(PeakSystem {
        window,
        start: reps[0].0,
        start_value: reps[0].1.clone(),
        end: reps[t].0,
        end_value: reps[t].1.clone(),
        minima: minima.iter().map(|&j| reps[j].0).collect(),
        minima_values: minima.iter().map(|&j| reps[j].1.clone()).collect(),
        peaks,
    })
}

/// Extraction over the profile's guarded window `[a - G, b + G]`.
pub fn extract_guarded(profile: &MaximalProfile) -> Result<PeakSystem> {
    let w = profile.guarded_window().ok_or(Error::DegenerateWindow)?;
    extract_system(profile, w)
}

/// Assigns every peak to exactly one of `NonEssential`, `EssentialSmall`
/// or `EssentialScaled(n, k)`.
pub fn classify(sys: &PeakSystem, f: &FiniteSequence) -> Result<Vec<(Peak, PeakClass)>> {
    sys.peaks
        .iter()
        .map(|peak| {
            let essential = is_essential(f, peak);
            if essential != peak.essential {
                return Err(Error::Precondition(format!(
                    "peak ({}, {}, {}) was extracted from a different sequence",
                    peak.p, peak.r, peak.q
                )));
            }
            let class = if !essential {
                PeakClass::NonEssential
            } else {
                let omega = peak.omega.ok_or(Error::OmegaNotAttained(peak.r))?;
                scale_class(omega, peak.r)
            };
            Ok((peak.clone(), class))
        })
        .collect()
}

/// Class of a single extracted peak; `None` for an essential peak whose
/// radius is not attained.
pub fn peak_class(peak: &Peak) -> Option<PeakClass> {
    if !peak.essential {
        return Some(PeakClass::NonEssential);
    }
    peak.omega.map(|w| scale_class(w, peak.r))
}

/// Groups the essential scaled peaks into their `E^n_k` buckets.
pub fn scale_buckets(classified: &[(Peak, PeakClass)]) -> Vec<((u32, i64), Vec<Peak>)> {
    let mut map: std::collections::BTreeMap<(u32, i64), Vec<Peak>> = Default::default();
    for (peak, class) in classified {
        if let PeakClass::EssentialScaled { n, k } = class {
            map.entry((*n, *k)).or_default().push(peak.clone());
        }
    }
    map.into_iter().collect()
}

/// True when every consecutive pair of system points strictly alternates.
pub fn is_alternating(sys: &PeakSystem) -> bool {
    sys.peaks.iter().all(|p| {
        p.p < p.r && p.r < p.q && p.mf_p < p.mf_r && p.mf_q < p.mf_r && !p.var.is_zero()
    }) && sys
        .peaks
        .windows(2)
        .all(|w| w[0].q == w[1].p)
}
