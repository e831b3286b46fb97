//! Total variation of a sequence and of its maximal function over all of Z.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::maximal::{build_profile, MaximalProfile, OperatorKind};
use crate::rational::{self, Rational};
use crate::sequence::FiniteSequence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariationReport {
    pub kind: OperatorKind,
    #[serde(with = "rational::serde_str")]
    pub var_f: Rational,
    #[serde(rename = "var_Mf", with = "rational::serde_str")]
    pub var_mf: Rational,
    /// `var_Mf / var_f`; `None` when `var_f = 0`.
    #[serde(with = "rational::serde_opt_str")]
    pub ratio: Option<Rational>,
}

/// `sum_k |f(k+1) - f(k)|`, including the jumps onto and off the support.
pub fn var_sequence(f: &FiniteSequence) -> Rational {
    variation_of_run(f.values())
}

/// Variation of a finite run padded with zeros on both sides.
fn variation_of_run(values: &[Rational]) -> Rational {
    let (Some(first), Some(last)) = (values.first(), values.last()) else {
        return rational::zero();
    };
    let inner: Rational = values.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum();
    inner + first + last
}

/// Sum of `|g(k+1) - g(k)|` for `k` in `[lo, hi - 1]`.
pub fn windowed_variation(values: &[Rational]) -> Rational {
    values.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum()
}

/// `Var(Mf)` in closed form: the tails are strictly monotone with limit zero,
/// so they contribute exactly `Mf(a)` and `Mf(b)`.
pub fn var_profile(p: &MaximalProfile) -> Rational {
    variation_of_run(p.core_values())
}

pub fn var_ratio(f: &FiniteSequence, kind: OperatorKind) -> Result<VariationReport> {
    let p = build_profile(f, kind)?;
    Ok(report_from_profile(&p))
}

pub fn report_from_profile(p: &MaximalProfile) -> VariationReport {
    let var_f = var_sequence(p.source());
    let var_mf = var_profile(p);
    let ratio = if var_f.is_zero() {
        None
    } else {
        Some(&var_mf / &var_f)
    };
    VariationReport {
        kind: p.kind(),
        var_f,
        var_mf,
        ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maximal::max_at;
    use crate::rational::{int, ratio};

    // Truncated direct sum on [lo, hi] plus the monotone remainders Mf(lo)
    // and Mf(hi), with each value from pointwise evaluation.
    fn truncation_oracle(f: &FiniteSequence, kind: OperatorKind, lo: i64, hi: i64) -> Rational {
        let vals: Vec<Rational> = (lo..=hi).map(|n| max_at(f, kind, n).unwrap()).collect();
        windowed_variation(&vals) + &vals[0] + vals.last().unwrap()
    }

    #[test]
    fn var_sequence_examples() {
        assert_eq!(var_sequence(&FiniteSequence::delta(0)), int(2));
        assert_eq!(var_sequence(&FiniteSequence::indicator(&[0, 2])), int(4));
        assert_eq!(var_sequence(&FiniteSequence::zero()), int(0));
    }

    #[test]
    fn var_profile_examples() {
        let d = FiniteSequence::delta(0);
        let oracle = truncation_oracle(&d, OperatorKind::Centered, -1000, 1000);
        assert_eq!(oracle, int(2));
        let p = build_profile(&d, OperatorKind::Centered).unwrap();
        assert_eq!(var_profile(&p), int(2));

        let t = FiniteSequence::indicator(&[0, 2]);
        let oracle = truncation_oracle(&t, OperatorKind::Centered, -300, 300);
        assert_eq!(oracle, ratio(8, 3));
        let p = build_profile(&t, OperatorKind::Centered).unwrap();
        assert_eq!(var_profile(&p), ratio(8, 3));

        let z = build_profile(&FiniteSequence::zero(), OperatorKind::Centered).unwrap();
        assert_eq!(var_profile(&z), int(0));
    }

    #[test]
    fn var_ratio_examples() {
        let r = var_ratio(&FiniteSequence::delta(0), OperatorKind::Centered).unwrap();
        assert_eq!(r.ratio, Some(int(1)));
        let r = var_ratio(&FiniteSequence::indicator(&[0, 2]), OperatorKind::Centered).unwrap();
        assert_eq!(r.ratio, Some(ratio(2, 3)));
        let r = var_ratio(&FiniteSequence::zero(), OperatorKind::Centered).unwrap();
        assert_eq!(r.ratio, None);
        assert_eq!(r.var_mf, int(0));
    }

    #[test]
    fn report_json_uses_strings() {
        let r = var_ratio(&FiniteSequence::indicator(&[0, 2]), OperatorKind::Centered).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["var_Mf"], "8/3");
        assert_eq!(j["ratio"], "2/3");
        assert_eq!(j["kind"], "centered");
        let back: VariationReport = serde_json::from_value(j).unwrap();
        assert_eq!(back, r);
    }
}
