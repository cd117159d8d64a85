//! Majorization of real vectors.
//!
//! Entries are sorted in decreasing order, `x_(1) >= ... >= x_(n)`.
//! [`majorizes`]`(x, y, kind)` reads "x majorizes y" in the chosen sense:
//!
//! - `Strong`: `sum_{i<=k} x_(i) >= sum_{i<=k} y_(i)` for `k < n`, equal totals.
//! - `WeakLower`: the same partial sums for every `k <= n`, no equality.
//! - `WeakUpper`: every sum of the `k` smallest entries of `x` is at most the
//!   corresponding sum for `y`.
//!
//! The `Log*` kinds apply the same tests to the logarithms of the entries.
//!
//! For vectors of equal length, `WeakUpper` coincides with the upper ordering
//! with identity pair of the uniform laws on `x` and `y`, in that order.

use alloc::vec::Vec;

use crate::dist::DiscreteCdf;
use crate::error::{Error, Result};
use crate::func::{sort_dedup, PiecewiseLinear};
use crate::Tolerance;

/// A nonempty vector of finite reals.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RealVector(Vec<f64>);

impl RealVector {
    /// Validates entries.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySupport);
        }
        if let Some(&x) = entries.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(x));
        }
        Ok(Self(entries))
    }

    /// Entries in input order.
    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    /// Length.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries in decreasing order.
    pub fn descending(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Entries in increasing order.
    pub fn ascending(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    fn logs(&self) -> Result<Self> {
        if let Some(&x) = self.0.iter().find(|&&x| x <= 0.0) {
            return Err(Error::NonPositiveEntryForLog(x));
        }
        Ok(Self(self.0.iter().map(|&x| libm::log(x)).collect()))
    }
}

/// Kind of majorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MajorizationKind {
    /// Partial sums dominate and totals agree.
    Strong,
    /// Sums of the smallest entries are dominated.
    WeakUpper,
    /// Partial sums of the largest entries dominate.
    WeakLower,
    /// Strong majorization of the logarithms.
    Log,
    /// Upper weak majorization of the logarithms.
    LogWeakUpper,
    /// Lower weak majorization of the logarithms.
    LogWeakLower,
}

/// Result of a majorization test.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MajorizationVerdict {
    /// Whether the relation holds.
    pub holds: bool,
    /// Number of summed entries at the first violated inequality.
    pub witness: Option<usize>,
}

fn check_len(x: &RealVector, y: &RealVector) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

fn prefix(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Does `x` majorize `y` in the sense of `kind`?
pub fn majorizes(x: &RealVector, y: &RealVector, kind: MajorizationKind, tol: Tolerance) -> Result<MajorizationVerdict> {
    check_len(x, y)?;
    let eps = tol.eps();
    let (x, y) = match kind {
        MajorizationKind::Log | MajorizationKind::LogWeakUpper | MajorizationKind::LogWeakLower => (x.logs()?, y.logs()?),
        _ => (x.clone(), y.clone()),
    };
    let n = x.len();
    let fail = |k: usize| Ok(MajorizationVerdict { holds: false, witness: Some(k) });
    match kind {
        MajorizationKind::Strong | MajorizationKind::Log => {
            let (px, py) = (prefix(&x.descending()), prefix(&y.descending()));
            for k in 0..n - 1 {
                if px[k] < py[k] - eps {
                    return fail(k + 1);
                }
            }
            if (px[n - 1] - py[n - 1]).abs() > eps {
                return fail(n);
            }
        }
        MajorizationKind::WeakLower | MajorizationKind::LogWeakLower => {
            let (px, py) = (prefix(&x.descending()), prefix(&y.descending()));
            for k in 0..n {
                if px[k] < py[k] - eps {
                    return fail(k + 1);
                }
            }
        }
        MajorizationKind::WeakUpper | MajorizationKind::LogWeakUpper => {
            let (px, py) = (prefix(&x.ascending()), prefix(&y.ascending()));
            for k in 0..n {
                if px[k] > py[k] + eps {
                    return fail(k + 1);
                }
            }
        }
    }
    Ok(MajorizationVerdict { holds: true, witness: None })
}

/// Uniform law on the entries, duplicates merged.
pub fn as_uniform_cdf(x: &RealVector) -> DiscreteCdf {
    DiscreteCdf::from_samples(x.entries()).expect("entries are finite and nonempty")
}

/// Truth values of the four sum statements for one `u` and one `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SumStatements {
    /// `sum_i (i/n) [u(x_(n-i)) - u(x_(n-i+1))] >=` the same for `y`, with
    /// `i = n` included through `x_(0) = y_(0) = K`.
    pub increments: bool,
    /// `sum_i b_i x_[i] <= sum_i b_i y_[i]`, `x_[i]` the i-th smallest,
    /// `b_i = v(i/n) - v((i-1)/n)`.
    pub weighted: bool,
    /// `sum_i u(x_i) <= sum_i u(y_i)`.
    pub utility: bool,
    /// `sum_i v(i/n) (x_(n-i) - x_(n-i+1)) >=` the same for `y`, `x_(0) = y_(0) = K`.
    pub distorted: bool,
}

impl SumStatements {
    /// All four as an array.
    pub fn as_array(&self) -> [bool; 4] {
        [self.increments, self.weighted, self.utility, self.distorted]
    }
}

fn increments_sum(desc: &[f64], u: &PiecewiseLinear, k: f64) -> f64 {
    let n = desc.len();
    let at = |j: usize| if j == 0 { u.eval(k) } else { u.eval(desc[j - 1]) };
    (1..=n).map(|i| (i as f64 / n as f64) * (at(n - i) - at(n - i + 1))).sum()
}

fn weighted_sum(asc: &[f64], b: &[f64]) -> f64 {
    asc.iter().zip(b).map(|(x, b)| x * b).sum()
}

fn distorted_sum(desc: &[f64], v: &PiecewiseLinear, k: f64) -> f64 {
    let n = desc.len();
    let at = |j: usize| if j == 0 { k } else { desc[j - 1] };
    (1..=n)
        .map(|i| v.eval(i as f64 / n as f64) * (at(n - i) - at(n - i + 1)))
        .sum()
}

fn weights(v: &PiecewiseLinear, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| v.eval(i as f64 / n as f64) - v.eval((i - 1) as f64 / n as f64))
        .collect()
}

/// Evaluates the four sum statements for the supplied `u`, `v` and `K`.
pub fn majorization_statements(
    x: &RealVector,
    y: &RealVector,
    u: &PiecewiseLinear,
    v: &PiecewiseLinear,
    k: f64,
    tol: Tolerance,
) -> Result<SumStatements> {
    check_len(x, y)?;
    let eps = tol.eps();
    let (xd, yd) = (x.descending(), y.descending());
    let (xa, ya) = (x.ascending(), y.ascending());
    let b = weights(v, x.len());
    let ux: f64 = x.entries().iter().map(|&t| u.eval(t)).sum();
    let uy: f64 = y.entries().iter().map(|&t| u.eval(t)).sum();
    Ok(SumStatements {
        increments: increments_sum(&xd, u, k) >= increments_sum(&yd, u, k) - eps,
        weighted: weighted_sum(&xa, &b) <= weighted_sum(&ya, &b) + eps,
        utility: ux <= uy + eps,
        distorted: distorted_sum(&xd, v, k) >= distorted_sum(&yd, v, k) - eps,
    })
}

/// Universally quantified versions of the four statements, decided over the
/// extreme members: `u = min(t, c)` for `c` among the entries, 0/1 step
/// weight sequences, and `v = min(a, i/n)`.
pub fn universal_statements(x: &RealVector, y: &RealVector, k: f64, tol: Tolerance) -> Result<SumStatements> {
    check_len(x, y)?;
    let eps = tol.eps();
    let n = x.len();
    let (xd, yd) = (x.descending(), y.descending());
    let (xa, ya) = (x.ascending(), y.ascending());
    let mut cuts: Vec<f64> = x.entries().iter().chain(y.entries()).copied().collect();
    sort_dedup(&mut cuts);
    let id = PiecewiseLinear::identity();
    let mut out = SumStatements {
        increments: true,
        weighted: true,
        utility: true,
        distorted: true,
    };
    for &c in &cuts {
        let u = id.min_with(c);
        if increments_sum(&xd, &u, k) < increments_sum(&yd, &u, k) - eps {
            out.increments = false;
        }
        let ux: f64 = x.entries().iter().map(|&t| u.eval(t)).sum();
        let uy: f64 = y.entries().iter().map(|&t| u.eval(t)).sum();
        if ux > uy + eps {
            out.utility = false;
        }
    }
    for ones in 0..=n {
        let b: Vec<f64> = (0..n).map(|i| if i < ones { 1.0 } else { 0.0 }).collect();
        if weighted_sum(&xa, &b) > weighted_sum(&ya, &b) + eps {
            out.weighted = false;
        }
    }
    let unit = PiecewiseLinear::unit_identity();
    for i in 0..=n {
        let v = unit.min_with(i as f64 / n as f64);
        if distorted_sum(&xd, &v, k) < distorted_sum(&yd, &v, k) - eps {
            out.distorted = false;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const T: Tolerance = Tolerance::DEFAULT;

    fn rv(v: &[f64]) -> RealVector {
        RealVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn strong_example() {
        let x = rv(&[1.0, 0.0, 0.0]);
        let y = rv(&[1.0 / 3.0; 3]);
        assert!(majorizes(&x, &y, MajorizationKind::Strong, T).unwrap().holds);
        assert!(!majorizes(&y, &x, MajorizationKind::Strong, T).unwrap().holds);
    }

    #[test]
    fn weak_upper_example() {
        let x = rv(&[3.0, 1.0]);
        let y = rv(&[3.0, 2.0]);
        assert!(majorizes(&x, &y, MajorizationKind::WeakUpper, T).unwrap().holds);
        let v = majorizes(&y, &x, MajorizationKind::WeakUpper, T).unwrap();
        assert_eq!(v, MajorizationVerdict { holds: false, witness: Some(1) });
    }

    #[test]
    fn reflexive_for_all_kinds() {
        let x = rv(&[2.0, 0.5, 3.0]);
        for kind in [
            MajorizationKind::Strong,
            MajorizationKind::WeakUpper,
            MajorizationKind::WeakLower,
            MajorizationKind::Log,
            MajorizationKind::LogWeakUpper,
            MajorizationKind::LogWeakLower,
        ] {
            assert!(majorizes(&x, &x, kind, T).unwrap().holds);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            majorizes(&rv(&[1.0]), &rv(&[1.0, 2.0]), MajorizationKind::Strong, T),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        );
        assert_eq!(
            majorizes(&rv(&[1.0, 0.0]), &rv(&[1.0, 2.0]), MajorizationKind::Log, T),
            Err(Error::NonPositiveEntryForLog(0.0))
        );
        assert!(RealVector::new(vec![]).is_err());
    }

    #[test]
    fn uniform_examples() {
        let f = as_uniform_cdf(&rv(&[1.0, 3.0]));
        assert_eq!(f, DiscreteCdf::from_atoms([(1.0, 0.5), (3.0, 0.5)]).unwrap());
        assert_eq!(as_uniform_cdf(&rv(&[2.0, 2.0])), DiscreteCdf::point_mass(2.0).unwrap());
        let f = as_uniform_cdf(&rv(&[0.0, 1.0, 1.0, 2.0]));
        assert_eq!(f, DiscreteCdf::from_atoms([(0.0, 0.25), (1.0, 0.5), (2.0, 0.25)]).unwrap());
    }

    #[test]
    fn statements_for_fixed_functions() {
        let x = rv(&[1.0 / 3.0; 3]);
        let y = rv(&[1.0, 0.0, 0.0]);
        let u = PiecewiseLinear::identity().min_with(1.0);
        let v = PiecewiseLinear::unit_identity();
        let s = majorization_statements(&x, &y, &u, &v, 0.0, T).unwrap();
        assert_eq!(s.as_array(), [true; 4]);
        let s = majorization_statements(&y, &x, &u, &v, 0.0, T).unwrap();
        assert_eq!(s.as_array(), [true; 4]);
        let s = majorization_statements(&x, &x, &u, &v, 5.0, T).unwrap();
        assert_eq!(s.as_array(), [true; 4]);
    }

    #[test]
    fn universal_statements_follow_weak_upper() {
        let x = rv(&[3.0, 1.0]);
        let y = rv(&[3.0, 2.0]);
        assert_eq!(universal_statements(&x, &y, 0.0, T).unwrap().as_array(), [true; 4]);
        let s = universal_statements(&y, &x, 0.0, T).unwrap();
        assert_eq!(s.as_array(), [false; 4]);
    }
}
