//! Piecewise-linear and step functions.
//!
//! [`PiecewiseLinear`] interpolates linearly between knots. Outside the knot
//! range each side either stays at the boundary value ([`Tail::Flat`]) or
//! continues with the slope of the adjacent piece ([`Tail::Linear`]), so the
//! identity on the whole line is representable.
//!
//! [`StepFn`] is a finite sum of jumps over a base value, either left- or
//! right-continuous.
//!
//! Everything that can appear under an integral sign implements [`Integrand`].

use alloc::vec::Vec;
use core::ops::Deref;

use crate::dist::DiscreteCdf;
use crate::error::{Error, Result};

/// Extension of a piecewise-linear function beyond its outermost knot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Tail {
    /// Constant at the boundary value.
    Flat,
    /// Continues with the slope of the outermost piece.
    Linear,
}

/// Continuity convention attached to a function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Continuity {
    /// Left-continuous.
    Left,
    /// Right-continuous.
    Right,
    /// Continuous.
    Continuous,
}

/// Which one-sided limit a step function takes at its jumps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Side {
    /// Left-continuous: the value at a jump is the value before it.
    Left,
    /// Right-continuous: the value at a jump includes it.
    Right,
}

/// Monotonicity direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Direction {
    /// Non-decreasing.
    Increasing,
    /// Non-increasing.
    Decreasing,
}

/// A function that can be integrated exactly against the integrators of
/// [`crate::stieltjes`].
///
/// Between consecutive breakpoints the function must be affine, and it must
/// be affine beyond the outermost breakpoints.
pub trait Integrand {
    /// Points where the function may fail to be affine, sorted.
    fn breakpoints(&self) -> Vec<f64>;
    /// Value at `x`.
    fn value(&self, x: f64) -> f64;
    /// Limit from the left at `x`.
    fn left_limit(&self, x: f64) -> f64;
    /// Limit from the right at `x`.
    fn right_limit(&self, x: f64) -> f64;
}

impl<T: Integrand + ?Sized> Integrand for &T {
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
    fn value(&self, x: f64) -> f64 {
        (**self).value(x)
    }
    fn left_limit(&self, x: f64) -> f64 {
        (**self).left_limit(x)
    }
    fn right_limit(&self, x: f64) -> f64 {
        (**self).right_limit(x)
    }
}

/// Continuous piecewise-linear function on the real line.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
    left: Tail,
    right: Tail,
}

impl PiecewiseLinear {
    /// Builds a function with flat tails.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        Self::with_tails(knots, Tail::Flat, Tail::Flat)
    }

    /// Builds a function with the given tails.
    pub fn with_tails(knots: Vec<(f64, f64)>, left: Tail, right: Tail) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidKnots("empty knot list"));
        }
        for &(x, y) in &knots {
            if !x.is_finite() {
                return Err(Error::NonFinite(x));
            }
            if !y.is_finite() {
                return Err(Error::NonFinite(y));
            }
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidKnots("x-coordinates must be strictly increasing"));
        }
        Ok(Self { knots, left, right })
    }

    /// The identity on the whole line.
    pub fn identity() -> Self {
        Self {
            knots: alloc::vec![(0.0, 0.0), (1.0, 1.0)],
            left: Tail::Linear,
            right: Tail::Linear,
        }
    }

    /// The identity on [0, 1], flat outside.
    pub fn unit_identity() -> Self {
        Self {
            knots: alloc::vec![(0.0, 0.0), (1.0, 1.0)],
            left: Tail::Flat,
            right: Tail::Flat,
        }
    }

    /// Constant function.
    pub fn constant(c: f64) -> Self {
        Self {
            knots: alloc::vec![(0.0, c)],
            left: Tail::Flat,
            right: Tail::Flat,
        }
    }

    /// Samples `f` at `xs` (sorted, strictly increasing).
    pub fn from_fn<F: Fn(f64) -> f64>(xs: &[f64], f: F) -> Result<Self> {
        Self::new(xs.iter().map(|&x| (x, f(x))).collect())
    }

    /// Knots `(x, y)`.
    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Knot x-coordinates.
    pub fn knot_xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.knots.iter().map(|k| k.0)
    }

    /// Left tail.
    pub fn left_tail(&self) -> Tail {
        self.left
    }

    /// Right tail.
    pub fn right_tail(&self) -> Tail {
        self.right
    }

    fn piece_slope(&self, i: usize) -> f64 {
        let (x0, y0) = self.knots[i];
        let (x1, y1) = self.knots[i + 1];
        (y1 - y0) / (x1 - x0)
    }

    /// Slope left of the first knot.
    pub fn left_tail_slope(&self) -> f64 {
        match self.left {
            Tail::Linear if self.knots.len() > 1 => self.piece_slope(0),
            _ => 0.0,
        }
    }

    /// Slope right of the last knot.
    pub fn right_tail_slope(&self) -> f64 {
        match self.right {
            Tail::Linear if self.knots.len() > 1 => self.piece_slope(self.knots.len() - 2),
            _ => 0.0,
        }
    }

    /// Slopes of the pieces between consecutive knots.
    pub fn slopes(&self) -> Vec<f64> {
        (0..self.knots.len().saturating_sub(1))
            .map(|i| self.piece_slope(i))
            .collect()
    }

    /// Evaluates the function.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        let (x0, y0) = self.knots[0];
        if x <= x0 {
            return y0 + self.left_tail_slope() * (x - x0);
        }
        let (xn, yn) = self.knots[n - 1];
        if x >= xn {
            return yn + self.right_tail_slope() * (x - xn);
        }
        let i = self.knots.partition_point(|k| k.0 <= x) - 1;
        let (xa, ya) = self.knots[i];
        if x == xa {
            return ya;
        }
        let (xb, yb) = self.knots[i + 1];
        ya + (yb - ya) * ((x - xa) / (xb - xa))
    }

    /// `x -> f(min(x, c))`.
    pub fn min_with(&self, c: f64) -> Self {
        let mut knots: Vec<(f64, f64)> = self.knots.iter().copied().filter(|k| k.0 < c).collect();
        if knots.is_empty() && self.left_tail_slope() != 0.0 {
            knots.push((c - 1.0, self.eval(c - 1.0)));
        }
        knots.push((c, self.eval(c)));
        Self {
            knots,
            left: self.left,
            right: Tail::Flat,
        }
    }

    /// `x -> f(max(x, c))`.
    pub fn max_with(&self, c: f64) -> Self {
        let mut knots = alloc::vec![(c, self.eval(c))];
        knots.extend(self.knots.iter().copied().filter(|k| k.0 > c));
        if knots.len() == 1 && self.right_tail_slope() != 0.0 {
            knots.push((c + 1.0, self.eval(c + 1.0)));
        }
        Self {
            knots,
            left: Tail::Flat,
            right: self.right,
        }
    }

    /// `x -> -f(-x)`.
    pub fn reflect(&self) -> Self {
        Self {
            knots: self.knots.iter().rev().map(|&(x, y)| (-x, -y)).collect(),
            left: self.right,
            right: self.left,
        }
    }

    /// `a -> 1 - f(1 - a)`.
    pub fn reflect_unit(&self) -> Self {
        Self {
            knots: self
                .knots
                .iter()
                .rev()
                .map(|&(x, y)| (1.0 - x, 1.0 - y))
                .collect(),
            left: self.right,
            right: self.left,
        }
    }

    /// `x -> k f(x)`.
    pub fn scale(&self, k: f64) -> Self {
        Self {
            knots: self.knots.iter().map(|&(x, y)| (x, k * y)).collect(),
            left: self.left,
            right: self.right,
        }
    }

    /// `x -> f(x) + c`.
    pub fn offset(&self, c: f64) -> Self {
        Self {
            knots: self.knots.iter().map(|&(x, y)| (x, y + c)).collect(),
            left: self.left,
            right: self.right,
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Self {
        let xs = merge_sorted(self.knot_xs(), other.knot_xs());
        let knots = xs.iter().map(|&x| (x, self.eval(x) + other.eval(x))).collect();
        let tail = |a: Tail, b: Tail| {
            if a == Tail::Linear || b == Tail::Linear {
                Tail::Linear
            } else {
                Tail::Flat
            }
        };
        let left = tail(self.left_tail_if_sloped(), other.left_tail_if_sloped());
        let right = tail(self.right_tail_if_sloped(), other.right_tail_if_sloped());
        let mut out = Self { knots, left, right };
        // The merged first/last piece may have a different slope than the tail.
        out.pin_tails(self, other);
        out
    }

    fn left_tail_if_sloped(&self) -> Tail {
        if self.left_tail_slope() != 0.0 {
            Tail::Linear
        } else {
            Tail::Flat
        }
    }

    fn right_tail_if_sloped(&self) -> Tail {
        if self.right_tail_slope() != 0.0 {
            Tail::Linear
        } else {
            Tail::Flat
        }
    }

    fn pin_tails(&mut self, a: &Self, b: &Self) {
        if self.left == Tail::Linear {
            let x0 = self.knots[0].0 - 1.0;
            self.knots.insert(0, (x0, a.eval(x0) + b.eval(x0)));
        }
        if self.right == Tail::Linear {
            let xn = self.knots[self.knots.len() - 1].0 + 1.0;
            self.knots.push((xn, a.eval(xn) + b.eval(xn)));
        }
    }

    /// Checks monotonicity over the knots and the tails.
    pub fn check_monotone(&self, direction: Direction) -> Result<()> {
        let ok = |d: f64| match direction {
            Direction::Increasing => d >= 0.0,
            Direction::Decreasing => d <= 0.0,
        };
        for w in self.knots.windows(2) {
            if !ok(w[1].1 - w[0].1) {
                return Err(Error::NotIncreasing { at: w[0].0 });
            }
        }
        Ok(())
    }
}

impl Integrand for PiecewiseLinear {
    fn breakpoints(&self) -> Vec<f64> {
        self.knot_xs().collect()
    }
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn left_limit(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn right_limit(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

/// A monotone piecewise-linear function with a continuity tag.
///
/// The function itself is continuous; the tag records which convention it
/// plays when used as an integrator.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonotonePL {
    pl: PiecewiseLinear,
    direction: Direction,
    continuity: Continuity,
}

impl MonotonePL {
    /// Validates monotonicity in `direction`.
    pub fn new(pl: PiecewiseLinear, direction: Direction, continuity: Continuity) -> Result<Self> {
        pl.check_monotone(direction)?;
        Ok(Self {
            pl,
            direction,
            continuity,
        })
    }

    /// Increasing function with the given continuity tag.
    pub fn increasing(pl: PiecewiseLinear, continuity: Continuity) -> Result<Self> {
        Self::new(pl, Direction::Increasing, continuity)
    }

    /// Declared direction.
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Continuity tag.
    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    /// The underlying function.
    pub fn as_pl(&self) -> &PiecewiseLinear {
        &self.pl
    }

    /// Unwraps the underlying function.
    pub fn into_pl(self) -> PiecewiseLinear {
        self.pl
    }
}

impl Deref for MonotonePL {
    type Target = PiecewiseLinear;
    fn deref(&self) -> &PiecewiseLinear {
        &self.pl
    }
}

impl Integrand for MonotonePL {
    fn breakpoints(&self) -> Vec<f64> {
        self.pl.breakpoints()
    }
    fn value(&self, x: f64) -> f64 {
        self.pl.eval(x)
    }
    fn left_limit(&self, x: f64) -> f64 {
        self.pl.eval(x)
    }
    fn right_limit(&self, x: f64) -> f64 {
        self.pl.eval(x)
    }
}

/// Step function `base + sum of jumps`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFn {
    base: f64,
    jumps: Vec<(f64, f64)>,
    prefix: Vec<f64>,
    side: Side,
}

impl StepFn {
    /// Builds a step function. Zero jumps are dropped.
    pub fn new(base: f64, jumps: Vec<(f64, f64)>, side: Side) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::NonFinite(base));
        }
        for &(x, d) in &jumps {
            if !x.is_finite() {
                return Err(Error::NonFinite(x));
            }
            if !d.is_finite() {
                return Err(Error::NonFinite(d));
            }
        }
        if jumps.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidJumps("locations must be strictly increasing"));
        }
        let jumps: Vec<(f64, f64)> = jumps.into_iter().filter(|j| j.1 != 0.0).collect();
        let mut prefix = Vec::with_capacity(jumps.len() + 1);
        let mut acc = base;
        prefix.push(acc);
        for j in &jumps {
            acc += j.1;
            prefix.push(acc);
        }
        Ok(Self {
            base,
            jumps,
            prefix,
            side,
        })
    }

    /// Builds a step function from its values: `base` left of every point
    /// and `value` from each `(x, value)` on. Values are stored exactly.
    pub fn from_values(base: f64, values: Vec<(f64, f64)>, side: Side) -> Result<Self> {
        let mut prev = base;
        let mut jumps = Vec::with_capacity(values.len());
        let mut prefix = Vec::with_capacity(values.len() + 1);
        prefix.push(base);
        for (i, &(x, v)) in values.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite(x));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite(v));
            }
            if i > 0 && values[i - 1].0 >= x {
                return Err(Error::InvalidJumps("locations must be strictly increasing"));
            }
            if v != prev {
                jumps.push((x, v - prev));
                prefix.push(v);
                prev = v;
            }
        }
        if !base.is_finite() {
            return Err(Error::NonFinite(base));
        }
        Ok(Self {
            base,
            jumps,
            prefix,
            side,
        })
    }

    /// The cdf as a right-continuous step function.
    pub fn from_cdf(f: &DiscreteCdf) -> Self {
        let jumps = f.atoms().iter().map(|a| (a.location, a.mass)).collect();
        Self::new(0.0, jumps, Side::Right).expect("cdf atoms are valid jumps")
    }

    /// Value left of every jump.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Jumps `(location, size)`.
    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    /// Continuity side.
    pub fn side(&self) -> Side {
        self.side
    }

    /// Value right of every jump.
    pub fn terminal(&self) -> f64 {
        self.prefix[self.prefix.len() - 1]
    }

    /// Sum of jumps strictly below `x`, plus the base.
    fn below(&self, x: f64) -> f64 {
        self.prefix[self.jumps.partition_point(|j| j.0 < x)]
    }

    /// Sum of jumps at or below `x`, plus the base.
    fn upto(&self, x: f64) -> f64 {
        self.prefix[self.jumps.partition_point(|j| j.0 <= x)]
    }

    /// Evaluates according to the continuity side.
    pub fn eval(&self, x: f64) -> f64 {
        match self.side {
            Side::Left => self.below(x),
            Side::Right => self.upto(x),
        }
    }
}

impl Integrand for StepFn {
    fn breakpoints(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.0).collect()
    }
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn left_limit(&self, x: f64) -> f64 {
        self.below(x)
    }
    fn right_limit(&self, x: f64) -> f64 {
        self.upto(x)
    }
}

/// Linear combination `constant + sum of weight * term`.
pub struct Combination<'a> {
    terms: Vec<(f64, &'a dyn Integrand)>,
    constant: f64,
}

impl<'a> Combination<'a> {
    /// Starts from a constant.
    pub fn constant(c: f64) -> Self {
        Self {
            terms: Vec::new(),
            constant: c,
        }
    }

    /// `a - b`.
    pub fn difference(a: &'a dyn Integrand, b: &'a dyn Integrand) -> Self {
        Self::constant(0.0).with(1.0, a).with(-1.0, b)
    }

    /// Adds `weight * term`.
    pub fn with(mut self, weight: f64, term: &'a dyn Integrand) -> Self {
        self.terms.push((weight, term));
        self
    }
}

impl Integrand for Combination<'_> {
    fn breakpoints(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.terms.iter().flat_map(|t| t.1.breakpoints()).collect();
        sort_dedup(&mut all);
        all
    }
    fn value(&self, x: f64) -> f64 {
        self.constant + self.terms.iter().map(|t| t.0 * t.1.value(x)).sum::<f64>()
    }
    fn left_limit(&self, x: f64) -> f64 {
        self.constant + self.terms.iter().map(|t| t.0 * t.1.left_limit(x)).sum::<f64>()
    }
    fn right_limit(&self, x: f64) -> f64 {
        self.constant + self.terms.iter().map(|t| t.0 * t.1.right_limit(x)).sum::<f64>()
    }
}

/// Sorts and removes exact duplicates.
pub(crate) fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

/// Merges two sorted sequences into a sorted list without duplicates.
pub(crate) fn merge_sorted<I: Iterator<Item = f64>, J: Iterator<Item = f64>>(a: I, b: J) -> Vec<f64> {
    let mut v: Vec<f64> = a.chain(b).collect();
    sort_dedup(&mut v);
    v
}
