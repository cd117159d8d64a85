//! Exact Lebesgue–Stieltjes integration.
//!
//! Integrators are step functions, continuous piecewise-linear functions, or
//! a sum of both. A right-continuous step integrator charges the half-open
//! interval `(lo, hi]`, a left-continuous one `[lo, hi)`. The continuous part
//! is integrated piece by piece with the trapezoid rule, which is exact
//! because the integrand is affine between merged breakpoints.
//!
//! The module also carries the integration-by-parts, change-of-variables and
//! Young-type identity checks used by the test harness.

use alloc::vec::Vec;

use crate::dist::DiscreteCdf;
use crate::distortion::StandardPair;
use crate::error::{Error, Result};
use crate::func::{sort_dedup, Continuity, Integrand, PiecewiseLinear, Side, StepFn};

/// Integration interval with possibly infinite endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    /// Lower endpoint, may be `-inf`.
    pub lo: f64,
    /// Upper endpoint, may be `+inf`.
    pub hi: f64,
}

impl Interval {
    /// The interval between `lo` and `hi`.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// The whole line.
    pub fn whole() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    /// From `-inf` up to `hi`.
    pub fn up_to(hi: f64) -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi,
        }
    }

    /// From `lo` up to `+inf`.
    pub fn from(lo: f64) -> Self {
        Self {
            lo,
            hi: f64::INFINITY,
        }
    }
}

/// Value of an integral and the jump locations that contributed.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralResult {
    /// The integral.
    pub value: f64,
    /// Jump locations of the integrator inside the interval.
    pub atoms_counted: Vec<f64>,
}

/// A function of bounded variation used as an integrator.
#[derive(Clone, Debug, PartialEq)]
pub enum Integrator {
    /// Pure jump part.
    Step(StepFn),
    /// Continuous piecewise-linear.
    Linear(PiecewiseLinear),
    /// Sum of a step function and a continuous piecewise-linear function.
    Mixed(StepFn, PiecewiseLinear),
}

impl Integrator {
    /// Continuity of the integrator as a function.
    pub fn continuity(&self) -> Continuity {
        match self {
            Integrator::Step(s) | Integrator::Mixed(s, _) => match s.side() {
                Side::Left if s.jumps().is_empty() => Continuity::Continuous,
                Side::Right if s.jumps().is_empty() => Continuity::Continuous,
                Side::Left => Continuity::Left,
                Side::Right => Continuity::Right,
            },
            Integrator::Linear(_) => Continuity::Continuous,
        }
    }

    fn parts(&self) -> (Option<&StepFn>, Option<&PiecewiseLinear>) {
        match self {
            Integrator::Step(s) => (Some(s), None),
            Integrator::Linear(p) => (None, Some(p)),
            Integrator::Mixed(s, p) => (Some(s), Some(p)),
        }
    }

    /// Value at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let (s, p) = self.parts();
        s.map_or(0.0, |s| s.eval(x)) + p.map_or(0.0, |p| p.eval(x))
    }
}

impl Integrand for Integrator {
    fn breakpoints(&self) -> Vec<f64> {
        let (s, p) = self.parts();
        let mut v = Vec::new();
        if let Some(s) = s {
            v.extend(s.breakpoints());
        }
        if let Some(p) = p {
            v.extend(p.breakpoints());
        }
        sort_dedup(&mut v);
        v
    }
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn left_limit(&self, x: f64) -> f64 {
        let (s, p) = self.parts();
        s.map_or(0.0, |s| s.left_limit(x)) + p.map_or(0.0, |p| p.eval(x))
    }
    fn right_limit(&self, x: f64) -> f64 {
        let (s, p) = self.parts();
        s.map_or(0.0, |s| s.right_limit(x)) + p.map_or(0.0, |p| p.eval(x))
    }
}

/// `int g dh` over `interval`, with endpoint inclusion set by the continuity
/// side of the step part of `h`.
pub fn ls_integral(g: &dyn Integrand, h: &Integrator, interval: Interval) -> Result<IntegralResult> {
    let (step, linear) = h.parts();
    let mut value = 0.0;
    let mut atoms_counted = Vec::new();
    if let Some(s) = step {
        value += step_part(g, s, interval, &mut atoms_counted)?;
    }
    if let Some(p) = linear {
        value += linear_part(g, p, interval)?;
    }
    if !value.is_finite() {
        return Err(Error::NonFiniteIntegral);
    }
    Ok(IntegralResult {
        value,
        atoms_counted,
    })
}

/// Shorthand for [`ls_integral`] returning only the value.
pub(crate) fn integral(g: &dyn Integrand, h: &Integrator, interval: Interval) -> Result<f64> {
    ls_integral(g, h, interval).map(|r| r.value)
}

fn step_part(g: &dyn Integrand, s: &StepFn, iv: Interval, counted: &mut Vec<f64>) -> Result<f64> {
    let mut acc = 0.0;
    for &(x, d) in s.jumps() {
        let inside = match s.side() {
            Side::Right => iv.lo < x && x <= iv.hi,
            Side::Left => iv.lo <= x && x < iv.hi,
        };
        if !inside {
            continue;
        }
        let gx = g.value(x);
        if !gx.is_finite() {
            return Err(Error::EvaluationGap(x));
        }
        acc += gx * d;
        counted.push(x);
    }
    Ok(acc)
}

fn linear_part(g: &dyn Integrand, h: &PiecewiseLinear, iv: Interval) -> Result<f64> {
    if iv.lo.partial_cmp(&iv.hi) != Some(core::cmp::Ordering::Less) {
        return Ok(0.0);
    }
    let mut pts: Vec<f64> = h
        .knot_xs()
        .chain(g.breakpoints())
        .filter(|&x| iv.lo < x && x < iv.hi)
        .collect();
    if iv.lo.is_finite() {
        pts.push(iv.lo);
    }
    if iv.hi.is_finite() {
        pts.push(iv.hi);
    }
    sort_dedup(&mut pts);
    if pts.is_empty() {
        // Both endpoints infinite and no breakpoints inside: impossible for a
        // nonempty knot list, kept for safety.
        return Err(Error::NonFiniteIntegral);
    }
    let mut acc = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dh = h.eval(b) - h.eval(a);
        if dh == 0.0 {
            continue;
        }
        let ga = g.right_limit(a);
        let gb = g.left_limit(b);
        if !ga.is_finite() {
            return Err(Error::EvaluationGap(a));
        }
        if !gb.is_finite() {
            return Err(Error::EvaluationGap(b));
        }
        acc += dh * 0.5 * (ga + gb);
    }
    let first = pts[0];
    let last = pts[pts.len() - 1];
    if iv.lo == f64::NEG_INFINITY && h.left_tail_slope() != 0.0 {
        let probe = first - 1.0;
        if g.left_limit(first) != 0.0 || g.value(probe) != 0.0 {
            return Err(Error::NonFiniteIntegral);
        }
    }
    if iv.hi == f64::INFINITY && h.right_tail_slope() != 0.0 {
        let probe = last + 1.0;
        if g.right_limit(last) != 0.0 || g.value(probe) != 0.0 {
            return Err(Error::NonFiniteIntegral);
        }
    }
    Ok(acc)
}

/// Common outer anchors for quantile-side integrals.
///
/// `u(F^{-1})` is extended to the closed unit interval by jumps at 0 and 1
/// that connect it to `u(lo)` and `u(hi)`. With anchors shared by all the
/// distributions being compared, the quantile-side integrals line up with
/// the cdf-side ones taken over `(lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Anchors {
    /// Lower anchor, at or below every atom and knot involved.
    pub lo: f64,
    /// Upper anchor, at or above every atom and knot involved.
    pub hi: f64,
}

impl Anchors {
    /// Smallest window holding every atom of `dists` and every point of `extra`.
    pub fn spanning(dists: &[&DiscreteCdf], extra: &[f64]) -> Self {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for f in dists {
            let s = f.support();
            lo = lo.min(s.min_loc);
            hi = hi.max(s.max_loc);
        }
        for &x in extra {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        Self { lo, hi }
    }

    /// Window for cdf-side integrals against a continuous integrator.
    pub fn window(&self) -> Interval {
        Interval::new(self.lo, self.hi)
    }
}

/// `x -> v(F(x))` as a right-continuous step function.
pub fn compose_cdf(v: &PiecewiseLinear, f: &DiscreteCdf) -> StepFn {
    let values = f
        .atoms()
        .iter()
        .zip(f.levels())
        .map(|(a, &level)| (a.location, v.eval(level)))
        .collect();
    StepFn::from_values(v.eval(0.0), values, Side::Right).expect("atom locations are increasing")
}

/// `a -> u(F^{-1}(a))` as a left-continuous step function of the level.
///
/// With `anchors`, the function starts at `u(anchors.lo)` and ends at
/// `u(anchors.hi)`, jumping at levels 0 and 1 to meet `u(F^{-1})`.
pub fn compose_quantile(u: &PiecewiseLinear, f: &DiscreteCdf, anchors: Option<Anchors>) -> StepFn {
    let atoms = f.atoms();
    let n = atoms.len();
    let first = u.eval(atoms[0].location);
    let mut values = Vec::with_capacity(n + 1);
    let base = match anchors {
        Some(a) => {
            values.push((0.0, first));
            u.eval(a.lo)
        }
        None => first,
    };
    for (level, a) in f.levels().iter().zip(&atoms[1..]) {
        values.push((*level, u.eval(a.location)));
    }
    if let Some(a) = anchors {
        values.push((1.0, u.eval(a.hi)));
    }
    StepFn::from_values(base, values, Side::Left).expect("levels are increasing")
}

/// Residual of `int_(a,b] U dV + int_[a,b) V dU = U(b)V(b) - U(a)V(a)`.
pub fn integrate_by_parts_check(u: &Integrator, v: &Integrator, a: f64, b: f64) -> Result<f64> {
    if matches!(u.continuity(), Continuity::Right) {
        return Err(Error::ContinuityMismatch("U must be left-continuous"));
    }
    if matches!(v.continuity(), Continuity::Left) {
        return Err(Error::ContinuityMismatch("V must be right-continuous"));
    }
    let iv = Interval::new(a, b);
    let udv = integral(u, v, iv)?;
    let vdu = integral(v, u, iv)?;
    let rhs = u.eval(b) * v.eval(b) - v.eval(a) * u.eval(a);
    Ok((udv + vdu - rhs).abs())
}

/// The four change-of-variables identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChangeOfVariables {
    /// `int u0 dv(F) = int u0(F^{-1}) dv`.
    Cv1,
    /// `int u dv0(F) = int u(F^{-1}) dv0`.
    Cv2,
    /// `int v0(F) du = int v0 du(F^{-1})`.
    Cv3,
    /// `int v(F) du0 = int v du0(F^{-1})`.
    Cv4,
}

/// Both sides of `int u dv(F)` over the line and `int_0^1 u(F^{-1}) dv`.
pub fn utility_against_distorted(u: &PiecewiseLinear, v: &PiecewiseLinear, f: &DiscreteCdf) -> Result<(f64, f64)> {
    let cdf_side = integral(u, &Integrator::Step(compose_cdf(v, f)), Interval::whole())?;
    let q = compose_quantile(u, f, None);
    let quantile_side = integral(&q, &Integrator::Linear(v.clone()), Interval::new(0.0, 1.0))?;
    Ok((cdf_side, quantile_side))
}

/// Both sides of `int v(F) du` over `(lo, hi]` and `int v du(F^{-1})` over
/// the closed unit interval, with common anchors.
pub fn distortion_against_utility(
    v: &PiecewiseLinear,
    u: &PiecewiseLinear,
    f: &DiscreteCdf,
    anchors: Anchors,
) -> Result<(f64, f64)> {
    let vf = compose_cdf(v, f);
    let cdf_side = integral(&vf, &Integrator::Linear(u.clone()), anchors.window())?;
    let uq = compose_quantile(u, f, Some(anchors));
    let quantile_side = integral(v, &Integrator::Step(uq), Interval::whole())?;
    Ok((cdf_side, quantile_side))
}

/// Residual of the selected change-of-variables identity for `(u, v, F)`.
pub fn change_of_variables_check(
    u: &PiecewiseLinear,
    v: &PiecewiseLinear,
    f: &DiscreteCdf,
    which: ChangeOfVariables,
) -> Result<f64> {
    let (lhs, rhs) = match which {
        ChangeOfVariables::Cv1 | ChangeOfVariables::Cv2 => utility_against_distorted(u, v, f)?,
        ChangeOfVariables::Cv3 | ChangeOfVariables::Cv4 => {
            let xs: Vec<f64> = u.knot_xs().collect();
            distortion_against_utility(v, u, f, Anchors::spanning(&[f], &xs))?
        }
    };
    Ok((lhs - rhs).abs())
}

fn compatible(f: &DiscreteCdf, x1: f64, alpha1: f64) -> Result<bool> {
    if !(alpha1 > 0.0 && alpha1 <= 1.0) {
        return Err(Error::AlphaOutOfRange(alpha1));
    }
    let on_cdf = f.cdf_left(x1) <= alpha1 && alpha1 <= f.cdf(x1);
    let on_quantile = f.quantile_closed(alpha1) <= x1
        && (alpha1 == 1.0 || x1 <= f.quantile_right(alpha1).unwrap_or(f64::INFINITY));
    Ok(on_cdf || on_quantile)
}

fn young_parts(pair: &StandardPair, f: &DiscreteCdf, x1: f64, alpha1: f64) -> Result<(f64, f64)> {
    let u0 = pair.u0().as_pl();
    let v0 = pair.v0().as_pl();
    let vf = compose_cdf(v0, f);
    let cdf_part = integral(&vf, &Integrator::Linear(u0.clone()), Interval::up_to(x1))?;
    let uq = compose_quantile(u0, f, None);
    let quantile_part = integral(&uq, &Integrator::Linear(v0.clone()), Interval::new(0.0, alpha1))?;
    Ok((cdf_part, quantile_part))
}

/// Residual of the Young-type identity
/// `int_{-inf}^{x1} v0(F) du0 + int_0^{a1} u0(F^{-1}) dv0 = v0(F(x1)) u0(x1)
/// + v0(a1) u0(F^{-1}(a1)) - v0(F(x1)) u0(F^{-1}(a1))`.
///
/// Accepts `0 < a1 <= 1` with `F(x1-) <= a1 <= F(x1)`, or with
/// `F^{-1}(a1) <= x1 <= F^{-1}(a1+)`, except the corner
/// `a1 = F(x1-) < F(x1)` with `F^{-1}(a1) < x1`, where the right-hand side
/// above is not the value of the left-hand side. Use
/// [`young_identity_residual`] there.
pub fn lemma4_identity_check(pair: &StandardPair, f: &DiscreteCdf, x1: f64, alpha1: f64) -> Result<f64> {
    if !compatible(f, x1, alpha1)? {
        return Err(Error::NotACompatiblePair { x: x1, alpha: alpha1 });
    }
    let fx = f.cdf(x1);
    let q = f.quantile_closed(alpha1);
    if alpha1 == f.cdf_left(x1) && alpha1 < fx && q < x1 {
        return Err(Error::NotACompatiblePair { x: x1, alpha: alpha1 });
    }
    let (a, b) = young_parts(pair, f, x1, alpha1)?;
    let u0 = pair.u0();
    let v0 = pair.v0();
    let rhs = v0.eval(fx) * u0.eval(x1) + v0.eval(alpha1) * u0.eval(q) - v0.eval(fx) * u0.eval(q);
    Ok((a + b - rhs).abs())
}

/// Residual of `int_{-inf}^{x1} v0(F) du0 + int_0^{a1} u0(F^{-1}) dv0 = v0(a1) u0(x1)`
/// on every compatible probe.
pub fn young_identity_residual(pair: &StandardPair, f: &DiscreteCdf, x1: f64, alpha1: f64) -> Result<f64> {
    if !compatible(f, x1, alpha1)? {
        return Err(Error::NotACompatiblePair { x: x1, alpha: alpha1 });
    }
    let (a, b) = young_parts(pair, f, x1, alpha1)?;
    Ok((a + b - pair.v0().eval(alpha1) * pair.u0().eval(x1)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::Tail;
    use alloc::vec;

    fn two_point() -> DiscreteCdf {
        DiscreteCdf::from_atoms([(1.0, 0.5), (3.0, 0.5)]).unwrap()
    }

    #[test]
    fn expectation_against_cdf() {
        let f = two_point();
        let r = ls_integral(
            &PiecewiseLinear::identity(),
            &Integrator::Step(StepFn::from_cdf(&f)),
            Interval::whole(),
        )
        .unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.atoms_counted, vec![1.0, 3.0]);
    }

    #[test]
    fn lebesgue_part() {
        let id = PiecewiseLinear::identity();
        let r = ls_integral(&id, &Integrator::Linear(id.clone()), Interval::new(0.0, 1.0)).unwrap();
        assert_eq!(r.value, 0.5);
        let f = StepFn::from_cdf(&two_point());
        let r = ls_integral(&f, &Integrator::Linear(id), Interval::new(0.0, 4.0)).unwrap();
        assert_eq!(r.value, 2.0);
    }

    #[test]
    fn half_open_conventions() {
        let right = Integrator::Step(StepFn::new(0.0, vec![(1.0, 1.0)], Side::Right).unwrap());
        let left = Integrator::Step(StepFn::new(0.0, vec![(1.0, 1.0)], Side::Left).unwrap());
        let one = PiecewiseLinear::constant(1.0);
        assert_eq!(integral(&one, &right, Interval::new(0.0, 1.0)).unwrap(), 1.0);
        assert_eq!(integral(&one, &right, Interval::new(1.0, 2.0)).unwrap(), 0.0);
        assert_eq!(integral(&one, &left, Interval::new(0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(integral(&one, &left, Interval::new(1.0, 2.0)).unwrap(), 1.0);
    }

    #[test]
    fn divergent_tail_is_reported() {
        let id = PiecewiseLinear::identity();
        let one = PiecewiseLinear::constant(1.0);
        assert_eq!(
            ls_integral(&one, &Integrator::Linear(id), Interval::whole()),
            Err(Error::NonFiniteIntegral)
        );
    }

    #[test]
    fn integration_by_parts_examples() {
        let id = Integrator::Linear(PiecewiseLinear::identity());
        let cdf = Integrator::Step(StepFn::from_cdf(&two_point()));
        assert!(integrate_by_parts_check(&id, &cdf, 0.0, 4.0).unwrap() < 1e-12);
        let one = Integrator::Linear(PiecewiseLinear::constant(1.0));
        assert!(integrate_by_parts_check(&one, &cdf, -1.0, 2.0).unwrap() < 1e-12);
        assert!(integrate_by_parts_check(&id, &id, 0.0, 1.0).unwrap() < 1e-12);
        assert_eq!(
            integrate_by_parts_check(&cdf, &id, 0.0, 1.0),
            Err(Error::ContinuityMismatch("U must be left-continuous"))
        );
    }

    #[test]
    fn change_of_variables_examples() {
        let f = DiscreteCdf::from_atoms([(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let id = PiecewiseLinear::identity();
        let unit = PiecewiseLinear::unit_identity();
        let (l, r) = utility_against_distorted(&id, &unit, &f).unwrap();
        assert_eq!((l, r), (0.5, 0.5));
        let sq = PiecewiseLinear::new(vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]).unwrap();
        let (l, r) = utility_against_distorted(&id, &sq, &f).unwrap();
        assert_eq!((l, r), (0.75, 0.75));
        let g = two_point();
        let cut = id.min_with(2.0);
        let res = change_of_variables_check(&cut, &unit, &g, ChangeOfVariables::Cv3).unwrap();
        assert!(res < 1e-12);
    }

    #[test]
    fn anchored_quantile_integral_counts_the_top_jump() {
        let f = DiscreteCdf::from_atoms([(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let id = PiecewiseLinear::identity();
        let a = Anchors { lo: 0.0, hi: 10.0 };
        let (l, r) = distortion_against_utility(&PiecewiseLinear::unit_identity(), &id, &f, a).unwrap();
        assert_eq!(l, 9.5);
        assert_eq!(r, 9.5);
    }

    #[test]
    fn flat_tail_allows_whole_line() {
        let u = PiecewiseLinear::with_tails(vec![(0.0, 0.0), (1.0, 1.0)], Tail::Linear, Tail::Flat).unwrap();
        let f = StepFn::from_cdf(&two_point());
        let r = integral(&f, &Integrator::Linear(u), Interval::whole()).unwrap();
        assert_eq!(r, 0.0);
    }
}
