//! Rank-dependent welfare functionals and the perception corollaries.
//!
//! A perception `f0` reweights ranks: RDEU is `int u0(x) df0(F(x))` and the
//! Yaari functional is the special case `u0 = id`. Both are finite sums on
//! discrete laws.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dist::DiscreteCdf;
use crate::distortion::make_standard_pair;
use crate::error::{Error, Result};
use crate::func::{sort_dedup, MonotonePL, PiecewiseLinear, Side, StepFn};
use crate::ordering::{verdict_from, OrderingVerdict, Sense};
use crate::stieltjes::{compose_cdf, compose_quantile, integral, Integrator, Interval};
use crate::Tolerance;

/// Increasing distortion of ranks with `f0(0) = 0` and `f0(1) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Perception {
    f0: MonotonePL,
    label: String,
}

impl Perception {
    /// Validates `f0` on `[0, 1]`; end values within `tol` are snapped.
    pub fn new(f0: PiecewiseLinear, label: impl Into<String>, tol: Tolerance) -> Result<Self> {
        let pair = make_standard_pair(PiecewiseLinear::identity(), f0, tol)?;
        Ok(Self {
            f0: pair.v0().clone(),
            label: label.into(),
        })
    }

    /// The identity perception, which turns RDEU into expected utility.
    pub fn identity() -> Self {
        Self::new(PiecewiseLinear::unit_identity(), "identity", Tolerance::DEFAULT).expect("identity is a perception")
    }

    /// The rank distortion.
    pub fn f0(&self) -> &MonotonePL {
        &self.f0
    }

    /// Label.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// `a -> 1 - f0(1 - a)`.
    pub fn dual(&self) -> PiecewiseLinear {
        self.f0.reflect_unit()
    }
}

/// `int u0(x) df0(F(x))`.
pub fn rdeu(u0: &PiecewiseLinear, f0: &Perception, f: &DiscreteCdf) -> Result<f64> {
    integral(u0, &Integrator::Step(compose_cdf(f0.f0(), f)), Interval::whole())
}

/// `int x df0(F(x))`, computed on the cdf side.
pub fn yaari_cdf_form(f0: &Perception, f: &DiscreteCdf) -> Result<f64> {
    rdeu(&PiecewiseLinear::identity(), f0, f)
}

/// `int_0^1 F^{-1}(a) df0(a)`.
pub fn yaari_quantile_form(f0: &Perception, f: &DiscreteCdf) -> Result<f64> {
    let q = compose_quantile(&PiecewiseLinear::identity(), f, None);
    integral(&q, &Integrator::Linear(f0.f0().as_pl().clone()), Interval::new(0.0, 1.0))
}

/// `-int x dv0(1 - F(x))` with `v0(a) = 1 - f0(1 - a)`.
pub fn yaari_survival_form(f0: &Perception, f: &DiscreteCdf) -> Result<f64> {
    let v0 = f0.dual();
    let values = f
        .atoms()
        .iter()
        .zip(f.levels())
        .map(|(a, &level)| (a.location, v0.eval(1.0 - level)))
        .collect();
    let g = StepFn::from_values(v0.eval(1.0), values, Side::Right)?;
    Ok(-integral(&PiecewiseLinear::identity(), &Integrator::Step(g), Interval::whole())?)
}

/// Yaari welfare `W(F)`.
///
/// Computed on both the cdf side and the quantile side; a disagreement
/// beyond rounding is reported as [`Error::InternalIdentityViolation`].
pub fn yaari(f0: &Perception, f: &DiscreteCdf) -> Result<f64> {
    let lhs = yaari_cdf_form(f0, f)?;
    let rhs = yaari_quantile_form(f0, f)?;
    let s = f.support();
    let scale = 1.0 + s.min_loc.abs().max(s.max_loc.abs());
    if (lhs - rhs).abs() > 1e-9 * scale {
        return Err(Error::InternalIdentityViolation { lhs, rhs });
    }
    Ok(lhs)
}

fn check_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() || rho <= 1.0 {
        return Err(Error::RhoOutOfRange(rho));
    }
    Ok(())
}

/// Piecewise-linear interpolation of `p^rho` on `grid_size` uniform knots.
pub fn s_gini_perception(rho: f64, grid_size: usize) -> Result<Perception> {
    check_rho(rho)?;
    if grid_size < 2 {
        return Err(Error::GridTooSmall(grid_size));
    }
    let last = (grid_size - 1) as f64;
    let knots = (0..grid_size)
        .map(|i| {
            let p = i as f64 / last;
            (p, libm::pow(p, rho))
        })
        .collect();
    Perception::new(PiecewiseLinear::new(knots)?, "s-gini", Tolerance::DEFAULT)
}

/// Largest gap between `p^rho` and its interpolant on `grid_size` knots.
pub fn s_gini_grid_error(rho: f64, grid_size: usize) -> Result<f64> {
    check_rho(rho)?;
    if grid_size < 2 {
        return Err(Error::GridTooSmall(grid_size));
    }
    let last = (grid_size - 1) as f64;
    let mut worst: f64 = 0.0;
    for i in 0..grid_size - 1 {
        let (a, b) = (i as f64 / last, (i + 1) as f64 / last);
        let (fa, fb) = (libm::pow(a, rho), libm::pow(b, rho));
        let slope = (fb - fa) / (b - a);
        // The chord is farthest from the convex curve where the tangent is parallel.
        let t = libm::pow(slope / rho, 1.0 / (rho - 1.0)).clamp(a, b);
        worst = worst.max(fa + slope * (t - a) - libm::pow(t, rho));
    }
    Ok(worst)
}

/// A welfare value with a bound on its interpolation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approximate {
    /// Value under the interpolated perception.
    pub value: f64,
    /// Bound on the distance to the value under the exact perception.
    pub error_bound: f64,
}

/// S-Gini welfare under the interpolated `p^rho`.
pub fn s_gini(rho: f64, grid_size: usize, f: &DiscreteCdf) -> Result<Approximate> {
    let p = s_gini_perception(rho, grid_size)?;
    let err = s_gini_grid_error(rho, grid_size)?;
    let s = f.support();
    Ok(Approximate {
        value: yaari(&p, f)?,
        error_bound: err * (s.max_loc - s.min_loc),
    })
}

/// Derived index `W_2(F) / mean(F) - 1`, where `W_2` is the Yaari welfare
/// under `p^2`, evaluated exactly at the cumulative levels.
///
/// Needs a nonnegative support and a positive mean.
pub fn gini(f: &DiscreteCdf) -> Result<f64> {
    let mean = f.mean();
    let min = f.support().min_loc;
    if mean.is_nan() || mean <= 0.0 || min < 0.0 {
        return Err(Error::GiniUndefined { mean, min });
    }
    let mut prev = 0.0;
    let mut w = 0.0;
    for (a, &level) in f.atoms().iter().zip(f.levels()) {
        w += a.location * (level * level - prev * prev);
        prev = level;
    }
    Ok(w / mean - 1.0)
}

fn atom_cuts(f1: &DiscreteCdf, f2: &DiscreteCdf, extra: &PiecewiseLinear) -> Vec<f64> {
    let mut v: Vec<f64> = f1.locations().chain(f2.locations()).chain(extra.knot_xs()).collect();
    sort_dedup(&mut v);
    v
}

fn rank_cuts(f1: &DiscreteCdf, f2: &DiscreteCdf, f0: &Perception) -> Vec<f64> {
    let mut v: Vec<f64> = f1
        .levels()
        .iter()
        .chain(f2.levels())
        .copied()
        .chain(f0.f0().knot_xs())
        .filter(|&p| p > 0.0 && p <= 1.0)
        .collect();
    sort_dedup(&mut v);
    v
}

/// Verdicts on the two statements of a perception corollary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorollaryVerdict {
    /// Utility-side statement.
    pub utility_side: OrderingVerdict,
    /// Perception-side statement.
    pub perception_side: OrderingVerdict,
}

impl CorollaryVerdict {
    /// Both truth values.
    pub fn holds(&self) -> (bool, bool) {
        (self.utility_side.holds, self.perception_side.holds)
    }
}

/// Decides, for risk-averse utilities and perceptions at least as
/// inequality-averse as `f0`:
///
/// - `int u df0(F1) <= int u df0(F2)` for all increasing concave `u`, over
///   the rays `min(x, c)`;
/// - `int_0^1 F1^{-1} df <= int_0^1 F2^{-1} df` for all increasing `f` that
///   are concave transforms of `f0`, over the rays `f0(min(., p))`.
pub fn corollary1_check(f0: &Perception, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Result<CorollaryVerdict> {
    let id = PiecewiseLinear::identity();
    let (g1, g2) = (
        Integrator::Step(compose_cdf(f0.f0(), f1)),
        Integrator::Step(compose_cdf(f0.f0(), f2)),
    );
    let mut pts = Vec::new();
    for c in atom_cuts(f1, f2, &PiecewiseLinear::constant(0.0)) {
        let u = id.min_with(c);
        pts.push((c, integral(&u, &g1, Interval::whole())?, integral(&u, &g2, Interval::whole())?));
    }
    let utility_side = verdict_from("S1", Sense::Le, pts, tol);
    let (q1, q2) = (compose_quantile(&id, f1, None), compose_quantile(&id, f2, None));
    let unit = Interval::new(0.0, 1.0);
    let mut pts = Vec::new();
    for p in rank_cuts(f1, f2, f0) {
        let ray = Integrator::Linear(f0.f0().min_with(p));
        pts.push((p, integral(&q1, &ray, unit)?, integral(&q2, &ray, unit)?));
    }
    let perception_side = verdict_from("S2", Sense::Le, pts, tol);
    Ok(CorollaryVerdict {
        utility_side,
        perception_side,
    })
}

/// Decides, for a base utility `u0` and perception `f0`:
///
/// - `int u df0(F1) <= int u df0(F2)` for all increasing `u0`-concave `u`,
///   over the rays `u0(min(., c))`;
/// - `int u0 df(F1) <= int u0 df(F2)` for all increasing `f` that are
///   concave transforms of `f0`, over the rays `f0(min(., p))`.
pub fn corollary2_check(
    u0: &MonotonePL,
    f0: &Perception,
    f1: &DiscreteCdf,
    f2: &DiscreteCdf,
    tol: Tolerance,
) -> Result<CorollaryVerdict> {
    let (g1, g2) = (
        Integrator::Step(compose_cdf(f0.f0(), f1)),
        Integrator::Step(compose_cdf(f0.f0(), f2)),
    );
    let mut pts = Vec::new();
    for c in atom_cuts(f1, f2, u0) {
        let u = u0.min_with(c);
        pts.push((c, integral(&u, &g1, Interval::whole())?, integral(&u, &g2, Interval::whole())?));
    }
    let utility_side = verdict_from("S3", Sense::Le, pts, tol);
    let mut pts = Vec::new();
    for p in rank_cuts(f1, f2, f0) {
        let f = f0.f0().min_with(p);
        let lhs = integral(u0.as_pl(), &Integrator::Step(compose_cdf(&f, f1)), Interval::whole())?;
        let rhs = integral(u0.as_pl(), &Integrator::Step(compose_cdf(&f, f2)), Interval::whole())?;
        pts.push((p, lhs, rhs));
    }
    let perception_side = verdict_from("S4", Sense::Le, pts, tol);
    Ok(CorollaryVerdict {
        utility_side,
        perception_side,
    })
}
