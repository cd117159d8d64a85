//! One evaluator per clause. Each reduces its "for all" quantifier to the
//! extreme rays of its own class and integrates every ray directly.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ClauseVerdict;
use crate::dist::DiscreteCdf;
use crate::distortion::StandardPair;
use crate::error::Result;
use crate::func::{Combination, MonotonePL, PiecewiseLinear};
use crate::majorize::{as_uniform_cdf, majorizes, universal_statements, MajorizationKind, RealVector};
use crate::ordering::{
    cdf_cuts, cdf_gap, classic, crossing_level_range, double_ordering, find_crossings, lemma1_cdf_side,
    lemma1_quantile_side, lemma2_check, lower_ordering, lower_ordering_direct, quantile_gap, quantile_levels,
    upper_ordering, verdict_from, ClassicOrder, OrderingVerdict, Sense,
};
use crate::stieltjes::{compose_cdf, compose_quantile, integral, Anchors, Integrator, Interval};
use crate::welfare::{corollary1_check, corollary2_check, Perception};
use crate::Tolerance;

impl From<OrderingVerdict> for ClauseVerdict {
    fn from(v: OrderingVerdict) -> Self {
        Self {
            name: v.statement.to_string(),
            holds: v.holds,
            margin: v.margin,
        }
    }
}

fn named(name: &str, v: OrderingVerdict) -> ClauseVerdict {
    ClauseVerdict {
        name: name.to_string(),
        holds: v.holds,
        margin: v.margin,
    }
}

fn anchors(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf) -> Anchors {
    let xs: Vec<f64> = pair.u0().knot_xs().collect();
    Anchors::spanning(&[f1, f2], &xs)
}

fn convex_levels(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf) -> Vec<f64> {
    let mut v = alloc::vec![0.0];
    v.extend(quantile_levels(pair, f1, f2));
    v
}

fn u_ray(pair: &StandardPair, c: f64) -> PiecewiseLinear {
    pair.u0().min_with(c)
}

fn u_convex_ray(pair: &StandardPair, c: f64) -> PiecewiseLinear {
    pair.u0().max_with(c).offset(-pair.u0().eval(c))
}

fn v_ray(pair: &StandardPair, p: f64) -> PiecewiseLinear {
    pair.v0().min_with(p)
}

fn v_convex_ray(pair: &StandardPair, p: f64) -> PiecewiseLinear {
    pair.v0().max_with(p).offset(-pair.v0().eval(p))
}

/// `int_0^1 u0(F^{-1}) dv`.
fn quantile_utility(u0: &PiecewiseLinear, v: &PiecewiseLinear, f: &DiscreteCdf) -> Result<f64> {
    let q = compose_quantile(u0, f, None);
    integral(&q, &Integrator::Linear(v.clone()), Interval::new(0.0, 1.0))
}

/// `int u dv0(F)` over the line.
fn distorted_utility(u: &PiecewiseLinear, v0: &PiecewiseLinear, f: &DiscreteCdf) -> Result<f64> {
    integral(u, &Integrator::Step(compose_cdf(v0, f)), Interval::whole())
}

/// `int_[0,1] v du(F^{-1})`, anchored.
fn quantile_distortion(v: &dyn crate::func::Integrand, u: &PiecewiseLinear, f: &DiscreteCdf, a: Anchors) -> Result<f64> {
    integral(v, &Integrator::Step(compose_quantile(u, f, Some(a))), Interval::whole())
}

/// `int_(lo,hi] v(F) du`.
fn cdf_distortion(v: &PiecewiseLinear, u: &PiecewiseLinear, f: &DiscreteCdf, a: Anchors) -> Result<f64> {
    integral(&compose_cdf(v, f), &Integrator::Linear(u.clone()), a.window())
}

type Rays = Vec<(f64, PiecewiseLinear)>;

fn evaluate<F>(name: &'static str, sense: Sense, rays: Rays, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance, side: F) -> Result<ClauseVerdict>
where
    F: Fn(&PiecewiseLinear, &DiscreteCdf) -> Result<f64>,
{
    let mut pts = Vec::with_capacity(rays.len());
    for (at, r) in rays {
        pts.push((at, side(&r, f1)?, side(&r, f2)?));
    }
    Ok(verdict_from(name, sense, pts, tol).into())
}

fn concave_u_rays(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf) -> Rays {
    cdf_cuts(pair, f1, f2).into_iter().map(|c| (c, u_ray(pair, c))).collect()
}

fn concave_v_rays(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf) -> Rays {
    quantile_levels(pair, f1, f2).into_iter().map(|p| (p, v_ray(pair, p))).collect()
}

fn with_signed_base(mut rays: Rays, base: &PiecewiseLinear) -> Rays {
    rays.push((f64::INFINITY, base.clone()));
    rays.push((f64::NEG_INFINITY, base.scale(-1.0)));
    rays
}

/// Clauses (i)-(iv) of the upper-ordering duality.
pub fn theorem1(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Result<Vec<ClauseVerdict>> {
    let u0 = pair.u0().as_pl();
    let v0 = pair.v0().as_pl();
    let a = anchors(pair, f1, f2);
    Ok(alloc::vec![
        upper_ordering(pair, f1, f2, tol).into(),
        evaluate("T1.ii", Sense::Le, concave_v_rays(pair, f1, f2), f1, f2, tol, |v, f| quantile_utility(u0, v, f))?,
        evaluate("T1.iii", Sense::Le, concave_u_rays(pair, f1, f2), f1, f2, tol, |u, f| distorted_utility(u, v0, f))?,
        evaluate("T1.iv", Sense::Ge, concave_v_rays(pair, f1, f2), f1, f2, tol, |v, f| quantile_distortion(v, u0, f, a))?,
    ])
}

/// Clauses (i)*-(iv)*, with (i) as the reference.
pub fn theorem1_star(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Result<Vec<ClauseVerdict>> {
    let u0 = pair.u0().as_pl();
    let v0 = pair.v0().as_pl();
    let a = anchors(pair, f1, f2);
    Ok(alloc::vec![
        upper_ordering(pair, f1, f2, tol).into(),
        evaluate("T1.i*", Sense::Ge, concave_u_rays(pair, f1, f2), f1, f2, tol, |u, f| quantile_distortion(v0, u, f, a))?,
        evaluate("T1.ii*", Sense::Le, concave_v_rays(pair, f1, f2), f1, f2, tol, |v, f| distorted_utility(u0, v, f))?,
        evaluate("T1.iii*", Sense::Le, concave_u_rays(pair, f1, f2), f1, f2, tol, |u, f| quantile_utility(u, v0, f))?,
        evaluate("T1.iv*", Sense::Ge, concave_v_rays(pair, f1, f2), f1, f2, tol, |v, f| cdf_distortion(v, u0, f, a))?,
    ])
}

/// Clauses (i)'-(iv)' of the lower-ordering duality, plus the direct
/// evaluation of the lower ordering from its definition.
pub fn theorem2(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Result<Vec<ClauseVerdict>> {
    let u0 = pair.u0().as_pl();
    let v0 = pair.v0().as_pl();
    let a = anchors(pair, f1, f2);
    let v_rays: Rays = convex_levels(pair, f1, f2).into_iter().map(|p| (p, v_convex_ray(pair, p))).collect();
    let mut u_rays: Rays = cdf_cuts(pair, f1, f2).into_iter().map(|c| (c, u_convex_ray(pair, c))).collect();
    u_rays.push((f64::NEG_INFINITY, u0.clone()));
    let survival = |v: &PiecewiseLinear, f: &DiscreteCdf| {
        let g = Combination::constant(1.0).with(-1.0, v);
        quantile_distortion(&g, u0, f, a).map(|x| -x)
    };
    Ok(alloc::vec![
        lower_ordering(pair, f1, f2, tol).into(),
        lower_ordering_direct(pair, f1, f2, tol)?.into(),
        evaluate("T2.ii'", Sense::Le, v_rays.clone(), f1, f2, tol, |v, f| quantile_utility(u0, v, f))?,
        evaluate("T2.iii'", Sense::Le, u_rays, f1, f2, tol, |u, f| distorted_utility(u, v0, f))?,
        evaluate("T2.iv'", Sense::Ge, v_rays, f1, f2, tol, survival)?,
    ])
}

/// Clauses (i)''-(iv)'' of the double-ordering duality, plus the
/// sign-free characterization.
pub fn theorem3(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Result<Vec<ClauseVerdict>> {
    let u0 = pair.u0().as_pl();
    let v0 = pair.v0().as_pl();
    let a = anchors(pair, f1, f2);
    let v_rays = with_signed_base(concave_v_rays(pair, f1, f2), v0);
    let u_rays = with_signed_base(concave_u_rays(pair, f1, f2), u0);
    Ok(alloc::vec![
        double_ordering(pair, f1, f2, tol).into(),
        lemma2_check(pair, f1, f2, tol)?.into(),
        evaluate("T3.ii''", Sense::Le, v_rays.clone(), f1, f2, tol, |v, f| quantile_utility(u0, v, f))?,
        evaluate("T3.iii''", Sense::Le, u_rays, f1, f2, tol, |u, f| distorted_utility(u, v0, f))?,
        evaluate("T3.iv''", Sense::Ge, v_rays, f1, f2, tol, |v, f| quantile_distortion(v, u0, f, a))?,
    ])
}

/// Cumulative cdf-side and quantile-side criteria, each by a sweep and by
/// direct integration at every breakpoint.
pub fn lemma1(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Result<Vec<ClauseVerdict>> {
    let mut cdf_pts = Vec::new();
    for c in cdf_cuts(pair, f1, f2) {
        cdf_pts.push((c, cdf_gap(pair, f1, f2, c)?, 0.0));
    }
    let mut q_pts = Vec::new();
    for p in quantile_levels(pair, f1, f2) {
        q_pts.push((p, quantile_gap(pair, f1, f2, p)?, 0.0));
    }
    Ok(alloc::vec![
        lemma1_cdf_side(pair, f1, f2, tol).into(),
        lemma1_quantile_side(pair, f1, f2, tol).into(),
        verdict_from("L1.i.direct", Sense::Ge, cdf_pts, tol).into(),
        verdict_from("L1.ii.direct", Sense::Le, q_pts, tol).into(),
    ])
}

/// Local implication at every crossing point, in both directions.
///
/// Each returned clause is one check and must hold. The margin is the
/// distance of the nearer side from its decision boundary.
pub fn lemma3(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Result<Vec<ClauseVerdict>> {
    let eps = tol.eps();
    let mut out = Vec::new();
    for c in find_crossings(f1, f2, tol) {
        for x0 in [c.lo, c.hi] {
            let d = cdf_gap(pair, f1, f2, x0)?;
            let (lo, hi) = crossing_level_range(&c, x0, f1, f2);
            for p in [lo, 0.5 * (lo + hi), hi] {
                let q = quantile_gap(pair, f1, f2, p)?;
                let cdf_ok = d >= -eps;
                let q_ok = q <= eps;
                let mut name = String::from("L3");
                name.push_str(if cdf_ok == q_ok { ".agree" } else { ".disagree" });
                out.push(ClauseVerdict {
                    name,
                    holds: cdf_ok == q_ok,
                    margin: d.abs().min(q.abs()),
                });
            }
        }
    }
    Ok(out)
}

/// Second-order dominance against the weak Lorenz order and the
/// increasing concave order.
pub fn eq1(f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Vec<ClauseVerdict> {
    alloc::vec![
        classic(ClassicOrder::Ssd, f1, f2, tol).into(),
        classic(ClassicOrder::LorenzWeak, f1, f2, tol).into(),
        classic(ClassicOrder::Icv, f1, f2, tol).into(),
    ]
}

/// Both statements of the first perception corollary.
pub fn corollary1(f0: &Perception, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Result<Vec<ClauseVerdict>> {
    let v = corollary1_check(f0, f1, f2, tol)?;
    Ok(alloc::vec![v.utility_side.into(), v.perception_side.into()])
}

/// Both statements of the second perception corollary.
pub fn corollary2(
    u0: &MonotonePL,
    f0: &Perception,
    f1: &DiscreteCdf,
    f2: &DiscreteCdf,
    tol: Tolerance,
) -> Result<Vec<ClauseVerdict>> {
    let v = corollary2_check(u0, f0, f1, f2, tol)?;
    Ok(alloc::vec![v.utility_side.into(), v.perception_side.into()])
}

fn flag(name: &str, holds: bool) -> ClauseVerdict {
    ClauseVerdict {
        name: name.to_string(),
        holds,
        margin: if holds { f64::INFINITY } else { f64::NEG_INFINITY },
    }
}

/// Upper weak majorization, the distributional bridge and the universal
/// sum statements.
pub fn majorization(x: &RealVector, y: &RealVector, k: f64, tol: Tolerance) -> Result<Vec<ClauseVerdict>> {
    let wu = majorizes(x, y, MajorizationKind::WeakUpper, tol)?;
    let bridge = upper_ordering(&StandardPair::identity(), &as_uniform_cdf(x), &as_uniform_cdf(y), tol);
    let s = universal_statements(x, y, k, tol)?;
    Ok(alloc::vec![
        flag("WU", wu.holds),
        named("T1.i(uniform)", bridge),
        flag("SUM.increments", s.increments),
        flag("SUM.weighted", s.weighted),
        flag("SUM.utility", s.utility),
        flag("SUM.distorted", s.distorted),
    ])
}
