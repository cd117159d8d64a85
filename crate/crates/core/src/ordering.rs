//! Deciding the upper, lower and double orderings.
//!
//! Each "for all u in the class" statement reduces to its extreme rays, and
//! the cumulative gaps between the two sides are piecewise linear in `u0`
//! (or `v0`) between merged breakpoints. The decisions therefore sweep the
//! breakpoints once and take the worst value.

use alloc::vec::Vec;
use core::str::FromStr;

use crate::dist::DiscreteCdf;
use crate::distortion::StandardPair;
use crate::error::{Error, Result};
use crate::func::{sort_dedup, Combination};
use crate::stieltjes::{compose_cdf, compose_quantile, integral, Integrator, Interval};
use crate::Tolerance;

/// Point where an inequality was evaluated, with both sides.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    /// Cut `c` or level `p`.
    pub at: f64,
    /// Side belonging to the first distribution.
    pub lhs: f64,
    /// Side belonging to the second distribution.
    pub rhs: f64,
}

/// Outcome of an ordering decision.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderingVerdict {
    /// Whether the ordering holds within tolerance.
    pub holds: bool,
    /// Clause that was evaluated, e.g. `T1.i`.
    pub statement: &'static str,
    /// Worst point, present even when the ordering holds.
    pub witness: Option<Witness>,
    /// Slack at the worst point; negative means violated.
    pub margin: f64,
}

impl OrderingVerdict {
    fn trivially_true(statement: &'static str) -> Self {
        Self {
            holds: true,
            statement,
            witness: None,
            margin: f64::INFINITY,
        }
    }
}

/// Whether an inequality reads `lhs >= rhs` or `lhs <= rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Sense {
    Ge,
    Le,
}

impl Sense {
    pub(crate) fn slack(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Sense::Ge => lhs - rhs,
            Sense::Le => rhs - lhs,
        }
    }
}

/// Builds a verdict from evaluated points, keeping the one with least slack.
pub(crate) fn verdict_from<I>(statement: &'static str, sense: Sense, points: I, tol: Tolerance) -> OrderingVerdict
where
    I: IntoIterator<Item = (f64, f64, f64)>,
{
    let mut best: Option<(Witness, f64)> = None;
    for (at, lhs, rhs) in points {
        let s = sense.slack(lhs, rhs);
        if best.as_ref().is_none_or(|b| s < b.1) {
            best = Some((Witness { at, lhs, rhs }, s));
        }
    }
    match best {
        None => OrderingVerdict::trivially_true(statement),
        Some((w, s)) => OrderingVerdict {
            holds: s >= -tol.eps(),
            statement,
            witness: Some(w),
            margin: s,
        },
    }
}

/// Atom locations of both cdfs and the knots of `u0`, sorted.
pub fn cdf_cuts(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf) -> Vec<f64> {
    let mut v: Vec<f64> = f1.locations().chain(f2.locations()).chain(pair.u0().knot_xs()).collect();
    sort_dedup(&mut v);
    v
}

/// Cumulative levels of both cdfs, knots of `v0` in (0, 1], and 1, sorted.
pub fn quantile_levels(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf) -> Vec<f64> {
    let mut v: Vec<f64> = f1
        .levels()
        .iter()
        .chain(f2.levels())
        .copied()
        .chain(pair.v0().knot_xs())
        .filter(|&p| p > 0.0 && p <= 1.0)
        .collect();
    v.push(1.0);
    sort_dedup(&mut v);
    v
}

/// `(c, int_{-inf}^c v0(F1) du0, int_{-inf}^c v0(F2) du0)` at every cut.
pub(crate) fn cdf_sweep(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf) -> Vec<(f64, f64, f64)> {
    let u0 = pair.u0();
    let v0 = pair.v0();
    let cuts = cdf_cuts(pair, f1, f2);
    let mut out = Vec::with_capacity(cuts.len());
    let (mut a1, mut a2) = (0.0, 0.0);
    out.push((cuts[0], a1, a2));
    for w in cuts.windows(2) {
        let du = u0.eval(w[1]) - u0.eval(w[0]);
        a1 += v0.eval(f1.cdf(w[0])) * du;
        a2 += v0.eval(f2.cdf(w[0])) * du;
        out.push((w[1], a1, a2));
    }
    out
}

/// `(p, int_0^p u0(F1^{-1}) dv0, int_0^p u0(F2^{-1}) dv0)` at every level.
pub(crate) fn quantile_sweep(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf) -> Vec<(f64, f64, f64)> {
    let u0 = pair.u0();
    let v0 = pair.v0();
    let levels = quantile_levels(pair, f1, f2);
    let mut out = Vec::with_capacity(levels.len());
    let (mut b1, mut b2) = (0.0, 0.0);
    let mut prev = 0.0;
    for &p in &levels {
        let dv = v0.eval(p) - v0.eval(prev);
        b1 += u0.eval(f1.quantile_closed(p)) * dv;
        b2 += u0.eval(f2.quantile_closed(p)) * dv;
        out.push((p, b1, b2));
        prev = p;
    }
    out
}

/// Decides `int_{-inf}^c v0(F1) du0 >= int_{-inf}^c v0(F2) du0` for every `c`.
pub fn lemma1_cdf_side(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> OrderingVerdict {
    verdict_from("L1.i", Sense::Ge, cdf_sweep(pair, f1, f2), tol)
}

/// Decides `int_0^p u0(F1^{-1}) dv0 <= int_0^p u0(F2^{-1}) dv0` for every `p`.
pub fn lemma1_quantile_side(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> OrderingVerdict {
    verdict_from("L1.ii", Sense::Le, quantile_sweep(pair, f1, f2), tol)
}

/// `int_{-inf}^c [v0(F1) - v0(F2)] du0`, integrated directly.
pub fn cdf_gap(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, c: f64) -> Result<f64> {
    let v0 = pair.v0().as_pl();
    let (g1, g2) = (compose_cdf(v0, f1), compose_cdf(v0, f2));
    let diff = Combination::difference(&g1, &g2);
    integral(&diff, &Integrator::Linear(pair.u0().as_pl().clone()), Interval::up_to(c))
}

/// `int_0^p [u0(F1^{-1}) - u0(F2^{-1})] dv0`, integrated directly.
pub fn quantile_gap(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, p: f64) -> Result<f64> {
    let u0 = pair.u0().as_pl();
    let (g1, g2) = (compose_quantile(u0, f1, None), compose_quantile(u0, f2, None));
    let diff = Combination::difference(&g1, &g2);
    integral(&diff, &Integrator::Linear(pair.v0().as_pl().clone()), Interval::new(0.0, p))
}

/// Upper ordering `F1 ≺^(u0,v0) F2`.
///
/// Holds iff `int v0(F1) du >= int v0(F2) du` for every increasing
/// `u0`-concave `u`; decided through the cumulative cdf-side gap.
pub fn upper_ordering(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> OrderingVerdict {
    verdict_from("T1.i", Sense::Ge, cdf_sweep(pair, f1, f2), tol)
}

/// Lower ordering `F1 ≺_(u0,v0) F2`, decided as the upper ordering of the
/// reflected pair on the negated distributions, taken in reverse order:
/// `F(-X2) ≺^(~u0,~v0) F(-X1)`. The witness is mapped back to the original
/// axis.
pub fn lower_ordering(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> OrderingVerdict {
    let mut v = upper_ordering(&pair.tilde(), &f2.negate(), &f1.negate(), tol);
    v.statement = "T2.i'";
    if let Some(w) = v.witness.as_mut() {
        w.at = -w.at;
    }
    v
}

/// Lower ordering decided from its definition: for each convex ray
/// `u = u0(max(., c)) - u0(c)`,
/// `-int (1 - v0(F1)) du >= -int (1 - v0(F2)) du`.
pub fn lower_ordering_direct(
    pair: &StandardPair,
    f1: &DiscreteCdf,
    f2: &DiscreteCdf,
    tol: Tolerance,
) -> Result<OrderingVerdict> {
    let v0 = pair.v0().as_pl();
    let s1 = compose_cdf(v0, f1);
    let s2 = compose_cdf(v0, f2);
    let g1 = Combination::constant(1.0).with(-1.0, &s1);
    let g2 = Combination::constant(1.0).with(-1.0, &s2);
    let mut pts = Vec::new();
    for c in cdf_cuts(pair, f1, f2) {
        let ray = Integrator::Linear(pair.u0().max_with(c).offset(-pair.u0().eval(c)));
        let lhs = -integral(&g1, &ray, Interval::whole())?;
        let rhs = -integral(&g2, &ray, Interval::whole())?;
        pts.push((c, lhs, rhs));
    }
    Ok(verdict_from("LOWER.direct", Sense::Ge, pts, tol))
}

/// Double ordering: `F1 ≺^(u0,v0) F2` and `F2 ≺_(u0,v0) F1`.
pub fn double_ordering(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> OrderingVerdict {
    let up = upper_ordering(pair, f1, f2, tol);
    let low = lower_ordering(pair, f2, f1, tol);
    let worst = if !up.holds {
        up
    } else if !low.holds {
        low
    } else if up.margin <= low.margin {
        up
    } else {
        low
    };
    OrderingVerdict {
        holds: up.holds && low.holds,
        statement: "T3.i''",
        witness: worst.witness,
        margin: up.margin.min(low.margin),
    }
}

/// Sign-free characterization of the double ordering:
/// `int v0(F1) du >= int v0(F2) du` for every `u0`-concave `u`, not
/// necessarily increasing. Rays are `u0(min(., c))` and `±u0`.
pub fn lemma2_check(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Result<OrderingVerdict> {
    let v0 = pair.v0().as_pl();
    let s1 = compose_cdf(v0, f1);
    let s2 = compose_cdf(v0, f2);
    let cuts = cdf_cuts(pair, f1, f2);
    let top = cuts[cuts.len() - 1];
    let mut pts = Vec::new();
    for &c in &cuts {
        let ray = Integrator::Linear(pair.u0().min_with(c));
        pts.push((c, integral(&s1, &ray, Interval::whole())?, integral(&s2, &ray, Interval::whole())?));
    }
    for sign in [1.0, -1.0] {
        let ray = Integrator::Linear(pair.u0().scale(sign));
        let lhs = integral(&s1, &ray, Interval::up_to(top))?;
        let rhs = integral(&s2, &ray, Interval::up_to(top))?;
        pts.push((sign * f64::INFINITY, lhs, rhs));
    }
    Ok(verdict_from("L2", Sense::Ge, pts, tol))
}

/// Crossing direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Direction {
    /// `F1 < F2` before, `F1 > F2` after.
    Up,
    /// `F1 > F2` before, `F1 < F2` after.
    Down,
}

/// A crossing interval `[lo, hi]` of two cdfs.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CrossingInterval {
    /// Left end.
    pub lo: f64,
    /// Right end.
    pub hi: f64,
    /// Up or down.
    pub direction: Direction,
    /// `F1 - F2` just left of `lo`.
    pub before: f64,
    /// `F1 - F2` just right of `hi`.
    pub after: f64,
}

/// Crossing intervals of `F1` and `F2`, in increasing order.
///
/// Differences within `tol` count as equality.
pub fn find_crossings(f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> Vec<CrossingInterval> {
    let mut pts: Vec<f64> = f1.locations().chain(f2.locations()).collect();
    sort_dedup(&mut pts);
    let mut out = Vec::new();
    // (index of last signed segment, its difference)
    let mut last: Option<(usize, f64)> = None;
    for (j, &t) in pts.iter().enumerate() {
        let d = f1.cdf(t) - f2.cdf(t);
        if d.abs() <= tol.eps() {
            continue;
        }
        if let Some((s, ds)) = last {
            if ds.signum() != d.signum() {
                out.push(CrossingInterval {
                    lo: pts[s + 1],
                    hi: t,
                    direction: if ds < 0.0 { Direction::Up } else { Direction::Down },
                    before: ds,
                    after: d,
                });
            }
        }
        last = Some((j, d));
    }
    out
}

/// Level range paired with a crossing point `x0`: `[F2(x0-), F2(x0)]` for an
/// up-crossing, `[F1(x0-), F1(x0)]` for a down-crossing.
pub fn crossing_level_range(c: &CrossingInterval, x0: f64, f1: &DiscreteCdf, f2: &DiscreteCdf) -> (f64, f64) {
    let f = match c.direction {
        Direction::Up => f2,
        Direction::Down => f1,
    };
    (f.cdf_left(x0), f.cdf(x0))
}

/// Named classical orderings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ClassicOrder {
    /// First-order: `F1 >= F2` everywhere.
    Fsd,
    /// Second-order: `int_{-inf}^x F1 >= int_{-inf}^x F2`.
    Ssd,
    /// Increasing concave order.
    Icv,
    /// Increasing convex order.
    Icx,
    /// `int_0^p F1^{-1} <= int_0^p F2^{-1}`.
    LorenzWeak,
    /// `int_p^1 F1^{-1} <= int_p^1 F2^{-1}`.
    LorenzUpper,
}

impl FromStr for ClassicOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let table = [
            ("fsd", ClassicOrder::Fsd),
            ("ssd", ClassicOrder::Ssd),
            ("icv", ClassicOrder::Icv),
            ("icx", ClassicOrder::Icx),
            ("lorenz_weak", ClassicOrder::LorenzWeak),
            ("lorenz-weak", ClassicOrder::LorenzWeak),
            ("lorenz_upper", ClassicOrder::LorenzUpper),
            ("lorenz-upper", ClassicOrder::LorenzUpper),
        ];
        table
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(s))
            .map(|t| t.1)
            .ok_or(Error::UnknownName)
    }
}

/// Decides a named classical ordering.
pub fn classic(name: ClassicOrder, f1: &DiscreteCdf, f2: &DiscreteCdf, tol: Tolerance) -> OrderingVerdict {
    let mut pts: Vec<f64> = f1.locations().chain(f2.locations()).collect();
    sort_dedup(&mut pts);
    match name {
        ClassicOrder::Fsd => verdict_from(
            "FSD",
            Sense::Ge,
            pts.iter().map(|&x| (x, f1.cdf(x), f2.cdf(x))),
            tol,
        ),
        ClassicOrder::Ssd => {
            let mut rows = Vec::with_capacity(pts.len());
            let (mut a1, mut a2) = (0.0, 0.0);
            rows.push((pts[0], 0.0, 0.0));
            for w in pts.windows(2) {
                let dx = w[1] - w[0];
                a1 += f1.cdf(w[0]) * dx;
                a2 += f2.cdf(w[0]) * dx;
                rows.push((w[1], a1, a2));
            }
            verdict_from("SSD", Sense::Ge, rows, tol)
        }
        ClassicOrder::Icv => {
            let mut v = upper_ordering(&StandardPair::identity(), f1, f2, tol);
            v.statement = "ICV";
            v
        }
        ClassicOrder::Icx => {
            let mut v = lower_ordering(&StandardPair::identity(), f1, f2, tol);
            v.statement = "ICX";
            v
        }
        ClassicOrder::LorenzWeak => {
            let (q1, q2) = (f1.quantile_fn(), f2.quantile_fn());
            verdict_from(
                "LORENZ_WEAK",
                Sense::Le,
                merged_levels(f1, f2).map(|p| (p, q1.integral_to(p), q2.integral_to(p))),
                tol,
            )
        }
        ClassicOrder::LorenzUpper => {
            let (q1, q2) = (f1.quantile_fn(), f2.quantile_fn());
            let (t1, t2) = (q1.integral_to(1.0), q2.integral_to(1.0));
            verdict_from(
                "LORENZ_UPPER",
                Sense::Le,
                core::iter::once(0.0)
                    .chain(merged_levels(f1, f2))
                    .map(|p| (p, t1 - q1.integral_to(p), t2 - q2.integral_to(p))),
                tol,
            )
        }
    }
}

fn merged_levels(f1: &DiscreteCdf, f2: &DiscreteCdf) -> impl Iterator<Item = f64> {
    let mut v: Vec<f64> = f1.levels().iter().chain(f2.levels()).copied().collect();
    sort_dedup(&mut v);
    v.into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::PiecewiseLinear;

    fn spread() -> DiscreteCdf {
        DiscreteCdf::from_atoms([(0.0, 0.5), (2.0, 0.5)]).unwrap()
    }
    fn one() -> DiscreteCdf {
        DiscreteCdf::point_mass(1.0).unwrap()
    }
    fn squared_pair() -> StandardPair {
        let xs: alloc::vec::Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        StandardPair::new(
            PiecewiseLinear::identity(),
            PiecewiseLinear::from_fn(&xs, |a| a * a).unwrap(),
        )
        .unwrap()
    }
    const T: Tolerance = Tolerance::DEFAULT;

    #[test]
    fn crossing_examples() {
        let c = find_crossings(&spread(), &one(), T);
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].lo, c[0].hi, c[0].direction), (1.0, 1.0, Direction::Down));
        assert!(find_crossings(&spread(), &spread(), T).is_empty());
        let c = find_crossings(&one(), &spread(), T);
        assert_eq!((c[0].lo, c[0].hi, c[0].direction), (1.0, 1.0, Direction::Up));
    }

    #[test]
    fn crossing_over_a_plateau() {
        let f1 = DiscreteCdf::from_atoms([(0.0, 0.25), (1.0, 0.25), (3.0, 0.5)]).unwrap();
        let f2 = DiscreteCdf::from_atoms([(1.0, 0.5), (2.0, 0.25), (3.0, 0.25)]).unwrap();
        let c = find_crossings(&f1, &f2, T);
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].lo, c[0].hi, c[0].direction), (1.0, 2.0, Direction::Down));
    }

    #[test]
    fn lemma1_examples() {
        let id = StandardPair::identity();
        let v = lemma1_cdf_side(&id, &spread(), &one(), T);
        assert!(v.holds);
        let w = lemma1_cdf_side(&id, &one(), &spread(), T);
        assert!(!w.holds);
        assert_eq!(w.witness.map(|w| (w.at, w.lhs - w.rhs)), Some((1.0, -0.5)));
        assert!(lemma1_cdf_side(&id, &one(), &one(), T).holds);
        let q = lemma1_quantile_side(&id, &spread(), &one(), T);
        assert!(q.holds);
        let q = lemma1_quantile_side(&id, &one(), &spread(), T);
        assert!(!q.holds);
        assert_eq!(q.witness.unwrap().at, 0.5);
    }

    #[test]
    fn direct_gaps_match_sweeps() {
        let id = squared_pair();
        for (c, a1, a2) in cdf_sweep(&id, &spread(), &one()) {
            assert!((cdf_gap(&id, &spread(), &one(), c).unwrap() - (a1 - a2)).abs() < 1e-12);
        }
        for (p, b1, b2) in quantile_sweep(&id, &spread(), &one()) {
            assert!((quantile_gap(&id, &spread(), &one(), p).unwrap() - (b1 - b2)).abs() < 1e-12);
        }
    }

    #[test]
    fn upper_examples() {
        assert!(upper_ordering(&StandardPair::identity(), &spread(), &one(), T).holds);
        // Under v0 = a^2 the spread law weighs its lower atom by 1/4 only:
        // int_(-inf,2] v0(F) dx = 0.25 * 2 = 0.5 against 1 for the point mass.
        let sq = upper_ordering(&squared_pair(), &spread(), &one(), T);
        assert!(!sq.holds);
        assert!((cdf_gap(&squared_pair(), &spread(), &one(), 2.0).unwrap() + 0.5).abs() < 1e-12);
        let five = DiscreteCdf::point_mass(5.0).unwrap();
        assert!(!upper_ordering(&squared_pair(), &five, &one(), T).holds);
        assert!(!upper_ordering(&StandardPair::identity(), &five, &one(), T).holds);
    }

    #[test]
    fn lower_examples() {
        let id = StandardPair::identity();
        assert!(lower_ordering(&id, &one(), &spread(), T).holds);
        assert!(lower_ordering(&id, &spread(), &spread(), T).holds);
        let five = DiscreteCdf::point_mass(5.0).unwrap();
        assert!(!lower_ordering(&id, &five, &one(), T).holds);
        assert!(lower_ordering_direct(&id, &one(), &spread(), T).unwrap().holds);
        assert!(!lower_ordering_direct(&id, &five, &one(), T).unwrap().holds);
    }

    #[test]
    fn double_examples() {
        let id = StandardPair::identity();
        assert!(double_ordering(&id, &spread(), &one(), T).holds);
        let zero = DiscreteCdf::point_mass(0.0).unwrap();
        assert!(!double_ordering(&id, &zero, &one(), T).holds);
        assert!(double_ordering(&id, &one(), &one(), T).holds);
        assert!(lemma2_check(&id, &spread(), &one(), T).unwrap().holds);
        assert!(!lemma2_check(&id, &zero, &one(), T).unwrap().holds);
    }

    #[test]
    fn classic_examples() {
        assert!(classic(ClassicOrder::Ssd, &spread(), &one(), T).holds);
        let two = DiscreteCdf::point_mass(2.0).unwrap();
        assert!(classic(ClassicOrder::Fsd, &one(), &two, T).holds);
        assert!(!classic(ClassicOrder::Fsd, &two, &one(), T).holds);
        let v = classic(ClassicOrder::LorenzUpper, &one(), &spread(), T);
        assert!(v.holds);
        assert!(classic(ClassicOrder::LorenzWeak, &spread(), &one(), T).holds);
        assert!(classic(ClassicOrder::Icv, &spread(), &one(), T).holds);
        assert!(classic(ClassicOrder::Icx, &one(), &spread(), T).holds);
    }

    #[test]
    fn names_parse_case_insensitively() {
        assert_eq!("ssd".parse::<ClassicOrder>(), Ok(ClassicOrder::Ssd));
        assert_eq!("LORENZ_UPPER".parse::<ClassicOrder>(), Ok(ClassicOrder::LorenzUpper));
        assert_eq!("nope".parse::<ClassicOrder>(), Err(Error::UnknownName));
    }
}
