//! Standard pairs, relatively concave and convex functions, extreme rays.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::func::{merge_sorted, Continuity, Direction, MonotonePL, PiecewiseLinear, Side, StepFn, Tail};
use crate::Tolerance;

/// A validated base utility `u0` on the line and base distortion `v0` on [0, 1].
///
/// `u0` is increasing. `v0` is increasing with knots inside [0, 1], a knot at
/// each end, `v0(0) = 0` and `v0(1) = 1` exactly.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StandardPair {
    u0: MonotonePL,
    v0: MonotonePL,
}

impl StandardPair {
    /// Validates `(u0, v0)` with the default tolerance.
    pub fn new(u0: PiecewiseLinear, v0: PiecewiseLinear) -> Result<Self> {
        make_standard_pair(u0, v0, Tolerance::DEFAULT)
    }

    /// Identity utility on the line, identity distortion on [0, 1].
    pub fn identity() -> Self {
        Self::new(PiecewiseLinear::identity(), PiecewiseLinear::unit_identity())
            .expect("identity pair is valid")
    }

    /// Base utility.
    pub fn u0(&self) -> &MonotonePL {
        &self.u0
    }

    /// Base distortion.
    pub fn v0(&self) -> &MonotonePL {
        &self.v0
    }

    /// The pair `(x -> -u0(-x), a -> 1 - v0(1 - a))`.
    pub fn tilde(&self) -> Self {
        let u = self.u0.reflect();
        let v = self.v0.reflect_unit();
        Self {
            u0: MonotonePL::increasing(u, Continuity::Left).expect("reflection keeps monotonicity"),
            v0: MonotonePL::increasing(v, Continuity::Right).expect("reflection keeps monotonicity"),
        }
    }
}

/// Validates a standard pair.
///
/// Boundary values of `v0` within `tol` of 0 and 1 are snapped; missing end
/// knots at 0 and 1 are filled in from the flat extension.
pub fn make_standard_pair(u0: PiecewiseLinear, v0: PiecewiseLinear, tol: Tolerance) -> Result<StandardPair> {
    let u0 = MonotonePL::increasing(u0, Continuity::Left)?;
    let eps = tol.eps();
    let mut knots: Vec<(f64, f64)> = v0.knots().to_vec();
    if knots.iter().any(|k| !(0.0..=1.0).contains(&k.0)) {
        return Err(Error::BadBoundary("v0 knots must lie in [0, 1]"));
    }
    if knots[0].0 > 0.0 {
        knots.insert(0, (0.0, knots[0].1));
    }
    if knots[knots.len() - 1].0 < 1.0 {
        let y = knots[knots.len() - 1].1;
        knots.push((1.0, y));
    }
    let n = knots.len();
    if knots[0].1.abs() > eps {
        return Err(Error::BadBoundary("v0(0) must be 0"));
    }
    if (knots[n - 1].1 - 1.0).abs() > eps {
        return Err(Error::BadBoundary("v0(1-) must be 1"));
    }
    knots[0].1 = 0.0;
    knots[n - 1].1 = 1.0;
    let v0 = PiecewiseLinear::new(knots)?;
    let v0 = MonotonePL::increasing(v0, Continuity::Right)?;
    Ok(StandardPair { u0, v0 })
}

/// Whether a generator produces relatively concave or convex functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Non-increasing generator.
    Concave,
    /// Non-decreasing generator.
    Convex,
}

/// Density of a generated function with respect to its base.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// Piecewise-constant density.
    Step(StepFn),
    /// Piecewise-linear density.
    Linear(PiecewiseLinear),
}

impl Generator {
    fn breakpoints(&self) -> Vec<f64> {
        match self {
            Generator::Step(s) => s.jumps().iter().map(|j| j.0).collect(),
            Generator::Linear(p) => p.knot_xs().collect(),
        }
    }

    fn right_limit(&self, x: f64) -> f64 {
        match self {
            Generator::Step(s) => crate::func::Integrand::right_limit(s, x),
            Generator::Linear(p) => p.eval(x),
        }
    }

    fn left_limit(&self, x: f64) -> f64 {
        match self {
            Generator::Step(s) => crate::func::Integrand::left_limit(s, x),
            Generator::Linear(p) => p.eval(x),
        }
    }

    fn check(&self, kind: GeneratorKind) -> Result<()> {
        let dir = match kind {
            GeneratorKind::Concave => Direction::Decreasing,
            GeneratorKind::Convex => Direction::Increasing,
        };
        match self {
            Generator::Step(s) => {
                let ok = s.jumps().iter().all(|j| match dir {
                    Direction::Decreasing => j.1 <= 0.0,
                    Direction::Increasing => j.1 >= 0.0,
                });
                if !ok {
                    return Err(Error::WrongMonotonicity);
                }
            }
            Generator::Linear(p) => {
                if p.left_tail_slope() != 0.0 || p.right_tail_slope() != 0.0 {
                    return Err(Error::UnboundedGenerator);
                }
                p.check_monotone(dir).map_err(|_| Error::WrongMonotonicity)?;
            }
        }
        Ok(())
    }
}

/// A function generated from a base and a monotone density.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedUtility {
    /// The base it is relative to.
    pub base: PiecewiseLinear,
    /// The density.
    pub generator: Generator,
    /// Concave or convex relative to the base.
    pub kind: GeneratorKind,
    /// `x -> int_{x0}^{x} k du0`, anchored at the smallest breakpoint `x0`.
    pub realized: PiecewiseLinear,
}

/// Subdivisions per piece when both the base and a linear generator vary.
const REFINE: usize = 64;

/// Integrates `generator` against `base`.
///
/// The result vanishes at the smallest breakpoint of base and generator. With
/// a piecewise-linear generator each piece is subdivided and the knot values
/// are exact; in between the quadratic is interpolated linearly.
pub fn generate_utility(base: &PiecewiseLinear, generator: Generator, kind: GeneratorKind) -> Result<GeneratedUtility> {
    generator.check(kind)?;
    let bps = merge_sorted(base.knot_xs(), generator.breakpoints().into_iter());
    let mut xs: Vec<f64> = Vec::with_capacity(bps.len() * REFINE + 2);
    xs.push(bps[0] - 1.0);
    for w in bps.windows(2) {
        xs.push(w[0]);
        let sub = match generator {
            Generator::Linear(_) => REFINE,
            Generator::Step(_) => 1,
        };
        for j in 1..sub {
            xs.push(w[0] + (w[1] - w[0]) * (j as f64) / (sub as f64));
        }
    }
    xs.push(bps[bps.len() - 1]);
    xs.push(bps[bps.len() - 1] + 1.0);
    let anchor = 1;
    let mut ys = alloc::vec![0.0; xs.len()];
    for i in (anchor + 1)..xs.len() {
        ys[i] = ys[i - 1] + piece_integral(base, &generator, xs[i - 1], xs[i]);
    }
    ys[0] = -piece_integral(base, &generator, xs[0], xs[1]);
    let left_slope = generator.left_limit(bps[0]) * base.left_tail_slope();
    let right_slope = generator.right_limit(bps[bps.len() - 1]) * base.right_tail_slope();
    let left = if left_slope != 0.0 { Tail::Linear } else { Tail::Flat };
    let right = if right_slope != 0.0 { Tail::Linear } else { Tail::Flat };
    let realized = PiecewiseLinear::with_tails(xs.into_iter().zip(ys).collect(), left, right)?;
    Ok(GeneratedUtility {
        base: base.clone(),
        generator,
        kind,
        realized,
    })
}

fn piece_integral(base: &PiecewiseLinear, g: &Generator, a: f64, b: f64) -> f64 {
    (base.eval(b) - base.eval(a)) * 0.5 * (g.right_limit(a) + g.left_limit(b))
}

/// Outcome of a relative concavity or convexity check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeShape {
    /// Whether the slope ratio is monotone in the required direction.
    pub holds: bool,
    /// First knot where it is not.
    pub witness: Option<f64>,
}

/// Is `du/du0` non-increasing across consecutive linear pieces?
pub fn check_relative_concavity(u: &PiecewiseLinear, u0: &PiecewiseLinear, tol: Tolerance) -> Result<RelativeShape> {
    relative_shape(u, u0, tol, GeneratorKind::Concave)
}

/// Is `du/du0` non-decreasing across consecutive linear pieces?
pub fn check_relative_convexity(u: &PiecewiseLinear, u0: &PiecewiseLinear, tol: Tolerance) -> Result<RelativeShape> {
    relative_shape(u, u0, tol, GeneratorKind::Convex)
}

fn relative_shape(u: &PiecewiseLinear, u0: &PiecewiseLinear, tol: Tolerance, kind: GeneratorKind) -> Result<RelativeShape> {
    let xs = merge_sorted(u.knot_xs(), u0.knot_xs());
    // (left end of piece, slope of u, slope of u0)
    let mut pieces: Vec<(f64, f64, f64)> = Vec::with_capacity(xs.len() + 1);
    pieces.push((xs[0], u.left_tail_slope(), u0.left_tail_slope()));
    for w in xs.windows(2) {
        let dx = w[1] - w[0];
        pieces.push((
            w[0],
            (u.eval(w[1]) - u.eval(w[0])) / dx,
            (u0.eval(w[1]) - u0.eval(w[0])) / dx,
        ));
    }
    pieces.push((xs[xs.len() - 1], u.right_tail_slope(), u0.right_tail_slope()));
    let mut prev: Option<f64> = None;
    for &(at, su, s0) in &pieces {
        if s0 == 0.0 {
            if su != 0.0 {
                return Err(Error::DegenerateBase { at });
            }
            continue;
        }
        let r = su / s0;
        if let Some(p) = prev {
            let bad = match kind {
                GeneratorKind::Concave => r > p + tol.eps(),
                GeneratorKind::Convex => r < p - tol.eps(),
            };
            if bad {
                return Ok(RelativeShape {
                    holds: false,
                    witness: Some(at),
                });
            }
        }
        prev = Some(r);
    }
    Ok(RelativeShape {
        holds: true,
        witness: None,
    })
}

/// Which member of the pair a ray is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RaySide {
    /// Rays of the base utility, cut on the line.
    U,
    /// Rays of the base distortion, cut in [0, 1].
    V,
}

fn check_cut(side: RaySide, cut: f64) -> Result<()> {
    let ok = match side {
        RaySide::U => cut.is_finite(),
        RaySide::V => (0.0..=1.0).contains(&cut),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::CutOutOfRange(cut))
    }
}

/// Concave extreme ray `u0(min(., c))` or `v0(min(., p))`.
pub fn extreme_ray_family(pair: &StandardPair, side: RaySide, cut: f64) -> Result<MonotonePL> {
    check_cut(side, cut)?;
    let (f, cont) = match side {
        RaySide::U => (pair.u0(), Continuity::Left),
        RaySide::V => (pair.v0(), Continuity::Right),
    };
    MonotonePL::increasing(f.min_with(cut), cont)
}

/// Convex extreme ray `u0(max(., c)) - u0(c)` or `v0(max(., p)) - v0(p)`.
pub fn convex_ray_family(pair: &StandardPair, side: RaySide, cut: f64) -> Result<MonotonePL> {
    check_cut(side, cut)?;
    let (f, cont) = match side {
        RaySide::U => (pair.u0(), Continuity::Left),
        RaySide::V => (pair.v0(), Continuity::Right),
    };
    MonotonePL::increasing(f.max_with(cut).offset(-f.eval(cut)), cont)
}

/// Indicator density `1` below `c`, `0` from `c` on.
pub fn indicator_below(c: f64) -> Generator {
    Generator::Step(StepFn::new(1.0, alloc::vec![(c, -1.0)], Side::Right).expect("single jump"))
}

/// Indicator density `0` below `c`, `1` from `c` on.
pub fn indicator_from(c: f64) -> Generator {
    Generator::Step(StepFn::new(0.0, alloc::vec![(c, 1.0)], Side::Right).expect("single jump"))
}
