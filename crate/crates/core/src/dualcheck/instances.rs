//! Random instances with ties, plateaus and kinked pairs.

use alloc::vec::Vec;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::InstanceSpec;
use crate::dist::DiscreteCdf;
use crate::distortion::{make_standard_pair, StandardPair};
use crate::func::{sort_dedup, PiecewiseLinear, Tail};
use crate::majorize::RealVector;
use crate::Tolerance;

/// Generator seeded for one trial.
pub fn trial_rng(spec: &InstanceSpec, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(trial))
}

fn grid_point(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> f64 {
    let (lo, hi) = spec.value_range;
    let cells = 2 * spec.n_atoms_max;
    let k = rng.random_range(0..=cells);
    lo + (hi - lo) * k as f64 / cells as f64
}

/// Atoms on a coarse grid of `value_range` with small integer weights, so
/// locations and levels repeat across draws.
pub fn random_cdf(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> DiscreteCdf {
    let n = rng.random_range(1..=spec.n_atoms_max);
    let atoms: Vec<(f64, f64)> = (0..n)
        .map(|_| (grid_point(spec, rng), rng.random_range(1..=4u32) as f64))
        .collect();
    DiscreteCdf::from_atoms_normalized(atoms).expect("grid atoms with positive weights")
}

fn moved_atom(f: &DiscreteCdf, spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> DiscreteCdf {
    let k = rng.random_range(0..f.len());
    let target = grid_point(spec, rng);
    let atoms = f
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| (if i == k { target } else { a.location }, a.mass));
    DiscreteCdf::from_atoms_normalized(atoms).expect("moved atom keeps masses")
}

fn contracted(f: &DiscreteCdf, rng: &mut ChaCha8Rng) -> DiscreteCdf {
    if f.len() < 2 {
        return f.clone();
    }
    let i = rng.random_range(0..f.len() - 1);
    let j = rng.random_range(i + 1..f.len());
    let (a, b) = (f.atoms()[i], f.atoms()[j]);
    let m = a.mass + b.mass;
    let loc = (a.location * a.mass + b.location * b.mass) / m;
    let atoms = f
        .atoms()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, a)| (a.location, a.mass))
        .chain(core::iter::once((loc, m)));
    DiscreteCdf::from_atoms_normalized(atoms).expect("contraction keeps masses")
}

/// A pair of cdfs drawn from a mix of relations: independent, equal, one
/// atom moved, shifted by a grid cell, and a mean-preserving contraction.
pub fn random_cdf_pair(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> (DiscreteCdf, DiscreteCdf) {
    let f1 = random_cdf(spec, rng);
    let cell = (spec.value_range.1 - spec.value_range.0) / (2 * spec.n_atoms_max) as f64;
    let f2 = match rng.random_range(0..6u32) {
        0 | 1 => random_cdf(spec, rng),
        2 => f1.clone(),
        3 => moved_atom(&f1, spec, rng),
        4 => f1.shift(if rng.random_bool(0.5) { cell } else { -cell }),
        _ => contracted(&f1, rng),
    };
    if rng.random_bool(0.5) {
        (f1, f2)
    } else {
        (f2, f1)
    }
}

fn increments(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random::<f64>() + 0.05 })
        .collect()
}

/// Non-constant increasing piecewise-linear base utility with knots in
/// `value_range` and random flat or linear tails.
pub fn random_u0(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> PiecewiseLinear {
    let (lo, hi) = spec.value_range;
    let k = rng.random_range(2..=spec.n_knots_max + 1);
    let mut xs: Vec<f64> = (0..k).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
    sort_dedup(&mut xs);
    let mut inc = increments(rng, xs.len());
    if xs.len() > 1 && inc[1..].iter().all(|&d| d == 0.0) {
        let j = rng.random_range(1..xs.len());
        inc[j] = rng.random::<f64>() + 0.05;
    }
    let mut y = rng.random::<f64>() - 0.5;
    let knots = xs
        .iter()
        .zip(inc)
        .map(|(&x, d)| {
            y += d;
            (x, y)
        })
        .collect();
    let tail = |rng: &mut ChaCha8Rng| if rng.random_bool(0.5) { Tail::Linear } else { Tail::Flat };
    let (left, right) = (tail(rng), tail(rng));
    PiecewiseLinear::with_tails(knots, left, right).expect("sorted distinct knots")
}

/// Increasing distortion of `[0, 1]` with `v0(0) = 0` and `v0(1) = 1`.
pub fn random_v0(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> PiecewiseLinear {
    let m = rng.random_range(0..spec.n_knots_max);
    let mut xs: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).filter(|&x| x > 0.0 && x < 1.0).collect();
    sort_dedup(&mut xs);
    let inc = increments(rng, xs.len() + 1);
    let total: f64 = inc.iter().sum();
    let inc: Vec<f64> = if total > 0.0 {
        inc.iter().map(|d| d / total).collect()
    } else {
        let n = inc.len() as f64;
        inc.iter().map(|_| 1.0 / n).collect()
    };
    let mut knots = Vec::with_capacity(xs.len() + 2);
    knots.push((0.0, 0.0));
    let mut y = 0.0;
    for (&x, d) in xs.iter().zip(&inc) {
        y += d;
        knots.push((x, y.min(1.0)));
    }
    knots.push((1.0, 1.0));
    PiecewiseLinear::new(knots).expect("sorted distinct knots")
}

/// A random standard pair; identity with small probability.
pub fn random_pair(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> StandardPair {
    if rng.random_bool(0.1) {
        return StandardPair::identity();
    }
    let u0 = random_u0(spec, rng);
    let v0 = random_v0(spec, rng);
    make_standard_pair(u0, v0, Tolerance::DEFAULT).expect("random pair is standard")
}

/// Two equal-length vectors with entries on the integer points of `value_range`.
pub fn random_vectors(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> (RealVector, RealVector) {
    let n = rng.random_range(1..=spec.n_atoms_max);
    let lo = libm::ceil(spec.value_range.0) as i64;
    let hi = (libm::floor(spec.value_range.1) as i64).max(lo);
    let mut draw = || -> Vec<f64> { (0..n).map(|_| rng.random_range(lo..=hi) as f64).collect() };
    let x = draw();
    let y = draw();
    (RealVector::new(x).expect("finite"), RealVector::new(y).expect("finite"))
}
