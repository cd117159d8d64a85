//! Finite-support distributions.
//!
//! A [`DiscreteCdf`] is the right-continuous step cdf of finitely many
//! weighted atoms. Its generalized inverse `F^{-1}(a) = inf{x : F(x) >= a}`
//! is left-continuous and is exposed through [`QuantileFn`] and the
//! `quantile*` methods.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Mass normalization tolerance.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A point mass.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    /// Location of the atom.
    pub location: f64,
    /// Probability mass, strictly positive.
    pub mass: f64,
}

/// Smallest and largest atom location.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Support {
    /// Smallest atom location.
    pub min_loc: f64,
    /// Largest atom location.
    pub max_loc: f64,
}

/// Right-continuous cdf of a finite-support distribution.
///
/// Atoms are sorted by location, locations are distinct and every mass is
/// positive. `levels[i]` is `F(atoms[i].location)`; the last level is exactly 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteCdf {
    atoms: Vec<Atom>,
    levels: Vec<f64>,
}

impl DiscreteCdf {
    /// Builds a cdf from `(location, mass)` pairs.
    ///
    /// Duplicate locations are merged. The total mass must be 1 within
    /// [`MASS_TOLERANCE`].
    pub fn from_atoms<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let merged = merge_atoms(atoms)?;
        let sum: f64 = merged.iter().map(|a| a.mass).sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::MassNotNormalized { sum });
        }
        Ok(Self::from_sorted(merged))
    }

    /// Like [`from_atoms`](Self::from_atoms) but rescales the masses to sum to 1.
    pub fn from_atoms_normalized<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut merged = merge_atoms(atoms)?;
        let sum: f64 = merged.iter().map(|a| a.mass).sum();
        if !sum.is_finite() {
            return Err(Error::MassNotNormalized { sum });
        }
        for a in &mut merged {
            a.mass /= sum;
        }
        Ok(Self::from_sorted(merged))
    }

    /// Empirical distribution of `samples`, each with mass `1/n`.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut sorted: Vec<f64> = samples.to_vec();
        for &x in &sorted {
            if !x.is_finite() {
                return Err(Error::NonFinite(x));
            }
        }
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut atoms: Vec<Atom> = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            atoms.push(Atom {
                location: sorted[i],
                mass: (j - i) as f64 / n,
            });
            i = j;
        }
        Ok(Self::from_sorted(atoms))
    }

    /// Degenerate distribution at `x`.
    pub fn point_mass(x: f64) -> Result<Self> {
        Self::from_atoms([(x, 1.0)])
    }

    fn from_sorted(atoms: Vec<Atom>) -> Self {
        let mut levels = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for a in &atoms {
            acc += a.mass;
            levels.push(acc);
        }
        if let Some(last) = levels.last_mut() {
            *last = 1.0;
        }
        Self { atoms, levels }
    }

    /// Atoms sorted by location.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Cumulative levels `F(x_i)`, aligned with [`atoms`](Self::atoms).
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Atom locations in increasing order.
    pub fn locations(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.location)
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// Always false; a cdf has at least one atom.
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Support bounds.
    pub fn support(&self) -> Support {
        Support {
            min_loc: self.atoms[0].location,
            max_loc: self.atoms[self.atoms.len() - 1].location,
        }
    }

    /// Expected value.
    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.location * a.mass).sum()
    }

    /// `F(x)`, the mass at locations `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.atoms.partition_point(|a| a.location <= x);
        if k == 0 {
            0.0
        } else {
            self.levels[k - 1]
        }
    }

    /// Left limit `F(x-)`, the mass at locations `< x`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        let k = self.atoms.partition_point(|a| a.location < x);
        if k == 0 {
            0.0
        } else {
            self.levels[k - 1]
        }
    }

    /// Mass of the atom at `x`, zero if there is none.
    pub fn mass_at(&self, x: f64) -> f64 {
        match self.atoms.binary_search_by(|a| a.location.total_cmp(&x)) {
            Ok(i) => self.atoms[i].mass,
            Err(_) => 0.0,
        }
    }

    /// `F^{-1}(alpha)` for `alpha` in the open interval (0, 1).
    pub fn quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(self.atoms[self.quantile_index(alpha)].location)
    }

    /// Right limit `F^{-1}(alpha+) = inf{x : F(x) > alpha}` for `alpha` in [0, 1).
    pub fn quantile_right(&self, alpha: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        let k = self.levels.partition_point(|&l| l <= alpha);
        Ok(self.atoms[k.min(self.atoms.len() - 1)].location)
    }

    /// Index of the atom `F^{-1}(alpha)` for `alpha` in (0, 1].
    ///
    /// Levels above the last cumulative level clamp to the last atom, so
    /// `alpha = 1` gives the largest location.
    pub(crate) fn quantile_index(&self, alpha: f64) -> usize {
        let k = self.levels.partition_point(|&l| l < alpha);
        k.min(self.atoms.len() - 1)
    }

    /// `F^{-1}(alpha)` on the half-open interval (0, 1], with `F^{-1}(1)` the largest atom.
    pub(crate) fn quantile_closed(&self, alpha: f64) -> f64 {
        self.atoms[self.quantile_index(alpha)].location
    }

    /// View of the quantile function.
    pub fn quantile_fn(&self) -> QuantileFn<'_> {
        QuantileFn { source: self }
    }

    /// Cdf of `-X`.
    pub fn negate(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .rev()
            .map(|a| Atom {
                location: -a.location,
                mass: a.mass,
            })
            .collect();
        Self::from_sorted(atoms)
    }

    /// Cdf of `X + t`.
    pub fn shift(&self, t: f64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                location: a.location + t,
                mass: a.mass,
            })
            .collect();
        Self::from_sorted(atoms)
    }
}

fn merge_atoms<I>(atoms: I) -> Result<Vec<Atom>>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut list: Vec<Atom> = Vec::new();
    for (location, mass) in atoms {
        if !location.is_finite() {
            return Err(Error::NonFinite(location));
        }
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::NonPositiveMass { location, mass });
        }
        list.push(Atom { location, mass });
    }
    if list.is_empty() {
        return Err(Error::EmptySupport);
    }
    list.sort_by(|a, b| a.location.total_cmp(&b.location));
    let mut merged: Vec<Atom> = Vec::with_capacity(list.len());
    for a in list {
        match merged.last_mut() {
            Some(last) if last.location == a.location => last.mass += a.mass,
            _ => merged.push(a),
        }
    }
    Ok(merged)
}

/// Left-continuous generalized inverse of a [`DiscreteCdf`].
#[derive(Clone, Copy, Debug)]
pub struct QuantileFn<'a> {
    source: &'a DiscreteCdf,
}

impl<'a> QuantileFn<'a> {
    /// The cdf this quantile function inverts.
    pub fn source(&self) -> &'a DiscreteCdf {
        self.source
    }

    /// `F^{-1}(alpha)`, `alpha` in (0, 1).
    pub fn eval(&self, alpha: f64) -> Result<f64> {
        self.source.quantile(alpha)
    }

    /// `F^{-1}(alpha+)`, `alpha` in [0, 1).
    pub fn eval_right(&self, alpha: f64) -> Result<f64> {
        self.source.quantile_right(alpha)
    }

    /// `int_0^p F^{-1}(a) da` for `p` in [0, 1].
    pub fn integral_to(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (a, &level) in self.source.atoms.iter().zip(&self.source.levels) {
            if prev >= p {
                break;
            }
            acc += a.location * (level.min(p) - prev);
            prev = level;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_point() -> DiscreteCdf {
        DiscreteCdf::from_atoms([(1.0, 0.5), (3.0, 0.5)]).unwrap()
    }

    #[test]
    fn construction_examples() {
        assert_eq!(two_point().len(), 2);
        let merged = DiscreteCdf::from_atoms([(2.0, 0.4), (2.0, 0.6)]).unwrap();
        assert_eq!(merged.atoms(), &[Atom { location: 2.0, mass: 1.0 }]);
        assert_eq!(
            DiscreteCdf::from_atoms([(0.0, 0.5), (1.0, 0.6)]),
            Err(Error::MassNotNormalized { sum: 1.1 })
        );
        assert_eq!(DiscreteCdf::from_atoms(vec![]), Err(Error::EmptySupport));
        assert!(matches!(
            DiscreteCdf::from_atoms([(0.0, 1.0), (1.0, 0.0)]),
            Err(Error::NonPositiveMass { .. })
        ));
        assert!(matches!(
            DiscreteCdf::from_atoms([(f64::NAN, 1.0)]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn normalizing_constructor_rescales() {
        let f = DiscreteCdf::from_atoms_normalized([(0.0, 1.0), (1.0, 3.0)]).unwrap();
        assert_eq!(f.atoms()[0].mass, 0.25);
        assert_eq!(f.levels(), &[0.25, 1.0]);
    }

    #[test]
    fn cdf_examples() {
        let f = two_point();
        assert_eq!(f.cdf(1.0), 0.5);
        assert_eq!(f.cdf(0.999), 0.0);
        assert_eq!(f.cdf(10.0), 1.0);
    }

    #[test]
    fn left_limit_examples() {
        let f = two_point();
        assert_eq!(f.cdf_left(1.0), 0.0);
        assert_eq!(f.cdf_left(3.0), 0.5);
        assert_eq!(f.cdf_left(2.0), 0.5);
    }

    #[test]
    fn quantile_examples() {
        let f = two_point();
        assert_eq!(f.quantile(0.5), Ok(1.0));
        assert_eq!(f.quantile(0.500001), Ok(3.0));
        assert_eq!(DiscreteCdf::point_mass(2.0).unwrap().quantile(0.3), Ok(2.0));
        assert_eq!(f.quantile(0.0), Err(Error::AlphaOutOfRange(0.0)));
        assert_eq!(f.quantile(1.0), Err(Error::AlphaOutOfRange(1.0)));
        assert_eq!(f.quantile_right(0.5), Ok(3.0));
        assert_eq!(f.quantile_right(0.0), Ok(1.0));
    }

    #[test]
    fn negate_examples() {
        let f = two_point();
        let expected = DiscreteCdf::from_atoms([(-3.0, 0.5), (-1.0, 0.5)]).unwrap();
        assert_eq!(f.negate(), expected);
        let z = DiscreteCdf::point_mass(0.0).unwrap();
        assert_eq!(z.negate().atoms(), z.atoms());
        let g = DiscreteCdf::from_atoms([(-2.0, 0.25), (0.0, 0.5), (5.0, 0.25)]).unwrap();
        assert_eq!(g.negate().negate(), g);
    }

    #[test]
    fn negation_matches_left_limit_formula() {
        let f = DiscreteCdf::from_atoms([(-2.0, 0.25), (0.0, 0.5), (5.0, 0.25)]).unwrap();
        let n = f.negate();
        for x in [-6.0, -5.0, -4.0, -0.5, 0.0, 0.5, 2.0, 3.0] {
            assert_eq!(n.cdf(x), 1.0 - f.cdf_left(-x));
        }
    }

    #[test]
    fn samples_get_equal_mass() {
        let f = DiscreteCdf::from_samples(&[0.0, 1.0, 1.0, 2.0]).unwrap();
        assert_eq!(
            f.atoms(),
            &[
                Atom { location: 0.0, mass: 0.25 },
                Atom { location: 1.0, mass: 0.5 },
                Atom { location: 2.0, mass: 0.25 }
            ]
        );
    }

    #[test]
    fn partial_quantile_integral() {
        let f = DiscreteCdf::from_atoms([(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let q = f.quantile_fn();
        assert_eq!(q.integral_to(0.5), 0.0);
        assert_eq!(q.integral_to(1.0), 0.5);
        assert_eq!(q.integral_to(0.75), 0.25);
    }
}
