//! Randomized and exhaustive verification of the equivalence theorems.
//!
//! Every clause of a theorem is decided on its own ray family by its own
//! integration path (see [`clauses`]). A trial agrees when all clauses
//! return the same verdict. A disagreement where every clause sits within
//! `2 eps` of holding, or every clause within `2 eps` of failing, is counted
//! as tolerance-marginal: it is logged but not treated as a failure.

pub mod clauses;
pub mod identities;
pub mod instances;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dist::DiscreteCdf;
use crate::distortion::StandardPair;
use crate::error::{Error, Result};
use crate::func::{Continuity, MonotonePL};
use crate::majorize::{as_uniform_cdf, RealVector};
use crate::welfare::Perception;
use crate::Tolerance;

pub use identities::{run_identity_suite, Identity, IdentityReport};

/// Largest number of vectors an exhaustive scan may enumerate.
pub const SCAN_LIMIT: u64 = 10_000;

/// Parameters of a randomized run.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InstanceSpec {
    /// Base seed; trial `t` uses `seed + t`.
    pub seed: u64,
    /// Most atoms per distribution, or entries per vector.
    pub n_atoms_max: usize,
    /// Most linear pieces per base function.
    pub n_knots_max: usize,
    /// Range of atom locations and knots.
    pub value_range: (f64, f64),
    /// Number of trials.
    pub trials: u64,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        Self {
            seed: 1,
            n_atoms_max: 10,
            n_knots_max: 5,
            value_range: (-5.0, 5.0),
            trials: 1000,
        }
    }
}

impl InstanceSpec {
    /// Checks counts and range.
    pub fn validate(&self) -> Result<()> {
        if self.n_atoms_max == 0 || self.n_knots_max == 0 || self.trials == 0 {
            return Err(Error::InvalidSpec("counts must be positive"));
        }
        let (lo, hi) = self.value_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidSpec("value range must be finite and nonempty"));
        }
        Ok(())
    }
}

/// Statements the harness can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TheoremId {
    /// Upper ordering, clauses (i)-(iv).
    T1,
    /// Upper ordering, starred clauses.
    #[cfg_attr(feature = "serde", serde(rename = "T1-star"))]
    T1Star,
    /// Lower ordering.
    T2,
    /// Double ordering.
    T3,
    /// Cumulative cdf-side and quantile-side criteria.
    L1,
    /// Local implication at crossing points.
    L3,
    /// Second-order dominance and the weak Lorenz order.
    EQ1,
    /// First perception corollary.
    COR1,
    /// Second perception corollary.
    COR2,
    /// Weak majorization and its sum statements.
    MAJ,
}

impl TheoremId {
    /// All identifiers.
    pub const ALL: [TheoremId; 10] = [
        TheoremId::T1,
        TheoremId::T1Star,
        TheoremId::T2,
        TheoremId::T3,
        TheoremId::L1,
        TheoremId::L3,
        TheoremId::EQ1,
        TheoremId::COR1,
        TheoremId::COR2,
        TheoremId::MAJ,
    ];

    /// Canonical name.
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T1 => "T1",
            TheoremId::T1Star => "T1-star",
            TheoremId::T2 => "T2",
            TheoremId::T3 => "T3",
            TheoremId::L1 => "L1",
            TheoremId::L3 => "L3",
            TheoremId::EQ1 => "EQ1",
            TheoremId::COR1 => "COR1",
            TheoremId::COR2 => "COR2",
            TheoremId::MAJ => "MAJ",
        }
    }

    /// Whether each clause is a self-contained check rather than one side of
    /// an equivalence.
    fn clauses_must_hold(self) -> bool {
        matches!(self, TheoremId::L3)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("T1*") || s.eq_ignore_ascii_case("T1_star") {
            return Ok(TheoremId::T1Star);
        }
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or(Error::UnknownTheorem)
    }
}

/// Verdict of one clause on one instance.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClauseVerdict {
    /// Clause label.
    pub name: String,
    /// Whether it holds.
    pub holds: bool,
    /// Slack at the worst ray; negative when violated.
    pub margin: f64,
}

/// Plain-data copy of an instance.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InstanceRecord {
    /// Atoms of the first distribution.
    pub f1: Vec<(f64, f64)>,
    /// Atoms of the second distribution.
    pub f2: Vec<(f64, f64)>,
    /// Knots of the base utility.
    pub u0: Vec<(f64, f64)>,
    /// Knots of the base distortion.
    pub v0: Vec<(f64, f64)>,
    /// First vector, for majorization.
    pub x: Vec<f64>,
    /// Second vector, for majorization.
    pub y: Vec<f64>,
}

/// A trial whose clauses disagreed.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Counterexample {
    /// Trial index.
    pub trial: u64,
    /// The instance.
    pub instance: InstanceRecord,
    /// Verdict of every clause.
    pub clauses: Vec<ClauseVerdict>,
}

/// Aggregate result of a run.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivalenceReport {
    /// Theorem checked.
    pub theorem: TheoremId,
    /// Trials run.
    pub trials: u64,
    /// Trials whose clauses agreed, tolerance-marginal ones included.
    pub agreements: u64,
    /// Tolerance-marginal disagreements.
    pub marginal: u64,
    /// Trials whose clauses all held.
    pub all_true: u64,
    /// Genuine disagreements, by trial index.
    pub counterexamples: Vec<Counterexample>,
    /// Marginal disagreements, by trial index.
    pub marginal_cases: Vec<Counterexample>,
}

impl EquivalenceReport {
    fn new(theorem: TheoremId) -> Self {
        Self {
            theorem,
            trials: 0,
            agreements: 0,
            marginal: 0,
            all_true: 0,
            counterexamples: Vec::new(),
            marginal_cases: Vec::new(),
        }
    }

    /// Every trial agreed.
    pub fn all_agree(&self) -> bool {
        self.agreements == self.trials
    }

    fn record(&mut self, theorem: TheoremId, trial: u64, clauses: Vec<ClauseVerdict>, instance: impl FnOnce() -> InstanceRecord, tol: Tolerance) {
        self.trials += 1;
        if clauses.iter().all(|c| c.holds) {
            self.all_true += 1;
        }
        match classify(theorem, &clauses, tol) {
            Outcome::Agree => self.agreements += 1,
            Outcome::Marginal => {
                self.agreements += 1;
                self.marginal += 1;
                self.marginal_cases.push(Counterexample {
                    trial,
                    instance: instance(),
                    clauses,
                });
            }
            Outcome::Disagree => self.counterexamples.push(Counterexample {
                trial,
                instance: instance(),
                clauses,
            }),
        }
    }
}

enum Outcome {
    Agree,
    Marginal,
    Disagree,
}

fn classify(theorem: TheoremId, clauses: &[ClauseVerdict], tol: Tolerance) -> Outcome {
    let band = 2.0 * tol.eps();
    if theorem.clauses_must_hold() {
        let failing: Vec<&ClauseVerdict> = clauses.iter().filter(|c| !c.holds).collect();
        return if failing.is_empty() {
            Outcome::Agree
        } else if failing.iter().all(|c| c.margin <= band) {
            Outcome::Marginal
        } else {
            Outcome::Disagree
        };
    }
    let first = clauses.first().is_none_or(|c| c.holds);
    if clauses.iter().all(|c| c.holds == first) {
        return Outcome::Agree;
    }
    let lowest = clauses.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
    let highest = clauses.iter().map(|c| c.margin).fold(f64::NEG_INFINITY, f64::max);
    if lowest >= -band || highest <= band {
        Outcome::Marginal
    } else {
        Outcome::Disagree
    }
}

fn atoms_of(f: &DiscreteCdf) -> Vec<(f64, f64)> {
    f.atoms().iter().map(|a| (a.location, a.mass)).collect()
}

fn record_of(pair: &StandardPair, f1: &DiscreteCdf, f2: &DiscreteCdf) -> InstanceRecord {
    InstanceRecord {
        f1: atoms_of(f1),
        f2: atoms_of(f2),
        u0: pair.u0().knots().to_vec(),
        v0: pair.v0().knots().to_vec(),
        ..InstanceRecord::default()
    }
}

fn distribution_clauses(
    theorem: TheoremId,
    pair: &StandardPair,
    f1: &DiscreteCdf,
    f2: &DiscreteCdf,
    tol: Tolerance,
) -> Result<Vec<ClauseVerdict>> {
    match theorem {
        TheoremId::T1 => clauses::theorem1(pair, f1, f2, tol),
        TheoremId::T1Star => clauses::theorem1_star(pair, f1, f2, tol),
        TheoremId::T2 => clauses::theorem2(pair, f1, f2, tol),
        TheoremId::T3 => clauses::theorem3(pair, f1, f2, tol),
        TheoremId::L1 => clauses::lemma1(pair, f1, f2, tol),
        TheoremId::L3 => clauses::lemma3(pair, f1, f2, tol),
        TheoremId::EQ1 => Ok(clauses::eq1(f1, f2, tol)),
        TheoremId::COR1 => {
            let f0 = Perception::new(pair.v0().as_pl().clone(), "f0", tol)?;
            clauses::corollary1(&f0, f1, f2, tol)
        }
        TheoremId::COR2 => {
            let f0 = Perception::new(pair.v0().as_pl().clone(), "f0", tol)?;
            let u0 = MonotonePL::increasing(pair.u0().as_pl().clone(), Continuity::Left)?;
            clauses::corollary2(&u0, &f0, f1, f2, tol)
        }
        TheoremId::MAJ => unreachable!("vector theorem"),
    }
}

/// Runs `spec.trials` random trials of `theorem`. Deterministic in `spec`.
pub fn run_equivalence_suite(spec: &InstanceSpec, theorem: TheoremId, tol: Tolerance) -> Result<EquivalenceReport> {
    spec.validate()?;
    let mut report = EquivalenceReport::new(theorem);
    for trial in 0..spec.trials {
        let mut rng = instances::trial_rng(spec, trial);
        if theorem == TheoremId::MAJ {
            let (x, y) = instances::random_vectors(spec, &mut rng);
            let k = [0.0, 1.0, -1.0, 100.0, -100.0][(trial % 5) as usize];
            let clauses = clauses::majorization(&x, &y, k, tol)?;
            report.record(theorem, trial, clauses, || vector_record(&x, &y), tol);
            continue;
        }
        let (f1, f2) = instances::random_cdf_pair(spec, &mut rng);
        let pair = instances::random_pair(spec, &mut rng);
        let clauses = distribution_clauses(theorem, &pair, &f1, &f2, tol)?;
        report.record(theorem, trial, clauses, || record_of(&pair, &f1, &f2), tol);
    }
    Ok(report)
}

fn vector_record(x: &RealVector, y: &RealVector) -> InstanceRecord {
    InstanceRecord {
        x: x.entries().to_vec(),
        y: y.entries().to_vec(),
        ..InstanceRecord::default()
    }
}

/// Every vector of length `n` over `grid`, in lexicographic index order.
pub fn grid_vectors(n: usize, grid: &[f64]) -> Result<Vec<RealVector>> {
    if n == 0 || grid.is_empty() {
        return Err(Error::InvalidSpec("scan needs n >= 1 and a nonempty grid"));
    }
    let count = (grid.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if count > SCAN_LIMIT {
        return Err(Error::ScanTooLarge { vectors: count });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = alloc::vec![0usize; n];
    loop {
        out.push(RealVector::new(idx.iter().map(|&i| grid[i]).collect())?);
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < grid.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Checks `theorem` on every ordered pair of uniform laws on length-`n`
/// vectors over `grid`, with the identity pair.
pub fn exhaustive_small_scan(theorem: TheoremId, n: usize, grid: &[f64], tol: Tolerance) -> Result<EquivalenceReport> {
    let vectors = grid_vectors(n, grid)?;
    let pair = StandardPair::identity();
    let laws: Vec<DiscreteCdf> = vectors.iter().map(as_uniform_cdf).collect();
    let mut report = EquivalenceReport::new(theorem);
    let mut trial = 0u64;
    for (i, x) in vectors.iter().enumerate() {
        for (j, y) in vectors.iter().enumerate() {
            let clauses = if theorem == TheoremId::MAJ {
                clauses::majorization(x, y, 0.0, tol)?
            } else {
                distribution_clauses(theorem, &pair, &laws[i], &laws[j], tol)?
            };
            report.record(theorem, trial, clauses, || vector_record(x, y), tol);
            trial += 1;
        }
    }
    Ok(report)
}
