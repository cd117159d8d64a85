//! Residuals of the integration identities on random instances.

use alloc::vec::Vec;
use core::str::FromStr;

use rand::RngExt;
use rand_chacha::ChaCha8Rng;

use super::instances::{random_cdf, random_pair, random_u0, random_v0, trial_rng};
use super::InstanceSpec;
use crate::dist::DiscreteCdf;
use crate::error::{Error, Result};
use crate::func::{Side, StepFn};
use crate::stieltjes::{change_of_variables_check, integrate_by_parts_check, lemma4_identity_check, ChangeOfVariables, Integrator};
use crate::welfare::{yaari_cdf_form, yaari_quantile_form, yaari_survival_form, Perception};
use crate::Tolerance;

/// Identities with a computable residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Identity {
    /// Integration by parts for a left-continuous `U` and right-continuous `V`.
    Ibp,
    /// `int u0 dv(F) = int u0(F^{-1}) dv`.
    Cv1,
    /// `int u dv0(F) = int u(F^{-1}) dv0`.
    Cv2,
    /// `int v0(F) du = int v0 du(F^{-1})`.
    Cv3,
    /// `int v(F) du0 = int v du0(F^{-1})`.
    Cv4,
    /// Young-type identity at compatible probes.
    Lemma4,
    /// The three forms of the Yaari functional.
    Yaari,
}

impl Identity {
    /// All identities.
    pub const ALL: [Identity; 7] = [
        Identity::Ibp,
        Identity::Cv1,
        Identity::Cv2,
        Identity::Cv3,
        Identity::Cv4,
        Identity::Lemma4,
        Identity::Yaari,
    ];

    /// Canonical name.
    pub fn as_str(self) -> &'static str {
        match self {
            Identity::Ibp => "IBP",
            Identity::Cv1 => "CV1",
            Identity::Cv2 => "CV2",
            Identity::Cv3 => "CV3",
            Identity::Cv4 => "CV4",
            Identity::Lemma4 => "LEMMA4",
            Identity::Yaari => "YAARI",
        }
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .iter()
            .copied()
            .find(|i| i.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or(Error::UnknownTheorem)
    }
}

/// Largest residual over a run.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityReport {
    /// Identity checked.
    pub identity: Identity,
    /// Trials run.
    pub trials: u64,
    /// Largest absolute residual.
    pub max_residual: f64,
    /// Trial where it occurred.
    pub worst_trial: Option<u64>,
}

fn random_step(spec: &InstanceSpec, rng: &mut ChaCha8Rng, side: Side) -> StepFn {
    let (lo, hi) = spec.value_range;
    let cells = 2 * spec.n_atoms_max;
    let n = rng.random_range(0..=spec.n_atoms_max);
    let mut xs: Vec<f64> = (0..n)
        .map(|_| lo + (hi - lo) * rng.random_range(0..=cells) as f64 / cells as f64)
        .collect();
    crate::func::sort_dedup(&mut xs);
    let jumps = xs.into_iter().map(|x| (x, rng.random::<f64>() * 2.0 - 1.0)).collect();
    StepFn::new(rng.random::<f64>(), jumps, side).expect("sorted grid jumps")
}

fn probe(f: &DiscreteCdf, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let k = rng.random_range(0..f.len());
    let x = f.atoms()[k].location;
    let level = f.levels()[k];
    if rng.random_bool(0.5) {
        let below = f.cdf_left(x);
        let t = 1.0 - rng.random::<f64>();
        (x, below + t * (level - below))
    } else {
        let next = f.atoms().get(k + 1).map_or(x + 1.0, |a| a.location);
        (x + rng.random::<f64>() * (next - x), level)
    }
}

fn residual(identity: Identity, spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<f64> {
    match identity {
        Identity::Ibp => {
            let u = Integrator::Mixed(random_step(spec, rng, Side::Left), random_u0(spec, rng));
            let v = Integrator::Mixed(random_step(spec, rng, Side::Right), random_u0(spec, rng));
            let (lo, hi) = spec.value_range;
            let mut ab = [lo + (hi - lo) * rng.random::<f64>(), lo + (hi - lo) * rng.random::<f64>()];
            ab.sort_by(f64::total_cmp);
            integrate_by_parts_check(&u, &v, ab[0], ab[1])
        }
        Identity::Cv1 | Identity::Cv2 | Identity::Cv3 | Identity::Cv4 => {
            let which = match identity {
                Identity::Cv1 => ChangeOfVariables::Cv1,
                Identity::Cv2 => ChangeOfVariables::Cv2,
                Identity::Cv3 => ChangeOfVariables::Cv3,
                _ => ChangeOfVariables::Cv4,
            };
            let u = random_u0(spec, rng);
            let v = random_v0(spec, rng);
            let f = random_cdf(spec, rng);
            change_of_variables_check(&u, &v, &f, which)
        }
        Identity::Lemma4 => {
            let pair = random_pair(spec, rng);
            let f = random_cdf(spec, rng);
            let (x1, alpha1) = probe(&f, rng);
            lemma4_identity_check(&pair, &f, x1, alpha1)
        }
        Identity::Yaari => {
            let f0 = Perception::new(random_v0(spec, rng), "f0", Tolerance::DEFAULT)?;
            let f = random_cdf(spec, rng);
            let a = yaari_cdf_form(&f0, &f)?;
            let b = yaari_quantile_form(&f0, &f)?;
            let c = yaari_survival_form(&f0, &f)?;
            Ok((a - b).abs().max((a - c).abs()))
        }
    }
}

/// Runs `spec.trials` random instances of `identity`.
pub fn run_identity_suite(spec: &InstanceSpec, identity: Identity) -> Result<IdentityReport> {
    spec.validate()?;
    let mut report = IdentityReport {
        identity,
        trials: 0,
        max_residual: 0.0,
        worst_trial: None,
    };
    for trial in 0..spec.trials {
        let mut rng = trial_rng(spec, trial);
        let r = residual(identity, spec, &mut rng)?;
        report.trials += 1;
        if report.worst_trial.is_none() || r > report.max_residual {
            report.max_residual = r;
            report.worst_trial = Some(trial);
        }
    }
    Ok(report)
}
