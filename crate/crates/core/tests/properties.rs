use proptest::prelude::*;
use stochord_core::dualcheck::instances::{random_pair, trial_rng};
use stochord_core::dualcheck::InstanceSpec;
use stochord_core::majorize::{majorizes, universal_statements, MajorizationKind, RealVector};
use stochord_core::ordering::{
    cdf_gap, classic, double_ordering, lemma1_cdf_side, lemma1_quantile_side, lower_ordering, quantile_gap,
    upper_ordering,
};
use stochord_core::stieltjes::young_identity_residual;
use stochord_core::welfare::{gini, yaari, Perception};
use stochord_core::{ClassicOrder, DiscreteCdf, PiecewiseLinear, StandardPair, Tolerance};

const T: Tolerance = Tolerance::DEFAULT;

fn cdf() -> impl Strategy<Value = DiscreteCdf> {
    prop::collection::vec((-10i32..=10, 1u32..=4), 1..8).prop_map(|atoms| {
        DiscreteCdf::from_atoms_normalized(atoms.into_iter().map(|(x, w)| (x as f64 / 2.0, w as f64))).unwrap()
    })
}

fn pair() -> impl Strategy<Value = StandardPair> {
    any::<u64>().prop_map(|seed| {
        let spec = InstanceSpec {
            seed,
            ..InstanceSpec::default()
        };
        random_pair(&spec, &mut trial_rng(&spec, 0))
    })
}

fn perception() -> impl Strategy<Value = Perception> {
    pair().prop_map(|p| Perception::new(p.v0().as_pl().clone(), "f0", T).unwrap())
}

fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-4i32..=4).prop_map(f64::from), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quantile_is_the_generalized_inverse(f in cdf(), alpha in 0.001f64..0.999, x in -6.0f64..6.0) {
        let q = f.quantile(alpha).unwrap();
        prop_assert_eq!(f.cdf(x) >= alpha, q <= x);
    }

    #[test]
    fn negation_is_an_involution(f in cdf()) {
        prop_assert_eq!(f.negate().negate(), f.clone());
        prop_assert!((f.negate().mean() + f.mean()).abs() < 1e-12);
    }

    #[test]
    fn tilde_is_an_involution(p in pair(), x in -6.0f64..6.0, a in 0.0f64..=1.0) {
        let back = p.tilde().tilde();
        prop_assert!((back.u0().eval(x) - p.u0().eval(x)).abs() < 1e-9);
        prop_assert!((back.v0().eval(a) - p.v0().eval(a)).abs() < 1e-9);
    }

    #[test]
    fn orderings_are_reflexive(p in pair(), f in cdf()) {
        prop_assert!(upper_ordering(&p, &f, &f, T).holds);
        prop_assert!(lower_ordering(&p, &f, &f, T).holds);
        prop_assert!(double_ordering(&p, &f, &f, T).holds);
    }

    #[test]
    fn cumulative_criteria_agree(p in pair(), f1 in cdf(), f2 in cdf()) {
        prop_assert_eq!(lemma1_cdf_side(&p, &f1, &f2, T).holds, lemma1_quantile_side(&p, &f1, &f2, T).holds);
    }

    #[test]
    fn gaps_are_antisymmetric(p in pair(), f1 in cdf(), f2 in cdf(), c in -6.0f64..6.0, level in 0.0f64..=1.0) {
        prop_assert!((cdf_gap(&p, &f1, &f2, c).unwrap() + cdf_gap(&p, &f2, &f1, c).unwrap()).abs() < 1e-9);
        prop_assert!((quantile_gap(&p, &f1, &f2, level).unwrap() + quantile_gap(&p, &f2, &f1, level).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn shifting_up_preserves_upper_ordering(p in pair(), f in cdf(), t in 0.0f64..3.0) {
        prop_assert!(upper_ordering(&p, &f, &f.shift(t), T).holds);
    }

    #[test]
    fn second_order_dominance_equals_weak_lorenz(f1 in cdf(), f2 in cdf()) {
        prop_assert_eq!(
            classic(ClassicOrder::Ssd, &f1, &f2, T).holds,
            classic(ClassicOrder::LorenzWeak, &f1, &f2, T).holds
        );
    }

    #[test]
    fn yaari_is_translation_equivariant(f0 in perception(), f in cdf(), t in -3.0f64..3.0) {
        let w = yaari(&f0, &f).unwrap();
        prop_assert!((yaari(&f0, &f.shift(t)).unwrap() - (w + t)).abs() < 1e-9);
    }

    #[test]
    fn yaari_is_monotone_in_outcomes(f0 in perception(), f in cdf(), t in 0.0f64..3.0) {
        prop_assert!(yaari(&f0, &f.shift(t)).unwrap() >= yaari(&f0, &f).unwrap() - 1e-12);
    }

    #[test]
    fn yaari_under_identity_is_the_mean(f in cdf()) {
        prop_assert!((yaari(&Perception::identity(), &f).unwrap() - f.mean()).abs() < 1e-12);
    }

    #[test]
    fn gini_lies_in_the_unit_interval(f in cdf()) {
        let g = gini(&f.shift(6.0)).unwrap();
        prop_assert!((-1e-12..=1.0).contains(&g));
    }

    #[test]
    fn majorization_ignores_order(x in vector(4), y in vector(4), rot in 0usize..4) {
        let (vx, vy) = (RealVector::new(x.clone()).unwrap(), RealVector::new(y).unwrap());
        let mut r = x;
        r.rotate_left(rot);
        let vr = RealVector::new(r).unwrap();
        for kind in [MajorizationKind::Strong, MajorizationKind::WeakUpper, MajorizationKind::WeakLower] {
            prop_assert_eq!(majorizes(&vx, &vy, kind, T).unwrap().holds, majorizes(&vr, &vy, kind, T).unwrap().holds);
        }
    }

    #[test]
    fn strong_is_both_weak_kinds(x in vector(5), y in vector(5)) {
        let (x, y) = (RealVector::new(x).unwrap(), RealVector::new(y).unwrap());
        let h = |k| majorizes(&x, &y, k, T).unwrap().holds;
        prop_assert_eq!(
            h(MajorizationKind::Strong),
            h(MajorizationKind::WeakUpper) && h(MajorizationKind::WeakLower)
        );
    }

    #[test]
    fn sum_statements_do_not_depend_on_the_anchor(x in vector(3), y in vector(3), k in -50.0f64..50.0) {
        let (x, y) = (RealVector::new(x).unwrap(), RealVector::new(y).unwrap());
        let base = universal_statements(&x, &y, 0.0, T).unwrap();
        prop_assert_eq!(universal_statements(&x, &y, k, T).unwrap(), base);
        prop_assert_eq!(base.as_array(), [majorizes(&x, &y, MajorizationKind::WeakUpper, T).unwrap().holds; 4]);
    }

    #[test]
    fn piecewise_linear_min_max_split(c in -3.0f64..3.0, x in -6.0f64..6.0) {
        let id = PiecewiseLinear::identity();
        prop_assert!((id.min_with(c).eval(x) + id.max_with(c).eval(x) - (x + c)).abs() < 1e-12);
    }

    #[test]
    fn young_identity_holds_on_the_whole_graph(p in pair(), f in cdf(), k in any::<prop::sample::Index>(), t in 0.0f64..=1.0, vertical in any::<bool>()) {
        let i = k.index(f.len());
        let x = f.atoms()[i].location;
        let level = f.levels()[i];
        let (x1, a1) = if vertical {
            let below = f.cdf_left(x);
            (x, (below + t * (level - below)).max(f64::MIN_POSITIVE))
        } else {
            let next = f.atoms().get(i + 1).map_or(x + 1.0, |a| a.location);
            (x + t * (next - x), level)
        };
        prop_assert!(young_identity_residual(&p, &f, x1, a1).unwrap() <= 1e-9);
    }
}
