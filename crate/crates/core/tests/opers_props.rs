use std::sync::Arc;

use critcoh_core::algebra::{AlgebraName, SimpleLieAlgebra};
use critcoh_core::error::Error;
use critcoh_core::opers::{
    canonical_form, gauge_transform, normalized_residue, rs_residue, rs_to_punctured, GaugeElement, OperRep, Singularity,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sl(name: AlgebraName) -> Arc<SimpleLieAlgebra> {
    Arc::new(SimpleLieAlgebra::new(name))
}

fn names() -> impl Strategy<Value = AlgebraName> {
    prop_oneof![Just(AlgebraName::Sl2), Just(AlgebraName::Sl3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_action_is_a_group_action(name in names(), seed in any::<u64>(), k in 1u32..5) {
        let a = sl(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = OperRep::random(&a, k, Singularity::Regular, 3, &mut rng);
        let g = GaugeElement::random(&a, k, Singularity::Regular, 3, &mut rng);
        let h = GaugeElement::random(&a, k, Singularity::Regular, 3, &mut rng);
        let gh = g.compose(&h).unwrap();
        let two_steps = gauge_transform(&g, &gauge_transform(&h, &op).unwrap()).unwrap();
        prop_assert_eq!(gauge_transform(&gh, &op).unwrap(), two_steps);
        let back = gauge_transform(&g.inverse(), &gauge_transform(&g, &op).unwrap()).unwrap();
        prop_assert_eq!(back, op);
    }

    #[test]
    fn canonical_form_is_a_gauge_invariant(name in names(), seed in any::<u64>(), k in 1u32..5) {
        let a = sl(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = OperRep::random(&a, k, Singularity::Regular, 3, &mut rng);
        let g = GaugeElement::random(&a, k, Singularity::Regular, 3, &mut rng);
        let (c, to) = canonical_form(&op).unwrap();
        prop_assert_eq!(gauge_transform(&to, &op).unwrap(), c.to_oper());
        prop_assert_eq!(canonical_form(&gauge_transform(&g, &op).unwrap()).unwrap().0, c);
    }

    #[test]
    fn rs_residue_is_gauge_invariant(name in names(), seed in any::<u64>(), k in 1u32..5) {
        let a = sl(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = OperRep::random(&a, k, Singularity::Rs, 3, &mut rng);
        let g = GaugeElement::random(&a, k, Singularity::Rs, 3, &mut rng);
        let moved = gauge_transform(&g, &op).unwrap();
        prop_assert_eq!(rs_residue(&moved).unwrap(), rs_residue(&op).unwrap());
        let (c, _) = canonical_form(&rs_to_punctured(&moved).unwrap()).unwrap();
        prop_assert_eq!(normalized_residue(&c), rs_residue(&op).unwrap());
    }

    #[test]
    fn json_roundtrip(name in names(), seed in any::<u64>(), k in 1u32..5, rs in any::<bool>()) {
        let a = sl(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = if rs { Singularity::Rs } else { Singularity::Regular };
        let op = OperRep::random(&a, k, s, 5, &mut rng);
        let text = serde_json::to_string(&op.to_json()).unwrap();
        let back = OperRep::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, op);
    }
}

#[test]
fn mismatched_inputs_are_rejected() {
    let a = sl(AlgebraName::Sl2);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let op = OperRep::random(&a, 3, Singularity::Regular, 2, &mut rng);
    let g = GaugeElement::random(&a, 4, Singularity::Regular, 2, &mut rng);
    assert!(matches!(gauge_transform(&g, &op), Err(Error::PrecisionMismatch(4, 3))));
    let g = GaugeElement::random(&a, 3, Singularity::Rs, 2, &mut rng);
    assert!(matches!(gauge_transform(&g, &op), Err(Error::InvalidTag(_))));
    let bad = serde_json::json!({"algebra": "sl2", "precision": 2, "singularity": "regular",
        "coefficients": [{"basis": "f", "power": 0, "value": "1"}]});
    assert!(OperRep::from_json(&bad).is_err());
}
