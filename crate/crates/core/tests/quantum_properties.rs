use collapse_lab::dynamics::unitary_step;
use collapse_lab::quantum::{
    born_weight, local_commutator_norm, marginal_distribution, project_and_renormalize,
    LinearOperator, LocalOperator, Projector, StateVector, C64,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

const DIMS: [usize; 2] = [2, 3];

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

fn state(dims: &'static [usize]) -> impl Strategy<Value = StateVector> {
    amplitudes(dims.iter().product()).prop_map(move |a| StateVector::new(dims, a).unwrap().normalize().unwrap())
}

fn hermitian(d: usize) -> impl Strategy<Value = LinearOperator> {
    amplitudes(d * d).prop_map(move |a| {
        let m = DMatrix::from_vec(d, d, a);
        let h = (&m + m.adjoint()).map(|z| z * 0.5);
        LinearOperator::hermitian(&[d], h).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn born_weights_of_a_projector_and_complement_sum_to_one(s in state(&DIMS), v in amplitudes(3)) {
        let p = Projector::rank_one(&StateVector::new(&[3], v).unwrap()).unwrap().embed(1, &DIMS).unwrap();
        let total = born_weight(&s, &p).unwrap() + born_weight(&s, &p.complement()).unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-12, "{total}");
    }

    #[test]
    fn projection_and_evolution_preserve_norm(s in state(&DIMS), v in amplitudes(2), h in amplitudes(36), dt in 0.0f64..5.0) {
        let p = Projector::rank_one(&StateVector::new(&[2], v).unwrap()).unwrap().embed(0, &DIMS).unwrap();
        if born_weight(&s, &p).unwrap() > 1e-12 {
            let r = project_and_renormalize(&s, &p).unwrap();
            prop_assert!((r.norm_sqr() - 1.0).abs() <= 1e-10);
        }
        let m = DMatrix::from_vec(6, 6, h);
        let h = LinearOperator::hermitian(&DIMS, (&m + m.adjoint()).map(|z| z * 0.5)).unwrap();
        let evolved = unitary_step(&s, &h, dt).unwrap();
        prop_assert!((evolved.norm_sqr() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn operators_on_disjoint_factors_commute(a in hermitian(2), b in hermitian(3)) {
        let c = local_commutator_norm(&LocalOperator::new(0, a), &LocalOperator::new(1, b), &DIMS).unwrap();
        prop_assert!(!c.same_site);
        prop_assert!(c.value <= 1e-12, "{}", c.value);
    }

    #[test]
    fn measuring_one_side_leaves_the_other_marginal(s in state(&DIMS), v in amplitudes(3)) {
        let local = Projector::rank_one(&StateVector::new(&[3], v).unwrap()).unwrap();
        let family = [Projector::diagonal(&[2], &[0]).unwrap(), Projector::diagonal(&[2], &[1]).unwrap()];
        let before = marginal_distribution(&s, 0, &family).unwrap();
        let mut after = [0.0; 2];
        for q in [local.embed(1, &DIMS).unwrap(), local.embed(1, &DIMS).unwrap().complement()] {
            let w = born_weight(&s, &q).unwrap();
            if w <= 1e-12 {
                continue;
            }
            let m = marginal_distribution(&project_and_renormalize(&s, &q).unwrap(), 0, &family).unwrap();
            for k in 0..2 {
                after[k] += w * m[k];
            }
        }
        for k in 0..2 {
            prop_assert!((after[k] - before[k]).abs() <= 1e-10, "{after:?} vs {before:?}");
        }
    }

    #[test]
    fn marginal_matches_embedded_born_weights(s in state(&DIMS), v in amplitudes(3)) {
        let p = Projector::rank_one(&StateVector::new(&[3], v).unwrap()).unwrap();
        let family = [p.clone(), p.complement()];
        let m = marginal_distribution(&s, 1, &family).unwrap();
        for (q, mk) in family.iter().zip(&m) {
            let w = born_weight(&s, &q.embed(1, &DIMS).unwrap()).unwrap();
            prop_assert!((w - mk).abs() <= 1e-12, "{w} vs {mk}");
        }
    }

    #[test]
    fn tensor_products_of_unit_states_stay_normalized(a in state(&[2]), b in state(&[3]), c in state(&[2])) {
        let joint = a.tensor(&b).unwrap().tensor(&c).unwrap();
        prop_assert!((joint.norm_sqr() - 1.0).abs() <= 1e-12);
    }
}
