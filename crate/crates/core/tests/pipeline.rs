use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use vspin::{
    compile, compile_report, evolve, gate, global_phase, phase_distance, prepare_pseudo_pure, projector, propagator,
    run_dj, sequence_operator, Angle, Axis, BoolFn2, DensityMatrix, DjMode, GateId, Matrix4, PulseSpec,
    StateModel, SystemSpec, Transition,
};

fn pulse(axis: Axis, m: usize, n: usize, phi: f64, f: f64) -> PulseSpec {
    PulseSpec { axis, transition: Transition::new(m, n).unwrap(), angle: Angle::radians(phi), phase: Angle::radians(f) }
}

fn arb_unitary() -> impl Strategy<Value = Matrix4> {
    prop::collection::vec((prop::bool::ANY, 0usize..6, -PI..PI, -PI..PI), 1..6).prop_map(|ps| {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        ps.into_iter()
            .map(|(xa, t, phi, f)| {
                let (m, n) = pairs[t];
                propagator(&pulse(if xa { Axis::X } else { Axis::Y }, m, n, phi, f))
            })
            .product()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_symmetric(u in arb_unitary(), v in arb_unitary()) {
        let d1 = phase_distance(&u, &v).unwrap();
        let d2 = phase_distance(&v, &u).unwrap();
        prop_assert!((d1 - d2).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&d1));
    }

    #[test]
    fn distance_ignores_global_phase(u in arb_unitary(), a in -PI..PI) {
        let v = u * Complex64::from_polar(1.0, a);
        prop_assert!(phase_distance(&u, &v).unwrap() < 1e-14);
        let c = global_phase(&u, &v, 1e-10).unwrap();
        prop_assert!((c - Complex64::from_polar(1.0, a)).norm() < 1e-12);
    }

    #[test]
    fn distance_is_left_invariant(u in arb_unitary(), v in arb_unitary(), w in arb_unitary()) {
        let d = phase_distance(&u, &v).unwrap();
        let dw = phase_distance(&(w * u), &(w * v)).unwrap();
        prop_assert!((d - dw).abs() < 1e-12);
    }
}

#[test]
fn projector_rejects_bad_levels() {
    assert!(projector(4, 0).is_err());
    assert_eq!(projector(0, 1).unwrap() * projector(1, 2).unwrap(), projector(0, 2).unwrap());
    assert_eq!(projector(0, 1).unwrap() * projector(2, 3).unwrap(), Matrix4::zero());
}

#[test]
fn negation_realization_example() {
    let x02 = propagator(&pulse(Axis::X, 0, 2, PI, 0.0));
    let x13 = propagator(&pulse(Axis::X, 1, 3, PI, 0.0));
    let realized = x02 * x13 * Complex64::new(0.0, 1.0);
    assert!(phase_distance(&realized, &gate(GateId::NOT1)).unwrap() < 1e-15);
    assert!((phase_distance(&Matrix4::identity(), &gate(GateId::NOT1)).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn compiled_gates_drive_density_evolution() {
    let sys = SystemSpec::default();
    for id in GateId::ALL {
        let Ok(seq) = compile(id) else { continue };
        let u = sequence_operator(&seq, &sys).unwrap();
        let start = DensityMatrix::basis(1).unwrap();
        let by_pulses = evolve(&start, &seq, &sys).unwrap();
        let by_matrix = start.conjugate(&u).unwrap();
        assert!(by_pulses.matrix().approx_eq(by_matrix.matrix(), 1e-12), "{id}");
        assert!(compile_report(id).unwrap().distance <= 1e-10);
    }
}

#[test]
fn deutsch_jozsa_end_to_end() {
    let sys = SystemSpec::default();
    let pp = prepare_pseudo_pure(&sys, 1e-3).unwrap();
    assert_eq!(pp.distinguished_level, 2);
    for f in BoolFn2::ALL {
        for mode in DjMode::ALL {
            let pure = run_dj(f, mode, StateModel::Pure, &sys).unwrap();
            let mixed = run_dj(f, mode, StateModel::pseudo_pure(), &sys).unwrap();
            assert_eq!(pure.classification, mixed.classification);
            assert_eq!(f.is_balanced(), pure.classification == vspin::Classification::Balanced);
        }
    }
}
