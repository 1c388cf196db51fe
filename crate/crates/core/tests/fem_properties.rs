use hnmx::hn_stepper::{energy_experiment, HnParams};
use hnmx::maxwell_fem::{assemble, discrete_gradient, MaxwellMesh};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curl_of_gradient_vanishes(nx in 1usize..12, ny in 1usize..12) {
        let mesh = MaxwellMesh::new(nx, ny).unwrap();
        let cg = assemble(&mesh).c_full.matmul(&discrete_gradient(&mesh));
        prop_assert!(cg.triplets().iter().all(|t| t.2 == 0.0));
    }

    #[test]
    fn mass_matrix_is_symmetric(nx in 2usize..10, ny in 2usize..10) {
        let mesh = MaxwellMesh::new(nx, ny).unwrap();
        let m = assemble(&mesh).m_e;
        for (i, j, v) in m.triplets() {
            prop_assert_eq!(m.get(j, i), v);
        }
    }

    #[test]
    fn energy_never_increases(alpha in 0.05f64..0.95, beta in 0.05f64..1.0, tau in 0.01f64..0.5) {
        let mesh = MaxwellMesh::new(6, 6).unwrap();
        let trace = energy_experiment(&mesh, HnParams::new(1.0, 1.0, alpha, beta).unwrap(), tau, 8).unwrap();
        prop_assert!(trace.is_decaying(1e-12), "max increase {}", trace.max_relative_increase());
    }
}
