mod common;

use common::{identity_deviation, lueders_first, max_abs_diff, to_dense, trace_out_first};
use nosig_core::linalg::partial_trace_first;
use nosig_core::quantum::{
    child_seed, lueders_channel, random_density_with, random_projective_measurement_with,
    seeded_rng,
};
use nosig_core::verifier::check_identity;
use nosig_core::Dims;

#[test]
fn lueders_and_partial_trace_match_loop_oracle() {
    let dims = Dims::new(4, 4);
    let partitions: [&[usize]; 4] = [&[1, 1, 1, 1], &[2, 2], &[3, 1], &[4]];
    for k in 0..100u64 {
        let mut rng = seeded_rng(child_seed(2024, k));
        let rho = random_density_with(&mut rng, 16, 1 + (k as usize % 16))
            .unwrap()
            .with_dims(dims)
            .unwrap();
        let m = random_projective_measurement_with(&mut rng, 4, partitions[k as usize % 4]).unwrap();

        let projectors: Vec<_> = m.projectors().iter().map(to_dense).collect();
        let expected = lueders_first(&to_dense(rho.matrix()), &projectors, 4, 4);
        let actual = lueders_channel(&rho, &m).unwrap();
        assert!(max_abs_diff(&to_dense(actual.matrix()), &expected) <= 1e-12);

        let pt = partial_trace_first(actual.matrix(), 4, 4).unwrap();
        assert!(max_abs_diff(&to_dense(&pt), &trace_out_first(&expected, 4, 4)) <= 1e-12);
    }
}

#[test]
fn theorem_holds_on_both_routes_at_4x4() {
    let dims = Dims::new(4, 4);
    let partitions: [&[usize]; 4] = [&[1, 1, 1, 1], &[2, 2], &[3, 1], &[4]];
    let mut worst = 0.0f64;
    for k in 0..1000u64 {
        let mut rng = seeded_rng(child_seed(7, k));
        let rank = 1 + (k as usize * 7) % 16;
        let rho = random_density_with(&mut rng, 16, rank).unwrap().with_dims(dims).unwrap();
        let m = random_projective_measurement_with(&mut rng, 4, partitions[k as usize % 4]).unwrap();
        let lib = check_identity(&rho, &m).unwrap();
        let projectors: Vec<_> = m.projectors().iter().map(to_dense).collect();
        let oracle = identity_deviation(&to_dense(rho.matrix()), &projectors, 4, 4);
        worst = worst.max(lib).max(oracle);
    }
    assert!(worst <= 1e-9, "max deviation {worst:e}");
}
