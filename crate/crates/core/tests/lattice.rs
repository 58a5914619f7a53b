use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use splitwalk::disorder::gen_haar;
use splitwalk::lattice::{
    dense_build, dense_build_rotated, step_operator, sublattice_conjugate, sublattice_indices,
    Embedding, DEFAULT_DENSE_CAP,
};
use splitwalk::linalg::{eigen, eigenvalues, multiset_distance};
use splitwalk::{
    apply_timestep, apply_timestep_rotated, Basis, BoundaryCondition, CoinAngles, CoinField,
    RotatedVariant, Spin, SpinorField, Walk, C64,
};

fn random_state(basis: Basis, ext: (usize, usize), seed: u64) -> SpinorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    let mut f = SpinorField::zeros(basis, ext).unwrap();
    for a in f.amplitudes_mut() {
        *a = [C64::new(u(), u()), C64::new(u(), u())];
    }
    let n = f.norm_sqr().sqrt();
    f.amplitudes_mut().iter_mut().for_each(|a| {
        a[0] /= n;
        a[1] /= n;
    });
    f
}

fn max_diff(a: &SpinorField, b: &SpinorField) -> f64 {
    a.to_flat()
        .iter()
        .zip(b.to_flat())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn zero_angles_shift_diagonally() {
    let coins = CoinField::uniform((4, 4), CoinAngles::default());
    let psi = SpinorField::delta(Basis::Original, (4, 4), 0, 0, Spin::Up).unwrap();
    let out = apply_timestep(&psi, &coins, &mut BoundaryCondition::periodic()).unwrap();
    assert_eq!(out.get(1, 1, Spin::Up), C64::new(1.0, 0.0));
    assert!((out.norm_sqr() - 1.0).abs() < 1e-15);
}

#[test]
fn second_coin_flips_to_down_mover() {
    // R₂ at θ = π/2 maps (1, 0) to (0, 1): the spin-down amplitude is +1.
    let coins = CoinField::uniform((4, 4), CoinAngles::thetas(0.0, PI / 2.0));
    let psi = SpinorField::delta(Basis::Original, (4, 4), 0, 1, Spin::Up).unwrap();
    let out = apply_timestep(&psi, &coins, &mut BoundaryCondition::periodic()).unwrap();
    let v = out.get(1, 0, Spin::Down);
    assert!((v - C64::new(1.0, 0.0)).norm() < 1e-15, "{v}");
    assert!((out.norm_sqr() - 1.0).abs() < 1e-15);
}

#[test]
fn square_and_circle_free_moves() {
    let coins = CoinField::uniform((4, 4), CoinAngles::default());
    let psi = SpinorField::delta(Basis::RotatedSquare, (4, 4), 1, 1, Spin::Up).unwrap();
    let out = apply_timestep_rotated(&psi, &coins, RotatedVariant::Square, &mut BoundaryCondition::periodic()).unwrap();
    assert_eq!(out.get(2, 1, Spin::Up), C64::new(1.0, 0.0));

    let psi = SpinorField::delta(Basis::RotatedCircle, (4, 4), 1, 1, Spin::Down).unwrap();
    let out = apply_timestep_rotated(&psi, &coins, RotatedVariant::Circle, &mut BoundaryCondition::periodic()).unwrap();
    assert_eq!(out.get(0, 1, Spin::Down), C64::new(1.0, 0.0));
}

#[test]
fn extent_and_basis_mismatch_rejected() {
    let coins = CoinField::uniform((4, 4), CoinAngles::default());
    let psi = SpinorField::zeros(Basis::Original, (4, 6)).unwrap();
    assert!(apply_timestep(&psi, &coins, &mut BoundaryCondition::periodic()).is_err());
    let psi = SpinorField::zeros(Basis::RotatedSquare, (4, 4)).unwrap();
    assert!(apply_timestep(&psi, &coins, &mut BoundaryCondition::periodic()).is_err());
}

fn check_basis_change(variant: RotatedVariant, seed: u64) {
    let rot_ext = (8, 8);
    let emb = Embedding {
        variant,
        rotated_extents: rot_ext,
        origin: (0, 0),
        original_extents: (20, 20),
        offset: (10, 2),
    };
    let coins = gen_haar((20, 20), seed);
    let rcoins = emb.rotated_coins(&coins).unwrap();
    // Random amplitudes on interior cells so nothing wraps in either region.
    let full = random_state(variant.basis(), rot_ext, seed + 1);
    let mut psi = SpinorField::zeros(variant.basis(), rot_ext).unwrap();
    for i in 2..6 {
        for j in 2..6 {
            for s in [Spin::Up, Spin::Down] {
                psi.set(i, j, s, full.get(i, j, s));
            }
        }
    }
    let mut bc = BoundaryCondition::periodic();
    let direct = apply_timestep_rotated(&psi, &rcoins, variant, &mut bc).unwrap();
    let embedded = emb.embed(&psi).unwrap();
    let stepped = apply_timestep(&embedded, &coins, &mut bc).unwrap();
    let back = emb.extract(&stepped).unwrap();
    assert!(max_diff(&direct, &back) < 1e-12);
    // Nothing was lost to the other sublattice.
    assert!((stepped.norm_sqr() - back.norm_sqr()).abs() < 1e-12);
}

#[test]
fn rotated_square_matches_original() {
    for seed in 0..3 {
        check_basis_change(RotatedVariant::Square, seed);
    }
}

#[test]
fn rotated_circle_matches_original() {
    for seed in 0..3 {
        check_basis_change(RotatedVariant::Circle, seed);
    }
}

#[test]
fn sublattice_operator_is_involution_and_anticommutes() {
    let coins = gen_haar((6, 8), 11);
    let psi = random_state(Basis::Original, (6, 8), 3);
    let g2 = sublattice_conjugate(&sublattice_conjugate(&psi).unwrap()).unwrap();
    assert_eq!(g2, psi);
    let mut bc = BoundaryCondition::periodic();
    let u = apply_timestep(&psi, &coins, &mut bc).unwrap();
    let gug = sublattice_conjugate(&apply_timestep(&sublattice_conjugate(&psi).unwrap(), &coins, &mut bc).unwrap()).unwrap();
    let worst = u
        .to_flat()
        .iter()
        .zip(gug.to_flat())
        .map(|(a, b)| (a + b).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-12);
}

#[test]
fn dense_u_is_unitary_and_pi_paired() {
    let coins = gen_haar((4, 4), 5);
    let u = dense_build(&coins, DEFAULT_DENSE_CAP).unwrap();
    assert!(u.unitarity_error() < 1e-12);
    let ev = eigenvalues(&u).unwrap();
    let neg: Vec<C64> = ev.iter().map(|z| -z).collect();
    assert!(multiset_distance(&ev, &neg) < 1e-10);
}

#[test]
fn sublattice_partner_eigenvector() {
    let coins = gen_haar((4, 4), 8);
    let u = dense_build(&coins, DEFAULT_DENSE_CAP).unwrap();
    let (vals, vecs) = eigen(&u).unwrap();
    for k in 0..vals.len() {
        let phi = SpinorField::from_flat(Basis::Original, (4, 4), vecs.col(k)).unwrap();
        let gphi = sublattice_conjugate(&phi).unwrap();
        let ug = u.matvec(&gphi.to_flat());
        let res: f64 = ug
            .iter()
            .zip(gphi.to_flat())
            .map(|(a, b)| (a + vals[k] * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res < 1e-10, "eigenpair {k}: residual {res}");
    }
}

#[test]
fn stencil_matches_walk_columns() {
    let coins = gen_haar((4, 6), 21);
    let dense = dense_build(&coins, DEFAULT_DENSE_CAP).unwrap();
    let sparse = step_operator(&coins, Basis::Original).unwrap().to_dense();
    assert!(dense.max_abs_diff(&sparse) < 1e-14);
    for variant in [RotatedVariant::Square, RotatedVariant::Circle] {
        let dense = dense_build_rotated(&coins, variant, DEFAULT_DENSE_CAP).unwrap();
        let sparse = step_operator(&coins, variant.basis()).unwrap().to_dense();
        assert!(dense.max_abs_diff(&sparse) < 1e-14);
    }
}

#[test]
fn u_squared_blocks_are_isospectral() {
    let coins = gen_haar((6, 6), 2);
    let u = dense_build(&coins, DEFAULT_DENSE_CAP).unwrap();
    let u2 = u.matmul(&u).unwrap();
    let ee = sublattice_indices((6, 6), (0, 0));
    let oo = sublattice_indices((6, 6), (1, 1));
    let a = eigenvalues(&u2.select(&ee, &ee)).unwrap();
    let b = eigenvalues(&u2.select(&oo, &oo)).unwrap();
    assert!(multiset_distance(&a, &b) < 1e-9);
    // U² never leaves the sublattice.
    let eo = sublattice_indices((6, 6), (0, 1));
    assert!(u2.select(&eo, &ee).as_slice().iter().all(|z| z.norm() < 1e-14));
}

#[test]
fn absorbing_frame_books_loss() {
    let coins = gen_haar((10, 10), 4);
    let mut walk = Walk::rotated(&coins, RotatedVariant::Square);
    let mut psi = SpinorField::delta(Basis::RotatedSquare, (10, 10), 5, 5, Spin::Up).unwrap();
    let mut bc = BoundaryCondition::absorbing();
    for _ in 0..40 {
        walk.step(&mut psi, &mut bc).unwrap();
        assert!((psi.norm_sqr() + bc.accumulated_loss - 1.0).abs() < 1e-12);
    }
    assert!(bc.accumulated_loss > 0.0);
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

    #[test]
    fn periodic_step_preserves_norm(seed in 0u64..10_000, lx in 1usize..5, ly in 1usize..5) {
        let ext = (2 * lx, 2 * ly);
        let coins = gen_haar(ext, seed);
        let psi = random_state(Basis::Original, ext, seed ^ 0xabc);
        let out = apply_timestep(&psi, &coins, &mut BoundaryCondition::periodic()).unwrap();
        proptest::prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let rot = SpinorField::from_flat(Basis::RotatedSquare, ext, &psi.to_flat()).unwrap();
        let out = apply_timestep_rotated(&rot, &coins, RotatedVariant::Square, &mut BoundaryCondition::periodic()).unwrap();
        proptest::prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn anticommutes_with_sublattice_operator(seed in 0u64..10_000) {
        let coins = gen_haar((4, 6), seed);
        let psi = random_state(Basis::Original, (4, 6), seed + 7);
        let mut bc = BoundaryCondition::periodic();
        let u = apply_timestep(&psi, &coins, &mut bc).unwrap();
        let g = sublattice_conjugate(&psi).unwrap();
        let gug = sublattice_conjugate(&apply_timestep(&g, &coins, &mut bc).unwrap()).unwrap();
        for (a, b) in u.to_flat().iter().zip(gug.to_flat()) {
            proptest::prop_assert!((a + b).norm() < 1e-12);
        }
    }

    #[test]
    fn support_grows_at_most_one_site_per_step(seed in 0u64..10_000, steps in 1usize..6) {
        let ext = (16, 16);
        let coins = gen_haar(ext, seed);
        let mut psi = SpinorField::delta(Basis::Original, ext, 8, 8, Spin::Down).unwrap();
        let mut walk = Walk::original(&coins);
        let mut bc = BoundaryCondition::periodic();
        for _ in 0..steps {
            walk.step(&mut psi, &mut bc).unwrap();
        }
        for x in 0..16usize {
            for y in 0..16usize {
                let d = (x as i64 - 8).abs().max((y as i64 - 8).abs()) as usize;
                if d > steps {
                    proptest::prop_assert_eq!(psi.get(x, y, Spin::Up), C64::new(0.0, 0.0));
                    proptest::prop_assert_eq!(psi.get(x, y, Spin::Down), C64::new(0.0, 0.0));
                }
            }
        }
    }
}
