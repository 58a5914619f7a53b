use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use splitwalk::disorder::{gen_haar, FixedAngles};
use splitwalk::linalg::multiset_distance;
use splitwalk::spectral::{
    block_eigenvalues, block_spacings, classify_statistics, reference_cdf, spacings_from_block, window_spacings, Block,
    SpacingEnsemble, SpacingLaw, Statistics, DEFAULT_BLOCK_CAP,
};
use splitwalk::stats::{ks_one_sample, ks_two_sample};
use splitwalk::DisorderSpec;

#[test]
fn paired_blocks_are_isospectral() {
    let coins = gen_haar((12, 10), 21);
    for (a, b) in [(Block::SquareEe, Block::SquareOo), (Block::CircleEo, Block::CircleOe)] {
        let ea = block_eigenvalues(&coins, a, DEFAULT_BLOCK_CAP).unwrap();
        let eb = block_eigenvalues(&coins, b, DEFAULT_BLOCK_CAP).unwrap();
        assert!(multiset_distance(&ea, &eb) < 1e-9, "{a:?} vs {b:?}");
    }
}

#[test]
fn spectral_windows_share_statistics() {
    // With maximal phase disorder every quasienergy window looks alike.
    let coins = DisorderSpec::phase(FixedAngles::thetas(0.2 * PI, 0.4 * PI), 3)
        .generate((40, 40))
        .unwrap();
    let eigs = block_eigenvalues(&coins, Block::SquareEe, DEFAULT_BLOCK_CAP).unwrap();
    let w: Vec<Vec<f64>> = (0..4)
        .map(|k| window_spacings(&eigs, k as f64 * PI / 4.0, (k + 1) as f64 * PI / 4.0))
        .collect();
    for a in 0..4 {
        for b in a + 1..4 {
            let ks = ks_two_sample(&w[a], &w[b]);
            assert!(ks.p_value > 0.01, "windows {a},{b}: {ks:?}");
        }
    }
}

#[test]
fn square_and_circle_blocks_agree() {
    let coins = gen_haar((40, 40), 9);
    let sq = block_spacings(&coins, Block::SquareEe, DEFAULT_BLOCK_CAP).unwrap();
    let ci = block_spacings(&coins, Block::CircleEo, DEFAULT_BLOCK_CAP).unwrap();
    let ks = ks_two_sample(&sq.spacings, &ci.spacings);
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn mean_spacing_is_one() {
    let coins = gen_haar((24, 32), 4);
    let ens = block_spacings(&coins, Block::SquareOo, DEFAULT_BLOCK_CAP).unwrap();
    assert_eq!(ens.n, 24 * 32);
    assert!((ens.mean() - 1.0).abs() <= 3.0 / (2.0 * ens.n as f64).sqrt());
}

#[test]
fn haar_block_is_gue_like() {
    let coins = gen_haar((40, 40), 12);
    let ens = block_spacings(&coins, Block::SquareEe, DEFAULT_BLOCK_CAP).unwrap();
    let c = classify_statistics(&ens, 0.0).unwrap();
    assert_eq!(c.class, Statistics::Gue, "{c:?}");
}

#[test]
fn poisson_levels_classified_poisson() {
    // Independent uniform levels on the circle.
    let n = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let eigs: Vec<splitwalk::C64> = (0..n)
        .map(|_| {
            let x = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            splitwalk::C64::from_polar(1.0, 2.0 * PI * x - PI)
        })
        .collect();
    let ens = spacings_from_block(&eigs, 1e-12).unwrap();
    let c = classify_statistics(&ens, 0.0).unwrap();
    assert_eq!(c.class, Statistics::Poisson, "{c:?}");
    let ks = ks_one_sample(&ens.spacings, |s| reference_cdf(SpacingLaw::Poisson, s));
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn pooling_concatenates() {
    let a = SpacingEnsemble {
        spacings: vec![1.0, 2.0],
        block: Some(Block::SquareEe),
        n: 2,
    };
    let b = SpacingEnsemble {
        spacings: vec![0.5],
        block: Some(Block::CircleEo),
        n: 1,
    };
    let p = SpacingEnsemble::pool(&[a.clone(), b]);
    assert_eq!(p.spacings, vec![1.0, 2.0, 0.5]);
    assert_eq!(p.block, None);
    assert_eq!(SpacingEnsemble::pool(&[a.clone(), a]).block, Some(Block::SquareEe));
}

#[test]
fn cap_is_enforced() {
    let coins = gen_haar((8, 8), 0);
    assert!(block_eigenvalues(&coins, Block::SquareEe, 32).is_err());
}
