mod common;

use common::grid_lp_bound;
use moment_sentinel::detector::{
    classify, fit, neighborhood, score, score_batch, FitOptions, Neighborhood, Shape, Verdict,
};
use moment_sentinel::eval::{gen_pshape, Distribution};
use moment_sentinel::multiindex::MultiIndex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};

fn normal_sample(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = Normal::new(0.0, 1.0).unwrap();
    (0..n).map(|_| vec![d.sample(&mut rng)]).collect()
}

#[test]
fn whitened_fit_has_standard_low_moments() {
    let data = gen_pshape(500, 2);
    let m = fit(&data, FitOptions::new(6)).unwrap();
    let g = m.gamma();
    assert_eq!(g.len(), 28);
    assert_eq!(g.mass(), 1.0);
    for (a, v) in g.iter() {
        let e = a.exponents();
        match (a.degree(), e) {
            (1, _) => assert!(v.abs() < 1e-12),
            (2, [2, 0]) | (2, [0, 2]) => assert!((v - 1.0).abs() < 1e-12),
            (2, [1, 1]) => assert!(v.abs() < 1e-12),
            _ => {}
        }
    }
    assert_eq!(m.relaxation_order(), 3);
}

#[test]
fn normal_model_orders_center_above_far_point() {
    let data = normal_sample(300, 4);
    let m = fit(&data, FitOptions::new(4).whiten(false)).unwrap();
    let g = m.gamma().values().to_vec();
    let r = m.neighborhood().radius;
    let mut prev = f64::INFINITY;
    for x in [0.0, 10.0] {
        let rho = score(&m, &[x]).unwrap().rho;
        // The grid contains both query points, so the LP sees the same set.
        let oracle = grid_lp_bound(&g, |u| (u - x).abs() <= r, 20.0, 4001).unwrap();
        assert!((rho - oracle).abs() <= 2e-2, "x={x}: {rho} vs {oracle}");
        assert!(rho < prev);
        prev = rho;
    }
}

#[test]
fn dirac_trained_model_gives_full_mass() {
    let data = vec![vec![0.4, -1.3]; 25];
    let m = fit(&data, FitOptions::new(4).whiten(false).radius(0.1)).unwrap();
    let s = score(&m, &[0.4, -1.3]).unwrap();
    assert!(s.is_optimal());
    assert!((s.rho - 1.0).abs() < 1e-6, "{}", s.rho);
    assert_eq!(classify(&m, &[0.4, -1.3], 0.5).unwrap(), Verdict::Normal);
}

#[test]
fn scores_are_normalized_and_deterministic() {
    let data = gen_pshape(200, 5);
    let m = fit(&data, FitOptions::new(4)).unwrap();
    let queries: Vec<Vec<f64>> = (0..25)
        .map(|i| vec![-2.5 + 0.2 * i as f64, 4.0 - 0.17 * i as f64])
        .collect();
    let a = score_batch(&m, &queries).unwrap();
    let b = score_batch(&m, &queries).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(x.is_optimal());
        assert!((-1e-6..=1.0 + 1e-6).contains(&x.rho), "{}", x.rho);
        assert!((x.rho - y.rho).abs() <= 1e-9);
    }
}

#[test]
fn batch_matches_single_scores_in_order() {
    let data = normal_sample(100, 6);
    let m = fit(&data, FitOptions::new(2)).unwrap();
    let q: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64 * 0.5 - 3.0]).collect();
    let batch = score_batch(&m, &q).unwrap();
    for (x, s) in q.iter().zip(&batch) {
        assert_eq!(score(&m, x).unwrap().rho, s.rho);
    }
}

#[test]
fn larger_radius_never_lowers_the_bound() {
    let data = gen_pshape(200, 7);
    let m = fit(&data, FitOptions::new(4)).unwrap();
    for x in [[0.0, 1.0], [1.5, 3.5], [-1.0, 0.5]] {
        let mut prev = -1.0;
        for r in [0.0, 0.001, 0.01, 0.1, 0.5] {
            let rho = score(
                &m.with_neighborhood(Neighborhood {
                    shape: Shape::Ball,
                    radius: r,
                })
                .unwrap(),
                &x,
            )
            .unwrap()
            .rho;
            assert!(rho >= prev - 1e-6, "{x:?} r={r}: {rho} < {prev}");
            prev = rho;
        }
    }
}

#[test]
fn more_moments_tighten_the_bound() {
    let data = gen_pshape(300, 8);
    let high = fit(&data, FitOptions::new(6)).unwrap();
    let low = high.truncated(4).unwrap();
    let q: Vec<Vec<f64>> = (0..10)
        .map(|i| vec![-2.0 + 0.4 * i as f64, 0.4 * i as f64])
        .collect();
    let (sh, sl) = (
        score_batch(&high, &q).unwrap(),
        score_batch(&low, &q).unwrap(),
    );
    for (h, l) in sh.iter().zip(&sl) {
        assert!(h.rho <= l.rho + 1e-6, "{} > {}", h.rho, l.rho);
    }
}

#[test]
fn box_neighborhood_scores() {
    let data = gen_pshape(200, 9);
    let m = fit(&data, FitOptions::new(2).shape(Shape::Box).radius(0.05)).unwrap();
    let set = neighborhood(&m, &[0.0, 0.0]).unwrap();
    assert_eq!(set.constraints().len(), 4);
    assert!(set.constraints().iter().all(|g| g.degree() == 1));
    let s = score(&m, &[0.0, 0.0]).unwrap();
    assert!(s.is_optimal() && (0.0..=1.0 + 1e-6).contains(&s.rho));
    // A box contains the inscribed ball.
    let ball = m
        .with_neighborhood(Neighborhood {
            shape: Shape::Ball,
            radius: 0.05,
        })
        .unwrap();
    assert!(score(&ball, &[0.0, 0.0]).unwrap().rho <= s.rho + 1e-6);
}

#[test]
fn neighborhood_lives_in_whitened_coordinates() {
    let data = gen_pshape(100, 10);
    let m = fit(&data, FitOptions::new(2).radius(0.1)).unwrap();
    let x = [0.3, 2.0];
    let set = neighborhood(&m, &x).unwrap();
    let c = m.whitener().unwrap().whiten(&x).unwrap();
    assert!(set.contains(&c));
    let g = &set.constraints()[0];
    assert!((g.coefficient(&MultiIndex::new(vec![2, 0])) + 1.0).abs() < 1e-12);
    assert_eq!(Distribution::Pshape.dim(), 2);
}

#[test]
fn centered_scoring_matches_direct_bound() {
    use moment_sentinel::relaxation::upper_bound;
    let data = gen_pshape(200, 11);
    let m = fit(&data, FitOptions::new(4).radius(0.3)).unwrap();
    for x in [[0.0, 1.0], [1.0, 3.0]] {
        let set = neighborhood(&m, &x).unwrap();
        let direct = upper_bound(m.gamma(), &set, m.relaxation_order()).unwrap();
        let s = score(&m, &x).unwrap();
        assert!(
            (direct.rho - s.rho).abs() < 1e-6,
            "{x:?}: {} vs {}",
            direct.rho,
            s.rho
        );
    }
}
